"""Few-photon linear-optical interference simulator.

Two independent engines compute detection statistics for small
beam-splitter networks: a diagrammatic path-counting engine and a
second-quantized Fock-polynomial oracle.  Amplitudes stay exact in
Z[i, 1/sqrt(2)] whenever the reflectivities allow it.
"""

from .amplitude import CapacityError, ExactAmp
from .circuit import (
    Circuit,
    CircuitError,
    Element,
    HardyParams,
    Terminal,
    build_double_mzi,
    build_hom,
    build_mzi,
    transfer_matrix,
    validate,
)
from .outcomes import Outcome, OutcomeTable
from .sources import Coherent, SinglePhoton, Vacuum, make_diagonal

__all__ = [
    "CapacityError",
    "ExactAmp",
    "Circuit",
    "CircuitError",
    "Element",
    "HardyParams",
    "Terminal",
    "build_double_mzi",
    "build_hom",
    "build_mzi",
    "transfer_matrix",
    "validate",
    "Outcome",
    "OutcomeTable",
    "Coherent",
    "SinglePhoton",
    "Vacuum",
    "make_diagonal",
]

__version__ = "0.1.0"
