"""Input-state specifications shared by both engines."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .amplitude import to_complex

H = "H"
V = "V"


@dataclass(frozen=True)
class Vacuum:
    pass


@dataclass(frozen=True)
class SinglePhoton:
    """One photon with an internal (e.g. polarization) state.

    ``internal`` maps basis labels to amplitudes; it must be unit norm.
    Integer/exact coefficients keep downstream arithmetic exact.
    """

    internal: tuple[tuple[str, object], ...] = ((H, 1),)

    @classmethod
    def of(cls, internal: dict) -> "SinglePhoton":
        items = tuple((label, coeff) for label, coeff in internal.items() if coeff)
        return cls(items)

    def components(self) -> dict[str, object]:
        return dict(self.internal)

    def check_normalized(self, tol: float = 1e-12):
        norm = sum(abs(to_complex(c)) ** 2 for _, c in self.internal)
        if abs(norm - 1.0) > tol:
            raise ValueError(f"internal state norm^2 = {norm}, expected 1")


@dataclass(frozen=True)
class Coherent:
    alpha: complex = 0.1
    n_max: int = 2
    label: str = H

    def __post_init__(self):
        if abs(self.alpha) > 1:
            raise ValueError("|alpha| must be <= 1 for a weak coherent state")
        if self.n_max not in (2, 3, 4):
            raise ValueError("n_max must be 2, 3, or 4")


Source = Vacuum | SinglePhoton | Coherent
InputSpec = dict[str, Source]  # port name -> source


def make_diagonal(overlap) -> SinglePhoton:
    """Photon whose inner product with an H photon equals ``overlap``.

    Implements the decomposition d = C*h + sqrt(1-|C|^2)*v, the standard
    way of dialing in partial distinguishability.
    """
    mag = abs(to_complex(overlap))
    if mag > 1 + 1e-12:
        raise ValueError(f"|overlap| = {mag} exceeds 1")
    internal: dict[str, object] = {}
    if overlap != 0:
        internal[H] = overlap
    residual = 1.0 - min(mag * mag, 1.0)
    if residual > 0.0:
        # keep an integer coefficient for the fully distinguishable case
        # so downstream arithmetic can stay exact
        internal[V] = 1 if residual == 1.0 else math.sqrt(residual)
    return SinglePhoton.of(internal)


def overlap(photon_a: SinglePhoton, photon_b: SinglePhoton) -> complex:
    """Inner product <a|b> of two internal states."""
    a = photon_a.components()
    b = photon_b.components()
    total = 0j
    for label, coeff in b.items():
        if label in a:
            total += to_complex(a[label]).conjugate() * to_complex(coeff)
    return total


def single_photon_pair(overlap_value=1) -> list[SinglePhoton]:
    """The canonical two-photon input: one H photon, one diagonal photon."""
    return [SinglePhoton.of({H: 1}), make_diagonal(overlap_value)]


# ---------------------------------------------------------------------------
# File format for the input block of circuit files


def source_to_dict(source: Source) -> dict:
    if isinstance(source, Vacuum):
        return {"kind": "vacuum"}
    if isinstance(source, SinglePhoton):
        internal = {
            label: [to_complex(c).real, to_complex(c).imag]
            for label, c in source.internal
        }
        return {"kind": "single", "internal": internal}
    if isinstance(source, Coherent):
        return {
            "kind": "coherent",
            "alpha": [source.alpha.real, source.alpha.imag],
            "n_max": source.n_max,
        }
    raise TypeError(f"not a source: {source!r}")


def source_from_dict(doc: dict) -> Source:
    kind = doc["kind"]
    if kind == "vacuum":
        return Vacuum()
    if kind == "single":
        internal = {
            label: complex(re, im) for label, (re, im) in doc["internal"].items()
        }
        photon = SinglePhoton.of(internal)
        photon.check_normalized()
        return photon
    if kind == "coherent":
        re, im = doc["alpha"]
        return Coherent(complex(re, im), int(doc.get("n_max", 2)))
    raise ValueError(f"unknown source kind {kind!r}")
