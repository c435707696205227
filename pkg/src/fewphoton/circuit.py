"""Linear-optical networks as DAGs of two-port elements.

A circuit is a set of elements (beam splitters, mirrors, polarizing beam
splitters, phase shifters) connected by wires between output and input
ports, with named source ports and named terminals (detectors or loss
sinks).  Builders for the three canonical setups live here, together
with validation, the single-photon transfer matrix, and a JSON file
format (``format: 1``).

Beam-splitter convention: transmission multiplies the amplitude by t,
reflection by i*r, with t = sqrt(1-R), r = sqrt(R).
"""

from __future__ import annotations

import cmath
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .amplitude import I, INV_SQRT2, I_INV_SQRT2, ONE, ZERO

BS = "bs"
MIRROR = "mirror"
PBS = "pbs"
PHASE = "phase"

_KINDS = (BS, MIRROR, PBS, PHASE)

# Reflectivity values whose amplitudes stay inside Z[i, 1/sqrt2].
_EXACT_REFLECTIVITIES = {Fraction(0), Fraction(1, 2), Fraction(1)}


class CircuitError(ValueError):
    """Structurally invalid circuit or out-of-range parameter."""


@dataclass(frozen=True)
class Element:
    id: str
    kind: str
    reflectivity: Fraction | float | None = None  # BS only
    phase: float | None = None  # PhaseShifter only

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise CircuitError(f"unknown element kind {self.kind!r}")
        if self.kind == BS:
            r = self.reflectivity
            if r is None or not (0 <= float(r) <= 1):
                raise CircuitError(
                    f"element {self.id}: reflectivity must be in [0, 1], got {r!r}"
                )
        if self.kind == PHASE and self.phase is None:
            raise CircuitError(f"element {self.id}: phase shifter needs a phase")

    @property
    def n_in(self) -> int:
        return 1 if self.kind in (PHASE, MIRROR) else 2

    @property
    def n_out(self) -> int:
        return 1 if self.kind in (PHASE, MIRROR) else 2

    def in_ports(self) -> list[str]:
        return [f"{self.id}:in{k}" for k in range(self.n_in)]

    def out_ports(self) -> list[str]:
        return [f"{self.id}:out{k}" for k in range(self.n_out)]

    def is_exact(self) -> bool:
        if self.kind == BS:
            return Fraction(self.reflectivity) in _EXACT_REFLECTIVITIES \
                if isinstance(self.reflectivity, (int, Fraction)) \
                else self.reflectivity in (0.0, 0.5, 1.0)
        return self.kind in (MIRROR, PBS)

    def amplitudes(self, exact: bool):
        """(t, i*r) factors for this element, exact or complex."""
        if self.kind != BS:
            raise CircuitError(f"{self.kind} has no scalar t/r decomposition")
        r_val = float(self.reflectivity)
        if exact:
            frac = Fraction(self.reflectivity) if not isinstance(
                self.reflectivity, float) else Fraction(r_val)
            if frac == 0:
                return ONE, ZERO
            if frac == 1:
                return ZERO, I
            if frac == Fraction(1, 2):
                return INV_SQRT2, I_INV_SQRT2
            raise CircuitError(f"reflectivity {self.reflectivity} is not exact-capable")
        return complex(math.sqrt(1.0 - r_val)), 1j * math.sqrt(r_val)


@dataclass(frozen=True)
class Terminal:
    port: str  # element output port feeding this terminal
    kind: str  # "detector" or "loss"
    resolving: bool = False  # detector distinguishes internal labels

    def __post_init__(self):
        if self.kind not in ("detector", "loss"):
            raise CircuitError(f"terminal kind must be detector or loss, got {self.kind!r}")


@dataclass
class ValidationReport:
    ok: bool
    errors: list[str] = field(default_factory=list)

    def raise_if_invalid(self):
        if not self.ok:
            raise CircuitError("; ".join(self.errors))


@dataclass
class Circuit:
    """Immutable after construction; treat fields as read-only."""

    elements: list[Element]
    wires: dict[str, str]  # out_port -> in_port
    inputs: dict[str, str]  # source name -> in_port
    terminals: dict[str, Terminal]  # terminal name -> Terminal

    def element(self, elem_id: str) -> Element:
        for el in self.elements:
            if el.id == elem_id:
                return el
        raise CircuitError(f"no element {elem_id!r}")

    def is_exact(self) -> bool:
        return all(el.is_exact() for el in self.elements)

    def detectors(self) -> list[str]:
        return [n for n, t in self.terminals.items() if t.kind == "detector"]

    def loss_terminals(self) -> list[str]:
        return [n for n, t in self.terminals.items() if t.kind == "loss"]

    def terminal_order(self) -> list[str]:
        return self.detectors() + self.loss_terminals()

    def input_order(self) -> list[str]:
        return list(self.inputs)

    # -- structure ------------------------------------------------------

    def topological_order(self) -> list[Element]:
        """Elements ordered so wires only go forward; raises on cycles."""
        owner = {}
        for el in self.elements:
            for p in el.in_ports():
                owner[p] = el.id
        deps: dict[str, set[str]] = {el.id: set() for el in self.elements}
        for out_port, in_port in self.wires.items():
            src = out_port.split(":")[0]
            dst = owner.get(in_port)
            if dst is not None:
                deps[dst].add(src)
        order, done = [], set()
        ready = [el for el in self.elements if not deps[el.id]]
        pending = [el for el in self.elements if deps[el.id]]
        while ready:
            el = ready.pop(0)
            order.append(el)
            done.add(el.id)
            still = []
            for other in pending:
                if deps[other.id] <= done:
                    ready.append(other)
                else:
                    still.append(other)
            pending = still
        if len(order) != len(self.elements):
            raise CircuitError(
                "circuit contains a wire cycle through elements "
                + ", ".join(el.id for el in pending)
            )
        return order


def validate(circuit: Circuit) -> ValidationReport:
    """Check acyclicity, wiring completeness, and terminal reachability."""
    errors: list[str] = []
    ids = [el.id for el in circuit.elements]
    if len(set(ids)) != len(ids):
        errors.append("duplicate element ids")
    in_ports = {p for el in circuit.elements for p in el.in_ports()}
    out_ports = {p for el in circuit.elements for p in el.out_ports()}

    fed: dict[str, list[str]] = {}
    for out_port, in_port in circuit.wires.items():
        if out_port not in out_ports:
            errors.append(f"wire from unknown output port {out_port}")
        if in_port not in in_ports:
            errors.append(f"wire into unknown input port {in_port}")
        fed.setdefault(in_port, []).append(f"wire from {out_port}")
    for name, port in circuit.inputs.items():
        if port not in in_ports:
            errors.append(f"input {name} attached to unknown port {port}")
        fed.setdefault(port, []).append(f"input {name}")
    for port, feeders in fed.items():
        if len(feeders) > 1:
            errors.append(f"input port {port} fed more than once ({'; '.join(feeders)})")
    # unfed input ports are implicit vacuum sources

    used_out: dict[str, list[str]] = {}
    for out_port in circuit.wires:
        used_out.setdefault(out_port, []).append("wire")
    for name, term in circuit.terminals.items():
        if term.port not in out_ports:
            errors.append(f"terminal {name} attached to unknown port {term.port}")
        used_out.setdefault(term.port, []).append(f"terminal {name}")
    for port, users in used_out.items():
        if len(users) > 1:
            errors.append(f"output port {port} used more than once ({'; '.join(users)})")
    for port in out_ports:
        if port not in used_out:
            errors.append(f"dangling output port {port}")

    try:
        circuit.topological_order()
    except CircuitError as exc:
        errors.append(str(exc))

    if not errors:
        reachable = _reachable_ports(circuit)
        for name, term in circuit.terminals.items():
            if term.port not in reachable:
                errors.append(f"terminal {name} unreachable from any input")

    return ValidationReport(ok=not errors, errors=errors)


def _reachable_ports(circuit: Circuit) -> set[str]:
    by_in: dict[str, Element] = {}
    for el in circuit.elements:
        for p in el.in_ports():
            by_in[p] = el
    seen: set[str] = set()
    frontier = list(circuit.inputs.values())
    while frontier:
        port = frontier.pop()
        if port in seen:
            continue
        seen.add(port)
        el = by_in.get(port)
        if el is None:
            continue
        for out in el.out_ports():
            if out in seen:
                continue
            seen.add(out)
            nxt = circuit.wires.get(out)
            if nxt is not None:
                frontier.append(nxt)
    return seen


# ---------------------------------------------------------------------------
# Single-photon propagation


def propagate(circuit: Circuit, source: str, label: str = "H",
              exact: bool | None = None) -> dict[str, object]:
    """Amplitudes at every terminal for one photon entering ``source``.

    ``label`` matters only for circuits containing polarizing beam
    splitters (which transmit H and reflect everything else).
    """
    if exact is None:
        exact = circuit.is_exact()
    one = ONE if exact else (1 + 0j)
    zero = ZERO if exact else 0j
    amps: dict[str, object] = {circuit.inputs[source]: one}
    result = {name: zero for name in circuit.terminals}
    term_by_port = {t.port: name for name, t in circuit.terminals.items()}

    def emit(out_port, value):
        if out_port in term_by_port:
            result[term_by_port[out_port]] = result[term_by_port[out_port]] + value
        else:
            dst = circuit.wires[out_port]
            amps[dst] = amps.get(dst, zero) + value

    for el in circuit.topological_order():
        if el.kind == PHASE:
            a = amps.pop(f"{el.id}:in0", zero)
            factor = cmath.exp(1j * el.phase)
            emit(f"{el.id}:out0", a * factor)
            continue
        if el.kind == MIRROR:
            a = amps.pop(f"{el.id}:in0", zero)
            emit(f"{el.id}:out0", a * (I if exact else 1j))
            continue
        a0 = amps.pop(f"{el.id}:in0", zero)
        a1 = amps.pop(f"{el.id}:in1", zero)
        if el.kind == PBS:
            if label == "H":
                emit(f"{el.id}:out0", a0)
                emit(f"{el.id}:out1", a1)
            else:
                emit(f"{el.id}:out1", a0 * (I if exact else 1j))
                emit(f"{el.id}:out0", a1 * (I if exact else 1j))
            continue
        t, ir = el.amplitudes(exact)
        emit(f"{el.id}:out0", a0 * t + a1 * ir)
        emit(f"{el.id}:out1", a1 * t + a0 * ir)
    return result


def transfer_matrix(circuit: Circuit, label: str = "H", exact: bool | None = None):
    """Terminal x input matrix of single-photon amplitudes.

    Returns (rows, cols, entries) where entries[terminal][input] is an
    amplitude (ExactAmp in exact mode, complex otherwise).  Columns are
    orthonormal because every element map is unitary and all light ends
    at a terminal.
    """
    rows = circuit.terminal_order()
    cols = circuit.input_order()
    entries = {t: {} for t in rows}
    for src in cols:
        col = propagate(circuit, src, label=label, exact=exact)
        for t in rows:
            entries[t][src] = col[t]
    return rows, cols, entries


def transfer_matrix_array(circuit: Circuit, label: str = "H"):
    """Complex numpy array of the transfer matrix (rows, cols, array)."""
    import numpy as np

    rows, cols, entries = transfer_matrix(circuit, label=label, exact=False)
    arr = np.array([[complex(entries[t][s]) for s in cols] for t in rows])
    return rows, cols, arr


# ---------------------------------------------------------------------------
# Canonical builders


@dataclass(frozen=True)
class HardyParams:
    """Reflectivities of the first, central, outer-middle, and final BSs."""

    R0: Fraction | float = Fraction(1, 2)
    Rc: Fraction | float = Fraction(1, 2)
    Rm: Fraction | float = Fraction(1, 2)
    Rf: Fraction | float = Fraction(1, 2)

    def __post_init__(self):
        for name in ("R0", "Rc", "Rm", "Rf"):
            v = float(getattr(self, name))
            if not (0.0 <= v <= 1.0):
                raise CircuitError(f"{name} = {v} outside [0, 1]")


def build_mzi() -> Circuit:
    """Balanced Mach-Zehnder interferometer: 2 BSs, 2 mirrors, D1/D2."""
    half = Fraction(1, 2)
    elements = [
        Element("bs1", BS, half),
        Element("m1", MIRROR),
        Element("m2", MIRROR),
        Element("bs2", BS, half),
    ]
    wires = {
        "bs1:out0": "m1:in0",  # upper arm (transmitted)
        "bs1:out1": "m2:in0",  # lower arm (reflected)
        "m1:out0": "bs2:in0",
        "m2:out0": "bs2:in1",
    }
    inputs = {"src": "bs1:in0"}
    terminals = {
        "D1": Terminal("bs2:out1", "detector"),
        "D2": Terminal("bs2:out0", "detector"),
    }
    return Circuit(elements, wires, inputs, terminals)


def build_hom() -> Circuit:
    """A single 50:50 BS with two inputs and two detectors."""
    elements = [Element("bs", BS, Fraction(1, 2))]
    inputs = {"L": "bs:in0", "R": "bs:in1"}
    terminals = {
        "L": Terminal("bs:out0", "detector"),
        "R": Terminal("bs:out1", "detector"),
    }
    return Circuit(elements, {}, inputs, terminals)


def build_double_mzi(params: HardyParams | None = None) -> Circuit:
    """Two MZIs sharing a central BS: 7 BSs, detectors D1-D4, loss_L/loss_R.

    The outer-middle BSs replace the MZI mirrors; their transmitted
    outputs are the loss terminals.  The central BS couples the inner
    arms: reflection keeps a photon on its own side, transmission
    crosses it over.
    """
    p = params or HardyParams()
    elements = [
        Element("bs0_L", BS, p.R0),
        Element("bs0_R", BS, p.R0),
        Element("bsm_L", BS, p.Rm),
        Element("bsm_R", BS, p.Rm),
        Element("bsc", BS, p.Rc),
        Element("bsf_L", BS, p.Rf),
        Element("bsf_R", BS, p.Rf),
    ]
    wires = {
        # left MZI
        "bs0_L:out0": "bsm_L:in0",  # outer arm (transmitted at bs0)
        "bs0_L:out1": "bsc:in0",    # inner arm (reflected at bs0)
        "bsm_L:out1": "bsf_L:in0",  # outer arm reflected back in
        "bsc:out1": "bsf_L:in1",    # inner arm reflected (stays left)
        # right MZI (mirror image)
        "bs0_R:out0": "bsm_R:in0",
        "bs0_R:out1": "bsc:in1",
        "bsm_R:out1": "bsf_R:in0",
        "bsc:out0": "bsf_R:in1",    # transmission crosses sides
    }
    inputs = {"L": "bs0_L:in0", "R": "bs0_R:in0"}
    terminals = {
        "D1": Terminal("bsf_L:out1", "detector"),
        "D2": Terminal("bsf_L:out0", "detector"),
        "D3": Terminal("bsf_R:out0", "detector"),
        "D4": Terminal("bsf_R:out1", "detector"),
        "loss_L": Terminal("bsm_L:out0", "loss"),
        "loss_R": Terminal("bsm_R:out0", "loss"),
    }
    return Circuit(elements, wires, inputs, terminals)


# ---------------------------------------------------------------------------
# File format (format: 1)

_SQRT2_TERM = re.compile(
    r"^\s*(?P<sign1>[+-]?)\s*(?P<first>\d+(?:/\d+)?|sqrt2)\s*"
    r"(?:(?P<sign2>[+-])\s*(?P<second>\d+(?:/\d+)?|sqrt2)\s*)?$"
)


def parse_reflectivity(value) -> Fraction | float:
    """Parse "1/2", "2-sqrt2", "sqrt2-1", or a plain number."""
    if isinstance(value, (int, float, Fraction)):
        return Fraction(value) if isinstance(value, int) else value
    text = str(value).strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    match = _SQRT2_TERM.match(text)
    if not match:
        raise CircuitError(f"cannot parse reflectivity {value!r}")

    def term(tok):
        return math.sqrt(2.0) if tok == "sqrt2" else float(Fraction(tok))

    total = term(match["first"]) * (-1.0 if match["sign1"] == "-" else 1.0)
    if match["second"]:
        total += term(match["second"]) * (-1.0 if match["sign2"] == "-" else 1.0)
    return total


def format_reflectivity(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def to_dict(circuit: Circuit) -> dict:
    elements = []
    for el in circuit.elements:
        entry: dict = {"id": el.id, "kind": el.kind}
        if el.kind == BS:
            entry["reflectivity"] = format_reflectivity(el.reflectivity)
        if el.kind == PHASE:
            entry["phase"] = el.phase
        elements.append(entry)
    terminals = {
        name: {"port": t.port, "kind": t.kind, **({"resolving": True} if t.resolving else {})}
        for name, t in circuit.terminals.items()
    }
    return {
        "format": 1,
        "elements": elements,
        "wires": dict(circuit.wires),
        "inputs": dict(circuit.inputs),
        "terminals": terminals,
    }


def from_dict(doc: dict) -> Circuit:
    if doc.get("format") != 1:
        raise CircuitError(f"unsupported circuit format {doc.get('format')!r}")
    elements = []
    for entry in doc["elements"]:
        kind = entry["kind"]
        elements.append(
            Element(
                entry["id"],
                kind,
                parse_reflectivity(entry["reflectivity"]) if kind == BS else None,
                float(entry["phase"]) if kind == PHASE else None,
            )
        )
    terminals = {
        name: Terminal(t["port"], t["kind"], bool(t.get("resolving", False)))
        for name, t in doc["terminals"].items()
    }
    circuit = Circuit(elements, dict(doc["wires"]), dict(doc["inputs"]), terminals)
    validate(circuit).raise_if_invalid()
    return circuit


def save(circuit: Circuit, path: str):
    with open(path, "w") as fh:
        json.dump(to_dict(circuit), fh, indent=2)


def load(path: str) -> Circuit:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CircuitError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    try:
        return from_dict(doc)
    except KeyError as exc:
        raise CircuitError(f"{path}: missing key {exc}") from exc
