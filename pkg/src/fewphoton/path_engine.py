"""Diagrammatic path-counting engine.

Enumerates every route a photon can take through the network, composes
the per-step factors (t on transmission, i*r on reflection, so a path
picks up exactly i**N_r in phase), and symmetrizes over the possible
assignments of photons to paths to get outcome amplitudes.  Partial
distinguishability enters through the photons' internal states: paths
are tracked per internal label and amplitudes only interfere when they
lead to the same final (terminal, label) occupation.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

from .amplitude import ExactAmp, I, abs_sq, sqrt_factorial, to_complex, to_float
from .circuit import MIRROR, PBS, PHASE, Circuit, CircuitError
from .outcomes import Outcome, OutcomeTable
from .sources import H, SinglePhoton, Vacuum, make_diagonal

TRANSMIT = "transmit"
REFLECT = "reflect"
SHIFT = "shift"


@dataclass(frozen=True)
class PathTrace:
    source: str
    steps: tuple[tuple[str, str], ...]  # (element id, action)
    terminal: str
    amplitude: object  # ExactAmp or complex

    @property
    def n_reflections(self) -> int:
        return sum(1 for _, action in self.steps if action == REFLECT)

    def to_dict(self) -> dict:
        amp = self.amplitude
        row = {
            "source": self.source,
            "steps": [list(s) for s in self.steps],
            "n_reflections": self.n_reflections,
            "terminal": self.terminal,
            "amplitude": [to_complex(amp).real, to_complex(amp).imag],
        }
        if isinstance(amp, ExactAmp):
            row["amplitude_exact"] = list(amp.to_tuple())
        return row


def _branches(element, in_index: int, label: str, exact: bool):
    """(out_index, action, factor) continuations for one element input."""
    if element.kind == PHASE:
        return [(0, SHIFT, cmath.exp(1j * element.phase))]
    if element.kind == MIRROR:
        return [(0, REFLECT, I if exact else 1j)]
    if element.kind == PBS:
        if label == H:
            return [(in_index, TRANSMIT, ExactAmp(1) if exact else 1 + 0j)]
        return [(1 - in_index, REFLECT, I if exact else 1j)]
    t, ir = element.amplitudes(exact)
    out: list = []
    if not _is_zero(t):
        out.append((in_index, TRANSMIT, t))
    if not _is_zero(ir):
        out.append((1 - in_index, REFLECT, ir))
    return out


def _is_zero(x) -> bool:
    return (x.is_zero() if isinstance(x, ExactAmp) else x == 0)


def enumerate_paths(circuit: Circuit, source: str, label: str = H,
                    exact: bool | None = None) -> list[PathTrace]:
    """All photon paths from an input to any terminal, depth-first.

    Branch order is transmit-then-reflect, so the listing is
    deterministic for a given circuit.
    """
    if source not in circuit.inputs:
        raise CircuitError(f"unknown input {source!r}")
    if exact is None:
        exact = circuit.is_exact()
    owner = {}
    for el in circuit.elements:
        for k in range(el.n_in):
            owner[f"{el.id}:in{k}"] = (el, k)
    term_by_port = {t.port: name for name, t in circuit.terminals.items()}

    one = ExactAmp(1) if exact else (1 + 0j)
    paths: list[PathTrace] = []

    def walk(port: str, steps: tuple, amp):
        if port in term_by_port:
            paths.append(PathTrace(source, steps, term_by_port[port], amp))
            return
        el, in_index = owner[port]
        for out_index, action, factor in _branches(el, in_index, label, exact):
            out_port = f"{el.id}:out{out_index}"
            nxt = circuit.wires.get(out_port, out_port)
            walk(nxt, steps + ((el.id, action),), amp * factor)

    start = circuit.inputs[source]
    # the starting in-port may itself be wired straight to a terminal-less
    # element; terminals are always element outputs, so walk from the port
    walk(start, (), one)
    return paths


def single_photon_amplitude(circuit: Circuit, source: str, terminal: str,
                            label: str = H, exact: bool | None = None):
    """Sum of path amplitudes from ``source`` into ``terminal``."""
    if exact is None:
        exact = circuit.is_exact()
    total = ExactAmp(0) if exact else 0j
    for path in enumerate_paths(circuit, source, label=label, exact=exact):
        if path.terminal == terminal:
            total = total + path.amplitude
    return total


def amplitude_map(circuit: Circuit, source: str, label: str = H,
                  exact: bool | None = None) -> dict[str, object]:
    """Terminal -> summed path amplitude for one photon."""
    if exact is None:
        exact = circuit.is_exact()
    out = {name: (ExactAmp(0) if exact else 0j) for name in circuit.terminals}
    for path in enumerate_paths(circuit, source, label=label, exact=exact):
        out[path.terminal] = out[path.terminal] + path.amplitude
    return out


# ---------------------------------------------------------------------------
# Two-photon symmetrization


def _photon_inputs(inputs, n: int | None = None) -> list[tuple[str, SinglePhoton]]:
    pairs = []
    for port, src in inputs.items():
        if isinstance(src, SinglePhoton):
            src.check_normalized()
            pairs.append((port, src))
        elif not isinstance(src, Vacuum):
            raise ValueError(
                f"path engine handles single-photon inputs only, got {src!r}")
    if not pairs:
        raise ValueError("path engine needs at least one photon")
    if n is not None and len(pairs) != n:
        raise ValueError(f"expected exactly {n} single-photon inputs")
    return pairs


def _internal_is_exact(photon: SinglePhoton) -> bool:
    return all(isinstance(c, (int, ExactAmp)) for _, c in photon.internal)


def _arrival_amplitudes(circuit, port, photon, exact):
    """Mode (terminal, label) -> amplitude for one photon's arrival."""
    arrivals: dict[tuple[str, str], object] = {}
    for label, coeff in photon.internal:
        amps = amplitude_map(circuit, port, label=label, exact=exact)
        for terminal, amp in amps.items():
            value = coeff * amp
            if not _is_zero_scalar(value):
                arrivals[(terminal, label)] = value
    return arrivals


def _is_zero_scalar(x) -> bool:
    if isinstance(x, ExactAmp):
        return x.is_zero()
    return x == 0


def _assignment_coefficients(arrival_maps: list[dict]) -> dict:
    """Occupation over modes -> creation-monomial coefficient.

    Sums the amplitude product over every assignment of photons to
    arrival modes; assignments landing on the same occupation add, which
    is exactly the symmetrization rule for identical bosons.  For two
    photons the coefficient at {mu: 1, nu: 1} is a1[mu]*a2[nu] +
    a1[nu]*a2[mu], and at {mu: 2} it is a1[mu]*a2[mu].
    """
    coeffs: dict[tuple, object] = {}
    for assignment in itertools.product(*(a.items() for a in arrival_maps)):
        occ: dict = {}
        c = None
        for mode, amp in assignment:
            occ[mode] = occ.get(mode, 0) + 1
            c = amp if c is None else c * amp
        key = tuple(sorted(occ.items()))
        prev = coeffs.get(key)
        coeffs[key] = c if prev is None else prev + c
    return coeffs


def _pair_coefficients(a1: dict, a2: dict) -> dict:
    return _assignment_coefficients([a1, a2])


def _mode_name(mode: tuple[str, str], resolving: bool) -> str:
    terminal, label = mode
    return f"{terminal}[{label}]" if resolving else terminal


def _occupation_outcome(circuit: Circuit, occ) -> Outcome:
    counts: dict[str, int] = {}
    for (terminal, label), n in occ:
        resolving = circuit.terminals[terminal].resolving
        name = _mode_name((terminal, label), resolving)
        counts[name] = counts.get(name, 0) + n
    return Outcome.of(counts)


def _engine_exact(circuit, photons, exact):
    if exact is None:
        exact = circuit.is_exact() and all(_internal_is_exact(p) for p in photons)
    return exact


def outcome_amplitudes(circuit: Circuit, inputs, outcome: Outcome,
                       exact: bool | None = None) -> dict:
    """Amplitude per distinguishable internal outcome for one detection event.

    Keys are label-refined occupations (tuples of ((terminal, label), n));
    values include the sqrt(n!) enhancement factor for multiply occupied
    modes, so each |value|^2 is directly that refined outcome's probability.
    """
    if outcome.total_photons() != 2:
        raise ValueError("outcome must contain exactly two photons")
    pairs = _photon_inputs(inputs, n=2)
    exact = _engine_exact(circuit, [p for _, p in pairs], exact)
    a1 = _arrival_amplitudes(circuit, pairs[0][0], pairs[0][1], exact)
    a2 = _arrival_amplitudes(circuit, pairs[1][0], pairs[1][1], exact)
    labels = sorted({label for (_, label) in set(a1) | set(a2)})

    # candidate refined occupations consistent with the requested outcome
    wanted = [(t, n) for (t, n) in
              ((term, outcome.base_count(term)) for term in circuit.terminals)
              if n > 0]
    candidates = _refine(wanted, labels)

    result = {}
    coeffs = _pair_coefficients(a1, a2)
    zero = ExactAmp(0) if exact else 0j
    for occ in candidates:
        c = coeffs.get(occ, zero)
        factor = None
        for _, n in occ:
            f = sqrt_factorial(n, exact)
            factor = f if factor is None else factor * f
        result[occ] = c * factor
    return result


def _refine(wanted, labels):
    """All label assignments of the given terminal occupation."""
    out = [()]
    for terminal, n in wanted:
        splits = []
        if n == 1:
            splits = [(((terminal, lab), 1),) for lab in labels]
        else:  # n == 2
            for i, la in enumerate(labels):
                splits.append((((terminal, la), 2),))
                for lb in labels[i + 1:]:
                    splits.append((((terminal, la), 1), ((terminal, lb), 1)))
        out = [prev + s for prev in out for s in splits]
    return [tuple(sorted(o)) for o in out]


def single_photon_distribution(circuit: Circuit, source: str, label: str = H,
                               exact: bool | None = None) -> OutcomeTable:
    """Detection probability per terminal for one photon."""
    if exact is None:
        exact = circuit.is_exact()
    probs: dict[Outcome, object] = {}
    for terminal, amp in amplitude_map(circuit, source, label=label, exact=exact).items():
        p = abs_sq(amp)
        if not _is_zero_scalar(p):
            probs[Outcome.of({terminal: 1})] = p
    return OutcomeTable(probs, engine="path", exact=exact,
                        meta={"detectors": circuit.detectors()})


def full_distribution(circuit: Circuit, inputs, exact: bool | None = None) -> OutcomeTable:
    """Probability of every joint detection pattern, loss included."""
    pairs = _photon_inputs(inputs)
    exact = _engine_exact(circuit, [p for _, p in pairs], exact)
    maps = [_arrival_amplitudes(circuit, port, photon, exact)
            for port, photon in pairs]
    probs: dict[Outcome, object] = {}
    for occ, c in _assignment_coefficients(maps).items():
        weight = 1
        for _, n in occ:
            weight *= math.factorial(n)
        p = abs_sq(c) * weight
        if _is_zero_scalar(p):
            continue
        key = _occupation_outcome(circuit, occ)
        probs[key] = probs.get(key, ExactAmp(0) if exact else 0.0) + p
    return OutcomeTable(probs, engine="path", exact=exact,
                        meta={"detectors": circuit.detectors()})


def seminaive_distribution(circuit: Circuit, inputs,
                           exact: bool | None = None) -> OutcomeTable:
    """Classical-like sum of labeled-assignment probabilities.

    Adds probabilities (not amplitudes) of "photon 1 to terminal i,
    photon 2 to terminal j" assignments, with no interference and no
    Bose enhancement.  Coincides with the fully distinguishable case.
    """
    pairs = _photon_inputs(inputs, n=2)
    exact = _engine_exact(circuit, [p for _, p in pairs], exact)
    maps = [amplitude_map(circuit, port, exact=exact) for port, _ in pairs]
    probs: dict[Outcome, object] = {}
    for t1, amp1 in maps[0].items():
        p1 = abs_sq(amp1)
        if _is_zero_scalar(p1):
            continue
        for t2, amp2 in maps[1].items():
            p = p1 * abs_sq(amp2)
            if _is_zero_scalar(p):
                continue
            key = Outcome.of({t1: 1, t2: 1} if t1 != t2 else {t1: 2})
            probs[key] = probs.get(key, ExactAmp(0) if exact else 0.0) + p
    return OutcomeTable(probs, engine="path-seminaive", exact=exact,
                        meta={"detectors": circuit.detectors()})


def partial_distinguishability_curve(circuit: Circuit, grid,
                                     ports: tuple[str, str] | None = None):
    """[(overlap, OutcomeTable), ...] for one H photon and one diagonal photon."""
    if ports is None:
        order = circuit.input_order()
        if len(order) != 2:
            raise ValueError("circuit must have exactly two inputs")
        ports = (order[0], order[1])
    rows = []
    for c in grid:
        if abs(to_complex(c)) > 1 + 1e-12:
            raise ValueError(f"|overlap| = {abs(to_complex(c))} exceeds 1")
        inputs = {ports[0]: SinglePhoton.of({H: 1}), ports[1]: make_diagonal(c)}
        rows.append((c, full_distribution(circuit, inputs)))
    return rows


def hom_coincidence(table: OutcomeTable) -> float:
    """Coincidence probability of the two-detector HOM setup."""
    return to_float(table[Outcome.of({"L": 1, "R": 1})])
