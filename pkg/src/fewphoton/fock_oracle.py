"""Brute-force second-quantized engine.

States are polynomials in creation operators over (port, label) modes.
Each element rewrites its input-port operators into output-port
operators (a_in^dag -> t a_out^dag + i r a_cross^dag), literally, term
by term.  Reading off the final coefficients with the sqrt(n!) measure
gives outcome amplitudes, independent of any path reasoning, which makes
this engine the ground truth for the path engine.
"""

from __future__ import annotations

import cmath
import math
from math import factorial

from .amplitude import ExactAmp, I, abs_sq, to_complex, to_float
from .circuit import MIRROR, PBS, PHASE, Circuit, CircuitError
from .outcomes import Outcome, OutcomeTable
from .sources import Coherent, H, SinglePhoton, Vacuum

Mode = tuple[str, str]  # (port or terminal name, internal label)
Occupation = tuple[tuple[Mode, int], ...]  # sorted, counts > 0

DEFAULT_N_MAX = 4


class FockPoly:
    """Sparse polynomial in creation operators applied to vacuum.

    ``terms`` maps occupations to coefficients of the corresponding
    creation-operator monomial.  The sqrt(n!) measure is applied only
    when amplitudes or probabilities are extracted, matching
    (a^dag)^2 |0> = sqrt(2) |2>.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Occupation, object] | None = None):
        self.terms = terms or {}

    @classmethod
    def vacuum(cls) -> "FockPoly":
        return cls({(): 1})

    @classmethod
    def creation(cls, mode: Mode, coeff=1) -> "FockPoly":
        return cls({((mode, 1),): coeff})

    def add_term(self, occ: Occupation, coeff):
        if occ in self.terms:
            self.terms[occ] = self.terms[occ] + coeff
        else:
            self.terms[occ] = coeff

    def __mul__(self, other: "FockPoly") -> "FockPoly":
        out = FockPoly()
        for occ1, c1 in self.terms.items():
            for occ2, c2 in other.terms.items():
                out.add_term(_merge(occ1, occ2), c1 * c2)
        return out

    def scale(self, factor) -> "FockPoly":
        return FockPoly({occ: c * factor for occ, c in self.terms.items()})

    def __add__(self, other: "FockPoly") -> "FockPoly":
        out = FockPoly(dict(self.terms))
        for occ, c in other.terms.items():
            out.add_term(occ, c)
        return out

    def prune(self) -> "FockPoly":
        return FockPoly({occ: c for occ, c in self.terms.items() if not _is_zero(c)})

    def max_photons(self) -> int:
        return max((sum(n for _, n in occ) for occ in self.terms), default=0)

    def norm_sq(self) -> float:
        total = 0.0
        for occ, c in self.terms.items():
            weight = 1
            for _, n in occ:
                weight *= factorial(n)
            total += to_float(abs_sq(c)) * weight
        return total

    def records(self) -> list[dict]:
        """Debug dump as (occupation, coefficient) records."""
        rows = []
        for occ in sorted(self.terms):
            c = self.terms[occ]
            rows.append({
                "occupation": [[list(mode), n] for mode, n in occ],
                "coefficient": [to_complex(c).real, to_complex(c).imag],
            })
        return rows


def _merge(occ1: Occupation, occ2: Occupation) -> Occupation:
    counts = dict(occ1)
    for mode, n in occ2:
        counts[mode] = counts.get(mode, 0) + n
    return tuple(sorted(counts.items()))


def _is_zero(c) -> bool:
    if isinstance(c, ExactAmp):
        return c.is_zero()
    return c == 0


def _power(poly: FockPoly, k: int) -> FockPoly:
    out = FockPoly.vacuum()
    for _ in range(k):
        out = out * poly
    return out


def substitute(poly: FockPoly, mode: Mode, replacement: FockPoly) -> FockPoly:
    """Rewrite every power of one creation operator by a linear combination."""
    out = FockPoly()
    powers: dict[int, FockPoly] = {0: FockPoly.vacuum()}
    for occ, c in poly.terms.items():
        k = dict(occ).get(mode, 0)
        rest = tuple((m, n) for m, n in occ if m != mode)
        if k == 0:
            out.add_term(rest, c)
            continue
        if k not in powers:
            powers[k] = _power(replacement, k)
        for rocc, rc in powers[k].terms.items():
            out.add_term(_merge(rest, rocc), c * rc)
    return out


def _rename(poly: FockPoly, mapping: dict[str, str]) -> FockPoly:
    out = FockPoly()
    for occ, c in poly.terms.items():
        renamed = tuple(sorted(((mapping.get(p, p), lab), n) for (p, lab), n in occ))
        out.add_term(renamed, c)
    return out


# ---------------------------------------------------------------------------
# Input construction


def coherent_input(port: str, alpha: complex, n_max: int = 2,
                   label: str = H) -> FockPoly:
    """Truncated, renormalized coherent state on one port.

    |n> = (a^dag)^n / sqrt(n!) |0>, so the monomial coefficient of
    (a^dag)^n is alpha^n / n! after normalization.
    """
    alpha = complex(alpha)
    if abs(alpha) > 1:
        raise ValueError("|alpha| must be <= 1")
    norm = math.sqrt(sum(abs(alpha) ** (2 * n) / factorial(n)
                         for n in range(n_max + 1)))
    poly = FockPoly()
    mode = (port, label)
    for n in range(n_max + 1):
        coeff = alpha**n / factorial(n) / norm
        if n == 0:
            poly.add_term((), coeff)
        else:
            poly.add_term(((mode, n),), coeff)
    return poly


def input_state(inputs) -> FockPoly:
    """Tensor product of per-port sources as one polynomial."""
    state = FockPoly.vacuum()
    for port, source in inputs.items():
        if isinstance(source, Vacuum):
            continue
        if isinstance(source, SinglePhoton):
            factor = FockPoly()
            for label, coeff in source.internal:
                factor.add_term((((port, label), 1),), coeff)
        elif isinstance(source, Coherent):
            factor = coherent_input(port, source.alpha, source.n_max, source.label)
        else:
            raise TypeError(f"unknown source {source!r}")
        state = state * factor
    return state


# ---------------------------------------------------------------------------
# Evolution


def evolve(circuit: Circuit, state: FockPoly, n_max: int = DEFAULT_N_MAX,
           exact: bool | None = None) -> FockPoly:
    """Push a creation-operator polynomial through the whole network."""
    if state.max_photons() > n_max:
        raise ValueError(
            f"input carries {state.max_photons()} photons, exceeds n_max={n_max}"
        )
    if exact is None:
        exact = circuit.is_exact()
    # name input modes by the element ports they feed
    state = _rename(state, dict(circuit.inputs))
    term_by_port = {t.port: name for name, t in circuit.terminals.items()}

    for el in circuit.topological_order():
        labels = sorted({lab for occ in state.terms for (p, lab), _ in occ
                         if p.startswith(el.id + ":in")})
        for lab in labels:
            state = _apply_element(state, el, lab, exact)
        state = _rename(state, {**circuit.wires, **{
            p: term_by_port[p] for p in term_by_port
        }})
        state = state.prune()
    return state


def _apply_element(state: FockPoly, el, label: str, exact: bool) -> FockPoly:
    o0, o1 = f"{el.id}:out0", f"{el.id}:out1" if el.kind != PHASE else None
    i_factor = I if exact else 1j
    if el.kind == PHASE:
        phase = cmath.exp(1j * el.phase)
        rep = FockPoly({(((f"{el.id}:out0", label), 1),): phase})
        return substitute(state, (f"{el.id}:in0", label), rep)
    if el.kind == MIRROR:
        rep = FockPoly.creation((o0, label), i_factor)
        return substitute(state, (f"{el.id}:in0", label), rep)
    if el.kind == PBS:
        if label == H:
            rep0 = FockPoly.creation((o0, label))
            rep1 = FockPoly.creation((o1, label))
        else:
            rep0 = FockPoly.creation((o1, label), i_factor)
            rep1 = FockPoly.creation((o0, label), i_factor)
    else:
        t, ir = el.amplitudes(exact)
        rep0 = FockPoly({(((o0, label), 1),): t, (((o1, label), 1),): ir}).prune()
        rep1 = FockPoly({(((o1, label), 1),): t, (((o0, label), 1),): ir}).prune()
    state = substitute(state, (f"{el.id}:in0", label), rep0)
    state = substitute(state, (f"{el.id}:in1", label), rep1)
    return state


# ---------------------------------------------------------------------------
# Readout


def distribution(state: FockPoly, circuit: Circuit,
                 exact: bool | None = None) -> OutcomeTable:
    """Outcome probabilities from final-state coefficients.

    The probability of a refined occupation is |c|^2 * prod(n!); label
    refinements are kept only for detectors flagged as resolving.
    """
    if exact is None:
        exact = all(isinstance(c, (int, ExactAmp)) for c in state.terms.values())
    probs: dict[Outcome, object] = {}
    for occ, c in state.terms.items():
        weight = 1
        for _, n in occ:
            weight *= factorial(n)
        p = abs_sq(c) * weight
        if _is_zero(p):
            continue
        counts: dict[str, int] = {}
        for (terminal, label), n in occ:
            term = circuit.terminals.get(terminal)
            if term is None:
                raise CircuitError(f"state mode {terminal!r} is not a terminal")
            name = f"{terminal}[{label}]" if term.resolving else terminal
            counts[name] = counts.get(name, 0) + n
        key = Outcome.of(counts)
        probs[key] = probs.get(key, ExactAmp(0) if exact else 0.0) + p
    return OutcomeTable(probs, engine="fock", exact=exact,
                        meta={"detectors": circuit.detectors()})


def simulate(circuit: Circuit, inputs, n_max: int = DEFAULT_N_MAX) -> OutcomeTable:
    """Full pipeline: build inputs, evolve, read out the distribution."""
    state = input_state(inputs)
    final = evolve(circuit, state, n_max=n_max)
    return distribution(final, circuit)


def two_photon_sector(table: OutcomeTable) -> OutcomeTable:
    """Conditional distribution over outcomes with exactly two photons."""
    sector = {o: p for o, p in table.items() if o.total_photons() == 2}
    total = sum(to_float(p) for p in sector.values())
    if total == 0:
        raise ValueError("no two-photon component")
    probs = {o: to_float(p) / total for o, p in sector.items()}
    return OutcomeTable(probs, engine=table.engine + "-2ph",
                        meta={"sector_weight": total})


def coherent_channel_probabilities(alpha: complex, beta: complex,
                                   n_max: int = 2) -> dict[str, float]:
    """P_ij of i photons from source A and j from B (truncated states)."""
    def number_probs(a):
        norm = sum(abs(a) ** (2 * n) / factorial(n) for n in range(n_max + 1))
        return [abs(a) ** (2 * n) / factorial(n) / norm for n in range(n_max + 1)]

    pa, pb = number_probs(alpha), number_probs(beta)
    return {
        f"P{i}{j}": pa[i] * pb[j]
        for i in range(min(n_max, 2) + 1)
        for j in range(min(n_max, 2) + 1)
        if i + j <= 2
    }
