"""Reflectivity design problems for the double-MZI network.

Closed forms for the outer / zigzag / crossing path amplitudes as
functions of the four reflectivities, the zero-coincidence solution
family, the full-MZi + full-HOMi constraint system, and deterministic
maximization of the inner-detector coincidence probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import HardyParams


@dataclass(frozen=True)
class PathAmps:
    outer: complex  # O = i t0 rm tf
    zigzag: complex  # Z = i^3 r0 rc rf
    crossing: complex  # C = i^2 r0 tc rf


def _coeffs(value):
    r2 = float(value)
    return math.sqrt(1.0 - r2), math.sqrt(r2)  # (t, r)


def path_amps(p: HardyParams) -> PathAmps:
    t0, r0 = _coeffs(p.R0)
    tc, rc = _coeffs(p.Rc)
    tm, rm = _coeffs(p.Rm)
    tf, rf = _coeffs(p.Rf)
    return PathAmps(
        outer=1j * t0 * rm * tf,
        zigzag=-1j * r0 * rc * rf,
        crossing=-(r0 * tc * rf),
    )


def a23(p: HardyParams) -> complex:
    """Inner-coincidence amplitude (O + Z)^2 + C^2 for identical photons."""
    amps = path_amps(p)
    oz = amps.outer + amps.zigzag
    return oz * oz + amps.crossing * amps.crossing


def p23(p: HardyParams) -> float:
    return abs(a23(p)) ** 2


def zero_family_residual(p: HardyParams, branch: int = +1) -> float:
    """Left minus right of the zero-coincidence reflectivity constraint.

    2 R* = Rm (1-R0)(1-Rf) / (R0 Rf) = 1 +/- 2 sqrt(Rc (1-Rc)); a zero
    residual on either branch makes the coincidence amplitude vanish.
    """
    R0, Rc, Rm, Rf = (float(p.R0), float(p.Rc), float(p.Rm), float(p.Rf))
    if R0 * Rf == 0.0:
        raise ZeroDivisionError("R0 and Rf must be nonzero")
    if branch not in (+1, -1):
        raise ValueError("branch must be +1 or -1")
    lhs = Rm * (1.0 - R0) * (1.0 - Rf) / (R0 * Rf)
    rhs = 1.0 + branch * 2.0 * math.sqrt(Rc * (1.0 - Rc))
    return lhs - rhs


def constraint_residuals(p: HardyParams) -> tuple[complex, float]:
    """(full-MZi residual, full-HOMi residual); both zero at 50:50.

    MZi: O + Z = i (t0 rm tf - r0 rc rf) = 0.
    HOMi: Z^2 + C^2 = R0 Rf (Tc - Rc) = 0.
    """
    t0, r0 = _coeffs(p.R0)
    tc, rc = _coeffs(p.Rc)
    tm, rm = _coeffs(p.Rm)
    tf, rf = _coeffs(p.Rf)
    mzi = 1j * (t0 * rm * tf - r0 * rc * rf)
    homi = float(p.R0) * float(p.Rf) * (tc * tc - rc * rc)
    return mzi, homi


def constrained_amplitude(R0: float, Rm: float = 1.0) -> float:
    """Coincidence amplitude on the full-MZi + full-HOMi manifold.

    With Rc = 1/2 forced and Rf eliminated self-consistently, the
    amplitude reduces to R0 (1 - R0) / (R0/Rm + 2 (1 - R0)).
    """
    return R0 * (1.0 - R0) / (R0 / Rm + 2.0 * (1.0 - R0))


@dataclass(frozen=True)
class Optimum:
    params: HardyParams
    amplitude: float
    value: float  # p23 at the optimum


def maximize_p23(grid_step: float = 1e-3, tol: float = 1e-12) -> Optimum:
    """Maximize the inner coincidence under full MZi and HOMi.

    Deterministic: coarse grid over R0 at Rm = 1 (the amplitude is
    monotone in Rm, so the boundary is optimal), then golden-section
    refinement of the bracket.
    """
    best_r = grid_step
    best_v = -1.0
    n = int(round(1.0 / grid_step)) - 1
    for i in range(1, n + 1):
        r = i * grid_step
        v = constrained_amplitude(r)
        if v > best_v:
            best_r, best_v = r, v
    lo = max(best_r - grid_step, 0.0)
    hi = min(best_r + grid_step, 1.0)
    r0 = _golden_section(constrained_amplitude, lo, hi, tol)
    amp = constrained_amplitude(r0)
    rf = 2.0 * amp / r0  # from A = R0 Rf / 2
    params = HardyParams(R0=r0, Rc=0.5, Rm=1.0, Rf=rf)
    return Optimum(params=params, amplitude=amp, value=amp * amp)


def _golden_section(f, lo: float, hi: float, tol: float) -> float:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def scan_rows(params_list) -> list[dict]:
    """Diagnostic table rows for a list of parameter points."""
    rows = []
    for p in params_list:
        mzi, homi = constraint_residuals(p)
        try:
            res_plus = zero_family_residual(p, +1)
            res_minus = zero_family_residual(p, -1)
        except ZeroDivisionError:
            res_plus = res_minus = float("nan")
        rows.append({
            "R0": float(p.R0),
            "Rc": float(p.Rc),
            "Rm": float(p.Rm),
            "Rf": float(p.Rf),
            "p23": p23(p),
            "residual_mzi": abs(mzi),
            "residual_homi": homi,
            "residual_zero_plus": res_plus,
            "residual_zero_minus": res_minus,
        })
    return rows
