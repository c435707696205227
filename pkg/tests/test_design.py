"""Reflectivity design closed forms against the full simulation."""

import math
import random
from fractions import Fraction

import pytest

from fewphoton.circuit import HardyParams, build_double_mzi
from fewphoton.design import (
    a23,
    constrained_amplitude,
    constraint_residuals,
    maximize_p23,
    p23,
    path_amps,
    scan_rows,
    zero_family_residual,
)
from fewphoton.path_engine import full_distribution
from fewphoton.sources import SinglePhoton
from fewphoton.statistics import coincidence

SQRT2 = math.sqrt(2.0)

TABLE_CASES = [
    HardyParams(R0=Fraction(1, 3), Rc=Fraction(1, 2), Rm=Fraction(1, 2),
                Rf=Fraction(1, 3)),
    HardyParams(R0=SQRT2 - 1, Rc=Fraction(1, 2), Rm=Fraction(1),
                Rf=SQRT2 - 1),
    HardyParams(R0=Fraction(1, 2), Rc=Fraction(1, 2), Rm=Fraction(1),
                Rf=Fraction(1, 3)),
]


@pytest.mark.parametrize("params", TABLE_CASES)
def test_known_zero_coincidence_cases(params):
    assert p23(params) < 1e-20


@pytest.mark.parametrize("params", TABLE_CASES)
def test_zero_cases_satisfy_a_zero_family_branch(params):
    residuals = [zero_family_residual(params, b) for b in (+1, -1)]
    assert min(abs(r) for r in residuals) < 1e-12


def test_balanced_setup_amplitudes():
    amps = path_amps(HardyParams())
    assert amps.outer == pytest.approx(1j / 2**1.5)
    assert amps.zigzag == pytest.approx(-1j / 2**1.5)
    assert amps.crossing == pytest.approx(-1 / 2**1.5)
    assert a23(HardyParams()) == pytest.approx(1 / 8)
    assert p23(HardyParams()) == pytest.approx(1 / 64)


def test_balanced_setup_residuals_vanish():
    mzi, homi = constraint_residuals(HardyParams())
    assert abs(mzi) < 1e-15
    assert abs(homi) < 1e-15


def test_p23_matches_full_pipeline():
    rng = random.Random(8)
    ins = {"L": SinglePhoton.of({"H": 1}), "R": SinglePhoton.of({"H": 1})}
    for _ in range(12):
        params = HardyParams(R0=rng.uniform(0.05, 0.95), Rc=rng.uniform(0.05, 0.95),
                             Rm=rng.uniform(0.05, 0.95), Rf=rng.uniform(0.05, 0.95))
        table = full_distribution(build_double_mzi(params), ins)
        assert coincidence(table, ["D2", "D3"]) == pytest.approx(
            p23(params), abs=1e-12)


def test_constrained_amplitude_chain():
    # at Rm = 1 the closed form reduces to R0(1-R0)/(2-R0)
    for r0 in (0.2, 0.5, 0.8):
        assert constrained_amplitude(r0) == pytest.approx(
            r0 * (1 - r0) / (2 - r0))


def test_constrained_amplitude_unimodal():
    values = [constrained_amplitude(k / 200) for k in range(1, 200)]
    peak = values.index(max(values))
    assert all(values[i] <= values[i + 1] for i in range(peak))
    assert all(values[i] >= values[i + 1] for i in range(peak, len(values) - 1))


def test_maximum():
    opt = maximize_p23()
    assert opt.value == pytest.approx(17 - 12 * SQRT2, abs=1e-10)
    assert opt.amplitude == pytest.approx(3 - 2 * SQRT2, abs=1e-8)
    assert float(opt.params.R0) == pytest.approx(2 - SQRT2, abs=1e-5)
    assert float(opt.params.Rf) == pytest.approx(2 - SQRT2, abs=1e-5)
    assert float(opt.params.Rm) == 1.0
    assert float(opt.params.Rc) == 0.5
    # the optimum satisfies both interference constraints
    mzi, homi = constraint_residuals(opt.params)
    assert abs(mzi) < 1e-6
    assert abs(homi) < 1e-6


def test_hardy_configuration():
    params = HardyParams(R0=Fraction(1, 2), Rc=Fraction(1, 2),
                         Rm=Fraction(1), Rf=Fraction(2, 3))
    assert a23(params).real == pytest.approx(1 / 6, abs=1e-15)
    assert p23(params) == pytest.approx(1 / 36, abs=1e-15)


def test_zero_family_input_checks():
    with pytest.raises(ZeroDivisionError):
        zero_family_residual(HardyParams(R0=Fraction(0)))
    with pytest.raises(ValueError):
        zero_family_residual(HardyParams(), branch=2)


def test_scan_rows_columns():
    rows = scan_rows([HardyParams(), TABLE_CASES[0]])
    assert list(rows[0]) == ["R0", "Rc", "Rm", "Rf", "p23", "residual_mzi",
                             "residual_homi", "residual_zero_plus",
                             "residual_zero_minus"]
    assert rows[1]["p23"] < 1e-20
