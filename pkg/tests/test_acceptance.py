"""End-to-end acceptance suite.

Each test prints one PASS/FAIL line so the whole gate can be read off a
verbose run (``pytest -v -s tests/test_acceptance.py``).
"""

import math
from fractions import Fraction

import numpy as np

from fewphoton.amplitude import ZERO, ExactAmp
from fewphoton.circuit import (
    HardyParams,
    build_double_mzi,
    build_hom,
    build_mzi,
    transfer_matrix,
    transfer_matrix_array,
)
from fewphoton.design import maximize_p23, p23
from fewphoton.fock_oracle import (
    coherent_channel_probabilities,
    coherent_input,
    simulate,
)
from fewphoton.outcomes import Outcome
from fewphoton.path_engine import (
    enumerate_paths,
    full_distribution,
    hom_coincidence,
    outcome_amplitudes,
    partial_distinguishability_curve,
    seminaive_distribution,
    single_photon_distribution,
)
from fewphoton.sources import SinglePhoton, make_diagonal
from fewphoton.statistics import coincidence, sample, study
from conftest import random_circuit

IDENTICAL = lambda: {"L": SinglePhoton.of({"H": 1}), "R": SinglePhoton.of({"H": 1})}


def _report(number: int, description: str, ok: bool):
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {description}")
    assert ok, f"criterion {number} failed: {description}"


def test_criterion_1_mzi():
    table = single_photon_distribution(build_mzi(), "src")
    ok = (table.exact
          and table[Outcome.of({"D1": 1})] == Fraction(1)
          and table[Outcome.of({"D2": 1})] == ZERO)
    _report(1, "MZi single photon exits at D1 with certainty (exact)", ok)


def test_criterion_2_hom():
    hom = build_hom()
    table = full_distribution(hom, IDENTICAL())
    ok = (table.exact
          and table[Outcome.of({"L": 1, "R": 1})] == ZERO
          and table[Outcome.of({"L": 2})] == Fraction(1, 2)
          and table[Outcome.of({"R": 2})] == Fraction(1, 2))
    grid = [k / 10 for k in range(11)]
    for c, t in partial_distinguishability_curve(hom, grid):
        expected = (1 - c * c) / 2
        ok = ok and abs(hom_coincidence(t) - expected) < 1e-12
        oracle = simulate(hom, {"L": SinglePhoton.of({"H": 1}),
                                "R": make_diagonal(c)})
        ok = ok and abs(coincidence(oracle, ["L", "R"]) - expected) < 1e-12
    _report(2, "HOM bunching exact; dip (1-|C|^2)/2 on an 11-point sweep", ok)


def test_criterion_3_balanced_double_mzi():
    table = full_distribution(build_double_mzi(), IDENTICAL())
    pairs = {
        ("D2", "D3"): Fraction(1, 64), ("D1", "D3"): Fraction(1, 64),
        ("D2", "D4"): Fraction(1, 64), ("D1", "D4"): Fraction(9, 64),
        ("D1", "D2"): Fraction(1, 16), ("D3", "D4"): Fraction(1, 16),
    }
    ok = table.exact
    for (a, b), value in pairs.items():
        ok = ok and table[Outcome.of({a: 1, b: 1})] == value
    ok = ok and table[Outcome.of({"D1": 2})] == Fraction(1, 8)
    ok = ok and table[Outcome.of({"D4": 2})] == Fraction(1, 8)
    ok = ok and table[Outcome.of({"D2": 2})] == ZERO
    ok = ok and table[Outcome.of({"D3": 2})] == ZERO
    survival = sum((p for o, p in table.items()
                    if not o.terminals() & {"loss_L", "loss_R"}), ExactAmp(0))
    ok = ok and survival == Fraction(36, 64)
    _, _, entries = transfer_matrix(build_double_mzi())
    ok = ok and entries["loss_L"]["L"].abs_sq() == Fraction(1, 4)
    ok = ok and entries["loss_R"]["R"].abs_sq() == Fraction(1, 4)
    _report(3, "balanced double-MZI joint probabilities, survival 36/64, "
               "loss 1/4 per photon (exact)", ok)


def test_criterion_4_distinguishable_table():
    dm = build_double_mzi()
    inputs = {"L": SinglePhoton.of({"H": 1}), "R": make_diagonal(0)}
    left_sq = {"D1": Fraction(1, 2), "D2": Fraction(0),
               "D3": Fraction(1, 8), "D4": Fraction(1, 8)}
    right_sq = {"D1": Fraction(1, 8), "D2": Fraction(1, 8),
                "D3": Fraction(0), "D4": Fraction(1, 2)}
    ok = True
    detectors = ["D1", "D2", "D3", "D4"]
    for i in detectors:
        for j in detectors:
            outcome = Outcome.of({i: 1, j: 1} if i != j else {i: 2})
            amps = outcome_amplitudes(dm, inputs, outcome)
            occ = tuple(sorted([((i, "H"), 1), ((j, "V"), 1)]))
            prob = amps[occ].abs_sq()
            ok = ok and prob == left_sq[i] * right_sq[j]
    table = full_distribution(dm, inputs)
    ok = ok and table.exact
    ok = ok and table[Outcome.of({"D1": 2})] == Fraction(1, 16)
    d14 = table[Outcome.of({"D1": 1, "D4": 1})]
    ok = ok and d14 == Fraction(17, 64)
    _report(4, "distinguishable photons: all 16 joint probabilities exact, "
               "L1&R4 = 1/4, R->3 row zero, P1(2) = 1/16, P1,4 = 17/64", ok)


def test_criterion_5_partial_distinguishability():
    dm = build_double_mzi()
    grid = [k / 20 for k in range(21)]
    constant = {("D2", "D3"): 1 / 64, ("D1", "D3"): 1 / 64,
                ("D2", "D4"): 1 / 64, ("D1", "D2"): 1 / 16,
                ("D3", "D4"): 1 / 16}
    ok = True
    for c, table in partial_distinguishability_curve(dm, grid):
        ok = ok and abs(coincidence(table, ["D1", "D1"]) - (1 + c * c) / 16) < 1e-12
        ok = ok and abs(coincidence(table, ["D1", "D4"]) - (17 - 8 * c * c) / 64) < 1e-12
        for (a, b), value in constant.items():
            ok = ok and abs(coincidence(table, [a, b]) - value) < 1e-12
        ok = ok and coincidence(table, ["D2", "D2"]) < 1e-15
        ok = ok and coincidence(table, ["D3", "D3"]) < 1e-15
    _report(5, "P1(2) = (1+|C|^2)/16 and P1,4 = (17-8|C|^2)/64 on a 21-point "
               "sweep; the seven other probabilities constant", ok)


def test_criterion_6_design():
    cases = [
        HardyParams(R0=Fraction(1, 3), Rc=Fraction(1, 2),
                    Rm=Fraction(1, 2), Rf=Fraction(1, 3)),
        HardyParams(R0=math.sqrt(2) - 1, Rc=Fraction(1, 2),
                    Rm=Fraction(1), Rf=math.sqrt(2) - 1),
        HardyParams(R0=Fraction(1, 2), Rc=Fraction(1, 2),
                    Rm=Fraction(1), Rf=Fraction(1, 3)),
    ]
    ok = all(p23(p) < 1e-20 for p in cases)
    opt = maximize_p23()
    ok = ok and abs(opt.value - (17 - 12 * math.sqrt(2))) < 1e-10
    ok = ok and abs(float(opt.params.R0) - (2 - math.sqrt(2))) < 1e-5
    ok = ok and abs(float(opt.params.Rf) - (2 - math.sqrt(2))) < 1e-5
    ok = ok and float(opt.params.Rm) == 1.0
    hardy = HardyParams(R0=Fraction(1, 2), Rc=Fraction(1, 2),
                        Rm=Fraction(1), Rf=Fraction(2, 3))
    ok = ok and abs(p23(hardy) - 1 / 36) < 1e-15
    _report(6, "three zero-coincidence cases; max p23 = 17-12*sqrt(2) at "
               "R0 = Rf = 2-sqrt(2); Hardy configuration gives 1/36", ok)


def test_criterion_7_coherent():
    poly = coherent_input("p", 0.1, n_max=4)
    p0 = abs(poly.terms[()]) ** 2
    p1 = abs(poly.terms[((("p", "H"), 1),)]) ** 2
    p_rest = 1.0 - p0 - p1
    ok = (abs(p0 - 0.99005) < 5e-5
          and abs(p1 - 0.00990) < 5e-5
          and abs(p_rest - 0.00005) < 5e-5)
    probs = coherent_channel_probabilities(0.1, 0.1)
    ok = ok and abs(probs["P20"] - probs["P11"] / 2) < 1e-15
    ok = ok and abs(probs["P02"] - probs["P11"] / 2) < 1e-15
    _report(7, "|alpha| = 0.1 number statistics (99.005%, 0.990%, 0.005%); "
               "P20 = P02 = P11/2 at equal amplitudes", ok)


def test_criterion_8_engine_equivalence():
    ok = True
    rng_overlaps = [((7919 * s) % 1000) / 1000 for s in range(200)]
    for seed in range(200):
        circ = random_circuit(seed)
        inputs = {"L": SinglePhoton.of({"H": 1}),
                  "R": make_diagonal(rng_overlaps[seed])}
        path_table = full_distribution(circ, inputs, exact=False)
        fock_table = simulate(circ, inputs)
        ok = ok and path_table.max_discrepancy(fock_table) < 1e-12
        ok = ok and abs(float(path_table.total()) - 1.0) < 1e-12
        _, cols, arr = transfer_matrix_array(circ)
        gram = arr.conj().T @ arr
        ok = ok and np.abs(gram - np.eye(len(cols))).max() < 1e-12
    _report(8, "200 random circuits: engines agree to 1e-12, distributions "
               "normalized, transfer columns orthonormal", ok)


def test_criterion_9_sampling_study():
    dm = build_double_mzi()
    report = study(dm, IDENTICAL(), n_trials=1000, seed=12345)
    ok = (report.n_trials == 1000
          and sum(r.count for r in report.rows) == 1000
          and len(report.rows) >= 8)
    coverages = [study(dm, IDENTICAL(), n_trials=1000, seed=s).coverage()
                 for s in range(100)]
    mean_cov = sum(coverages) / len(coverages)
    ok = ok and 0.93 <= mean_cov <= 0.99
    table = full_distribution(dm, IDENTICAL())
    base = sample(table, 50000, seed=12345, n_threads=1).counts
    for n_threads in (2, 8):
        ok = ok and sample(table, 50000, seed=12345,
                           n_threads=n_threads).counts == base
    _report(9, f"sampling study: mean CP coverage {mean_cov:.3f} in "
               "[0.93, 0.99]; counts bit-identical over 1/2/8 threads", ok)


def test_criterion_10_identities():
    dm = build_double_mzi()
    paths = enumerate_paths(dm, "L")

    def path_amp(terminal, marker):
        for p in paths:
            if p.terminal == terminal and marker in p.steps:
                return p.amplitude
        raise AssertionError(f"no path to {terminal} via {marker}")

    # the three single-photon routes into the inner detectors: outer and
    # zigzag both end at D2, the crossing ends at D3
    outer = path_amp("D2", ("bsm_L", "reflect"))
    zigzag = path_amp("D2", ("bsc", "reflect"))
    crossing = path_amp("D3", ("bsc", "transmit"))
    a_23 = (outer + zigzag) * (outer + zigzag) + crossing * crossing
    eighth = ExactAmp(1, 0, 0, 0, 3)
    ok = (outer + zigzag == ZERO
          and zigzag * zigzag + crossing * crossing == ZERO
          and a_23 == eighth
          and crossing * crossing == eighth
          and outer * outer + outer * zigzag + zigzag * outer == eighth)
    # the engine's inner-coincidence amplitude agrees
    amps = outcome_amplitudes(dm, IDENTICAL(), Outcome.of({"D2": 1, "D3": 1}))
    ok = ok and amps[((("D2", "H"), 1), (("D3", "H"), 1))].abs_sq() == Fraction(1, 64)

    # identical-minus-distinguishable gap equals twice the real cross term
    identical = full_distribution(dm, IDENTICAL())
    distinct = seminaive_distribution(dm, IDENTICAL())
    _, _, entries = transfer_matrix(dm)
    terminals = list(dm.terminals)
    for i in terminals:
        for j in terminals:
            if i == j:
                continue
            gap = identical[Outcome.of({i: 1, j: 1})] - distinct[Outcome.of({i: 1, j: 1})]
            cross = (entries[i]["L"] * entries[j]["R"]
                     * (entries[j]["L"] * entries[i]["R"]).conjugate())
            ok = ok and gap == cross + cross.conjugate()
    _report(10, "dual reductions both give A2,3 = 1/8; identical-vs-"
                "distinguishable gap equals the interference cross term", ok)
