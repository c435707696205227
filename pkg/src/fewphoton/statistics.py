"""Trial sampling and Clopper-Pearson interval analysis.

The sampler is counter-based: the uniform variate of trial i depends
only on (seed, i) through a SplitMix64 hash, so counts are bit-identical
no matter how the trial range is chunked across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .amplitude import to_float
from .outcomes import Outcome, OutcomeTable

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def _splitmix64_uniform(seed: int, indices: np.ndarray) -> np.ndarray:
    """Uniform [0, 1) variates keyed by (seed, trial index)."""
    x = (np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
         + (indices.astype(np.uint64) + np.uint64(1)) * _GOLDEN)
    z = x
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * (2.0**-53)


@dataclass
class TrialCounts:
    counts: dict[Outcome, int]
    n_trials: int
    seed: int

    def count(self, outcome: Outcome) -> int:
        return self.counts.get(outcome, 0)


def sample(table: OutcomeTable, n_trials: int, seed: int,
           n_threads: int = 1) -> TrialCounts:
    """Multinomial draw from an outcome table, seed-deterministic.

    ``n_threads`` splits the trial-index range across a thread pool;
    the result never depends on it.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    outcomes = table.sorted_outcomes()
    probs = np.array([table.get_float(o) for o in outcomes])
    edges = np.cumsum(probs)
    edges[-1] = max(edges[-1], 1.0)  # guard the last bin against rounding

    def chunk_counts(lo: int, hi: int) -> np.ndarray:
        u = _splitmix64_uniform(seed, np.arange(lo, hi, dtype=np.uint64))
        picks = np.searchsorted(edges, u, side="right")
        return np.bincount(picks, minlength=len(outcomes))

    if n_threads <= 1:
        totals = chunk_counts(0, n_trials)
    else:
        from concurrent.futures import ThreadPoolExecutor

        bounds = np.linspace(0, n_trials, n_threads + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            parts = list(pool.map(lambda se: chunk_counts(*se),
                                  zip(bounds[:-1], bounds[1:])))
        totals = np.sum(parts, axis=0)
    counts = {o: int(c) for o, c in zip(outcomes, totals) if c > 0}
    return TrialCounts(counts, n_trials, seed)


# ---------------------------------------------------------------------------
# Clopper-Pearson intervals


_LOG_FACTORIALS: dict[int, np.ndarray] = {}


def _log_factorials(n: int) -> np.ndarray:
    table = _LOG_FACTORIALS.get(n)
    if table is None:
        table = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, n + 1)))))
        _LOG_FACTORIALS[n] = table
    return table


def _log_binom_tail(n: int, ks: np.ndarray, p: float) -> float:
    """log of the binomial tail sum over the given support points."""
    if p <= 0.0:
        return 0.0 if 0 in ks else -np.inf
    if p >= 1.0:
        return 0.0 if n in ks else -np.inf
    lf = _log_factorials(n)
    log_c = lf[n] - lf[ks] - lf[n - ks]
    logs = log_c + ks * math.log(p) + (n - ks) * math.log1p(-p)
    peak = logs.max()
    return float(peak + np.log(np.sum(np.exp(logs - peak))))


def clopper_pearson(successes: int, n_trials: int,
                    confidence: float = 0.95) -> tuple[float, float]:
    """Exact binomial confidence interval by bisection on tail sums."""
    if not (0 <= successes <= n_trials):
        raise ValueError("successes must lie in [0, n_trials]")
    if not (0.0 < confidence < 1.0):
        raise ValueError("confidence must lie in (0, 1)")
    alpha = 1.0 - confidence
    k, n = successes, n_trials

    def solve(target_log, ks, increasing) -> float:
        # find p with log-tail(p) == target; an upper tail increases with
        # p, a lower tail decreases, so the bisection direction flips
        lo_p, hi_p = 0.0, 1.0
        for _ in range(200):
            mid = 0.5 * (lo_p + hi_p)
            val = _log_binom_tail(n, ks, mid)
            if (val > target_log) == increasing:
                hi_p = mid
            else:
                lo_p = mid
            if hi_p - lo_p < 1e-12:
                break
        return 0.5 * (lo_p + hi_p)

    target = math.log(alpha / 2.0)
    if k == 0:
        lower = 0.0
    else:
        # P(X >= k | lower) = alpha/2  <=>  upper tail increasing in p
        ks_upper = np.arange(k, n + 1)
        lower = solve(target, ks_upper, increasing=True)
    if k == n:
        upper = 1.0
    else:
        # P(X <= k | upper) = alpha/2; lower tail decreasing in p
        ks_lower = np.arange(0, k + 1)
        upper = solve(target, ks_lower, increasing=False)
    return lower, upper


# ---------------------------------------------------------------------------
# Coincidence extraction and the sampling study


def coincidence(table: OutcomeTable, detectors) -> float:
    """Probability of the given detector multiset firing exactly.

    ``detectors`` may repeat a name (two photons at one detector); the
    empty collection returns the total probability.
    """
    wanted: dict[str, int] = {}
    for d in detectors:
        wanted[d] = wanted.get(d, 0) + 1
    known = table.meta.get("detectors")
    if known is not None:
        for d in wanted:
            if d not in known:
                raise KeyError(f"unknown detector {d!r}")
    total = 0.0
    for outcome, p in table.items():
        if all(outcome.base_count(d) == n for d, n in wanted.items()):
            total += to_float(p)
    return total


@dataclass
class StudyRow:
    name: str
    p_true: float
    count: int
    p_hat: float
    cp_low: float
    cp_high: float
    contains: bool

    def to_dict(self) -> dict:
        return {
            "outcome": self.name,
            "p_true": self.p_true,
            "count": self.count,
            "p_hat": self.p_hat,
            "cp_lo": self.cp_low,
            "cp_hi": self.cp_high,
            "contains": self.contains,
        }


@dataclass
class StudyReport:
    rows: list[StudyRow]
    n_trials: int
    seed: int
    confidence: float
    meta: dict = field(default_factory=dict)

    def coverage(self) -> float:
        return sum(r.contains for r in self.rows) / len(self.rows)

    def to_dicts(self) -> list[dict]:
        return [r.to_dict() for r in self.rows]


def tracked_events(table: OutcomeTable, circuit) -> list[tuple[str, list[Outcome]]]:
    """Default tracked events: each no-loss outcome, plus any-photon-lost."""
    loss_terms = set(circuit.loss_terminals())
    events: list[tuple[str, list[Outcome]]] = []
    lost: list[Outcome] = []
    for outcome in table.sorted_outcomes():
        if outcome.terminals() & loss_terms:
            lost.append(outcome)
        else:
            events.append((outcome.label(), [outcome]))
    if lost:
        events.append(("lost", lost))
    return events


def study(circuit, inputs, n_trials: int, seed: int, confidence: float = 0.95,
          events: list[tuple[str, list[Outcome]]] | None = None,
          n_threads: int = 1) -> StudyReport:
    """Sample a circuit and compare empirical rates with exact values."""
    from . import path_engine

    table = path_engine.full_distribution(circuit, inputs)
    counts = sample(table, n_trials, seed, n_threads=n_threads)
    if events is None:
        events = tracked_events(table, circuit)
    rows = []
    for name, members in events:
        p_true = sum(table.get_float(o) for o in members)
        k = sum(counts.count(o) for o in members)
        low, high = clopper_pearson(k, n_trials, confidence)
        rows.append(StudyRow(
            name=name,
            p_true=p_true,
            count=k,
            p_hat=k / n_trials,
            cp_low=low,
            cp_high=high,
            contains=low <= p_true <= high,
        ))
    return StudyReport(rows, n_trials, seed, confidence)
