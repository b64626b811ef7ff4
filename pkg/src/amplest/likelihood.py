"""Log-likelihood evaluation and exhaustive grid maximization.

The log-likelihood of a record is a sum over depths of binomial terms
``hits * ln(p) + (shots - hits) * ln(1 - p)`` with ``p`` the good-state
probability at the candidate angle. Zero-count terms are dropped (the
``0 * ln 0 = 0`` convention), and an impossible outcome (``p = 0`` with
hits, or ``p = 1`` with misses) scores exactly ``-inf`` rather than some
clamped finite value: the exact zeros are what create the exceptional
amplitudes, and clamping would mask them.

Maximization evaluates the log-likelihood at ``grid_size`` evenly spaced
angles spanning [0, pi/2] inclusive and takes the first maximizer (ties
break toward smaller angle). The hot path precomputes per-depth rows of
``ln p`` and ``ln(1 - p)`` over the grid once per (depths, grid_size), so
one run reduces to two vector-matrix products. Grid columns where some
``p`` is exactly 0 or 1 are patched afterwards with the exact-semantics
scalar rule; everywhere else the tables contain no infinities and the
product is plain float arithmetic. Evaluation order is fixed, so results
do not depend on batching or thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .planner import Plan
from .sampler import MeasurementRecord, amplitude_from_angle, draw_record, good_prob

__all__ = [
    "Estimate",
    "depth_log_likelihood",
    "record_log_likelihood",
    "grid_maximize",
    "run_mlqae",
]

_NEG_CLAMP = -1e300  # stands in for -inf inside the matmul tables


@dataclass(frozen=True)
class Estimate:
    """The maximizing grid point of a record's log-likelihood."""

    theta_hat: float
    a_hat: float
    grid_index: int
    log_likelihood: float
    grid_size: int

    def to_dict(self) -> dict:
        return {
            "theta_hat": self.theta_hat,
            "a_hat": self.a_hat,
            "grid_index": self.grid_index,
            "log_likelihood": self.log_likelihood,
            "grid_size": self.grid_size,
        }


def depth_log_likelihood(theta: float, depth: int, shots: int, hits: int) -> float:
    """Log-likelihood of ``hits`` good outcomes in ``shots`` at one depth."""
    if not 0 <= hits <= shots:
        raise ValueError(f"hits {hits} outside [0, {shots}]")
    p = good_prob(theta, depth)
    ll = 0.0
    if hits > 0:
        ll += hits * math.log(p) if p > 0.0 else -math.inf
    if shots - hits > 0:
        ll += (shots - hits) * math.log1p(-p) if p < 1.0 else -math.inf
    return ll


def record_log_likelihood(theta: float, record: MeasurementRecord) -> float:
    """Combined log-likelihood of a record; -inf propagates through the sum."""
    return sum(
        (depth_log_likelihood(theta, e.depth, e.shots, e.hits) for e in record.entries),
        0.0,
    )


def grid_angles(grid_size: int) -> np.ndarray:
    """``grid_size`` evenly spaced angles covering [0, pi/2] inclusive."""
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    return np.arange(grid_size) * (math.pi / 2.0 / (grid_size - 1))


class GridTables:
    """Per-(depths, grid) log-probability tables shared across runs."""

    def __init__(self, depths: tuple[int, ...], grid_size: int):
        self.depths = depths
        self.grid_size = grid_size
        thetas = grid_angles(grid_size)
        factors = np.array([2 * d + 1 for d in depths], dtype=np.float64)
        probs = np.sin(np.outer(factors, thetas)) ** 2
        with np.errstate(divide="ignore"):
            self.log_p = np.maximum(np.log(probs), _NEG_CLAMP)
            self.log_q = np.maximum(np.log1p(-probs), _NEG_CLAMP)
        exact_cols = np.flatnonzero(((probs == 0.0) | (probs == 1.0)).any(axis=0))
        self.exact_cols = exact_cols
        self.probs_at_exact = probs[:, exact_cols].copy()
        del probs

    def argmax(self, shots: np.ndarray, hits: np.ndarray) -> tuple[int, float]:
        """First-maximum grid index and value of the record's log-likelihood."""
        misses = (shots - hits).astype(np.float64)
        hits = hits.astype(np.float64)
        values = hits @ self.log_p + misses @ self.log_q
        if self.exact_cols.size:
            values[self.exact_cols] = self._exact_values(hits, misses)
        idx = int(np.argmax(values))
        return idx, float(values[idx])

    def _exact_values(self, hits: np.ndarray, misses: np.ndarray) -> np.ndarray:
        p = self.probs_at_exact
        with np.errstate(divide="ignore", invalid="ignore"):
            good = np.where(hits[:, None] > 0, hits[:, None] * np.log(p), 0.0)
            bad = np.where(misses[:, None] > 0, misses[:, None] * np.log1p(-p), 0.0)
        return (good + bad).sum(axis=0)


@lru_cache(maxsize=3)
def _cached_tables(depths: tuple[int, ...], grid_size: int) -> GridTables:
    return GridTables(depths, grid_size)


def _estimate_from_index(idx: int, value: float, grid_size: int) -> Estimate:
    theta = idx * (math.pi / 2.0 / (grid_size - 1))
    return Estimate(
        theta_hat=theta,
        a_hat=amplitude_from_angle(theta),
        grid_index=idx,
        log_likelihood=value,
        grid_size=grid_size,
    )


def grid_maximize(record: MeasurementRecord, grid_size: int) -> Estimate:
    """Exhaustively maximize the record's log-likelihood over the angle grid."""
    tables = _cached_tables(tuple(e.depth for e in record.entries), grid_size)
    shots = np.array([e.shots for e in record.entries], dtype=np.int64)
    hits = np.array([e.hits for e in record.entries], dtype=np.int64)
    idx, value = tables.argmax(shots, hits)
    return _estimate_from_index(idx, value, grid_size)


def run_mlqae(a_true: float, plan: Plan, seed: int) -> Estimate:
    """Draw one simulated record under ``plan`` and estimate the amplitude."""
    record = draw_record(a_true, plan.schedule, plan.n_shot, seed)
    return grid_maximize(record, plan.grid_size)
