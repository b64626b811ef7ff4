"""Analytic simulation of ideal measurement records.

A circuit at Grover depth d measures a good state with probability
``sin^2((2d + 1) * theta_a)``, so a full run can be simulated by drawing
one binomial count per scheduled depth. Each depth draws from its own
counter-based substream keyed on (seed, depth_index), which makes records
bit-reproducible regardless of evaluation order or thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .rng import substream
from .schedules import Schedule

__all__ = [
    "RecordEntry",
    "MeasurementRecord",
    "angle_from_amplitude",
    "amplitude_from_angle",
    "good_prob",
    "binomial_draw",
    "draw_record",
]


class RecordEntry(NamedTuple):
    depth: int
    shots: int
    hits: int


@dataclass(frozen=True)
class MeasurementRecord:
    """Per-depth good-outcome counts, with provenance when simulated."""

    entries: tuple[RecordEntry, ...]
    a_true: float | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        for e in self.entries:
            if e.shots < 1:
                raise ValueError(f"entry at depth {e.depth} has no shots")
            if not 0 <= e.hits <= e.shots:
                raise ValueError(
                    f"entry at depth {e.depth}: hits {e.hits} outside [0, {e.shots}]"
                )
        depths = [e.depth for e in self.entries]
        if any(b < a for a, b in zip(depths, depths[1:])):
            raise ValueError("record depths must be non-decreasing")

    def to_dict(self) -> dict:
        out: dict = {
            "entries": [
                {"depth": e.depth, "shots": e.shots, "hits": e.hits}
                for e in self.entries
            ]
        }
        if self.a_true is not None:
            out["a_true"] = self.a_true
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "MeasurementRecord":
        return cls(
            entries=tuple(
                RecordEntry(int(e["depth"]), int(e["shots"]), int(e["hits"]))
                for e in data["entries"]
            ),
            a_true=data.get("a_true"),
            seed=data.get("seed"),
        )


def angle_from_amplitude(a: float) -> float:
    """theta = arcsin(sqrt(a)) in [0, pi/2]."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"amplitude must lie in [0, 1], got {a}")
    return math.asin(math.sqrt(a))


def amplitude_from_angle(theta: float) -> float:
    """a = sin^2(theta), inverse of :func:`angle_from_amplitude`."""
    s = math.sin(theta)
    return s * s


def good_prob(theta: float, depth: int) -> float:
    """Probability of a good outcome at ``depth``: sin^2((2*depth+1)*theta)."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    s = math.sin((2 * depth + 1) * theta)
    return s * s


def binomial_draw(n: int, p: float, rng: np.random.Generator) -> int:
    """One Binomial(n, p) draw; exact at the endpoints p = 0 and p = 1."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if n < 0:
        raise ValueError("n must be non-negative")
    if p == 0.0:
        return 0
    if p == 1.0:
        return n
    return int(rng.binomial(n, p))


def draw_record(
    a: float,
    schedule: Schedule,
    n_shot: int,
    seed: int,
) -> MeasurementRecord:
    """Simulate one estimation run's measurement record.

    A depth with shot fraction F performs ceil(F * n_shot) shots. Depth j
    draws from the substream (seed, j), so entries are independent of the
    order in which they are produced.
    """
    if n_shot < 1:
        raise ValueError("n_shot must be at least 1")
    theta = angle_from_amplitude(a)
    entries = []
    for j, (depth, fraction) in enumerate(zip(schedule.depths, schedule.fractions)):
        shots = math.ceil(fraction * n_shot)
        p = good_prob(theta, depth)
        hits = binomial_draw(shots, p, substream(seed, j))
        entries.append(RecordEntry(depth, shots, hits))
    return MeasurementRecord(tuple(entries), a_true=a, seed=seed)
