"""Resource planning: how many shots and oracle calls reach a target precision.

Under the Gaussian (Bernstein-von Mises) approximation, the estimate of an
amplitude ``a`` from a measurement record is normally distributed with
variance ``a(1-a) / (n_shot * info_weight^2)``. Requiring the estimate to
land within ``epsilon`` of ``a`` with probability ``1 - delta`` pins down
the Fisher information and hence the shot count; the worst case over the
unknown amplitude sits at ``a = 0.5``. All functions here are pure and
thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._util import ceil_guarded
from .schedules import (
    Schedule,
    call_weight,
    exponential_schedule_to_depth,
    info_weight,
    info_weight_squared,
    jitter,
)

__all__ = [
    "Plan",
    "erfinv",
    "required_fisher_info",
    "required_shots",
    "total_calls",
    "speedup_factor",
    "fisher_information",
    "average_error",
    "exceptional_values",
    "single_shot_fisher_info",
    "make_plan",
]

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


def erfinv(y: float) -> float:
    """Inverse of the error function, accurate to ~1e-15 relative.

    A closed-form seed (Winitzki's log-based approximation, ~1e-3 accurate)
    is polished by Newton iterations on ``erf``; for |y| > 0.9 the updates
    run on the complement ``erfc`` to dodge cancellation near 1. The result
    is odd in y by construction.
    """
    if not -1.0 < y < 1.0:
        raise ValueError(f"erfinv domain is (-1, 1), got {y}")
    if y == 0.0:
        return 0.0
    t = abs(y)

    # Winitzki 2008, eq. (7): uniform ~2e-3 relative error on (0, 1).
    alpha = 0.147
    lg = math.log1p(-t * t)
    u = 2.0 / (math.pi * alpha) + 0.5 * lg
    x = math.sqrt(math.sqrt(u * u - lg / alpha) - u)

    if t <= 0.9:
        for _ in range(4):
            x -= (math.erf(x) - t) / (_TWO_OVER_SQRT_PI * math.exp(-x * x))
    else:
        c = 1.0 - t  # exact for t >= 0.5
        for _ in range(4):
            x += (math.erfc(x) - c) * math.exp(x * x) / _TWO_OVER_SQRT_PI
    return math.copysign(x, y)


def required_fisher_info(epsilon: float, delta: float) -> float:
    """Fisher information needed for |estimate - a| <= epsilon w.p. 1 - delta."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    _check_delta(delta)
    z = erfinv(1.0 - delta)
    return 2.0 * z * z / (epsilon * epsilon)


def required_shots(
    epsilon: float,
    delta: float,
    schedule: Schedule,
    a: float | None = None,
) -> int:
    """Shots per scheduled depth to hit ``epsilon`` with probability 1 - delta.

    With the amplitude unknown (``a = None``) the worst case ``a = 0.5``
    applies. The real-valued requirement is rounded up so the Fisher
    information never undershoots.
    """
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 0.5)")
    _check_delta(delta)
    if a is None:
        scale = 0.25
    else:
        if not 0 < a < 1:
            raise ValueError("a must lie in (0, 1)")
        scale = a * (1.0 - a)
    z = erfinv(1.0 - delta)
    raw = 2.0 * scale * z * z / (info_weight_squared(schedule) * epsilon * epsilon)
    return max(1, ceil_guarded(raw))


def total_calls(schedule: Schedule, n_shot: int) -> int:
    """Oracle calls for ``n_shot`` planned shots, ceiling each depth's share.

    A depth carrying shot fraction F runs ceil(F * n_shot) shots of cost
    (2d + 1) calls each; with all fractions 1 this is n_shot * call_weight.
    Exact rational arithmetic, so the ceiling is never off by one.
    """
    if n_shot < 1:
        raise ValueError("n_shot must be at least 1")
    calls = 0
    for d, f in zip(schedule.depths, schedule.fractions):
        calls += math.ceil(f * n_shot) * (2 * d + 1)
    return calls


def speedup_factor(schedule: Schedule) -> float:
    """Call-count advantage over classical sampling: info_weight^2 / call_weight."""
    return info_weight_squared(schedule) / call_weight(schedule)


def fisher_information(a: float, schedule: Schedule, n_shot: int) -> float:
    """Fisher information about ``a`` in a record of ``n_shot`` shots per depth."""
    _check_open_interval(a)
    return n_shot * info_weight_squared(schedule) / (a * (1.0 - a))


def average_error(a: float, schedule: Schedule, n_shot: int) -> float:
    """Root-mean-square estimation error under the Gaussian approximation."""
    _check_open_interval(a)
    if n_shot < 1:
        raise ValueError("n_shot must be at least 1")
    return math.sqrt(a * (1.0 - a) / n_shot) / info_weight(schedule)


def exceptional_values(max_depth: int) -> list[float]:
    """Amplitudes where the deepest circuit yields good states w.p. 0 or 1.

    These are sin^2(k*pi / (2*(2d+1))) for k = 0..2d+1, in ascending order.
    Near them the log-likelihood develops singularities and the planned
    shot count stops being sufficient.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    half_steps = 2 * (2 * max_depth + 1)
    return [math.sin(k * math.pi / half_steps) ** 2 for k in range(2 * max_depth + 2)]


def single_shot_fisher_info(a: float, depth: int) -> float:
    """Fisher information of one shot at one depth: (2d+1)^2 / (a(1-a))."""
    _check_open_interval(a)
    if depth < 0:
        raise ValueError("depth must be non-negative")
    return (2 * depth + 1) ** 2 / (a * (1.0 - a))


@dataclass(frozen=True)
class Plan:
    """A fully resolved resource plan for one estimation run."""

    epsilon: float
    delta: float
    max_depth: int
    schedule: Schedule
    n_shot: int
    n_calls: int
    grid_size: int
    grid_multiplier: float = 3.0

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "delta": self.delta,
            "max_depth": self.max_depth,
            "schedule": self.schedule.to_dict(),
            "n_shot": self.n_shot,
            "n_calls": self.n_calls,
            "grid_size": self.grid_size,
            "grid_multiplier": self.grid_multiplier,
        }


def make_plan(
    epsilon: float,
    delta: float,
    max_depth: int,
    jittered: bool = False,
    spread_coeff: float = 2.0,
    grid_multiplier: float = 3.0,
) -> Plan:
    """Build the fitted exponential schedule for ``max_depth`` and budget it.

    ``max_depth = 0`` degenerates to classical sampling on the single depth
    0. With ``jittered`` set, the schedule is spread first and the shot
    count is computed from the jittered information weight.
    """
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 0.5)")
    _check_delta(delta)
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    if max_depth == 0:
        schedule = Schedule((0,), (Fraction(1),), kind="custom")
    else:
        schedule = exponential_schedule_to_depth(max_depth)
    if jittered:
        schedule = jitter(schedule, spread_coeff)
    n_shot = required_shots(epsilon, delta, schedule)
    return Plan(
        epsilon=epsilon,
        delta=delta,
        max_depth=max_depth,
        schedule=schedule,
        n_shot=n_shot,
        n_calls=total_calls(schedule, n_shot),
        grid_size=max(2, ceil_guarded(grid_multiplier / epsilon)),
        grid_multiplier=grid_multiplier,
    )


def _check_delta(delta: float) -> None:
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")


def _check_open_interval(a: float) -> None:
    if not 0 < a < 1:
        raise ValueError("a must lie strictly inside (0, 1)")
