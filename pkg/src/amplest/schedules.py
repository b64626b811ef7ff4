"""Grover-depth schedules and their call/information aggregates.

A schedule is the ordered list of Grover depths at which measurement
batches are taken, together with per-depth shot fractions. Two scalar
aggregates drive all resource planning:

* ``call_weight``  = sum_j F_j * (2 d_j + 1), the oracle calls incurred
  per planned shot, and
* ``info_weight``  = sqrt(sum_j F_j * (2 d_j + 1)^2), whose square scales
  the Fisher information of the measurement record.

All operations are pure; ``Schedule`` values are immutable and safe to
share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ._util import ceil_guarded

__all__ = [
    "Schedule",
    "BaseBounds",
    "exponential_schedule",
    "exponential_schedule_to_depth",
    "polynomial_schedule",
    "jitter",
    "call_weight",
    "info_weight",
    "info_weight_squared",
    "closed_form_weights",
    "base_bounds",
    "round_half_away",
]

_KINDS = ("exp", "exp_nu", "poly", "jittered", "custom")


def round_half_away(x: float) -> int:
    """Round to the nearest integer, halves away from zero."""
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


@dataclass(frozen=True)
class Schedule:
    """An ordered list of Grover depths with per-depth shot fractions.

    ``fractions`` are exact rationals so that jitter-group sums can be
    checked without drift; they are 1 everywhere for unjittered kinds.
    ``nu`` is the geometric base of an ``exp_nu`` schedule, ``spread_coeff``
    the jitter coefficient, and ``beta`` the polynomial depth-exponent
    parameter; each is present only where it applies.
    """

    depths: tuple[int, ...]
    fractions: tuple[Fraction, ...]
    kind: str
    nu: float | None = None
    spread_coeff: float | None = None
    beta: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if not self.depths:
            raise ValueError("schedule must contain at least one depth")
        if len(self.depths) != len(self.fractions):
            raise ValueError("depths and fractions must have equal length")
        if any(d < 0 for d in self.depths):
            raise ValueError("depths must be non-negative")
        pairs = zip(self.depths, self.depths[1:])
        if self.kind == "poly":
            if any(b < a for a, b in pairs):
                raise ValueError("poly schedule depths must be non-decreasing")
        elif any(b <= a for a, b in pairs):
            raise ValueError(f"{self.kind} schedule depths must be strictly ascending")
        if self.kind in ("exp", "exp_nu") and self.depths[0] != 0:
            raise ValueError(f"{self.kind} schedule must start at depth 0")
        if any(not (0 < f <= 1) for f in self.fractions):
            raise ValueError("shot fractions must lie in (0, 1]")
        for lo, hi in self._groups():
            total = sum(self.fractions[lo:hi], Fraction(0))
            if total != 1:
                raise ValueError(
                    f"jitter group {self.depths[lo]}..{self.depths[hi - 1]} "
                    f"has fraction sum {total}, expected 1"
                )

    def _groups(self) -> Iterable[tuple[int, int]]:
        """Index ranges [lo, hi) of contiguous fractional jitter groups."""
        i, n = 0, len(self.depths)
        while i < n:
            if self.fractions[i] == 1:
                i += 1
                continue
            j = i + 1
            while (
                j < n
                and self.fractions[j] == self.fractions[i]
                and self.depths[j] == self.depths[j - 1] + 1
            ):
                j += 1
            yield i, j
            i = j

    @property
    def max_depth(self) -> int:
        return self.depths[-1]

    def to_dict(self) -> dict:
        """JSON-ready ``{"kind", "depths", "fractions", ...}`` mapping."""
        out: dict = {
            "kind": self.kind,
            "depths": list(self.depths),
            "fractions": [[f.numerator, f.denominator] for f in self.fractions],
        }
        if self.nu is not None:
            out["nu"] = self.nu
        if self.spread_coeff is not None:
            out["spread_coeff"] = self.spread_coeff
        if self.beta is not None:
            out["beta"] = self.beta
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Schedule":
        return cls(
            depths=tuple(int(d) for d in data["depths"]),
            fractions=tuple(Fraction(n, d) for n, d in data["fractions"]),
            kind=data["kind"],
            nu=data.get("nu"),
            spread_coeff=data.get("spread_coeff"),
            beta=data.get("beta"),
        )


def _unit_fractions(n: int) -> tuple[Fraction, ...]:
    return (Fraction(1),) * n


def exponential_schedule(num_depths: int) -> Schedule:
    """Schedule {0, 1, 2, 4, ..., 2^(q-2)} with ``q = num_depths`` entries."""
    if num_depths < 2:
        raise ValueError("exponential schedule needs at least 2 depths")
    depths = (0,) + tuple(2 ** (j - 1) for j in range(1, num_depths))
    return Schedule(depths, _unit_fractions(num_depths), kind="exp")


def exponential_schedule_to_depth(max_depth: int) -> Schedule:
    """Geometric schedule {0, 1, round(nu), round(nu^2), ...} ending at ``max_depth``.

    The base ``nu = max_depth**(1/m)`` is chosen, over integer m >= 1, as the
    value closest to 2, so the schedule stays near the plain doubling one
    while hitting ``max_depth`` exactly. Ties prefer the smaller m (larger
    base), which uses fewer depths. ``max_depth = 1`` degenerates to {0, 1}.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    if max_depth == 1:
        return Schedule((0, 1), _unit_fractions(2), kind="exp_nu")
    best_m, best_nu = 1, float(max_depth)
    for m in range(1, max_depth.bit_length() + 2):
        nu = max_depth ** (1.0 / m)
        if abs(nu - 2.0) < abs(best_nu - 2.0):
            best_m, best_nu = m, nu
    q = best_m + 2
    depths = [0] + [round_half_away(best_nu ** (j - 1)) for j in range(1, q - 1)]
    depths.append(max_depth)
    return Schedule(tuple(depths), _unit_fractions(q), kind="exp_nu", nu=best_nu)


def polynomial_schedule(beta: float, epsilon: float) -> Schedule:
    """Depth-limited schedule {round(j^((1-beta)/(2*beta)))} for j = 1..q.

    ``q = ceil(max(epsilon^(-2*beta), ln(1/epsilon)))``. Duplicate depths are
    kept: each entry is an independent measurement batch, and collapsing
    them would change the call count.
    """
    if not 0 < beta <= 1:
        raise ValueError("beta must lie in (0, 1]")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    q = ceil_guarded(max(epsilon ** (-2.0 * beta), math.log(1.0 / epsilon)))
    exponent = (1.0 - beta) / (2.0 * beta)
    depths = tuple(round_half_away(j**exponent) for j in range(1, q + 1))
    return Schedule(depths, _unit_fractions(q), kind="poly", beta=beta)


def jitter(schedule: Schedule, spread_coeff: float) -> Schedule:
    """Spread each depth's shots over a logarithmic-width band of nearby depths.

    Walks the schedule from the largest depth down. A depth d with spread
    w = round(ln(spread_coeff * d)) is replaced by the band of depths

    * [d - w, d]                for the maximum depth (never exceed it),
    * [d - w, d + w]            for interior depths,
    * [max(0, d - w), d + w]    for a nonzero minimum depth,

    but only when the band keeps a gap of at least one depth to both the
    next-smaller original depth and the bands already placed above; larger
    depths win these conflicts. Depth 0 is never spread. Each band's shot
    fractions are equal and sum to 1.
    """
    if spread_coeff <= 0:
        raise ValueError("spread_coeff must be positive")
    depths = schedule.depths
    if len(depths) < 2:
        raise ValueError("jitter needs a schedule with at least 2 depths")
    if any(b <= a for a, b in zip(depths, depths[1:])):
        raise ValueError("jitter needs strictly ascending depths")

    out_depths: list[int] = []  # built descending, reversed at the end
    out_fractions: list[Fraction] = []
    for i in range(len(depths) - 1, -1, -1):
        d = depths[i]
        lower = upper = d
        do_jitter = False
        if d > 0:
            # spread_coeff * d < 1 would give a negative width and an empty
            # band that swallows the depth; clamp to a width-zero band instead
            w = max(0, round_half_away(math.log(spread_coeff * d)))
            if d == depths[-1]:
                lower, upper = d - w, d
                do_jitter = lower > depths[i - 1] + 1
            elif d > depths[0]:
                lower, upper = d - w, d + w
                do_jitter = lower > depths[i - 1] + 1 and upper < out_depths[-1] - 1
            else:  # nonzero minimum depth
                lower, upper = max(0, d - w), d + w
                do_jitter = upper < out_depths[-1] - 1
        if do_jitter:
            share = Fraction(1, upper - lower + 1)
            for jittered_depth in range(upper, lower - 1, -1):
                out_depths.append(jittered_depth)
                out_fractions.append(share)
        else:
            out_depths.append(d)
            out_fractions.append(Fraction(1))
    return Schedule(
        tuple(reversed(out_depths)),
        tuple(reversed(out_fractions)),
        kind="jittered",
        nu=schedule.nu,
        spread_coeff=float(spread_coeff),
        beta=schedule.beta,
    )


def _weight_sums(schedule: Schedule) -> tuple[Fraction, Fraction]:
    linear = Fraction(0)
    quadratic = Fraction(0)
    for d, f in zip(schedule.depths, schedule.fractions):
        c = 2 * d + 1
        linear += f * c
        quadratic += f * c * c
    return linear, quadratic


def call_weight(schedule: Schedule) -> float:
    """Fraction-weighted sum of (2d + 1): oracle calls per planned shot."""
    return float(_weight_sums(schedule)[0])


def info_weight(schedule: Schedule) -> float:
    """sqrt of the fraction-weighted sum of (2d + 1)^2."""
    return math.sqrt(info_weight_squared(schedule))


def info_weight_squared(schedule: Schedule) -> float:
    """Fraction-weighted sum of (2d + 1)^2, exact before the float cast."""
    return float(_weight_sums(schedule)[1])


def closed_form_weights(max_depth: int) -> tuple[float, float]:
    """(call_weight, info_weight) of the doubling schedule ending at a power of 2.

    Valid only for ``max_depth = 2^k``, k >= 1, where the geometric sums
    collapse to ``4d + log2(d)`` and ``sqrt(16d^2/3 + 8d + log2(d) - 10/3)``.
    """
    if max_depth < 2 or max_depth & (max_depth - 1):
        raise ValueError("closed form requires max_depth to be a power of 2, >= 2")
    log2d = float(max_depth.bit_length() - 1)
    linear = 4.0 * max_depth + log2d
    quadratic = 16.0 * max_depth**2 / 3.0 + 8.0 * max_depth + log2d - 10.0 / 3.0
    return linear, math.sqrt(quadratic)


@dataclass(frozen=True)
class BaseBounds:
    """Bounds on the geometric base of a fitted exponential schedule."""

    lower: float
    upper: float
    num_depths: int


def base_bounds(num_depths: int) -> BaseBounds:
    """Bounds 2^((q-3)/(q-2)) < nu < 2^((q-1)/(q-2)) for a q-depth schedule.

    Both bounds tend to 2 as q grows, so fitted schedules approach plain
    doubling at large maximum depth. Requires q >= 3.
    """
    if num_depths < 3:
        raise ValueError("base bounds need at least 3 depths")
    q = num_depths
    return BaseBounds(
        lower=2.0 ** ((q - 3) / (q - 2)),
        upper=2.0 ** ((q - 1) / (q - 2)),
        num_depths=q,
    )
