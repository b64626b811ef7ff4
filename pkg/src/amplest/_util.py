"""Small numeric helpers shared across modules."""

from __future__ import annotations

import math


def ceil_guarded(x: float) -> int:
    """Ceiling with a one-part-in-1e12 guard against float noise.

    Quantities like ``eps**-2`` or ``0.95 * runs`` can land a few ulps above
    an exact integer; a bare ceil would then overshoot by one.
    """
    return math.ceil(x - abs(x) * 1e-12)
