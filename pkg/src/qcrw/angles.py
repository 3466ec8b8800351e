"""Angle arithmetic helpers.

All angles are float radians.  Structural comparisons are made modulo the
gate's period (2*pi, or 4*pi for X-rotations) with absolute tolerance
EPS_ANGLE.
"""

import math

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi

#: absolute tolerance used when unifying/comparing angles structurally
EPS_ANGLE = 1e-9


def norm(angle: float, period: float = TWO_PI) -> float:
    """Reduce `angle` into [0, period)."""
    a = math.fmod(angle, period)
    if a < 0.0:
        a += period
    # fmod can return exactly `period` through rounding of negative inputs
    if a >= period:
        a -= period
    return a


def eq(a: float, b: float, period: float = TWO_PI, eps: float = EPS_ANGLE) -> bool:
    """True when a == b modulo `period`, within absolute tolerance `eps`."""
    d = norm(a - b, period)
    return d <= eps or period - d <= eps


def is_zero(a: float, period: float = TWO_PI, eps: float = EPS_ANGLE) -> bool:
    return eq(a, 0.0, period, eps)


def fmt(a: float) -> str:
    """Canonical textual form: 12 significant digits, no trailing cruft."""
    if a == 0.0:
        return "0"
    return f"{a:.12g}"
