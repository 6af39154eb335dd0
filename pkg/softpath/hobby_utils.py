#!/usr/bin/env python

from __future__ import annotations

import cmath
import math
from logging import getLogger

from .geom_utils import SPAN_TOLERANCE
from .types import DegenerateSpan, HobbyJoin, Point, Segment, ZeroTangent

###############################################################################

log = getLogger(__name__)

###############################################################################

# Velocity bounds, as in METAFONT's velocity routine
VELOCITY_CAP = 4.0
VELOCITY_FLOOR = 0.01
DENOMINATOR_FLOOR = 1e-12

# Departure or arrival angles beyond this (degrees) are nearly reversed
REVERSED_ANGLE_DEG = 170.0

SQRT2 = math.sqrt(2.0)
SQRT5 = math.sqrt(5.0)

###############################################################################


def velocity(theta: float, phi: float) -> float:
    """
    Hobby's velocity function at tension 1.

    Parameters
    ----------
    theta: float
        Angle (radians) from the chord to the departure direction.
    phi: float
        Angle (radians) from the arrival direction to the chord.

    Returns
    -------
    float
        Control distance as a multiple of a third of the chord, clamped to
        [VELOCITY_FLOOR, VELOCITY_CAP].
    """
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(phi), math.cos(phi)
    denominator = 1 + 0.5 * (SQRT5 - 1) * ct + 0.5 * (3 - SQRT5) * cp
    # vanishes only when both angles are a half turn
    if denominator <= DENOMINATOR_FLOOR:
        return VELOCITY_CAP
    rho = (2 + SQRT2 * (st - sp / 16) * (sp - st / 16) * (ct - cp)) / denominator
    return min(max(rho, VELOCITY_FLOOR), VELOCITY_CAP)


def hobby_curve(join: HobbyJoin) -> Segment:
    """
    Cubic from p0 to p1 leaving along dir0 and arriving along dir1.

    Parameters
    ----------
    join: HobbyJoin
        End points and the tangent directions there. Only the directions of
        dir0 and dir1 matter.

    Returns
    -------
    Segment
        A cubic segment starting at join.p0.

    Raises
    ------
    DegenerateSpan
        If the end points are within SPAN_TOLERANCE of each other.
    ZeroTangent
        If either direction vector is zero.
    """
    z0, z1 = join.p0.as_complex(), join.p1.as_complex()
    w0, w1 = join.dir0.as_complex(), join.dir1.as_complex()
    chord = z1 - z0
    if abs(chord) <= SPAN_TOLERANCE:
        raise DegenerateSpan(
            f"Cannot join {join.p0} to {join.p1} with a curve, they are too close"
        )
    if w0 == 0 or w1 == 0:
        raise ZeroTangent("Hobby join needs non-zero tangent directions")

    theta = cmath.phase(w0 / chord)
    phi = cmath.phase(chord / w1)
    if max(abs(theta), abs(phi)) > math.radians(REVERSED_ANGLE_DEG):
        log.warning(
            f"Joining {join.p0} to {join.p1} against nearly reversed tangents, "
            f"the curve may loop"
        )

    rho = velocity(theta, phi)
    sigma = velocity(phi, theta)
    c1 = z0 + (rho / 3) * abs(chord) * w0 / abs(w0)
    c2 = z1 - (sigma / 3) * abs(chord) * w1 / abs(w1)
    return Segment.cubic(Point.from_complex(c1), Point.from_complex(c2), join.p1)
