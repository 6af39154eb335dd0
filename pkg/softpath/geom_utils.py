#!/usr/bin/env python

from __future__ import annotations

import math
from functools import reduce
from logging import getLogger
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from .types import DegenerateSpan, InvalidArc, Point, Transform2D

###############################################################################

log = getLogger(__name__)

###############################################################################

# Spans fail when the path ends this close to where it starts
SPAN_TOLERANCE = 0.01

# Largest sweep approximated by a single cubic
MAX_ARC_PIECE_DEG = 90.0

CubicTriple = Tuple[Point, Point, Point]

###############################################################################


class ArcCenter(NamedTuple):
    center: Point
    rx: float
    ry: float
    start_deg: float
    sweep_deg: float


def identity() -> Transform2D:
    return Transform2D()


def translation(dx: float, dy: float) -> Transform2D:
    return Transform2D(e=dx, f=dy)


def rotation(degrees: float) -> Transform2D:
    theta = math.radians(degrees)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    return Transform2D(cos_t, sin_t, -sin_t, cos_t)


def scaling(sx: float, sy: Optional[float] = None) -> Transform2D:
    return Transform2D(a=sx, d=sx if sy is None else sy)


def compose(*transforms: Transform2D) -> Transform2D:
    """
    Compose transforms so that the leftmost one is applied first.

    Parameters
    ----------
    transforms: Transform2D
        Transforms in the order they act on a point.

    Returns
    -------
    Transform2D
        The single affine map equal to applying every input in turn.
    """
    if not transforms:
        return identity()

    matrix = reduce(
        lambda acc, t: t.matrix() @ acc,
        transforms[1:],
        transforms[0].matrix(),
    )
    return Transform2D.from_matrix(matrix)


def apply(t: Transform2D, p: Point) -> Point:
    return Point(t.a * p.x + t.c * p.y + t.e, t.b * p.x + t.d * p.y + t.f)


def is_finite(t: Transform2D) -> bool:
    return bool(np.all(np.isfinite(np.asarray(t, dtype=float))))


def similarity_from_endpoints(
    p0: Point, p1: Point, q0: Point, q1: Point
) -> Transform2D:
    """
    Rotation, uniform scaling and translation taking p0 to q0 and p1 to q1.

    Parameters
    ----------
    p0: Point
        Source start point.
    p1: Point
        Source end point.
    q0: Point
        Target for p0.
    q1: Point
        Target for p1.

    Returns
    -------
    Transform2D
        A similarity with positive determinant (never a reflection).

    Raises
    ------
    DegenerateSpan
        If p0 and p1 are within SPAN_TOLERANCE of each other.
    """
    source = p1.as_complex() - p0.as_complex()
    if abs(source) <= SPAN_TOLERANCE:
        raise DegenerateSpan(
            f"Cannot span a path whose ends {p0} and {p1} are this close together"
        )

    w = (q1.as_complex() - q0.as_complex()) / source
    offset = q0.as_complex() - w * p0.as_complex()
    return Transform2D(w.real, w.imag, -w.imag, w.real, offset.real, offset.imag)


def reflection_across_line(a: Point, b: Point) -> Transform2D:
    """Mirror in the line through a and b."""
    direction = complex(b.x - a.x, b.y - a.y)
    if direction == 0:
        raise DegenerateSpan(f"No line through the coincident points {a} and {b}")

    # z -> a + u^2 * conj(z - a) for the unit direction u
    w = (direction / abs(direction)) ** 2
    offset = a.as_complex() - w * a.as_complex().conjugate()
    return Transform2D(w.real, w.imag, w.imag, -w.real, offset.real, offset.imag)


def arc_to_cubics(
    center: Point,
    rx: float,
    ry: float,
    start_deg: float,
    end_deg: float,
    rotation_deg: float = 0.0,
) -> List[CubicTriple]:
    """
    Approximate an elliptical arc by cubic Bezier pieces of at most 90 degrees.

    Parameters
    ----------
    center: Point
        Ellipse center.
    rx: float
        Radius along the (rotated) x-axis.
    ry: float
        Radius along the (rotated) y-axis.
    start_deg: float
        Start angle in degrees.
    end_deg: float
        End angle in degrees; may be less than start_deg for clockwise arcs.
    rotation_deg: float
        Rotation of the ellipse axes in degrees.
        Default: 0.0

    Returns
    -------
    List[CubicTriple]
        (c1, c2, to) per piece; the first piece starts at the arc start point.

    Raises
    ------
    InvalidArc
        On non-positive radii or a sweep of more than a full turn.
    """
    if not (rx > 0 and ry > 0):
        raise InvalidArc(f"Arc radii must be positive, got rx={rx}, ry={ry}")

    sweep = end_deg - start_deg
    if abs(sweep) > 360.0 + 1e-9:
        raise InvalidArc(f"Arc sweep of {sweep} degrees exceeds a full turn")
    if sweep == 0:
        return []

    num_pieces = max(1, math.ceil(abs(sweep) / MAX_ARC_PIECE_DEG - 1e-9))
    delta = math.radians(sweep) / num_pieces
    k = 4.0 / 3.0 * math.tan(delta / 4.0)

    phi = math.radians(rotation_deg)
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)

    def _to_ellipse(x: float, y: float) -> Point:
        x, y = x * rx, y * ry
        return Point(
            center.x + cos_phi * x - sin_phi * y,
            center.y + sin_phi * x + cos_phi * y,
        )

    pieces: List[CubicTriple] = []
    theta0 = math.radians(start_deg)
    for i in range(num_pieces):
        a0 = theta0 + i * delta
        a1 = a0 + delta
        cos0, sin0 = math.cos(a0), math.sin(a0)
        cos1, sin1 = math.cos(a1), math.sin(a1)
        pieces.append(
            (
                _to_ellipse(cos0 - k * sin0, sin0 + k * cos0),
                _to_ellipse(cos1 + k * sin1, sin1 - k * cos1),
                _to_ellipse(cos1, sin1),
            )
        )

    return pieces


def _angle_between_deg(ux: float, uy: float, vx: float, vy: float) -> float:
    return math.degrees(math.atan2(ux * vy - uy * vx, ux * vx + uy * vy))


def endpoint_arc_to_center(
    p0: Point,
    p1: Point,
    rx: float,
    ry: float,
    rotation_deg: float,
    large_arc: bool,
    sweep: bool,
) -> Optional[ArcCenter]:
    """
    Convert an SVG endpoint-parametrised arc to center parametrisation.

    Parameters
    ----------
    p0: Point
        Current point.
    p1: Point
        Arc end point.
    rx: float
        Requested x radius (sign ignored).
    ry: float
        Requested y radius (sign ignored).
    rotation_deg: float
        Rotation of the ellipse x-axis.
    large_arc: bool
        Choose the arc sweeping more than 180 degrees.
    sweep: bool
        True for increasing angle.

    Returns
    -------
    Optional[ArcCenter]
        None when the end points coincide (the arc is omitted).

    Notes
    -----
    Radii too small to reach p1 are scaled up uniformly, as SVG renderers do.
    Zero radii are the caller's concern (SVG draws a straight line).
    """
    if p0 == p1:
        return None

    rx, ry = abs(rx), abs(ry)
    phi = math.radians(rotation_deg)
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)

    half_dx = (p0.x - p1.x) / 2.0
    half_dy = (p0.y - p1.y) / 2.0
    x1p = cos_phi * half_dx + sin_phi * half_dy
    y1p = -sin_phi * half_dx + cos_phi * half_dy

    scale = (x1p * x1p) / (rx * rx) + (y1p * y1p) / (ry * ry)
    if scale > 1:
        rx *= math.sqrt(scale)
        ry *= math.sqrt(scale)

    rx2, ry2 = rx * rx, ry * ry
    numerator = rx2 * ry2 - rx2 * y1p * y1p - ry2 * x1p * x1p
    denominator = rx2 * y1p * y1p + ry2 * x1p * x1p
    coef = math.sqrt(max(0.0, numerator / denominator))
    if large_arc == sweep:
        coef = -coef

    cxp = coef * rx * y1p / ry
    cyp = -coef * ry * x1p / rx
    center = Point(
        cos_phi * cxp - sin_phi * cyp + (p0.x + p1.x) / 2.0,
        sin_phi * cxp + cos_phi * cyp + (p0.y + p1.y) / 2.0,
    )

    ux, uy = (x1p - cxp) / rx, (y1p - cyp) / ry
    vx, vy = (-x1p - cxp) / rx, (-y1p - cyp) / ry
    start_deg = _angle_between_deg(1.0, 0.0, ux, uy)
    sweep_deg = _angle_between_deg(ux, uy, vx, vy)
    if not sweep and sweep_deg > 0:
        sweep_deg -= 360.0
    elif sweep and sweep_deg < 0:
        sweep_deg += 360.0

    return ArcCenter(center, rx, ry, start_deg, sweep_deg)
