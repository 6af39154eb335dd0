#!/usr/bin/env python

from __future__ import annotations

import math
from logging import getLogger
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .geom_utils import compose, rotation, translation
from .path_utils import iter_segments, reverse_path, transform_path, warn_if_empty
from .types import (
    Component,
    EmptyPath,
    Frame,
    InvalidRange,
    KeepSide,
    ParameterOutOfRange,
    PathEnd,
    PathLocation,
    Point,
    Segment,
    SegmentRef,
    SoftPath,
    Transform2D,
    Vec2,
)

###############################################################################

log = getLogger(__name__)

###############################################################################

# Cut parameters this close to a segment end are treated as the end
SNAP_TOLERANCE = 1e-9

# Samples per segment for arclength estimates
ARCLENGTH_SAMPLES = 256

# (segment index within a component or path, parameter on that segment)
Cut = Tuple[int, float]

###############################################################################


def _lerp(a: Point, b: Point, t: float) -> Point:
    # endpoint exact at t=0 and t=1
    return Point((1 - t) * a.x + t * b.x, (1 - t) * a.y + t * b.y)


def control_points(start: Point, segment: Segment) -> np.ndarray:
    """
    Return the 4x2 cubic control polygon of a segment.

    Lines are promoted to the cubic with the same parametrisation.
    """
    if segment.is_cubic:
        return np.array([start, segment.c1, segment.c2, segment.to], dtype=float)

    p0 = np.asarray(start, dtype=float)
    p3 = np.asarray(segment.to, dtype=float)
    return np.array([p0, p0 + (p3 - p0) / 3, p0 + 2 * (p3 - p0) / 3, p3])


def evaluate(start: Point, segment: Segment, t: float) -> Point:
    if not segment.is_cubic:
        return _lerp(start, segment.to, t)

    a, b, c = _lerp(start, segment.c1, t), _lerp(segment.c1, segment.c2, t), _lerp(
        segment.c2, segment.to, t
    )
    return _lerp(_lerp(a, b, t), _lerp(b, c, t), t)


def derivative(start: Point, segment: Segment, t: float) -> Vec2:
    if not segment.is_cubic:
        return start.vector_to(segment.to)

    d0 = start.vector_to(segment.c1)
    d1 = segment.c1.vector_to(segment.c2)  # type: ignore[union-attr]
    d2 = segment.c2.vector_to(segment.to)  # type: ignore[union-attr]
    s = 1 - t
    return 3 * (s * s * d0 + 2 * s * t * d1 + t * t * d2)


def sample_segment(start: Point, segment: Segment, ts: np.ndarray) -> np.ndarray:
    """Evaluate a segment at every parameter in ts; returns an (N, 2) array."""
    ts = np.asarray(ts, dtype=float)[:, None]
    p = control_points(start, segment)
    s = 1 - ts
    return (
        s**3 * p[0] + 3 * s**2 * ts * p[1] + 3 * s * ts**2 * p[2] + ts**3 * p[3]
    )


def sample_path(path: SoftPath, samples_per_segment: int = 32) -> np.ndarray:
    """Points along every segment, closing edges included; an (N, 2) array."""
    ts = np.linspace(0.0, 1.0, samples_per_segment)
    chunks = [sample_segment(r.start, r.segment, ts) for r in iter_segments(path)]
    if not chunks:
        return np.zeros((0, 2))
    return np.concatenate(chunks)


def arclength(
    start: Point, segment: Segment, samples: int = ARCLENGTH_SAMPLES
) -> float:
    if not segment.is_cubic:
        return start.distance(segment.to)

    points = sample_segment(start, segment, np.linspace(0.0, 1.0, samples + 1))
    return float(np.sum(np.linalg.norm(np.diff(points, axis=0), axis=1)))


def split_segment(start: Point, segment: Segment, t: float) -> Tuple[Segment, Segment]:
    """
    Split a segment at parameter t with de Casteljau's construction.

    Parameters
    ----------
    start: Point
        The segment start point.
    segment: Segment
        The segment to split.
    t: float
        Parameter in [0, 1].

    Returns
    -------
    first: Segment
        Traces the original over [0, t]; starts at start.
    second: Segment
        Traces the original over [t, 1]; starts where first ends.
    """
    if not segment.is_cubic:
        middle = _lerp(start, segment.to, t)
        return Segment.line(middle), Segment.line(segment.to)

    p01 = _lerp(start, segment.c1, t)  # type: ignore[arg-type]
    p12 = _lerp(segment.c1, segment.c2, t)  # type: ignore[arg-type]
    p23 = _lerp(segment.c2, segment.to, t)  # type: ignore[arg-type]
    p012 = _lerp(p01, p12, t)
    p123 = _lerp(p12, p23, t)
    middle = _lerp(p012, p123, t)
    return Segment.cubic(p01, p012, middle), Segment.cubic(p123, p23, segment.to)


def tangent(start: Point, segment: Segment, t: float) -> Vec2:
    """
    Derivative at t, with fallbacks where it vanishes.

    At an end of a cubic with a coincident control point the derivative of the
    neighbouring control leg is used, then the chord.
    """
    d = derivative(start, segment, t)
    if d.norm > 0 or not segment.is_cubic:
        return d

    if t <= 0.5:
        d = 1.5 * start.vector_to(segment.c2)  # type: ignore[arg-type]
    else:
        d = 1.5 * segment.c1.vector_to(segment.to)  # type: ignore[union-attr]
    if d.norm > 0:
        return d
    return start.vector_to(segment.to)


def _check_parameter(t: float) -> None:
    if not 0.0 <= t <= 1.0:
        raise ParameterOutOfRange(f"Path parameter {t} is outside [0, 1]")


def _locate_ref(path: SoftPath, t: float) -> Tuple[SegmentRef, float]:
    _check_parameter(t)
    refs = iter_segments(path)
    n = len(refs)
    if n == 0:
        raise EmptyPath("Cannot locate a point on a path without segments")

    k = min(math.floor(t * n) + 1, n)
    local = t * n - (k - 1)
    # segment boundaries belong to the earlier segment
    if local <= SNAP_TOLERANCE and k > 1:
        k, local = k - 1, 1.0
    return refs[k - 1], min(max(local, 0.0), 1.0)


def locate(path: SoftPath, t: float) -> PathLocation:
    """
    Resolve a global path parameter.

    Parameters
    ----------
    path: SoftPath
        The path. Closed components count their closing edge as a segment.
    t: float
        Global parameter in [0, 1]; the k-th of n segments owns [(k-1)/n, k/n].

    Returns
    -------
    PathLocation
        1-based component and global segment indices, the local parameter, the
        point and the (unnormalised) tangent there.

    Raises
    ------
    EmptyPath
        If the path has no segments.
    ParameterOutOfRange
        If t is outside [0, 1].
    """
    ref, local = _locate_ref(path, t)
    return PathLocation(
        ref.component_index + 1,
        ref.global_index + 1,
        local,
        evaluate(ref.start, ref.segment, local),
        tangent(ref.start, ref.segment, local),
    )


def frame_at(path: SoftPath, t: float, upright: bool = False) -> Frame:
    """
    Frame whose x-axis is tangent to the path at t.

    With upright the frame is turned half a revolution whenever its y-axis would
    point down the page. A vertical tangent is left unflipped.
    """
    location = locate(path, t)
    angle = location.tangent.angle
    if upright and math.cos(angle) < 0:
        angle += math.pi

    angle = math.remainder(angle, 2 * math.pi)
    if angle <= -math.pi:
        angle += 2 * math.pi
    return Frame(location.point, angle)


def frame_transform(frame: Frame) -> Transform2D:
    """Rotate by the frame angle, then move the origin onto the frame origin."""
    return compose(
        rotation(math.degrees(frame.angle_rad)),
        translation(frame.origin.x, frame.origin.y),
    )


def place_at(
    path: SoftPath, source: SoftPath, t: float, upright: bool = False
) -> SoftPath:
    return transform_path(path, frame_transform(frame_at(source, t, upright)))


def cut_component(component: Component, cuts: Iterable[Cut]) -> List[Component]:
    """
    Cut a component at the given (local segment index, parameter) positions.

    Parameters
    ----------
    component: Component
        The component to cut. For a closed component index len(segments) is
        the closing edge.
    cuts: Iterable[Cut]
        Cut positions in any order. Repeated positions give empty pieces.

    Returns
    -------
    List[Component]
        One more open piece than there are cuts, in path order. No wrap-around
        is applied: a closed component yields start-to-cut ... cut-to-start.
    """
    segments = list(component.segments)
    ordered = sorted(cuts)
    if component.closed:
        closing = len(segments)
        if component.end != component.start:
            segments.append(Segment.line(component.start))
        elif segments:
            # zero-length closing edge: its cuts sit at the final node
            ordered = [
                (closing - 1, 1.0) if i >= closing else (i, t) for i, t in ordered
            ]

    pieces: List[Component] = []
    piece_start = component.start
    done: List[Segment] = []

    index = 0
    seg_start = component.start
    remaining: Optional[Segment] = segments[0] if segments else None
    consumed = 0.0

    for cut_index, t in ordered:
        while index < cut_index and index < len(segments):
            if remaining is not None:
                done.append(remaining)
                seg_start = remaining.to
            index += 1
            remaining = segments[index] if index < len(segments) else None
            consumed = 0.0

        if remaining is None or t <= consumed + SNAP_TOLERANCE:
            pieces.append(Component(piece_start, tuple(done)))
            piece_start, done = seg_start, []
        elif t >= 1.0 - SNAP_TOLERANCE:
            done.append(remaining)
            seg_start = remaining.to
            remaining, consumed = None, 1.0
            pieces.append(Component(piece_start, tuple(done)))
            piece_start, done = seg_start, []
        else:
            first, second = split_segment(
                seg_start, remaining, (t - consumed) / (1.0 - consumed)
            )
            done.append(first)
            pieces.append(Component(piece_start, tuple(done)))
            piece_start, done = first.to, []
            seg_start, remaining, consumed = first.to, second, t

    if remaining is not None:
        done.append(remaining)
    done.extend(segments[index + 1 :])
    pieces.append(Component(piece_start, tuple(done)))

    return pieces


def break_component(component: Component, cuts: Sequence[Cut]) -> List[Component]:
    """
    Insert breaks into a component.

    A closed component is opened and rotated so that its first break becomes
    its start: k breaks give k components, where an open one gives k + 1.
    """
    if not cuts:
        return [component]

    pieces = cut_component(component, cuts)
    if not component.closed:
        return pieces

    last, first = pieces[-1], pieces[0]
    return pieces[1:-1] + [Component(last.start, last.segments + first.segments)]


def insert_breaks(path: SoftPath, breaks: Iterable[Cut]) -> SoftPath:
    """
    Insert component breaks at (global 0-based segment index, parameter) pairs.

    The trace is unchanged; only moves are added.
    """
    refs = iter_segments(path)
    per_component: List[List[Cut]] = [[] for _ in path.components]
    for global_index, t in breaks:
        ref = refs[global_index]
        per_component[ref.component_index].append((ref.local_index, t))

    components: List[Component] = []
    for component, cuts in zip(path.components, per_component):
        components.extend(break_component(component, cuts))
    return SoftPath(tuple(components))


def _cut_path(path: SoftPath, breaks: Sequence[Cut]) -> List[SoftPath]:
    # one more run than breaks; no wrap-around for closed components
    refs = iter_segments(path)
    per_component: List[List[Cut]] = [[] for _ in path.components]
    for global_index, t in breaks:
        ref = refs[global_index]
        per_component[ref.component_index].append((ref.local_index, t))

    runs: List[SoftPath] = []
    current: List[Component] = []
    for component, cuts in zip(path.components, per_component):
        if not cuts:
            current.append(component)
            continue
        pieces = cut_component(component, cuts)
        current.append(pieces[0])
        for piece in pieces[1:]:
            runs.append(SoftPath(tuple(current)))
            current = [piece]
    runs.append(SoftPath(tuple(current)))

    return runs


def _break_at(path: SoftPath, t: float) -> Cut:
    ref, local = _locate_ref(path, t)
    return ref.global_index, local


def split_at(path: SoftPath, t: float) -> SoftPath:
    """
    Insert a break at the point with global parameter t.

    Parameters
    ----------
    path: SoftPath
        The path to split.
    t: float
        Global parameter in [0, 1].

    Returns
    -------
    SoftPath
        The same trace with one more component (a closed component is opened
        at t instead and keeps its count).

    See Also
    --------
    softpath.param_utils.locate
    """
    return insert_breaks(path, [_break_at(path, t)])


def split_into(path: SoftPath, t: float) -> Tuple[SoftPath, SoftPath]:
    """Split at t and return the part before and the part after."""
    before, after = _cut_path(path, [_break_at(path, t)])
    return before, after


def keep(
    path: SoftPath,
    side: KeepSide,
    t1: float,
    t2: Optional[float] = None,
) -> SoftPath:
    """
    Keep the piece before t1, after t1, or between t1 and t2.

    Raises
    ------
    InvalidRange
        If the middle piece is asked for with t1 > t2.
    """
    if side is KeepSide.START:
        return split_into(path, t1)[0]
    if side is KeepSide.END:
        return split_into(path, t1)[1]

    if t2 is None:
        raise InvalidRange("Keeping the middle needs two parameters")
    _check_parameter(t2)
    if t1 > t2:
        raise InvalidRange(f"Middle range [{t1}, {t2}] is reversed")
    return _cut_path(path, [_break_at(path, t1), _break_at(path, t2)])[1]


def _shorten_end(component: Component, length: float) -> Component:
    segments = list(component.segments)
    remaining = length
    while segments and remaining > 0:
        start = segments[-2].to if len(segments) > 1 else component.start
        segment = segments[-1]
        speed = tangent(start, segment, 1.0).norm
        if speed == 0:
            segments.pop()
            continue

        dt = remaining / speed
        if dt >= 1.0:
            remaining -= arclength(start, segment)
            segments.pop()
            continue

        segments[-1] = split_segment(start, segment, 1.0 - dt)[0]
        remaining = 0.0

    if remaining > 0:
        log.warning(f"Shortening by {length} consumed the whole component")
    return Component(component.start, tuple(segments))


@warn_if_empty
def shorten(path: SoftPath, where: PathEnd, length: float) -> SoftPath:
    """
    Trim a path at its start, its end or both.

    Parameters
    ----------
    path: SoftPath
        The path to shorten. Only its first and last components are touched.
    where: PathEnd
        Which end(s) to shorten.
    length: float
        Amount to remove from each chosen end, measured with the derivative at
        the end; exact for lines, approximate for curves.

    Returns
    -------
    SoftPath
        The shortened path. A closed terminal component is left alone with a
        warning.
    """
    if length < 0:
        raise InvalidRange(f"Cannot shorten by a negative length {length}")
    if where is PathEnd.BOTH:
        return shorten(shorten(path, PathEnd.END, length), PathEnd.START, length)
    if where is PathEnd.START:
        return reverse_path(shorten(reverse_path(path), PathEnd.END, length))
    if length == 0:
        return path

    last = path.components[-1]
    if last.closed:
        log.warning("Cannot shorten a closed component, leaving it alone")
        return path
    return SoftPath(path.components[:-1] + (_shorten_end(last, length),))
