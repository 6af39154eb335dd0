#!/usr/bin/env python

from __future__ import annotations

import math
from logging import getLogger
from typing import Dict, Iterable, List, Set, Tuple

import numpy as np

from .param_utils import SNAP_TOLERANCE, control_points, evaluate, insert_breaks
from .path_utils import iter_segments, warn_if_empty
from .types import (
    Component,
    IntersectionHit,
    Point,
    Segment,
    SegmentRef,
    SoftPath,
)

###############################################################################

log = getLogger(__name__)

###############################################################################

# Subdivision stops once both bounding boxes are smaller than this
BOX_TOLERANCE = 1e-4

# Hits closer than this in both parameters are the same hit
DEDUP_TOLERANCE = 1e-3

# Hits this close to the node shared by consecutive segments are not crossings
ADJACENT_TOLERANCE = 1e-3

# Both curves must evaluate this close together at a reported hit
HIT_TOLERANCE = 1e-3

NEWTON_ITERATIONS = 8
MAX_SUBDIVISION_DEPTH = 50
MAX_SELF_DEPTH = 8

# Overlapping curves multiply candidate pairs; beyond this only the ends are kept
MAX_CANDIDATE_PAIRS = 2000

PARALLEL_TOLERANCE = 1e-12

# (segment parameter on a, segment parameter on b)
ParamPair = Tuple[float, float]

# (0-based global segment index, parameter) on each side
RawHit = Tuple[int, float, int, float]

###############################################################################


def _bezier_point(cp: np.ndarray, t: float) -> np.ndarray:
    s = 1 - t
    return s**3 * cp[0] + 3 * s * s * t * cp[1] + 3 * s * t * t * cp[2] + t**3 * cp[3]


def _bezier_derivative(cp: np.ndarray, t: float) -> np.ndarray:
    s = 1 - t
    return 3 * (
        s * s * (cp[1] - cp[0]) + 2 * s * t * (cp[2] - cp[1]) + t * t * (cp[3] - cp[2])
    )


def _halve(cp: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    p01 = (cp[0] + cp[1]) / 2
    p12 = (cp[1] + cp[2]) / 2
    p23 = (cp[2] + cp[3]) / 2
    p012 = (p01 + p12) / 2
    p123 = (p12 + p23) / 2
    middle = (p012 + p123) / 2
    return np.array([cp[0], p01, p012, middle]), np.array([middle, p123, p23, cp[3]])


def _boxes_overlap(a: np.ndarray, b: np.ndarray) -> bool:
    return bool(
        np.all(a.min(axis=0) <= b.max(axis=0) + BOX_TOLERANCE)
        and np.all(b.min(axis=0) <= a.max(axis=0) + BOX_TOLERANCE)
    )


def _box_size(cp: np.ndarray) -> float:
    return float(np.max(cp.max(axis=0) - cp.min(axis=0)))


def _newton(a: np.ndarray, b: np.ndarray, s: float, u: float) -> ParamPair:
    for _ in range(NEWTON_ITERATIONS):
        residual = _bezier_point(a, s) - _bezier_point(b, u)
        if np.linalg.norm(residual) < 1e-14:
            break
        jacobian = np.column_stack(
            [_bezier_derivative(a, s), -_bezier_derivative(b, u)]
        )
        if abs(np.linalg.det(jacobian)) < 1e-14:
            break
        ds, du = np.linalg.solve(jacobian, residual)
        s = min(max(s - ds, 0.0), 1.0)
        u = min(max(u - du, 0.0), 1.0)
    return s, u


def _dedupe(pairs: Iterable[ParamPair]) -> List[ParamPair]:
    kept: List[ParamPair] = []
    for s, u in sorted(pairs):
        if any(
            abs(s - ks) < DEDUP_TOLERANCE and abs(u - ku) < DEDUP_TOLERANCE
            for ks, ku in kept
        ):
            continue
        kept.append((s, u))
    return kept


def _cubic_pair_params(a: np.ndarray, b: np.ndarray) -> List[ParamPair]:
    """
    Intersect two cubic control polygons by bounding-box subdivision.

    Pairs are processed one subdivision level at a time. Candidates are
    polished with Newton's method and filtered on their residual.
    """
    level = [(a, 0.0, 1.0, b, 0.0, 1.0)]
    candidates: List[ParamPair] = []
    depth = 0
    while level and depth < MAX_SUBDIVISION_DEPTH:
        next_level = []
        for ca, a0, a1, cb, b0, b1 in level:
            if not _boxes_overlap(ca, cb):
                continue
            small_a = _box_size(ca) < BOX_TOLERANCE
            small_b = _box_size(cb) < BOX_TOLERANCE
            if small_a and small_b:
                candidates.append(((a0 + a1) / 2, (b0 + b1) / 2))
                continue

            am, bm = (a0 + a1) / 2, (b0 + b1) / 2
            parts_a = [(ca, a0, a1)]
            if not small_a:
                parts_a = list(zip(_halve(ca), (a0, am), (am, a1)))
            parts_b = [(cb, b0, b1)]
            if not small_b:
                parts_b = list(zip(_halve(cb), (b0, bm), (bm, b1)))
            for pa, pa0, pa1 in parts_a:
                for pb, pb0, pb1 in parts_b:
                    next_level.append((pa, pa0, pa1, pb, pb0, pb1))

        if len(next_level) > MAX_CANDIDATE_PAIRS:
            log.warning("Curves overlap along a stretch, reporting only its ends")
            next_level.sort(key=lambda item: (item[1], item[4]))
            next_level = [next_level[0], next_level[-1]]
        level = next_level
        depth += 1

    candidates.extend(((a0 + a1) / 2, (b0 + b1) / 2) for _, a0, a1, _, b0, b1 in level)

    refined = []
    for s, u in candidates:
        s, u = _newton(a, b, s, u)
        if np.linalg.norm(_bezier_point(a, s) - _bezier_point(b, u)) < HIT_TOLERANCE:
            refined.append((s, u))
    return _dedupe(refined)


def _cross(u: Tuple[float, float], v: Tuple[float, float]) -> float:
    return u[0] * v[1] - u[1] * v[0]


def _line_line_params(p0: Point, p1: Point, q0: Point, q1: Point) -> List[ParamPair]:
    r = (p1.x - p0.x, p1.y - p0.y)
    s = (q1.x - q0.x, q1.y - q0.y)
    qp = (q0.x - p0.x, q0.y - p0.y)
    rr = r[0] * r[0] + r[1] * r[1]
    ss = s[0] * s[0] + s[1] * s[1]
    denom = _cross(r, s)

    if abs(denom) > PARALLEL_TOLERANCE * math.sqrt(rr * ss):
        t = _cross(qp, s) / denom
        u = _cross(qp, r) / denom
        eps = PARALLEL_TOLERANCE
        if -eps <= t <= 1 + eps and -eps <= u <= 1 + eps:
            return [(min(max(t, 0.0), 1.0), min(max(u, 0.0), 1.0))]
        return []

    # parallel: only collinear lines can meet
    offset = max(1.0, math.hypot(*qp))
    if abs(_cross(qp, r)) > PARALLEL_TOLERANCE * math.sqrt(rr) * offset:
        return []

    t0 = (qp[0] * r[0] + qp[1] * r[1]) / rr
    t1 = ((q1.x - p0.x) * r[0] + (q1.y - p0.y) * r[1]) / rr
    lo, hi = max(0.0, min(t0, t1)), min(1.0, max(t0, t1))
    if lo > hi:
        return []

    params = []
    for t in sorted({lo, hi}):
        x, y = p0.x + t * r[0], p0.y + t * r[1]
        u = ((x - q0.x) * s[0] + (y - q0.y) * s[1]) / ss
        params.append((t, min(max(u, 0.0), 1.0)))
    return params


def _is_point(start: Point, segment: Segment) -> bool:
    return all(p == start for p in segment.points)


def _segment_params(
    start_a: Point, a: Segment, start_b: Point, b: Segment
) -> List[ParamPair]:
    if _is_point(start_a, a) or _is_point(start_b, b):
        return []
    if not a.is_cubic and not b.is_cubic:
        return _line_line_params(start_a, a.to, start_b, b.to)

    cp_a = control_points(start_a, a)
    cp_b = control_points(start_b, b)
    if not _boxes_overlap(cp_a, cp_b):
        return []
    return _cubic_pair_params(cp_a, cp_b)


def segment_intersections(
    start_a: Point, a: Segment, start_b: Point, b: Segment
) -> List[IntersectionHit]:
    """
    Intersect two segments.

    Parameters
    ----------
    start_a: Point
        Start of the first segment.
    a: Segment
        The first segment.
    start_b: Point
        Start of the second segment.
    b: Segment
        The second segment.

    Returns
    -------
    List[IntersectionHit]
        Hits sorted by parameter on a; both segment indices are 1. Hits at the
        segment ends are included. Collinear overlapping lines report the ends
        of the overlap.
    """
    return [
        IntersectionHit(1, s, 1, u, evaluate(start_a, a, s))
        for s, u in _segment_params(start_a, a, start_b, b)
    ]


def _hodograph_may_turn_back(cp: np.ndarray) -> bool:
    # a cubic whose derivative control points lie in an open half-plane is
    # monotone in some direction and cannot cross itself
    legs = np.diff(cp, axis=0)
    angles = sorted(
        math.atan2(leg[1], leg[0]) for leg in legs if np.linalg.norm(leg) > 0
    )
    if len(angles) < 2:
        return False
    gaps = [b - a for a, b in zip(angles, angles[1:])]
    gaps.append(angles[0] + 2 * math.pi - angles[-1])
    return max(gaps) <= math.pi


def _cubic_self_params(
    cp: np.ndarray, t0: float = 0.0, t1: float = 1.0, depth: int = 0
) -> List[ParamPair]:
    if depth >= MAX_SELF_DEPTH or not _hodograph_may_turn_back(cp):
        return []

    left, right = _halve(cp)
    tm = (t0 + t1) / 2
    found = []
    for s, u in _cubic_pair_params(left, right):
        # the halves always meet where they were cut
        if s > 1 - ADJACENT_TOLERANCE and u < ADJACENT_TOLERANCE:
            continue
        found.append((t0 + s * (tm - t0), tm + u * (t1 - tm)))

    found.extend(_cubic_self_params(left, t0, tm, depth + 1))
    found.extend(_cubic_self_params(right, tm, t1, depth + 1))
    return _dedupe(found)


def _successors(path: SoftPath, refs: List[SegmentRef]) -> Set[Tuple[int, int]]:
    # pairs (i, j) of global indices where segment j starts at the end of i
    pairs = set()
    by_component: Dict[int, List[SegmentRef]] = {}
    for ref in refs:
        by_component.setdefault(ref.component_index, []).append(ref)

    for ci, component_refs in by_component.items():
        indices = [r.global_index for r in component_refs]
        pairs.update(zip(indices, indices[1:]))
        component = path.components[ci]
        if component.closed:
            pairs.add((indices[-1], indices[0]))
            if component.end == component.start and len(indices) > 1:
                # the closing edge has zero length
                pairs.add((indices[-2], indices[0]))
    return pairs


def _predecessor(path: SoftPath, refs: List[SegmentRef], ref: SegmentRef) -> int:
    if ref.local_index > 0:
        return ref.global_index - 1
    component = path.components[ref.component_index]
    if component.closed:
        return ref.global_index + len(component.segments)
    return -1


def _on_node(ref: SegmentRef, t: float, node: Point) -> bool:
    if min(t, 1 - t) <= SNAP_TOLERANCE:
        return True
    return evaluate(ref.start, ref.segment, t).distance(node) < HIT_TOLERANCE


def _canonical(
    path: SoftPath, refs: List[SegmentRef], index: int, t: float
) -> Tuple[int, float]:
    # a hit on the start node of a segment is reported at the end of its
    # predecessor; hits merely near a node keep their parameter
    ref = refs[index]
    if t > 1 - DEDUP_TOLERANCE and _on_node(ref, t, ref.segment.to):
        return index, 1.0
    if t < DEDUP_TOLERANCE and _on_node(ref, t, ref.start):
        previous = _predecessor(path, refs, ref)
        if previous >= 0:
            return previous, 1.0
        return index, 0.0
    return index, t


def _dedupe_hits(hits: Iterable[RawHit]) -> List[RawHit]:
    kept: List[RawHit] = []
    for hit in sorted(hits):
        if any(
            hit[0] == k[0]
            and hit[2] == k[2]
            and abs(hit[1] - k[1]) < DEDUP_TOLERANCE
            and abs(hit[3] - k[3]) < DEDUP_TOLERANCE
            for k in kept
        ):
            continue
        kept.append(hit)
    return kept


def _to_hits(refs: List[SegmentRef], raw: Iterable[RawHit]) -> List[IntersectionHit]:
    return [
        IntersectionHit(i + 1, s, j + 1, u, evaluate(refs[i].start, refs[i].segment, s))
        for i, s, j, u in raw
    ]


def _path_pair_hits(p: SoftPath, q: SoftPath) -> List[RawHit]:
    refs_p, refs_q = iter_segments(p), iter_segments(q)
    raw = []
    for a in refs_p:
        for b in refs_q:
            for s, u in _segment_params(a.start, a.segment, b.start, b.segment):
                i, s = _canonical(p, refs_p, a.global_index, s)
                j, u = _canonical(q, refs_q, b.global_index, u)
                raw.append((i, s, j, u))
    return _dedupe_hits(raw)


def path_intersections(p: SoftPath, q: SoftPath) -> List[IntersectionHit]:
    """
    Every point where a segment of p meets a segment of q.

    Returns
    -------
    List[IntersectionHit]
        Hits with 1-based global segment indices, sorted by (seg_a, t_a). A hit
        at a node shared by consecutive segments is reported once, at the end
        of the earlier segment.
    """
    return _to_hits(iter_segments(p), _path_pair_hits(p, q))


def _at_shared_node(t_before: float, t_after: float) -> bool:
    return t_before > 1 - ADJACENT_TOLERANCE and t_after < ADJACENT_TOLERANCE


def _self_hits(path: SoftPath) -> List[RawHit]:
    refs = iter_segments(path)
    successors = _successors(path, refs)
    raw = []

    for ia, a in enumerate(refs):
        if a.segment.is_cubic:
            for s, u in _cubic_self_params(control_points(a.start, a.segment)):
                if (a.global_index, a.global_index) in successors and _at_shared_node(
                    u, s
                ):
                    continue
                raw.append((a.global_index, s, a.global_index, u))

        for b in refs[ia + 1 :]:
            i, j = a.global_index, b.global_index
            for s, u in _segment_params(a.start, a.segment, b.start, b.segment):
                if (i, j) in successors and _at_shared_node(s, u):
                    continue
                if (j, i) in successors and _at_shared_node(u, s):
                    continue
                raw.append((i, s, j, u))

    canonical = []
    for i, s, j, u in raw:
        ci, cs = _canonical(path, refs, i, s)
        cj, cu = _canonical(path, refs, j, u)
        # keep the earlier passage first
        canonical.append((ci, cs, cj, cu) if (ci, cs) <= (cj, cu) else (cj, cu, ci, cs))
    return _dedupe_hits(canonical)


def self_intersections(path: SoftPath) -> List[IntersectionHit]:
    """Crossings of a path with itself; each is reported once, earlier passage first."""
    return _to_hits(iter_segments(path), _self_hits(path))


def _break_positions(
    path: SoftPath, breaks: Iterable[Tuple[int, float]]
) -> List[Tuple[int, float]]:
    refs = iter_segments(path)
    kept: List[Tuple[int, float]] = []
    for index, t in sorted(breaks):
        ref = refs[index]
        component: Component = path.components[ref.component_index]
        # breaks at the ends of an open component add nothing
        if not component.closed and (
            (t == 0.0 and ref.local_index == 0)
            or (t == 1.0 and ref.local_index == len(component.segments) - 1)
        ):
            continue
        if kept and kept[-1][0] == index and abs(kept[-1][1] - t) < DEDUP_TOLERANCE:
            continue
        kept.append((index, t))
    return kept


def _apply_breaks(path: SoftPath, breaks: Iterable[Tuple[int, float]]) -> SoftPath:
    positions = _break_positions(path, breaks)
    log.debug(f"Inserting {len(positions)} breaks")
    return insert_breaks(path, positions)


def split_with(p: SoftPath, q: SoftPath) -> SoftPath:
    """
    Break p wherever it meets q. The second path is not changed.

    Parameters
    ----------
    p: SoftPath
        The path to break.
    q: SoftPath
        The path to intersect with.

    Returns
    -------
    SoftPath
        p with a component break at every hit. The trace is unchanged.
    """
    hits = _path_pair_hits(p, q)
    return _apply_breaks(p, ((i, s) for i, s, _, _ in hits))


def split_both(p: SoftPath, q: SoftPath) -> Tuple[SoftPath, SoftPath]:
    """Break both paths at their mutual intersections, from one shared hit list."""
    hits = _path_pair_hits(p, q)
    return (
        _apply_breaks(p, ((i, s) for i, s, _, _ in hits)),
        _apply_breaks(q, ((j, u) for _, _, j, u in hits)),
    )


def split_self(path: SoftPath) -> SoftPath:
    """
    Break a path at every point where it crosses itself.

    Each crossing breaks the path at both of its passages, as if the pen were
    lifted and put straight back down. Touching at the node shared by two
    consecutive segments is not a crossing.
    """
    hits = _self_hits(path)
    breaks = [(i, s) for i, s, _, _ in hits] + [(j, u) for _, _, j, u in hits]
    return _apply_breaks(path, breaks)


def _line_as_cubic(start: Point, segment: Segment) -> Segment:
    if segment.is_cubic:
        return segment
    dx, dy = segment.to.x - start.x, segment.to.y - start.y
    return Segment.cubic(
        Point(start.x + dx / 3, start.y + dy / 3),
        Point(start.x + 2 * dx / 3, start.y + 2 * dy / 3),
        segment.to,
    )


@warn_if_empty
def replace_lines(path: SoftPath) -> SoftPath:
    """Replace every line by the cubic with the same parametrisation."""
    components = []
    for component in path.components:
        start, segments = component.start, []
        for segment in component.segments:
            segments.append(_line_as_cubic(start, segment))
            start = segment.to
        components.append(Component(component.start, tuple(segments), component.closed))
    return SoftPath(tuple(components))
