#!/usr/bin/env python

from __future__ import annotations

from logging import getLogger
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .geom_utils import (
    SPAN_TOLERANCE,
    reflection_across_line,
    similarity_from_endpoints,
    translation,
)
from .hobby_utils import hobby_curve
from .intersect_utils import split_self, split_with
from .param_utils import insert_breaks, shorten, tangent
from .path_utils import (
    get_components,
    iter_segments,
    reverse_path,
    transform_path,
    warn_if_empty,
    weld_components,
    weld_paths,
)
from .types import (
    CloseMode,
    Component,
    DegenerateSpan,
    EmptyPath,
    GapSpec,
    HobbyJoin,
    IndexOutOfRange,
    InvalidRange,
    PathEnd,
    Point,
    Segment,
    SoftPath,
    SoftPathError,
    Transform2D,
    Vec2,
)

###############################################################################

log = getLogger(__name__)

###############################################################################

# Components whose ends are this close are spot welded
WELD_TOLERANCE = 0.01

# Closing edges shorter than this are dropped when opening a path
OPEN_TOLERANCE = 0.01

# Builds the path inserted across a junction from the components either side
BridgeBuilder = Callable[[Component, Component], SoftPath]

###############################################################################


@warn_if_empty
def reverse(path: SoftPath) -> SoftPath:
    """Reverse component order and the direction of every component."""
    return reverse_path(path)


@warn_if_empty
def translate(path: SoftPath, dx: float, dy: float) -> SoftPath:
    return transform_path(path, translation(dx, dy))


@warn_if_empty
def transform(path: SoftPath, t: Transform2D) -> SoftPath:
    return transform_path(path, t)


def _with_start(component: Component, p: Point) -> Component:
    return component._replace(start=p)


def _with_end(component: Component, p: Point) -> Component:
    if not component.segments:
        return component._replace(start=p)
    last = component.segments[-1]._replace(to=p)
    return component._replace(segments=component.segments[:-1] + (last,))


def _span(path: SoftPath, a: Point, b: Point) -> SoftPath:
    if path.is_empty:
        raise EmptyPath("Cannot span an empty path")

    spanned = transform_path(
        path, similarity_from_endpoints(path.start, path.end, a, b)  # type: ignore
    )
    # land exactly on the requested points
    components = list(spanned.components)
    components[0] = _with_start(components[0], a)
    components[-1] = _with_end(components[-1], b)
    return SoftPath(tuple(components))


@warn_if_empty
def span(path: SoftPath, a: Point, b: Point) -> SoftPath:
    """
    Move, rotate and scale a path so it runs from a to b.

    Parameters
    ----------
    path: SoftPath
        The path to span.
    a: Point
        New start point.
    b: Point
        New final on-path point.

    Returns
    -------
    SoftPath
        The transformed path. Its start is exactly a and its end exactly b.

    Raises
    ------
    DegenerateSpan
        If the path ends within SPAN_TOLERANCE of where it starts.
    """
    return _span(path, a, b)


def span_to(base: SoftPath, splice: SoftPath, target: Point) -> SoftPath:
    """Span splice from the end of base to target and weld it on."""
    if base.is_empty:
        raise EmptyPath("Cannot extend an empty path")
    return weld_paths(base, _span(splice, base.end, target))  # type: ignore[arg-type]


def _shorten_component(
    component: Component, where: PathEnd, amount: float
) -> Component:
    return shorten(SoftPath((component,)), where, amount).components[0]


def _valid_indices(indices: Sequence[int], n: int, operation: str) -> List[int]:
    valid = []
    for k in indices:
        if 1 <= k <= n:
            valid.append(k)
        else:
            log.warning(IndexOutOfRange(f"{operation}: no component {k} in 1..{n}"))
    return valid


@warn_if_empty
def insert_gaps_components(path: SoftPath, gap: GapSpec) -> SoftPath:
    """
    Open a gap after each listed component.

    Parameters
    ----------
    path: SoftPath
        The path to gap.
    gap: GapSpec
        The gap width and the 1-based components to gap after. Component k is
        shortened at its end and component k + 1 at its start, by half the
        width each; the last component pairs with the first. No indices, or an
        empty list, gaps every junction between consecutive components.

    Returns
    -------
    SoftPath
        The gapped path. Junctions touching a closed component are skipped with
        a warning.
    """
    if gap.amount <= 0:
        raise InvalidRange(f"Gap width must be positive, got {gap.amount}")

    components = list(path.components)
    n = len(components)
    indices = gap.indices or tuple(range(1, n))
    for k in _valid_indices(indices, n, "insert_gaps_components"):
        before, after = k - 1, k % n
        if components[before].closed or components[after].closed:
            log.warning(
                f"insert_gaps_components: junction {k} touches a closed component"
            )
            continue
        components[before] = _shorten_component(
            components[before], PathEnd.END, gap.amount / 2
        )
        components[after] = _shorten_component(
            components[after], PathEnd.START, gap.amount / 2
        )

    return SoftPath(tuple(components))


@warn_if_empty
def insert_gaps_segments(path: SoftPath, gap: GapSpec) -> SoftPath:
    """
    Open a gap after each listed segment.

    Segments are numbered globally from 1. Each listed segment boundary first
    becomes a component break; listing the final segment of a component gaps
    the junction with the next component.
    """
    refs = iter_segments(path)
    indices = gap.indices or tuple(range(1, len(refs)))

    listed = []
    for k in indices:
        if not 1 <= k <= len(refs):
            log.warning(IndexOutOfRange(f"insert_gaps_segments: no segment {k}"))
            continue
        ref = refs[k - 1]
        if path.components[ref.component_index].closed:
            log.warning(f"insert_gaps_segments: segment {k} is on a closed component")
            continue
        listed.append(ref)

    breaks = [
        (ref.global_index, 1.0)
        for ref in listed
        if ref.local_index < len(path.components[ref.component_index].segments) - 1
    ]
    broken = insert_breaks(path, breaks)

    # breaks at segment ends on open components keep global numbering
    broken_refs = iter_segments(broken)
    n = len(broken.components)
    junctions = []
    for ref in listed:
        k = broken_refs[ref.global_index].component_index + 1
        if k == n:
            log.warning(
                f"insert_gaps_segments: segment {ref.global_index + 1} "
                f"has no following component"
            )
            continue
        junctions.append(k)

    if not junctions:
        return broken
    return insert_gaps_components(broken, GapSpec(gap.amount, tuple(junctions)))


@warn_if_empty
def join_components(path: SoftPath, indices: Sequence[int]) -> SoftPath:
    """
    Remove the move before each listed component.

    The geometry is not moved. Listing component 1 joins it after the last
    component. Joined components are open.
    """
    n = len(path.components)
    joined = set(_valid_indices(indices, n, "join_components"))
    if not joined:
        return path

    groups: List[List[Component]] = []
    for k, component in enumerate(path.components, start=1):
        if k > 1 and k in joined:
            groups[-1].append(component)
        else:
            groups.append([component])
    if 1 in joined and len(groups) > 1:
        groups[-1].extend(groups.pop(0))

    merged = []
    for group in groups:
        component = group[0]
        for other in group[1:]:
            component = weld_components(component, other)
        merged.append(component)
    return SoftPath(tuple(merged))


def _touching(first: Component, second: Component) -> bool:
    return (
        not first.closed
        and not second.closed
        and first.end.distance(second.start) <= WELD_TOLERANCE
    )


@warn_if_empty
def spot_weld(path: SoftPath) -> SoftPath:
    """
    Weld consecutive components whose junction points agree within 0.01.

    The last component is welded onto the first as well when they meet, so
    a closed loop that was broken into pieces becomes whole again.
    """
    merged: List[Component] = []
    for component in path.components:
        if merged and _touching(merged[-1], component):
            merged[-1] = weld_components(merged[-1], component)
        else:
            merged.append(component)

    if len(merged) >= 2 and _touching(merged[-1], merged[0]):
        merged = [weld_components(merged[-1], merged[0]), *merged[1:-1]]

    if len(merged) < len(path.components):
        log.debug(f"Spot welded {len(path.components)} components into {len(merged)}")
    return SoftPath(tuple(merged))


@warn_if_empty
def remove_empty(path: SoftPath) -> SoftPath:
    """Drop components that are only a move."""
    return SoftPath(tuple(c for c in path.components if not c.is_empty))


@warn_if_empty
def remove_components(path: SoftPath, indices: Sequence[int]) -> SoftPath:
    removed = set(_valid_indices(indices, len(path.components), "remove_components"))
    return SoftPath(
        tuple(
            c for k, c in enumerate(path.components, start=1) if k not in removed
        )
    )


@warn_if_empty
def open_path(path: SoftPath) -> SoftPath:
    """
    Open every closed component.

    A closing edge longer than OPEN_TOLERANCE is kept as an explicit line.
    """
    components = []
    for component in path.components:
        if not component.closed:
            components.append(component)
            continue
        segments = component.segments
        if component.end.distance(component.start) > OPEN_TOLERANCE:
            segments = segments + (Segment.line(component.start),)
        components.append(Component(component.start, segments, False))
    return SoftPath(tuple(components))


def _start_tangent(component: Component) -> Vec2:
    return tangent(component.start, component.segments[0], 0.0)


def _end_tangent(component: Component) -> Vec2:
    nodes = component.nodes
    return tangent(nodes[-2], component.segments[-1], 1.0)


def _curve_bridge(before: Component, after: Component) -> SoftPath:
    if before.is_empty or after.is_empty:
        raise EmptyPath("A curve join needs a segment on both sides of the gap")
    segment = hobby_curve(
        HobbyJoin(before.end, _end_tangent(before), after.start, _start_tangent(after))
    )
    return SoftPath((Component(before.end, (segment,)),))


def close_path(
    path: SoftPath, mode: CloseMode = CloseMode.PLAIN, splice: Optional[SoftPath] = None
) -> SoftPath:
    """
    Close the last component of a path.

    Parameters
    ----------
    path: SoftPath
        The path; only its last component is changed.
    mode: CloseMode
        PLAIN sets the closing flag. ADJUST first moves the final point (and
        the second control point of a final cubic) onto the component start.
        WITH spans splice from the end back to the start and welds it in.
        WITH_CURVE inserts a Hobby curve matching the tangents at both ends.
        Default: CloseMode.PLAIN
    splice: Optional[SoftPath]
        The path inserted by CloseMode.WITH.

    Returns
    -------
    SoftPath
        The path with its last component closed.

    Raises
    ------
    EmptyPath
        If there is no last component or it has no segments.
    DegenerateSpan
        If WITH or WITH_CURVE is asked to bridge a gap of (almost) zero length.

    Notes
    -----
    A splice of several components cannot close the component: its first and
    last components are welded to the end and the start, and the result is
    left open.
    """
    if path.is_empty or path.components[-1].is_empty:
        raise EmptyPath("Closing needs a last component with at least one segment")

    last = path.components[-1]
    head = path.components[:-1]
    if last.closed:
        log.warning("close: the last component is already closed")
        return path

    if mode is CloseMode.PLAIN:
        return SoftPath(head + (last._replace(closed=True),))

    if mode is CloseMode.ADJUST:
        segment = last.segments[-1]
        shift = last.end.vector_to(last.start)
        if segment.is_cubic:
            c2 = segment.c2 + shift  # type: ignore[operator]
            segment = Segment.cubic(segment.c1, c2, last.start)  # type: ignore
        else:
            segment = Segment.line(last.start)
        return SoftPath(
            head + (Component(last.start, (*last.segments[:-1], segment), True),)
        )

    if mode is CloseMode.WITH_CURVE:
        bridge = _curve_bridge(last, last).components[0]
        closed = Component(last.start, last.segments + bridge.segments, True)
        return SoftPath(head + (closed,))

    if splice is None:
        raise EmptyPath("Closing with a splice needs a splice path")
    spanned = _span(splice, last.end, last.start)
    pieces = spanned.components
    if len(pieces) == 1:
        return SoftPath(
            head + (Component(last.start, last.segments + pieces[0].segments, True),)
        )
    return SoftPath(
        head
        + pieces[1:-1]
        + (weld_components(weld_components(pieces[-1], last), pieces[0]),)
    )


def _bridge_junctions(
    path: SoftPath,
    indices: Optional[Sequence[int]],
    build: BridgeBuilder,
    operation: str,
) -> SoftPath:
    if not indices:
        path = spot_weld(path)
        indices = tuple(range(1, len(path.components)))

    components = path.components
    n = len(components)
    bridges: Dict[int, SoftPath] = {}
    for k in _valid_indices(indices, n, operation):
        before, after = k - 1, k % n
        if components[before].closed or components[after].closed:
            log.warning(f"{operation}: junction {k} touches a closed component")
            continue
        try:
            bridges[before] = build(components[before], components[after])
        except SoftPathError as e:
            log.warning(f"{operation}: skipping junction {k}: {e}")

    # (component, weld onto the previous one)
    sequence: List[Tuple[Component, bool]] = []
    for i, component in enumerate(components):
        sequence.append((component, i > 0 and (i - 1) in bridges))
        if i in bridges:
            sequence.extend(
                (piece, j == 0) for j, piece in enumerate(bridges[i].components)
            )

    merged: List[Component] = []
    for component, weld in sequence:
        if weld and merged:
            merged[-1] = weld_components(merged[-1], component)
        else:
            merged.append(component)

    # the junction after the last component leads back to the first
    if (n - 1) in bridges and len(merged) > 1:
        merged = merged[1:-1] + [weld_components(merged[-1], merged[0])]
    return SoftPath(tuple(merged))


@warn_if_empty
def join_with(
    path: SoftPath,
    splice: SoftPath,
    indices: Optional[Sequence[int]] = None,
    upright: bool = False,
) -> SoftPath:
    """
    Insert a splice path into the gaps after the listed components.

    Parameters
    ----------
    path: SoftPath
        The path whose gaps are bridged.
    splice: SoftPath
        The path spanned across each gap and welded at both ends.
    indices: Optional[Sequence[int]]
        1-based components whose following gap is bridged. When absent or
        empty the path is spot welded first and every remaining gap bridged.
    upright: bool
        Reflect the splice across its chord for gaps running right to left, so
        bumps keep pointing up the page.
        Default: False

    Returns
    -------
    SoftPath
        The bridged path. It is not closed, even when the last gap is bridged.
    """
    if splice.is_empty:
        log.warning("join_with: the splice path is empty, nothing to insert")
        return path

    mirrored = splice
    if upright and splice.start.distance(splice.end) > SPAN_TOLERANCE:  # type: ignore
        mirrored = transform_path(
            splice, reflection_across_line(splice.start, splice.end)  # type: ignore
        )

    def build(before: Component, after: Component) -> SoftPath:
        piece = mirrored if upright and after.start.x < before.end.x else splice
        return _span(piece, before.end, after.start)

    return _bridge_junctions(path, indices, build, "join_with")


@warn_if_empty
def join_with_curve(
    path: SoftPath, indices: Optional[Sequence[int]] = None
) -> SoftPath:
    """Bridge gaps with single Hobby curves matching the tangents either side."""
    return _bridge_junctions(path, indices, _curve_bridge, "join_with_curve")


def splice(initial: SoftPath, middle: SoftPath, final: SoftPath) -> SoftPath:
    """
    Span middle from the end of initial to the start of final and weld all three.

    Raises
    ------
    EmptyPath
        If any of the three paths is empty.
    DegenerateSpan
        If middle ends where it starts.
    """
    if initial.is_empty or final.is_empty:
        raise EmptyPath("Splicing needs non-empty initial and final paths")
    spanned = _span(middle, initial.end, final.start)  # type: ignore[arg-type]
    return weld_paths(weld_paths(initial, spanned), final)


def knot(
    path: SoftPath,
    gap: float,
    indices: Sequence[int] = (),
    draft: bool = False,
) -> List[SoftPath]:
    """
    Render a knot diagram from a self-crossing path.

    Parameters
    ----------
    path: SoftPath
        The knot curve.
    gap: float
        Width of the gap cut at each under-crossing.
    indices: Sequence[int]
        Components of the split path to gap after. Empty means every junction.
        Default: ()
    draft: bool
        Skip the final spot weld so every piece stays separate.
        Default: False

    Returns
    -------
    List[SoftPath]
        One path per strand, ready for export.
    """
    strands = insert_gaps_components(split_self(path), GapSpec(gap, tuple(indices)))
    if not draft:
        strands = spot_weld(strands)
    return get_components(strands)


def bridge(
    over: SoftPath,
    under: SoftPath,
    splice_path: SoftPath,
    span_gap: float,
    under_gap: float,
) -> Tuple[SoftPath, SoftPath]:
    """
    Carry one path over another with bumps at the crossings.

    Parameters
    ----------
    over: SoftPath
        The path that bridges. It is broken where it crosses under, gapped by
        span_gap and each gap bridged upright with splice_path.
    under: SoftPath
        The path passing underneath. It is broken where it meets the bridged
        over path and gapped by under_gap.
    splice_path: SoftPath
        The bump shape, for example a semicircle.
    span_gap: float
        Width of the gaps in the over path.
    under_gap: float
        Width of the gaps in the under path.

    Returns
    -------
    over: SoftPath
        The bridged over path.
    under: SoftPath
        The gapped under path.
    """
    broken = split_with(over, under)
    if len(broken.components) == len(over.components):
        log.info("bridge: the paths do not cross")
        return over, under

    bridged = join_with(
        insert_gaps_components(broken, GapSpec(span_gap)), splice_path, upright=True
    )
    gapped = split_with(under, bridged)
    if len(gapped.components) > len(under.components):
        gapped = insert_gaps_components(gapped, GapSpec(under_gap))
    return bridged, gapped
