from typing import Dict, List

import numpy as np
from hypothesis import assume, given
from hypothesis import strategies as st

from softpath.edit_utils import spot_weld
from softpath.geom_utils import compose, rotation, scaling, translation
from softpath.intersect_utils import path_intersections, split_with
from softpath.param_utils import (
    SNAP_TOLERANCE,
    locate,
    sample_segment,
    split_at,
    split_into,
)
from softpath.path_parsers import parse
from softpath.path_utils import (
    concat,
    get_components,
    iter_segments,
    reverse_path,
    serialize,
    transform_path,
)
from softpath.types import Component, Point, Segment, SoftPath

# multiples of 1/8 survive the 6 decimal dump exactly
coordinates = st.integers(-800, 800).map(lambda v: v / 8)
points = st.builds(Point, coordinates, coordinates)

# a coarse grid makes touching components likely
grid_points = st.builds(Point, st.integers(0, 3), st.integers(0, 3))


@st.composite
def segments(draw, point_strategy=points):
    if draw(st.booleans()):
        return Segment.line(draw(point_strategy))
    return Segment.cubic(
        draw(point_strategy), draw(point_strategy), draw(point_strategy)
    )


@st.composite
def components(draw, point_strategy=points, allow_closed=True):
    start = draw(point_strategy)
    segs = tuple(draw(st.lists(segments(point_strategy), max_size=4)))
    closed = allow_closed and bool(segs) and draw(st.booleans())
    return Component(start, segs, closed)


@st.composite
def soft_paths(draw, point_strategy=points, allow_closed=True, min_size=0):
    return SoftPath(
        tuple(
            draw(
                st.lists(
                    components(point_strategy, allow_closed),
                    min_size=min_size,
                    max_size=4,
                )
            )
        )
    )


def all_points(path: SoftPath) -> np.ndarray:
    coords = []
    for component in path.components:
        coords.append(component.start)
        coords.extend(p for s in component.segments for p in s.points)
    return np.array(coords, dtype=float).reshape(-1, 2)


@given(soft_paths())
def test_reverse_is_an_involution(path):
    assert reverse_path(reverse_path(path)) == path
    assert reverse_path(path).segment_count == path.segment_count


@given(soft_paths(min_size=1))
def test_dump_parses_back(path):
    assert parse(serialize(path)) == path


@given(soft_paths())
def test_components_concat_back(path):
    assert concat(get_components(path)) == path


@given(soft_paths(allow_closed=False, min_size=1), st.floats(0, 1))
def test_split_lands_on_the_curve(path, t):
    assume(path.segment_count > 0)
    on_curve = locate(path, t).point
    before, after = split_into(path, t)

    assert before.end.distance(on_curve) < 1e-6
    assert after.start.distance(on_curve) < 1e-6
    assert before.segment_count + after.segment_count >= path.segment_count


def assert_matched_trace(
    original: SoftPath, split: SoftPath, cuts: Dict[int, List[float]]
):
    """Each piece equals its stretch of the original segment, sample for sample."""
    ts = np.linspace(0, 1, 9)
    pieces = iter(iter_segments(split))
    for ref in iter_segments(original):
        inner = sorted(
            t
            for t in cuts.get(ref.global_index, [])
            if SNAP_TOLERANCE < t < 1 - SNAP_TOLERANCE
        )
        bounds = [0.0, *inner, 1.0]
        for lo, hi in zip(bounds, bounds[1:]):
            piece = next(pieces)
            expected = sample_segment(ref.start, ref.segment, lo + ts * (hi - lo))
            actual = sample_segment(piece.start, piece.segment, ts)
            np.testing.assert_allclose(actual, expected, rtol=0, atol=1e-9)
    assert next(pieces, None) is None


@given(soft_paths(allow_closed=False, min_size=1), st.floats(0, 1))
def test_split_at_keeps_the_trace(path, t):
    assume(path.segment_count > 0)
    location = locate(path, t)
    assert_matched_trace(
        path, split_at(path, t), {location.segment_index - 1: [location.local_t]}
    )


def test_split_with_keeps_the_trace(braid):
    p, q = braid
    cuts: Dict[int, List[float]] = {}
    for hit in path_intersections(p, q):
        cuts.setdefault(hit.seg_a - 1, []).append(hit.t_a)
    assert len(cuts) == 4
    assert_matched_trace(p, split_with(p, q), cuts)


@given(soft_paths(grid_points))
def test_spot_weld_is_idempotent(path):
    welded = spot_weld(path)
    assert spot_weld(welded) == welded
    assert len(welded.components) <= len(path.components)


@given(
    soft_paths(min_size=1),
    st.floats(-180, 180),
    st.floats(0.25, 4),
    coordinates,
    coordinates,
)
def test_transforms_compose(path, angle, factor, dx, dy):
    first = compose(rotation(angle), scaling(factor))
    second = translation(dx, dy)

    stepwise = transform_path(transform_path(path, first), second)
    combined = transform_path(path, compose(first, second))
    np.testing.assert_allclose(all_points(stepwise), all_points(combined), atol=1e-9)


@given(soft_paths(min_size=1), st.floats(-180, 180))
def test_rotation_keeps_lengths(path, angle):
    rotated = transform_path(path, rotation(angle))
    before, after = all_points(path), all_points(rotated)
    np.testing.assert_allclose(
        np.linalg.norm(after, axis=1), np.linalg.norm(before, axis=1), atol=1e-9
    )
    assert len(before) == len(after)
