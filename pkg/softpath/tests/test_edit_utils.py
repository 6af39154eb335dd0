import logging
import math

import pytest

from softpath.edit_utils import (
    bridge,
    close_path,
    insert_gaps_components,
    insert_gaps_segments,
    join_components,
    join_with,
    join_with_curve,
    knot,
    open_path,
    remove_components,
    remove_empty,
    reverse,
    span,
    span_to,
    splice,
    spot_weld,
    translate,
)
from softpath.path_parsers import parse
from softpath.types import (
    CloseMode,
    DegenerateSpan,
    EmptyPath,
    GapSpec,
    InvalidRange,
    Point,
    SoftPath,
)

TWO_LINES = parse("M 0 0 L 10 0 M 10 0 L 20 0")
GAPPED = parse("M 0 0 L 1 0 M 3 0 L 4 0")
CIRCLE = parse("M 1 0 A 1 1 0 0 1 -1 0 A 1 1 0 0 1 1 0 Z")


def assert_near(p: Point, q: Point, tol: float = 1e-9):
    assert p.distance(q) < tol, f"{p} != {q}"


def test_reverse_and_translate():
    assert reverse(parse("M 0 0 L 1 0")) == parse("M 1 0 L 0 0")
    assert translate(parse("M 0 0 L 1 0"), 1, 2) == parse("M 1 2 L 2 2")


@pytest.mark.parametrize("operation", [reverse, remove_empty, open_path, spot_weld])
def test_empty_path_warns(operation, caplog):
    with caplog.at_level(logging.WARNING):
        assert operation(SoftPath()) == SoftPath()
    assert "empty" in caplog.text


def test_span():
    spanned = span(parse("M 0 0 L 1 1 L 2 0"), Point(0, 0), Point(0, 2))
    nodes = spanned.components[0].nodes
    assert nodes[0] == Point(0, 0)
    assert nodes[-1] == Point(0, 2)
    # a quarter turn anticlockwise
    assert_near(nodes[1], Point(-1, 1))


def test_span_lands_exactly():
    a, b = Point(0.1, 0.7), Point(-3.3, 12.9)
    spanned = span(parse("M 0 0 C 1 1 2 -1 3 0 M 5 0 L 7 1"), a, b)
    assert spanned.start == a
    assert spanned.end == b


def test_span_degenerate():
    with pytest.raises(DegenerateSpan):
        span(parse("M 0 0 L 1 0 L 0 0"), Point(0, 0), Point(1, 1))


def test_span_to():
    extended = span_to(parse("M 0 0 L 1 0"), parse("M 5 5 L 6 6"), Point(3, 0))
    assert len(extended.components) == 1
    assert len(extended.components[0].segments) == 2
    assert extended.end == Point(3, 0)


def test_gaps_between_components():
    gapped = insert_gaps_components(TWO_LINES, GapSpec(2))
    assert_near(gapped.components[0].end, Point(9, 0))
    assert_near(gapped.components[1].start, Point(11, 0))
    assert gapped.components[0].start == Point(0, 0)


def test_gap_after_last_pairs_with_first():
    gapped = insert_gaps_components(TWO_LINES, GapSpec(2, (2,)))
    assert_near(gapped.components[1].end, Point(19, 0))
    assert_near(gapped.components[0].start, Point(1, 0))
    assert gapped.components[0].end == Point(10, 0)


def test_gaps_skip_closed_components(caplog):
    path = parse("M 0 0 L 1 0 M 5 5 L 6 5 L 6 6 Z")
    with caplog.at_level(logging.WARNING):
        assert insert_gaps_components(path, GapSpec(0.5)) == path
    assert "closed" in caplog.text


def test_gaps_bad_index_warns(caplog):
    with caplog.at_level(logging.WARNING):
        gapped = insert_gaps_components(TWO_LINES, GapSpec(2, (7,)))
    assert gapped == TWO_LINES
    assert "no component 7" in caplog.text


@pytest.mark.parametrize("amount", [0, -1])
def test_gaps_need_positive_width(amount):
    with pytest.raises(InvalidRange):
        insert_gaps_components(TWO_LINES, GapSpec(amount))


def test_gaps_after_segment():
    gapped = insert_gaps_segments(parse("M 0 0 L 10 0 L 20 0 L 30 0"), GapSpec(2, (1,)))
    assert len(gapped.components) == 2
    assert_near(gapped.components[0].end, Point(9, 0))
    assert_near(gapped.components[1].start, Point(11, 0))
    assert gapped.end == Point(30, 0)


def test_gaps_after_final_segment_of_component():
    gapped = insert_gaps_segments(parse("M 0 0 L 10 0 M 20 0 L 30 0"), GapSpec(2, (1,)))
    assert_near(gapped.components[0].end, Point(9, 0))
    assert_near(gapped.components[1].start, Point(21, 0))


def test_gaps_after_last_segment_warns(caplog):
    path = parse("M 0 0 L 10 0 L 20 0")
    with caplog.at_level(logging.WARNING):
        assert insert_gaps_segments(path, GapSpec(2, (2,))) == path
    assert "no following component" in caplog.text


def test_join_components():
    path = parse("M 0 0 L 1 0 M 5 5 L 6 5 M 7 7 L 8 8")
    joined = join_components(path, [2])
    assert len(joined.components) == 2
    assert len(joined.components[0].segments) == 2
    assert joined.components[0].end == Point(6, 5)


def test_join_first_after_last():
    path = parse("M 0 0 L 1 0 M 5 5 L 6 5 M 7 7 L 8 8")
    joined = join_components(path, [1])
    assert len(joined.components) == 2
    assert joined.components[-1].start == Point(7, 7)
    assert joined.end == Point(1, 0)


@pytest.mark.parametrize(
    "data, expected",
    [
        ("M 0 0 L 1 0 M 1.005 0 L 2 0", 1),
        ("M 0 0 L 1 0 M 1.02 0 L 2 0", 2),
        ("M 0 0 L 1 0 M 1 0 L 2 0 M 2 0 L 3 0", 1),
        ("M 1 0 L 2 0 M 0 0 L 1 0", 1),
        ("M 0 0 L 1 0 L 0 1 Z M 0 0 L 5 5", 2),
    ],
)
def test_spot_weld(data, expected):
    welded = spot_weld(parse(data))
    assert len(welded.components) == expected
    assert spot_weld(welded) == welded


def test_spot_weld_wraps_last_onto_first():
    welded = spot_weld(parse("M 1 0 L 2 0 M 0 0 L 1 0"))
    assert welded.start == Point(0, 0)
    assert welded.end == Point(2, 0)


def test_remove_empty_and_components(caplog):
    path = parse("M 0 0 L 1 0 M 5 5 M 6 6 L 7 7")
    assert len(remove_empty(path).components) == 2
    assert remove_components(path, [1, 3]) == parse("M 5 5")
    with caplog.at_level(logging.WARNING):
        assert remove_components(path, [4]) == path
    assert "no component 4" in caplog.text


def test_open_path(unit_square):
    opened = open_path(unit_square).components[0]
    assert not opened.closed
    assert len(opened.segments) == 4
    assert opened.end == Point(0, 0)

    already_home = open_path(parse("M 0 0 L 1 0 L 0 1 L 0 0 Z")).components[0]
    assert len(already_home.segments) == 3


def test_close_plain():
    closed = close_path(parse("M 5 5 L 6 5 M 0 0 L 1 0 L 1 1"))
    assert closed.components[-1].closed
    assert not closed.components[0].closed
    assert len(closed.components[-1].segments) == 2


def test_close_adjust():
    closed = close_path(parse("M 0 0 L 1 0 C 1 1 0 1 0.1 0.1"), CloseMode.ADJUST)
    last = closed.components[0].segments[-1]
    assert last.to == Point(0, 0)
    assert_near(last.c2, Point(-0.1, 0.9))
    assert closed.components[0].closed


def test_close_with_curve():
    closed = close_path(parse("M 0 0 L 2 0 L 2 2"), CloseMode.WITH_CURVE)
    component = closed.components[0]
    assert component.closed
    assert len(component.segments) == 3
    assert component.segments[-1].is_cubic
    assert component.end == Point(0, 0)


def test_close_with_splice(semicircle):
    closed = close_path(parse("M 0 0 L 2 0 L 2 2"), CloseMode.WITH, semicircle)
    component = closed.components[0]
    assert component.closed
    assert len(component.segments) == 4
    assert_near(component.end, Point(0, 0))


def test_close_with_multi_component_splice_stays_open():
    closed = close_path(
        parse("M 0 0 L 2 0 L 2 2"), CloseMode.WITH, parse("M 0 0 L 1 0 M 1 0 L 2 0")
    )
    assert len(closed.components) == 1
    assert not closed.components[0].closed
    assert len(closed.components[0].segments) == 4


def test_close_already_closed_warns(unit_square, caplog):
    with caplog.at_level(logging.WARNING):
        assert close_path(unit_square) == unit_square
    assert "already closed" in caplog.text


@pytest.mark.parametrize("path", [SoftPath(), parse("M 0 0 L 1 0 M 3 3")])
def test_close_needs_segments(path):
    with pytest.raises(EmptyPath):
        close_path(path)


def test_join_with_bump(semicircle):
    joined = join_with(GAPPED, semicircle, [1])
    assert len(joined.components) == 1
    nodes = joined.components[0].nodes
    assert len(nodes) == 5
    assert_near(nodes[2], Point(2, 1))


@pytest.mark.parametrize("upright, apex_y", [(True, 1), (False, -1)])
def test_join_with_upright(semicircle, upright, apex_y):
    leftwards = reverse(GAPPED)
    joined = join_with(leftwards, semicircle, [1], upright=upright)
    assert_near(joined.components[0].nodes[2], Point(2, apex_y))


def test_join_with_absent_and_empty_indices_agree(semicircle):
    path = parse("M 0 0 L 1 0 M 1 0 L 2 0 M 4 0 L 5 0")
    joined = join_with(path, semicircle)
    # touching components are spot welded before bridging
    assert len(joined.components) == 1
    assert joined == join_with(path, semicircle, [])


def test_join_with_listed_junction_only(semicircle):
    path = parse("M 0 0 L 1 0 M 1 0 L 2 0 M 4 0 L 5 0")
    joined = join_with(path, semicircle, [2])
    assert len(joined.components) == 2
    assert joined.components[0] == path.components[0]


def test_join_with_empty_splice_warns(caplog):
    with caplog.at_level(logging.WARNING):
        assert join_with(GAPPED, SoftPath()) == GAPPED
    assert "splice" in caplog.text


def test_join_with_curve_matches_tangents():
    joined = join_with_curve(parse("M 0 0 L 1 0 M 3 1 L 4 1"))
    component = joined.components[0]
    assert len(component.segments) == 3
    curve = component.segments[1]
    assert curve.is_cubic
    assert curve.c1.y == pytest.approx(0, abs=1e-12)
    assert curve.c1.x > 1
    assert curve.c2.y == pytest.approx(1, abs=1e-12)
    assert curve.c2.x < 3


def test_join_with_curve_skips_closed(caplog):
    path = parse("M 0 0 L 1 0 M 5 5 L 6 5 L 6 6 Z")
    with caplog.at_level(logging.WARNING):
        assert join_with_curve(path, [1]) == path
    assert "closed" in caplog.text


def assert_finite_cubic(segment):
    assert segment.is_cubic
    assert all(math.isfinite(v) for p in segment.points for v in p)


def test_join_with_curve_against_reversed_tangents(caplog):
    with caplog.at_level(logging.WARNING):
        joined = join_with_curve(parse("M 2 0 L 1 0 M 5 0 L 4 0"), [1])
    component = joined.components[0]
    assert len(joined.components) == 1
    assert_finite_cubic(component.segments[1])
    assert component.end == Point(4, 0)
    assert "reversed" in caplog.text


def test_close_with_curve_against_reversed_tangents(caplog):
    with caplog.at_level(logging.WARNING):
        closed = close_path(parse("M 5 0 L 4 0 L 6 0 L 1 0"), CloseMode.WITH_CURVE)
    component = closed.components[0]
    assert component.closed
    assert_finite_cubic(component.segments[-1])
    assert component.end == Point(5, 0)
    assert "reversed" in caplog.text


def test_splice(semicircle):
    initial, final = parse("M 0 0 L 1 0"), parse("M 3 0 L 4 0 L 5 1")
    spliced = splice(initial, semicircle, final)
    assert len(spliced.components) == 1
    assert spliced.segment_count == (
        initial.segment_count + semicircle.segment_count + final.segment_count
    )
    assert_near(spliced.components[0].nodes[2], Point(2, 1))


def test_splice_errors():
    line = parse("M 0 0 L 1 0")
    with pytest.raises(DegenerateSpan):
        splice(line, parse("M 0 0 L 1 0 L 0 0"), parse("M 3 0 L 4 0"))
    with pytest.raises(EmptyPath):
        splice(SoftPath(), line, line)


def test_knot(trefoil):
    strands = knot(trefoil, 8, [1, 3, 5])
    assert len(strands) == 3
    assert all(len(s.components) == 1 for s in strands)
    assert len(knot(trefoil, 8, [1, 3, 5], draft=True)) == 6


def test_knot_without_crossings():
    strands = knot(CIRCLE, 1)
    assert len(strands) == 1
    assert strands[0].components[0].closed


def test_bridge(semicircle):
    over = parse("M 0 0 L 100 0")
    under = parse("M 10 -10 L 30 10 L 50 -10 L 70 10")
    bridged, gapped = bridge(over, under, semicircle, 8, 4)

    assert len(bridged.components) == 1
    assert bridged.start == Point(0, 0)
    assert bridged.end == Point(100, 0)
    # three bumps of two arcs each between four straight pieces
    assert len(bridged.components[0].segments) == 10
    assert len(gapped.components) == 4


def test_bridge_without_crossings(semicircle, caplog):
    over, under = parse("M 0 0 L 1 0"), parse("M 0 5 L 1 5")
    with caplog.at_level(logging.INFO):
        assert bridge(over, under, semicircle, 1, 1) == (over, under)
    assert "do not cross" in caplog.text
