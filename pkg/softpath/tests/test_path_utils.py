import logging

import pytest

from softpath.geom_utils import translation
from softpath.path_parsers import parse
from softpath.path_utils import (
    PathRegistry,
    append,
    concat,
    format_number,
    get_components,
    insert,
    iter_segments,
    reverse_path,
    serialize,
)
from softpath.types import AppendOptions, Point, SoftPath, UnknownPath

LINE = parse("M 0 0 L 2 0")
CURVE = parse("M 0 0 C 1 1 2 1 3 0")
TWO_PIECES = parse("M 0 0 L 1 0 M 5 5 L 6 5 L 6 6")


@pytest.mark.parametrize(
    "value, expected",
    [
        (0.0, "0"),
        (-0.0, "0"),
        (-1e-9, "0"),
        (1.5, "1.5"),
        (2.0, "2"),
        (-3.25, "-3.25"),
        (1 / 3, "0.333333"),
        (1e6, "1000000"),
    ],
)
def test_format_number(value, expected):
    assert format_number(value) == expected


def test_registry_store_and_lookup():
    registry = PathRegistry().store("a", LINE)
    assert registry.lookup("a") == LINE
    registry.store("a", CURVE)
    assert registry.lookup("a") == CURVE
    assert "a" in registry
    assert len(registry) == 1


def test_registry_unknown_name():
    with pytest.raises(UnknownPath):
        PathRegistry().lookup("missing")
    with pytest.raises(UnknownPath):
        PathRegistry().clone("b", "missing")


def test_registry_clone_is_independent():
    registry = PathRegistry().store("a", LINE).clone("b", "a")
    registry.store("b", reverse_path(registry.lookup("b")))
    assert registry.lookup("a") == LINE
    assert registry.names() == ["a", "b"]

    # reversing both again brings them back together
    registry.store("a", reverse_path(registry.lookup("a")))
    assert registry.lookup("a") == registry.lookup("b")


def test_iter_segments_numbering():
    square = parse("M 0 0 L 1 0 L 1 1 L 0 1 Z")
    refs = iter_segments(concat((TWO_PIECES, square)))
    assert [r.global_index for r in refs] == list(range(7))
    assert [r.component_index for r in refs] == [0, 1, 1, 2, 2, 2, 2]
    assert refs[2].start == Point(6, 5)
    assert refs[3].start == Point(0, 0)
    closing = refs[-1]
    assert closing.is_closing
    assert closing.start == Point(0, 1)
    assert closing.segment.to == Point(0, 0)


def test_get_components_and_concat():
    pieces = get_components(TWO_PIECES)
    assert len(pieces) == 2
    assert all(len(p.components) == 1 for p in pieces)
    assert concat(pieces) == TWO_PIECES
    assert get_components(SoftPath()) == []

    closed = get_components(parse("M 0 0 L 1 0 L 1 1 Z"))
    assert closed[0].components[0].closed


def test_reverse_path():
    reversed_line = reverse_path(LINE)
    assert reversed_line == parse("M 2 0 L 0 0")

    reversed_curve = reverse_path(CURVE).components[0]
    assert reversed_curve.start == Point(3, 0)
    assert reversed_curve.segments[0].c1 == Point(2, 1)
    assert reversed_curve.segments[0].c2 == Point(1, 1)
    assert reversed_curve.segments[0].to == Point(0, 0)

    assert reverse_path(reverse_path(TWO_PIECES)) == TWO_PIECES
    assert reverse_path(TWO_PIECES).components[0].start == Point(6, 6)


def test_append_plain_adds_components():
    combined = append(LINE, TWO_PIECES, AppendOptions())
    assert len(combined.components) == 3
    assert insert(LINE, TWO_PIECES) == combined


def test_append_move_and_weld():
    combined = append(LINE, CURVE, AppendOptions(move=True, weld=True))
    assert len(combined.components) == 1
    segments = combined.components[0].segments
    assert segments[0].to == Point(2, 0)
    assert segments[1].c1 == Point(3, 1)
    assert segments[1].to == Point(5, 0)


def test_append_weld_does_not_move():
    combined = append(LINE, parse("M 10 10 L 11 10"), AppendOptions(weld=True))
    assert len(combined.components) == 1
    assert combined.components[0].segments[1].to == Point(11, 10)


def test_append_reverse_move_weld_onto_itself():
    combined = append(
        LINE, LINE, AppendOptions(reverse=True, move=True, weld=True)
    )
    assert len(combined.components) == 1
    assert combined.end == LINE.start


def test_append_transform_before_move():
    combined = append(
        LINE, LINE, AppendOptions(move=True, transform=translation(0, 5))
    )
    assert combined.components[1].start == Point(2, 0)


def test_append_weld_onto_empty(caplog):
    with caplog.at_level(logging.WARNING):
        combined = append(SoftPath(), LINE, AppendOptions(weld=True))
    assert combined == LINE
    assert "weld" in caplog.text


def test_serialize():
    assert serialize(parse("M 0 0 L 1 0")) == "M 0 0\nL 1 0\n"
    assert serialize(parse("M 0 0 C 1 1 2 1 3 0 Z")) == "M 0 0\nC 1 1 2 1 3 0\nZ\n"
    assert serialize(parse("M 0.5 -0.25 L 1e-9 0")) == "M 0.5 -0.25\nL 0 0\n"


def test_serialize_empty(caplog):
    with caplog.at_level(logging.WARNING):
        assert serialize(SoftPath()) == ""
    assert "empty" in caplog.text


def test_serialize_parses_back():
    path = parse("M 0 0 L 1 0 C 1 1 2 2 3 3 Z M 4 4 M 5 5 L 6 5")
    assert parse(serialize(path)) == path
