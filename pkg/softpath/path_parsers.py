#!/usr/bin/env python

from __future__ import annotations

import math
import re
from logging import getLogger
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

from defusedxml import ElementTree

from .geom_utils import (
    arc_to_cubics,
    compose,
    endpoint_arc_to_center,
    identity,
    is_finite,
    rotation,
    scaling,
    translation,
)
from .path_utils import concat
from .types import Component, ParseError, Point, Segment, SoftPath, Transform2D

###############################################################################

log = getLogger(__name__)

###############################################################################

PATH_COMMANDS = "MmLlCcQqAaHhVvZz"

NUMBER_PATTERN = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
NUMBER_RE = re.compile(NUMBER_PATTERN)
SEPARATOR_RE = re.compile(r"[\s,]*")

# shift(2,2) rotate(45) ...
TRANSFORM_RE = re.compile(r"[\s,]*([a-z]+)\s*\(([^)]*)\)")
POINT_RE = re.compile(
    rf"^\s*\(?\s*({NUMBER_PATTERN})(?:pt)?\s*[,\s]\s*"
    rf"({NUMBER_PATTERN})(?:pt)?\s*\)?\s*$"
)

###############################################################################


class _PathScanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_separators(self) -> None:
        self.pos = SEPARATOR_RE.match(self.text, self.pos).end()  # type: ignore

    def at_end(self) -> bool:
        self.skip_separators()
        return self.pos >= len(self.text)

    def peek_command(self) -> Optional[str]:
        self.skip_separators()
        if self.pos < len(self.text) and self.text[self.pos] in PATH_COMMANDS:
            return self.text[self.pos]
        return None

    def read_command(self) -> str:
        command = self.peek_command()
        if command is None:
            raise ParseError(self.pos, "Expected a path command")
        self.pos += 1
        return command

    def at_number(self) -> bool:
        self.skip_separators()
        return NUMBER_RE.match(self.text, self.pos) is not None

    def read_number(self) -> float:
        self.skip_separators()
        match = NUMBER_RE.match(self.text, self.pos)
        if match is None:
            if self.pos >= len(self.text):
                raise ParseError(self.pos, "Unexpected end of path data")
            raise ParseError(self.pos, f"Malformed number near '{self.text[self.pos]}'")

        value = float(match.group())
        if not math.isfinite(value):
            raise ParseError(self.pos, f"Number {match.group()} is not finite")
        self.pos = match.end()
        return value

    def read_flag(self) -> bool:
        # arc flags may be packed without separators, e.g. "a1 1 0 01.5 2"
        self.skip_separators()
        if self.pos < len(self.text) and self.text[self.pos] in "01":
            self.pos += 1
            return self.text[self.pos - 1] == "1"
        raise ParseError(self.pos, "Expected an arc flag (0 or 1)")


class _PathBuilder:
    def __init__(self) -> None:
        self.components: List[Component] = []
        self.start: Optional[Point] = None
        self.segments: List[Segment] = []
        self.closed = False
        self.current = Point(0.0, 0.0)
        self.subpath_start = Point(0.0, 0.0)

    def _flush(self) -> None:
        if self.start is not None:
            self.components.append(
                Component(self.start, tuple(self.segments), self.closed)
            )
        self.start = None
        self.segments = []
        self.closed = False

    def move_to(self, p: Point) -> None:
        self._flush()
        self.start = self.current = self.subpath_start = p

    def add(self, segment: Segment) -> None:
        # drawing after a close starts a new component at the subpath start
        if self.closed:
            self.move_to(self.subpath_start)
        self.segments.append(segment)
        self.current = segment.to

    def close(self) -> None:
        self.closed = True
        self.current = self.subpath_start

    def finish(self) -> SoftPath:
        self._flush()
        return SoftPath(tuple(self.components))


def _read_point(scanner: _PathScanner, origin: Point, relative: bool) -> Point:
    x = scanner.read_number()
    y = scanner.read_number()
    if relative:
        return Point(origin.x + x, origin.y + y)
    return Point(x, y)


def _add_arc(builder: _PathBuilder, scanner: _PathScanner, relative: bool) -> None:
    rx = scanner.read_number()
    ry = scanner.read_number()
    rotation_deg = scanner.read_number()
    large_arc = scanner.read_flag()
    sweep = scanner.read_flag()
    p0 = builder.current
    p1 = _read_point(scanner, p0, relative)

    # SVG draws a straight line for a zero radius
    if rx == 0 or ry == 0:
        builder.add(Segment.line(p1))
        return

    center = endpoint_arc_to_center(p0, p1, rx, ry, rotation_deg, large_arc, sweep)
    if center is None:
        return

    pieces = arc_to_cubics(
        center.center,
        center.rx,
        center.ry,
        center.start_deg,
        center.start_deg + center.sweep_deg,
        rotation_deg,
    )
    for i, (c1, c2, to) in enumerate(pieces):
        builder.add(Segment.cubic(c1, c2, p1 if i == len(pieces) - 1 else to))


def parse(text: str) -> SoftPath:
    """
    Parse SVG path data into a soft path.

    Parameters
    ----------
    text: str
        Path data using the M, L, H, V, C, Q, A and Z commands in either
        absolute or relative form. Implicit command repetition is allowed.

    Returns
    -------
    SoftPath
        The parsed path. Quadratic segments are degree-elevated and arcs are
        converted to cubics, so only lines and cubics remain.

    Raises
    ------
    ParseError
        On malformed numbers, unknown commands or missing arguments.

    See Also
    --------
    softpath.path_utils.serialize
        The dump format this parses back.
    """
    scanner = _PathScanner(text)
    builder = _PathBuilder()
    command: Optional[str] = None

    while not scanner.at_end():
        offset = scanner.pos
        if scanner.peek_command() is not None:
            command = scanner.read_command()
            if builder.start is None and not builder.components and command not in "Mm":
                raise ParseError(offset, "Path data must begin with a moveto")
        elif not scanner.at_number():
            raise ParseError(offset, f"Unknown path command '{text[offset]}'")
        elif command is None:
            raise ParseError(offset, "Path data must begin with a moveto")
        elif command in "Zz":
            raise ParseError(offset, "Close path takes no arguments")

        upper = command.upper()
        relative = command.islower()
        if upper == "Z":
            builder.close()
            continue
        if not scanner.at_number():
            raise ParseError(scanner.pos, f"Missing arguments for '{command}'")

        p0 = builder.current
        if upper == "M":
            builder.move_to(_read_point(scanner, p0, relative))
            # further coordinate pairs are implicit linetos
            command = "l" if relative else "L"
        elif upper == "L":
            builder.add(Segment.line(_read_point(scanner, p0, relative)))
        elif upper == "H":
            x = scanner.read_number()
            builder.add(Segment.line(Point(p0.x + x if relative else x, p0.y)))
        elif upper == "V":
            y = scanner.read_number()
            builder.add(Segment.line(Point(p0.x, p0.y + y if relative else y)))
        elif upper == "C":
            c1 = _read_point(scanner, p0, relative)
            c2 = _read_point(scanner, p0, relative)
            builder.add(Segment.cubic(c1, c2, _read_point(scanner, p0, relative)))
        elif upper == "Q":
            q = _read_point(scanner, p0, relative)
            p3 = _read_point(scanner, p0, relative)
            builder.add(
                Segment.cubic(
                    Point(p0.x + 2 / 3 * (q.x - p0.x), p0.y + 2 / 3 * (q.y - p0.y)),
                    Point(p3.x + 2 / 3 * (q.x - p3.x), p3.y + 2 / 3 * (q.y - p3.y)),
                    p3,
                )
            )
        else:
            _add_arc(builder, scanner, relative)

    return builder.finish()


def _finite(token: str, offset: int) -> float:
    value = float(token)
    if not math.isfinite(value):
        raise ParseError(offset, f"Number {token} is not finite")
    return value


def _transform_arguments(name: str, raw: str, offset: int) -> List[float]:
    values = []
    for token in re.split(r"[\s,]+", raw.strip()):
        if not token:
            continue
        if NUMBER_RE.fullmatch(token) is None:
            raise ParseError(offset, f"Bad argument '{token}' to {name}")
        values.append(_finite(token, offset))
    return values


TRANSFORM_BUILDERS: Dict[str, Callable[..., Transform2D]] = {
    "shift": translation,
    "rotate": rotation,
    "scale": scaling,
    "xscale": lambda sx: scaling(sx, 1.0),
    "yscale": lambda sy: scaling(1.0, sy),
}

TRANSFORM_ARITY: Dict[str, Tuple[int, ...]] = {
    "shift": (2,),
    "rotate": (1,),
    "scale": (1, 2),
    "xscale": (1,),
    "yscale": (1,),
}


def parse_transform(text: str) -> Transform2D:
    """
    Parse a list of elementary transformations.

    Parameters
    ----------
    text: str
        Comma or space separated ``shift(dx,dy)``, ``rotate(deg)``,
        ``scale(s)``, ``xscale(sx)`` and ``yscale(sy)`` calls.

    Returns
    -------
    Transform2D
        The composition, with the leftmost entry applied first. An empty string
        gives the identity.

    Raises
    ------
    ParseError
        On an unknown name or a wrong argument count, on trailing garbage,
        and when an argument or the composed result is not finite.
    """
    transforms = []
    pos = 0
    while pos < len(text):
        if not text[pos:].strip(" \t\n,"):
            break
        match = TRANSFORM_RE.match(text, pos)
        if match is None:
            raise ParseError(pos, f"Cannot read a transformation from '{text[pos:]}'")

        name = match.group(1)
        if name not in TRANSFORM_BUILDERS:
            raise ParseError(match.start(1), f"Unknown transformation '{name}'")
        args = _transform_arguments(name, match.group(2), match.start(2))
        if len(args) not in TRANSFORM_ARITY[name]:
            raise ParseError(
                match.start(2),
                f"{name} takes {' or '.join(map(str, TRANSFORM_ARITY[name]))} "
                f"arguments, got {len(args)}",
            )

        transforms.append(TRANSFORM_BUILDERS[name](*args))
        pos = match.end()

    if not transforms:
        return identity()
    combined = compose(*transforms)
    if not is_finite(combined):
        raise ParseError(0, f"Transformation '{text}' overflows")
    return combined


def parse_point(text: str) -> Point:
    """Read ``x,y`` or ``(x,y)``; a ``pt`` suffix on either number is ignored."""
    match = POINT_RE.match(text)
    if match is None:
        raise ParseError(0, f"Cannot read a point from '{text}'")
    return Point(
        _finite(match.group(1), match.start(1)), _finite(match.group(2), match.start(2))
    )


def read_svg(svg_file: Union[str, Path]) -> SoftPath:
    """
    Read every ``<path>`` of an SVG document into one soft path.

    Parameters
    ----------
    svg_file: Union[str, Path]
        The SVG document to read.

    Returns
    -------
    SoftPath
        The parsed d-attributes concatenated in document order. Element
        transforms are not applied.

    Raises
    ------
    ParseError
        If the document is not well-formed XML or a d-attribute is malformed.
    """
    try:
        root = ElementTree.parse(str(svg_file)).getroot()
    except ElementTree.ParseError as e:
        raise ParseError(0, f"{svg_file} is not a well-formed SVG document") from e

    paths = []
    for element in root.iter():
        # tags carry the SVG namespace, e.g. {http://www.w3.org/2000/svg}path
        if not isinstance(element.tag, str) or element.tag.rsplit("}", 1)[-1] != "path":
            continue
        if element.get("transform"):
            log.warning(f"Ignoring transform on a path element of {svg_file}")
        paths.append(parse(element.get("d", "")))

    log.debug(f"Read {len(paths)} path elements from {svg_file}")
    return concat(paths)
