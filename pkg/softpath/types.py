#!/usr/bin/env python

from __future__ import annotations

import enum
import math
from typing import Callable, Dict, NamedTuple, Optional, Tuple

import numpy as np

###############################################################################


class Vec2(NamedTuple):
    dx: float
    dy: float

    def __add__(self, other: Vec2) -> Vec2:  # type: ignore[override]
        return Vec2(self.dx + other[0], self.dy + other[1])

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.dx - other[0], self.dy - other[1])

    def __mul__(self, scalar: float) -> Vec2:  # type: ignore[override]
        return Vec2(self.dx * scalar, self.dy * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> Vec2:
        return Vec2(-self.dx, -self.dy)

    @property
    def norm(self) -> float:
        return math.hypot(self.dx, self.dy)

    @property
    def angle(self) -> float:
        """Direction in radians, counterclockwise from the x-axis."""
        return math.atan2(self.dy, self.dx)

    def unit(self) -> Vec2:
        length = self.norm
        if length == 0:
            return Vec2(0.0, 0.0)
        return Vec2(self.dx / length, self.dy / length)

    def dot(self, other: Vec2) -> float:
        return self.dx * other[0] + self.dy * other[1]

    def cross(self, other: Vec2) -> float:
        return self.dx * other[1] - self.dy * other[0]

    def as_complex(self) -> complex:
        return complex(self.dx, self.dy)


class Point(NamedTuple):
    x: float
    y: float

    def __add__(self, offset: Vec2) -> Point:  # type: ignore[override]
        return Point(self.x + offset[0], self.y + offset[1])

    def __sub__(self, other: Point | Vec2) -> Vec2 | Point:  # type: ignore[override]
        # point - vector is a point, point - point is a vector
        if isinstance(other, Vec2):
            return Point(self.x - other.dx, self.y - other.dy)
        return Vec2(self.x - other[0], self.y - other[1])

    def vector_to(self, other: Point) -> Vec2:
        return Vec2(other.x - self.x, other.y - self.y)

    def distance(self, other: Point) -> float:
        return math.hypot(other.x - self.x, other.y - self.y)

    def as_complex(self) -> complex:
        return complex(self.x, self.y)

    @staticmethod
    def from_complex(z: complex) -> Point:
        return Point(z.real, z.imag)


class Transform2D(NamedTuple):
    """
    Affine map (x, y) -> (a*x + c*y + e, b*x + d*y + f).

    The six entries follow the SVG ``matrix(a b c d e f)`` ordering.
    """

    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    d: float = 1.0
    e: float = 0.0
    f: float = 0.0

    @property
    def determinant(self) -> float:
        return self.a * self.d - self.b * self.c

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.a, self.c, self.e], [self.b, self.d, self.f], [0.0, 0.0, 1.0]]
        )

    @staticmethod
    def from_matrix(m: np.ndarray) -> Transform2D:
        return Transform2D(
            float(m[0, 0]),
            float(m[1, 0]),
            float(m[0, 1]),
            float(m[1, 1]),
            float(m[0, 2]),
            float(m[1, 2]),
        )


class SegmentKind(enum.Enum):
    LINE = "L"
    CUBIC = "C"


class Segment(NamedTuple):
    """A line-to or cubic-to drawing piece; its start is the previous point."""

    kind: SegmentKind
    to: Point
    c1: Optional[Point] = None
    c2: Optional[Point] = None

    @staticmethod
    def line(to: Point) -> Segment:
        return Segment(SegmentKind.LINE, to)

    @staticmethod
    def cubic(c1: Point, c2: Point, to: Point) -> Segment:
        return Segment(SegmentKind.CUBIC, to, c1, c2)

    @property
    def is_cubic(self) -> bool:
        return self.kind is SegmentKind.CUBIC

    @property
    def points(self) -> Tuple[Point, ...]:
        if self.is_cubic:
            return (self.c1, self.c2, self.to)  # type: ignore[return-value]
        return (self.to,)

    def map(self, fn: Callable[[Point], Point]) -> Segment:
        if self.is_cubic:
            return Segment.cubic(fn(self.c1), fn(self.c2), fn(self.to))  # type: ignore
        return Segment.line(fn(self.to))


class Component(NamedTuple):
    """
    A start point, its segments and whether an implicit closing edge is drawn.

    A component with no segments is an isolated move.
    """

    start: Point
    segments: Tuple[Segment, ...] = ()
    closed: bool = False

    @property
    def end(self) -> Point:
        """Final on-path point (before any implicit closing edge)."""
        return self.segments[-1].to if self.segments else self.start

    @property
    def is_empty(self) -> bool:
        return len(self.segments) == 0

    @property
    def nodes(self) -> Tuple[Point, ...]:
        return (self.start, *(s.to for s in self.segments))

    def map(self, fn: Callable[[Point], Point]) -> Component:
        return Component(
            fn(self.start), tuple(s.map(fn) for s in self.segments), self.closed
        )


class SoftPath(NamedTuple):
    components: Tuple[Component, ...] = ()

    @property
    def is_empty(self) -> bool:
        return len(self.components) == 0

    @property
    def start(self) -> Optional[Point]:
        return self.components[0].start if self.components else None

    @property
    def end(self) -> Optional[Point]:
        return self.components[-1].end if self.components else None

    @property
    def segment_count(self) -> int:
        """Number of segments, closing edges of closed components included."""
        return sum(len(c.segments) + int(c.closed) for c in self.components)

    def map(self, fn: Callable[[Point], Point]) -> SoftPath:
        return SoftPath(tuple(c.map(fn) for c in self.components))


class SegmentRef(NamedTuple):
    """A segment located in a path; indices are 0-based."""

    component_index: int
    local_index: int
    global_index: int
    start: Point
    segment: Segment
    is_closing: bool = False


class PathLocation(NamedTuple):
    component_index: int
    segment_index: int
    local_t: float
    point: Point
    tangent: Vec2


class Frame(NamedTuple):
    origin: Point
    angle_rad: float


class IntersectionHit(NamedTuple):
    seg_a: int
    t_a: float
    seg_b: int
    t_b: float
    point: Point


class GapSpec(NamedTuple):
    amount: float
    indices: Optional[Tuple[int, ...]] = None


class AppendOptions(NamedTuple):
    reverse: bool = False
    move: bool = False
    weld: bool = False
    transform: Optional[Transform2D] = None


class HobbyJoin(NamedTuple):
    p0: Point
    dir0: Vec2
    p1: Point
    dir1: Vec2


class PathEnd(enum.Enum):
    START = "start"
    END = "end"
    BOTH = "both"


class KeepSide(enum.Enum):
    START = "start"
    END = "end"
    MIDDLE = "middle"


class CloseMode(enum.Enum):
    PLAIN = "plain"
    ADJUST = "adjust"
    WITH = "with"
    WITH_CURVE = "with curve"


class SvgStyle(NamedTuple):
    class_names: Tuple[str, ...] = ()
    attributes: Optional[Dict[str, str]] = None


class Command(NamedTuple):
    verb: str
    args: Tuple[str, ...] = ()
    options: Optional[Dict[str, object]] = None
    line_number: int = 0


class VerbSpec(NamedTuple):
    """Argument count bounds and accepted ``--flags`` of a script verb."""

    min_args: int
    max_args: int
    flags: Tuple[str, ...] = ()


###############################################################################
# Errors


class SoftPathError(ValueError):
    """Base class for every recoverable soft path failure."""


class DegenerateSpan(SoftPathError):
    pass


class InvalidArc(SoftPathError):
    pass


class UnknownPath(SoftPathError):
    pass


class WeldOntoEmpty(SoftPathError):
    pass


class EmptyPath(SoftPathError):
    pass


class ParameterOutOfRange(SoftPathError):
    pass


class InvalidRange(SoftPathError):
    pass


class IndexOutOfRange(SoftPathError):
    pass


class ZeroTangent(SoftPathError):
    pass


class ParseError(SoftPathError):
    def __init__(self, offset: int, message: str):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
        self.message = message


class ScriptParseError(SoftPathError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number
        self.message = message
