#!/usr/bin/env python

from __future__ import annotations

from functools import partial, wraps
from logging import getLogger
from typing import Any, Callable, Dict, Iterable, List, TypeVar

from .geom_utils import apply, translation
from .types import (
    AppendOptions,
    Component,
    Point,
    Segment,
    SegmentRef,
    SoftPath,
    Transform2D,
    UnknownPath,
    WeldOntoEmpty,
)

###############################################################################

log = getLogger(__name__)

###############################################################################

# Digits after the decimal point in dumps and SVG d-attributes
DUMP_DECIMALS = 6

PathFunc = TypeVar("PathFunc", bound=Callable[..., SoftPath])

###############################################################################


def warn_if_empty(func: PathFunc) -> PathFunc:
    """
    Make a path-to-path operation log a warning and return its input unchanged
    when given a path with no components.
    """

    @wraps(func)
    def wrapper(path: SoftPath, *args: Any, **kwargs: Any) -> SoftPath:
        if path.is_empty:
            log.warning(f"{func.__name__}: the path is empty, nothing to do")
            return path
        return func(path, *args, **kwargs)

    return wrapper  # type: ignore[return-value]


class PathRegistry:
    """
    Named soft path store.

    Paths are immutable values, so storing one under a second name already
    behaves as an independent deep copy.
    """

    def __init__(self) -> None:
        self._paths: Dict[str, SoftPath] = {}

    def __contains__(self, name: object) -> bool:
        return name in self._paths

    def __len__(self) -> int:
        return len(self._paths)

    def names(self) -> List[str]:
        return sorted(self._paths)

    def store(self, name: str, path: SoftPath) -> PathRegistry:
        log.debug(f"Storing {name} with {len(path.components)} components")
        self._paths[name] = path
        return self

    def lookup(self, name: str) -> SoftPath:
        try:
            return self._paths[name]
        except KeyError as e:
            raise UnknownPath(f"No soft path named '{name}'") from e

    def clone(self, target: str, source: str) -> PathRegistry:
        return self.store(target, self.lookup(source))


def iter_segments(path: SoftPath) -> List[SegmentRef]:
    """
    Enumerate every segment of a path with its start point.

    Closed components contribute their implicit closing edge as a line segment
    flagged with ``is_closing``.
    """
    refs: List[SegmentRef] = []
    for ci, component in enumerate(path.components):
        start = component.start
        for si, segment in enumerate(component.segments):
            refs.append(SegmentRef(ci, si, len(refs), start, segment))
            start = segment.to
        if component.closed:
            refs.append(
                SegmentRef(
                    ci,
                    len(component.segments),
                    len(refs),
                    component.end,
                    Segment.line(component.start),
                    is_closing=True,
                )
            )

    return refs


def get_components(path: SoftPath) -> List[SoftPath]:
    """
    Split a path into single-component paths.

    Parameters
    ----------
    path: SoftPath
        The path to split up.

    Returns
    -------
    List[SoftPath]
        One path per component, in order. These are copies: later edits to a
        component do not change the original path.
    """
    return [SoftPath((component,)) for component in path.components]


def concat(paths: Iterable[SoftPath]) -> SoftPath:
    return SoftPath(tuple(c for p in paths for c in p.components))


def reverse_component(component: Component) -> Component:
    if component.is_empty:
        return component

    nodes = component.nodes
    segments = []
    for i in range(len(component.segments) - 1, -1, -1):
        segment = component.segments[i]
        if segment.is_cubic:
            segments.append(Segment.cubic(segment.c2, segment.c1, nodes[i]))
        else:
            segments.append(Segment.line(nodes[i]))

    return Component(component.end, tuple(segments), component.closed)


def reverse_path(path: SoftPath) -> SoftPath:
    return SoftPath(tuple(reverse_component(c) for c in reversed(path.components)))


def transform_path(path: SoftPath, t: Transform2D) -> SoftPath:
    return path.map(partial(apply, t))


def weld_components(first: Component, second: Component) -> Component:
    """
    Drop the move at the start of second and attach its segments to first.

    Geometry is not moved: the first segment of second now starts wherever first
    ends.
    """
    if first.closed or second.closed:
        log.debug("Welding a closed component drops its closing edge")
    return Component(first.start, first.segments + second.segments, False)


def weld_paths(first: SoftPath, second: SoftPath) -> SoftPath:
    """Concatenate two paths, welding the last component of first to second."""
    if first.is_empty or second.is_empty:
        return concat((first, second))
    return SoftPath(
        first.components[:-1]
        + (weld_components(first.components[-1], second.components[0]),)
        + second.components[1:]
    )


def append(base: SoftPath, inserted: SoftPath, opts: AppendOptions) -> SoftPath:
    """
    Add inserted to the end of base.

    Parameters
    ----------
    base: SoftPath
        The path being extended.
    inserted: SoftPath
        The path to add. It is not changed.
    opts: AppendOptions
        Applied in the fixed order reverse, transform, move, weld.

    Returns
    -------
    SoftPath
        The combined path.

    Notes
    -----
    ``move`` translates inserted so that it starts at the final on-path point of
    base. ``weld`` removes the move at the start of inserted without moving
    anything; on an empty base it degrades to a plain append with a warning.
    """
    if inserted.is_empty:
        log.warning("append: the inserted path is empty, nothing to add")
        return base

    if opts.reverse:
        inserted = reverse_path(inserted)
    if opts.transform is not None:
        inserted = transform_path(inserted, opts.transform)
    if opts.move:
        if base.is_empty:
            log.warning("append: base path is empty so there is no point to move to")
        else:
            offset = base.end.vector_to(inserted.start)  # type: ignore[union-attr]
            inserted = transform_path(inserted, translation(-offset.dx, -offset.dy))

    if opts.weld:
        if base.is_empty:
            log.warning(WeldOntoEmpty("append: no path to weld onto, appending"))
        else:
            return weld_paths(base, inserted)

    return concat((base, inserted))


def format_number(value: float) -> str:
    """Fixed-point with trailing zeros trimmed and -0 normalised to 0."""
    text = f"{value:.{DUMP_DECIMALS}f}".rstrip("0").rstrip(".")
    if text in ("-0", "", "-"):
        return "0"
    return text


def _format_point(p: Point) -> str:
    return f"{format_number(p.x)} {format_number(p.y)}"


def component_elements(component: Component) -> List[str]:
    elements = [f"M {_format_point(component.start)}"]
    for segment in component.segments:
        if segment.is_cubic:
            elements.append(
                f"C {_format_point(segment.c1)} "  # type: ignore[arg-type]
                f"{_format_point(segment.c2)} "  # type: ignore[arg-type]
                f"{_format_point(segment.to)}"
            )
        else:
            elements.append(f"L {_format_point(segment.to)}")
    if component.closed:
        elements.append("Z")

    return elements


def serialize(path: SoftPath) -> str:
    """
    Dump a path one element per line (``M``, ``L``, ``C`` and ``Z``).

    The dump parses back to the same path with ``path_parsers.parse``.
    """
    if path.is_empty:
        log.warning("serialize: the path is empty")
        return ""

    lines = [e for c in path.components for e in component_elements(c)]
    return "\n".join(lines) + "\n"


def insert(base: SoftPath, inserted: SoftPath) -> SoftPath:
    """Append with every option off."""
    return append(base, inserted, AppendOptions())
