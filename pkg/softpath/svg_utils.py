#!/usr/bin/env python

from __future__ import annotations

import re
from logging import getLogger
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union
from xml.etree.ElementTree import Element, SubElement, tostring

import numpy as np

from .path_utils import component_elements, format_number
from .types import SoftPath, SvgStyle

###############################################################################

log = getLogger(__name__)

###############################################################################

SVG_NAMESPACE = "http://www.w3.org/2000/svg"

# Fraction of the drawing size added on every side of the viewBox
VIEWBOX_MARGIN = 0.05
# Margin used when the drawing has no extent in some direction
DEGENERATE_MARGIN = 0.5
EMPTY_VIEWBOX = "0 0 1 1"

DEFAULT_ATTRIBUTES = {"fill": "none", "stroke": "black"}

# Characters not allowed in an XML NCName
NCNAME_INVALID_RE = re.compile(r"[^A-Za-z0-9_.-]")

NamedPath = Tuple[str, SoftPath, SvgStyle]

###############################################################################


def css_name(name: str) -> str:
    """
    Turn a path name into something usable inside a class name.

    Parameters
    ----------
    name: str
        The registry name of the path.

    Returns
    -------
    str
        The name with invalid characters replaced by ``-``. Names that do not
        start with a letter or underscore get a ``p-`` prefix.
    """
    cleaned = NCNAME_INVALID_RE.sub("-", name) or "path"
    if not (cleaned[0].isalpha() or cleaned[0] == "_"):
        cleaned = f"p-{cleaned}"
    return cleaned


def component_classes(name: str, index: int) -> List[str]:
    """Class cascade for 1-based component ``index`` of path ``name``."""
    prefix = css_name(name)
    return [
        "every-spath-component",
        f"spath-component-{index}",
        f"every-{prefix}-component",
        f"{prefix}-component-{index}",
    ]


def _control_points(paths: Sequence[NamedPath]) -> np.ndarray:
    points = []
    for _, path, _ in paths:
        for component in path.components:
            points.append(component.start)
            points.extend(p for s in component.segments for p in s.points)
    return np.array(points, dtype=float).reshape(-1, 2)


def view_box(paths: Sequence[NamedPath]) -> str:
    """
    The viewBox of the y-flipped drawing.

    Uses the control-point bounding box with VIEWBOX_MARGIN on every side.
    """
    points = _control_points(paths)
    if len(points) == 0:
        return EMPTY_VIEWBOX

    low, high = points.min(axis=0), points.max(axis=0)
    size = high - low
    margin = np.where(size > 0, size * VIEWBOX_MARGIN, DEGENERATE_MARGIN)
    low, high = low - margin, high + margin

    # model y grows upwards; the top-level group maps y to -y
    return " ".join(
        format_number(v)
        for v in (low[0], -high[1], high[0] - low[0], high[1] - low[1])
    )


def to_svg(paths: Sequence[NamedPath]) -> str:
    """
    Render named paths as an SVG document.

    Parameters
    ----------
    paths: Sequence[NamedPath]
        (name, path, style) triples. Each becomes a ``<g>`` holding one
        ``<path>`` per component.

    Returns
    -------
    str
        The SVG document. Component ``i`` of path ``P`` carries the classes
        ``every-spath-component spath-component-i every-P-component
        P-component-i`` followed by the style's own classes, plus a
        ``data-component`` attribute holding ``i``.
    """
    svg = Element(
        "svg",
        {
            "xmlns": SVG_NAMESPACE,
            "version": "1.1",
            "viewBox": view_box(paths),
        },
    )
    flipped = SubElement(svg, "g", {"transform": "scale(1,-1)"})

    for name, path, style in paths:
        if path.is_empty:
            log.warning(f"to_svg: path '{name}' is empty")
        group = SubElement(flipped, "g", {"id": css_name(name)})
        for i, component in enumerate(path.components, start=1):
            attributes: Dict[str, str] = dict(DEFAULT_ATTRIBUTES)
            attributes.update(style.attributes or {})
            attributes["class"] = " ".join(
                component_classes(name, i) + list(style.class_names)
            )
            attributes["data-component"] = str(i)
            attributes["d"] = " ".join(component_elements(component))
            SubElement(group, "path", attributes)

    return '<?xml version="1.0" encoding="UTF-8"?>\n' + tostring(
        svg, encoding="unicode"
    )


def write_svg(
    paths: Sequence[NamedPath], svg_file: Optional[Union[str, Path]] = None
) -> Path:
    """
    Write the document built by to_svg.

    Parameters
    ----------
    paths: Sequence[NamedPath]
        The paths to render.
    svg_file: Optional[Union[str, Path]]
        Destination. Defaults to ``<name of the first path>.svg``.

    Returns
    -------
    Path
        The file written.
    """
    if svg_file is None:
        svg_file = f"{paths[0][0] if paths else 'path'}.svg"
    svg_file = Path(svg_file)

    svg_file.write_text(to_svg(paths), encoding="utf-8")
    count = sum(len(p.components) for _, p, _ in paths)
    log.info(f"Wrote {count} components to {svg_file}")
    return svg_file
