import math
from pathlib import Path
from typing import Callable, Tuple

import hypothesis
import numpy as np
import pytest

from softpath.path_parsers import parse
from softpath.types import Component, Point, Segment, SoftPath

RESOURCES = Path(__file__).parent / "resources"

TREFOIL_SEGMENTS = 12
TREFOIL_SCALE = 20.0
BRAID_HANDLE = 0.8

hypothesis.settings.register_profile("fast", max_examples=10)
hypothesis.settings.register_profile("thorough", max_examples=500)
hypothesis.settings.load_profile("thorough")


def hermite_path(
    curve: Callable[[float], Tuple[float, float]],
    velocity: Callable[[float], Tuple[float, float]],
    ts: np.ndarray,
    closed: bool = False,
) -> SoftPath:
    """Cubic Hermite interpolation of a parametric curve at the given parameters."""
    nodes = [Point(*curve(t)) for t in ts]
    if closed:
        nodes[-1] = nodes[0]

    segments = []
    for i in range(len(ts) - 1):
        h = (ts[i + 1] - ts[i]) / 3
        v0, v1 = velocity(ts[i]), velocity(ts[i + 1])
        segments.append(
            Segment.cubic(
                Point(nodes[i].x + h * v0[0], nodes[i].y + h * v0[1]),
                Point(nodes[i + 1].x - h * v1[0], nodes[i + 1].y - h * v1[1]),
                nodes[i + 1],
            )
        )
    return SoftPath((Component(nodes[0], tuple(segments), closed),))


def trefoil_path() -> SoftPath:
    def curve(t: float) -> Tuple[float, float]:
        return (
            TREFOIL_SCALE * (math.sin(t) + 2 * math.sin(2 * t)),
            TREFOIL_SCALE * (math.cos(t) - 2 * math.cos(2 * t)),
        )

    def velocity(t: float) -> Tuple[float, float]:
        return (
            TREFOIL_SCALE * (math.cos(t) + 4 * math.cos(2 * t)),
            TREFOIL_SCALE * (-math.sin(t) + 4 * math.sin(2 * t)),
        )

    ts = np.linspace(0, 2 * math.pi, TREFOIL_SEGMENTS + 1)
    return hermite_path(curve, velocity, ts, closed=True)


def wave_path(heights: Tuple[float, ...]) -> SoftPath:
    """Cubics through (2i, heights[i]) with horizontal tangents at every node."""
    start = Point(0.0, heights[0])
    segments = []
    for i in range(1, len(heights)):
        x0, x1 = 2.0 * (i - 1), 2.0 * i
        segments.append(
            Segment.cubic(
                Point(x0 + BRAID_HANDLE, heights[i - 1]),
                Point(x1 - BRAID_HANDLE, heights[i]),
                Point(x1, heights[i]),
            )
        )
    return SoftPath((Component(start, tuple(segments)),))


@pytest.fixture
def trefoil() -> SoftPath:
    return trefoil_path()


@pytest.fixture
def braid() -> Tuple[SoftPath, SoftPath]:
    return wave_path((0, 1, 0, 1, 0)), wave_path((1, 0, 1, 0, 1))


@pytest.fixture
def figure_eight() -> SoftPath:
    return parse("M 0 0 L 2 2 L 0 2 L 2 0")


@pytest.fixture
def unit_square() -> SoftPath:
    return parse("M 0 0 L 1 0 L 1 1 L 0 1 Z")


@pytest.fixture
def semicircle() -> SoftPath:
    return parse("M 0 0 A 1 1 0 0 0 2 0")


@pytest.fixture
def bridges_script() -> str:
    return (RESOURCES / "bridges.sp").read_text(encoding="utf-8")
