import math
import pathlib
from typing import Any, List, Sequence, Tuple

import pytest
from hypothesis import strategies as st

from proximal_vortex.complex import BridgeEdge, Cycle, PlanarVortex, Vertex, build_vortex
from proximal_vortex.quantize import Quantum

LOCAL_RESOURCES_DIR = pathlib.Path(__file__).parent / "resources"

UNIT = Quantum(0)


def make_vortex(
    positions: Sequence[Tuple[int, int]],
    rings: Sequence[Sequence[int]],
    bridges: Sequence[Tuple[int, int]] = (),
    *,
    filled: Sequence[bool] = (),
    name: str = "v",
) -> PlanarVortex:
    """Build a vortex on the unit grid; vertex ids are list positions."""
    vertices = [Vertex(i, p) for i, p in enumerate(positions)]
    cycles = [
        Cycle(tuple(r), filled[k] if k < len(filled) else True) for k, r in enumerate(rings)
    ]
    return build_vortex(
        vertices, cycles, [BridgeEdge(a, b) for a, b in bridges], quantum=UNIT, name=name
    )


NESTED_TRIANGLES = [(0, 0), (10, 0), (5, 10), (4, 2), (6, 2), (5, 4)]

NESTED_PENTAGONS = [
    (0, 10),
    (10, 3),
    (6, -8),
    (-6, -8),
    (-10, 3),
    (0, 5),
    (5, 1),
    (3, -4),
    (-3, -4),
    (-5, 1),
]


@pytest.fixture
def nested_triangles() -> PlanarVortex:
    return make_vortex(NESTED_TRIANGLES, [[0, 1, 2], [3, 4, 5]], [(0, 3)], name="tri")


@pytest.fixture
def holed_triangles() -> PlanarVortex:
    return make_vortex(
        NESTED_TRIANGLES,
        [[0, 1, 2], [3, 4, 5]],
        [(0, 3)],
        filled=[True, False],
        name="holed",
    )


@pytest.fixture
def nested_pentagons() -> PlanarVortex:
    return make_vortex(
        NESTED_PENTAGONS,
        [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9]],
        [(i, i + 5) for i in range(5)],
        name="pent",
    )


RING_RADII = (10000, 4000)


def regular_ring(length: int, radius: int, start: float) -> List[Tuple[int, int]]:
    """Vertices of a regular polygon about the origin, rounded to the grid."""
    out = []
    for k in range(length):
        angle = start + 2 * math.pi * k / length
        out.append((round(radius * math.cos(angle)), round(radius * math.sin(angle))))
    return out


@st.composite
def concentric_vortexes(draw: Any, max_length: int = 8) -> Tuple[PlanarVortex, List[int]]:
    """Two concentric rounded regular rings, radially bridged at vertex 0."""
    lengths = draw(st.lists(st.integers(3, max_length), min_size=2, max_size=2))
    start = math.radians(draw(st.integers(0, 359)))
    positions: List[Tuple[int, int]] = []
    rings: List[List[int]] = []
    for length, radius in zip(lengths, RING_RADII):
        rings.append(list(range(len(positions), len(positions) + length)))
        positions.extend(regular_ring(length, radius, start))
    v = make_vortex(positions, rings, [(rings[0][0], rings[1][0])], name="concentric")
    return v, lengths
