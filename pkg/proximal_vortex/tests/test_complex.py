from typing import Dict, List, Sequence, Tuple

import pytest
from hypothesis import given, settings

from proximal_vortex.complex import (
    BAD_BRIDGE,
    DEGENERATE,
    DISCONNECTED,
    NOT_NESTED,
    NOT_SIMPLE,
    UNDECLARED_VERTEX,
    PlanarVortex,
    check_cw_conditions,
    has_hole,
    is_nested,
    vortex_to_space,
)
from proximal_vortex.errors import VortexRejected
from proximal_vortex.reports import Verdict
from proximal_vortex.space import check_cech_axioms, lifted_table
from proximal_vortex.workspace import load_workspace

from .conftest import LOCAL_RESOURCES_DIR, NESTED_TRIANGLES, concentric_vortexes, make_vortex


@pytest.mark.parametrize(
    "filename, name, vertices, rings",
    [
        ("bridged_rings.json", "bridged-rings", 20, [10, 10]),
        ("touching_rings.json", "touching-rings", 17, [10, 10]),
    ],
    ids=["separate-cycles-with-bridge", "shared-vertices"],
)
def test_reference_vortexes_are_accepted(
    filename: str, name: str, vertices: int, rings: List[int]
) -> None:
    # Act
    v = load_workspace(LOCAL_RESOURCES_DIR / filename).complex(name)

    # Assert
    assert len(v.vertices) == vertices
    assert [len(c) for c in v.cycles] == rings
    assert check_cw_conditions(v).passed


def test_cycles_are_canonical_counterclockwise() -> None:
    v = load_workspace(LOCAL_RESOURCES_DIR / "touching_rings.json").complex("touching-rings")
    assert v.cycles[0].vertex_ids == (0, 1, 2, 3, 4, 5, 6, 7, 8, 9)
    assert v.cycles[1].vertex_ids == (1, 11, 12, 13, 5, 14, 15, 16, 8, 10)
    assert v.cycles_containing(5) == [0, 1]


def test_clockwise_ring_is_reversed(nested_pentagons: PlanarVortex) -> None:
    assert nested_pentagons.cycles[0].vertex_ids == (0, 4, 3, 2, 1)
    assert nested_pentagons.cycles[0].step(0) == 4


def test_nested_triangles_near_pairs(nested_triangles: PlanarVortex) -> None:
    # Act
    space = vortex_to_space(nested_triangles)

    # Assert
    assert space.n == 6
    assert len(space.edges()) == 7
    assert space.near(0, 3)
    assert not space.near(1, 3)


def test_connectivity_witness(nested_triangles: PlanarVortex) -> None:
    assert nested_triangles.connectivity_witness(1, 4) == [1, 0, 3, 4]


def _reject(
    positions: Sequence[Tuple[int, int]],
    rings: Sequence[Sequence[int]],
    bridges: Sequence[Tuple[int, int]] = (),
) -> str:
    with pytest.raises(VortexRejected) as e:
        make_vortex(positions, rings, bridges)
    return e.value.tag


@pytest.mark.parametrize(
    "positions, rings, bridges, tag",
    [
        (NESTED_TRIANGLES, [[0, 1, 2], [3, 4, 5]], [], DISCONNECTED),
        (
            [(0, 0), (10, 0), (5, 10), (20, 20), (22, 20), (21, 22)],
            [[0, 1, 2], [3, 4, 5]],
            [(0, 3)],
            NOT_NESTED,
        ),
        (
            [(0, 0), (10, 10), (10, 0), (0, 10), (4, 4), (6, 4), (5, 6)],
            [[0, 1, 2, 3], [4, 5, 6]],
            [(0, 4)],
            NOT_SIMPLE,
        ),
        (
            [(0, 0), (5, 0), (10, 0), (4, 2), (6, 2), (5, 4)],
            [[0, 1, 2], [3, 4, 5]],
            [(0, 3)],
            DEGENERATE,
        ),
        (NESTED_TRIANGLES, [[0, 1, 2]], [], DEGENERATE),
        (NESTED_TRIANGLES, [[0, 1, 2], [3, 4, 99]], [(0, 3)], UNDECLARED_VERTEX),
        (NESTED_TRIANGLES, [[0, 1, 2], [3, 4, 5]], [(0, 1)], BAD_BRIDGE),
    ],
    ids=[
        "no-bridge",
        "outside",
        "bow-tie",
        "zero-area",
        "single-cycle",
        "undeclared",
        "bridge-on-one-cycle",
    ],
)
def test_build_vortex_rejects(
    positions: List[Tuple[int, int]],
    rings: List[List[int]],
    bridges: List[Tuple[int, int]],
    tag: str,
) -> None:
    assert _reject(positions, rings, bridges) == tag


def test_duplicate_bridge_warns_and_is_dropped() -> None:
    with pytest.warns(UserWarning):
        v = make_vortex(NESTED_TRIANGLES, [[0, 1, 2], [3, 4, 5]], [(0, 3), (3, 0)])
    assert len(v.bridges) == 1


def test_bridge_crossing_a_cycle_edge_fails_intersection_condition() -> None:
    # Arrange: the bridge from vertex 1 to vertex 3 cuts the inner edge 4-5
    positions = [(0, 0), (10, 0), (5, 10), (4, 2), (6, 1), (5, 4)]
    v = make_vortex(positions, [[0, 1, 2], [3, 4, 5]], [(1, 3)])

    # Act
    report = check_cw_conditions(v)

    # Assert
    assert report.check("closure").verdict == Verdict.PASS
    assert report.check("intersection").verdict == Verdict.FAIL
    assert not report.passed


def test_has_hole(holed_triangles: PlanarVortex, nested_triangles: PlanarVortex) -> None:
    assert has_hole(holed_triangles)
    assert not has_hole(nested_triangles)


@pytest.mark.parametrize(
    "positions, accepted",
    [
        ([(0, 0), (10, 0), (5, 10), (6, 2), (5, 5)], True),
        ([(0, 0), (10, 0), (5, 10), (-6, 2), (-5, 5)], False),
    ],
    ids=["touching-inside", "touching-outside"],
)
def test_cycles_sharing_a_vertex_must_still_nest(
    positions: List[Tuple[int, int]], accepted: bool
) -> None:
    # Arrange: both rings pass through vertex 0
    rings = [[0, 1, 2], [0, 3, 4]]

    # Act / Assert
    if accepted:
        v = make_vortex(positions, rings)
        assert v.cycles_containing(0) == [0, 1]
    else:
        assert _reject(positions, rings) == NOT_NESTED


def _position_map(v: PlanarVortex) -> Dict[int, Tuple[int, int]]:
    return {vid: v.position(vid) for vid in v.vertex_ids}


@settings(max_examples=50, deadline=None)
@given(concentric_vortexes())
def test_is_nested_is_antisymmetric(case: Tuple[PlanarVortex, List[int]]) -> None:
    # Arrange
    v, _ = case
    outer, inner = v.cycles
    positions = _position_map(v)

    # Act / Assert
    assert is_nested(outer, inner, positions)
    assert not is_nested(inner, outer, positions)
    assert not is_nested(outer, outer, positions)


@settings(max_examples=25, deadline=None)
@given(concentric_vortexes(max_length=3))
def test_vortex_spaces_satisfy_cech_axioms(case: Tuple[PlanarVortex, List[int]]) -> None:
    # Arrange
    v, _ = case
    space = vortex_to_space(v)

    # Act
    report = check_cech_axioms(lifted_table(space), space.n)

    # Assert
    assert report.passed
    assert [c.name for c in report.checks] == ["P.0", "P.1", "P.2", "P.3"]


def test_fixture_vortex_spaces_satisfy_cech_axioms(
    nested_triangles: PlanarVortex, holed_triangles: PlanarVortex
) -> None:
    for v in (nested_triangles, holed_triangles):
        space = vortex_to_space(v)
        assert check_cech_axioms(lifted_table(space), space.n).passed
