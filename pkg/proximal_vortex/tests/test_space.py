from typing import Any, List, Tuple

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proximal_vortex.errors import CapExceededError, LengthMismatchError, NoProbeError
from proximal_vortex.quantize import Quantum
from proximal_vortex.reports import Verdict
from proximal_vortex.settings import Limits
from proximal_vortex.space import (
    ProbeMap,
    ProximitySpace,
    check_cech_axioms,
    check_space_axioms,
    desc_closure,
    desc_equal,
    desc_intersection,
    desc_near,
    desc_near_implies_desc_intersection,
    descriptive_table,
    feature_image,
    induced_subspace,
    lifted_table,
    set_near,
)


@pytest.fixture
def s3() -> ProximitySpace:
    probe = ProbeMap.from_values([["0.5"], ["0.5"], ["1"]], Quantum(3))
    return ProximitySpace.from_edges(3, [(0, 1)], probe, "S3")


def test_from_edges_is_reflexive_and_symmetric(s3: ProximitySpace) -> None:
    assert s3.near(0, 0) and s3.near(2, 2)
    assert s3.near(0, 1) and s3.near(1, 0)
    assert not s3.near(0, 2)
    assert s3.edges() == [(0, 1)]


@pytest.mark.parametrize(
    "neighbors",
    [(0b10, 0b10), (0b11, 0b10), (0b111, 0b10)],
    ids=["not-reflexive", "not-symmetric", "outside"],
)
def test_space_rejects_bad_relation(neighbors: Tuple[int, int]) -> None:
    with pytest.raises(ValueError):
        ProximitySpace(2, neighbors)


def test_probe_length_must_match() -> None:
    probe = ProbeMap.from_values([[0], [1]])
    with pytest.raises(LengthMismatchError):
        ProximitySpace.discrete(3, probe)


def test_probe_dimension_must_match() -> None:
    with pytest.raises(LengthMismatchError):
        ProbeMap.from_values([[0], [1, 2]])


def test_set_near(s3: ProximitySpace) -> None:
    assert set_near(s3, 0b001, 0b010)
    assert set_near(s3, 0b100, 0b100)
    assert not set_near(s3, 0b001, 0b100)
    assert not set_near(s3, 0, 0b111)


def test_descriptive_relations(s3: ProximitySpace) -> None:
    # points 0 and 1 share a description, point 2 does not
    assert desc_near(s3, 0b001, 0b010)
    assert not desc_near(s3, 0b001, 0b100)
    assert desc_equal(s3, 0b001, 0b011)
    assert desc_intersection(s3, 0b001, 0b110) == 0b011
    assert desc_intersection(s3, 0b001, 0b100) == 0
    assert desc_closure(s3, 0b001) == 0b011
    assert desc_closure(s3, 0b100) == 0b100
    assert len(feature_image(s3, 0b111)) == 2


def test_descriptive_relations_need_a_probe() -> None:
    space = ProximitySpace.discrete(2)
    with pytest.raises(NoProbeError):
        desc_near(space, 1, 2)


def test_space_axioms_pass_for_lifted_and_descriptive(s3: ProximitySpace) -> None:
    # Act
    report = check_space_axioms(s3)

    # Assert
    assert report.passed
    assert report.verdict == Verdict.PASS
    assert [c.name for c in report.checks] == [
        "P.0",
        "P.1",
        "P.2",
        "P.3",
        "dP.0",
        "dP.1",
        "dP.2",
        "dP.3",
    ]
    assert report.data["relation"] == "lifted"


def test_axiom_checker_reports_first_witness() -> None:
    # Arrange
    space = ProximitySpace.discrete(2)
    table = lifted_table(space).copy()
    table[0b01, 0b10] = True

    # Act
    report = check_cech_axioms(table, 2)

    # Assert
    assert report.check("P.1").verdict == Verdict.FAIL
    assert report.check("P.1").witness == {"A": [0], "B": [1]}
    assert report.check("P.0").verdict == Verdict.PASS
    assert not report.passed


def test_axiom_checker_catches_empty_set_nearness() -> None:
    table = np.ones((2, 2), dtype=bool)
    report = check_cech_axioms(table, 1)
    assert report.check("P.0").verdict == Verdict.FAIL
    assert report.check("P.0").witness == {"A": [], "B": []}


def test_axiom_checker_rejects_wrong_shape() -> None:
    with pytest.raises(LengthMismatchError):
        check_cech_axioms(np.zeros((3, 3), dtype=bool), 2)


def test_tables_refuse_above_cap() -> None:
    space = ProximitySpace.discrete(5)
    with pytest.raises(CapExceededError):
        lifted_table(space, Limits(exhaustive_cap=4))


def test_induced_subspace(s3: ProximitySpace) -> None:
    # Act
    sub = induced_subspace(s3, 0b110)

    # Assert
    assert sub.n == 2
    assert sub.edges() == []
    assert sub.probe is not None
    assert [fv.components for fv in sub.probe.features] == [(500,), (1000,)]


def test_probe_relabel_moves_features() -> None:
    probe = ProbeMap.from_values([[1], [2], [3]])
    moved = probe.relabel([2, 0, 1])
    assert [fv.components[0] for fv in moved.features] == [2_000_000, 3_000_000, 1_000_000]


@st.composite
def spaces(draw: Any) -> ProximitySpace:
    n = draw(st.integers(min_value=1, max_value=6))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    edges: List[Tuple[int, int]] = []
    if pairs:
        edges = draw(st.lists(st.sampled_from(pairs), unique=True))
    labels = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    probe = ProbeMap.from_values([[x] for x in labels])
    return ProximitySpace.from_edges(n, edges, probe)


@settings(max_examples=200, deadline=None)
@given(spaces())
def test_lifted_and_descriptive_relations_satisfy_axioms(space: ProximitySpace) -> None:
    assert check_space_axioms(space).passed


@st.composite
def five_point_spaces(draw: Any) -> ProximitySpace:
    pairs = [(a, b) for a in range(5) for b in range(a + 1, 5)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True))
    labels = draw(st.lists(st.integers(0, 3), min_size=5, max_size=5))
    return ProximitySpace.from_edges(5, edges, ProbeMap.from_values([[x] for x in labels]))


@settings(max_examples=100, deadline=None)
@given(five_point_spaces())
def test_descriptive_nearness_gives_descriptive_intersection(space: ProximitySpace) -> None:
    # Act / Assert: every pair of subsets of the five points
    for a in range(32):
        for b in range(32):
            assert desc_near_implies_desc_intersection(space, a, b)
            assert desc_near(space, a, b) == bool(desc_intersection(space, a, b))


@settings(max_examples=40, deadline=None)
@given(spaces())
def test_descriptive_table_matches_pairwise_relation(space: ProximitySpace) -> None:
    table = descriptive_table(space)
    for a in range(1 << space.n):
        for b in range(1 << space.n):
            assert table[a, b] == desc_near(space, a, b)


@settings(max_examples=100, deadline=None)
@given(spaces(), st.integers(0, 63))
def test_descriptive_closure_is_extensive_and_idempotent(
    space: ProximitySpace, subset: int
) -> None:
    # Arrange
    a = subset & space.full

    # Act
    closed = desc_closure(space, a)

    # Assert
    assert a & ~closed == 0
    assert desc_closure(space, closed) == closed
    assert desc_equal(space, a, closed)
