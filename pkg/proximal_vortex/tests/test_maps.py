from typing import Any, List

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proximal_vortex.dynamics import iterate, orbit, sink_contraction
from proximal_vortex.errors import NoProbeError, UnregisteredSpaceError
from proximal_vortex.maps import (
    ContinuityMode,
    PointMap,
    check_continuity,
    check_descriptive_continuity,
    check_isomorphism,
    check_proximal_continuity,
    compose,
    find_invariant_subsets,
    invariance_closure_properties,
    is_continuous,
    is_desc_invariant,
    restrict,
)
from proximal_vortex.reports import Verdict
from proximal_vortex.space import ProbeMap, ProximitySpace, desc_equal
from proximal_vortex.workspace import Workspace, load_workspace

from .conftest import LOCAL_RESOURCES_DIR, NESTED_PENTAGONS, make_vortex


@pytest.fixture
def small() -> Workspace:
    return load_workspace(LOCAL_RESOURCES_DIR / "small.json")


def test_point_map_validation() -> None:
    space = ProximitySpace.discrete(3)
    with pytest.raises(UnregisteredSpaceError):
        PointMap.self_map(space, [0, 1])
    with pytest.raises(UnregisteredSpaceError):
        PointMap.self_map(space, [0, 1, 3])


def test_image_inverse_and_compose() -> None:
    # Arrange
    space = ProximitySpace.discrete(3)
    f = PointMap.self_map(space, [1, 2, 0], "f")

    # Act
    inv = f.inverse()
    loop = compose(inv, f)

    # Assert
    assert f.image(0b011) == 0b110
    assert inv.table == (2, 0, 1)
    assert loop.table == (0, 1, 2)
    assert f.is_bijective()
    assert not PointMap.self_map(space, [0, 0, 1]).is_bijective()


@pytest.mark.parametrize(
    "map_name, mode, passed",
    [
        ("id3", ContinuityMode.PROXIMAL, True),
        ("id3", ContinuityMode.DESCRIPTIVE, True),
        ("tear", ContinuityMode.PROXIMAL, False),
        ("tear", ContinuityMode.DESCRIPTIVE, False),
        ("rot5", ContinuityMode.PROXIMAL, True),
        ("rot5", ContinuityMode.DESCRIPTIVE, False),
    ],
)
def test_continuity_point_level_agrees_with_oracle(
    small: Workspace, map_name: str, mode: ContinuityMode, passed: bool
) -> None:
    # Arrange
    f = small.map(map_name)

    # Act
    report = check_continuity(f, mode)

    # Assert
    assert report.passed is passed
    assert is_continuous(f, mode) is passed
    names = [c.name for c in report.checks]
    assert names == ["point-level", "subset-oracle"]
    assert report.check("point-level").verdict == report.check("subset-oracle").verdict


def test_tear_witness(small: Workspace) -> None:
    report = check_proximal_continuity(small.map("tear"))
    assert report.subject == "proximal-continuity"
    assert report.check("point-level").witness == {"a": 0, "b": 1}
    assert report.data["relation"] == "lifted"


def test_oracle_skipped_above_cap() -> None:
    space = ProximitySpace.from_edges(12, [(i, i + 1) for i in range(11)])
    f = PointMap.identity(space)
    report = check_proximal_continuity(f)
    assert report.check("subset-oracle").verdict == Verdict.INAPPLICABLE
    assert report.passed


def test_descriptive_continuity_needs_probes() -> None:
    space = ProximitySpace.discrete(2)
    with pytest.raises(NoProbeError):
        check_descriptive_continuity(PointMap.identity(space))


def test_isomorphism_of_non_bijection() -> None:
    # Arrange
    space = ProximitySpace.discrete(3)
    f = PointMap.self_map(space, [0, 0, 2], "collapse")

    # Act
    report = check_isomorphism(f, ContinuityMode.PROXIMAL)

    # Assert
    assert report.verdict == Verdict.NOT_BIJECTIVE
    assert report.check("bijective").witness == {"collision": [0, 1], "image": 0}
    assert not report.passed


def test_isomorphism_checks_inverse(small: Workspace) -> None:
    report = check_isomorphism(small.map("rot5"), ContinuityMode.PROXIMAL)
    assert report.passed
    assert report.check("inverse/point-level").verdict == Verdict.PASS


def test_discontinuous_inverse_is_reported() -> None:
    # Arrange: a bijection from a discrete space onto a path is continuous,
    # its inverse is not
    discrete = ProximitySpace.discrete(2)
    path = ProximitySpace.from_edges(2, [(0, 1)])
    h = PointMap(discrete, path, (0, 1), "h")

    # Act
    report = check_isomorphism(h, ContinuityMode.PROXIMAL)

    # Assert
    assert report.check("forward/point-level").verdict == Verdict.PASS
    assert report.check("inverse/point-level").verdict == Verdict.FAIL
    assert report.verdict == Verdict.FAIL


def test_restrict_to_invariant_subset() -> None:
    # Arrange
    space = ProximitySpace.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    f = PointMap.self_map(space, [1, 0, 1, 2], "f")

    # Act
    g = restrict(f, 0b0011)

    # Assert
    assert g.domain.n == 2
    assert g.table == (1, 0)
    assert g.domain.edges() == [(0, 1)]
    with pytest.raises(ValueError):
        restrict(f, 0b1000)


@pytest.fixture
def shared_class() -> PointMap:
    probe = ProbeMap.from_values([[0], [0], [1]])
    space = ProximitySpace.discrete(3, probe)
    return PointMap.self_map(space, [0, 0, 0], "to-zero")


@pytest.fixture
def injective_class() -> PointMap:
    probe = ProbeMap.from_values([[0], [1], [2]])
    space = ProximitySpace.discrete(3, probe)
    return PointMap.self_map(space, [0, 0, 0], "to-zero")


def test_find_invariant_subsets(injective_class: PointMap) -> None:
    # invariant iff empty or containing the sink point 0
    assert find_invariant_subsets(injective_class) == [0b000, 0b001, 0b011, 0b101, 0b111]
    assert is_desc_invariant(injective_class, 0b001)
    assert not is_desc_invariant(injective_class, 0b110)


def test_intersection_of_invariant_sets_is_a_counterexample(shared_class: PointMap) -> None:
    # Arrange
    family = [0b101, 0b110]

    # Act
    report = invariance_closure_properties(shared_class, family)

    # Assert
    assert report.check("union").verdict == Verdict.PASS
    assert report.check("intersection").verdict == Verdict.COUNTEREXAMPLE
    assert report.check("intersection").witness == {"intersection": [2]}
    assert report.check("closure").verdict == Verdict.PASS
    assert report.verdict == Verdict.COUNTEREXAMPLE
    assert report.passed


def test_closure_property_needs_descriptive_continuity() -> None:
    # Arrange
    probe = ProbeMap.from_values([[0], [0], [1]])
    space = ProximitySpace.discrete(3, probe)
    f = PointMap.self_map(space, [0, 2, 2], "split")

    # Act
    report = invariance_closure_properties(f, [0b111])

    # Assert
    assert report.check("closure").verdict == Verdict.INAPPLICABLE
    assert report.check("union").verdict == Verdict.PASS


def test_family_member_must_be_invariant(injective_class: PointMap) -> None:
    report = invariance_closure_properties(injective_class, [0b110])
    assert report.verdict == Verdict.INAPPLICABLE
    assert report.check("family").witness == {"A": [1, 2]}


@st.composite
def probed_self_maps(draw: Any) -> PointMap:
    n = draw(st.integers(min_value=1, max_value=6))
    labels = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    table = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    space = ProximitySpace.discrete(n, ProbeMap.from_values([[x] for x in labels]))
    return PointMap.self_map(space, table, "f")


@settings(max_examples=100, deadline=None)
@given(probed_self_maps())
def test_invariant_families_are_closed(f: PointMap) -> None:
    # Arrange
    family = [s for s in find_invariant_subsets(f) if s]
    injective = len(set(f.domain.require_probe().class_of)) == f.domain.n

    # Act
    report = invariance_closure_properties(f, family)

    # Assert
    assert report.passed
    assert report.check("union").verdict == Verdict.PASS
    if injective:
        assert report.check("intersection").verdict == Verdict.PASS


PENTAGONS = make_vortex(
    NESTED_PENTAGONS,
    [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9]],
    [(i, i + 5) for i in range(5)],
    name="pent",
)
ROTATE_PENTAGONS = [(i + 1) % 5 for i in range(5)] + [5 + (i + 1) % 5 for i in range(5)]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 9), st.integers(0, 9), st.booleans())
def test_composite_of_proximally_continuous_maps_is_continuous(
    first: int, second: int, rotate: bool
) -> None:
    # Arrange
    f = sink_contraction(PENTAGONS, first)
    g = (
        PointMap.self_map(f.domain, ROTATE_PENTAGONS, "rotate")
        if rotate
        else sink_contraction(PENTAGONS, second, f.domain)
    )

    # Act
    gf = compose(g, f)

    # Assert
    assert is_continuous(f, ContinuityMode.PROXIMAL)
    assert is_continuous(g, ContinuityMode.PROXIMAL)
    assert is_continuous(gf, ContinuityMode.PROXIMAL)


@st.composite
def class_constant_maps(draw: Any, count: int) -> List[PointMap]:
    """Self-maps sending each feature class to one point, on a shared space."""
    n = draw(st.integers(min_value=1, max_value=6))
    labels = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    space = ProximitySpace.discrete(n, ProbeMap.from_values([[x] for x in labels]))
    maps = []
    for k in range(count):
        targets = {x: draw(st.integers(0, n - 1)) for x in sorted(set(labels))}
        maps.append(PointMap.self_map(space, [targets[x] for x in labels], f"f{k}"))
    return maps


@settings(max_examples=100, deadline=None)
@given(class_constant_maps(count=2))
def test_composite_of_descriptively_continuous_maps_is_continuous(
    maps: List[PointMap],
) -> None:
    f, g = maps
    assert is_continuous(f, ContinuityMode.DESCRIPTIVE)
    assert is_continuous(g, ContinuityMode.DESCRIPTIVE)
    assert is_continuous(compose(g, f), ContinuityMode.DESCRIPTIVE)


@settings(max_examples=100, deadline=None)
@given(class_constant_maps(count=1))
def test_invariant_subsets_keep_their_descriptions_under_iteration(
    maps: List[PointMap],
) -> None:
    # Arrange
    (f,) = maps
    probe = f.domain.require_probe()

    for a in find_invariant_subsets(f):
        # Act
        record = orbit(f, a)

        # Assert
        for n in range(1, record.preperiod + record.period + 1):
            image = probe.class_mask(iterate(f, a, n))
            assert image & ~probe.class_mask(a) == 0


@st.composite
def relabelings(draw: Any) -> PointMap:
    """A bijection onto the same points relabeled, features carried along."""
    n = draw(st.integers(min_value=1, max_value=5))
    labels = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    perm = draw(st.permutations(range(n)))
    probe = ProbeMap.from_values([[x] for x in labels])
    X = ProximitySpace.discrete(n, probe)
    Y = ProximitySpace.discrete(n, probe.relabel(perm))
    return PointMap(X, Y, tuple(perm), "h")


@settings(max_examples=50, deadline=None)
@given(relabelings())
def test_descriptive_isomorphism_preserves_descriptive_equality(h: PointMap) -> None:
    # Arrange
    X, Y = h.domain, h.codomain
    everything = range(1 << X.n)

    # Act
    iso = check_isomorphism(h, ContinuityMode.DESCRIPTIVE)

    # Assert
    assert iso.passed
    for a in everything:
        for b in everything:
            assert desc_equal(X, a, b) == desc_equal(Y, h.image(a), h.image(b))
