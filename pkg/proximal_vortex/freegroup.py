"""
Group representation of a vortex and invariant-mean checks on finite groups.

A vortex group is generated by basis vertices; each generator is a one-edge
step along its home cycle (in canonical counterclockwise order). Words are
integer coefficient vectors over the basis and act on per-cycle cursors that
start at a base vertex; two words are the same element iff they put every
cursor on the same vertex. The result is a product of cyclic groups, one
factor per home cycle, found by orbit closure.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .complex import PlanarVortex
from .errors import GroupTableError, LengthMismatchError
from .reports import Check, Report, Verdict
from .settings import DEFAULT_LIMITS, Limits

log = logging.getLogger(__name__)

Real = Union[Fraction, float, int]


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupWord:
    """``Σ k_j g_j`` stored as the coefficient vector ``(k_1, ..., k_|B|)``."""

    coeffs: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "GroupWord") -> "GroupWord":
        return word_add(self, other)

    def __neg__(self) -> "GroupWord":
        return word_neg(self)

    def __sub__(self, other: "GroupWord") -> "GroupWord":
        return word_add(self, word_neg(other))


def word_zero(n: int) -> GroupWord:
    return GroupWord((0,) * n)


def word_add(a: GroupWord, b: GroupWord) -> GroupWord:
    if len(a) != len(b):
        raise LengthMismatchError(f"words over bases of size {len(a)} and {len(b)}")
    return GroupWord(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def word_neg(a: GroupWord) -> GroupWord:
    return GroupWord(tuple(-x for x in a.coeffs))


def generator(j: int, n: int, k: int = 1) -> GroupWord:
    """The word ``k g_j`` over a basis of size ``n``."""
    coeffs = [0] * n
    coeffs[j] = k
    return GroupWord(tuple(coeffs))


# ---------------------------------------------------------------------------
# Finite group tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteGroupTable:
    """
    A validated Cayley table on elements ``0..m-1``;
    ``op[a][b]`` is the product ``ab``.
    """

    op: Tuple[Tuple[int, ...], ...]
    identity: int = field(init=False)
    inverse: Tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        table = np.asarray(self.op, dtype=np.int64)
        m = len(self.op)
        if m == 0 or table.shape != (m, m):
            raise GroupTableError(f"Cayley table must be square and nonempty, got {table.shape}")
        if table.min() < 0 or table.max() >= m:
            raise GroupTableError("closure fails: entries outside 0..m-1")
        # (ab)c == a(bc) for all triples
        left = table[table, :]
        right = table[:, table]
        bad = np.argwhere(left != right)
        if bad.size:
            a, b, c = (int(x) for x in bad[0])
            raise GroupTableError(f"associativity fails at ({a}, {b}, {c})")
        ident = [
            e
            for e in range(m)
            if np.array_equal(table[e], np.arange(m)) and np.array_equal(table[:, e], np.arange(m))
        ]
        if not ident:
            raise GroupTableError("no identity element")
        e = ident[0]
        inverse = []
        for a in range(m):
            hits = np.flatnonzero((table[a] == e) & (table[:, a] == e))
            if hits.size == 0:
                raise GroupTableError(f"element {a} has no inverse")
            inverse.append(int(hits[0]))
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverse", tuple(inverse))

    @property
    def order(self) -> int:
        return len(self.op)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.op, dtype=np.int64)

    def is_abelian(self) -> bool:
        t = self.as_array()
        return bool(np.array_equal(t, t.T))

    def mul(self, a: int, b: int) -> int:
        return self.op[a][b]


def cyclic_group(m: int) -> FiniteGroupTable:
    return FiniteGroupTable(tuple(tuple((a + b) % m for b in range(m)) for a in range(m)))


def direct_product(g: FiniteGroupTable, h: FiniteGroupTable) -> FiniteGroupTable:
    """Elements ``(a, b)`` numbered ``a * |h| + b``."""
    mh = h.order
    return FiniteGroupTable(
        tuple(
            tuple(
                g.op[x // mh][y // mh] * mh + h.op[x % mh][y % mh]
                for y in range(g.order * mh)
            )
            for x in range(g.order * mh)
        )
    )


def export_cayley_table(g: FiniteGroupTable) -> str:
    """``m`` lines of ``m`` space-separated element indices."""
    return "\n".join(" ".join(str(x) for x in row) for row in g.op) + "\n"


def parse_cayley_table(text: str) -> FiniteGroupTable:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    return FiniteGroupTable(tuple(tuple(int(x) for x in row) for row in rows))


# ---------------------------------------------------------------------------
# Vortex groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorBasis:
    """
    Basis vertices ``g_1..g_|B|``. ``homes`` optionally fixes the cycle index
    each generator steps along; by default it is the outermost cycle that
    contains the vertex.
    """

    generators: Tuple[int, ...]
    homes: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("a generator basis must be nonempty")
        if len(set(self.generators)) != len(self.generators):
            raise ValueError(f"duplicate generators in {list(self.generators)}")
        if self.homes is not None and len(self.homes) != len(self.generators):
            raise LengthMismatchError("homes must list one cycle per generator")

    def __len__(self) -> int:
        return len(self.generators)


@dataclass(frozen=True)
class VortexGroup(FiniteGroupTable):
    """
    The finite abelian group of a vortex basis.

    ``elements[i]`` is the tuple of cursor offsets (one per home cycle,
    modulo the cycle length) of element ``i``; element 0 is the zero move.
    """

    elements: Tuple[Tuple[int, ...], ...] = ()
    moduli: Tuple[int, ...] = ()
    home_cycles: Tuple[int, ...] = ()
    base_vertices: Tuple[int, ...] = ()
    generator_homes: Tuple[int, ...] = ()
    vortex: Optional[PlanarVortex] = field(default=None, compare=False, repr=False)

    def element_of(self, word: GroupWord) -> int:
        if len(word) != len(self.generator_homes):
            raise LengthMismatchError(
                f"word of length {len(word)} over a basis of size {len(self.generator_homes)}"
            )
        offsets = [0] * len(self.home_cycles)
        for k, slot in zip(word.coeffs, self.generator_homes):
            offsets[slot] = (offsets[slot] + k) % self.moduli[slot]
        return self.elements.index(tuple(offsets))

    def evaluate_word(self, word: GroupWord) -> Tuple[int, ...]:
        """Cursor vertices reached from the base vertices by ``word``."""
        return self.step_from(self.base_vertices, word)

    def step_from(self, cursors: Sequence[int], word: GroupWord) -> Tuple[int, ...]:
        """Apply the edge-steps of ``word`` to explicit cursor vertices."""
        if self.vortex is None:
            raise ValueError("group carries no vortex to walk on")
        if len(word) != len(self.generator_homes):
            raise LengthMismatchError("word length does not match the basis")
        steps = [0] * len(self.home_cycles)
        for k, slot in zip(word.coeffs, self.generator_homes):
            steps[slot] += k
        return tuple(
            self.vortex.cycles[c].step(cur, s)
            for c, cur, s in zip(self.home_cycles, cursors, steps)
        )


def vortex_group(v: PlanarVortex, basis: GeneratorBasis) -> VortexGroup:
    """
    Orbit closure of the basis moves, breadth first from the zero move.

    Raises
    ------
    ValueError
        If a basis vertex is not on any cycle (or not on its declared home).
    """
    declared = set(v.vertex_ids)
    homes: List[int] = []
    for j, g in enumerate(basis.generators):
        if g not in declared:
            raise ValueError(f"generator {g} is not a vertex of the vortex")
        on = v.cycles_containing(g)
        if not on:
            raise ValueError(f"generator {g} is not on any cycle")
        if basis.homes is not None:
            if basis.homes[j] not in on:
                raise ValueError(f"generator {g} is not on cycle {basis.homes[j]}")
            homes.append(basis.homes[j])
        else:
            homes.append(on[0])

    home_cycles = tuple(sorted(set(homes)))
    slot_of = {c: k for k, c in enumerate(home_cycles)}
    generator_homes = tuple(slot_of[c] for c in homes)
    moduli = tuple(len(v.cycles[c]) for c in home_cycles)
    base = tuple(
        basis.generators[homes.index(c)] for c in home_cycles
    )

    moves: List[Tuple[int, ...]] = []
    for slot in generator_homes:
        for sign in (1, -1):
            mv = [0] * len(home_cycles)
            mv[slot] = sign
            moves.append(tuple(mv))

    zero = (0,) * len(home_cycles)
    index: Dict[Tuple[int, ...], int] = {zero: 0}
    order = [zero]
    queue = deque([zero])
    while queue:
        cur = queue.popleft()
        for mv in moves:
            nxt = tuple((c + d) % m for c, d, m in zip(cur, mv, moduli))
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)

    op = tuple(
        tuple(
            index[tuple((x + y) % m for x, y, m in zip(a, b, moduli))] for b in order
        )
        for a in order
    )
    log.info(
        "vortex group of %s: order %d over cycles %s",
        v.name or "<anonymous>",
        len(order),
        list(home_cycles),
    )
    return VortexGroup(
        op,
        elements=tuple(order),
        moduli=moduli,
        home_cycles=home_cycles,
        base_vertices=base,
        generator_homes=generator_homes,
        vortex=v,
    )


# ---------------------------------------------------------------------------
# Means
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundedFunction:
    """A function ``θ`` on the group elements, ``values[x] = θ(x)``."""

    values: Tuple[Real, ...]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def norm(self) -> Real:
        return max(abs(x) for x in self.values)

    @property
    def glb(self) -> Real:
        return min(self.values)

    @property
    def lub(self) -> Real:
        return max(self.values)


def _check_length(g: FiniteGroupTable, theta: BoundedFunction) -> None:
    if len(theta) != g.order:
        raise LengthMismatchError(
            f"function has {len(theta)} values, group has order {g.order}"
        )


def _weights(g: FiniteGroupTable, weights: Optional[Sequence[Real]], exact: bool) -> List[Real]:
    if weights is None:
        return [Fraction(1, g.order) if exact else 1.0 / g.order] * g.order
    if len(weights) != g.order:
        raise LengthMismatchError("one weight per group element is required")
    total = sum(Fraction(w) if exact else float(w) for w in weights)
    return [(Fraction(w) if exact else float(w)) / total for w in weights]


def _mean(values: Sequence[Real], weights: Sequence[Real], exact: bool) -> Real:
    if exact:
        if len(set(weights)) == 1:
            total = sum((x if isinstance(x, int) else Fraction(x) for x in values), Fraction(0))
            return Fraction(weights[0]) * total
        return sum((Fraction(w) * Fraction(x) for w, x in zip(weights, values)), Fraction(0))
    return float(np.dot(np.asarray(weights, dtype=float), np.asarray(values, dtype=float)))


def uniform_mean(g: FiniteGroupTable, theta: BoundedFunction, *, exact: bool = True) -> Real:
    """``(1/m) Σ_x θ(x)``; exact rational unless ``exact=False``."""
    _check_length(g, theta)
    return _mean(theta.values, _weights(g, None, exact), exact)


def left_translate(g: FiniteGroupTable, theta: BoundedFunction, sigma: int) -> BoundedFunction:
    """``(ℓ_σ θ)(x) = θ(σx)``."""
    return BoundedFunction(tuple(theta.values[g.op[sigma][x]] for x in range(g.order)))


def right_translate(g: FiniteGroupTable, theta: BoundedFunction, sigma: int) -> BoundedFunction:
    """``(r_σ θ)(x) = θ(xσ)``."""
    return BoundedFunction(tuple(theta.values[g.op[x][sigma]] for x in range(g.order)))


def check_invariance(
    g: FiniteGroupTable,
    theta: BoundedFunction,
    *,
    weights: Optional[Sequence[Real]] = None,
    exact: bool = True,
    limits: Limits = DEFAULT_LIMITS,
) -> Report:
    """
    Left and right invariance of a mean (uniform unless ``weights`` given)
    on ``θ``, for every ``σ``. Exact in rational mode; within
    ``limits.float_tolerance`` otherwise.
    """
    _check_length(g, theta)
    w = _weights(g, weights, exact)
    base = _mean(theta.values, w, exact)

    def same(x: Real) -> bool:
        if exact:
            return x == base
        return abs(float(x) - float(base)) <= limits.float_tolerance

    left_bad: List[int] = []
    right_bad: List[int] = []
    for sigma in range(g.order):
        if not same(_mean(left_translate(g, theta, sigma).values, w, exact)):
            left_bad.append(sigma)
        if not same(_mean(right_translate(g, theta, sigma).values, w, exact)):
            right_bad.append(sigma)

    checks = (
        Check(
            "left-invariance",
            Verdict.FAIL if left_bad else Verdict.PASS,
            {"sigma": left_bad} if left_bad else None,
        ),
        Check(
            "right-invariance",
            Verdict.FAIL if right_bad else Verdict.PASS,
            {"sigma": right_bad} if right_bad else None,
        ),
    )
    bounded = theta.glb <= base <= theta.lub
    return Report(
        "invariance",
        checks
        + (Check("glb<=mean<=lub", Verdict.PASS if bounded else Verdict.FAIL),),
        {"mean": str(base), "order": g.order, "exact": exact},
    )


def indicator_basis(g: FiniteGroupTable) -> List[BoundedFunction]:
    return [
        BoundedFunction(tuple(1 if y == x else 0 for y in range(g.order)))
        for x in range(g.order)
    ]


def random_functions(
    g: FiniteGroupTable, count: int, seed: int, *, low: int = -100, high: int = 100
) -> List[BoundedFunction]:
    """Pseudo-random integer-valued functions from a seeded numpy generator."""
    rng = np.random.default_rng(seed)
    draws = rng.integers(low, high, size=(count, g.order), endpoint=True)
    return [BoundedFunction(tuple(int(x) for x in row)) for row in draws]


def is_amenable_witness(
    g: FiniteGroupTable,
    sample: Optional[Sequence[BoundedFunction]] = None,
    *,
    exact: bool = True,
    limits: Limits = DEFAULT_LIMITS,
) -> Tuple[bool, Dict[str, Any]]:
    """
    Exhibit the uniform mean as a two-sided invariant mean.

    Invariance is checked on the full indicator basis (which spans every
    bounded function, and a mean is linear) plus ``sample``; by default
    ``limits.random_functions`` seeded integer functions.
    """
    if sample is None:
        sample = random_functions(g, limits.random_functions, limits.seed)
    functions = indicator_basis(g) + list(sample)
    failing: List[int] = []
    for k, theta in enumerate(functions):
        if not check_invariance(g, theta, exact=exact, limits=limits).passed:
            failing.append(k)
    ok = not failing
    description: Dict[str, Any] = {
        "mean": "uniform",
        "weight": str(Fraction(1, g.order)) if exact else 1.0 / g.order,
        "order": g.order,
        "abelian": g.is_abelian(),
        "checked_functions": len(functions),
        "indicator_basis": g.order,
        "seed": limits.seed,
        "spanning_argument": (
            "the indicators 1_x span all functions on a finite group and a mean "
            "is linear, so invariance on the basis gives invariance everywhere"
        ),
    }
    if failing:
        description["failing_functions"] = failing
    return ok, description
