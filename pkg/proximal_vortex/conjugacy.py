"""
Proximal, descriptive and weak conjugacies between finite self-maps.

``h: X -> Y`` conjugates ``f`` on X with ``g`` on Y when ``g∘h`` and ``h∘f``
agree: pointwise (EXACT), in description (DESCRIPTIVE), up to nearness
(WEAK) or up to descriptive nearness (WEAK_DESCRIPTIVE).
"""
import itertools
import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import subsets
from .cluster import first_match
from .dynamics import FixedTag, scan_fixed_subsets
from .errors import CapExceededError, UnregisteredSpaceError
from .maps import (
    ContinuityMode,
    PointMap,
    check_continuity,
    check_isomorphism,
    is_continuous,
)
from .reports import Check, Report, Verdict, subset_witness
from .settings import DEFAULT_LIMITS, Limits
from .space import ProximitySpace, desc_intersection, set_near
from .subsets import SubsetId

log = logging.getLogger(__name__)


class ConjugacyMode(str, Enum):
    EXACT = "exact"
    DESCRIPTIVE = "descriptive"
    WEAK = "weak"
    WEAK_DESCRIPTIVE = "weak-descriptive"

    @property
    def continuity(self) -> ContinuityMode:
        if self in (ConjugacyMode.EXACT, ConjugacyMode.WEAK):
            return ContinuityMode.PROXIMAL
        return ContinuityMode.DESCRIPTIVE

    @property
    def weak(self) -> bool:
        return self in (ConjugacyMode.WEAK, ConjugacyMode.WEAK_DESCRIPTIVE)


@dataclass(frozen=True)
class ConjugacyCertificate:
    """
    ``checked_n`` is the deepest iterate count verified on every candidate:
    1 after the one-step conditions of :func:`verify_conjugacy`, 0 when a
    precondition blocked them, and ``N`` once :func:`extend_certificate`
    has carried the conditions through ``N`` iterates.
    """

    h: PointMap
    mode: ConjugacyMode
    checked_n: int
    report: Report

    @property
    def passed(self) -> bool:
        """No check failed and no precondition was missing."""
        return all(
            c.verdict in (Verdict.PASS, Verdict.COUNTEREXAMPLE) for c in self.report.checks
        )

    @property
    def verdict(self) -> Verdict:
        return self.report.verdict

    def to_dict(self) -> Dict[str, Any]:
        return {
            "h": list(self.h.table),
            "mode": self.mode.value,
            "checked_n": self.checked_n,
            "verdict": self.verdict.value,
            "report": self.report.to_dict(),
        }


def _check_systems(f: PointMap, g: PointMap, h: PointMap, mode: ConjugacyMode) -> None:
    if not f.is_self_map or not g.is_self_map:
        raise UnregisteredSpaceError("f and g must be self-maps")
    if h.domain != f.domain or h.codomain != g.domain:
        raise UnregisteredSpaceError(
            f"h must map the space of {f.name!r} to the space of {g.name!r}"
        )
    if mode.continuity is ContinuityMode.DESCRIPTIVE:
        f.domain.require_probe()
        g.domain.require_probe()


def _related(space: ProximitySpace, mode: ConjugacyMode) -> Callable[[SubsetId, SubsetId], bool]:
    """The relation the mode requires between ``g∘h(A)`` and ``h∘f(A)``."""
    if mode is ConjugacyMode.EXACT:
        return lambda a, b: a == b
    if mode is ConjugacyMode.WEAK:
        return lambda a, b: set_near(space, a, b)
    probe = space.require_probe()
    if mode is ConjugacyMode.DESCRIPTIVE:
        return lambda a, b: probe.class_mask(a) == probe.class_mask(b)
    return lambda a, b: bool(probe.class_mask(a) & probe.class_mask(b))


def _candidates(n: int, limits: Limits) -> Sequence[SubsetId]:
    return subsets.quantify(n, limits.exhaustive_cap, limits.sample_size, limits.seed)


def _first_failure(
    ok: Callable[[SubsetId], bool], candidates: Sequence[SubsetId], limits: Limits
) -> Optional[SubsetId]:
    def _chunk(lo: int, hi: int) -> Optional[SubsetId]:
        for k in range(lo, hi):
            if not ok(candidates[k]):
                return candidates[k]
        return None

    return first_match(_chunk, 0, len(candidates), partitions=limits.partitions)


def _preconditions(
    f: PointMap, g: PointMap, h: PointMap, mode: ConjugacyMode, limits: Limits
) -> List[Check]:
    iso = check_isomorphism(h, mode.continuity, limits)
    out: List[Check] = []
    if not iso.passed:
        bad = iso.failures()[0]
        out.append(
            Check(
                "isomorphism",
                Verdict.INAPPLICABLE,
                bad.witness,
                note=f"h is not a {mode.continuity.value} isomorphism ({bad.name})",
            )
        )
    for label, m in (("f", f), ("g", g)):
        if not is_continuous(m, mode.continuity):
            rep = check_continuity(m, mode.continuity, limits)
            out.append(
                Check(
                    f"{label}-continuity",
                    Verdict.INAPPLICABLE,
                    rep.failures()[0].witness if rep.failures() else None,
                    note=f"{label} is not {mode.continuity.value} continuous",
                )
            )
    return out


def verify_conjugacy(
    f: PointMap,
    g: PointMap,
    h: PointMap,
    mode: ConjugacyMode,
    limits: Limits = DEFAULT_LIMITS,
) -> ConjugacyCertificate:
    """
    Check that ``h`` conjugates ``f`` with ``g`` in ``mode``.

    Every nonempty ``A`` is checked when the ground set is within
    ``limits.exhaustive_cap``; otherwise all singletons, the full set and a
    seeded sample. EXACT mode is checked pointwise.
    """
    mode = ConjugacyMode(mode)
    _check_systems(f, g, h, mode)
    data: Dict[str, Any] = {"f": f.name, "g": g.name, "h": list(h.table), "mode": mode.value}
    blocked = _preconditions(f, g, h, mode, limits)
    if blocked:
        return ConjugacyCertificate(h, mode, 0, Report("conjugacy", tuple(blocked), data))

    X, Y = f.domain, g.domain
    inv = h.inverse()
    checks: List[Check] = []
    cands = _candidates(X.n, limits)
    data["exhaustive"] = X.n <= limits.exhaustive_cap
    data["subsets_checked"] = len(cands)

    if mode is ConjugacyMode.EXACT:
        bad_point = next(
            (a for a in range(X.n) if g.table[h.table[a]] != h.table[f.table[a]]), None
        )
        checks.append(
            Check(
                "commutes",
                Verdict.PASS if bad_point is None else Verdict.FAIL,
                None if bad_point is None else subset_witness(A=1 << bad_point),
            )
        )
    else:
        rel = _related(Y, mode)
        bad = _first_failure(lambda a: rel(g.image(h.image(a)), h.image(f.image(a))), cands, limits)
        checks.append(
            Check(
                "commutes",
                Verdict.PASS if bad is None else Verdict.FAIL,
                None if bad is None else subset_witness(A=bad),
            )
        )

    if mode is ConjugacyMode.DESCRIPTIVE:
        p1, p2 = X.require_probe(), Y.require_probe()
        bad = _first_failure(
            lambda a: p1.class_mask(f.image(a)) == p1.class_mask(inv.image(g.image(h.image(a)))),
            cands,
            limits,
        )
        checks.append(
            Check(
                "diagram-domain",
                Verdict.PASS if bad is None else Verdict.FAIL,
                None if bad is None else subset_witness(A=bad),
                note="Φ₁(f(A)) = Φ₁(h⁻¹∘g∘h(A))",
            )
        )
        bad = _first_failure(
            lambda c: p2.class_mask(g.image(c)) == p2.class_mask(h.image(f.image(inv.image(c)))),
            _candidates(Y.n, limits),
            limits,
        )
        checks.append(
            Check(
                "diagram-codomain",
                Verdict.PASS if bad is None else Verdict.FAIL,
                None if bad is None else subset_witness(C=bad),
                note="Φ₂(g(C)) = Φ₂(h∘f∘h⁻¹(C))",
            )
        )

    if mode.weak:
        back = ConjugacyMode.WEAK if mode is ConjugacyMode.WEAK else ConjugacyMode.WEAK_DESCRIPTIVE
        rel1 = _related(X, back)
        forward_ok = checks[0].verdict == Verdict.PASS
        bad = _first_failure(
            lambda c: rel1(f.image(inv.image(c)), inv.image(g.image(c))),
            _candidates(Y.n, limits),
            limits,
        )
        if bad is None:
            checks.append(Check("inverse-direction", Verdict.PASS))
        else:
            checks.append(
                Check(
                    "inverse-direction",
                    Verdict.COUNTEREXAMPLE if forward_ok else Verdict.FAIL,
                    subset_witness(C=bad),
                    note="f∘h⁻¹(C) is not near h⁻¹∘g(C)"
                    + (" although the forward condition holds" if forward_ok else ""),
                )
            )
            if forward_ok:
                log.warning("weak conjugacy %s: inverse direction fails", h.name)

    if mode is ConjugacyMode.WEAK_DESCRIPTIVE:
        example: Optional[Dict[str, Any]] = None
        empty = None
        for a in cands:
            meet = desc_intersection(Y, g.image(h.image(a)), h.image(f.image(a)))
            if not meet:
                empty = a
                break
            if example is None:
                example = {"A": subsets.to_list(a), "meet": subsets.to_list(meet)}
        checks.append(
            Check(
                "desc-intersection",
                Verdict.PASS if empty is None else Verdict.FAIL,
                example if empty is None else subset_witness(A=empty),
                note="g∘h(A) ∩_Φ h∘f(A) is nonempty",
            )
        )

    return ConjugacyCertificate(h, mode, 1, Report("conjugacy", tuple(checks), data))


def transfer_iterates(
    f: PointMap,
    g: PointMap,
    h: PointMap,
    mode: ConjugacyMode,
    N: int,
    limits: Limits = DEFAULT_LIMITS,
) -> Report:
    """
    Check ``h(fⁿ(A))`` against ``gⁿ(h(A))`` in ``mode`` for ``1 <= n <= N``.

    For EXACT and DESCRIPTIVE a failure is FAIL. The weak statements need a
    transitive nearness to carry through the induction, which Čech
    proximities lack, so a weak failure is a COUNTEREXAMPLE.
    """
    mode = ConjugacyMode(mode)
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    cert = verify_conjugacy(f, g, h, mode, limits)
    data: Dict[str, Any] = {"mode": mode.value, "checked_n": N, "h": list(h.table)}
    if not cert.passed:
        return Report(
            "transfer-iterates",
            (Check("conjugacy", Verdict.INAPPLICABLE, note="h is not a verified conjugacy"),),
            data,
        )

    rel = _related(g.domain, mode)
    cands = _candidates(f.domain.n, limits)

    def _bad(a: SubsetId) -> Optional[int]:
        left, right = a, h.image(a)
        for n in range(1, N + 1):
            left = f.image(left)
            right = g.image(right)
            if not rel(h.image(left), right):
                return n
        return None

    def _chunk(lo: int, hi: int) -> Optional[Tuple[SubsetId, int]]:
        for k in range(lo, hi):
            n = _bad(cands[k])
            if n is not None:
                return cands[k], n
        return None

    hit = first_match(_chunk, 0, len(cands), partitions=limits.partitions)
    if hit is None:
        check = Check("iterates", Verdict.PASS)
    else:
        witness = {"A": subsets.to_list(hit[0]), "n": hit[1]}
        if mode.weak:
            check = Check(
                "iterates",
                Verdict.COUNTEREXAMPLE,
                witness,
                note="nearness of one step does not compose over iterates",
            )
            log.warning("weak transfer fails at n=%d for %s", hit[1], witness["A"])
        else:
            check = Check("iterates", Verdict.FAIL, witness)
    data["subsets_checked"] = len(cands)
    return Report("transfer-iterates", (check,), data)


def extend_certificate(
    cert: ConjugacyCertificate,
    f: PointMap,
    g: PointMap,
    N: int,
    limits: Limits = DEFAULT_LIMITS,
) -> Tuple[ConjugacyCertificate, Report]:
    """
    Run :func:`transfer_iterates` to depth ``N`` for a passed certificate.

    The returned certificate has ``checked_n = N`` when every iterate up to
    ``N`` holds; otherwise it is returned unchanged with the failing report.
    """
    report = transfer_iterates(f, g, cert.h, cert.mode, N, limits)
    if report.verdict == Verdict.PASS and N > cert.checked_n:
        cert = replace(cert, checked_n=N)
    return cert, report


def transfer_fixed_subsets(
    f: PointMap, g: PointMap, h: PointMap, limits: Limits = DEFAULT_LIMITS
) -> Report:
    """
    Under a descriptive conjugacy ``h(A)`` carries the fixed-subset tag of
    ``A`` (with the same ``n`` for eventually fixed subsets), and
    ``A -> h(A)`` is a bijection between the tagged families.
    """
    cert = verify_conjugacy(f, g, h, ConjugacyMode.DESCRIPTIVE, limits)
    data: Dict[str, Any] = {"h": list(h.table)}
    if not cert.passed:
        return Report(
            "transfer-fixed-subsets",
            (
                Check(
                    "conjugacy",
                    Verdict.INAPPLICABLE,
                    note="h is not a verified descriptive conjugacy",
                ),
            ),
            data,
        )

    wanted = [FixedTag.FIXED_DESC, FixedTag.EVENTUALLY_FIXED_DESC, FixedTag.ALMOST_FIXED_DESC]
    left = dict(scan_fixed_subsets(f, wanted, limits=limits))
    right = dict(scan_fixed_subsets(g, wanted, limits=limits))

    mismatch = None
    for s, fc in left.items():
        other = right.get(h.image(s))
        if other is None or (other.tag, other.n) != (fc.tag, fc.n):
            mismatch = {
                "A": subsets.to_list(s),
                "tag": fc.label(),
                "image_tag": other.label() if other is not None else FixedTag.NONE.value,
            }
            break

    def _counts(family: Dict[SubsetId, Any]) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for fc in family.values():
            out[fc.label()] = out.get(fc.label(), 0) + 1
        return out

    counts_f, counts_g = _counts(left), _counts(right)
    bijective = {h.image(s) for s in left} == set(right) and counts_f == counts_g
    data.update(counts_f=counts_f, counts_g=counts_g)
    return Report(
        "transfer-fixed-subsets",
        (
            Check("tag-correspondence", Verdict.PASS if mismatch is None else Verdict.FAIL, mismatch),
            Check("family-bijection", Verdict.PASS if bijective else Verdict.FAIL),
        ),
        data,
    )


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------


def _pointwise(f: PointMap, g: PointMap, h: Sequence[int], mode: ConjugacyMode) -> bool:
    """Singleton form of the conjugacy condition, necessary in every mode."""
    Y = g.domain
    pairs = ((g.table[h[a]], h[f.table[a]]) for a in range(f.domain.n))
    if mode is ConjugacyMode.EXACT:
        return all(x == y for x, y in pairs)
    if mode is ConjugacyMode.WEAK:
        return all(Y.near(x, y) for x, y in pairs)
    cls = Y.require_probe().class_of
    return all(cls[x] == cls[y] for x, y in pairs)


def _size_mismatch(f: PointMap, g: PointMap) -> Optional[str]:
    if f.domain.n != g.domain.n:
        return f"ground sets differ in size ({f.domain.n} vs {g.domain.n})"
    return None


def search_conjugacy(
    f: PointMap,
    g: PointMap,
    mode: ConjugacyMode,
    limits: Limits = DEFAULT_LIMITS,
) -> Optional[ConjugacyCertificate]:
    """
    First bijection ``h`` in lexicographic order that passes
    ``verify_conjugacy``, or None.
    """
    mode = ConjugacyMode(mode)
    reason = _size_mismatch(f, g)
    if reason is not None:
        log.info("conjugacy search %s/%s: %s", f.name, g.name, reason)
        return None
    n = f.domain.n
    if n > limits.conjugacy_search_cap:
        raise CapExceededError(n, limits.conjugacy_search_cap, "conjugacy search")
    X, Y = f.domain, g.domain
    if not (is_continuous(f, mode.continuity) and is_continuous(g, mode.continuity)):
        log.info("conjugacy search %s/%s: a map is not continuous", f.name, g.name)
        return None

    def _viable(perm: Tuple[int, ...]) -> bool:
        if not _pointwise(f, g, perm, mode):
            return False
        h = PointMap(X, Y, perm, "h")
        return is_continuous(h, mode.continuity) and is_continuous(h.inverse(), mode.continuity)

    def _chunk(lo: int, hi: int) -> Optional[ConjugacyCertificate]:
        for perm in itertools.islice(itertools.permutations(range(n)), lo, hi):
            if not _viable(perm):
                continue
            cert = verify_conjugacy(f, g, PointMap(X, Y, perm, "h"), mode, limits)
            if cert.passed:
                return cert
        return None

    total = 1
    for k in range(2, n + 1):
        total *= k
    found = first_match(_chunk, 0, total, partitions=limits.partitions)
    log.info(
        "conjugacy search %s/%s (%s): %s",
        f.name,
        g.name,
        mode.value,
        "found" if found is not None else "none",
    )
    return found


def search_report(
    f: PointMap,
    g: PointMap,
    mode: ConjugacyMode,
    limits: Limits = DEFAULT_LIMITS,
) -> Report:
    """:func:`search_conjugacy` as a report; a missing conjugacy is a FAIL."""
    mode = ConjugacyMode(mode)
    reason = _size_mismatch(f, g)
    cert = None if reason is not None else search_conjugacy(f, g, mode, limits)
    data: Dict[str, Any] = {"f": f.name, "g": g.name, "mode": mode.value}
    if cert is None:
        data["result"] = "NONE"
        return Report(
            "conjugacy-search",
            (Check("search", Verdict.FAIL, note=reason or "no bijection is a conjugacy"),),
            data,
        )
    data["certificate"] = cert.to_dict()
    return Report("conjugacy-search", (Check("search", Verdict.PASS, {"h": list(cert.h.table)}),), data)
