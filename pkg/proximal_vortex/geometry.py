"""
Exact planar predicates on integer grid coordinates.

Coordinates are quantized numerators (see :mod:`proximal_vortex.quantize`),
so every predicate here is exact integer arithmetic.
"""
from enum import Enum
from typing import List, Optional, Sequence, Tuple

Point2 = Tuple[int, int]


class Location(str, Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def cross(o: Point2, a: Point2, b: Point2) -> int:
    """Twice the signed area of triangle ``o a b``."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def on_segment(p: Point2, a: Point2, b: Point2) -> bool:
    """True iff ``p`` lies on the closed segment ``ab``."""
    return (
        cross(a, b, p) == 0
        and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool:
    """Closed segments ``ab`` and ``cd`` share at least one point."""
    d1 = _sign(cross(c, d, a))
    d2 = _sign(cross(c, d, b))
    d3 = _sign(cross(a, b, c))
    d4 = _sign(cross(a, b, d))
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return (
        (d1 == 0 and on_segment(a, c, d))
        or (d2 == 0 and on_segment(b, c, d))
        or (d3 == 0 and on_segment(c, a, b))
        or (d4 == 0 and on_segment(d, a, b))
    )


def meet_only_at_shared_endpoint(
    a: Point2, b: Point2, c: Point2, d: Point2
) -> bool:
    """
    True iff segments ``ab`` and ``cd`` are disjoint, or their only common
    point is an endpoint they share (a common sub-cell).
    """
    if not segments_intersect(a, b, c, d):
        return True
    shared = {a, b} & {c, d}
    if len(shared) != 1:
        # identical segments are the same cell, not two cells
        return {a, b} == {c, d}
    (s,) = shared
    other_ab = b if a == s else a
    other_cd = d if c == s else c
    # collinear and overlapping beyond the shared endpoint
    if cross(s, other_ab, other_cd) == 0:
        return not (
            on_segment(other_ab, s, other_cd) or on_segment(other_cd, s, other_ab)
        )
    return True


def signed_area2(polygon: Sequence[Point2]) -> int:
    """Twice the signed shoelace area; positive for counterclockwise rings."""
    total = 0
    m = len(polygon)
    for i in range(m):
        x1, y1 = polygon[i]
        x2, y2 = polygon[(i + 1) % m]
        total += x1 * y2 - x2 * y1
    return total


def locate(point: Point2, polygon: Sequence[Point2]) -> Location:
    """Winding-number point-in-polygon test; boundary points are reported as such."""
    winding = 0
    m = len(polygon)
    for i in range(m):
        a = polygon[i]
        b = polygon[(i + 1) % m]
        if on_segment(point, a, b):
            return Location.BOUNDARY
        if a[1] <= point[1]:
            if b[1] > point[1] and cross(a, b, point) > 0:
                winding += 1
        elif b[1] <= point[1] and cross(a, b, point) < 0:
            winding -= 1
    return Location.INSIDE if winding != 0 else Location.OUTSIDE


def ring_edges(polygon: Sequence[Point2]) -> List[Tuple[Point2, Point2]]:
    m = len(polygon)
    return [(polygon[i], polygon[(i + 1) % m]) for i in range(m)]


def first_self_crossing(polygon: Sequence[Point2]) -> Optional[Tuple[int, int]]:
    """
    Indices ``(i, j)`` of the first pair of ring edges that meet anywhere
    other than at the vertex shared by consecutive edges, or ``None`` when
    the ring is a simple polygon.
    """
    edges = ring_edges(polygon)
    m = len(edges)
    for i in range(m):
        for j in range(i + 1, m):
            a, b = edges[i]
            c, d = edges[j]
            adjacent = j == i + 1 or (i == 0 and j == m - 1)
            if adjacent:
                if not meet_only_at_shared_endpoint(a, b, c, d):
                    return i, j
            elif segments_intersect(a, b, c, d):
                return i, j
    return None


def polygon_strictly_inside(
    inner: Sequence[Point2], outer: Sequence[Point2]
) -> bool:
    """
    The closed polygon ``inner`` lies in the open interior of ``outer``:
    every inner vertex is strictly inside and no edges touch.
    """
    if any(locate(p, outer) != Location.INSIDE for p in inner):
        return False
    return not any(
        segments_intersect(a, b, c, d)
        for a, b in ring_edges(inner)
        for c, d in ring_edges(outer)
    )


def polygon_within_closed(
    inner: Sequence[Point2], outer: Sequence[Point2]
) -> bool:
    """Every vertex of ``inner`` is inside or on the boundary of ``outer``."""
    return all(locate(p, outer) != Location.OUTSIDE for p in inner)


def is_convex_position(points: Sequence[Point2]) -> bool:
    """
    True iff every point is a strict vertex of the convex hull of the set
    (no point inside the hull or in the middle of a hull edge).
    Fewer than three distinct points are trivially in convex position.
    """
    pts = sorted(set(points))
    if len(pts) != len(points):
        return False
    if len(pts) < 3:
        return True
    if all(cross(pts[0], pts[1], p) == 0 for p in pts[2:]):
        return False

    def half(seq: Sequence[Point2]) -> List[Point2]:
        hull: List[Point2] = []
        for p in seq:
            while len(hull) >= 2 and cross(hull[-2], hull[-1], p) <= 0:
                hull.pop()
            hull.append(p)
        return hull

    lower = half(pts)
    upper = half(list(reversed(pts)))
    hull = lower[:-1] + upper[:-1]
    return len(hull) == len(pts)
