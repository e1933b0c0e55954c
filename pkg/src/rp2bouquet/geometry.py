"""Exact rational geometry for the closed-disk model of the projective plane.

The projective plane RP^2 is modelled as the closed unit disk with antipodal
boundary points identified.  The boundary circle is called the *seam*: a curve
that reaches the seam at a point p continues from -p.  The gluing chart that
realizes this identification is orientation reversing; its differential at p is
the reflection returned by :func:`seam_reflection`, a symmetric involution with
determinant -1 that fixes the radial direction through p.

All coordinates are exact rationals (`Rat`).  Rationals are kept in lowest
terms with positive denominator by the number type itself, every predicate
returns a true sign, and no epsilon appears anywhere.  This is what makes
"generic position" a decidable property rather than a numerical judgement
call: two segments either cross transversally in their interiors, or miss
each other, or are in a degenerate configuration, and the three cases are
distinguished exactly.

Rational points on the unit circle come from the tangent-half-angle map

    u  |->  ((1 - u^2) / (1 + u^2),  2u / (1 + u^2)),

which hits every rational circle point except (-1, 0) and lets the rest of the
package pick seam points and directions without ever leaving Q^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cmp_to_key
from typing import Sequence

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Rat

__all__ = [
    "Rat",
    "rat",
    "Point",
    "Mat2",
    "CodirectionalVectors",
    "orient2d",
    "sign",
    "SegKind",
    "SegmentIntersection",
    "segment_intersection",
    "seam_reflection",
    "mat_apply",
    "mat_det",
    "circle_point",
    "antipode",
    "on_unit_circle",
    "angle_sort",
]

ZERO = Rat(0)
ONE = Rat(1)


def rat(value, den=None) -> Rat:
    """Coerce ints, strings like ``"3/4"``, Fractions or pairs to `Rat`."""
    if den is not None:
        return Rat(value, den)
    return Rat(value)


class CodirectionalVectors(ValueError):
    """Two vectors point in exactly the same direction (positively parallel)."""


@dataclass(frozen=True, slots=True)
class Point:
    """A point of (or vector in) the rational plane."""

    x: Rat
    y: Rat

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Point":
        return Point(-self.x, -self.y)

    def scale(self, k) -> "Point":
        return Point(self.x * k, self.y * k)

    def dot(self, other: "Point") -> Rat:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Point") -> Rat:
        return self.x * other.y - self.y * other.x

    def perp(self) -> "Point":
        """Left normal: rotate by +90 degrees."""
        return Point(-self.y, self.x)

    def norm2(self) -> Rat:
        return self.x * self.x + self.y * self.y

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0


def pt(x, y) -> Point:
    """Build a Point, coercing both coordinates to `Rat`."""
    return Point(rat(x), rat(y))


def sign(value) -> int:
    """Exact sign of a rational: -1, 0 or +1."""
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def orient2d(a: Point, b: Point, c: Point) -> int:
    """Sign of the signed area of the triangle (a, b, c).

    +1 when c lies strictly to the left of the directed line a->b, -1 when
    strictly to the right, 0 when the three points are collinear.  Computed
    as the exact sign of a 2x2 determinant, so there is no tolerance and no
    wrong answer near degeneracy.

    >>> orient2d(pt(0, 0), pt(1, 0), pt(0, 1))
    1
    >>> orient2d(pt(0, 0), pt(1, 0), pt(2, 0))
    0
    """
    return sign((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))


# ---------------------------------------------------------------------------
# segment intersection
# ---------------------------------------------------------------------------

class SegKind(Enum):
    EMPTY = "empty"
    PROPER = "proper"
    DEGENERATE = "degenerate"


@dataclass(frozen=True, slots=True)
class SegmentIntersection:
    """Classification of how two closed segments meet.

    PROPER carries the crossing point and the two parameters, both strictly
    inside (0, 1).  DEGENERATE covers every non-transversal contact: a shared
    endpoint, an endpoint in the other segment's interior, or collinear
    overlap.  EMPTY means the segments are disjoint.
    """

    kind: SegKind
    point: Point | None = None
    t1: Rat | None = None
    t2: Rat | None = None


EMPTY = SegmentIntersection(SegKind.EMPTY)
DEGENERATE = SegmentIntersection(SegKind.DEGENERATE)


def _between_on_line(p: Point, u: Point, v: Point) -> bool:
    # p is known to be on the line through u, v; test membership in the
    # closed segment by coordinate ranges (exact).
    if u.x != v.x:
        lo, hi = (u.x, v.x) if u.x < v.x else (v.x, u.x)
        return lo <= p.x <= hi
    lo, hi = (u.y, v.y) if u.y < v.y else (v.y, u.y)
    return lo <= p.y <= hi


def segment_intersection(a: Point, b: Point, c: Point, d: Point) -> SegmentIntersection:
    """Exactly classify the intersection of segments [a, b] and [c, d].

    Both segments must have distinct endpoints.  The result is symmetric in
    the two segments up to swapping the reported parameters.

    >>> r = segment_intersection(pt(0, 0), pt(1, 1), pt(0, 1), pt(1, 0))
    >>> r.kind.value, r.point.x, r.point.y, r.t1, r.t2
    ('proper', mpq(1,2), mpq(1,2), mpq(1,2), mpq(1,2))
    >>> segment_intersection(pt(0, 0), pt(1, 0), pt(1, 0), pt(2, 1)).kind.value
    'degenerate'
    """
    if a == b or c == d:
        raise ValueError("segment endpoints must be distinct")
    oa = orient2d(c, d, a)
    ob = orient2d(c, d, b)
    oc = orient2d(a, b, c)
    od = orient2d(a, b, d)
    return _classify(a, b, c, d, oa, ob, oc, od)


def _classify(a, b, c, d, oa, ob, oc, od) -> SegmentIntersection:
    if oa * ob < 0 and oc * od < 0:
        e1 = b - a
        e2 = d - c
        denom = e1.cross(e2)
        t1 = (c - a).cross(e2) / denom
        t2 = (c - a).cross(e1) / denom
        point = a + e1.scale(t1)
        return SegmentIntersection(SegKind.PROPER, point, t1, t2)
    if oa == 0 and _between_on_line(a, c, d):
        return DEGENERATE
    if ob == 0 and _between_on_line(b, c, d):
        return DEGENERATE
    if oc == 0 and _between_on_line(c, a, b):
        return DEGENERATE
    if od == 0 and _between_on_line(d, a, b):
        return DEGENERATE
    return EMPTY


# ---------------------------------------------------------------------------
# the seam
# ---------------------------------------------------------------------------

Mat2 = tuple[tuple[Rat, Rat], tuple[Rat, Rat]]


def on_unit_circle(p: Point) -> bool:
    return p.norm2() == 1


def antipode(p: Point) -> Point:
    return -p


def circle_point(u) -> Point:
    """Rational unit-circle point at tangent-half-angle parameter u.

    The angle is 2*atan(u), strictly increasing in u, so increasing rational
    parameters give counterclockwise order on the circle minus (-1, 0).

    >>> circle_point(1)
    Point(x=mpq(0,1), y=mpq(1,1))
    """
    u = rat(u)
    den = 1 + u * u
    return Point((1 - u * u) / den, 2 * u / den)


def seam_reflection(p: Point) -> Mat2:
    """Differential of the antipodal seam chart at exit point p.

    For p on the unit circle this is the reflection across the line through
    p and the origin:

        M(p) = [[px^2 - py^2, 2 px py], [2 px py, py^2 - px^2]].

    It is symmetric, an involution, fixes p, and has determinant -1; a
    direction d with outward radial component at p is carried to the legal
    entry direction M(p) d at -p (which points into the disk there).  Note
    M(-p) = M(p), so either representative of the seam point gives the same
    reflection.
    """
    if not on_unit_circle(p):
        raise ValueError(f"seam reflection needs a unit-circle point, got ({p.x}, {p.y})")
    mxx = p.x * p.x - p.y * p.y
    mxy = 2 * p.x * p.y
    return ((mxx, mxy), (mxy, -mxx))


def mat_apply(m: Mat2, v: Point) -> Point:
    return Point(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)


def mat_det(m: Mat2) -> Rat:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


# ---------------------------------------------------------------------------
# angular order
# ---------------------------------------------------------------------------

def _quadrant(v: Point) -> int:
    # eight-way index, counterclockwise from east; axes get their own slots
    if v.y == 0:
        return 0 if v.x > 0 else 4
    if v.y > 0:
        if v.x > 0:
            return 1
        return 2 if v.x == 0 else 3
    if v.x < 0:
        return 5
    return 6 if v.x == 0 else 7


def _angle_cmp(u: Point, v: Point) -> int:
    qu, qv = _quadrant(u), _quadrant(v)
    if qu != qv:
        return -1 if qu < qv else 1
    cr = u.cross(v)
    if cr > 0:
        return -1
    if cr < 0:
        return 1
    raise CodirectionalVectors(f"({u.x}, {u.y}) and ({v.x}, {v.y}) are codirectional")


def angle_sort(vectors: Sequence[Point]) -> list[int]:
    """Indices of `vectors` in counterclockwise order from direction (1, 0).

    Comparison is exact (quadrant index, then a cross-product test); two
    positively proportional vectors have no defined relative order and raise
    :class:`CodirectionalVectors`.  Antipodal vectors are fine.

    >>> angle_sort([pt(0, -1), pt(1, 0)])
    [1, 0]
    """
    for v in vectors:
        if v.is_zero():
            raise ValueError("cannot angle-sort a zero vector")
    order = sorted(range(len(vectors)), key=cmp_to_key(lambda i, j: _angle_cmp(vectors[i], vectors[j])))
    # sorting need not compare every pair; equal-angle vectors land adjacent
    for prev, cur in zip(order, order[1:]):
        u, v = vectors[prev], vectors[cur]
        if _quadrant(u) == _quadrant(v) and u.cross(v) == 0:
            raise CodirectionalVectors(f"({u.x}, {u.y}) and ({v.x}, {v.y}) are codirectional")
    return order
