import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rp2bouquet.geometry import (
    CodirectionalVectors,
    Point,
    SegKind,
    angle_sort,
    antipode,
    circle_point,
    mat_apply,
    mat_det,
    on_unit_circle,
    orient2d,
    pt,
    rat,
    seam_reflection,
    segment_intersection,
)

rats = st.builds(rat, st.integers(-8, 8), st.integers(1, 8))
points = st.builds(pt, rats, rats)


# ---------------------------------------------------------------------------
# orientation predicate
# ---------------------------------------------------------------------------

def test_orient2d_basic():
    assert orient2d(pt(0, 0), pt(1, 0), pt(0, 1)) == 1
    assert orient2d(pt(0, 0), pt(0, 1), pt(1, 0)) == -1
    assert orient2d(pt(0, 0), pt(1, 1), pt(2, 2)) == 0


@given(points, points, points)
def test_orient2d_antisymmetry(a, b, c):
    assert orient2d(a, b, c) == -orient2d(b, a, c) == orient2d(b, c, a)


@given(points, points, points, rats, rats)
def test_orient2d_translation_invariant(a, b, c, dx, dy):
    t = pt(dx, dy)
    assert orient2d(a, b, c) == orient2d(a + t, b + t, c + t)


# ---------------------------------------------------------------------------
# segment intersection
# ---------------------------------------------------------------------------

def test_proper_crossing_exact():
    res = segment_intersection(pt(0, 0), pt(1, 1), pt(0, 1), pt(1, 0))
    assert res.kind is SegKind.PROPER
    assert res.point == pt("1/2", "1/2")
    assert res.t1 == rat(1, 2) and res.t2 == rat(1, 2)


def test_disjoint_is_empty():
    res = segment_intersection(pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1))
    assert res.kind is SegKind.EMPTY


def test_shared_endpoint_is_degenerate():
    res = segment_intersection(pt(0, 0), pt(1, 0), pt(1, 0), pt(1, 1))
    assert res.kind is SegKind.DEGENERATE


def test_endpoint_in_interior_is_degenerate():
    res = segment_intersection(pt(0, 0), pt(2, 0), pt(1, 0), pt(1, 1))
    assert res.kind is SegKind.DEGENERATE


def test_collinear_overlap_is_degenerate():
    res = segment_intersection(pt(0, 0), pt(2, 0), pt(1, 0), pt(3, 0))
    assert res.kind is SegKind.DEGENERATE


def test_collinear_disjoint_is_empty():
    res = segment_intersection(pt(0, 0), pt(1, 0), pt(2, 0), pt(3, 0))
    assert res.kind is SegKind.EMPTY


def test_zero_length_segment_rejected():
    with pytest.raises(ValueError):
        segment_intersection(pt(0, 0), pt(0, 0), pt(1, 0), pt(1, 1))


@given(points, points, points, points)
def test_intersection_symmetric_in_segments(a, b, c, d):
    if a == b or c == d:
        return
    r1 = segment_intersection(a, b, c, d)
    r2 = segment_intersection(c, d, a, b)
    assert r1.kind is r2.kind
    if r1.kind is SegKind.PROPER:
        assert r1.point == r2.point
        assert (r1.t1, r1.t2) == (r2.t2, r2.t1)


@given(points, points, points, points)
def test_proper_against_line_solve_oracle(a, b, c, d):
    """Cross-check PROPER results against an independent Cramer solve."""
    if a == b or c == d:
        return
    res = segment_intersection(a, b, c, d)
    e1 = b - a
    e2 = d - c
    denom = e1.cross(e2)
    if denom != 0:
        t1 = (c - a).cross(e2) / denom
        t2 = (c - a).cross(e1) / denom
        proper = 0 < t1 < 1 and 0 < t2 < 1
        assert (res.kind is SegKind.PROPER) == proper
        if proper:
            assert res.point == a + e1.scale(t1)
            assert (res.t1, res.t2) == (t1, t2)
    else:
        assert res.kind is not SegKind.PROPER


@given(points, points, points, points)
def test_degenerate_matches_contact_oracle(a, b, c, d):
    """DEGENERATE iff the closed segments touch without a proper crossing."""
    if a == b or c == d:
        return

    def on_closed(p, u, v):
        if orient2d(u, v, p) != 0:
            return False
        lo_x, hi_x = min(u.x, v.x), max(u.x, v.x)
        lo_y, hi_y = min(u.y, v.y), max(u.y, v.y)
        return lo_x <= p.x <= hi_x and lo_y <= p.y <= hi_y

    res = segment_intersection(a, b, c, d)
    endpoint_contact = (on_closed(a, c, d) or on_closed(b, c, d)
                        or on_closed(c, a, b) or on_closed(d, a, b))
    if res.kind is SegKind.DEGENERATE:
        assert endpoint_contact
    if res.kind is SegKind.EMPTY:
        assert not endpoint_contact


# ---------------------------------------------------------------------------
# seam reflection
# ---------------------------------------------------------------------------

def test_seam_reflection_worked_example():
    m = seam_reflection(pt("3/5", "4/5"))
    assert m == ((rat(-7, 25), rat(24, 25)), (rat(24, 25), rat(7, 25)))


def test_seam_reflection_requires_circle_point():
    with pytest.raises(ValueError):
        seam_reflection(pt("1/2", "1/2"))


circle_units = st.builds(rat, st.integers(-40, 40), st.integers(1, 12))


@given(circle_units)
def test_seam_reflection_structure(u):
    p = circle_point(u)
    m = seam_reflection(p)
    assert mat_det(m) == -1
    assert m == seam_reflection(-p)
    assert mat_apply(m, p) == p
    # involution
    assert mat_apply(m, mat_apply(m, pt(3, -2))) == pt(3, -2)


@given(circle_units, points)
def test_seam_reflection_preserves_radial_component(u, v):
    if v.is_zero():
        return
    p = circle_point(u)
    assert mat_apply(seam_reflection(p), v).dot(p) == v.dot(p)


# ---------------------------------------------------------------------------
# circle parametrization
# ---------------------------------------------------------------------------

@given(circle_units)
def test_circle_point_on_circle(u):
    p = circle_point(u)
    assert on_unit_circle(p)
    assert antipode(p) == -p
    if u != 0:
        assert circle_point(-1 / u) == -p


def test_circle_point_angle_monotone():
    us = [rat(k, 2) for k in range(-6, 7)]
    angles = [math.atan2(float(circle_point(u).y), float(circle_point(u).x)) for u in us]
    assert angles == sorted(angles)


# ---------------------------------------------------------------------------
# angular sort
# ---------------------------------------------------------------------------

def test_angle_sort_ladder():
    vecs = [circle_point(rat(u)) for u in (-2, -1, 0, 1, 2)]
    # counterclockwise from direction (1,0): angles 0, +, ++, then wrap to negatives
    assert angle_sort(vecs) == [2, 3, 4, 0, 1]


def test_angle_sort_codirectional_rejected():
    with pytest.raises(CodirectionalVectors):
        angle_sort([pt(1, 1), pt(2, 2)])


@given(st.lists(st.builds(pt, st.integers(-50, 50), st.integers(-50, 50)),
                min_size=1, max_size=8))
def test_angle_sort_matches_float_oracle(vecs):
    vecs = [v for v in vecs if not v.is_zero()]
    seen_dirs = set()
    unique = []
    for v in vecs:
        key = None
        from math import gcd
        g = gcd(abs(int(v.x)), abs(int(v.y)))
        key = (int(v.x) // g, int(v.y) // g)
        if key in seen_dirs:
            continue
        seen_dirs.add(key)
        unique.append(v)
    if not unique:
        return
    order = angle_sort(unique)
    assert sorted(order) == list(range(len(unique)))

    def angle(v):
        a = math.atan2(float(v.y), float(v.x))
        return a if a >= 0 else a + 2 * math.pi

    expected = sorted(range(len(unique)), key=lambda i: angle(unique[i]))
    assert order == expected
