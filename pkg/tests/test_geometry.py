from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from morph3d.geometry import (
    Line2,
    SegRel,
    Segment2,
    cross2,
    fold_map,
    inversion_map,
    orient2d,
    p2,
    paraboloid_lift,
    rational_sqrt_floor,
    reflect_across,
    segment_intersect_2d,
    sq_dist_point_segment,
)

rats = st.fractions(min_value=-50, max_value=50, max_denominator=8)
points = st.builds(p2, rats, rats)


def test_orient2d_basic():
    assert orient2d(p2(0, 0), p2(1, 0), p2(0, 1)) == 1
    assert orient2d(p2(0, 0), p2(1, 1), p2(2, 2)) == 0
    assert orient2d(p2(0, 0), p2(0, 1), p2(1, 0)) == -1


@given(points, points, points)
def test_orient2d_antisymmetric(a, b, c):
    assert orient2d(a, b, c) == -orient2d(b, a, c)
    assert orient2d(a, b, c) == -orient2d(a, c, b)


@given(points, points, points, points)
def test_orient2d_translation_invariant(a, b, c, d):
    assert orient2d(a, b, c) == orient2d(a + d, b + d, c + d)


def seg(ax, ay, bx, by):
    return Segment2(p2(ax, ay), p2(bx, by))


def test_segment_classification():
    assert segment_intersect_2d(seg(0, 0, 2, 0), seg(1, -1, 1, 1)) == SegRel.PROPER_CROSSING
    assert segment_intersect_2d(seg(0, 0, 1, 0), seg(1, 0, 2, 1)) == SegRel.ENDPOINT_TOUCH
    assert segment_intersect_2d(seg(0, 0, 2, 0), seg(1, 0, 3, 0)) == SegRel.OVERLAP
    assert segment_intersect_2d(seg(0, 0, 2, 0), seg(1, 0, 1, 1)) == SegRel.ENDPOINT_INTERIOR
    assert segment_intersect_2d(seg(0, 0, 1, 0), seg(0, 1, 1, 1)) == SegRel.DISJOINT
    # collinear, sharing exactly one endpoint
    assert segment_intersect_2d(seg(0, 0, 1, 0), seg(1, 0, 2, 0)) == SegRel.ENDPOINT_TOUCH
    # collinear, disjoint
    assert segment_intersect_2d(seg(0, 0, 1, 0), seg(2, 0, 3, 0)) == SegRel.DISJOINT


def test_fold_map_worked_example():
    # independent oracle: c(p) is the cross product of (v-u) and (p-u)
    u, v, p = p2(0, 0), p2(2, 0), p2(1, 1)
    assert cross2(v - u, p - u) == 2
    axis = Line2.through(u, v)
    top = fold_map(p, axis, "up", F(1))
    assert top.as_tuple() == (F(1), F(0), F(2))
    down = fold_map(p, axis, "down", F(1))
    assert down.as_tuple() == (F(1), F(-1), F(0))


def test_fold_map_axis_points_fixed():
    axis = Line2.through(p2(0, 0), p2(3, 1))
    on_axis = p2(F(3, 2), F(1, 2))
    for phase in ("up", "down"):
        for t in (F(0), F(1, 3), F(1)):
            q = fold_map(on_axis, axis, phase, t)
            assert q.as_tuple() == (on_axis.x, on_axis.y, F(0))


def test_fold_map_identity_at_zero():
    axis = Line2.through(p2(1, 2), p2(4, -1))
    p = p2(-3, 5)
    q = fold_map(p, axis, "up", F(0))
    assert q.as_tuple() == (p.x, p.y, F(0))


@given(points, points, points)
def test_fold_composition_is_reflection(u, v, p):
    if u == v:
        return
    axis = Line2.through(u, v)
    end = fold_map(p, axis, "down", F(1))
    ref = reflect_across(axis, p)
    assert (end.x, end.y) == (ref.x, ref.y)
    assert end.z == 0
    # reflecting twice is the identity
    assert reflect_across(axis, ref) == p


def test_fold_degenerate_axis():
    with pytest.raises(ValueError):
        Line2.through(p2(1, 1), p2(1, 1))


def test_inversion_examples():
    assert inversion_map(p2(2, 0), p2(0, 0), F(1)) == p2(F(1, 2), 0)
    assert inversion_map(p2(2, 0), p2(0, 0), F(4)) == p2(2, 0)
    # derived example: direct formula evaluation, then double-apply
    q = inversion_map(p2(3, 1), p2(1, 1), F(1))
    assert q == p2(F(3, 2), 1)
    assert inversion_map(q, p2(1, 1), F(1)) == p2(3, 1)


@given(points, points, st.fractions(min_value=F(1, 8), max_value=F(50), max_denominator=8))
def test_inversion_involution(p, o, c):
    if p == o:
        return
    assert inversion_map(inversion_map(p, o, c), o, c) == p


def test_inversion_center_error():
    with pytest.raises(ValueError):
        inversion_map(p2(1, 1), p2(1, 1), F(1))


def test_paraboloid_lift_projects_to_inversion():
    # apex ray through the lifted point hits z=0 at the inversion image
    o, c, p = p2(1, -2), F(7), p2(4, 2)
    lifted = paraboloid_lift(p, o, c)
    apex = o.lift(c)
    d = lifted - apex
    s = (F(0) - apex.z) / d.z
    hit = apex + d.scale(s)
    assert hit.drop() == inversion_map(p, o, c)


def test_sq_dist_point_segment():
    assert sq_dist_point_segment(p2(0, 1), p2(-1, 0), p2(1, 0)) == 1
    assert sq_dist_point_segment(p2(3, 0), p2(-1, 0), p2(1, 0)) == 4
    assert sq_dist_point_segment(p2(0, 0), p2(0, 0), p2(1, 0)) == 0


@given(st.fractions(min_value=0, max_value=1000, max_denominator=50))
def test_rational_sqrt_floor(v):
    r = rational_sqrt_floor(v)
    assert r * r <= v
    if v > 0:
        assert (2 * r + 1) ** 2 > v or r > 0
