"""Exact rational points, segments, predicates and the two closed-form maps
used by the 3D morph operations (the fold across a line and planar inversion).

Every coordinate is a ``fractions.Fraction``.  All predicates are exact sign
computations and every constructed point is again rational; nothing in this
module rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Fraction

RatLike = Union[Fraction, int, str]


def rat(value: RatLike) -> Rat:
    """Coerce ints and canonical "p/q" strings to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


@dataclass(frozen=True, slots=True)
class Point2:
    x: Rat
    y: Rat

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def scale(self, s: Rat) -> "Point2":
        return Point2(self.x * s, self.y * s)

    def perp(self) -> "Point2":
        """Rotate by 90 degrees counterclockwise (as a vector)."""
        return Point2(-self.y, self.x)

    def as_tuple(self) -> tuple[Rat, Rat]:
        return (self.x, self.y)

    def lift(self, z: RatLike = 0) -> "Point3":
        return Point3(self.x, self.y, rat(z))


@dataclass(frozen=True, slots=True)
class Point3:
    x: Rat
    y: Rat
    z: Rat

    def __add__(self, other: "Point3") -> "Point3":
        return Point3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Point3") -> "Point3":
        return Point3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scale(self, s: Rat) -> "Point3":
        return Point3(self.x * s, self.y * s, self.z * s)

    def drop(self) -> Point2:
        return Point2(self.x, self.y)

    def as_tuple(self) -> tuple[Rat, Rat, Rat]:
        return (self.x, self.y, self.z)


def p2(x: RatLike, y: RatLike) -> Point2:
    return Point2(rat(x), rat(y))


def p3(x: RatLike, y: RatLike, z: RatLike = 0) -> Point3:
    return Point3(rat(x), rat(y), rat(z))


@dataclass(frozen=True, slots=True)
class Segment2:
    a: Point2
    b: Point2


@dataclass(frozen=True, slots=True)
class Segment3:
    a: Point3
    b: Point3


@dataclass(frozen=True, slots=True)
class Line2:
    """Oriented line through ``anchor`` with direction ``direction`` != 0.

    Used as the fold axis of the graph-flip operation; built from two
    distinct drawing points.
    """

    anchor: Point2
    direction: Point2

    def __post_init__(self) -> None:
        if self.direction.x == 0 and self.direction.y == 0:
            raise ValueError("degenerate axis: the two defining points coincide")

    @staticmethod
    def through(u: Point2, v: Point2) -> "Line2":
        return Line2(u, v - u)


def sign(value: Rat) -> int:
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def cross2(u: Point2, v: Point2) -> Rat:
    return u.x * v.y - u.y * v.x


def dot2(u: Point2, v: Point2) -> Rat:
    return u.x * v.x + u.y * v.y


def cross3(u: Point3, v: Point3) -> Point3:
    return Point3(
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        u.x * v.y - u.y * v.x,
    )


def dot3(u: Point3, v: Point3) -> Rat:
    return u.x * v.x + u.y * v.y + u.z * v.z


def sq_norm2(u: Point2) -> Rat:
    return u.x * u.x + u.y * u.y


def sq_norm3(u: Point3) -> Rat:
    return u.x * u.x + u.y * u.y + u.z * u.z


def orient2d(a: Point2, b: Point2, c: Point2) -> int:
    """Sign of the doubled signed area of triangle (a, b, c); +1 is ccw."""
    return sign(cross2(b - a, c - a))


def collinear(a: Point2, b: Point2, c: Point2) -> bool:
    return orient2d(a, b, c) == 0


def point_on_segment_2d(p: Point2, a: Point2, b: Point2) -> bool:
    """Exact closed test: is p on segment [a, b] (endpoints included)?"""
    if orient2d(a, b, p) != 0:
        return False
    if min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y):
        return True
    return False


class SegRel(Enum):
    DISJOINT = "disjoint"
    PROPER_CROSSING = "proper-crossing"
    ENDPOINT_TOUCH = "endpoint-touch"
    OVERLAP = "overlap"
    ENDPOINT_INTERIOR = "endpoint-interior"


def segment_intersect_2d(s: Segment2, t: Segment2) -> SegRel:
    """Exact classification of how two nondegenerate segments meet.

    - PROPER_CROSSING: a single common point interior to both,
    - ENDPOINT_TOUCH: a single common point that is an endpoint of both,
    - ENDPOINT_INTERIOR: a single common point that is an endpoint of exactly
      one segment (a T-junction),
    - OVERLAP: collinear with a common sub-segment of positive length,
    - DISJOINT: no common point.
    """
    a, b, c, d = s.a, s.b, t.a, t.b
    if a == b or c == d:
        raise ValueError("degenerate segment")
    o1 = orient2d(a, b, c)
    o2 = orient2d(a, b, d)
    o3 = orient2d(c, d, a)
    o4 = orient2d(c, d, b)

    if o1 == 0 and o2 == 0:
        # Collinear configuration: compare 1D ranges along the carrier line.
        direction = b - a
        pa, pb = Fraction(0), dot2(direction, direction)
        pc = dot2(direction, c - a)
        pd = dot2(direction, d - a)
        lo1, hi1 = min(pa, pb), max(pa, pb)
        lo2, hi2 = min(pc, pd), max(pc, pd)
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo > hi:
            return SegRel.DISJOINT
        if lo < hi:
            return SegRel.OVERLAP
        # single shared point: an endpoint of s by construction; of t too?
        shared_is_t_end = lo == lo2 or lo == hi2
        return SegRel.ENDPOINT_TOUCH if shared_is_t_end else SegRel.ENDPOINT_INTERIOR

    if o1 * o2 > 0 or o3 * o4 > 0:
        return SegRel.DISJOINT

    zeros = (o1 == 0, o2 == 0, o3 == 0, o4 == 0)
    if not any(zeros):
        return SegRel.PROPER_CROSSING

    # Exactly one common point, lying on an endpoint of at least one segment.
    for p in (c, d):
        if p in (a, b):
            return SegRel.ENDPOINT_TOUCH
    touching_s_end = point_on_segment_2d(a, c, d) or point_on_segment_2d(b, c, d)
    touching_t_end = point_on_segment_2d(c, a, b) or point_on_segment_2d(d, a, b)
    if touching_s_end or touching_t_end:
        return SegRel.ENDPOINT_INTERIOR
    return SegRel.DISJOINT


def segments_share_one_point(rel: SegRel) -> bool:
    return rel in (SegRel.PROPER_CROSSING, SegRel.ENDPOINT_TOUCH, SegRel.ENDPOINT_INTERIOR)


# -- frame helpers for the fold map --------------------------------------

def axis_frame(axis: Line2, p: Point2) -> tuple[Rat, Rat]:
    """Coordinates of p in the axis frame: u at the origin, v on the +x axis.

    Returns (x, y) with x = <d, p-u> and y = d x (p-u); the frame is scaled
    by L = |d|^2, i.e. v sits at x = L.  y equals the rational cross product
    c(p) used as the fold height.
    """
    w = p - axis.anchor
    return dot2(axis.direction, w), cross2(axis.direction, w)


def frame_to_world(axis: Line2, x: Rat, y: Rat) -> Point2:
    """Inverse of :func:`axis_frame` (same L-scaled convention)."""
    d = axis.direction
    scale = Fraction(1, 1) / sq_norm2(d)
    return axis.anchor + (d.scale(x) + d.perp().scale(y)).scale(scale)


def fold_map(p: Point2, axis: Line2, phase: str, t: Rat) -> Point3:
    """The rational affine fold across ``axis``.

    phase "up" carries the plane drawing into the vertical plane over the
    axis: frame point (x, y) goes to (x, (1-t) y, t c(p)) with c(p) the cross
    product of the axis direction and (p - u).  phase "down" lowers the folded
    point onto the mirror image: (x, -t y, (1-t) c(p)).  Points on the axis
    never move.  At t=1 of phase "down" the image is the exact reflection of
    p across the axis, back in z = 0.
    """
    if phase not in ("up", "down"):
        raise ValueError(f"phase must be 'up' or 'down', got {phase!r}")
    x, y = axis_frame(axis, p)
    t = rat(t)
    if phase == "up":
        planar = frame_to_world(axis, x, (1 - t) * y)
        return planar.lift(t * y)
    planar = frame_to_world(axis, x, -t * y)
    return planar.lift((1 - t) * y)


def reflect_across(axis: Line2, p: Point2) -> Point2:
    x, y = axis_frame(axis, p)
    return frame_to_world(axis, x, -y)


def inversion_map(p: Point2, center: Point2, c: Rat) -> Point2:
    """Planar inversion about ``center`` with power ``c`` > 0.

    Equals lifting p to the downward paraboloid z = c - |p-o|^2 and projecting
    centrally from the apex (o, c) back onto z = 0.  An exact involution on
    its domain; the circle |p-o|^2 = c is pointwise fixed.
    """
    c = rat(c)
    if c <= 0:
        raise ValueError("inversion power must be positive")
    w = p - center
    d2 = sq_norm2(w)
    if d2 == 0:
        raise ValueError("inversion center must not coincide with the point")
    return center + w.scale(c / d2)


def paraboloid_lift(p: Point2, center: Point2, c: Rat) -> Point3:
    """Vertical lift of p onto z = c - |p - center|^2."""
    return p.lift(rat(c) - sq_norm2(p - center))


# -- exact distances (used for feature-size computations) ----------------

def sq_dist_point_point(a: Point2, b: Point2) -> Rat:
    return sq_norm2(a - b)


def sq_dist_point_segment(p: Point2, a: Point2, b: Point2) -> Rat:
    """Exact squared distance from p to segment [a, b]."""
    d = b - a
    l2 = sq_norm2(d)
    if l2 == 0:
        return sq_norm2(p - a)
    t = dot2(p - a, d) / l2
    if t <= 0:
        return sq_norm2(p - a)
    if t >= 1:
        return sq_norm2(p - b)
    proj = a + d.scale(t)
    return sq_norm2(p - proj)


def rational_sqrt_floor(value: Rat) -> Rat:
    """A rational r with 0 <= r and r^2 <= value, within a factor 2 of sqrt.

    Used to derive safe offset radii from exact squared distances.
    """
    if value < 0:
        raise ValueError("negative value")
    if value == 0:
        return Fraction(0)
    num, den = value.numerator, value.denominator
    # isqrt floors both parts; dividing by the *ceiling* of sqrt(den) keeps r^2 <= value.
    rn = _isqrt(num)
    rd = _isqrt(den)
    if rd * rd < den:
        rd += 1
    if rn == 0:
        # value < 1: scale up to regain precision
        scaled = value * (2 ** 64)
        rn = _isqrt(scaled.numerator)
        rd = _isqrt(scaled.denominator)
        if rd * rd < scaled.denominator:
            rd += 1
        r = Fraction(rn, rd * (2 ** 32))
    else:
        r = Fraction(rn, rd)
    assert r * r <= value
    return r


def _isqrt(n: int) -> int:
    import math

    return math.isqrt(n)


def bbox2(points: Iterable[Point2]) -> tuple[Rat, Rat, Rat, Rat]:
    xs, ys = [], []
    for p in points:
        xs.append(p.x)
        ys.append(p.y)
    if not xs:
        raise ValueError("empty point set")
    return min(xs), min(ys), max(xs), max(ys)


def convex_position_direction(u: Point2, w: Point2) -> Point2:
    """A rational direction strictly inside the angular sector swept
    counterclockwise from u to w (both nonzero, not equal directions).

    For a convex sector this is any positive combination; for a reflex sector
    the negated combination of the complementary cone; for a straight sector
    the left perpendicular.
    """
    c = cross2(u, w)
    if c > 0:
        return Point2(u.x + w.x, u.y + w.y)
    if c < 0:
        return Point2(-(u.x + w.x), -(u.y + w.y))
    if dot2(u, w) < 0:
        # straight angle: take the left-hand perpendicular of u
        return u.perp()
    raise ValueError("sector boundary directions coincide")
