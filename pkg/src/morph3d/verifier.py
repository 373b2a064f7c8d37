"""Exact certification that a linear 3D morph step is crossing-free.

A linear step moves every vertex at uniform speed from its start to its end
position, so each coordinate is a degree-1 polynomial in the time parameter
t over [0, 1].  For every pair of moving features (edge/edge, vertex/edge,
vertex/vertex) the contact condition is a finite set of polynomial sign
conditions in t of degree at most 6.  Those are decided exactly:

- non-adjacent edge pairs: contact requires the coplanarity determinant
  det(e1(t), e2(t), w(t)) (degree <= 3) to vanish; its real roots in [0, 1]
  are isolated and the segment intersection parameters are sign-tested at
  each (possibly irrational) root,
- identically-coplanar pairs: the contact indicator only changes at roots of
  a fixed family of contact-coordinate polynomials (degree <= 4); contact is
  tested at every root and at a rational sample inside every gap,
- adjacent edge pairs may touch at the shared endpoint only; any other
  contact forces the two edge vectors to become parallel with positive dot
  product, again a root-plus-sign condition,
- vertex/vertex coincidence reduces to common roots of three linear
  polynomials; vertex/edge contact to a collinearity polynomial plus range
  conditions.

Signs at algebraic times are resolved through gcd tests and interval
refinement (see :mod:`morph3d.polynomials`); an exhausted refinement budget
is reported as "undecided" and never as a pass.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .geometry import Point3, Rat
from . import polynomials as P
from .polynomials import (
    AlgebraicNumber,
    IntPoly,
    RefinementExhausted,
    gcd_free_basis,
    isolate_int_roots,
    refine_disjoint,
    sign_at_algebraic,
    sign_at_rational,
)

Keyframe = tuple[Point3, ...]

DEFAULT_MAX_REFINE = 128


def max_refine_budget() -> int:
    value = os.environ.get("MORPH3D_MAX_REFINE")
    if value:
        return max(8, int(value))
    return DEFAULT_MAX_REFINE


class VerificationUndecided(Exception):
    """Sign refinement exhausted its budget; treated as failure by callers."""


SEPARATED = "separated-by-polynomial-sign"
COPLANAR_OK = "coplanar-but-2D-disjoint-everywhere"
ADJACENT_OK = "adjacent-share-endpoint-only"


@dataclass(frozen=True)
class Violation:
    """Exact evidence of a forbidden contact during a linear step."""

    kind: str  # "edge-edge" | "vertex-edge" | "vertex-vertex"
    pair: tuple
    interval: tuple[Rat, Rat]
    witness_time: Optional[Rat] = None
    message: str = ""

    @property
    def ok(self) -> bool:
        return False


@dataclass
class StepCertificate:
    """Per-pair evidence tags plus the deepest refinement used."""

    evidence: dict[tuple, str] = field(default_factory=dict)
    refinement_depth: int = 0

    @property
    def ok(self) -> bool:
        return True


StepResult = Union[StepCertificate, Violation]

# linear integer polynomial vectors: one IntPoly per axis
Vec = tuple[IntPoly, IntPoly, IntPoly]


def _vec_sub(u: Vec, v: Vec) -> Vec:
    return (P.sub(u[0], v[0]), P.sub(u[1], v[1]), P.sub(u[2], v[2]))


def _vec_cross(u: Vec, v: Vec) -> Vec:
    return (
        P.sub(P.mul(u[1], v[2]), P.mul(u[2], v[1])),
        P.sub(P.mul(u[2], v[0]), P.mul(u[0], v[2])),
        P.sub(P.mul(u[0], v[1]), P.mul(u[1], v[0])),
    )


def _vec_dot(u: Vec, v: Vec) -> IntPoly:
    return P.add(P.add(P.mul(u[0], v[0]), P.mul(u[1], v[1])), P.mul(u[2], v[2]))


def _sq_norm(u: Vec) -> IntPoly:
    return _vec_dot(u, u)


def _assert_degree(f: IntPoly, bound: int) -> IntPoly:
    assert P.degree(f) <= bound, f"degree bound violated: {P.degree(f)} > {bound}"
    return f


def _int_trajectories(points: Sequence[tuple[Point3, Point3]]) -> list[Vec]:
    """Translate by the first start point and clear denominators so each
    vertex trajectory becomes a vector of integer linear polynomials.
    Contact structure is invariant under common translation and scaling."""
    base = points[0][0]
    den = 1
    for a, b in points:
        for c in (a.x - base.x, a.y - base.y, a.z - base.z, b.x - base.x, b.y - base.y, b.z - base.z):
            d = c.denominator
            g = _gcd(den, d)
            den = den // g * d
    out: list[Vec] = []
    for a, b in points:
        comps = []
        for ca, cb in ((a.x - base.x, b.x - base.x), (a.y - base.y, b.y - base.y), (a.z - base.z, b.z - base.z)):
            c0 = int(ca * den)
            c1 = int((cb - ca) * den)
            comps.append(P.strip((c0, c1)))
        out.append((comps[0], comps[1], comps[2]))
    return out


def _gcd(a: int, b: int) -> int:
    import math

    return math.gcd(a, b)


# -- static exact intersection tests at a rational time -------------------

def _at(v: Vec, t: Rat) -> tuple[Rat, Rat, Rat]:
    return (P.eval_at(v[0], t), P.eval_at(v[1], t), P.eval_at(v[2], t))


def _s_sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _s_cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _s_dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def static_point_on_segment(w, a, b) -> bool:
    d = _s_sub(b, a)
    l2 = _s_dot(d, d)
    if l2 == 0:
        return w == a
    x = _s_sub(w, a)
    if any(c != 0 for c in _s_cross(x, d)):
        return False
    pp = _s_dot(x, d)
    return 0 <= pp <= l2


def static_segments_intersect(p1, p2, q1, q2) -> bool:
    """Exact: do the closed 3D segments share at least one point?"""
    d1 = _s_sub(p2, p1)
    d2 = _s_sub(q2, q1)
    r = _s_sub(q1, p1)
    l1 = _s_dot(d1, d1)
    l2 = _s_dot(d2, d2)
    if l1 == 0 and l2 == 0:
        return p1 == q1
    if l1 == 0:
        return static_point_on_segment(p1, q1, q2)
    if l2 == 0:
        return static_point_on_segment(q1, p1, p2)
    n = _s_cross(d1, d2)
    if _s_dot(n, r) != 0:
        return False  # skew lines
    nn = _s_dot(n, n)
    if nn > 0:
        a = _s_dot(_s_cross(r, d2), n)
        b = _s_dot(_s_cross(r, d1), n)
        return 0 <= a <= nn and 0 <= b <= nn
    # parallel: collinear plus 1D overlap
    if any(c != 0 for c in _s_cross(r, d1)):
        return False
    pp = _s_dot(r, d1)
    qq = pp + _s_dot(d2, d1)
    return not (max(pp, qq) < 0 or min(pp, qq) > l1)


def static_segments_touch_beyond_shared(p_shared, p_far1, p_far2) -> bool:
    """For segments sharing the endpoint p_shared: any further contact?"""
    d1 = _s_sub(p_far1, p_shared)
    d2 = _s_sub(p_far2, p_shared)
    n = _s_cross(d1, d2)
    if any(c != 0 for c in n):
        return False
    return _s_dot(d1, d2) > 0


# -- algebraic contact decisions -------------------------------------------

class _PairChecker:
    """Decides contact for one feature pair; all polys are integer lists."""

    def __init__(self, max_refine: int):
        self.max_refine = max_refine
        self.depth_used = 0

    def sign_at(self, f: IntPoly, tau) -> int:
        if isinstance(tau, AlgebraicNumber):
            self.depth_used += 1
            try:
                return sign_at_algebraic(f, tau, self.max_refine)
            except RefinementExhausted as exc:
                raise VerificationUndecided(str(exc)) from exc
        return sign_at_rational(f, tau)

    # edge-edge contact test at one instant (coplanarity already known)
    def ee_contact_at(self, polys: dict, tau) -> bool:
        sN = self.sign_at(polys["N"], tau)
        if sN > 0:
            return (
                self.sign_at(polys["A"], tau) >= 0
                and self.sign_at(polys["NA"], tau) >= 0
                and self.sign_at(polys["B"], tau) >= 0
                and self.sign_at(polys["NB"], tau) >= 0
            )
        # parallel (or degenerate) configuration
        sL1 = self.sign_at(polys["L1"], tau)
        sL2 = self.sign_at(polys["L2"], tau)
        if sL1 == 0 and sL2 == 0:
            return self.sign_at(polys["R2"], tau) == 0
        if sL1 == 0:
            # edge 1 is a point: on-segment test against edge 2
            return (
                self.sign_at(polys["M2"], tau) == 0
                and self.sign_at(polys["pp2"], tau) >= 0
                and self.sign_at(polys["qq2"], tau) >= 0
            )
        if sL2 == 0:
            return (
                self.sign_at(polys["M1"], tau) == 0
                and self.sign_at(polys["pp1"], tau) >= 0
                and self.sign_at(polys["qq1"], tau) >= 0
            )
        if self.sign_at(polys["M"], tau) != 0:
            return False  # parallel but not collinear
        sp = self.sign_at(polys["p"], tau)
        sq = self.sign_at(polys["q"], tau)
        slp = self.sign_at(polys["Lp"], tau)
        slq = self.sign_at(polys["Lq"], tau)
        return (sp >= 0 or sq >= 0) and (slp >= 0 or slq >= 0)


def _edge_polys(tp1: Vec, tp2: Vec, tq1: Vec, tq2: Vec) -> dict:
    d1 = _vec_sub(tp2, tp1)
    d2 = _vec_sub(tq2, tq1)
    r = _vec_sub(tq1, tp1)
    n = _vec_cross(d1, d2)
    F = _assert_degree(_vec_dot(n, r), 3)
    N = _assert_degree(_sq_norm(n), 4)
    A = _assert_degree(_vec_dot(_vec_cross(r, d2), n), 4)
    B = _assert_degree(_vec_dot(_vec_cross(r, d1), n), 4)
    L1 = _assert_degree(_sq_norm(d1), 2)
    L2 = _assert_degree(_sq_norm(d2), 2)
    M = _assert_degree(_sq_norm(_vec_cross(r, d1)), 4)
    p = _assert_degree(_vec_dot(r, d1), 2)
    q = P.add(p, _vec_dot(d2, d1))
    R2 = _assert_degree(_sq_norm(r), 2)
    # point-vs-segment data for the two degenerate-edge regimes
    M2 = _sq_norm(_vec_cross(r, d2))  # dist(P1, line Q): r = Q1-P1
    pp2 = P.neg(_vec_dot(r, d2))  # (P1-Q1).d2
    qq2 = P.sub(L2, pp2)
    rq = _vec_sub(tp1, tq1)
    M1 = _sq_norm(_vec_cross(rq, d1))
    pp1 = _vec_dot(_vec_sub(tq1, tp1), d1)
    qq1 = P.sub(L1, pp1)
    return {
        "F": F, "N": N, "A": A, "B": B,
        "NA": P.sub(N, A), "NB": P.sub(N, B),
        "L1": L1, "L2": L2, "M": M, "p": p, "q": q,
        "Lp": P.sub(L1, p), "Lq": P.sub(L1, q), "R2": R2,
        "M2": M2, "pp2": pp2, "qq2": qq2,
        "M1": M1, "pp1": pp1, "qq1": qq1,
    }


_ZERO = Fraction(0)
_ONE = Fraction(1)


def _critical_times(polys: Sequence[IntPoly]) -> list:
    """Roots in [0,1] of a family of polynomials (via a gcd-free basis),
    pairwise disjoint and sorted, plus one rational sample in every gap
    between consecutive roots (and before the first / after the last).
    Returns candidates of the form ("crit", AlgebraicNumber) and
    ("gap", Fraction)."""
    basis = gcd_free_basis(list(polys))
    roots: list[AlgebraicNumber] = []
    for b in basis:
        roots.extend(isolate_int_roots(b, _ZERO, _ONE))
    roots = refine_disjoint(roots) if len(roots) > 1 else roots

    # keep interval endpoints clear of rational root values so that gap
    # samples always exist strictly between consecutive roots
    rat_values = {r.value for r in roots if r.value is not None}
    changed = True
    while changed:
        changed = False
        for idx, r in enumerate(roots):
            if r.value is None and (r.lo in rat_values or r.hi in rat_values):
                roots[idx] = r.refined(2)
                if roots[idx].value is not None:
                    rat_values.add(roots[idx].value)
                changed = True
    roots.sort(key=lambda r: r.midpoint())

    out: list = [("crit", r) for r in roots]
    marks: list[tuple[Rat, Rat]] = [(Fraction(0), Fraction(0))]
    for r in roots:
        if r.value is not None:
            marks.append((r.value, r.value))
        else:
            marks.append((r.lo, r.hi))
    marks.append((Fraction(1), Fraction(1)))
    root_values = {r.value for r in roots if r.value is not None}
    for (alo, ahi), (blo, bhi) in zip(marks, marks[1:]):
        left, right = ahi, blo
        if left < right:
            out.append(("gap", (left + right) / 2))
        elif left == right and left not in root_values:
            out.append(("gap", left))
    return out


class MorphStepError(ValueError):
    """Bad inputs to the verifier (mismatched vertex sets, degenerate edges)."""


def verify_linear_step(
    graph,
    start: Keyframe,
    end: Keyframe,
    *,
    max_refine: Optional[int] = None,
    collect_evidence: bool = True,
) -> StepResult:
    """Certify that the linear morph from ``start`` to ``end`` is free of
    forbidden contacts, or produce the first offending pair found (in the
    deterministic vertex-pair / vertex-edge / edge-pair scan order).

    Adjacent edges may meet at their shared endpoint at all times; every
    other contact, at any t in [0,1], including vertex-vertex and
    vertex-on-edge, is a violation.
    """
    n = graph.n
    edges = graph.edges
    if len(start) != n or len(end) != n:
        raise MorphStepError("keyframes must cover the full vertex set")
    budget = max_refine if max_refine is not None else max_refine_budget()
    checker = _PairChecker(budget)

    for u, v in edges:
        if start[u] == start[v] or end[u] == end[v]:
            raise MorphStepError(f"edge ({u},{v}) degenerate at a keyframe")

    cert = StepCertificate()

    def record(key: tuple, tag: str) -> None:
        if collect_evidence:
            cert.evidence[key] = tag

    # ----- vertex-vertex coincidences --------------------------------------
    for u in range(n):
        for w in range(u + 1, n):
            hit = _check_vertex_vertex(start, end, u, w)
            if hit is not None:
                return Violation(
                    "vertex-vertex", (u, w), (hit, hit), hit,
                    f"vertices {u} and {w} coincide at t={hit}",
                )
            record(("vv", u, w), SEPARATED)

    adjacency = {tuple(sorted(e)) for e in edges}

    # ----- vertex-edge contacts --------------------------------------------
    for j, (a, b) in enumerate(edges):
        for w in range(n):
            if w == a or w == b:
                continue
            if _boxes_disjoint(start, end, (w,), (a, b)):
                record(("ve", w, j), SEPARATED)
                continue
            result = _check_vertex_edge(start, end, w, (a, b), checker)
            if result is not None:
                return Violation(
                    "vertex-edge", (w, (a, b)), result[0], result[1],
                    f"vertex {w} touches edge ({a},{b})",
                )
            record(("ve", w, j), SEPARATED)

    # ----- edge-edge --------------------------------------------------------
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            e1, e2 = edges[i], edges[j]
            shared = set(e1) & set(e2)
            if len(shared) == 1:
                s = shared.pop()
                far1 = e1[0] if e1[1] == s else e1[1]
                far2 = e2[0] if e2[1] == s else e2[1]
                result = _check_adjacent(start, end, s, far1, far2, checker)
                if result is not None:
                    return Violation(
                        "edge-edge", (e1, e2), result[0], result[1],
                        f"adjacent edges ({e1},{e2}) overlap beyond the shared endpoint",
                    )
                record(("ee", i, j), ADJACENT_OK)
                continue
            if _boxes_disjoint(start, end, e1, e2):
                record(("ee", i, j), SEPARATED)
                continue
            result = _check_edge_edge(start, end, e1, e2, checker)
            if result is None:
                record(("ee", i, j), SEPARATED)
            elif result == "coplanar-ok":
                record(("ee", i, j), COPLANAR_OK)
            else:
                return Violation(
                    "edge-edge", (e1, e2), result[0], result[1],
                    f"edges {e1} and {e2} cross",
                )

    cert.refinement_depth = checker.depth_used
    return cert


def _boxes_disjoint(start, end, vs1, vs2) -> bool:
    """Sound prefilter: the swept hulls live inside the bounding boxes of the
    endpoint positions; disjoint boxes mean no contact at any time."""
    def box(vs):
        pts = [start[v] for v in vs] + [end[v] for v in vs]
        xs = [p.x for p in pts]
        ys = [p.y for p in pts]
        zs = [p.z for p in pts]
        return (min(xs), max(xs), min(ys), max(ys), min(zs), max(zs))

    b1, b2 = box(vs1), box(vs2)
    return (
        b1[1] < b2[0] or b2[1] < b1[0]
        or b1[3] < b2[2] or b2[3] < b1[2]
        or b1[5] < b2[4] or b2[5] < b1[4]
    )


def _check_vertex_vertex(start, end, u, w):
    """Earliest t in [0,1] with identical positions, else None (exact)."""
    diffs = []
    for axis in range(3):
        a0 = _axis(start[u], axis) - _axis(start[w], axis)
        a1 = (_axis(end[u], axis) - _axis(end[w], axis)) - a0
        diffs.append((a0, a1))
    candidates: Optional[list[Rat]] = None  # None = all t
    for a0, a1 in diffs:
        if a0 == 0 and a1 == 0:
            continue
        if a1 == 0:
            return None  # this axis never vanishes
        root = Fraction(-a0, a1)
        if root < 0 or root > 1:
            return None  # the only compatible time lies outside [0,1]
        if candidates is None:
            candidates = [root]
        elif root not in candidates:
            return None
    if candidates is None:
        return Fraction(0)  # identical trajectories
    return candidates[0]


def _axis(p: Point3, axis: int) -> Rat:
    return (p.x, p.y, p.z)[axis]


def _check_vertex_edge(start, end, w, edge, checker: _PairChecker):
    a, b = edge
    t = _int_trajectories([(start[w], end[w]), (start[a], end[a]), (start[b], end[b])])
    tw, ta, tb = t
    d = _vec_sub(tb, ta)
    x = _vec_sub(tw, ta)
    Mve = _assert_degree(_sq_norm(_vec_cross(x, d)), 4)
    L = _sq_norm(d)
    pp = _vec_dot(x, d)
    qq = P.sub(L, pp)
    W2 = _sq_norm(x)

    def contact_at(tau) -> bool:
        if not isinstance(tau, AlgebraicNumber):
            return static_point_on_segment(_at(tw, tau), _at(ta, tau), _at(tb, tau))
        sL = checker.sign_at(L, tau)
        if sL == 0:
            return checker.sign_at(W2, tau) == 0
        return (
            checker.sign_at(Mve, tau) == 0
            and checker.sign_at(pp, tau) >= 0
            and checker.sign_at(qq, tau) >= 0
        )

    if not P.is_zero(Mve):
        hits = isolate_int_roots(Mve, _ZERO, _ONE)
        for root in hits:
            tau = root.value if root.value is not None else root
            if contact_at(tau):
                iv = (root.value, root.value) if root.value is not None else (root.lo, root.hi)
                return iv, root.value
        return None
    # always collinear: scan roots and gaps of the range polynomials
    for kind, tau in _critical_times([pp, qq, L, W2]):
        arg = tau if kind == "gap" else (tau.value if tau.value is not None else tau)
        if contact_at(arg):
            if kind == "gap":
                return (arg, arg), arg
            iv = (tau.value, tau.value) if tau.value is not None else (tau.lo, tau.hi)
            return iv, tau.value
    return None


def _check_adjacent(start, end, shared, far1, far2, checker: _PairChecker):
    t = _int_trajectories([(start[shared], end[shared]), (start[far1], end[far1]), (start[far2], end[far2])])
    ts, t1, t2 = t
    d1 = _vec_sub(t1, ts)
    d2 = _vec_sub(t2, ts)
    N = _sq_norm(_vec_cross(d1, d2))
    D = _vec_dot(d1, d2)
    if not P.is_zero(N):
        for root in isolate_int_roots(N, _ZERO, _ONE):
            tau = root.value if root.value is not None else root
            if isinstance(tau, AlgebraicNumber):
                sD = checker.sign_at(D, tau)
            else:
                sD = sign_at_rational(D, tau)
            if sD > 0:
                iv = (root.value, root.value) if root.value is not None else (root.lo, root.hi)
                return iv, root.value
        return None
    # permanently parallel: overlap whenever the dot product is positive
    deg = P.degree(D)
    if P.is_zero(D):
        return None
    if sign_at_rational(D, _ZERO) > 0:
        return (_ZERO, _ZERO), _ZERO
    if sign_at_rational(D, _ONE) > 0:
        return (_ONE, _ONE), _ONE
    if deg == 2 and D[2] < 0:
        vertex = Fraction(-D[1], 2 * D[2])
        if 0 < vertex < 1 and sign_at_rational(D, vertex) > 0:
            return (vertex, vertex), vertex
    if deg == 2 and D[2] > 0:
        pass  # max at endpoints, already tested
    if deg == 1:
        pass  # monotone, endpoints suffice
    return None


def _check_edge_edge(start, end, e1, e2, checker: _PairChecker):
    """None = separated; "coplanar-ok" = always coplanar but never touching;
    otherwise ((lo, hi), witness) evidence of contact."""
    a, b = e1
    c, d = e2
    t = _int_trajectories([(start[a], end[a]), (start[b], end[b]), (start[c], end[c]), (start[d], end[d])])
    polys = _edge_polys(t[0], t[1], t[2], t[3])

    def static_at(tau: Rat) -> bool:
        return static_segments_intersect(_at(t[0], tau), _at(t[1], tau), _at(t[2], tau), _at(t[3], tau))

    F = polys["F"]
    if not P.is_zero(F):
        for root in isolate_int_roots(F, _ZERO, _ONE):
            if root.value is not None:
                if static_at(root.value):
                    return (root.value, root.value), root.value
            else:
                if checker.ee_contact_at(polys, root):
                    return (root.lo, root.hi), None
        return None

    # identically coplanar: contact indicator changes only at roots of the family
    family = [
        polys["N"], polys["A"], polys["NA"], polys["B"], polys["NB"],
        polys["M"], polys["p"], polys["q"], polys["Lp"], polys["Lq"],
        polys["L1"], polys["L2"],
    ]
    for kind, tau in _critical_times(family):
        if kind == "gap":
            if static_at(tau):
                return (tau, tau), tau
        else:
            if tau.value is not None:
                if static_at(tau.value):
                    return (tau.value, tau.value), tau.value
            elif checker.ee_contact_at(polys, tau):
                return (tau.lo, tau.hi), None
    return "coplanar-ok"


# -- whole-morph verification ----------------------------------------------

@dataclass
class MorphReport:
    ok: bool
    steps: int
    failures: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    def summary(self) -> str:
        if self.ok:
            return f"PASS: {self.steps} certified steps"
        lines = [f"FAIL: {len(self.failures)} problem(s) over {self.steps} steps"]
        lines += [f"  - {f}" for f in self.failures]
        return "\n".join(lines)


def verify_morph(morph, start=None, end=None, *, max_refine: Optional[int] = None) -> MorphReport:
    """Re-check a whole morph: endpoint equality, flat (z=0) endpoints,
    planarity of the first and last keyframes, and a certificate per step."""
    from .plane_graph import check_drawing_planar, Drawing2D

    report = MorphReport(ok=True, steps=max(len(morph.keyframes) - 1, 0))

    def fail(msg: str) -> None:
        report.ok = False
        report.failures.append(msg)

    if not morph.keyframes:
        fail("morph has no keyframes")
        return report

    first, last = morph.keyframes[0], morph.keyframes[-1]
    for name, frame in (("first", first), ("last", last)):
        if any(p.z != 0 for p in frame):
            fail(f"{name} keyframe does not lie in z=0")

    def drawing_matches(frame, drawing, name):
        coords = tuple(p.drop() for p in frame)
        if drawing is not None and coords != tuple(drawing.coords):
            fail(f"{name} keyframe differs from the prescribed drawing")

    drawing_matches(first, start, "first")
    drawing_matches(last, end, "last")

    for name, frame in (("first", first), ("last", last)):
        if all(p.z == 0 for p in frame):
            d = Drawing2D(morph.graph, tuple(p.drop() for p in frame))
            issues = check_drawing_planar(d)
            if issues:
                fail(f"{name} keyframe is not a planar drawing: {issues[0]}")

    for idx, (A, B) in enumerate(zip(morph.keyframes, morph.keyframes[1:])):
        try:
            result = verify_linear_step(morph.graph, A, B, max_refine=max_refine, collect_evidence=False)
        except (VerificationUndecided, MorphStepError) as exc:
            fail(f"step {idx}: {exc}")
            continue
        if isinstance(result, Violation):
            report.violations.append((idx, result))
            fail(f"step {idx}: {result.kind} {result.pair} in t-interval {result.interval}")
    return report


# -- sampling oracle (tests only) -------------------------------------------

@dataclass
class OracleReport:
    ok: bool
    contacts: list = field(default_factory=list)  # (kind, pair, k, samples)


def sample_oracle(graph, start: Keyframe, end: Keyframe, samples: int) -> OracleReport:
    """Exact static segment-pair intersection tests at times k/samples.

    A float bounding-box prefilter (with a conservative error margin) selects
    candidate (pair, time) events; every flagged event is then decided with
    exact rational arithmetic.  A pass here does not certify anything; the
    oracle exists to cross-check :func:`verify_linear_step` in tests.
    """
    import numpy as np

    if samples < 2:
        raise ValueError("samples must be at least 2")
    n = graph.n
    edges = graph.edges
    A = np.array([[float(p.x), float(p.y), float(p.z)] for p in start])
    B = np.array([[float(p.x), float(p.y), float(p.z)] for p in end])
    ts = np.linspace(0.0, 1.0, samples + 1)
    # positions: (n, 3, S)
    pos = A[:, :, None] + (B - A)[:, :, None] * ts[None, None, :]
    scale = max(1.0, np.abs(pos).max())
    margin = scale * 2.0 ** -28

    lo = np.minimum(pos[[e[0] for e in edges]], pos[[e[1] for e in edges]]) - margin
    hi = np.maximum(pos[[e[0] for e in edges]], pos[[e[1] for e in edges]]) + margin

    report = OracleReport(ok=True)

    def exact_positions(v: int, k: int):
        tau = Fraction(k, samples)
        p0, p1 = start[v], end[v]
        return (
            p0.x + (p1.x - p0.x) * tau,
            p0.y + (p1.y - p0.y) * tau,
            p0.z + (p1.z - p0.z) * tau,
        )

    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            e1, e2 = edges[i], edges[j]
            shared = set(e1) & set(e2)
            if len(shared) == 1:
                s = shared.pop()
                f1 = e1[0] if e1[1] == s else e1[1]
                f2 = e2[0] if e2[1] == s else e2[1]
                d1 = pos[f1] - pos[s]
                d2 = pos[f2] - pos[s]
                cr = np.cross(d1.T, d2.T)
                nn = (cr * cr).sum(axis=1)
                dd = (d1 * d2).sum(axis=0)
                tol = 64 * margin * margin + (np.abs(d1).max() + np.abs(d2).max()) ** 2 * 2.0 ** -40
                candidates = np.nonzero((nn <= tol) & (dd > -tol))[0]
                for k in candidates:
                    ps = exact_positions(s, int(k))
                    if static_segments_touch_beyond_shared(
                        ps, exact_positions(f1, int(k)), exact_positions(f2, int(k))
                    ):
                        report.ok = False
                        report.contacts.append(("adjacent", (e1, e2), int(k), samples))
                        break
                continue
            overlap = ~(
                (hi[i, 0] < lo[j, 0]) | (hi[j, 0] < lo[i, 0])
                | (hi[i, 1] < lo[j, 1]) | (hi[j, 1] < lo[i, 1])
                | (hi[i, 2] < lo[j, 2]) | (hi[j, 2] < lo[i, 2])
            )
            for k in np.nonzero(overlap)[0]:
                if static_segments_intersect(
                    exact_positions(e1[0], int(k)), exact_positions(e1[1], int(k)),
                    exact_positions(e2[0], int(k)), exact_positions(e2[1], int(k)),
                ):
                    report.ok = False
                    report.contacts.append(("edge-edge", (e1, e2), int(k), samples))
                    break
    return report
