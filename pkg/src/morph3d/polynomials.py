"""Univariate polynomials over the rationals with exact real-root isolation.

The isolation machinery works on primitive integer coefficient lists
(low degree first); rational inputs are cleared of denominators up front.
Roots are located with Sturm sequences and interval bisection: rational
roots discovered on the way are split off by exact deflation, so every
returned isolating interval contains exactly one distinct real root.  Signs
of other polynomials at an isolated (possibly irrational) root are decided
exactly through gcd tests plus interval refinement, which is what the
collision verifier builds on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .geometry import Rat, rat

IntPoly = tuple[int, ...]  # coefficients, low degree first, stripped

MAX_POLY_DEGREE = 6


class RefinementExhausted(Exception):
    """Raised when interval refinement hits its depth budget undecided."""


# -- integer coefficient helpers ------------------------------------------

def strip(coeffs: Sequence[int]) -> IntPoly:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(f: IntPoly) -> int:
    return len(f) - 1


def is_zero(f: IntPoly) -> bool:
    return len(f) == 0


def add(f: IntPoly, g: IntPoly) -> IntPoly:
    n = max(len(f), len(g))
    return strip([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def neg(f: IntPoly) -> IntPoly:
    return tuple(-c for c in f)


def sub(f: IntPoly, g: IntPoly) -> IntPoly:
    return add(f, neg(g))


def mul(f: IntPoly, g: IntPoly) -> IntPoly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return strip(out)


def derivative(f: IntPoly) -> IntPoly:
    return strip([i * f[i] for i in range(1, len(f))])


def content(f: IntPoly) -> int:
    g = 0
    for c in f:
        g = math.gcd(g, abs(c))
    return g


def primitive(f: IntPoly) -> IntPoly:
    if not f:
        return f
    g = content(f)
    if g <= 1:
        return f
    return tuple(c // g for c in f)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def eval_at(f: IntPoly, t: Rat) -> Rat:
    acc = Fraction(0)
    for c in reversed(f):
        acc = acc * t + c
    return acc


def sign_at_rational(f: IntPoly, t: Rat) -> int:
    """Exact sign of f(a/b): integer Horner on the homogenized form
    sum c_i a^i b^(n-i)."""
    if not f:
        return 0
    a, b = t.numerator, t.denominator
    acc = f[-1]
    bpow = 1
    for c in reversed(f[:-1]):
        bpow *= b
        acc = acc * a + c * bpow
    return _sign(acc)


def _frac_rem(p: list[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    p = p[:]
    while len(p) >= len(q) and p:
        coef = p[-1] / q[-1]
        shift = len(p) - len(q)
        for i in range(len(q)):
            p[shift + i] -= coef * q[i]
        while p and p[-1] == 0:
            p.pop()
    return p


def _clear_denominators(coeffs: Sequence[Fraction]) -> IntPoly:
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = strip([int(c * den) for c in coeffs])
    ints = primitive(ints)
    if ints and ints[-1] < 0:
        ints = neg(ints)
    return ints


def poly_gcd(f: IntPoly, g: IntPoly) -> IntPoly:
    """Primitive gcd over Q, sign-normalized to a positive leading coefficient."""
    if is_zero(f):
        return primitive(g)
    if is_zero(g):
        return primitive(f)
    a = [Fraction(c) for c in f]
    b = [Fraction(c) for c in g]
    while b:
        a, b = b, _frac_rem(a, b)
    return _clear_denominators(a)


def _exact_div(f: IntPoly, g: IntPoly) -> IntPoly:
    """f / g for an exact divisor g, normalized to integers."""
    num = [Fraction(c) for c in f]
    div = [Fraction(c) for c in g]
    out = [Fraction(0)] * max(len(num) - len(div) + 1, 0)
    while len(num) >= len(div) and num:
        coef = num[-1] / div[-1]
        shift = len(num) - len(div)
        out[shift] = coef
        for i in range(len(div)):
            num[shift + i] -= coef * div[i]
        while num and num[-1] == 0:
            num.pop()
    assert not num, "division was not exact"
    return _clear_denominators(out)


def squarefree_part(f: IntPoly) -> IntPoly:
    if degree(f) <= 0:
        return primitive(f)
    g = poly_gcd(f, derivative(f))
    if degree(g) == 0:
        out = primitive(f)
        return neg(out) if out[-1] < 0 else out
    return _exact_div(f, g)


def deflate_rational_root(f: IntPoly, r: Rat) -> IntPoly:
    """Divide f by (q t - p) for the known rational root r = p/q."""
    factor = strip([-r.numerator, r.denominator])
    return _exact_div(f, factor)


def _scaled_ints(coeffs: Sequence[Fraction]) -> IntPoly:
    """Clear denominators only (scale by a positive constant, keep signs)."""
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return primitive(strip([int(c * den) for c in coeffs]))


def sturm_chain(f: IntPoly) -> list[IntPoly]:
    chain = [primitive(f), primitive(derivative(f))]
    while chain[-1]:
        p, q = chain[-2], chain[-1]
        rem = _frac_rem([Fraction(c) for c in p], [Fraction(c) for c in q])
        chain.append(_scaled_ints([-c for c in rem]) if rem else ())
    chain.pop()
    return chain


def _variations(signs: Sequence[int]) -> int:
    count = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def count_roots_open(chain: Sequence[IntPoly], lo: Rat, hi: Rat) -> int:
    """Distinct real roots of the chain's head in (lo, hi); the head must not
    vanish at either endpoint."""
    va = _variations([sign_at_rational(p, lo) for p in chain])
    vb = _variations([sign_at_rational(p, hi) for p in chain])
    return va - vb


@dataclass(frozen=True)
class AlgebraicNumber:
    """A real root of a squarefree integer polynomial.

    Rational roots carry ``value``; irrational ones carry an open isolating
    interval (lo, hi) on which ``poly`` changes sign and has exactly one root.
    """

    poly: IntPoly
    lo: Rat
    hi: Rat
    value: Optional[Rat] = None

    @property
    def is_rational(self) -> bool:
        return self.value is not None

    def midpoint(self) -> Rat:
        if self.value is not None:
            return self.value
        return (self.lo + self.hi) / 2

    def width(self) -> Rat:
        if self.value is not None:
            return Fraction(0)
        return self.hi - self.lo

    def refined(self, max_steps: int = 1) -> "AlgebraicNumber":
        if self.value is not None:
            return self
        lo, hi = self.lo, self.hi
        slo = sign_at_rational(self.poly, lo)
        for _ in range(max_steps):
            mid = (lo + hi) / 2
            sm = sign_at_rational(self.poly, mid)
            if sm == 0:
                return AlgebraicNumber(self.poly, mid, mid, mid)
            if sm == slo:
                lo = mid
            else:
                hi = mid
        return AlgebraicNumber(self.poly, lo, hi)


def isolate_int_roots(f: IntPoly, lo: Rat, hi: Rat) -> list[AlgebraicNumber]:
    """Disjoint isolation of all distinct real roots of f in [lo, hi]."""
    if is_zero(f):
        raise ValueError("cannot isolate roots of the zero polynomial")
    g = squarefree_part(f)
    rational_roots: list[Rat] = []

    def take_rational(r: Rat) -> None:
        nonlocal g
        rational_roots.append(r)
        g = deflate_rational_root(g, r)

    if degree(g) >= 1 and sign_at_rational(g, lo) == 0:
        take_rational(lo)
    if hi != lo and degree(g) >= 1 and sign_at_rational(g, hi) == 0:
        take_rational(hi)

    roots = [AlgebraicNumber(strip([-r.numerator, r.denominator]), r, r, r) for r in rational_roots]
    if hi == lo or degree(g) < 1:
        roots.sort(key=lambda r: r.midpoint())
        return roots

    while True:
        # restart after any deflation so the Sturm chain matches g
        chain = sturm_chain(g)
        total = count_roots_open(chain, lo, hi)
        if total == 0:
            break
        found_rational = False
        intervals: list[tuple[Rat, Rat]] = []
        stack = [(lo, hi, total)]
        while stack:
            a, b, k = stack.pop()
            if k <= 0:
                continue
            if k == 1 and sign_at_rational(g, a) * sign_at_rational(g, b) < 0:
                intervals.append((a, b))
                continue
            mid = (a + b) / 2
            if sign_at_rational(g, mid) == 0:
                take_rational(mid)
                roots.append(AlgebraicNumber(strip([-mid.numerator, mid.denominator]), mid, mid, mid))
                found_rational = True
                break
            stack.append((a, mid, count_roots_open(chain, a, mid)))
            stack.append((mid, b, count_roots_open(chain, mid, b)))
        if found_rational:
            if degree(g) < 1:
                break
            continue
        for a, b in intervals:
            roots.append(AlgebraicNumber(g, a, b))
        break

    roots.sort(key=lambda r: r.midpoint())
    return roots


def refine_disjoint(roots: list[AlgebraicNumber]) -> list[AlgebraicNumber]:
    """Refine isolating intervals until pairwise disjoint.

    Callers must guarantee the underlying roots are pairwise distinct
    (e.g. roots of one squarefree polynomial, or of a gcd-free basis).
    """
    roots = list(roots)
    changed = True
    while changed:
        changed = False
        for i in range(len(roots)):
            for j in range(len(roots)):
                if i == j:
                    continue
                a, b = roots[i], roots[j]
                alo = a.value if a.value is not None else a.lo
                ahi = a.value if a.value is not None else a.hi
                blo = b.value if b.value is not None else b.lo
                bhi = b.value if b.value is not None else b.hi
                if ahi <= blo or bhi <= alo:
                    continue
                if a.value is not None and b.value is not None:
                    raise ValueError("coincident rational roots in refine_disjoint")
                roots[i] = a.refined(4)
                roots[j] = b.refined(4)
                changed = True
        roots.sort(key=lambda r: r.midpoint())
    return roots


def sign_at_algebraic(f: IntPoly, root: AlgebraicNumber, max_refine: int = 128) -> int:
    """Exact sign of f at an algebraic number."""
    if is_zero(f):
        return 0
    if root.value is not None:
        return sign_at_rational(f, root.value)
    g = root.poly
    h = poly_gcd(g, f)
    if degree(h) >= 1:
        sa = sign_at_rational(h, root.lo)
        sb = sign_at_rational(h, root.hi)
        assert sa != 0 and sb != 0, "isolating interval endpoint is a root"
        if sa * sb < 0:
            return 0
    fs = squarefree_part(f)
    chain = sturm_chain(fs) if degree(fs) >= 1 else None
    cur = root
    for _ in range(max_refine):
        if chain is None:
            return _sign(f[0]) if f else 0
        sa = sign_at_rational(f, cur.lo)
        if sa != 0 and sa == sign_at_rational(f, cur.hi) and count_roots_open(chain, cur.lo, cur.hi) == 0:
            return sa
        cur = cur.refined(1)
        if cur.value is not None:
            return sign_at_rational(f, cur.value)
    raise RefinementExhausted(f"sign undecided after {max_refine} refinements")


def gcd_free_basis(polys: Sequence[IntPoly]) -> list[IntPoly]:
    """Pairwise-coprime squarefree polynomials covering the union of the
    inputs' root sets.  Identically-zero inputs are skipped."""
    basis: list[IntPoly] = []
    pending = [squarefree_part(p) for p in polys if not is_zero(p)]
    pending = [p for p in pending if degree(p) >= 1]
    while pending:
        f = pending.pop()
        placed = False
        for i, g in enumerate(basis):
            h = poly_gcd(f, g)
            if degree(h) >= 1:
                basis[i] = h
                gq = _exact_div(g, h)
                if degree(gq) >= 1:
                    pending.append(gq)
                fq = _exact_div(f, h)
                if degree(fq) >= 1:
                    pending.append(fq)
                placed = True
                break
        if not placed:
            basis.append(f)
    return basis


# -- the public rational polynomial type ----------------------------------

@dataclass(frozen=True)
class RatPoly:
    """Rational polynomial, low degree first, degree at most 6.

    Carrier for the verifier's coplanarity and contact polynomials in the
    morph time parameter t.
    """

    coeffs: tuple[Rat, ...]

    def __post_init__(self) -> None:
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(Fraction(x) for x in c))
        if self.degree > MAX_POLY_DEGREE:
            raise ValueError(f"degree {self.degree} exceeds the bound {MAX_POLY_DEGREE}")

    @staticmethod
    def of(*coeffs) -> "RatPoly":
        return RatPoly(tuple(rat(c) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "RatPoly") -> "RatPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly(tuple(
            (self.coeffs[i] if i < len(self.coeffs) else Fraction(0))
            + (other.coeffs[i] if i < len(other.coeffs) else Fraction(0))
            for i in range(n)
        ))

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + RatPoly(tuple(-c for c in other.coeffs))

    def __mul__(self, other: "RatPoly") -> "RatPoly":
        if self.is_zero or other.is_zero:
            return RatPoly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(tuple(out))

    def __call__(self, t) -> Rat:
        t = rat(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def to_int_poly(self) -> IntPoly:
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return strip([int(c * den) for c in self.coeffs])


@dataclass(frozen=True)
class RootIsolation:
    """Result of isolating the real roots of a polynomial on an interval."""

    identically_zero: bool
    roots: tuple[AlgebraicNumber, ...]

    def intervals(self) -> tuple[tuple[Rat, Rat], ...]:
        return tuple(
            (r.value, r.value) if r.value is not None else (r.lo, r.hi) for r in self.roots
        )


DEFAULT_REFINE_WIDTH = Fraction(1, 2 ** 64)


def isolate_real_roots(f: RatPoly, lo, hi, refine_width: Optional[Rat] = None) -> RootIsolation:
    """Isolate the distinct real roots of f in the closed interval [lo, hi].

    An identically zero polynomial is reported as a distinguished outcome
    rather than an interval list.  Intervals can be refined to any width.
    """
    lo, hi = rat(lo), rat(hi)
    if hi < lo:
        raise ValueError("empty interval")
    if f.is_zero:
        return RootIsolation(True, ())
    roots = isolate_int_roots(f.to_int_poly(), lo, hi)
    if len(roots) > 1:
        roots = refine_disjoint(roots)
    if refine_width is not None:
        refined = []
        for r in roots:
            while r.value is None and (r.hi - r.lo) > refine_width:
                r = r.refined(1)
            refined.append(r)
        roots = refined
    return RootIsolation(False, tuple(roots))
