"""Exact rational solves for the barycentric (Tutte) linear systems.

Small systems go through fraction-free Bareiss elimination.  Larger ones are
solved modulo a batch of word-sized primes with numpy, combined by CRT and
rational reconstruction, and the candidate is then verified by exact
substitution; on any mismatch the prime batch is enlarged, with Bareiss as
the final fallback.  Either way the returned solution is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

Matrix = list[list[Fraction]]


class SingularSystem(ValueError):
    pass


def _clear_rows(rows: Matrix, rhs: Matrix) -> tuple[list[list[int]], list[list[int]]]:
    """Scale each row (equation) to integers."""
    a_out, b_out = [], []
    for row, rrow in zip(rows, rhs):
        den = 1
        for c in list(row) + list(rrow):
            den = den * c.denominator // math.gcd(den, c.denominator)
        a_out.append([int(c * den) for c in row])
        b_out.append([int(c * den) for c in rrow])
    return a_out, b_out


def solve_exact(rows: Matrix, rhs: Matrix) -> Matrix:
    """Solve A x = b for one or more right-hand-side columns, exactly.

    ``rows`` is a square matrix, ``rhs`` holds one row per equation (so the
    k-th unknown column of the result matches the k-th rhs column).
    """
    k = len(rows)
    if k == 0:
        return []
    if any(len(r) != k for r in rows):
        raise ValueError("matrix is not square")
    a_int, b_int = _clear_rows(rows, rhs)
    if k <= 24:
        return _bareiss(a_int, b_int)
    sol = _modular_solve(a_int, b_int)
    if sol is not None:
        return sol
    return _bareiss(a_int, b_int)


def _bareiss(a: list[list[int]], b: list[list[int]]) -> Matrix:
    """Fraction-free Gaussian elimination, then back substitution over Q."""
    k = len(a)
    r = len(b[0]) if b else 0
    m = [row[:] + brow[:] for row, brow in zip(a, b)]
    sign = 1
    prev = 1
    for col in range(k):
        piv = None
        for i in range(col, k):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            raise SingularSystem("singular system (zero pivot column)")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        pv = m[col][col]
        for i in range(col + 1, k):
            mi, mc = m[i], m[col]
            fi = mi[col]
            for j in range(col + 1, k + r):
                mi[j] = (pv * mi[j] - fi * mc[j]) // prev
            mi[col] = 0
        prev = pv
    out = [[Fraction(0)] * r for _ in range(k)]
    for col in range(r):
        for i in range(k - 1, -1, -1):
            acc = Fraction(m[i][k + col])
            for j in range(i + 1, k):
                acc -= m[i][j] * out[j][col]
            out[i][col] = acc / m[i][i]
    return out


_PRIMES: list[int] = []


def _primes(count: int) -> list[int]:
    candidate = _PRIMES[-1] - 2 if _PRIMES else (1 << 21) - 1

    def is_prime(x: int) -> bool:
        if x < 2 or x % 2 == 0:
            return x == 2
        f = 3
        while f * f <= x:
            if x % f == 0:
                return False
            f += 2
        return True

    while len(_PRIMES) < count:
        while not is_prime(candidate):
            candidate -= 2
        _PRIMES.append(candidate)
        candidate -= 2
    return _PRIMES[:count]


def _solve_mod_p(a: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    k = a.shape[0]
    m = np.concatenate([a % p, b % p], axis=1).astype(np.int64)
    for col in range(k):
        piv = col + int(np.argmax(m[col:, col] != 0))
        if m[piv, col] % p == 0:
            return None
        if piv != col:
            m[[col, piv]] = m[[piv, col]]
        inv = pow(int(m[col, col]), -1, p)
        m[col] = (m[col] * inv) % p
        factors = m[:, col].copy()
        factors[col] = 0
        nz = np.nonzero(factors)[0]
        if len(nz):
            m[nz] = (m[nz] - factors[nz, None] * m[col][None, :]) % p
    return m[:, k:]


def _rational_reconstruct(r: int, modulus: int) -> Optional[Fraction]:
    bound = math.isqrt(modulus // 2)
    a0, a1 = modulus, r % modulus
    t0, t1 = 0, 1
    while a1 > bound:
        q = a0 // a1
        a0, a1 = a1, a0 - q * a1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    num, den = (a1, t1) if t1 > 0 else (-a1, -t1)
    if math.gcd(abs(num), den) != 1:
        # still a valid representative as long as den stays invertible
        g = math.gcd(abs(num), den)
        num, den = num // g, den // g
    return Fraction(num, den)


def _modular_solve(a: list[list[int]], b: list[list[int]]) -> Optional[Matrix]:
    k = len(a)
    r = len(b[0]) if b else 0
    max_abs = max((abs(x) for row in a for x in row), default=1)
    if max_abs >= (1 << 62):
        return None  # stay exact via Bareiss for huge entries
    a_np = np.array(a, dtype=object)
    b_np = np.array(b, dtype=object)
    # Hadamard-style bit estimate for the determinant
    bits = 0.0
    for row in a:
        s = sum(float(x) * float(x) for x in row) or 1.0
        bits += 0.5 * math.log2(s)
    rhs_bits = math.log2(max((abs(x) for row in b for x in row), default=1) + 1)
    need = int((bits + rhs_bits) / 20) + 4

    residues: list[np.ndarray] = []
    used: list[int] = []
    consumed = 0
    for attempt in range(3):
        want = need * (attempt + 1)
        pool = _primes(want + consumed)
        while len(used) < want and consumed < len(pool):
            p = pool[consumed]
            consumed += 1
            sol = _solve_mod_p(
                np.array([[x % p for x in row] for row in a], dtype=np.int64),
                np.array([[x % p for x in row] for row in b], dtype=np.int64),
                p,
            )
            if sol is None:
                continue  # unlucky prime divides the determinant
            residues.append(sol)
            used.append(p)
        if not used:
            return None
        modulus = 1
        for p in used:
            modulus *= p
        combined = [[0] * r for _ in range(k)]
        for i in range(k):
            for j in range(r):
                x = 0
                for res, p in zip(residues, used):
                    pi = modulus // p
                    x += int(res[i, j]) * pi * pow(pi % p, -1, p)
                combined[i][j] = x % modulus
        out: Matrix = [[Fraction(0)] * r for _ in range(k)]
        ok = True
        for i in range(k):
            for j in range(r):
                f = _rational_reconstruct(combined[i][j], modulus)
                if f is None:
                    ok = False
                    break
                out[i][j] = f
            if not ok:
                break
        if ok and _verify(a, b, out):
            return out
    return None


def _verify(a: list[list[int]], b: list[list[int]], x: Matrix) -> bool:
    k = len(a)
    r = len(b[0]) if b else 0
    for i in range(k):
        row = a[i]
        for j in range(r):
            acc = Fraction(0)
            for t in range(k):
                if row[t]:
                    acc += row[t] * x[t][j]
            if acc != b[i][j]:
                return False
    return True
