"""Integer and F_p polynomial helpers for monic cubics.

Polynomials are coefficient lists, lowest degree first.  Everything here is
exact: Python integers, Fractions, or residues mod p.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

Poly = list  # low -> high


def trim(f: Sequence) -> list:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f: Sequence) -> int:
    return len(trim(f)) - 1


def cubic_coeffs(a: int, b: int, c: int) -> list[int]:
    """x^3 + a x^2 + b x + c as a low-first list."""
    return [c, b, a, 1]


def cubic_discriminant(a: int, b: int, c: int) -> int:
    return 18 * a * b * c - 4 * a ** 3 * c + a ** 2 * b ** 2 - 4 * b ** 3 - 27 * c ** 2


def evaluate(f: Sequence, x):
    acc = 0
    for coef in reversed(f):
        acc = acc * x + coef
    return acc


def derivative(f: Sequence) -> list:
    return [i * f[i] for i in range(1, len(f))]


# ---------------------------------------------------------------- over Q

def _divmod_q(f: Sequence, g: Sequence) -> tuple[list, list]:
    f = [Fraction(v) for v in trim(f)]
    g = [Fraction(v) for v in trim(g)]
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 1)
    while len(f) >= len(g) and f:
        shift = len(f) - len(g)
        factor = f[-1] / g[-1]
        q[shift] = factor
        for i, gc in enumerate(g):
            f[i + shift] -= factor * gc
        f = trim(f)
    return trim(q), f


def sturm_sequence(f: Sequence) -> list[list]:
    seq = [[Fraction(v) for v in trim(f)], [Fraction(v) for v in derivative(trim(f))]]
    while trim(seq[-1]) and degree(seq[-1]) > 0:
        _, rem = _divmod_q(seq[-2], seq[-1])
        if not rem:
            break
        seq.append([-v for v in rem])
    return seq


def _sign_changes(values) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def _changes_at(seq, x) -> int:
    return _sign_changes([evaluate(p, x) for p in seq])


def _changes_at_infinity(seq, sign: int) -> int:
    vals = []
    for p in seq:
        p = trim(p)
        lead = p[-1]
        vals.append(lead if (sign > 0 or (len(p) - 1) % 2 == 0) else -lead)
    return _sign_changes(vals)


def count_real_roots(f: Sequence) -> int:
    """Number of distinct real roots, by Sturm's theorem."""
    seq = sturm_sequence(f)
    return _changes_at_infinity(seq, -1) - _changes_at_infinity(seq, +1)


def cauchy_bound(f: Sequence) -> int:
    f = trim(f)
    lead = abs(f[-1])
    return 1 + math.ceil(max(abs(Fraction(v)) for v in f[:-1]) / lead) if len(f) > 1 else 1


def isolate_real_roots(f: Sequence, precision: float = 1e-12) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (lo, hi], one per real root, each of width <= precision.

    Roots must be simple (squarefree input).  Intervals come out in increasing order.
    """
    f = trim([int(v) for v in f])
    seq = sturm_sequence(f)
    B = Fraction(cauchy_bound(f))
    stack = [(-B, B)]
    isolated = []
    while stack:
        lo, hi = stack.pop()
        n = _changes_at(seq, lo) - _changes_at(seq, hi)
        if n == 0:
            continue
        if n == 1:
            isolated.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    isolated.sort()
    eps = Fraction(precision)
    out = []
    for lo, hi in isolated:
        # root in (lo, hi]; refine with exact sign tests
        if evaluate(f, hi) == 0:
            out.append((hi, hi))
            continue
        s_hi = evaluate(f, hi) > 0
        while hi - lo > eps:
            mid = (lo + hi) / 2
            v = evaluate(f, mid)
            if v == 0:
                lo = hi = mid
                break
            if (v > 0) == s_hi:
                hi = mid
            else:
                lo = mid
        out.append((lo, hi))
    return out


def polished_roots(f: Sequence, intervals) -> list[float]:
    """Float roots, Newton-polished and clamped to their certified intervals."""
    fp = derivative(f)
    out = []
    for lo, hi in intervals:
        x = float((lo + hi) / 2)
        lo_f, hi_f = float(lo), float(hi)
        for _ in range(3):
            d = float(evaluate(fp, x))
            if d == 0:
                break
            x_new = x - float(evaluate(f, x)) / d
            if not (lo_f <= x_new <= hi_f):
                break
            x = x_new
        out.append(x)
    return out


def has_rational_root(f: Sequence) -> bool:
    """Monic integer polynomial: any rational root is an integer dividing f(0)."""
    f = trim([int(v) for v in f])
    c0 = f[0]
    if c0 == 0:
        return True
    for d in _divisors(abs(c0)):
        if evaluate(f, d) == 0 or evaluate(f, -d) == 0:
            return True
    return False


def _divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization of |n|."""
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return [int(v) for v in np.flatnonzero(sieve)]


# ---------------------------------------------------------------- over F_p

def _mod(f: Sequence, p: int) -> list[int]:
    return trim([int(v) % p for v in f])


def mul_mod_p(f: Sequence, g: Sequence, p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return trim(out)


def divmod_mod_p(f: Sequence, g: Sequence, p: int) -> tuple[list[int], list[int]]:
    f = _mod(f, p)
    g = _mod(g, p)
    if not g:
        raise ZeroDivisionError("division by zero polynomial mod p")
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 1)
    while len(f) >= len(g) and f:
        shift = len(f) - len(g)
        factor = f[-1] * inv % p
        q[shift] = factor
        for i, gc in enumerate(g):
            f[i + shift] = (f[i + shift] - factor * gc) % p
        f = trim(f)
    return trim(q), f


def gcd_mod_p(f: Sequence, g: Sequence, p: int) -> list[int]:
    f, g = _mod(f, p), _mod(g, p)
    while g:
        _, r = divmod_mod_p(f, g, p)
        f, g = g, r
    if not f:
        return []
    inv = pow(f[-1], -1, p)
    return [v * inv % p for v in f]


def roots_mod_p(f: Sequence, p: int) -> list[int]:
    """All roots in F_p (by exhaustive evaluation, fine for the small p used here)."""
    f = _mod(f, p)
    if not f:
        raise ValueError("zero polynomial mod p")
    xs = np.arange(p, dtype=object)
    acc = np.zeros(p, dtype=object)
    for coef in reversed(f):
        acc = (acc * xs + coef) % p
    return [int(x) for x in np.flatnonzero(acc == 0)]


def factor_mod_p(f: Sequence, p: int) -> list[tuple[tuple[int, ...], int]]:
    """Factor a monic polynomial of degree <= 3 over F_p.

    Returns [(monic factor low-first, multiplicity)], sorted by (degree, coefficients).
    """
    f = _mod(f, p)
    if degree(f) > 3:
        raise ValueError("only polynomials of degree <= 3 are supported")
    if not f or f[-1] != 1:
        raise ValueError("expected a monic polynomial mod p")
    factors: dict[tuple[int, ...], int] = {}
    rest = f
    for r in roots_mod_p(f, p):
        lin = [(-r) % p, 1]
        while degree(rest) >= 1:
            q, rem = divmod_mod_p(rest, lin, p)
            if rem:
                break
            factors[tuple(lin)] = factors.get(tuple(lin), 0) + 1
            rest = q
    if degree(rest) >= 1:
        # no roots left, degree 2 or 3: irreducible
        factors[tuple(rest)] = factors.get(tuple(rest), 0) + 1
    return sorted(factors.items(), key=lambda kv: (len(kv[0]), kv[0]))


def dedekind_is_maximal(f: Sequence, p: int) -> bool:
    """Dedekind criterion: is Z[x]/(f) maximal at p?"""
    f = trim([int(v) for v in f])
    fac = factor_mod_p(f, p)
    g = [1]
    h = [1]
    for t, e in fac:
        g = _poly_mul_z(g, list(t))
        for _ in range(e - 1):
            h = _poly_mul_z(h, list(t))
    gh = _poly_mul_z(g, h)
    diff = [(gh[i] if i < len(gh) else 0) - (f[i] if i < len(f) else 0)
            for i in range(max(len(gh), len(f)))]
    if any(v % p for v in diff):
        raise ArithmeticError("factorization mod p does not reproduce f")
    F = [v // p for v in diff]
    z = gcd_mod_p(gcd_mod_p(F, g, p), h, p) if _mod(F, p) else gcd_mod_p(g, h, p)
    return degree(z) <= 0


def _poly_mul_z(f: Sequence, g: Sequence) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return out
