"""Totally real cubic fields: records, enumeration by discriminant, splitting at primes."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from pgtlab.chamber import alpha_coords
from pgtlab.numberfield import order, poly


class ReducibleError(ValueError):
    """The polynomial has a rational root."""


class NotMaximalError(ValueError):
    """Z[theta] is not maximal at the prime in question."""


@dataclass(frozen=True, order=True)
class CubicPoly:
    """Monic x^3 + a x^2 + b x + c."""

    a: int
    b: int
    c: int

    @property
    def coeffs(self) -> list[int]:
        return poly.cubic_coeffs(self.a, self.b, self.c)

    @property
    def abc(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def key(self) -> tuple:
        return (abs(self.a), abs(self.b), abs(self.c), self.a, self.b, self.c)

    def __str__(self) -> str:
        def term(coef, mon):
            if coef == 0:
                return ""
            sign = "+" if coef > 0 else "-"
            mag = abs(coef)
            body = mon if (mag == 1 and mon) else (f"{mag}{mon}" if mon else f"{mag}")
            return f" {sign} {body}"
        return "x^3" + term(self.a, "x^2") + term(self.b, "x") + term(self.c, "")


def discriminant(p: CubicPoly) -> int:
    return poly.cubic_discriminant(p.a, p.b, p.c)


def is_irreducible(p: CubicPoly) -> bool:
    return not poly.has_rational_root(p.coeffs)


def _require_irreducible(p: CubicPoly) -> None:
    if not is_irreducible(p):
        raise ReducibleError(f"{p} is reducible over Q")


def is_totally_real(p: CubicPoly) -> bool:
    _require_irreducible(p)
    return poly.count_real_roots(p.coeffs) == 3


def real_embeddings(p: CubicPoly, precision: float = 1e-12) -> list[tuple[Fraction, Fraction]]:
    """Certified disjoint intervals around the real roots, in decreasing order."""
    _require_irreducible(p)
    intervals = poly.isolate_real_roots(p.coeffs, precision)
    return sorted(intervals, reverse=True)


def dedekind_maximal_at_p(p: CubicPoly, prime: int) -> bool:
    _require_irreducible(p)
    return poly.dedekind_is_maximal(p.coeffs, prime)


@dataclass(frozen=True)
class Splitting:
    factors: tuple[tuple[int, int], ...]  # (e, f) per prime above p
    non_decomposed: bool
    f_p: int | None


def splitting_type(p: CubicPoly, prime: int) -> Splitting:
    if not dedekind_maximal_at_p(p, prime):
        raise NotMaximalError(f"Z[theta] is not maximal at {prime} for {p}")
    fac = poly.factor_mod_p(p.coeffs, prime)
    ef = tuple(sorted((e, len(t) - 1) for t, e in fac))
    nd = len(ef) == 1
    return Splitting(ef, nd, ef[0][1] if nd else None)


def c_constant(d: int) -> float:
    """(sqrt 2)^(1-d) * prod_{k=1}^{d-1} 2k(d-k), for d a prime >= 3."""
    if d < 3 or any(d % q == 0 for q in range(2, int(d ** 0.5) + 1)):
        raise ValueError(f"d must be a prime >= 3, got {d}")
    return math.sqrt(2) ** (1 - d) * math.prod(2 * k * (d - k) for k in range(1, d))


@dataclass(frozen=True)
class UnitElement:
    coords: tuple[int, int, int]
    embeddings: tuple[float, float, float]

    @classmethod
    def from_coords(cls, coords: Sequence[int], roots: Sequence[float]) -> "UnitElement":
        coords = order.canonical_sign(tuple(int(v) for v in coords))
        emb = tuple(coords[0] + coords[1] * r + coords[2] * r * r for r in roots)
        return cls(coords, emb)

    @property
    def log_vector(self) -> tuple[float, float, float]:
        return tuple(math.log(abs(e)) for e in self.embeddings)

    @property
    def regular(self) -> bool:
        mags = sorted(abs(e) for e in self.embeddings)
        return all(b > a for a, b in zip(mags, mags[1:])) and self.coords != (1, 0, 0)

    @property
    def alpha(self) -> tuple[float, float]:
        if not self.regular:
            return (0.0, 0.0)
        return alpha_coords(self.embeddings)


UNIT_STATUS = ("none", "candidate", "table_confirmed")


@dataclass(frozen=True)
class FieldRecord:
    poly: CubicPoly
    disc_poly: int
    disc_field: int | None = None
    embeddings: tuple[tuple[Fraction, Fraction], ...] = ()
    fundamental_units: tuple[UnitElement, ...] = ()
    h: int | None = None
    R: float | None = None
    splitting: dict = field(default_factory=dict)
    source: str = "computed"
    units_status: str = "none"
    certifications: dict = field(default_factory=dict)

    @property
    def roots(self) -> list[float]:
        return poly.polished_roots(self.poly.coeffs, self.embeddings)

    @property
    def label(self) -> str:
        return f"{self.disc_field}:{self.poly.a},{self.poly.b},{self.poly.c}"

    def with_(self, **kw) -> "FieldRecord":
        return replace(self, **kw)


def lambda_S(record: FieldRecord, S: Iterable[int], allow_small_S: bool = False) -> int:
    """prod_{p in S} f_p, each p non-decomposed and Z[theta] maximal at p."""
    S = sorted(set(S))
    if len(S) < 2 and not allow_small_S:
        raise ValueError(f"|S| >= 2 is required, got S = {S}")
    out = 1
    for p in S:
        sp = record.splitting.get(p) or splitting_type(record.poly, p)
        if not sp.non_decomposed:
            raise ValueError(f"{p} decomposes in the field of {record.poly}")
        out *= sp.f_p
    return out


def index_certified_maximal(p: CubicPoly, disc_poly: int) -> bool:
    """Z[theta] is the maximal order: Dedekind at every p with p^2 | disc."""
    return all(dedekind_maximal_at_p(p, q) for q, e in poly.factorize(disc_poly).items() if e >= 2)


def reduce_translation(p: CubicPoly) -> CubicPoly:
    """Key-minimal polynomial among the translates x -> x + t and the reflection x -> -x."""
    best = None
    for sign in (1, -1):
        a, b, c = p.a * sign, p.b, p.c * sign
        for t in range(-(abs(a) // 3) - 1, abs(a) // 3 + 2):
            # f(x + t) for f = x^3 + a x^2 + b x + c
            q = CubicPoly(a + 3 * t, b + 2 * a * t + 3 * t * t, c + b * t + a * t * t + t ** 3)
            if best is None or q.key() < best.key():
                best = q
    return best


@lru_cache(maxsize=4096)
def _roots_float(p: CubicPoly) -> np.ndarray:
    return np.array(poly.polished_roots(p.coeffs, poly.isolate_real_roots(p.coeffs, 1e-12)))


def _root_of_in_field(g: CubicPoly, f: CubicPoly) -> tuple | None:
    """Find x in Q[theta]/(f) with g(x) = 0, verified exactly.  None if absent.

    Candidates come from solving the Vandermonde system against the real roots
    for each matching of embeddings; coefficients have denominators dividing
    the index of Z[theta], whose square divides disc(f).
    """
    ra, rb = _roots_float(f), _roots_float(g)
    V = np.vander(ra, 3, increasing=True)
    disc_f = discriminant(f)
    denominators = [k for k in range(1, math.isqrt(abs(disc_f)) + 1) if disc_f % (k * k) == 0]
    for perm in itertools.permutations(range(3)):
        sol = np.linalg.solve(V, rb[list(perm)])
        for k in denominators:
            scaled = sol * k
            ints = np.round(scaled)
            if np.max(np.abs(scaled - ints)) > 1e-6 * max(1.0, float(np.max(np.abs(scaled)))):
                continue
            cand = tuple(Fraction(int(v), k) for v in ints)
            if _eval_in_field(g, cand, f) == (0, 0, 0):
                return cand
    return None


def _eval_in_field(g: CubicPoly, x: Sequence, f: CubicPoly) -> tuple:
    acc: tuple = (0, 0, 0)
    for coef in reversed(g.coeffs):
        acc = order.multiply(acc, x, f.abc)
        acc = (acc[0] + coef, acc[1], acc[2])
    return tuple(acc)


def same_field(f: CubicPoly, g: CubicPoly) -> bool:
    """Q[x]/(f) and Q[x]/(g) are isomorphic (each has a root of the other)."""
    return _root_of_in_field(g, f) is not None and _root_of_in_field(f, g) is not None


@dataclass(frozen=True)
class EnumerationConfig:
    a_max: int = 15
    b_max: int = 60
    c_max: int = 60


def enumerate_fields(disc_bound: int, S: Iterable[int] = (), config: EnumerationConfig | None = None,
                     precision: float = 1e-12) -> list[FieldRecord]:
    """Totally real cubic fields of discriminant <= disc_bound with a power-basis generator.

    Keeps monic cubics in the coefficient box that are irreducible, totally
    real, have Z[theta] certified maximal (so disc_field = disc_poly) and are
    maximal and non-decomposed at every prime in S.  Isomorphic polynomials
    are merged; the representative minimizes (|a|, |b|, |c|).
    """
    cfg = config or EnumerationConfig()
    S = sorted(set(S))
    a = np.arange(-cfg.a_max, cfg.a_max + 1, dtype=np.int64)
    b = np.arange(-cfg.b_max, cfg.b_max + 1, dtype=np.int64)
    c = np.arange(-cfg.c_max, cfg.c_max + 1, dtype=np.int64)
    A, B, C = np.meshgrid(a, b, c, indexing="ij")
    D = 18 * A * B * C - 4 * A ** 3 * C + A ** 2 * B ** 2 - 4 * B ** 3 - 27 * C ** 2
    keep = (D > 0) & (D <= disc_bound)
    # x -> x + t and x -> -x preserve the field and Z[theta]; keep one representative per orbit
    candidates = sorted({
        (int(d), reduce_translation(CubicPoly(int(x), int(y), int(z))))
        for x, y, z, d in zip(A[keep], B[keep], C[keep], D[keep])
    })
    by_disc: dict[int, list[CubicPoly]] = {}
    for d, p in candidates:
        if not is_irreducible(p):
            continue
        # a cubic with positive discriminant has three real roots
        if poly.count_real_roots(p.coeffs) != 3:
            continue
        if not index_certified_maximal(p, d):
            continue
        ok = True
        for q in S:
            if not dedekind_maximal_at_p(p, q) or not splitting_type(p, q).non_decomposed:
                ok = False
                break
        if ok:
            by_disc.setdefault(d, []).append(p)
    records = []
    for d in sorted(by_disc):
        reps: list[CubicPoly] = []
        for p in sorted(by_disc[d], key=CubicPoly.key):
            if not any(same_field(p, q) for q in reps):
                reps.append(p)
        for p in reps:
            records.append(FieldRecord(
                poly=p,
                disc_poly=d,
                disc_field=d,
                embeddings=tuple(real_embeddings(p, precision)),
                splitting={q: splitting_type(p, q) for q in S},
                source="computed",
            ))
    return records


def minkowski_bound(disc: int) -> float:
    return 2.0 / 9.0 * math.sqrt(disc)


def minkowski_h1_certificate(record: FieldRecord) -> str:
    """'h_is_1' when no prime ideal has norm below the Minkowski bound, else 'inconclusive'."""
    disc = record.disc_field if record.disc_field is not None else record.disc_poly
    bound = minkowski_bound(disc)
    for p in poly.primes_up_to(int(math.floor(bound))):
        try:
            sp = splitting_type(record.poly, p)
        except NotMaximalError:
            return "inconclusive"
        if any(p ** f <= bound for _, f in sp.factors):
            return "inconclusive"
    return "h_is_1"
