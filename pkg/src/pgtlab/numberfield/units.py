"""Unit groups of totally real cubic orders Z[theta].

Units are found by exhaustive coordinate search, reduced to a basis of the
lattice they generate in log space, and then enumerated in alpha-boxes via
their exponent vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from pgtlab.chamber import GeodesicClass, Spectrum, det_one_minus_ad
from pgtlab.counting import ThetaEntry
from pgtlab.numberfield import order
from pgtlab.numberfield.fields import FieldRecord, UnitElement, lambda_S

DEPENDENCE_TOL = 1e-9


class InsufficientUnits(ValueError):
    """The search box did not contain two independent units."""


class UncertifiedUnits(RuntimeError):
    """Strict mode refuses to enumerate with candidate fundamental units."""


def _log2(u: UnitElement) -> np.ndarray:
    lv = u.log_vector
    return np.array(lv[:2])


@dataclass
class _Gen:
    vec: np.ndarray
    coords: tuple


def _combine(gens: Sequence[_Gen], exps: Sequence[int], abc) -> tuple:
    out: tuple = (1, 0, 0)
    for g, e in zip(gens, exps):
        if e:
            out = order.multiply(out, order.power(g.coords, int(e), abc), abc)
    return out


def _lattice_basis(gens: list[_Gen], coeffs: Sequence[Fraction], abc) -> list[_Gen]:
    """Basis of the lattice spanned by b1, b2 and v = c1 b1 + c2 b2 (c rational).

    Row-reduces the integer matrix [[q, 0], [0, q], [q c1, q c2]] while tracking
    which product of generators each row stands for.
    """
    q = math.lcm(*(c.denominator for c in coeffs))
    rows = [[q, 0], [0, q], [int(coeffs[0] * q), int(coeffs[1] * q)]]
    track = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for col in range(2):
        while True:
            live = [i for i in range(len(rows)) if rows[i][col] != 0 and all(
                rows[i][c] == 0 for c in range(col))]
            if len(live) <= 1:
                break
            live.sort(key=lambda i: abs(rows[i][col]))
            piv = live[0]
            for i in live[1:]:
                k = rows[i][col] // rows[piv][col]
                rows[i] = [x - k * y for x, y in zip(rows[i], rows[piv])]
                track[i] = [x - k * y for x, y in zip(track[i], track[piv])]
    keep = [i for i in range(3) if any(rows[i])]
    if len(keep) != 2:
        raise ArithmeticError("lattice reduction lost rank")
    out = []
    for i in keep:
        coords = _combine(gens, track[i], abc)
        vec = sum(t * g.vec for t, g in zip(track[i], gens))
        out.append(_Gen(np.asarray(vec, dtype=float), coords))
    return out


def _gauss_reduce(b1: _Gen, b2: _Gen, abc) -> tuple[_Gen, _Gen]:
    def n2(g):
        return float(g.vec @ g.vec)
    if n2(b1) > n2(b2):
        b1, b2 = b2, b1
    while True:
        mu = round(float(b1.vec @ b2.vec) / n2(b1))
        if mu:
            b2 = _Gen(b2.vec - mu * b1.vec,
                      order.multiply(b2.coords, order.power(b1.coords, -mu, abc), abc))
        if n2(b2) >= n2(b1):
            return b1, b2
        b1, b2 = b2, b1


def regulator(units: Sequence[UnitElement]) -> float:
    """|det (log|rho_i(eps_j)|)_{i,j=1,2}|."""
    if len(units) != 2:
        raise ValueError("a totally real cubic field has unit rank 2")
    M = np.column_stack([_log2(u) for u in units])
    R = abs(float(np.linalg.det(M)))
    if R < DEPENDENCE_TOL:
        raise ValueError("units are dependent (regulator 0)")
    return R


def find_fundamental_units(record: FieldRecord, H: int, table_R: float | None = None,
                           rel_tol: float = 1e-9):
    """Search |coords| <= H for units and reduce to a basis of the lattice they span.

    Returns (eps1, eps2, status).  status is 'table_confirmed' when the
    regulator matches ``table_R`` to ``rel_tol``, else 'candidate': the true
    regulator then divides the returned one only up to an unknown index.
    """
    abc = record.poly.abc
    roots = record.roots
    coords, norms = order.norms_in_box(abc, H)
    units = []
    for row, n in zip(coords, norms):
        if abs(int(n)) != 1:
            continue
        c = tuple(int(v) for v in row)
        if order.canonical_sign(c) != c or c == (1, 0, 0):
            continue
        units.append(UnitElement.from_coords(c, roots))
    gens = [_Gen(_log2(u), u.coords) for u in units]
    gens.sort(key=lambda g: (float(g.vec @ g.vec), g.coords))
    basis: list[_Gen] = []
    for g in gens:
        if not basis:
            basis = [g]
            continue
        if len(basis) == 1:
            b = basis[0]
            det = b.vec[0] * g.vec[1] - b.vec[1] * g.vec[0]
            if abs(det) > DEPENDENCE_TOL * max(1.0, float(g.vec @ g.vec)):
                basis = list(_gauss_reduce(b, g, abc))
            else:
                t = Fraction(float(g.vec @ b.vec) / float(b.vec @ b.vec)).limit_denominator(64)
                if t.denominator != 1:
                    # g = t b with t = p/q; the generated rank-1 lattice is spanned by (1/q) b
                    p, q = t.numerator, t.denominator
                    x, y = _ext_gcd(p, q)[1:]
                    basis = [_Gen(x * g.vec + y * b.vec, _combine([g, b], [x, y], abc))]
            continue
        M = np.column_stack([basis[0].vec, basis[1].vec])
        sol = np.linalg.solve(M, g.vec)
        fr = [Fraction(float(v)).limit_denominator(64) for v in sol]
        resid = np.abs(M @ np.array([float(f) for f in fr]) - g.vec).max()
        if resid > 1e-7 * max(1.0, float(np.abs(g.vec).max())):
            continue
        if all(f.denominator == 1 for f in fr):
            continue
        basis = list(_gauss_reduce(*_lattice_basis(basis + [g], fr, abc), abc))
    if len(basis) < 2:
        raise InsufficientUnits(f"fewer than two independent units with |coords| <= {H}")
    fu = tuple(UnitElement.from_coords(g.coords, roots) for g in basis)
    for u in fu:
        if abs(order.norm(u.coords, abc)) != 1:
            raise ArithmeticError("reduced basis element is not a unit")
    status = "candidate"
    if table_R is not None and abs(regulator(fu) - table_R) <= rel_tol * abs(table_R):
        status = "table_confirmed"
    return fu[0], fu[1], status


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def with_units(record: FieldRecord, H: int = 10, table_R: float | None = None) -> FieldRecord:
    e1, e2, status = find_fundamental_units(record, H, table_R)
    R = regulator((e1, e2))
    certs = dict(record.certifications, units_verified=True, R_recomputed=True)
    return record.with_(fundamental_units=(e1, e2), R=R, units_status=status, certifications=certs)


@dataclass(frozen=True)
class BoxEnumeration:
    units: tuple[UnitElement, ...]
    exponents: tuple[tuple[int, int], ...]
    radii: tuple[int, int]
    box: tuple[float, float]


def _unit_from_exponents(record: FieldRecord, m: Sequence[int]) -> UnitElement:
    abc = record.poly.abc
    e1, e2 = record.fundamental_units
    coords = order.multiply(order.power(e1.coords, m[0], abc), order.power(e2.coords, m[1], abc), abc)
    # embeddings multiplicatively, which keeps full relative precision
    emb = tuple(a ** m[0] * b ** m[1] for a, b in zip(e1.embeddings, e2.embeddings))
    canon = order.canonical_sign(coords)
    if canon != tuple(coords):
        emb = tuple(-v for v in emb)
    return UnitElement(tuple(int(v) for v in canon), emb)


def enumerate_units_in_box(record: FieldRecord, T: Sequence[float], strict: bool = False) -> BoxEnumeration:
    """All units mod +-1 with 0 < alpha_k <= T_k, with the exponent radii that certify it.

    alpha_1 + alpha_2 = 2 (l_max - l_min) for the log vector l, and since l
    sums to zero every |l_i| <= (2/3)(l_max - l_min).  The dual basis turns
    that sup-norm bound into a box of exponent vectors.
    """
    if len(record.fundamental_units) != 2:
        raise ValueError("record has no fundamental units")
    if strict and record.units_status != "table_confirmed":
        raise UncertifiedUnits(f"{record.label}: fundamental units are {record.units_status!r}")
    T = tuple(float(t) for t in T)
    if any(t <= 0 for t in T):
        return BoxEnumeration((), (), (0, 0), T)
    e1, e2 = record.fundamental_units
    L = np.column_stack([np.array(e1.log_vector), np.array(e2.log_vector)])  # 3 x 2
    Pinv = np.linalg.inv(L[:2, :])
    sup = (2.0 / 3.0) * (T[0] + T[1]) / 2.0
    radii = tuple(int(math.floor(np.abs(Pinv[i]).sum() * sup)) + 1 for i in range(2))
    m1 = np.arange(-radii[0], radii[0] + 1)
    m2 = np.arange(-radii[1], radii[1] + 1)
    M1, M2 = np.meshgrid(m1, m2, indexing="ij")
    ms = np.stack([M1.ravel(), M2.ravel()], axis=1)
    logs = ms @ L.T
    srt = -np.sort(-logs, axis=1)
    alpha = np.stack([2.0 * (srt[:, 0] - srt[:, 1]), 2.0 * (srt[:, 1] - srt[:, 2])], axis=1)
    inside = np.all((alpha > 0) & (alpha <= np.asarray(T)), axis=1)
    exps = [tuple(int(v) for v in m) for m in ms[inside]]
    units = [_unit_from_exponents(record, m) for m in exps]
    pairs = sorted(zip(units, exps), key=lambda ue: (ue[0].alpha, ue[0].coords))
    return BoxEnumeration(tuple(u for u, _ in pairs), tuple(e for _, e in pairs), radii, T)


def theta_entry(record: FieldRecord, S, T_max: Sequence[float], allow_small_S: bool = False,
                strict: bool = False) -> ThetaEntry:
    """Contribution of the maximal order of one field to theta_S, complete up to T_max."""
    lam = lambda_S(record, S, allow_small_S=allow_small_S)
    if record.h is None or record.R is None:
        raise ValueError(f"{record.label}: class number and regulator are required")
    box = enumerate_units_in_box(record, T_max, strict=strict)
    return ThetaEntry(record.R * record.h * lam, tuple(u.alpha for u in box.units),
                      tuple(float(t) for t in T_max), record.label)


def field_to_spectrum(records: Sequence[FieldRecord], S, T_max: Sequence[float],
                      allow_small_S: bool = False, strict: bool = False) -> Spectrum:
    """One class per (field, unit mod +-1) in the box: lengths alpha, flat volume R h lambda_S."""
    classes = []
    for rec in records:
        lam = lambda_S(rec, S, allow_small_S=allow_small_S)
        weight = rec.R * rec.h * lam
        for u in enumerate_units_in_box(rec, T_max, strict=strict).units:
            classes.append(GeodesicClass(u.alpha, weight, det_one_minus_ad(u.embeddings),
                                         f"{rec.label}:{u.coords}"))
    return Spectrum.from_classes(classes, rank=2, provenance="numberfield")
