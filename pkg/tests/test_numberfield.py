import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from pgtlab.numberfield import fields as nf
from pgtlab.numberfield import order, poly
from pgtlab.numberfield.fields import CubicPoly

from conftest import NINTH, SEVENTH, bare_record

sympy = pytest.importorskip("sympy")
x = sympy.symbols("x")


def sym(p: CubicPoly):
    return sympy.Poly(x ** 3 + p.a * x ** 2 + p.b * x + p.c, x, domain=sympy.ZZ)


cubics = st.builds(CubicPoly, st.integers(-6, 6), st.integers(-20, 20), st.integers(-20, 20))
irreducible = cubics.filter(nf.is_irreducible)


def test_discriminant_examples():
    assert nf.discriminant(SEVENTH) == 49
    assert nf.discriminant(NINTH) == 81
    assert nf.discriminant(CubicPoly(0, 0, -2)) == -108


@given(cubics)
def test_discriminant_matches_sympy(p):
    assert nf.discriminant(p) == int(sympy.discriminant(sym(p)))


def test_totally_real_examples():
    assert nf.is_totally_real(SEVENTH)
    assert not nf.is_totally_real(CubicPoly(0, 0, -2))
    with pytest.raises(nf.ReducibleError):
        nf.is_totally_real(CubicPoly(0, -1, 0))


@given(irreducible)
def test_sturm_count_matches_sympy(p):
    assert poly.count_real_roots(p.coeffs) == len(sympy.real_roots(sym(p)))


@given(cubics)
def test_irreducibility_matches_sympy(p):
    assert nf.is_irreducible(p) == sym(p).is_irreducible


@pytest.mark.parametrize("p,roots", [
    (SEVENTH, (1.8019377358048383, 0.4450418679126288, -1.2469796037174670)),
    (NINTH, (1.8793852415718169, -0.3472963553338607, -1.5320888862379560)),
])
def test_real_embeddings_examples(p, roots):
    iv = nf.real_embeddings(p, 1e-12)
    assert len(iv) == 3
    for (lo, hi), r in zip(iv, roots):
        assert hi - lo <= Fraction(1, 10 ** 12)
        assert lo <= Fraction(r) + Fraction(1, 10 ** 15) and Fraction(r) - Fraction(1, 10 ** 15) <= hi
    got = poly.polished_roots(p.coeffs, iv)
    for r in got:
        assert abs(poly.evaluate(p.coeffs, r)) < 1e-10


@settings(max_examples=40)
@given(irreducible)
def test_isolation_intervals_are_disjoint_and_contain_sign_change(p):
    iv = poly.isolate_real_roots(p.coeffs, 1e-10)
    assert len(iv) == poly.count_real_roots(p.coeffs)
    for (lo, hi), (lo2, _) in zip(iv, iv[1:]):
        assert hi < lo2
    for lo, hi in iv:
        assert hi - lo <= Fraction(1, 10 ** 10)
        a, b = poly.evaluate(p.coeffs, lo), poly.evaluate(p.coeffs, hi)
        assert a == 0 or b == 0 or (a > 0) != (b > 0)


def _index(p):
    _, dK = sympy.polys.numberfields.basis.round_two(sym(p))
    k2 = nf.discriminant(p) // int(dK)
    return math.isqrt(k2)


def test_dedekind_examples():
    assert nf.dedekind_maximal_at_p(SEVENTH, 2)
    assert nf.dedekind_maximal_at_p(SEVENTH, 7) == (_index(SEVENTH) % 7 != 0)
    assert nf.dedekind_maximal_at_p(SEVENTH, 7)
    with pytest.raises(nf.ReducibleError):
        nf.dedekind_maximal_at_p(CubicPoly(0, 0, 0), 2)


@settings(max_examples=60, deadline=None)
@given(irreducible, st.sampled_from([2, 3, 5, 7]))
def test_dedekind_matches_round_two(p, q):
    assert nf.dedekind_maximal_at_p(p, q) == (_index(p) % q != 0)


@settings(max_examples=60, deadline=None)
@given(cubics, st.sampled_from([2, 3, 5, 7, 11]))
def test_factor_mod_p_matches_sympy(p, q):
    ours = poly.factor_mod_p(p.coeffs, q)
    _, facs = sympy.factor_list(sym(p).as_expr(), x, modulus=q)
    theirs = sorted((tuple(int(c) % q for c in reversed(sympy.Poly(f, x).all_coeffs())), m) for f, m in facs)
    assert sorted(ours) == theirs


def test_splitting_examples():
    s = nf.splitting_type(SEVENTH, 2)
    assert s.factors == ((1, 3),) and s.non_decomposed and s.f_p == 3
    s = nf.splitting_type(NINTH, 2)
    assert s.factors == ((1, 3),) and s.non_decomposed and s.f_p == 3
    s = nf.splitting_type(SEVENTH, 13)  # 13 = 1 mod 7 splits completely
    assert s.factors == ((1, 1),) * 3 and not s.non_decomposed and s.f_p is None
    s = nf.splitting_type(SEVENTH, 7)
    assert s.factors == ((3, 1),) and s.non_decomposed and s.f_p == 1


def test_splitting_refuses_nonmaximal():
    p = CubicPoly(0, 0, -8 * 3)  # x^3 - 24: index divisible by 2
    with pytest.raises(nf.NotMaximalError):
        nf.splitting_type(p, 2)


@settings(max_examples=60, deadline=None)
@given(irreducible, st.sampled_from([2, 3, 5, 7, 13]))
def test_splitting_matches_sympy_prime_decomposition(p, q):
    assume(nf.dedekind_maximal_at_p(p, q))
    ours = nf.splitting_type(p, q)
    theirs = sympy.polys.numberfields.primes.prime_decomp(q, sym(p))
    assert sorted(ours.factors) == sorted((P.e, P.f) for P in theirs)
    assert sum(e * f for e, f in ours.factors) == 3


def _with_split(fps):
    rec = bare_record(SEVENTH)
    return rec.with_(splitting={p: nf.Splitting(((1 if f == 3 else 3, f),), True, f) for p, f in fps.items()})


def test_lambda_S_examples():
    assert nf.lambda_S(_with_split({2: 3, 3: 1}), {2, 3}) == 3
    assert nf.lambda_S(_with_split({2: 3, 3: 3}), {2, 3}) == 9
    assert nf.lambda_S(_with_split({}), set(), allow_small_S=True) == 1
    with pytest.raises(ValueError):
        nf.lambda_S(_with_split({}), set())
    with pytest.raises(ValueError):
        nf.lambda_S(bare_record(SEVENTH), {2, 13})


def test_c_constant():
    assert nf.c_constant(3) == pytest.approx(8.0, rel=1e-15)
    assert nf.c_constant(5) == pytest.approx(2304.0, rel=1e-15)
    for d in (2, 4, 9):
        with pytest.raises(ValueError):
            nf.c_constant(d)


def test_minkowski_examples():
    fields = {r.disc_field: r for r in nf.enumerate_fields(100)}
    assert nf.minkowski_bound(49) < 2
    assert nf.minkowski_h1_certificate(fields[49]) == "h_is_1"
    assert nf.minkowski_bound(81) == pytest.approx(2.0, rel=1e-15)
    assert nf.minkowski_h1_certificate(fields[81]) == "h_is_1"
    assert nf.minkowski_bound(1957) == pytest.approx(9.83, abs=0.01)


def test_enumerate_examples():
    recs = nf.enumerate_fields(100)
    assert [r.disc_field for r in recs] == [49, 81]
    assert nf.same_field(recs[0].poly, SEVENTH)
    assert nf.same_field(recs[1].poly, NINTH)
    assert [r.disc_field for r in nf.enumerate_fields(100, S=(2,))] == [49, 81]
    assert nf.enumerate_fields(40) == []


def test_enumerated_discriminants_match_round_two_oracle():
    recs = nf.enumerate_fields(600)
    for r in recs:
        _, dK = sympy.polys.numberfields.basis.round_two(sym(r.poly))
        assert int(dK) == r.disc_field
    # independent scan: field discriminants of all totally real cubics in a small box
    seen = set()
    for a in range(-2, 3):
        for b in range(-12, 13):
            for c in range(-12, 13):
                p = CubicPoly(a, b, c)
                d = nf.discriminant(p)
                if d <= 0 or not nf.is_irreducible(p):
                    continue
                _, dK = sympy.polys.numberfields.basis.round_two(sym(p))
                if int(dK) <= 600:
                    seen.add(int(dK))
    assert sorted(seen) == sorted({r.disc_field for r in recs})


def test_same_field_matches_sympy():
    recs = nf.enumerate_fields(1500)
    pool = [r.poly for r in recs]
    rng = random.Random(4)
    for _ in range(25):
        f, g = rng.choice(pool), rng.choice(pool)
        iso = sympy.polys.numberfields.subfield.field_isomorphism(
            sympy.CRootOf(sym(f).as_expr(), 0), sympy.CRootOf(sym(g).as_expr(), 0))
        assert nf.same_field(f, g) == (iso is not None)
    # pairs inside one discriminant, where isomorphism is actually in question
    for f in (CubicPoly(0, -7, -7), CubicPoly(2, -1, -1)):
        iso = sympy.polys.numberfields.subfield.field_isomorphism(
            sympy.CRootOf(sym(f).as_expr(), 0), sympy.CRootOf(sym(SEVENTH).as_expr(), 0))
        assert iso is not None and nf.same_field(f, SEVENTH)
    assert not nf.same_field(SEVENTH, NINTH)


def test_enumeration_deduplicates_translates():
    recs = nf.enumerate_fields(2000)
    keys = [(r.disc_field, r.poly) for r in recs]
    assert len(keys) == len(set(keys))
    by_disc = {}
    for r in recs:
        by_disc.setdefault(r.disc_field, []).append(r.poly)
    for polys in by_disc.values():
        for i, f in enumerate(polys):
            for g in polys[i + 1:]:
                assert not nf.same_field(f, g)


def test_reduce_translation_preserves_discriminant():
    for p in (CubicPoly(3, -4, 1), CubicPoly(-7, 10, 3), SEVENTH):
        q = nf.reduce_translation(p)
        assert nf.discriminant(q) == nf.discriminant(p)
        assert q.key() <= p.key()


@given(irreducible, st.lists(st.integers(-9, 9), min_size=3, max_size=3))
def test_norm_matches_sympy_resultant(p, coords):
    elem = coords[0] + coords[1] * x + coords[2] * x ** 2
    expected = sympy.resultant(sym(p).as_expr(), elem, x)
    assert order.norm(coords, p.abc) == int(expected)


@given(irreducible, st.lists(st.integers(-5, 5), min_size=3, max_size=3),
       st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_norm_is_multiplicative(p, u, v):
    assert order.norm(order.multiply(u, v, p.abc), p.abc) == order.norm(u, p.abc) * order.norm(v, p.abc)


def test_unit_inverse_and_powers():
    abc = SEVENTH.abc
    th = (0, 1, 0)
    inv = order.inverse(th, abc)
    assert order.multiply(th, inv, abc) == (1, 0, 0)
    assert all(isinstance(v, int) for v in inv)
    assert order.multiply(order.power(th, 5, abc), order.power(th, -5, abc), abc) == (1, 0, 0)
    assert order.canonical_sign((0, -2, 3)) == (0, 2, -3)
