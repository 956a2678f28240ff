import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pgtlab import counting, tauberian as tb
from pgtlab.chamber import GeodesicClass, Spectrum
from pgtlab.dirichlet import PoleModel, PoleTerm


@pytest.fixture(scope="module")
def kernel():
    return tb.make_kernel("mollifier_square", 1.0)


@pytest.fixture(scope="module")
def cheb13():
    return tb.synth_spectrum(tb.SynthSpec(1, 0, "chebyshev", cutoff=13.0))


def test_b_ratio_examples(cheb13):
    x = (2.5, 3.0)
    A = math.prod(x) ** 2 * math.exp(sum(x))
    assert tb.b_ratio(A, x, 1) == pytest.approx(1.0, rel=1e-14)
    assert tb.b_ratio(0.0, x, 1) == 0.0
    assert 0.91 <= tb.b_ratio(counting.big_A(cheb13, (13.0,), 0), (13.0,), 0) <= 0.94
    with pytest.raises(ValueError):
        tb.b_ratio(1.0, (0.0,))


@given(st.integers(1, 3), st.integers(0, 3), st.floats(0.01, 100), st.data())
def test_b_ratio_inverts_profile(r, j, c, data):
    x = [data.draw(st.floats(0.1, 60)) for _ in range(r)]
    A = c * math.prod(x) ** (j + 1) * math.exp(math.fsum(x))
    assert math.isclose(tb.b_ratio(A, x, j), c, rel_tol=1e-12)


def test_kernel_examples(kernel):
    assert kernel.f(np.array([-2.0, 2.0, 2.5, -3.0])) == pytest.approx([0, 0, 0, 0], abs=1e-300)
    f1 = kernel.f1
    t = np.linspace(-1, 1, 200001)
    dt = t[1] - t[0]
    assert kernel.f0 == pytest.approx(np.sum(f1(t) ** 2) * dt, rel=1e-8)
    assert kernel.f0 > 0
    assert kernel.fhat(0.0)[0] == pytest.approx((np.sum(f1(t)) * dt) ** 2, rel=1e-8)
    assert np.all(kernel.fhat_values >= 0)
    assert kernel.fhat_min >= -tb.FHAT_NEG_TOL
    assert np.allclose(kernel.f_values, kernel.f_values[::-1], rtol=0, atol=1e-15)
    assert kernel.meta["convention"] == tb.FOURIER_CONVENTION


def test_kernel_fourier_inversion_constant(kernel):
    # int fhat = 2 pi f(0) under the stated convention
    xi, w = tb._gl_panels(-kernel.xi_max, kernel.xi_max, 0.25)
    assert math.fsum(kernel.fhat(xi) * w) == pytest.approx(kernel.two_pi_f0, rel=1e-10)


@settings(max_examples=8, deadline=None)
@given(st.floats(0.2, 5.0), st.sampled_from([33, 101, 257]))
def test_fhat_nonnegative(S1, res):
    k = tb.make_kernel("mollifier_square", S1, res)
    assert k.fhat_min >= -tb.FHAT_NEG_TOL
    assert np.all(k.fhat_values >= 0)


def test_kernel_validation():
    with pytest.raises(ValueError):
        tb.make_kernel("mollifier_square", 0.0)
    with pytest.raises(ValueError):
        tb.make_kernel("mollifier_square", 1.0, 32)
    with pytest.raises(ValueError):
        tb.make_kernel("gaussian", 1.0)


def test_kernel_lemma_examples(kernel):
    target = kernel.two_pi_f0
    assert abs(tb.lemma33_check(kernel, 0, 40) / target - 1) < 0.01
    assert abs(tb.lemma33_check(kernel, 2, 40) / target - 1) < 0.02
    unit = kernel.scaled(1 / (2 * math.pi))
    assert unit.f0 == pytest.approx(1 / (2 * math.pi), rel=1e-12)
    assert tb.lemma33_check(unit, 0, 80) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_kernel_lemma_deviation_shrinks(kernel, k):
    dev = [abs(tb.lemma33_check(kernel, k, y) / kernel.two_pi_f0 - 1) for y in (20, 40, 80)]
    assert dev[0] > dev[1] > dev[2]


def test_smoothed_test_exact_continuum(kernel):
    for r in (1, 2):
        v = tb.smoothed_test(tb.ExactContinuum(r, 0), kernel, (40.0,) * r, 0)
        assert abs(v / kernel.two_pi_f0 ** r - 1) < 0.01
    # separability
    prod = tb.lemma33_check(kernel, 1, 30.0) * tb.lemma33_check(kernel, 1, 50.0)
    v = tb.smoothed_test(tb.ExactContinuum(2, 0), kernel, (30.0, 50.0), 0)
    assert v == pytest.approx(prod, rel=1e-8)


def test_smoothed_test_spectrum_matches_continuum_on_fine_lattice(kernel):
    lattice = tb.synth_spectrum(tb.SynthSpec(1, 0, "product_lattice", step=0.01, cutoff=60.0))
    v = tb.smoothed_test(lattice, kernel, (40.0,), 0)
    w = tb.smoothed_test(tb.ExactContinuum(1, 0), kernel, (40.0,), 0)
    assert v == pytest.approx(w, rel=0.03)


def test_smoothed_test_single_class_vanishes(kernel):
    s = Spectrum.from_classes([GeodesicClass((1.0,), 1.0)])
    vals = [tb.smoothed_test(s, kernel, (y,), 0) for y in (5.0, 10.0, 20.0)]
    assert vals[0] > vals[1] > vals[2] and vals[2] < 1e-6


def test_smoothed_test_chebyshev(kernel):
    # cutoff e^16: the kernel reaches past x = 13 so classes up to about 14.5 matter
    cheb = tb.synth_spectrum(tb.SynthSpec(1, 0, "chebyshev", cutoff=16.0))
    v = tb.smoothed_test(cheb, kernel, (13.0,), 0)
    assert abs(v / kernel.two_pi_f0 - 1) < 0.10


def test_synth_chebyshev_small():
    s = tb.synth_spectrum(tb.SynthSpec(1, 0, "chebyshev", cutoff=3.0))
    ns = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]
    lam = [2, 3, 2, 5, 7, 2, 3, 11, 13, 2, 17, 19]
    assert [c.lengths[0] for c in s] == pytest.approx([math.log(n) for n in ns], rel=1e-15)
    assert [c.flat_volume for c in s] == pytest.approx([math.log(p) for p in lam], rel=1e-15)
    assert all(c.det_factor == 1.0 for c in s)


def test_von_mangoldt_matches_sympy():
    sympy = pytest.importorskip("sympy")
    lam = tb.von_mangoldt(500)
    for n in range(2, 501):
        f = sympy.factorint(n)
        expected = math.log(next(iter(f))) if len(f) == 1 else 0.0
        assert lam[n] == pytest.approx(expected, rel=1e-15, abs=0)


def test_synth_product_lattice():
    s = tb.synth_spectrum(tb.SynthSpec(2, 0, "product_lattice", step=0.5, cutoff=1.0))
    assert len(s) == 4
    with pytest.raises(ValueError):
        tb.synth_spectrum(tb.SynthSpec(1, 0, "product_lattice", step=0.5, cutoff=0.2))


@pytest.mark.parametrize("r,j", [(1, 0), (1, 2), (2, 1)])
def test_product_lattice_hits_profile_on_lattice(r, j):
    h = 0.25
    s = tb.synth_spectrum(tb.SynthSpec(r, j, "product_lattice", step=h, cutoff=4.0))
    for n in [(1,) * r, (5,) * r, tuple(range(3, 3 + r)), (16,) * r]:
        x = [k * h for k in n]
        assert tb.b_ratio(counting.big_A(s, x, j), x, j) == pytest.approx(1.0, rel=1e-12)


def test_product_lattice_with_pole_model():
    m = PoleModel(1, 0, (PoleTerm((0.5,), -1),))
    s = tb.synth_spectrum(tb.SynthSpec(1, 0, "product_lattice", step=0.25, cutoff=6.0, model=m))
    x = 6.0
    expected = x * (math.exp(x) - math.exp(0.5 * x))
    assert counting.big_A(s, (x,), 0) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 2), st.integers(0, 2), st.data())
def test_generated_A_monotone(r, j, data):
    s = tb.synth_spectrum(tb.SynthSpec(r, j, "product_lattice", step=0.5, cutoff=4.0))
    x = [data.draw(st.floats(0.1, 4)) for _ in range(r)]
    y = [v + data.draw(st.floats(0, 2)) for v in x]
    assert counting.big_A(s, x, j) <= counting.big_A(s, y, j)


def test_verdict_examples(cheb13):
    rows = tb.wiener_ikehara_verdict(tb.ExactContinuum(2, 1), 1, (1.0, 2.0), (5.0, 10.0, 20.0))
    for row in rows:
        assert abs(row.tail_sup - 1) <= 1e-12 and abs(row.tail_inf - 1) <= 1e-12
    rows = tb.wiener_ikehara_verdict(cheb13, 0, (1.0,), (8.0, 10.0, 13.0))
    assert [r.B for r in rows] == sorted(r.B for r in rows)
    assert abs(rows[-1].B - (1 - 1 / 13)) < 0.01
    single = Spectrum.from_classes([GeodesicClass((1.0,), 1.0)])
    rows = tb.wiener_ikehara_verdict(single, 0, (1.0,), (10.0, 20.0, 40.0))
    assert rows[-1].tail_sup < 1e-15
    assert all(a.tail_sup >= b.tail_sup for a, b in zip(rows, rows[1:]))


def test_exact_continuum_laplace_transform_is_leading_pole():
    from pgtlab.dirichlet import pole_term_value

    c = tb.ExactContinuum(2, 1)
    s = (1.7 + 0.3j, 2.4 - 1j)
    assert c.laplace_transform(s) == pytest.approx(pole_term_value((1, 1), s, 1), rel=1e-12)
