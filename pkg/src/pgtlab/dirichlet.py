"""Generalized Dirichlet series L^j(s) over a spectrum and its pole-term model.

With ``D`` the operator that differentiates once in every variable (with a
sign), ``D^{j+1} 1/prod(s_k - theta_k)`` has the closed form
``((j+1)!)^r / prod (s_k - theta_k)^{j+2}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from pgtlab.chamber import Spectrum


class PoleHit(ArithmeticError):
    """Evaluation requested on (or across) a pole divisor."""


def _as_complex_tuple(s, r: int | None = None) -> tuple[complex, ...]:
    if np.isscalar(s):
        if r is None:
            raise ValueError("scalar s needs an explicit rank")
        return (complex(s),) * r
    out = tuple(complex(v) for v in s)
    if r is not None and len(out) != r:
        raise ValueError(f"expected {r} coordinates, got {len(out)}")
    return out


def _csum(values: np.ndarray) -> complex:
    return complex(math.fsum(values.real), math.fsum(values.imag))


def L_sum(spectrum: Spectrum, s, j: int = 0) -> complex:
    """sum ind(gamma) l(a)^(j+1) exp(-s . lengths), evaluated in log space."""
    s = np.asarray(_as_complex_tuple(s, spectrum.rank))
    if len(spectrum) == 0:
        return 0j
    lengths = spectrum.length_array
    log_mag = (np.log(spectrum.index_array)
               + (j + 1) * np.sum(np.log(lengths), axis=1)
               - lengths @ s.real)
    phase = -(lengths @ s.imag)
    return _csum(np.exp(log_mag) * np.exp(1j * phase))


def L_integral(spectrum: Spectrum, s, j: int = 0) -> complex:
    """Laplace transform of the step function A(x): L_sum / (s_1 ... s_r)."""
    s = _as_complex_tuple(s, spectrum.rank)
    if any(v == 0 for v in s):
        raise ValueError("s_k = 0 is not allowed")
    if any(v.real <= 0 for v in s):
        raise ValueError("the Laplace integral needs Re(s_k) > 0")
    return L_sum(spectrum, s, j) / math.prod(s)


def pole_term_value(theta, s, j: int = 0) -> complex:
    """((j+1)!)^r / prod (s_k - theta_k)^(j+2)."""
    theta = _as_complex_tuple(theta)
    s = _as_complex_tuple(s, len(theta))
    diffs = [sk - tk for sk, tk in zip(s, theta)]
    if any(d == 0 for d in diffs):
        raise PoleHit(f"s = {s} lies on the pole divisor of theta = {theta}")
    out = complex(math.factorial(j + 1) ** len(theta))
    for d in diffs:
        out /= d ** (j + 2)
    return out


@dataclass(frozen=True)
class PoleTerm:
    theta: tuple[complex, ...]
    coeff: int

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(complex(t) for t in self.theta))
        if int(self.coeff) != self.coeff:
            raise ValueError("pole coefficients are integers")
        object.__setattr__(self, "coeff", int(self.coeff))

    @property
    def min_real(self) -> float:
        return min(t.real for t in self.theta)

    def honors_constraint(self) -> bool:
        """Re(theta_k) <= 1 for all k and < 1 for at least one k."""
        re = [t.real for t in self.theta]
        return all(v <= 1 for v in re) and any(v < 1 for v in re)


@dataclass(frozen=True)
class PoleModel:
    """Leading term at theta = (1, ..., 1) with coefficient 1, plus pole terms.

    Terms are kept ordered by descending ``min_k Re(theta_k)``.
    """

    rank: int
    j: int = 0
    terms: tuple[PoleTerm, ...] = ()
    leading_coeff: int = field(default=1, init=False)

    def __post_init__(self):
        if self.rank < 1 or self.j < 0:
            raise ValueError("rank >= 1 and j >= 0 required")
        terms = tuple(self.terms)
        for t in terms:
            if len(t.theta) != self.rank:
                raise ValueError(f"term {t} does not have rank {self.rank}")
            if not t.honors_constraint():
                raise ValueError(f"term {t} violates Re(theta_k) <= 1 with one strict inequality")
        ordered = sorted(terms, key=lambda t: (-t.min_real, [(v.real, v.imag) for v in t.theta]))
        object.__setattr__(self, "terms", tuple(ordered))

    @property
    def leading(self) -> PoleTerm:
        return PoleTerm((1.0,) * self.rank, 1)


@dataclass(frozen=True)
class Region:
    """Open box in C^r: Re(s_k) in (re_lo, re_hi), Im(s_k) in (im_lo, im_hi)."""

    re_lo: tuple[float, ...]
    re_hi: tuple[float, ...]
    im_lo: tuple[float, ...]
    im_hi: tuple[float, ...]

    @classmethod
    def around(cls, s, radius: float) -> "Region":
        s = _as_complex_tuple(s)
        return cls(tuple(v.real - radius for v in s), tuple(v.real + radius for v in s),
                   tuple(v.imag - radius for v in s), tuple(v.imag + radius for v in s))

    def contains(self, s) -> bool:
        s = _as_complex_tuple(s, len(self.re_lo))
        return all(a < v.real < b and c < v.imag < d
                   for v, a, b, c, d in zip(s, self.re_lo, self.re_hi, self.im_lo, self.im_hi))

    def meets_divisor(self, theta) -> bool:
        """True if some hyperplane {s_k = theta_k} crosses the region."""
        theta = _as_complex_tuple(theta, len(self.re_lo))
        return any(a < t.real < b and c < t.imag < d
                   for t, a, b, c, d in zip(theta, self.re_lo, self.re_hi, self.im_lo, self.im_hi))


def mittag_leffler_eval(model: PoleModel, s, region: Region, tol: float = 1e-10) -> complex:
    """Evaluate the pole model at s inside ``region``.

    Terms are consumed in model order until the bound
    ``((j+1)!)^r |coeff| / dist^(r(j+2))`` drops below ``tol``.
    """
    r, j = model.rank, model.j
    s = _as_complex_tuple(s, r)
    if not region.contains(s):
        raise ValueError(f"s = {s} is outside the region")
    if region.meets_divisor(model.leading.theta):
        raise PoleHit("the leading pole divisor meets the region")
    values = [pole_term_value(model.leading.theta, s, j)]
    scale = math.factorial(j + 1) ** r
    for term in model.terms:
        if region.meets_divisor(term.theta):
            raise PoleHit(f"pole divisor of theta = {term.theta} meets the region")
        dist = min(abs(sk - tk) for sk, tk in zip(s, term.theta))
        if scale * abs(term.coeff) / dist ** (r * (j + 2)) < tol:
            break
        values.append(term.coeff * pole_term_value(term.theta, s, j))
    return _csum(np.asarray(values))


def _gauss_legendre_panels(a: float, b: float, panels: int, order: int = 20):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _one_axis_integral(z: complex, j: int, panels: int) -> complex:
    # int_0^inf t^(j+1) e^(-z t) dt truncated where the integrand is far below double precision
    L = (60.0 + 10.0 * (j + 1)) / z.real
    t, w = _gauss_legendre_panels(0.0, L, panels)
    vals = t ** (j + 1) * np.exp(-z * t)
    return _csum(vals * w)


def chamber_integral_check(s, theta, j: int = 0, resolution: int = 200):
    """Compare the iterated chamber integral with its closed form.

    Returns (numeric, closed_form, abs_difference).
    """
    theta = _as_complex_tuple(theta)
    s = _as_complex_tuple(s, len(theta))
    zs = [sk - tk for sk, tk in zip(s, theta)]
    if any(z.real <= 0 for z in zs):
        raise ValueError("the chamber integral diverges unless Re(s_k - theta_k) > 0")
    numeric = complex(1.0)
    for z in zs:
        numeric *= _one_axis_integral(z, j, resolution)
    closed = pole_term_value(theta, s, j)
    return numeric, closed, abs(numeric - closed)


def fit_leading_coefficient(spectrum: Spectrum, j: int, sigmas: Sequence[float]) -> list[float]:
    """(sigma - 1)^(r(j+2)) L_sum(sigma, ..., sigma) / ((j+1)!)^r for each sigma."""
    r = spectrum.rank
    out = []
    for sigma in sigmas:
        if sigma <= 1:
            raise ValueError("sigma must exceed 1")
        val = L_sum(spectrum, (sigma,) * r, j).real
        out.append((sigma - 1) ** (r * (j + 2)) * val / math.factorial(j + 1) ** r)
    return out
