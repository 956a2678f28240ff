"""Numerical harness for the higher-dimensional Wiener-Ikehara theorem.

Fourier convention: fhat(xi) = int f(x) exp(-i xi x) dx, so that
int fhat = 2 pi f(0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from pgtlab.chamber import GeodesicClass, Spectrum
from pgtlab.dirichlet import PoleModel

FOURIER_CONVENTION = "fhat(xi) = int f(x) exp(-i xi x) dx"
FHAT_NEG_TOL = 1e-10
FHAT_TRUNCATION = 1e-14


def _gl_panels(a: float, b: float, width: float, order: int = 16):
    n = max(1, int(math.ceil((b - a) / width)))
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, n + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def b_ratio(A_value: float, x: Sequence[float], j: int = 0) -> float:
    """B(x) = A(x) (x_1...x_r)^(-(j+1)) exp(-(x_1 + ... + x_r))."""
    x = [float(v) for v in x]
    if any(v <= 0 for v in x):
        raise ValueError(f"x must be positive, got {x}")
    if A_value < 0:
        raise ValueError("A must be nonnegative")
    if A_value == 0:
        return 0.0
    return math.exp(math.log(A_value) - (j + 1) * sum(math.log(v) for v in x) - math.fsum(x))


def _bump(t: np.ndarray, S1: float) -> np.ndarray:
    u = np.asarray(t, dtype=float) / S1
    out = np.zeros_like(u)
    inside = np.abs(u) < 1
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


@dataclass
class Kernel:
    """f = f1 * f1 for an even bump f1 on [-S1, S1]; fhat = (f1hat)^2 >= 0."""

    S1: float
    scale: float
    grid: np.ndarray
    f1_values: np.ndarray
    f_grid: np.ndarray
    f_values: np.ndarray
    fhat_grid: np.ndarray
    fhat_values: np.ndarray
    fhat_min: float
    xi_max: float
    meta: dict = field(default_factory=dict)
    _nodes: np.ndarray = field(default=None, repr=False)
    _weights: np.ndarray = field(default=None, repr=False)

    def f1(self, t) -> np.ndarray:
        return self.scale * _bump(t, self.S1)

    def f1hat(self, xi) -> np.ndarray:
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        out = np.empty_like(xi)
        vals = self.f1(self._nodes) * self._weights
        for start in range(0, xi.size, 4096):
            chunk = xi[start:start + 4096]
            out[start:start + 4096] = 2.0 * np.cos(np.outer(chunk, self._nodes)) @ vals
        return out

    def fhat(self, xi) -> np.ndarray:
        return self.f1hat(xi) ** 2

    def f(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(x)
        for i, xv in enumerate(x):
            lo, hi = max(-self.S1, xv - self.S1), min(self.S1, xv + self.S1)
            if hi <= lo:
                continue
            t, w = _gl_panels(lo, hi, self.S1 / 8, 24)
            out[i] = float(np.sum(self.f1(t) * self.f1(xv - t) * w))
        return out

    @property
    def f0(self) -> float:
        return float(self.f(0.0)[0])

    @property
    def two_pi_f0(self) -> float:
        return 2.0 * math.pi * self.f0

    def scaled(self, f0_target: float) -> "Kernel":
        """Same shape, f1 rescaled so that f(0) = f0_target."""
        return make_kernel("mollifier_square", self.S1, self.grid.size,
                           scale=self.scale * math.sqrt(f0_target / self.f0))


def make_kernel(shape: str = "mollifier_square", S1: float = 1.0, resolution: int = 401,
                scale: float = 1.0) -> Kernel:
    if shape != "mollifier_square":
        raise ValueError(f"unknown kernel shape {shape!r}")
    if S1 <= 0:
        raise ValueError("S1 must be positive")
    if resolution < 33 or resolution % 2 == 0:
        raise ValueError("resolution must be an odd number >= 33 so the grid is symmetric about 0")
    nodes, weights = _gl_panels(0.0, S1, S1 / 64, 24)
    k = Kernel(S1=S1, scale=scale, grid=np.empty(0), f1_values=np.empty(0),
               f_grid=np.empty(0), f_values=np.empty(0), fhat_grid=np.empty(0),
               fhat_values=np.empty(0), fhat_min=0.0, xi_max=0.0,
               _nodes=nodes, _weights=weights)
    k.grid = np.linspace(-S1, S1, resolution)
    k.f1_values = k.f1(k.grid)
    k.f_grid = np.linspace(-2 * S1, 2 * S1, resolution)
    k.f_values = k.f(k.f_grid)
    if np.max(np.abs(k.f_values - k.f_values[::-1])) > 1e-12 * np.max(np.abs(k.f_values)):
        raise ValueError("tabulated f is not even at this resolution")
    # tabulate fhat until its envelope falls below the truncation level
    step = 0.25 / S1
    peak = float(k.fhat(0.0)[0])
    xi_max = 8.0 / S1
    while True:
        tail = k.fhat(np.arange(xi_max, 2 * xi_max, step))
        if np.max(np.abs(tail)) < FHAT_TRUNCATION * peak:
            break
        xi_max *= 2
    xi = np.arange(0.0, 2 * xi_max + step, step)
    vals = k.fhat(xi)
    above = np.flatnonzero(np.abs(vals) >= FHAT_TRUNCATION * peak)
    k.xi_max = float(xi[above[-1] + 1]) if above.size and above[-1] + 1 < xi.size else float(xi[-1])
    k.fhat_grid = xi
    raw_min = float(np.min(vals))
    if raw_min < -FHAT_NEG_TOL:
        raise ArithmeticError(f"fhat takes the negative value {raw_min}")
    k.fhat_values = np.clip(vals, 0.0, None)
    k.fhat_min = raw_min
    k.meta = {"convention": FOURIER_CONVENTION, "shape": shape, "S1": S1,
              "truncation": FHAT_TRUNCATION}
    return k


def _lemma_axis_integral(kernel: Kernel, power: int, y: float, panel: float = 0.25) -> float:
    """int_0^inf x^power fhat(y - x) dx, with fhat cut off beyond kernel.xi_max."""
    lo = max(0.0, y - kernel.xi_max)
    x, w = _gl_panels(lo, y + kernel.xi_max, panel)
    return math.fsum(x ** power * kernel.fhat(y - x) * w)


def lemma33_check(kernel: Kernel, k: int, y: float) -> float:
    """(1/y^k) int_0^inf x^k fhat(y - x) dx, which tends to 2 pi f(0)."""
    if y <= 0:
        raise ValueError("y must be positive")
    if k < 0:
        raise ValueError("k must be nonnegative")
    return _lemma_axis_integral(kernel, k, y) / y ** k


@dataclass(frozen=True)
class ExactContinuum:
    """A(x) = c (x_1...x_r)^(j+1) exp(x_1 + ... + x_r) exactly, so B = c."""

    rank: int
    j: int = 0
    constant: float = 1.0

    def big_A(self, x: Sequence[float]) -> float:
        x = [float(v) for v in x]
        return self.constant * math.prod(x) ** (self.j + 1) * math.exp(math.fsum(x))

    def laplace_transform(self, s, panels: int = 200) -> complex:
        """int_{R_+^r} A(x) exp(-s . x) dx by product Gauss-Legendre quadrature (Re s_k > 1)."""
        s = [complex(v) for v in (s if np.ndim(s) else [s] * self.rank)]
        if len(s) != self.rank:
            raise ValueError("rank mismatch")
        if any(v.real <= 1 for v in s):
            raise ValueError("the transform of the exact continuum needs Re(s_k) > 1")
        out = complex(self.constant)
        for sk in s:
            L = (60.0 + 10.0 * (self.j + 1)) / (sk.real - 1.0)
            x, w = _gl_panels(0.0, L, L / panels, 20)
            vals = x ** (self.j + 1) * np.exp(x) * np.exp(-sk * x) * w
            out *= complex(math.fsum(vals.real), math.fsum(vals.imag))
        return out


def _A_function(source, j: int) -> Callable[[Sequence[float]], float]:
    if isinstance(source, ExactContinuum):
        return source.big_A
    from pgtlab.counting import big_A

    return lambda x: big_A(source, x, j)


def smoothed_test(source, kernel: Kernel, y: Sequence[float], j: int = 0,
                  panel: float = 0.02, max_nodes_per_axis: int = 4000) -> float:
    """int_{R_+^r} B(x) (prod x / prod y)^(j+1) prod fhat(y_k - x_k) dx.

    B(x) (prod x)^(j+1) = A(x) exp(-sum x).  For an exact continuum the
    integral factorizes into one-dimensional kernel-lemma integrals.  For a
    spectrum, A is evaluated on a tensor grid by cumulative sums of the class
    weights.
    """
    y = [float(v) for v in y]
    if any(v <= 0 for v in y):
        raise ValueError("y must be positive")
    if isinstance(source, ExactContinuum):
        if source.rank != len(y):
            raise ValueError("rank mismatch")
        out = source.constant
        for yk in y:
            out *= _lemma_axis_integral(kernel, j + 1, yk) / yk ** (j + 1)
        return out
    spectrum: Spectrum = source
    r = spectrum.rank
    if r != len(y):
        raise ValueError("rank mismatch")
    axes = []
    for yk in y:
        lo, hi = max(0.0, yk - kernel.xi_max), yk + kernel.xi_max
        width = max(panel, (hi - lo) * 16 / max_nodes_per_axis)
        axes.append(_gl_panels(lo, hi, width))
    if len(spectrum) == 0:
        return 0.0
    # A on the tensor grid: drop each class weight at the first node >= its lengths, then cumsum
    weights = spectrum.index_array * np.prod(spectrum.length_array, axis=1) ** (j + 1)
    idx = [np.searchsorted(nodes, spectrum.length_array[:, k], side="left") for k, (nodes, _) in enumerate(axes)]
    shape = tuple(nodes.size + 1 for nodes, _ in axes)
    grid = np.zeros(shape)
    np.add.at(grid, tuple(idx), weights)
    for k in range(r):
        grid = np.cumsum(grid, axis=k)
    grid = grid[tuple(slice(0, s - 1) for s in shape)]
    out = grid
    for k, (nodes, w) in enumerate(axes):
        factor = np.exp(-nodes) * kernel.fhat(y[k] - nodes) * w / y[k] ** (j + 1)
        out = np.tensordot(out, factor, axes=([0], [0]))
    return float(out)


def von_mangoldt(N: int) -> np.ndarray:
    """Lambda(n) for 0 <= n <= N."""
    lam = np.zeros(N + 1)
    if N < 2:
        return lam
    sieve = np.ones(N + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(N ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    for p in np.flatnonzero(sieve):
        p = int(p)
        lp = math.log(p)
        q = p
        while q <= N:
            lam[q] = lp
            q *= p
    return lam


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for a synthetic spectrum.

    generator: 'product_lattice', 'chebyshev' or 'exact_continuum'.  The
    cutoff X is additive: classes have all lengths <= X.  A pole model, when
    given, replaces the pure leading term as the lattice target.
    """

    rank: int
    j: int = 0
    generator: str = "product_lattice"
    step: float = 0.5
    cutoff: float = 1.0
    model: PoleModel | None = None

    def __post_init__(self):
        if self.rank < 1 or self.j < 0:
            raise ValueError("rank >= 1 and j >= 0 required")
        if self.generator not in ("product_lattice", "chebyshev", "exact_continuum"):
            raise ValueError(f"unknown generator {self.generator!r}")
        if self.step <= 0:
            raise ValueError("lattice step must be positive")
        if self.model is not None and (self.model.rank != self.rank or self.model.j != self.j):
            raise ValueError("pole model rank/j do not match the spec")


def _lattice_target(spec: SynthSpec) -> Callable[[np.ndarray], np.ndarray]:
    """F(x) = (prod x)^(j+1) Re[exp(sum x) + sum_i c_i exp(theta_i . x)] on rows of x."""
    terms = [] if spec.model is None else list(spec.model.terms)

    def F(x: np.ndarray) -> np.ndarray:
        poly_part = np.prod(x, axis=1) ** (spec.j + 1)
        val = np.exp(np.sum(x, axis=1)).astype(complex)
        for t in terms:
            val = val + t.coeff * np.exp(x @ np.asarray(t.theta))
        return poly_part * val.real
    return F


def synth_spectrum(spec: SynthSpec):
    """Build a synthetic spectrum (or an ExactContinuum for that generator).

    product_lattice: classes at n h, n in {1..N}^r, N = floor(X / h).  The
    weight at n is the mixed finite difference of the target F over the cell
    [(n-1)h, nh] divided by (prod n_k h)^(j+1), so A(n h) = F(n h) exactly on
    lattice points.  For the pure leading term this is
    ind = prod_k (F1(n_k h) - F1((n_k - 1) h)) / (n_k h)^(j+1), F1(t) = t^(j+1) e^t.

    chebyshev: r = 1 classes at log n (n a prime power, log n <= X) with
    ind = flat volume = Lambda(n), det factor 1; products of these for r > 1.
    """
    if spec.generator == "exact_continuum":
        return ExactContinuum(spec.rank, spec.j)
    if spec.generator == "chebyshev":
        return _chebyshev(spec)
    h, r = spec.step, spec.rank
    N = int(math.floor(spec.cutoff / h + 1e-12))
    if N < 1:
        raise ValueError(f"cutoff {spec.cutoff} is below one lattice step {h}")
    F = _lattice_target(spec)
    pts = np.stack(np.meshgrid(*[np.arange(1, N + 1)] * r, indexing="ij"), axis=-1).reshape(-1, r)
    diff = np.zeros(pts.shape[0])
    for corner in np.ndindex(*([2] * r)):
        shifted = (pts - np.asarray(corner)) * h
        sign = (-1) ** sum(corner)
        diff += sign * F(shifted)
    weights = diff / np.prod(pts * h, axis=1) ** (spec.j + 1)
    if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
        raise ValueError("lattice weights are not all positive: A would not be monotone")
    classes = [GeodesicClass(tuple(float(v) for v in p * h), float(wt), 1.0, "lat:" + ",".join(map(str, p)))
               for p, wt in zip(pts, weights)]
    return Spectrum.from_classes(classes, rank=r, provenance="synthetic")


def _chebyshev(spec: SynthSpec) -> Spectrum:
    N = int(math.floor(math.exp(spec.cutoff) * (1 + 1e-15)))
    if N < 2:
        raise ValueError(f"cutoff {spec.cutoff} is below log 2")
    lam = von_mangoldt(N)
    ns = np.flatnonzero(lam)
    one_d = [(math.log(int(n)), float(lam[n]), int(n)) for n in ns]
    if spec.rank == 1:
        classes = [GeodesicClass((l,), w, 1.0, f"n={n}") for l, w, n in one_d]
    else:
        import itertools

        classes = []
        for combo in itertools.product(one_d, repeat=spec.rank):
            classes.append(GeodesicClass(tuple(c[0] for c in combo), math.prod(c[1] for c in combo),
                                         1.0, "n=" + ",".join(str(c[2]) for c in combo)))
    return Spectrum.from_classes(classes, rank=spec.rank, provenance="chebyshev")


@dataclass(frozen=True)
class VerdictRow:
    radius: float
    B: float
    tail_sup: float
    tail_inf: float


def wiener_ikehara_verdict(source, j: int, ray: Sequence[float], radii: Sequence[float]) -> list[VerdictRow]:
    """B along x = t * ray for t in radii, with envelopes sup/inf of B over t' >= t."""
    ray = [float(v) for v in ray]
    if any(v <= 0 for v in ray):
        raise ValueError("ray must point into the open positive orthant")
    radii = sorted(float(t) for t in radii)
    A = _A_function(source, j)
    Bs = [b_ratio(A([t * v for v in ray]), [t * v for v in ray], j) for t in radii]
    rows = []
    for i, t in enumerate(radii):
        tail = Bs[i:]
        rows.append(VerdictRow(t, Bs[i], max(tail), min(tail)))
    return rows
