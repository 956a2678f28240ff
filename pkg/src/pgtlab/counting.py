"""Counting functions over a spectrum or a table of fields.

Box conditions are closed on the upper side (``l_k <= T_k``); the epsilon
restriction keeps classes with ``1 - eps < det < 1`` strictly.  All sums go
through :func:`math.fsum`, which is correctly rounded and therefore does not
depend on the order of the summands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from pgtlab.chamber import Spectrum, bound_convert


@dataclass(frozen=True)
class CountQuery:
    bounds: tuple[float, ...]
    convention: str = "log_scale"
    j: int = 0
    epsilon: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "bounds", tuple(float(b) for b in self.bounds))
        if self.convention not in ("log_scale", "mult_scale"):
            raise ValueError(f"unknown convention {self.convention!r}")
        if self.convention == "log_scale" and any(b <= 0 for b in self.bounds):
            raise ValueError(f"log-scale bounds must be > 0, got {self.bounds}")
        if self.convention == "mult_scale" and any(b <= 0 for b in self.bounds):
            raise ValueError(f"multiplicative bounds must be > 0, got {self.bounds}")
        if self.j < 0:
            raise ValueError("j must be nonnegative")
        if self.epsilon is not None and not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")

    def log_bounds(self) -> tuple[float, ...]:
        if self.convention == "log_scale":
            return self.bounds
        return bound_convert(self.bounds, "mult_to_log")


def _log_bounds(query) -> np.ndarray:
    if isinstance(query, CountQuery):
        return np.asarray(query.log_bounds(), dtype=float)
    return np.asarray(query, dtype=float)


def _in_box(spectrum: Spectrum, T) -> np.ndarray:
    T = _log_bounds(T)
    if T.shape != (spectrum.rank,):
        raise ValueError(f"bounds of length {T.size} for a rank {spectrum.rank} spectrum")
    if len(spectrum) == 0:
        return np.zeros(0, dtype=bool)
    return np.all(spectrum.length_array <= T, axis=1)


def _eps_mask(spectrum: Spectrum, epsilon: float) -> np.ndarray:
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    det = spectrum.det_factor_array
    return (det > 1.0 - epsilon) & (det < 1.0)


def psi(spectrum: Spectrum, query) -> float:
    """Sum of flat volumes over classes in the box."""
    mask = _in_box(spectrum, query)
    return math.fsum(spectrum.flat_volume_array[mask])


def phi(spectrum: Spectrum, query) -> float:
    """Sum of ind(gamma) over classes in the box."""
    mask = _in_box(spectrum, query)
    return math.fsum(spectrum.index_array[mask])


def _weighted_lengths(spectrum: Spectrum, j: int) -> np.ndarray:
    if j < 0:
        raise ValueError("j must be nonnegative")
    if len(spectrum) == 0:
        return np.zeros(0)
    return spectrum.index_array * np.prod(spectrum.length_array, axis=1) ** (j + 1)


def phi_j(spectrum: Spectrum, query, j: int | None = None) -> float:
    """Sum of ind(gamma) * (l_1 ... l_r)^(j+1) over the box."""
    if j is None:
        j = query.j if isinstance(query, CountQuery) else 0
    mask = _in_box(spectrum, query)
    return math.fsum(_weighted_lengths(spectrum, j)[mask])


def big_A(spectrum: Spectrum, x: Sequence[float], j: int = 0) -> float:
    """A(x) = sum over l_k <= x_k of l^(j+1) ind; the same sum as phi_j."""
    if any(v <= 0 for v in x):
        raise ValueError(f"x must be positive, got {tuple(x)}")
    return phi_j(spectrum, tuple(x), j)


def _eps_of(query, epsilon):
    if epsilon is None and isinstance(query, CountQuery):
        epsilon = query.epsilon
    if epsilon is None:
        raise ValueError("epsilon is required")
    return epsilon


def psi_eps(spectrum: Spectrum, query, epsilon: float | None = None) -> float:
    epsilon = _eps_of(query, epsilon)
    mask = _in_box(spectrum, query) & _eps_mask(spectrum, epsilon)
    return math.fsum(spectrum.flat_volume_array[mask])


def phi_eps(spectrum: Spectrum, query, epsilon: float | None = None) -> float:
    epsilon = _eps_of(query, epsilon)
    mask = _in_box(spectrum, query) & _eps_mask(spectrum, epsilon)
    return math.fsum(spectrum.index_array[mask])


def pi_count(spectrum: Spectrum, query) -> int:
    # box condition as for psi: l_k <= T_k, i.e. a^{-alpha_k} <= e^{T_k}
    return int(np.count_nonzero(_in_box(spectrum, query)))


class IncompleteEnumeration(RuntimeError):
    """A unit enumeration does not certify the requested box."""


@dataclass(frozen=True)
class ThetaEntry:
    """One order's contribution to theta_S: its weight R*h*lambda_S and its units.

    ``alphas`` holds the alpha-coordinates of the units modulo +-1 that were
    enumerated; ``certified_box`` is the largest box for which that list is
    known to be complete.
    """

    weight: float
    alphas: tuple[tuple[float, ...], ...]
    certified_box: tuple[float, ...]
    label: str = ""


def theta_S(entries: Iterable[ThetaEntry], query) -> float:
    """Sum of R h lambda_S over (order, unit mod +-1) with 0 < alpha_k <= T_k."""
    T = _log_bounds(query) if isinstance(query, CountQuery) else np.asarray(query, dtype=float)
    terms = []
    for entry in entries:
        if np.any(T > np.asarray(entry.certified_box)):
            raise IncompleteEnumeration(
                f"{entry.label or 'entry'}: units certified only up to {entry.certified_box}, "
                f"requested {tuple(T)}"
            )
        if not entry.alphas:
            continue
        a = np.asarray(entry.alphas, dtype=float)
        inside = np.all((a > 0) & (a <= T), axis=1)
        terms.extend([entry.weight] * int(np.count_nonzero(inside)))
    return math.fsum(terms)


NORMALIZERS = ("product_T", "product_T_over_logs", "pnt_profile")


@dataclass(frozen=True)
class RatioRow:
    bounds: tuple[float, ...]
    count: float
    normalizer: float
    ratio: float


@dataclass(frozen=True)
class RatioReport:
    rows: tuple[RatioRow, ...]
    normalizer: str
    constant: float = 1.0
    label: str = ""
    meta: dict = field(default_factory=dict)


def normalizer_value(bounds: Sequence[float], kind: str, constant: float = 1.0, j: int = 0) -> float:
    """Predicted main term at ``bounds``.

    product_T: constant * prod T_k (bounds in the scale the theorem uses).
    product_T_over_logs: prod T_k / log T_k (multiplicative bounds).
    pnt_profile: (prod x_k)^(j+1) exp(sum x_k) (additive bounds), so the ratio is B(x).
    """
    b = [float(v) for v in bounds]
    if kind == "product_T":
        return constant * math.prod(b)
    if kind == "product_T_over_logs":
        if any(v <= 1 for v in b):
            raise ValueError("product_T_over_logs needs bounds > 1")
        return constant * math.prod(v / math.log(v) for v in b)
    if kind == "pnt_profile":
        return constant * math.prod(b) ** (j + 1) * math.exp(math.fsum(b))
    raise ValueError(f"unknown normalizer {kind!r}")


def ratio_report(grid: Sequence[Sequence[float]], counts: Sequence[float], normalizer: str,
                 constant: float = 1.0, j: int = 0, label: str = "") -> RatioReport:
    if len(grid) != len(counts):
        raise ValueError("grid and counts differ in length")
    rows = []
    for bounds, count in zip(grid, counts):
        norm = normalizer_value(bounds, normalizer, constant, j)
        rows.append(RatioRow(tuple(float(v) for v in bounds), float(count), norm, float(count) / norm))
    return RatioReport(tuple(rows), normalizer, constant, label)
