"""Weyl-chamber spectral data: chamber coordinates, regularity and the index.

A geodesic class is stored only through its positive length coordinates
``l_k = |alpha_k(log a)|``, its flat volume and the factor
``det(1 - a m | n)``.  The group element itself is never built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

PRODUCT_TOL = 1e-9

PROVENANCES = ("synthetic", "chebyshev", "numberfield", "manual")


@dataclass(frozen=True)
class ChamberBasis:
    rank: int
    rho_alpha_coords: tuple[Fraction, ...] = field(init=False)

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise ValueError(f"rank must be a positive integer, got {self.rank!r}")
        # 2 rho = alpha_1 + ... + alpha_r fixes rho in the alpha basis
        object.__setattr__(self, "rho_alpha_coords", (Fraction(1, 2),) * self.rank)


@dataclass(frozen=True)
class GeodesicClass:
    lengths: tuple[float, ...]
    flat_volume: float
    det_factor: float = 1.0
    label: str = ""

    def __post_init__(self):
        lengths = tuple(float(v) for v in self.lengths)
        object.__setattr__(self, "lengths", lengths)
        if not lengths:
            raise ValueError("a geodesic class needs at least one length coordinate")
        if not all(v > 0 and math.isfinite(v) for v in lengths):
            raise ValueError(f"non-regular class: lengths must be finite and > 0, got {lengths}")
        if not (self.flat_volume > 0 and math.isfinite(self.flat_volume)):
            raise ValueError(f"flat_volume must be finite and > 0, got {self.flat_volume}")
        _check_det_factor(self.det_factor)

    @property
    def rank(self) -> int:
        return len(self.lengths)

    @property
    def index(self) -> float:
        return index_of(self)

    def sort_key(self):
        return (self.lengths, self.label)


def _check_det_factor(det_factor: float) -> None:
    if not (0.0 < det_factor <= 1.0):
        raise ValueError(
            f"det_factor must lie in (0, 1] (eigenvalues on n have modulus < 1), got {det_factor}"
        )


@dataclass(frozen=True)
class Spectrum:
    """Finite family of regular classes, kept in canonical order.

    The order is lexicographic by lengths, then label, so every reduction over
    the classes visits them in the same sequence.
    """

    basis: ChamberBasis
    classes: tuple[GeodesicClass, ...] = ()
    provenance: str = "manual"

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        classes = tuple(self.classes)
        for c in classes:
            if c.rank != self.basis.rank:
                raise ValueError(
                    f"class {c.label!r} has rank {c.rank}, spectrum rank is {self.basis.rank}"
                )
        object.__setattr__(self, "classes", tuple(sorted(classes, key=GeodesicClass.sort_key)))

    @classmethod
    def from_classes(cls, classes: Iterable[GeodesicClass], rank: int | None = None,
                     provenance: str = "manual") -> "Spectrum":
        classes = list(classes)
        if rank is None:
            if not classes:
                raise ValueError("rank is required for an empty spectrum")
            rank = classes[0].rank
        return cls(ChamberBasis(rank), tuple(classes), provenance)

    @property
    def rank(self) -> int:
        return self.basis.rank

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    @cached_property
    def length_array(self) -> np.ndarray:
        """(n, r) array of length coordinates in canonical order."""
        return np.array([c.lengths for c in self.classes], dtype=float).reshape(-1, self.rank)

    @cached_property
    def flat_volume_array(self) -> np.ndarray:
        return np.array([c.flat_volume for c in self.classes], dtype=float)

    @cached_property
    def det_factor_array(self) -> np.ndarray:
        return np.array([c.det_factor for c in self.classes], dtype=float)

    @cached_property
    def index_array(self) -> np.ndarray:
        return self.flat_volume_array / self.det_factor_array


def index_of(cls: GeodesicClass) -> float:
    """ind(gamma) = flat volume / det(1 - a m | n)."""
    _check_det_factor(cls.det_factor)
    return cls.flat_volume / cls.det_factor


def _sorted_eigenvalues(eigenvalues: Sequence[float]) -> list[float]:
    vals = [float(v) for v in eigenvalues]
    if len(vals) < 2:
        raise ValueError("need at least two eigenvalues")
    if any(v == 0 for v in vals):
        raise ValueError("eigenvalues must be nonzero")
    prod = math.prod(abs(v) for v in vals)
    if abs(prod - 1.0) > PRODUCT_TOL:
        raise ValueError(f"|product of eigenvalues| = {prod!r}, expected 1")
    vals.sort(key=abs, reverse=True)
    for a, b in zip(vals, vals[1:]):
        if abs(a) == abs(b):
            raise ValueError(f"repeated absolute value {abs(a)}: element is not regular")
    return vals


def det_one_minus_ad(eigenvalues: Sequence[float], signed: bool = False) -> float:
    """prod_{i<j} (1 - rho_j / rho_i) with eigenvalues sorted by |.| descending.

    By default the ratios are taken in absolute value, i.e. only the split part
    a of a*m acts; the result then lies in (0, 1).  With ``signed=True`` the
    signs of the eigenvalues are kept, which can push the product above 1 when
    some ratio is negative; only positivity is checked in that case.
    """
    vals = _sorted_eigenvalues(eigenvalues)
    d = len(vals)
    out = 1.0
    for i in range(d):
        for j in range(i + 1, d):
            ratio = vals[j] / vals[i]
            out *= 1.0 - (ratio if signed else abs(ratio))
    if not out > 0.0:
        raise ArithmeticError(f"det(1 - Ad) = {out} is not positive")
    if not signed and not out < 1.0:
        raise ArithmeticError(f"det(1 - Ad) = {out} outside (0, 1)")
    return out


def alpha_coords(eigenvalues: Sequence[float]) -> tuple[float, ...]:
    """alpha_k = k (d - k) log(|rho_k| / |rho_{k+1}|), k = 1..d-1."""
    vals = _sorted_eigenvalues(eigenvalues)
    d = len(vals)
    return tuple(
        k * (d - k) * (math.log(abs(vals[k - 1])) - math.log(abs(vals[k])))
        for k in range(1, d)
    )


def bound_convert(T: Sequence[float], direction: str) -> tuple[float, ...]:
    """Switch between additive (log) bounds and multiplicative bounds T_k = e^{t_k}."""
    if direction == "log_to_mult":
        return tuple(math.exp(t) for t in T)
    if direction == "mult_to_log":
        if any(t <= 0 for t in T):
            raise ValueError(f"multiplicative bounds must be > 0, got {tuple(T)}")
        return tuple(math.log(t) for t in T)
    raise ValueError(f"unknown direction {direction!r}")
