"""Experiment drivers: theta_S against its main term, the prime geodesic ratio,
Tauberian checks and the chamber-integral check.

Per-item work may be spread over a process pool.  Results are gathered in
input order and every sum is an fsum, so the output bytes do not depend on
the number of workers.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from pgtlab import counting, dirichlet, formats, tauberian
from pgtlab.chamber import bound_convert
from pgtlab.numberfield.fields import FieldRecord, c_constant, lambda_S
from pgtlab.numberfield.units import theta_entry

EXIT_OK, EXIT_INPUT, EXIT_TOLERANCE = 0, 1, 2

THETA_LABEL = "maximal-order slice of theta_S"


class ConfigError(ValueError):
    pass


def _pmap(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _check_axes(axes: Sequence[Sequence[float]]) -> None:
    if not axes:
        raise ConfigError("the bounds grid is empty")
    for ax in axes:
        if not ax:
            raise ConfigError("a grid axis is empty")
        if any(b <= a for a, b in zip(ax, ax[1:])):
            raise ConfigError(f"grid axis {list(ax)} is not strictly increasing")


def grid_points(axes: Sequence[Sequence[float]]) -> list[tuple[float, ...]]:
    return [tuple(p) for p in itertools.product(*axes)]


def _check_tol(name: str, value: float) -> None:
    if not value > 0:
        raise ConfigError(f"{name} must be > 0, got {value}")


# ---------------------------------------------------------------- theta

@dataclass
class ThetaConfig:
    S: tuple[int, ...]
    axes: tuple[tuple[float, ...], ...]
    d: int = 3
    allow_small_S: bool = False
    strict: bool = False
    workers: int = 1

    def validate(self):
        _check_axes(self.axes)
        if len(self.axes) != self.d - 1:
            raise ConfigError(f"theta needs {self.d - 1} grid axes for d = {self.d}")
        if any(a <= 0 for ax in self.axes for a in ax):
            raise ConfigError("theta bounds must be positive")
        if len(set(self.S)) < 2 and not self.allow_small_S:
            raise ConfigError("|S| >= 2 is required (use the small-S override for toy runs)")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


def _theta_job(args):
    rec, S, T_max, allow_small_S, strict = args
    return theta_entry(rec, S, T_max, allow_small_S=allow_small_S, strict=strict)


def theta_members(records: Sequence[FieldRecord], S: Sequence[int]) -> list[FieldRecord]:
    """Records whose maximal order is certified and whose field lies in C(S)."""
    out = []
    for rec in records:
        if not rec.certifications.get("order_maximal", rec.disc_field == rec.disc_poly):
            continue
        try:
            lambda_S(rec, S, allow_small_S=True)
        except ValueError:
            continue
        out.append(rec)
    return out


def run_theta_experiment(records: Sequence[FieldRecord], cfg: ThetaConfig) -> counting.RatioReport:
    cfg.validate()
    members = theta_members(records, cfg.S)
    T_max = tuple(max(ax) for ax in cfg.axes)
    jobs = [(rec, tuple(cfg.S), T_max, cfg.allow_small_S, cfg.strict) for rec in members]
    entries = _pmap(_theta_job, jobs, cfg.workers)
    grid = grid_points(cfg.axes)
    counts = [counting.theta_S(entries, T) for T in grid]
    const = c_constant(cfg.d) / math.sqrt(cfg.d)
    report = counting.ratio_report(grid, counts, "product_T", constant=const, label=THETA_LABEL)
    report.meta.update({"S": "-".join(map(str, sorted(set(cfg.S)))), "fields": len(members),
                        "bounds": "additive"})
    return report


# ---------------------------------------------------------------- prime geodesic ratio

@dataclass
class PgtConfig:
    axes: tuple[tuple[float, ...], ...]  # additive (log) bounds
    statistic: str = "psi"
    workers: int = 1

    def validate(self):
        _check_axes(self.axes)
        if any(a <= 0 for ax in self.axes for a in ax):
            raise ConfigError("bounds must be positive")
        if self.statistic not in ("psi", "phi", "pi"):
            raise ConfigError(f"unknown statistic {self.statistic!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


def _pgt_job(args):
    spectrum, stat, T = args
    fn = {"psi": counting.psi, "phi": counting.phi, "pi": counting.pi_count}[stat]
    return float(fn(spectrum, T))


def run_pgt_experiment(spectrum, cfg: PgtConfig) -> counting.RatioReport:
    cfg.validate()
    if len(cfg.axes) != spectrum.rank:
        raise ConfigError(f"grid has {len(cfg.axes)} axes, spectrum rank is {spectrum.rank}")
    grid = grid_points(cfg.axes)
    counts = _pmap(_pgt_job, [(spectrum, cfg.statistic, T) for T in grid], cfg.workers)
    mult = [bound_convert(T, "log_to_mult") for T in grid]
    kind = "product_T_over_logs" if cfg.statistic == "pi" else "product_T"
    report = counting.ratio_report(mult, counts, kind, label=f"{cfg.statistic} vs main term")
    report.meta.update({"bounds": "multiplicative", "statistic": cfg.statistic})
    return report


# ---------------------------------------------------------------- tauberian

@dataclass
class TauberianConfig:
    j: int = 0
    radii: tuple[float, ...] = (8.0, 10.0, 13.0)
    ray: tuple[float, ...] = (1.0,)
    S1: float = 1.0
    lemma_k: tuple[int, ...] = (0, 1, 2)
    lemma_y: tuple[float, ...] = (20.0, 40.0, 80.0)
    lemma_tol: float = 0.02
    check_lemma: bool = True
    workers: int = 1

    def validate(self):
        _check_tol("lemma tolerance", self.lemma_tol)
        if not self.radii or any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ConfigError("radii must be strictly increasing")
        if any(v <= 0 for v in self.radii + self.ray):
            raise ConfigError("radii and ray entries must be positive")
        if self.S1 <= 0:
            raise ConfigError("S1 must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


def _lemma_job(args):
    S1, k, y = args
    kernel = tauberian.make_kernel("mollifier_square", S1)
    return tauberian.lemma33_check(kernel, k, y)


def run_tauberian_experiment(source, cfg: TauberianConfig) -> tuple[str, str, bool]:
    """Returns (verdict csv, lemma csv, lemma within tolerance)."""
    cfg.validate()
    rows = tauberian.wiener_ikehara_verdict(source, cfg.j, cfg.ray, cfg.radii)
    verdict = formats.dumps_table(
        "pgtlab-verdict", ["radius", "B", "tail_sup", "tail_inf"],
        [(r.radius, r.B, r.tail_sup, r.tail_inf) for r in rows],
        {"j": cfg.j, "ray": ",".join(map(repr, cfg.ray))})
    lemma_rows, ok = [], True
    if cfg.check_lemma:
        kernel = tauberian.make_kernel("mollifier_square", cfg.S1)
        target = kernel.two_pi_f0
        jobs = [(cfg.S1, k, y) for k in cfg.lemma_k for y in cfg.lemma_y]
        values = _pmap(_lemma_job, jobs, cfg.workers)
        for (S1, k, y), v in zip(jobs, values):
            dev = abs(v / target - 1.0)
            ok &= dev <= cfg.lemma_tol
            lemma_rows.append((k, float(y), v, target, dev))
    lemma = formats.dumps_table(
        "pgtlab-lemma", ["k", "y", "value", "two_pi_f0", "rel_deviation"], lemma_rows,
        {"S1": repr(cfg.S1), "tolerance": repr(cfg.lemma_tol),
         "convention": tauberian.FOURIER_CONVENTION.replace(" ", "_")})
    return verdict, lemma, ok


# ---------------------------------------------------------------- chamber integral

@dataclass
class DirichletConfig:
    ranks: tuple[int, ...] = (1, 2)
    js: tuple[int, ...] = (0, 1, 2)
    shifts: tuple[float, ...] = (0.5, 1.0, 2.0)
    rel_tol: float = 1e-6
    resolution: int = 200

    def validate(self):
        _check_tol("relative tolerance", self.rel_tol)
        if any(s <= 0 for s in self.shifts):
            raise ConfigError("shifts s - theta must have positive real part")
        if any(r < 1 for r in self.ranks) or any(j < 0 for j in self.js):
            raise ConfigError("ranks >= 1 and j >= 0 required")


def run_dirichlet_check(cfg: DirichletConfig) -> tuple[str, bool]:
    cfg.validate()
    rows, ok = [], True
    for r in cfg.ranks:
        for j in cfg.js:
            for z in itertools.product(cfg.shifts, repeat=r):
                num, closed, diff = dirichlet.chamber_integral_check(z, (0.0,) * r, j, cfg.resolution)
                rel = diff / abs(closed)
                ok &= rel <= cfg.rel_tol
                rows.append((r, j, ";".join(repr(v) for v in z), num.real, closed.real, rel))
    text = formats.dumps_table("pgtlab-chamber", ["r", "j", "shift", "numeric", "closed_form", "rel_diff"],
                               rows, {"tolerance": repr(cfg.rel_tol)})
    return text, ok
