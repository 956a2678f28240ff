"""Plain-text file formats: spectra, pole models, reports, field tables, field cache.

Every writer emits a ``# <format> v<version>`` line first.  Floats are
written with ``repr`` so reading back gives the identical double.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from pgtlab.chamber import GeodesicClass, Spectrum
from pgtlab.counting import RatioReport
from pgtlab.dirichlet import PoleModel, PoleTerm
from pgtlab.numberfield.fields import (
    CubicPoly, FieldRecord, Splitting, UnitElement, discriminant, index_certified_maximal,
    is_irreducible, is_totally_real, minkowski_h1_certificate, real_embeddings,
    splitting_type, NotMaximalError,
)
from pgtlab.numberfield import order
from pgtlab.numberfield.units import regulator

FORMAT_VERSION = 1
FIELD_TABLE_COLUMNS = ["poly_a", "poly_b", "poly_c", "disc_field", "h", "R",
                       "fu1_c0", "fu1_c1", "fu1_c2", "fu2_c0", "fu2_c1", "fu2_c2"]


class FormatError(ValueError):
    pass


def _fmt(v: float) -> str:
    return repr(float(v))


def _read_header(lines: list[str], name: str) -> tuple[dict, list[str]]:
    if not lines or not lines[0].startswith(f"# {name} v"):
        raise FormatError(f"missing '# {name} v{FORMAT_VERSION}' header")
    version = int(lines[0].split(" v", 1)[1])
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported {name} version {version}")
    meta = {}
    rest = lines[1:]
    while rest and rest[0].startswith("#"):
        for tok in rest[0][1:].split():
            if "=" in tok:
                k, v = tok.split("=", 1)
                meta[k] = v
        rest = rest[1:]
    return meta, rest


# ---------------------------------------------------------------- spectra

def dumps_spectrum(spectrum: Spectrum) -> str:
    r = spectrum.rank
    out = io.StringIO()
    out.write(f"# pgtlab-spectrum v{FORMAT_VERSION}\n")
    out.write(f"# rank={r} provenance={spectrum.provenance}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["label"] + [f"l{k + 1}" for k in range(r)] + ["flat_volume", "det_factor"])
    for c in spectrum.classes:
        w.writerow([c.label] + [_fmt(v) for v in c.lengths] + [_fmt(c.flat_volume), _fmt(c.det_factor)])
    return out.getvalue()


def loads_spectrum(text: str) -> Spectrum:
    meta, rest = _read_header(text.splitlines(), "pgtlab-spectrum")
    r = int(meta["rank"])
    rows = list(csv.reader(rest))
    if not rows or rows[0][0] != "label":
        raise FormatError("missing spectrum column header")
    classes = []
    for row in rows[1:]:
        if len(row) != r + 3:
            raise FormatError(f"expected {r + 3} fields, got {row}")
        classes.append(GeodesicClass(tuple(float(v) for v in row[1:r + 1]),
                                     float(row[r + 1]), float(row[r + 2]), row[0]))
    return Spectrum.from_classes(classes, rank=r, provenance=meta.get("provenance", "manual"))


# ---------------------------------------------------------------- pole models

def dumps_pole_model(model: PoleModel) -> str:
    out = io.StringIO()
    out.write(f"# pgtlab-polemodel v{FORMAT_VERSION}\n# rank={model.rank} j={model.j}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow([f"{p}_theta{k + 1}" for k in range(model.rank) for p in ("re", "im")] + ["coeff"])
    for t in model.terms:
        w.writerow([_fmt(x) for v in t.theta for x in (v.real, v.imag)] + [str(t.coeff)])
    return out.getvalue()


def loads_pole_model(text: str) -> PoleModel:
    meta, rest = _read_header(text.splitlines(), "pgtlab-polemodel")
    r, j = int(meta["rank"]), int(meta["j"])
    rows = list(csv.reader(rest))[1:]
    terms = []
    for row in rows:
        if len(row) != 2 * r + 1:
            raise FormatError(f"expected {2 * r + 1} fields, got {row}")
        theta = tuple(complex(float(row[2 * k]), float(row[2 * k + 1])) for k in range(r))
        terms.append(PoleTerm(theta, int(row[-1])))
    return PoleModel(r, j, tuple(terms))


# ---------------------------------------------------------------- reports

def dumps_ratio_report(report: RatioReport) -> str:
    out = io.StringIO()
    out.write(f"# pgtlab-ratio v{FORMAT_VERSION}\n")
    label = report.label.replace(" ", "_")
    out.write(f"# normalizer={report.normalizer} constant={_fmt(report.constant)} label={label}\n")
    for k, v in sorted(report.meta.items()):
        out.write(f"# {k}={v}\n")
    r = len(report.rows[0].bounds) if report.rows else 0
    w = csv.writer(out, lineterminator="\n")
    w.writerow([f"T{k + 1}" for k in range(r)] + ["count", "normalizer", "ratio"])
    for row in report.rows:
        w.writerow([_fmt(v) for v in row.bounds] + [_fmt(row.count), _fmt(row.normalizer), _fmt(row.ratio)])
    return out.getvalue()


def loads_ratio_rows(text: str) -> list[list[float]]:
    _, rest = _read_header(text.splitlines(), "pgtlab-ratio")
    return [[float(v) for v in row] for row in list(csv.reader(rest))[1:]]


def dumps_table(name: str, columns: Sequence[str], rows: Iterable[Sequence], meta: dict | None = None) -> str:
    out = io.StringIO()
    out.write(f"# {name} v{FORMAT_VERSION}\n")
    for k, v in sorted((meta or {}).items()):
        out.write(f"# {k}={v}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    return out.getvalue()


def write_text(path, text: str) -> None:
    """Write via a temporary file and rename, so readers never see a partial file."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


# ---------------------------------------------------------------- field tables

def field_table_row(rec: FieldRecord) -> list:
    u1, u2 = rec.fundamental_units
    return [rec.poly.a, rec.poly.b, rec.poly.c, rec.disc_field,
            "" if rec.h is None else rec.h, _fmt(rec.R), *u1.coords, *u2.coords]


def dumps_field_table(records: Iterable[FieldRecord]) -> str:
    out = io.StringIO()
    out.write(f"# pgtlab-fieldtable v{FORMAT_VERSION}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(FIELD_TABLE_COLUMNS)
    for rec in records:
        w.writerow(field_table_row(rec))
    return out.getvalue()


def validate_field_row(row: dict, S: Sequence[int] = (), R_tol: float = 1e-9) -> FieldRecord:
    """Rebuild and check one table row; raises ValueError with the rejection reason."""
    try:
        p = CubicPoly(int(row["poly_a"]), int(row["poly_b"]), int(row["poly_c"]))
        disc_field = int(row["disc_field"])
        R_table = float(row["R"])
        fu = [tuple(int(row[f"fu{i}_c{k}"]) for k in range(3)) for i in (1, 2)]
    except (KeyError, ValueError) as exc:
        raise ValueError(f"malformed row: {exc}") from None
    if not is_irreducible(p):
        raise ValueError("polynomial is reducible")
    if not is_totally_real(p):
        raise ValueError("field is not totally real")
    disc_poly = discriminant(p)
    if disc_field <= 0 or disc_poly % disc_field or not _is_square(disc_poly // disc_field):
        raise ValueError(f"discriminant mismatch: disc(poly) = {disc_poly}, disc_field = {disc_field}")
    maximal = index_certified_maximal(p, disc_poly)
    if maximal and disc_field != disc_poly:
        raise ValueError(f"discriminant mismatch: Z[theta] is maximal, disc(poly) = {disc_poly}")
    for coords in fu:
        if abs(order.norm(coords, p.abc)) != 1:
            raise ValueError(f"norm ≠ ±1 for fundamental unit {coords}")
    h_raw = str(row.get("h", "")).strip()
    if not h_raw:
        raise ValueError("class number missing")
    h = int(h_raw)
    if h < 1:
        raise ValueError("class number must be positive")
    emb = tuple(real_embeddings(p))
    rec = FieldRecord(p, disc_poly, disc_field, emb, h=h, source="ingested")
    roots = rec.roots
    units = tuple(UnitElement.from_coords(c, roots) for c in fu)
    try:
        R = regulator(units)
    except ValueError:
        raise ValueError("fundamental units are dependent") from None
    if not math.isclose(R, R_table, rel_tol=R_tol, abs_tol=0.0):
        raise ValueError(f"regulator mismatch: table {R_table!r}, recomputed {R!r}")
    splitting = {}
    for q in sorted(set(S)):
        try:
            sp = splitting_type(p, q)
        except NotMaximalError:
            raise ValueError(f"S-condition: order not maximal at {q}") from None
        if not sp.non_decomposed:
            raise ValueError(f"S-condition: {q} decomposes")
        splitting[q] = sp
    cert = minkowski_h1_certificate(rec) if maximal else "inconclusive"
    if cert == "h_is_1" and h != 1:
        raise ValueError(f"class number {h} contradicts the Minkowski certificate h = 1")
    return rec.with_(
        fundamental_units=units, R=R, splitting=splitting, units_status="table_confirmed",
        certifications={"h_certified_minkowski": cert == "h_is_1", "units_verified": True,
                        "R_recomputed": True, "order_maximal": maximal},
    )


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def ingest_field_table(path, S: Sequence[int] = ()) -> tuple[list[FieldRecord], list[tuple[int, str]]]:
    """Validated records plus (line number, reason) for every rejected row."""
    lines = Path(path).read_text().splitlines()
    body = [(i + 1, ln) for i, ln in enumerate(lines) if ln.strip() and not ln.startswith("#")]
    if not body:
        raise FormatError("empty field table")
    header = next(csv.reader([body[0][1]]))
    header = [h.strip() for h in header]
    missing = [c for c in FIELD_TABLE_COLUMNS if c not in header]
    if missing:
        raise FormatError(f"field table header lacks columns {missing}")
    accepted, rejected = [], []
    for lineno, ln in body[1:]:
        row = dict(zip(header, (v.strip() for v in next(csv.reader([ln])))))
        try:
            accepted.append(validate_field_row(row, S))
        except ValueError as exc:
            rejected.append((lineno, str(exc)))
    accepted.sort(key=lambda r: (r.disc_field, r.poly.key()))
    return accepted, rejected


# ---------------------------------------------------------------- cache

def _frac_pair(fr: Fraction) -> list[int]:
    return [fr.numerator, fr.denominator]


def record_to_json(rec: FieldRecord) -> dict:
    return {
        "format": "pgtlab-fieldcache",
        "version": FORMAT_VERSION,
        "poly": list(rec.poly.abc),
        "disc_poly": rec.disc_poly,
        "disc_field": rec.disc_field,
        "embeddings": [[_frac_pair(lo), _frac_pair(hi)] for lo, hi in rec.embeddings],
        "fundamental_units": [{"coords": list(u.coords), "embeddings": list(u.embeddings)}
                              for u in rec.fundamental_units],
        "h": rec.h,
        "R": rec.R,
        "splitting": {str(p): {"factors": [list(ef) for ef in sp.factors],
                               "non_decomposed": sp.non_decomposed, "f_p": sp.f_p}
                      for p, sp in sorted(rec.splitting.items())},
        "source": rec.source,
        "units_status": rec.units_status,
        "certifications": dict(sorted(rec.certifications.items())),
    }


def record_from_json(doc: dict) -> FieldRecord:
    if doc.get("format") != "pgtlab-fieldcache" or doc.get("version") != FORMAT_VERSION:
        raise FormatError("not a pgtlab field cache document of the supported version")
    return FieldRecord(
        poly=CubicPoly(*doc["poly"]),
        disc_poly=doc["disc_poly"],
        disc_field=doc["disc_field"],
        embeddings=tuple((Fraction(*lo), Fraction(*hi)) for lo, hi in doc["embeddings"]),
        fundamental_units=tuple(UnitElement(tuple(u["coords"]), tuple(u["embeddings"]))
                                for u in doc["fundamental_units"]),
        h=doc["h"],
        R=doc["R"],
        splitting={int(p): Splitting(tuple(tuple(ef) for ef in sp["factors"]), sp["non_decomposed"], sp["f_p"])
                   for p, sp in doc["splitting"].items()},
        source=doc["source"],
        units_status=doc["units_status"],
        certifications=doc["certifications"],
    )


class FieldCache:
    """One JSON document per field, keyed by the canonical polynomial.

    Entries are only ever added; a key that exists is never rewritten.
    """

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def path_for(self, p: CubicPoly) -> Path:
        return self.directory / f"field_{p.a}_{p.b}_{p.c}.json"

    def get(self, p: CubicPoly) -> FieldRecord | None:
        path = self.path_for(p)
        if not path.exists():
            return None
        return record_from_json(json.loads(path.read_text()))

    def put(self, rec: FieldRecord) -> Path:
        path = self.path_for(rec.poly)
        if not path.exists():
            write_text(path, json.dumps(record_to_json(rec), indent=1, sort_keys=True) + "\n")
        return path
