"""Command line: ``pgtlab <noun> <verb> --flag value ...``.

Exit codes: 0 success, 1 usage or input error, 2 a verification command
found a numeric tolerance breach.  Output files are written only after all
input has been validated, and atomically.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from pgtlab import experiments as ex
from pgtlab import formats, tauberian
from pgtlab.experiments import EXIT_INPUT, EXIT_OK, EXIT_TOLERANCE


class InputError(Exception):
    pass


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        formats.write_text(output, text)


def _load_records(args):
    accepted, rejected = formats.ingest_field_table(args.table, args.S)
    for lineno, reason in rejected:
        print(f"{args.table}:{lineno}: rejected: {reason}", file=sys.stderr)
    return accepted, rejected


# ---------------------------------------------------------------- handlers

def cmd_fields_enumerate(args) -> int:
    from pgtlab.numberfield.fields import EnumerationConfig, enumerate_fields, minkowski_h1_certificate
    from pgtlab.numberfield.units import with_units

    if args.disc_bound < 1:
        raise InputError("--disc-bound must be positive")
    if args.S and len(set(args.S)) < 2 and not args.allow_small_S:
        raise InputError("|S| >= 2 is required (pass --allow-small-S for toy runs)")
    cfg = EnumerationConfig(args.a_max, args.b_max, args.c_max)
    cache = formats.FieldCache(args.cache) if args.cache else None
    out = []
    for rec in enumerate_fields(args.disc_bound, args.S, cfg):
        cached = cache.get(rec.poly) if cache else None
        if cached is not None and cached.fundamental_units:
            out.append(cached)
            continue
        rec = with_units(rec, args.unit_search)
        if minkowski_h1_certificate(rec) == "h_is_1":
            rec = rec.with_(h=1, certifications=dict(rec.certifications, h_certified_minkowski=True,
                                                     order_maximal=True))
        if cache:
            cache.put(rec)
        out.append(rec)
    uncertified = sum(r.h is None for r in out)
    if uncertified:
        print(f"{uncertified} field(s) without a certified class number; h left blank", file=sys.stderr)
    _emit(formats.dumps_field_table(out), args.output)
    return EXIT_OK


def cmd_fields_ingest(args) -> int:
    accepted, rejected = _load_records(args)
    print(f"accepted {len(accepted)}, rejected {len(rejected)}", file=sys.stderr)
    _emit(formats.dumps_field_table(accepted), args.output)
    return EXIT_OK


def cmd_units_box(args) -> int:
    from pgtlab.numberfield.fields import CubicPoly, FieldRecord, discriminant, is_totally_real, real_embeddings
    from pgtlab.numberfield.units import enumerate_units_in_box, with_units

    if len(args.poly) != 3:
        raise InputError("--poly takes a,b,c for x^3 + a x^2 + b x + c")
    if len(args.T) != 2 or any(t <= 0 for t in args.T):
        raise InputError("--T takes two positive bounds")
    p = CubicPoly(*args.poly)
    try:
        if not is_totally_real(p):
            raise InputError(f"{p} is not totally real")
    except ValueError as exc:
        raise InputError(str(exc)) from None
    d = discriminant(p)
    rec = with_units(FieldRecord(p, d, d, tuple(real_embeddings(p))), args.unit_search)
    box = enumerate_units_in_box(rec, args.T, strict=args.strict)
    rows = [(*u.coords, *u.alpha, *m) for u, m in zip(box.units, box.exponents)]
    _emit(formats.dumps_table("pgtlab-units", ["c0", "c1", "c2", "alpha1", "alpha2", "m1", "m2"], rows,
                              {"poly": f"{p.a},{p.b},{p.c}", "T": ",".join(map(repr, box.box)),
                               "radii": ",".join(map(str, box.radii)), "units_status": rec.units_status}),
          args.output)
    return EXIT_OK


def cmd_theta_run(args) -> int:
    records, _ = _load_records(args)
    cfg = ex.ThetaConfig(tuple(args.S), tuple(args.grid or ()), allow_small_S=args.allow_small_S,
                         strict=args.strict, workers=args.workers)
    report = ex.run_theta_experiment(records, cfg)
    _emit(formats.dumps_ratio_report(report), args.output)
    return EXIT_OK


def _read_spectrum(path: Path):
    try:
        return formats.loads_spectrum(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read spectrum {path}: {exc}") from None


def cmd_pgt_run(args) -> int:
    spectrum = _read_spectrum(args.spectrum)
    cfg = ex.PgtConfig(tuple(args.grid or ()), args.statistic, args.workers)
    _emit(formats.dumps_ratio_report(ex.run_pgt_experiment(spectrum, cfg)), args.output)
    return EXIT_OK


def cmd_tauberian_check(args) -> int:
    if args.source == "spectrum":
        if args.spectrum is None:
            raise InputError("--source spectrum needs --spectrum PATH")
        source = _read_spectrum(args.spectrum)
        rank = source.rank
    elif args.source == "chebyshev":
        source = tauberian.synth_spectrum(tauberian.SynthSpec(1, args.j, "chebyshev", cutoff=args.cutoff))
        rank = 1
    else:
        rank = len(args.ray)
        source = tauberian.ExactContinuum(rank, args.j)
    if len(args.ray) != rank:
        raise InputError(f"--ray has {len(args.ray)} entries, source rank is {rank}")
    cfg = ex.TauberianConfig(args.j, tuple(args.radii), tuple(args.ray), args.S1, lemma_tol=args.lemma_tol,
                             check_lemma=not args.skip_lemma, workers=args.workers)
    verdict, lemma, ok = ex.run_tauberian_experiment(source, cfg)
    _emit(verdict, args.output)
    if args.lemma_output is not None:
        formats.write_text(args.lemma_output, lemma)
    elif not args.skip_lemma:
        sys.stderr.write(lemma)
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_dirichlet_check(args) -> int:
    cfg = ex.DirichletConfig(tuple(args.ranks), tuple(args.js), tuple(args.shifts), args.rel_tol, args.resolution)
    text, ok = ex.run_dirichlet_check(cfg)
    _emit(text, args.output)
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_spectrum_synth(args) -> int:
    model = None
    if args.pole_model is not None:
        try:
            model = formats.loads_pole_model(Path(args.pole_model).read_text())
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read pole model: {exc}") from None
    if args.generator == "exact_continuum":
        raise InputError("exact_continuum is analytic and has no class list to write")
    try:
        spec = tauberian.SynthSpec(args.rank, args.j, args.generator, args.step, args.cutoff, model)
        spectrum = tauberian.synth_spectrum(spec)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(formats.dumps_spectrum(spectrum), args.output)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pgtlab", allow_abbrev=False,
                                     description="Prime geodesic counting experiments.")
    nouns = parser.add_subparsers(dest="noun", required=True)

    def verb(noun_parser, name, handler, help_text):
        p = noun_parser.add_parser(name, help=help_text, allow_abbrev=False)
        p.set_defaults(handler=handler)
        p.add_argument("--output", type=Path, default=None, help="output file (default: stdout)")
        return p

    fields = nouns.add_parser("fields", help="cubic field tables").add_subparsers(dest="verb", required=True)
    p = verb(fields, "enumerate", cmd_fields_enumerate, "enumerate totally real cubic fields")
    p.add_argument("--disc-bound", type=int, required=True)
    p.add_argument("--S", type=_ints, default=())
    p.add_argument("--allow-small-S", action="store_true")
    p.add_argument("--a-max", type=int, default=15)
    p.add_argument("--b-max", type=int, default=60)
    p.add_argument("--c-max", type=int, default=60)
    p.add_argument("--unit-search", type=int, default=10, help="coordinate bound of the unit search")
    p.add_argument("--cache", type=Path, default=None)
    p = verb(fields, "ingest", cmd_fields_ingest, "validate an external field table")
    p.add_argument("--table", type=Path, required=True)
    p.add_argument("--S", type=_ints, default=())

    units = nouns.add_parser("units", help="unit groups").add_subparsers(dest="verb", required=True)
    p = verb(units, "box", cmd_units_box, "units with alpha in a box")
    p.add_argument("--poly", type=_ints, required=True)
    p.add_argument("--T", type=_floats, required=True)
    p.add_argument("--unit-search", type=int, default=10)
    p.add_argument("--strict", action="store_true")

    theta = nouns.add_parser("theta", help="theta_S experiment").add_subparsers(dest="verb", required=True)
    p = verb(theta, "run", cmd_theta_run, "theta_S against (c/sqrt d) T1 T2")
    p.add_argument("--table", type=Path, required=True)
    p.add_argument("--S", type=_ints, required=True)
    p.add_argument("--grid", type=_floats, action="append", help="one axis of bounds; repeat per axis")
    p.add_argument("--allow-small-S", action="store_true")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--workers", type=int, default=1)

    pgt = nouns.add_parser("pgt", help="prime geodesic ratio").add_subparsers(dest="verb", required=True)
    p = verb(pgt, "run", cmd_pgt_run, "counting function against prod T")
    p.add_argument("--spectrum", type=Path, required=True)
    p.add_argument("--grid", type=_floats, action="append", help="additive bounds for one axis; repeat per axis")
    p.add_argument("--statistic", choices=("psi", "phi", "pi"), default="psi")
    p.add_argument("--workers", type=int, default=1)

    taub = nouns.add_parser("tauberian", help="Tauberian checks").add_subparsers(dest="verb", required=True)
    p = verb(taub, "check", cmd_tauberian_check, "B along a ray plus the kernel limit check")
    p.add_argument("--source", choices=("chebyshev", "exact_continuum", "spectrum"), default="chebyshev")
    p.add_argument("--spectrum", type=Path, default=None)
    p.add_argument("--cutoff", type=float, default=13.0, help="chebyshev: keep n <= exp(cutoff)")
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--radii", type=_floats, default=(8.0, 10.0, 13.0))
    p.add_argument("--ray", type=_floats, default=(1.0,))
    p.add_argument("--S1", type=float, default=1.0)
    p.add_argument("--lemma-tol", type=float, default=0.02)
    p.add_argument("--lemma-output", type=Path, default=None)
    p.add_argument("--skip-lemma", action="store_true")
    p.add_argument("--workers", type=int, default=1)

    dire = nouns.add_parser("dirichlet", help="Dirichlet series checks").add_subparsers(dest="verb", required=True)
    p = verb(dire, "check", cmd_dirichlet_check, "chamber integral against its closed form")
    p.add_argument("--ranks", type=_ints, default=(1, 2))
    p.add_argument("--js", type=_ints, default=(0, 1, 2))
    p.add_argument("--shifts", type=_floats, default=(0.5, 1.0, 2.0))
    p.add_argument("--rel-tol", type=float, default=1e-6)
    p.add_argument("--resolution", type=int, default=200)

    spec = nouns.add_parser("spectrum", help="synthetic spectra").add_subparsers(dest="verb", required=True)
    p = verb(spec, "synth", cmd_spectrum_synth, "write a synthetic spectrum")
    p.add_argument("--generator", choices=("product_lattice", "chebyshev", "exact_continuum"),
                   default="product_lattice")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--step", type=float, default=0.5)
    p.add_argument("--cutoff", type=float, default=5.0)
    p.add_argument("--pole-model", type=Path, default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.handler(args)
    except (InputError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
