import math

import numpy as np
import pytest
from hypothesis import strategies as st

from pgtlab.chamber import GeodesicClass, Spectrum
from pgtlab.numberfield.fields import CubicPoly, FieldRecord, discriminant, real_embeddings
from pgtlab.numberfield.units import with_units

SEVENTH = CubicPoly(-1, -2, 1)  # x^3 - x^2 - 2x + 1, disc 49
NINTH = CubicPoly(0, -3, -1)  # x^3 - 3x - 1, disc 81


def bare_record(p: CubicPoly) -> FieldRecord:
    d = discriminant(p)
    return FieldRecord(p, d, d, tuple(real_embeddings(p)))


@pytest.fixture(scope="session")
def disc49():
    return with_units(bare_record(SEVENTH), 10).with_(h=1)


@pytest.fixture(scope="session")
def disc81():
    return with_units(bare_record(NINTH), 10).with_(h=1)


def brute_force_units(abc, H):
    """Units u mod +-1 with |coords| <= H, as canonical coordinate tuples."""
    from pgtlab.numberfield import order

    coords, norms = order.norms_in_box(abc, H)
    out = set()
    for row, n in zip(coords, norms):
        if abs(int(n)) == 1:
            c = tuple(int(v) for v in row)
            out.add(order.canonical_sign(c))
    return out


@st.composite
def spectra(draw, rank=None, max_classes=25, with_det=True):
    r = draw(st.integers(1, 3)) if rank is None else rank
    n = draw(st.integers(0, max_classes))
    pos = st.floats(0.01, 10.0, allow_nan=False, allow_infinity=False)
    classes = []
    for i in range(n):
        lengths = tuple(draw(pos) for _ in range(r))
        vol = draw(st.floats(0.01, 5.0))
        det = draw(st.floats(0.05, 1.0)) if with_det else 1.0
        classes.append(GeodesicClass(lengths, vol, det, f"c{i}"))
    return Spectrum.from_classes(classes, rank=r, provenance="synthetic")


def random_spectrum(rng: np.random.Generator, rank: int, n: int, unit_det_share: float = 0.2) -> Spectrum:
    """unit_det_share of the classes get det factor exactly 1 (never the case for regular geodesics)."""
    classes = []
    for i in range(n):
        lengths = tuple(float(v) for v in rng.uniform(0.05, 8.0, rank))
        det = 1.0 if rng.random() < unit_det_share else float(rng.uniform(0.05, 1.0))
        classes.append(GeodesicClass(lengths, float(rng.uniform(0.1, 3.0)), det, f"c{i}"))
    return Spectrum.from_classes(classes, rank=rank, provenance="synthetic")


def close(a, b, rel=1e-12, abs_=0.0):
    return math.isclose(a, b, rel_tol=rel, abs_tol=abs_)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
