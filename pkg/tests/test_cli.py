import subprocess
import sys
from pathlib import Path

import pytest

from pgtlab import formats
from pgtlab.cli import main

TABLE = Path(formats.__file__).parent / "data" / "cubic_fields_1956.csv"


def run(tmp_path, *argv):
    out = tmp_path / "out.txt"
    code = main([*argv, "--output", str(out)])
    return code, (out.read_text() if out.exists() else None)


def test_fields_enumerate_small(tmp_path):
    code, text = run(tmp_path, "fields", "enumerate", "--disc-bound", "100", "--a-max", "2",
                     "--b-max", "10", "--c-max", "10")
    assert code == 0
    recs = [ln.split(",") for ln in text.splitlines()[2:]]
    assert [int(r[3]) for r in recs] == [49, 81]
    assert all(r[4] == "1" for r in recs)


def test_fields_ingest_bundled(tmp_path, capsys):
    code, text = run(tmp_path, "fields", "ingest", "--table", str(TABLE), "--S", "2,3")
    assert code == 0
    assert "accepted 17, rejected 41" in capsys.readouterr().err
    assert len(text.splitlines()) == 2 + 17


def test_units_box(tmp_path):
    code, text = run(tmp_path, "units", "box", "--poly=-1,-2,1", "--T", "3,3")
    assert code == 0
    assert text.startswith("# pgtlab-units v1")
    rows = text.splitlines()[-1]
    assert len(rows.split(",")) == 7


def test_units_box_bad_poly(tmp_path):
    assert run(tmp_path, "units", "box", "--poly=0,0,-2", "--T", "3,3") == (1, None)
    assert run(tmp_path, "units", "box", "--poly", "1,2", "--T", "3,3") == (1, None)


def test_theta_run(tmp_path):
    code, text = run(tmp_path, "theta", "run", "--table", str(TABLE), "--S", "2,3",
                     "--grid", "2,4", "--grid", "2,4")
    assert code == 0
    rows = formats.loads_ratio_rows(text)
    assert len(rows) == 4 and all(r[2] >= 0 for r in rows)
    assert "maximal-order_slice" in text


def test_theta_run_single_prime_refused(tmp_path):
    assert run(tmp_path, "theta", "run", "--table", str(TABLE), "--S", "2", "--grid", "2", "--grid", "2") == (1, None)


def test_spectrum_then_pgt(tmp_path):
    spec = tmp_path / "spec.csv"
    assert main(["spectrum", "synth", "--generator", "chebyshev", "--cutoff", "8", "--output", str(spec)]) == 0
    code, text = run(tmp_path, "pgt", "run", "--spectrum", str(spec), "--grid", "6,8")
    assert code == 0
    rows = formats.loads_ratio_rows(text)
    assert len(rows) == 2 and abs(rows[-1][-1] - 1) < 0.02


def test_pgt_missing_spectrum(tmp_path):
    assert run(tmp_path, "pgt", "run", "--spectrum", str(tmp_path / "none.csv"), "--grid", "1")[0] == 1


def test_tauberian_exit_codes(tmp_path):
    code, text = run(tmp_path, "tauberian", "check", "--source", "exact_continuum", "--radii", "5,10",
                     "--lemma-output", str(tmp_path / "lemma.csv"))
    assert code == 0 and text.startswith("# pgtlab-verdict v1")
    assert (tmp_path / "lemma.csv").read_text().startswith("# pgtlab-lemma v1")
    code, _ = run(tmp_path, "tauberian", "check", "--source", "exact_continuum", "--radii", "5",
                  "--lemma-tol", "1e-9")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["dirichlet", "check", "--rel-tol", "0"],
    ["tauberian", "check", "--lemma-tol", "-1"],
    ["tauberian", "check", "--radii", "10,8"],
    ["theta", "run", "--table", str(TABLE), "--S", "2,3", "--grid", "2,1", "--grid", "1"],
    ["spectrum", "synth", "--generator", "product_lattice", "--step", "-1"],
])
def test_bad_config_exits_1_without_output(tmp_path, argv):
    assert run(tmp_path, *argv) == (1, None)


def test_unknown_verb_and_abbreviation(tmp_path):
    assert main(["dirichlet", "frobnicate"]) == 1
    assert main(["dirichlet", "check", "--rel", "1e-3"]) == 1
    assert main(["--help"]) == 0


def test_dirichlet_breach_is_exit_2(tmp_path):
    code, text = run(tmp_path, "dirichlet", "check", "--ranks", "1", "--js", "2", "--shifts", "0.5",
                     "--rel-tol", "1e-300")
    assert code == 2 and text is not None


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "pgtlab", "dirichlet", "check", "--ranks", "1", "--js", "0",
                          "--shifts", "1"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("# pgtlab-chamber v1")
