"""Command-line driver: outputs, determinism, and the exit-code contract."""

import csv
import math
import os
import shutil
import subprocess

import pytest

from zbarfit import cli, content
from zbarfit.errors import InequalityError


def read_summary(path):
    with open(path, newline="") as fh:
        return {row["quantity"]: float(row["value"])
                for row in csv.DictReader(fh)}


def test_project_disk(tmp_path, capsys):
    rc = cli.main(["project", "--domain", "disk", "--degree", "10",
                   "--out", str(tmp_path)])
    assert rc == cli.EXIT_OK
    summary = read_summary(tmp_path / "summary.csv")
    assert abs(summary["lambda_sq"] - math.pi / 2) < 1e-8
    assert abs(summary["c0"] - 1.0) < 1e-8
    assert summary["boundary_defect"] < 1e-8
    coef_rows = (tmp_path / "coefficients.csv").read_text().splitlines()
    assert len(coef_rows) == 1 + 11


def test_project_annulus_extra_poles(tmp_path):
    rc = cli.main(["project", "--domain", "annulus:0.5,1", "--degree", "8",
                   "--poles", "0,0:2", "--out", str(tmp_path)])
    assert rc == cli.EXIT_OK
    coef_rows = (tmp_path / "coefficients.csv").read_text().splitlines()
    assert len(coef_rows) == 1 + 9 + 2      # monomials + logderiv + pole


def test_byte_identical_reruns(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        out.mkdir()
        rc = cli.main(["project", "--domain", "ellipse:2,1",
                       "--out", str(out)])
        assert rc == cli.EXIT_OK
    for name in ("summary.csv", "coefficients.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_trace_figure(tmp_path, capsys):
    rc = cli.main(["trace", "--family", "fig3.1", "--resolution", "256",
                   "--out", str(tmp_path)])
    assert rc == cli.EXIT_OK
    assert (tmp_path / "curves.csv").exists()
    svg = (tmp_path / "curves.svg").read_text()
    assert svg.startswith("<svg ")
    out = capsys.readouterr().out
    assert "closed curve" in out


def test_trace_explicit_terms(tmp_path):
    rc = cli.main(["trace", "--power", "3:0.1", "--resolution", "128",
                   "--window=-2,2,-2,2", "--out", str(tmp_path)])
    assert rc == cli.EXIT_OK
    assert (tmp_path / "curves.csv").exists()


def test_sweep_csv_schema(tmp_path):
    rc = cli.main(["sweep", "--domain", "disk", "--grid-h", "0.05",
                   "--norm-h", "0.1", "--out", str(tmp_path)])
    assert rc == cli.EXIT_OK
    with open(tmp_path / "sweep.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == list(content.SWEEP_COLUMNS)
    assert len(rows) == 2
    lam = float(rows[1][rows[0].index("lambda")])
    assert abs(lam - math.sqrt(math.pi / 2)) < 1e-6


def test_sandwich_spec_file_domain(tmp_path):
    spec = tmp_path / "box.ini"
    spec.write_text("[domain]\nkind = polygon\n"
                    "vertices = 0,0; 1,0; 1,1; 0,1\n")
    rc = cli.main(["sandwich", "--domain", str(spec), "--grid-h", "0.04",
                   "--norm-h", "0.1", "--out", str(tmp_path)])
    assert rc == cli.EXIT_OK
    assert (tmp_path / "sweep.csv").exists()


def test_out_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("ZBARFIT_OUT", str(tmp_path))
    rc = cli.main(["project", "--domain", "disk", "--degree", "4"])
    assert rc == cli.EXIT_OK
    assert (tmp_path / "summary.csv").exists()


def test_unknown_domain_is_input_error(tmp_path):
    rc = cli.main(["sweep", "--domain", "heptagon", "--out", str(tmp_path)])
    assert rc == cli.EXIT_INPUT


def test_missing_required_flag_exits_2():
    with pytest.raises(SystemExit) as err:
        cli.main(["project"])
    assert err.value.code == 2


def test_bad_window_is_input_error(tmp_path):
    rc = cli.main(["trace", "--power", "3:0.1", "--window=-2,2,-2",
                   "--out", str(tmp_path)])
    assert rc == cli.EXIT_INPUT


def test_branch_cut_is_numerical_error(tmp_path):
    # complex log coefficient: Re F multivalued, trace must refuse
    rc = cli.main(["trace", "--log", "0,0:0.2,0.3", "--resolution", "64",
                   "--out", str(tmp_path)])
    assert rc == cli.EXIT_NUMERICAL


def test_inequality_exit_code(tmp_path, monkeypatch):
    def explode(*args, **kwargs):
        raise InequalityError("ordering violated")

    monkeypatch.setattr(cli.content, "sandwich", explode)
    rc = cli.main(["sandwich", "--domain", "disk", "--grid-h", "0.05",
                   "--out", str(tmp_path)])
    assert rc == cli.EXIT_INEQUALITY


def test_console_script_installed():
    exe = shutil.which("zbarfit")
    if exe is None:
        pytest.skip("entry point not on PATH")
    out = subprocess.run([exe, "--help"], capture_output=True, text=True,
                         env=dict(os.environ))
    assert out.returncode == 0
    assert "project" in out.stdout and "sweep" in out.stdout
