import json
import subprocess
import sys

import numpy as np
import pytest

from epigeom.cli import main
from epigeom.report import SummaryReport, aggregate, log10_histogram, read_report, write_report
from epigeom.sim import SimConfig, run_trials


def test_log10_histogram_bins():
    h = log10_histogram([0.0, 1e-30, 3e-15, 0.5, 1.0, 7.0])
    assert len(h) == 20
    assert h[0] == (-20, -19, 2)
    assert h[5] == (-15, -14, 1)
    assert h[-1] == (-1, 0, 3)
    assert sum(c for *_, c in h) == 6


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_appendix_report_round_trip(tmp_path, fmt):
    cfg = SimConfig(trials=20, seed=5)
    rep = aggregate(run_trials(cfg), cfg)
    write_report(rep, tmp_path, fmt)
    assert read_report(tmp_path) == rep


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_verify_report_round_trip(tmp_path, fmt):
    assert main(["verify", "--trials", "50", "--seed", "3", "--out", str(tmp_path), "--format", fmt]) == 0
    rep = read_report(tmp_path)
    write_report(rep, tmp_path / "again", fmt)
    assert read_report(tmp_path / "again") == rep
    assert set(rep.identity_max_errors) == {"volume", "distance", "dihedral", "l1_angle", "quadruple_product"}


def test_appendix_csv_schema(tmp_path):
    assert main(["appendix", "--trials", "30", "--seed", "1", "--out", str(tmp_path)]) == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert {"fig4.csv", "fig5.csv", "fig6.csv", "fig7.csv", "metadata.json"} <= names
    assert (tmp_path / "fig4.csv").read_text().splitlines()[0] == "stage,bin_low_log10,bin_high_log10,count"
    assert (tmp_path / "fig5.csv").read_text().splitlines()[0] == "exponent,success_pct"
    assert (tmp_path / "fig6.csv").read_text().splitlines()[0] == "bin_low_log10,bin_high_log10,count"
    md = json.loads((tmp_path / "metadata.json").read_text())
    assert md["seed"] == 1 and md["config"]["trials"] == 30
    rep = read_report(tmp_path)
    for hist in rep.histograms.values():
        assert sum(c for *_, c in hist) == md["non_degenerate"]


def test_appendix_noiseless(tmp_path):
    assert main(["appendix", "--trials", "100", "--sigma", "0", "--out", str(tmp_path)]) == 0
    rep = read_report(tmp_path)
    # every entry of the pre-correction histogram is below 1e-14
    assert all(c == 0 for lo, _, c in rep.histograms["e_hat_before"] if lo >= -14)


def test_verify_deterministic(tmp_path):
    for d in ("a", "b"):
        assert main(["verify", "--trials", "1", "--seed", "7", "--out", str(tmp_path / d)]) == 0
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_unwritable_out_dir(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["verify", "--trials", "10", "--out", str(blocker / "sub")]) == 2
    assert main(["appendix", "--trials", "2", "--out", str(blocker / "sub")]) == 2


def test_bad_trials_is_usage_error(tmp_path):
    assert main(["verify", "--trials", "0", "--out", str(tmp_path)]) == 3


def test_breakdown_ortho(capsys):
    code = main(["breakdown", "--translation", "1,0,0", "--f0", "0,0,1", "--f1", "0,1,0", "--format", "json"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    f = out["fields"]
    assert f["e_hat"] == 1.0
    assert f["volume"] == pytest.approx(1 / 6, abs=1e-15)
    assert f["ray_distance"] == pytest.approx(1.0, abs=1e-15)
    for k in ("parallax", "dihedral", "phi0", "phi1", "theta_l1"):
        assert f[k] == pytest.approx(np.pi / 2, abs=1e-15)


def test_breakdown_text_coplanar(capsys):
    assert main(["breakdown", "--translation", "1 0 0", "--f0", "0 0 1", "--f1", "1 0 1"]) == 0
    out = capsys.readouterr().out
    assert "e_hat" in out and "identity estimates" in out


def test_breakdown_coplanar_estimates_zero(capsys):
    main(["breakdown", "--translation", "1,0,0", "--f0", "0,0,1", "--f1", "1,0,1", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert out["fields"]["e_hat"] == pytest.approx(0.0, abs=1e-16)
    assert all(abs(v) <= 1e-15 for v in out["estimates"].values())


def test_breakdown_reports_degenerate(capsys):
    assert main(["breakdown", "--translation", "1,0,0", "--f0", "1,0,0", "--f1", "1,0,0"]) == 0
    assert "degenerate" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["breakdown", "--translation", "1,0", "--f0", "0,0,1", "--f1", "0,1,0"],
    ["breakdown", "--translation", "1,a,0", "--f0", "0,0,1", "--f1", "0,1,0"],
    ["breakdown", "--translation", "0,0,0", "--f0", "0,0,1", "--f1", "0,1,0"],
    ["breakdown", "--translation", "1,0,0", "--f0", "0,0,0", "--f1", "0,1,0"],
    ["breakdown", "--rotation", "2,0,0,0,1,0,0,0,1", "--translation", "1,0,0", "--f0", "0,0,1", "--f1", "0,1,0"],
    ["frobnicate"],
])
def test_usage_errors_exit_3(argv):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(argv))
    assert exc.value.code == 3


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "epigeom", "verify", "--trials", "10", "--out", str(tmp_path)],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert "PASS" in r.stdout


def test_empty_report_equality():
    assert SummaryReport() == SummaryReport()
