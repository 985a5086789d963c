"""Summary reports for the identity suite and the simulation, and their CSV/JSON files."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .interpretations import IDENTITIES

LOG10_LOW, LOG10_HIGH = -20, 0

FIG4_STAGES = ("e_hat_before", "e_hat_after")


@dataclass
class SummaryReport:
    histograms: dict[str, list[tuple[int, int, int]]] = field(default_factory=dict)
    optimality_curve: dict[int, float] = field(default_factory=dict)
    identity_max_errors: dict[str, float] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)


def log10_histogram(values) -> list[tuple[int, int, int]]:
    """Counts in unit-width log10 bins over ``[-20, 0]``.

    Values below ``1e-20`` (zero included) land in the first bin, values at
    or above 1 in the last.
    """
    v = np.asarray(values, dtype=float)
    with np.errstate(divide="ignore"):
        lg = np.log10(v)
    idx = np.clip(np.floor(lg), LOG10_LOW, LOG10_HIGH - 1).astype(int) - LOG10_LOW
    counts = np.bincount(idx, minlength=LOG10_HIGH - LOG10_LOW)
    return [(LOG10_LOW + i, LOG10_LOW + i + 1, int(c)) for i, c in enumerate(counts)]


def aggregate(records, config) -> SummaryReport:
    """Histogram and optimality data for a list of trial records."""
    if not records:
        raise ValueError("no trial records to aggregate")
    good = [r for r in records if r.degenerate is None]
    degenerate: dict[str, int] = {}
    for r in records:
        if r.degenerate is not None:
            degenerate[r.degenerate] = degenerate.get(r.degenerate, 0) + 1

    rep = SummaryReport()
    for name in ("e_hat_before", "e_hat_after", "abs_diff", "rel_diff"):
        rep.histograms[name] = log10_histogram([getattr(r, name) for r in good])
    checked = [r for r in good if not r.negative_depth]
    if checked:
        for m in config.perturb_exponents:
            rep.optimality_curve[m] = float(100.0 * np.mean([r.optimality[m] for r in checked]))
    if good:
        for k in IDENTITIES:
            rep.identity_max_errors[k] = float(max(r.identity_errors[k] for r in good))
    abs_diff = np.array([r.abs_diff for r in good])
    after = np.array([r.e_hat_after for r in good])
    before = np.array([r.e_hat_before for r in good])
    rep.metadata = {
        "mode": "appendix",
        "version": __version__,
        "seed": config.seed,
        "config": config.to_dict(),
        "trials": len(records),
        "non_degenerate": len(good),
        "optimality_checked": len(checked),
        "negative_depth": len(good) - len(checked),
        "degenerate": dict(sorted(degenerate.items())),
        "e_hat_before_median": float(np.median(before)) if good else None,
        "e_hat_after_max": float(after.max()) if good else None,
        "abs_diff_fraction_below_1e-12": float(np.mean(abs_diff <= 1e-12)) if good else None,
    }
    return rep


def identity_report(deviations: dict[str, np.ndarray], trials: int, seed: int) -> SummaryReport:
    rep = SummaryReport()
    for k in IDENTITIES:
        rep.histograms[f"deviation_{k}"] = log10_histogram(deviations[k])
        rep.identity_max_errors[k] = float(np.max(deviations[k]))
    rep.metadata = {"mode": "verify", "version": __version__, "seed": seed, "trials": trials}
    return rep


# ---------------------------------------------------------------------------
# file formats


def _to_jsonable(rep: SummaryReport) -> dict:
    return {
        "histograms": {k: [list(b) for b in v] for k, v in rep.histograms.items()},
        "optimality_curve": {str(k): v for k, v in rep.optimality_curve.items()},
        "identity_max_errors": rep.identity_max_errors,
        "metadata": rep.metadata,
    }


def _from_jsonable(d: dict) -> SummaryReport:
    return SummaryReport(
        histograms={k: [tuple(b) for b in v] for k, v in d["histograms"].items()},
        optimality_curve={int(k): v for k, v in d["optimality_curve"].items()},
        identity_max_errors=d["identity_max_errors"],
        metadata=d["metadata"],
    )


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _read_csv(path: Path) -> list[list[str]]:
    with path.open(newline="") as fh:
        return list(csv.reader(fh))[1:]


def write_report(rep: SummaryReport, out_dir, fmt: str = "csv") -> list[Path]:
    """Write ``rep`` under ``out_dir``; raises ``OSError`` when the directory is unusable."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path = out / "report.json"
        _write_json(path, _to_jsonable(rep))
        return [path]
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")

    paths = []
    hists = dict(rep.histograms)
    if all(s in hists for s in FIG4_STAGES):
        rows = [(s, *b) for s in FIG4_STAGES for b in hists.pop(s)]
        paths.append(out / "fig4.csv")
        _write_csv(paths[-1], ("stage", "bin_low_log10", "bin_high_log10", "count"), rows)
    for fig, name in (("fig6.csv", "abs_diff"), ("fig7.csv", "rel_diff")):
        if name in hists:
            paths.append(out / fig)
            _write_csv(paths[-1], ("bin_low_log10", "bin_high_log10", "count"), hists.pop(name))
    if rep.optimality_curve:
        paths.append(out / "fig5.csv")
        _write_csv(paths[-1], ("exponent", "success_pct"),
                   [(m, repr(p)) for m, p in rep.optimality_curve.items()])
    if hists:
        paths.append(out / "histograms.csv")
        _write_csv(paths[-1], ("name", "bin_low_log10", "bin_high_log10", "count"),
                   [(k, *b) for k, v in hists.items() for b in v])
    paths.append(out / "identities.csv")
    _write_csv(paths[-1], ("identity", "max_abs_deviation"),
               [(k, repr(v)) for k, v in rep.identity_max_errors.items()])
    paths.append(out / "metadata.json")
    _write_json(paths[-1], rep.metadata)
    return paths


def read_report(out_dir) -> SummaryReport:
    """Inverse of :func:`write_report` for either format."""
    out = Path(out_dir)
    if (out / "report.json").exists():
        return _from_jsonable(json.loads((out / "report.json").read_text()))

    rep = SummaryReport()
    if (out / "fig4.csv").exists():
        for stage, lo, hi, c in _read_csv(out / "fig4.csv"):
            rep.histograms.setdefault(stage, []).append((int(lo), int(hi), int(c)))
    for fig, name in (("fig6.csv", "abs_diff"), ("fig7.csv", "rel_diff")):
        if (out / fig).exists():
            rep.histograms[name] = [(int(a), int(b), int(c)) for a, b, c in _read_csv(out / fig)]
    if (out / "histograms.csv").exists():
        for name, lo, hi, c in _read_csv(out / "histograms.csv"):
            rep.histograms.setdefault(name, []).append((int(lo), int(hi), int(c)))
    if (out / "fig5.csv").exists():
        rep.optimality_curve = {int(m): float(p) for m, p in _read_csv(out / "fig5.csv")}
    rep.identity_max_errors = {k: float(v) for k, v in _read_csv(out / "identities.csv")}
    rep.metadata = json.loads((out / "metadata.json").read_text())
    return rep
