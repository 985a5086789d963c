"""Command line entry point: ``verify``, ``appendix`` and ``breakdown``.

Exit codes: 0 success, 1 property violation, 2 I/O failure, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .geom import GeometryError, ObservationPair, RelativePose
from .interpretations import full_breakdown
from .report import aggregate, identity_report, write_report
from .sim import SimConfig, identity_suite, run_trials

log = logging.getLogger("epigeom")

EXIT_OK, EXIT_VIOLATION, EXIT_IO, EXIT_USAGE = 0, 1, 2, 3

IDENTITY_TOL = 1e-12
AFTER_TOL = 1e-14
ABS_DIFF_TOL = 1e-12
ABS_DIFF_FRACTION = 0.999
OPTIMALITY_MIN_EXPONENT = -9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(n):
    def parse(text):
        try:
            vals = [float(x) for x in text.replace(",", " ").split()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}")
        if len(vals) != n or not all(np.isfinite(vals)):
            raise argparse.ArgumentTypeError(f"expected {n} finite numbers, got {text!r}")
        return vals
    return parse


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="epigeom", description="Normalized epipolar error: identity checks and simulation.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, trials):
        sp.add_argument("--trials", type=int, default=trials)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default="results")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--workers", type=int, default=1, help="worker processes; output does not depend on it")

    common(sub.add_parser("verify", help="run the identity suite on random configurations"), 100_000)
    ap = sub.add_parser("appendix", help="run the camera simulation and write histogram data")
    common(ap, 10_000)
    ap.add_argument("--sigma", type=float, default=10.0, help="pixel noise std")

    bp = sub.add_parser("breakdown", help="print every interpretation for one observation")
    bp.add_argument("--rotation", type=_floats(9), default=[1, 0, 0, 0, 1, 0, 0, 0, 1],
                    help="row-major 3x3 rotation, camera 0 to camera 1")
    bp.add_argument("--translation", type=_floats(3), required=True)
    bp.add_argument("--f0", type=_floats(3), required=True, help="ray in camera 0")
    bp.add_argument("--f1", type=_floats(3), required=True, help="ray in camera 1")
    bp.add_argument("--format", choices=("text", "json"), default="text")
    return p


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    dev = identity_suite(args.trials, args.seed, args.workers)
    rep = identity_report(dev, args.trials, args.seed)
    try:
        write_report(rep, args.out, args.format)
    except OSError as exc:
        log.error("cannot write report: %s", exc)
        return EXIT_IO
    ok = True
    for k, v in rep.identity_max_errors.items():
        passed = v <= IDENTITY_TOL
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} {k:<18} max |dev| = {v:.3e}")
    return EXIT_OK if ok else EXIT_VIOLATION


def appendix_checks(rep) -> dict[str, bool]:
    """Pass/fail of the histogram properties the simulation is expected to show."""
    md = rep.metadata
    if not md["non_degenerate"]:
        return {"non_degenerate_trials": False}
    return {
        "after_correction_below_1e-14": md["e_hat_after_max"] <= AFTER_TOL,
        "abs_diff_below_1e-12_fraction": md["abs_diff_fraction_below_1e-12"] >= ABS_DIFF_FRACTION,
        "optimality_100pct_for_m>=-9": all(
            p == 100.0 for m, p in rep.optimality_curve.items() if m >= OPTIMALITY_MIN_EXPONENT
        ),
    }


def cmd_appendix(args) -> int:
    if args.trials < 1 or args.sigma < 0:
        raise UsageError("--trials must be >= 1 and --sigma >= 0")
    config = SimConfig(trials=args.trials, seed=args.seed, sigma_px=args.sigma)
    rep = aggregate(run_trials(config, args.workers), config)
    try:
        write_report(rep, args.out, args.format)
    except OSError as exc:
        log.error("cannot write report: %s", exc)
        return EXIT_IO
    checks = appendix_checks(rep)
    for name, passed in checks.items():
        print(f"{'PASS' if passed else 'FAIL'} {name}")
    for m, pct in rep.optimality_curve.items():
        print(f"     m={m:>4}  success {pct:6.2f}%")
    return EXIT_OK if all(checks.values()) else EXIT_VIOLATION


def cmd_breakdown(args) -> int:
    try:
        pose = RelativePose(np.reshape(args.rotation, (3, 3)), args.translation)
        obs = ObservationPair(args.f0, args.f1)
    except GeometryError as exc:
        raise UsageError(str(exc))
    b = full_breakdown(pose, obs)
    fields = {
        "e_hat": b.e_hat,
        "volume": b.volume,
        "ray_distance": b.ray_distance,
        "parallax": b.parallax,
        "dihedral": b.dihedral,
        "phi0": b.phi0,
        "phi1": b.phi1,
        "theta_l1": b.theta_l1,
    }
    if args.format == "json":
        print(json.dumps({"fields": fields, "estimates": b.estimates(), "degenerate": b.degenerate},
                         indent=2, sort_keys=True))
        return EXIT_OK
    for k, v in fields.items():
        print(f"{k:<14} {'undefined' if v is None else f'{v:.12g}'}")
    print("identity estimates of e_hat:")
    for k, v in b.estimates().items():
        print(f"  {k:<18} {'degenerate' if v is None else f'{v:.12g}'}")
    for k, reason in b.degenerate.items():
        print(f"degenerate: {k} ({reason})")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    handler = {"verify": cmd_verify, "appendix": cmd_appendix, "breakdown": cmd_breakdown}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"epigeom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
