"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import compare_bounds
from .cases import SATURATION_CASES, saturation_case
from .certify import (
    EXACT_TOL,
    OptimizerConfig,
    certify,
    minimize_entropy_sum,
    state_from_degrees,
    verify_saturating_state,
)
from .errors import DomainError
from .mubs import mub_bases, mub_catalog, mub_report
from .qutrit import gamma_surface, surface_csv
from .records import (
    RecordError,
    RunRecord,
    complex_list,
    default_seed,
    result_dict,
    save_record,
    write_atomic,
)
from .quantum import spin_observables

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _add_observable_args(p: argparse.ArgumentParser, required: bool = True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--spin", help="spin value: 1, 3/2 or 2")
    g.add_argument("--dim", type=int, help="MUB dimension, 2..5")
    p.add_argument("--observables", default="x,y,z", help="spin components, e.g. x,z (default x,y,z)")
    p.add_argument("--mubs", type=int, help="number of MUBs L (first L of the catalog)")
    p.add_argument("--subset", type=_int_list, help="explicit 1-based MUB indices, e.g. 1,2,4")


def _add_optimizer_args(p: argparse.ArgumentParser):
    p.add_argument("--starts", type=int, default=256, help="number of random starts")
    p.add_argument("--max-iters", type=int, default=2000, help="simplex iterations per start")
    p.add_argument("--seed", type=int, default=None, help="master seed (default $EURTIGHT_SEED or 0)")
    p.add_argument("--workers", type=int, default=1, help="threads; never changes the result")


def build_observables(args):
    if args.spin is not None:
        if args.mubs is not None or args.subset is not None:
            raise UsageError("--mubs/--subset apply to --dim, not --spin")
        return spin_observables(args.spin, args.observables.split(","))
    if args.mubs is None and args.subset is None:
        raise UsageError("--dim needs --mubs L or --subset")
    return mub_bases(args.dim, args.mubs, args.subset)


def _observable_echo(args) -> dict:
    if args.spin is not None:
        return {"spin": args.spin, "observables": args.observables}
    return {"dim": args.dim, "mubs": args.mubs, "subset": args.subset}


def _config(args) -> OptimizerConfig:
    seed = default_seed() if args.seed is None else args.seed
    return OptimizerConfig(n_starts=args.starts, max_iters=args.max_iters, seed=seed, workers=args.workers)


def _emit(record: RunRecord, output) -> None:
    if output:
        save_record(record, output)
    else:
        sys.stdout.write(record.dumps())


def cmd_minimize(args) -> int:
    obs = build_observables(args)
    cfg = _config(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        result = minimize_entropy_sum(obs, cfg)
    cert = certify(result, obs, args.oracle_resolution) if args.certify else None
    command = {"name": "minimize", **_observable_echo(args), "certify": bool(args.certify)}
    payload = {"observables": obs.describe(), "annotations": list(obs.annotations),
               "result": result_dict(result, cert)}
    record = RunRecord(command, cfg.numeric(), payload)
    _emit(record, args.output)
    if args.output:
        print(f"min {result.min_value:.9f} over {'+'.join(obs.labels)}; "
              f"{result.restarts_converged_to_best}/{cfg.n_starts} starts at best")
        if result.nonconvergence_warning:
            print("warning: most starts did not converge", file=sys.stderr)
    return EXIT_OK


def cmd_bounds(args) -> int:
    obs = build_observables(args)
    certified = None
    config: dict = {}
    if args.certify:
        cfg = _config(args)
        certified = minimize_entropy_sum(obs, cfg).min_value
        config = cfg.numeric()
    report = compare_bounds(obs, certified)
    command = {"name": "bounds", **_observable_echo(args), "certify": bool(args.certify)}
    record = RunRecord(command, config, {"report": report.as_dict(),
                                         "dominance_violations": [b.name for b in report.dominance_violations()]})
    _emit(record, args.output)
    if args.output:
        strongest = report.strongest
        for b in report.literature:
            mark = "  <- strongest" if b is strongest else ""
            print(f"{b.name:6s} {b.value:.6f}{mark}")
    return EXIT_OK


def cmd_surface(args) -> int:
    if args.resolution < 2:
        raise UsageError("--resolution must be at least 2")
    grid = gamma_surface(args.resolution)
    write_atomic(args.output, surface_csv(grid))
    meta = {"csv": str(args.output), "rows": int(len(grid)), "resolution": args.resolution,
            "min_gamma": float(grid[:, 2].min()), "argmin": [float(v) for v in grid[np.argmin(grid[:, 2]), :2]]}
    record = RunRecord({"name": "surface", "resolution": args.resolution}, {}, {"surface": meta})
    if args.record:
        save_record(record, args.record)
    print(f"wrote {len(grid)} rows to {args.output}; min gamma {meta['min_gamma']:.12g}")
    return EXIT_OK


def _custom_check(args):
    if args.expected is None or args.angles_deg is None:
        raise UsageError("custom verification needs --angles-deg and --expected with --spin or --dim")
    obs = build_observables(args)
    if len(args.angles_deg) != obs.dim - 1:
        raise UsageError(f"need {obs.dim - 1} angles for dimension {obs.dim}")
    state = state_from_degrees(args.angles_deg, args.phases_deg)
    return obs, state


def cmd_verify(args) -> int:
    if args.list:
        for c in SATURATION_CASES:
            print(f"{c.name:24s} {c.description}")
        return EXIT_OK
    lines = []
    failed = False
    if args.spin is not None or args.dim is not None:
        obs, state = _custom_check(args)
        chk = verify_saturating_state(state, obs, args.expected, args.tolerance)
        lines.append({"case": "custom", "state": complex_list(state.amplitudes), "value": chk.value,
                      "expected": chk.expected, "residual": chk.residual, "tolerance": chk.tolerance,
                      "passed": chk.passed})
        failed = not chk.passed
        print(f"{'PASS' if chk.passed else 'FAIL'} custom value={chk.value:.9f} residual={chk.residual:.3g}")
    else:
        try:
            cases = [saturation_case(n) for n in args.case] if args.case else list(SATURATION_CASES)
        except KeyError as exc:
            raise UsageError(f"unknown case {exc.args[0]!r}; try --list") from exc
        for case in cases:
            checks = case.run()
            ok = all(c.passed for c in checks)
            worst = max(checks, key=lambda c: c.residual)
            failed |= not ok
            lines.append({"case": case.name, "expected": case.expected, "tolerance": case.tolerance,
                          "states": len(checks), "worst_value": worst.value,
                          "worst_residual": worst.residual, "passed": ok})
            print(f"{'PASS' if ok else 'FAIL'} {case.name} expected={case.expected:.6g} "
                  f"worst_residual={worst.residual:.3g} ({len(checks)} states)")
    record = RunRecord({"name": "verify", "case": args.case}, {}, {"checks": lines})
    if args.output:
        save_record(record, args.output)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_catalog(args) -> int:
    if not 2 <= args.dim <= 5:
        raise UsageError(f"catalog covers d = 2..5, got {args.dim}")
    mats, notes = mub_catalog(args.dim)
    report = mub_report(mats)
    payload = {
        "dim": args.dim,
        "bases": [{"label": f"A{i + 1}", "columns": [complex_list(m[:, k]) for k in range(args.dim)]}
                  for i, m in enumerate(mats)],
        "max_bias_deviation": report.max_bias_deviation,
        "max_unitarity_defect": report.max_unitarity_defect,
        "annotations": notes,
    }
    record = RunRecord({"name": "catalog", "dim": args.dim}, {}, payload)
    if args.output:
        save_record(record, args.output)
    print(f"d={args.dim}: {len(mats)} bases, unbiasedness deviation {report.max_bias_deviation:.3g}, "
          f"unitarity defect {report.max_unitarity_defect:.3g}")
    for note in notes:
        print(f"note: {note}")
    if args.show:
        for i, m in enumerate(mats):
            print(f"A{i + 1} =")
            print(np.array2string(np.round(m, 6), max_line_width=120))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eurtight", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("minimize", help="minimize the entropy sum of an observable set")
    _add_observable_args(p)
    _add_optimizer_args(p)
    p.add_argument("--certify", action="store_true", help="attach a grid-oracle certificate")
    p.add_argument("--oracle-resolution", type=int, default=24)
    p.add_argument("--output", type=Path, help="record path (default: print record)")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("bounds", help="literature bounds for an observable set")
    _add_observable_args(p)
    _add_optimizer_args(p)
    p.add_argument("--certify", action="store_true", help="attach a fresh minimization")
    p.add_argument("--output", type=Path)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("surface", help="write the spin-1 gamma surface as CSV")
    p.add_argument("--resolution", type=int, required=True, help="grid points per simplex edge")
    p.add_argument("--output", type=Path, required=True, help="CSV path")
    p.add_argument("--record", type=Path, help="optional run-record path")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("verify", help="check registered or custom saturating states")
    p.add_argument("--case", action="append", help="registered case name (repeatable)")
    p.add_argument("--list", action="store_true", help="list registered cases")
    _add_observable_args(p, required=False)
    p.add_argument("--angles-deg", type=_float_list, help="chart angles in degrees, d-1 values")
    p.add_argument("--phases-deg", type=_float_list, help="chart phases in degrees, d-1 values")
    p.add_argument("--expected", type=float)
    p.add_argument("--tolerance", type=float, default=EXACT_TOL)
    p.add_argument("--output", type=Path)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", help="show the MUB catalog and its check")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--show", action="store_true", help="print the matrices")
    p.add_argument("--output", type=Path)
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, DomainError, RecordError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
