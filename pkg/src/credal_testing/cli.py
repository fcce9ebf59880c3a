"""Command-line entry point: ``credal-test {test,experiment,ratio}``."""
import argparse
import json
import logging
import os
import sys

from .credal_tests import TESTS, CredalTestConfig
from .datafiles import load_matrix, split_groups
from .errors import CredalTestingError, InvalidInputError
from .experiment import ExperimentConfig, run_experiment
from .splitting import DOUBLE_DIP, SPLIT, SplitConfig, adaptive_split_ratio

KIND_ALIASES = {
    "spec": "specification",
    "incl": "inclusion",
    "eq": "equality",
    "plaus": "plausibility",
}
MODES = {"split": SPLIT, "double-dip": DOUBLE_DIP}


def _common(p):
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--permutations", type=int, default=500)
    p.add_argument("--beta", type=float, default=0.25)
    p.add_argument("--bandwidth", type=float, default=None,
                   help="Gaussian kernel bandwidth (default: median heuristic)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mode", choices=sorted(MODES), default="split")
    p.add_argument("--config", metavar="FILE",
                   help="JSON object of option values; overrides command-line flags")


def build_parser():
    parser = argparse.ArgumentParser(prog="credal-test", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="run one credal test on data files")
    t.add_argument("kind", choices=sorted(KIND_ALIASES))
    t.add_argument("--x", nargs="+", required=True, metavar="FILE",
                   help="X side: one file per extreme point, or one grouped file")
    t.add_argument("--y", nargs="+", required=True, metavar="FILE",
                   help="Y side: one file per extreme point, or one grouped file")
    t.add_argument("--group-col", type=int, default=None,
                   help="0-based column holding an integer extreme-point label")
    t.add_argument("--out", help="also write the JSON report to this path")
    _common(t)

    e = sub.add_parser("experiment", help="Monte Carlo rejection-rate sweep")
    e.add_argument("--test", choices=sorted(KIND_ALIASES), default="spec")
    e.add_argument("--hypothesis", choices=["null", "alternative"], default="null")
    e.add_argument("--n-grid", type=int, nargs="+", default=[128, 256, 512, 1024, 2048])
    e.add_argument("--beta-grid", type=float, nargs="+", default=None,
                   help="split exponents to sweep (default: the single --beta)")
    e.add_argument("--reps", type=int, default=500)
    e.add_argument("--d", type=int, default=10)
    e.add_argument("--r", type=int, default=3)
    e.add_argument("--l", type=int, default=3)
    e.add_argument("--df", type=float, default=3.0)
    e.add_argument("--dependent-extreme", action="store_true",
                   help="add a Y extreme that is the uniform mixture of the others")
    e.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    e.add_argument("--no-timing", action="store_true",
                   help="write 0 in the seconds column so CSV output is byte-reproducible")
    e.add_argument("--out", default="rejection_rates.csv")
    _common(e)

    r = sub.add_parser("ratio", help="print the adaptive split ratio")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--beta", type=float, default=0.25)
    return parser


def _apply_config(args):
    if not getattr(args, "config", None):
        return args
    with open(args.config, encoding="utf-8") as fh:
        overrides = json.load(fh)
    if not isinstance(overrides, dict):
        raise InvalidInputError(f"{args.config}: expected a JSON object")
    for key, value in overrides.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest) or dest in ("command", "config"):
            raise InvalidInputError(f"{args.config}: unknown option {key!r}")
        setattr(args, dest, value)
    return args


def _read_side(paths, group_col):
    """Return (datasets, description) for one side of a test."""
    datasets, info = [], []
    for path in paths:
        matrix = load_matrix(path)
        if group_col is None:
            datasets.append(matrix)
            info.append({"file": path, "rows": matrix.shape[0]})
        else:
            labels, parts = split_groups(matrix, group_col, path)
            datasets.extend(parts)
            info.append({"file": path, "group_sizes": {str(k): len(p) for k, p in zip(labels, parts)}})
    return datasets, info


def _test_config(args):
    return CredalTestConfig(
        alpha=args.alpha,
        permutations=args.permutations,
        split=SplitConfig(beta=args.beta, mode=MODES[args.mode]),
        bandwidth=args.bandwidth,
        seed=args.seed,
    )


def cmd_test(args):
    kind = KIND_ALIASES[args.kind]
    Sx, x_info = _read_side(args.x, args.group_col)
    Sy, y_info = _read_side(args.y, args.group_col)
    if kind == "specification":
        if len(Sx) != 1:
            raise InvalidInputError(f"specification test takes one X dataset, got {len(Sx)}")
        Sx = Sx[0]
    report = TESTS[kind](Sx, Sy, _test_config(args))
    payload = report.to_dict()
    payload["metadata"]["inputs"] = {"x": x_info, "y": y_info}
    text = json.dumps(payload, sort_keys=True, indent=2)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0


def cmd_experiment(args):
    cfg = ExperimentConfig(
        test_kind=KIND_ALIASES[args.test],
        hypothesis=args.hypothesis,
        n_grid=tuple(args.n_grid),
        beta_grid=tuple(args.beta_grid) if args.beta_grid else (args.beta,),
        repetitions=args.reps,
        alpha=args.alpha,
        permutations=args.permutations,
        mode=MODES[args.mode],
        seed=args.seed if args.seed is not None else 0,
        d=args.d, r=args.r, l=args.l, df=args.df,
        dependent_extreme=args.dependent_extreme,
        bandwidth=args.bandwidth,
        threads=args.threads,
        record_timing=not args.no_timing,
    )
    records = run_experiment(cfg, out=args.out)
    invalid = [r for r in records if not r.valid]
    for r in invalid:
        print(f"warning: cell n={r.n} beta={r.beta:g} had {r.failures} failed repetitions",
              file=sys.stderr)
    print(f"wrote {len(records)} rows to {args.out}")
    return 0


def cmd_ratio(args):
    rho = adaptive_split_ratio(args.n, args.beta)
    ne = rho * args.n
    print(f"rho={rho:.10g} n_e={ne:.4f} n_t={args.n - ne:.4f}")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose or args.command == "experiment" else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
    )
    try:
        args = _apply_config(args)
        handler = {"test": cmd_test, "experiment": cmd_experiment, "ratio": cmd_ratio}[args.command]
        return handler(args)
    except (CredalTestingError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
