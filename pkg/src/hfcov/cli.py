"""Command-line interface: ``hfcov estimate | simulate | lan``.

Every option may also come from a ``key = value`` file given with
``--config``; options on the command line take precedence. Failures print
one ``error[CODE]: message`` line to stderr and exit with status 2.
"""

from __future__ import annotations

import argparse
import sys

from . import io as hio
from .errors import ConfigError, HfcovError
from .estimators import TuningPolicy, run_estimators
from .lan import convergence_table
from .simulation import SimConfig, run_experiment
from .sync import synchronize

__all__ = ["main", "build_parser"]

_FLAGS = {"dedup", "paper_scale", "no_figures"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _float_list(text):
    try:
        return [int(float(v)) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key=value file; command-line options win")
    common.add_argument("--out", help="output file (stdout when omitted)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--no-figures", action="store_true", help="skip PNG figures")

    parser = _Parser(prog="hfcov", description="Integrated covariance from noisy asynchronous ticks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("estimate", parents=[common], help="estimate from two tick files")
    p.add_argument("--x", help="tick file of the first asset")
    p.add_argument("--y", help="tick file of the second asset")
    p.add_argument("--estimators", default="hy,sub,multi")
    p.add_argument("--tuning", default="plugin", help="oracle, plugin, K=<int>, M=<int> or K=<int>,M=<int>")
    p.add_argument("--eta2-x", type=float, help="noise variance of X (oracle tuning)")
    p.add_argument("--eta2-y", type=float, help="noise variance of Y (oracle tuning)")
    p.add_argument("--dedup", action="store_true", help="keep the last of equal timestamps")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--header", choices=("auto", "yes", "no"), default="auto")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo comparison")
    for name in ("theta-x", "theta-y", "rho", "sigma-x", "sigma-y", "eta2-x", "eta2-y", "horizon"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--estimators", default="hy,sub,multi")
    p.add_argument("--tuning", default="oracle")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--paper-scale", action="store_true",
                   help="~30000 ticks per asset, 1000 replications, eta^2 = sqrt(0.1)")

    p = sub.add_parser("lan", parents=[common], help="Fisher-information convergence table")
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--eta-x", type=float, default=0.1)
    p.add_argument("--eta-y", type=float)
    p.add_argument("--h", type=float, default=1.0)
    p.add_argument("--n-list", type=_float_list, default="1000,10000,100000")
    return parser


def _subparser(parser, command):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


def _apply_config(parser, args, argv):
    """Re-parse with values from ``--config`` installed as defaults."""
    values = hio.load_config(args.config)
    values.pop("config", None)
    sub = _subparser(parser, args.command)
    known = {a.dest for a in sub._actions}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f"unknown keys in {args.config}: {', '.join(unknown)}")
    defaults = {}
    for key, val in values.items():
        if key in _FLAGS:
            if val.lower() not in ("1", "0", "true", "false", "yes", "no", "on", "off"):
                raise ConfigError(f"{key} expects a boolean, got {val!r}")
            defaults[key] = val.lower() in ("1", "true", "yes", "on")
        else:
            defaults[key] = val
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _emit(rows, args, stdout):
    text = hio.format_rows(rows, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def cmd_estimate(args, stdout):
    if not args.x or not args.y:
        raise ConfigError("estimate needs --x and --y")
    header = {"auto": "auto", "yes": True, "no": False}[args.header]
    opts = dict(delimiter=args.delimiter, header=header, dedup=args.dedup)
    x = hio.ingest_ticks(args.x, **opts)
    y = hio.ingest_ticks(args.y, **opts)
    policy = TuningPolicy.parse(args.tuning)
    eta2 = None
    if policy.kind == "oracle":
        if args.eta2_x is None or args.eta2_y is None:
            raise ConfigError("oracle tuning needs --eta2-x and --eta2-y")
        eta2 = (args.eta2_x, args.eta2_y)
    reports = run_estimators(synchronize(x, y), x, y, args.estimators.split(","), policy, eta2)
    _emit([r.as_row() for r in reports], args, stdout)
    return reports


def _sim_config(args) -> SimConfig:
    base = SimConfig.full_scale() if args.paper_scale else SimConfig()
    fields = {
        "theta_x": args.theta_x, "theta_y": args.theta_y, "rho": args.rho,
        "sigma_x": args.sigma_x, "sigma_y": args.sigma_y,
        "eta_x2": args.eta2_x, "eta_y2": args.eta2_y, "horizon": args.horizon,
        "replications": args.reps, "seed": args.seed,
    }
    chosen = {k: v for k, v in fields.items() if v is not None}
    merged = {**base.__dict__, **chosen}
    return SimConfig(**merged)


def cmd_simulate(args, stdout):
    cfg = _sim_config(args)
    result = run_experiment(cfg, args.estimators.split(","), TuningPolicy.parse(args.tuning),
                            workers=args.workers)
    summary = [s.as_row() for s in result.summaries()]
    stdout.write(hio.format_rows(summary, "csv"))
    if args.out:
        ext = ".json" if args.format == "json" else ".csv"
        hio.write_rows(args.out, result.records(), args.format)
        hio.write_rows(hio.sibling_path(args.out, "_summary", ext), summary, args.format)
        if not args.no_figures:
            from .plotting import plot_mc

            plot_mc(result, hio.sibling_path(args.out, "_boxplot", ".png"))
    return result


def cmd_lan(args, stdout):
    eta_y = args.eta_x if args.eta_y is None else args.eta_y
    rows = convergence_table(args.rho, args.eta_x, eta_y, args.h, args.n_list)
    _emit(rows, args, stdout)
    if args.out and not args.no_figures:
        from .plotting import plot_lan_convergence

        plot_lan_convergence(rows, hio.sibling_path(args.out, "_convergence", ".png"))
    return rows


_COMMANDS = {"estimate": cmd_estimate, "simulate": cmd_simulate, "lan": cmd_lan}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            args = _apply_config(parser, args, argv)
        _COMMANDS[args.command](args, stdout)
    except HfcovError as exc:
        print(f"error[{exc.code}]: {exc}", file=stderr)
        return 2
    except OSError as exc:
        print(f"error[IO_ERROR]: {exc}", file=stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
