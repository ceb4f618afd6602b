"""Command line front end.

Exit codes: 0 success, 1 usage error, 2 validation failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from bellsim import __version__, lhv, reports
from bellsim.config import ConfigError, ExperimentConfig, load_config
from bellsim.experiment import singlet_chsh
from bellsim.linalg import singlet
from bellsim.povm import build_epr_povm
from bellsim.sampler import apply_detection, estimate_chsh, sample_trials, write_trials_csv

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _config_flags(p, required=True):
    p.add_argument("--config", metavar="PATH", required=required, help="experiment config (TOML)")


def _sampling_flags(p):
    p.add_argument("--n", type=int, metavar="COUNT", help="number of trials")
    p.add_argument("--seed", type=int, metavar="U64", help="master seed")
    p.add_argument("--eta-left", type=float, metavar="F", help="left detection efficiency")
    p.add_argument("--eta-right", type=float, metavar="F", help="right detection efficiency")
    p.add_argument("--workers", type=int, default=1, metavar="N", help="parallel sampling workers")


def _out_flag(p, help):
    p.add_argument("--out", metavar="PATH", help=help)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bellsim", description="CHSH tests with one fixed four-outcome POVM per side")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("chsh-exact", help="exact CHSH value for the configured settings")
    _config_flags(p)
    _out_flag(p, "write the JSON report here instead of stdout")

    p = sub.add_parser("chsh-sample", help="Monte Carlo trials and CHSH estimate")
    _config_flags(p)
    _sampling_flags(p)
    p.add_argument("--out", metavar="PATH", required=True, help="output directory")
    p.add_argument("--sweep", choices=["theta"], help="emit correlator versus angle instead")
    p.add_argument("--steps", type=int, metavar="K", help="sweep steps over [0, pi]")

    p = sub.add_parser("lhv-max", help="classical CHSH bound by enumeration")
    _out_flag(p, "write the JSON report here instead of stdout")

    p = sub.add_parser("validate-povm", help="check POVM axioms for the configured axes")
    _config_flags(p)
    _out_flag(p, "write the JSON report here instead of stdout")

    p = sub.add_parser("dilate", help="Neumark dilation branches and equivalence residual")
    _config_flags(p)
    _out_flag(p, "write the JSON report here instead of stdout")

    p = sub.add_parser("budget", help="minimum separation under both timing models")
    _config_flags(p, required=False)
    p.add_argument("--t-s", type=float, metavar="SECONDS", help="selection time")
    p.add_argument("--t-m", type=float, metavar="SECONDS", help="measurement duration")
    _out_flag(p, "write the JSON report here instead of stdout")
    return parser


def _emit(report: dict, out: str | None) -> None:
    text = reports.dumps(report)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(args) -> ExperimentConfig:
    path = Path(args.config)
    if not path.is_file():
        raise UsageError(f"config file not found: {path}")
    return load_config(path)


def _chsh_sample(args, cfg: ExperimentConfig) -> int:
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    cfg = cfg.with_overrides(n=args.n, seed=args.seed, eta_left=args.eta_left, eta_right=args.eta_right)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    provenance = f"seed={cfg.seed} config_sha256={cfg.sha256()}"

    if args.sweep:
        if args.steps is None:
            raise UsageError("--sweep requires --steps")
        rows = reports.sweep_rows(cfg, args.steps, args.workers)
        (out / "sweep.csv").write_text(reports.sweep_csv(rows, [f"bellsim-sweep {provenance}"]))
        report = reports.sweep_report(rows, cfg, "sweep.csv")
    else:
        dA, da, dB, db = cfg.settings
        if cfg.mode == "lhv":
            source, exact = "lhv", None
            weights = cfg.lhv_weights if cfg.lhv_weights is not None else lhv.uniform_mixture()
            trials = lhv.lhv_sample(weights, cfg.n, cfg.seed, args.workers)
        else:
            source, exact = "quantum", singlet_chsh(dA, da, dB, db).value
            trials = sample_trials(singlet(), build_epr_povm(dA, da), build_epr_povm(dB, db), cfg.n, cfg.seed, args.workers)
        trials = apply_detection(trials, cfg.eta_left, cfg.eta_right, cfg.seed, args.workers)
        write_trials_csv(trials, out / "trials.csv", [f"bellsim-trials source={source} {provenance}"])
        report = reports.chsh_sample_report(estimate_chsh(trials, cfg.seed), cfg, source, exact)
        (out / "estimate.json").write_text(reports.dumps(report))
    _emit(report, None)
    return EXIT_OK


def _budget(args) -> int:
    t_s, t_m = args.t_s, args.t_m
    if args.config:
        cfg = _load(args)
        t_s = cfg.t_s if t_s is None else t_s
        t_m = cfg.t_m if t_m is None else t_m
    if t_s is None or t_m is None:
        raise UsageError("budget needs --t-s and --t-m (or a [budget] section in the config)")
    _emit(reports.budget_report(t_s, t_m), args.out)
    return EXIT_OK


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, --version, or a usage error
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "lhv-max":
            _emit(reports.lhv_max_report(), args.out)
            return EXIT_OK
        if args.command == "budget":
            return _budget(args)
        cfg = _load(args)
        if args.command == "chsh-exact":
            result = singlet_chsh(*cfg.settings)
            _emit(reports.chsh_exact_report(result, cfg), args.out)
            return EXIT_OK
        if args.command == "validate-povm":
            report = reports.validate_povm_report(cfg)
            _emit(report, args.out)
            return EXIT_OK if report["passed"] else EXIT_INVALID
        if args.command == "dilate":
            _emit(reports.dilate_report(cfg), args.out)
            return EXIT_OK
        if args.command == "chsh-sample":
            return _chsh_sample(args, cfg)
    except UsageError as exc:
        print(f"bellsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"bellsim: invalid config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"bellsim: validation failed: {exc}", file=sys.stderr)
        return EXIT_INVALID
    raise AssertionError(f"unhandled command {args.command}")


def main() -> None:
    sys.exit(run())
