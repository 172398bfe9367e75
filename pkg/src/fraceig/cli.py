"""Command-line interface.

Subcommands: constants, spectrum, verify lower, verify upper, sweep-mu,
lemmas, weyl.  A flat ``key = value`` config file may preload any flag;
explicit flags override it; unknown keys are errors.  Exit status is 0
iff every gating check in the requested suite passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds
from .core import Domain1D, ProblemParams
from .harness import (
    ExperimentConfig,
    run_spectrum,
    run_weyl_diagnostic,
    sweep_mu,
    verify_lemmas,
    verify_lower,
    verify_upper,
    write_bound_report,
    write_spectrum_csv,
    write_summary,
)

_CONFIG_KEYS = {
    "N": int,
    "s1": float,
    "s2": float,
    "mu": float,
    "a": float,
    "b": float,
    "n": int,
    "k_max": int,
    "seed": int,
    "out": str,
    "single": float,
    "mu_list": str,
}

_GATING_SUITES = {"spectrum", "lower", "sweep-mu", "lemmas"}


def parse_config_file(path: Path) -> dict:
    """Flat ``key = value`` lines; blank lines and # comments allowed."""
    values = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _CONFIG_KEYS[key](val)
    return values


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--s1", type=float, default=None)
    p.add_argument("--s2", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k-max", dest="k_max", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--config", type=str, default=None)
    p.add_argument("--single", type=float, default=None, metavar="S")
    p.add_argument("--mu-list", dest="mu_list", type=str, default=None,
                   help="comma-separated ascending mu values (sweep-mu)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraceig",
        description="verification lab for the mixed-order fractional eigenproblem",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("constants", "spectrum", "sweep-mu", "lemmas", "weyl"):
        _add_common_flags(sub.add_parser(name))
    verify = sub.add_parser("verify")
    vsub = verify.add_subparsers(dest="which", required=True)
    _add_common_flags(vsub.add_parser("lower"))
    _add_common_flags(vsub.add_parser("upper"))
    return parser


def _resolve(args: argparse.Namespace, suite: str) -> ExperimentConfig:
    file_vals = {}
    if args.config:
        file_vals = parse_config_file(Path(args.config))

    def pick(key, default):
        cli = getattr(args, key if key != "single" else "single", None)
        if cli is not None:
            return cli
        if key in file_vals:
            return file_vals[key]
        return default

    gating = suite in _GATING_SUITES
    n = pick("n", 512 if gating else 1024)
    k_max = pick("k_max", 20 if gating else 40)
    mu_list_raw = args.mu_list if args.mu_list is not None else file_vals.get("mu_list")
    mu_list = (
        tuple(float(v) for v in str(mu_list_raw).split(",")) if mu_list_raw else ()
    )
    out = pick("out", None)
    params = ProblemParams(
        N=pick("N", 1),
        s1=pick("s1", 0.4),
        s2=pick("s2", 0.2),
        mu=pick("mu", 0.0),
    )
    return ExperimentConfig(
        params=params,
        dom=Domain1D(pick("a", -1.0), pick("b", 1.0), n),
        k_max=min(k_max, n),
        suite=suite,
        mu_list=mu_list,
        seeds=pick("seed", 0),
        output_dir=Path(out) if out else None,
        single_s=pick("single", None),
    )


def _emit(cfg: ExperimentConfig, summary: dict) -> None:
    if cfg.output_dir is not None:
        write_summary(cfg.output_dir, summary)
    print(json.dumps(summary, indent=2, sort_keys=True, default=float))


def _cmd_constants(cfg: ExperimentConfig) -> int:
    bc = bounds.bly_constants(cfg.params)
    summary = {
        "config": cfg.resolved(),
        "constants": dict(bc.__dict__),
        "ok": True,
    }
    _emit(cfg, summary)
    return 0


def _cmd_spectrum(cfg: ExperimentConfig) -> int:
    spec, report = run_spectrum(cfg)
    if cfg.output_dir is not None:
        write_spectrum_csv(cfg.output_dir, spec)
    _emit(cfg, report)
    return 0 if report["ok"] else 1


def _cmd_lower(cfg: ExperimentConfig) -> int:
    mus = cfg.mu_list or (cfg.params.mu,)
    all_ok = True
    reports = {}
    for mu in mus:
        sub = ExperimentConfig(
            params=ProblemParams(cfg.params.N, cfg.params.s1, cfg.params.s2, mu),
            dom=cfg.dom,
            k_max=cfg.k_max,
            suite="lower",
            seeds=cfg.seeds,
            output_dir=cfg.output_dir,
            quad=cfg.quad,
        )
        report = verify_lower(sub)
        all_ok &= report.ok
        if cfg.output_dir is not None:
            write_bound_report(cfg.output_dir, report, f"lower_mu{mu:g}")
        reports[f"mu={mu:g}"] = {
            "ok": report.ok,
            "worst_margin": min(r.margin for r in report.rows),
            "rows": len(report.rows),
            "metadata": report.metadata,
        }
    _emit(cfg, {"config": cfg.resolved(), "reports": reports, "ok": all_ok})
    return 0 if all_ok else 1


def _cmd_upper(cfg: ExperimentConfig) -> int:
    report = verify_upper(cfg)
    _emit(cfg, report)
    return 0  # diagnostic, never gates


def _cmd_sweep_mu(cfg: ExperimentConfig) -> int:
    report = sweep_mu(cfg)
    if cfg.output_dir is not None:
        from .harness import write_csv

        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        write_csv(
            cfg.output_dir / "sweep_mu.csv",
            ["mu", "lambda1"],
            list(zip(report["mu"], report["lambda1"])),
        )
    _emit(cfg, report)
    return 0 if report["ok"] else 1


def _cmd_lemmas(cfg: ExperimentConfig) -> int:
    report = verify_lemmas(cfg)
    _emit(cfg, report)
    return 0 if report["ok"] else 1


def _cmd_weyl(cfg: ExperimentConfig) -> int:
    if cfg.single_s is None:
        cfg = ExperimentConfig(
            params=cfg.params,
            dom=cfg.dom,
            k_max=cfg.k_max,
            suite="weyl",
            mu_list=cfg.mu_list,
            seeds=cfg.seeds,
            output_dir=cfg.output_dir,
            single_s=0.25,
            quad=cfg.quad,
        )
    report = run_weyl_diagnostic(cfg)
    _emit(cfg, report)
    return 0  # diagnostic, never gates


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        suite = args.which
        handler = _cmd_lower if suite == "lower" else _cmd_upper
    else:
        suite = args.command
        handler = {
            "constants": _cmd_constants,
            "spectrum": _cmd_spectrum,
            "sweep-mu": _cmd_sweep_mu,
            "lemmas": _cmd_lemmas,
            "weyl": _cmd_weyl,
        }[args.command]
    cfg = _resolve(args, suite)
    return handler(cfg)


if __name__ == "__main__":
    sys.exit(main())
