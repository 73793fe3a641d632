"""Batch command-line interface.

Subcommands:

* ``run``        one chain -> artifact directory
* ``sweep``      one run per trial scale, selects the best by the
                 split-sample diagnostic, writes a comparison table
* ``summarize``  recompute summary.json from an existing run directory
* ``diagnose``   print the convergence diagnostics of a run directory

Flags mirror the run settings; a ``--config`` file supplies ``key=value``
defaults that individual flags override.  The default output directory comes
from $TRANSDIM_OUTPUT_DIR.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path

from .errors import TransdimError
from .pipeline import (
    RunSettings,
    default_output_dir,
    execute_run,
    load_settings,
    scale_sweep,
    summarize_dir,
)

_SETTING_TYPES = {f.name: f.type for f in fields(RunSettings)}

_FLAG_HELP = {
    "dataset": "builtin name (enzyme|acidity|galaxy) or a file of one value per line",
    "sampler": "ttmcmc | rjmcmc | tmcmc-fixed-k",
    "iterations": "total iterations including burn-in",
    "burn_in": "iterations discarded before recording",
    "thin": "store one sample every THIN post-burn-in iterations",
    "seed": "64-bit seed; runs are deterministic given seed and config",
    "scale_nu": "additive scale for the component means",
    "scale_tau": "additive scale for the log precisions",
    "scale_omega": "additive scale for the weight logits",
    "s": "doubled gamma shape for the precision prior",
    "S": "doubled gamma rate for the precision prior",
    "nu0": "prior center of the component means",
    "psi": "prior variance inflation of the component means",
    "omega_prior": "normal:MU,VAR or loggamma:ALPHA",
    "k_prior": "uniform, poisson:LAM, or dnorm:MU,VAR",
    "k_max": "largest allowed component count",
    "fixed_k": "hold k fixed at this value (tmcmc-fixed-k sampler)",
    "grid_size": "points in the density evaluation grid",
    "grid_pad": "grid span padding as a fraction of the data range",
    "target_prob": "credible-region coverage target",
    "zeta": "radius resolution for credible regions",
    "parts": "chain parts compared by the convergence diagnostic",
    "max_lag": "autocorrelation lags reported for the k chain",
    "diagnostics": "full (density summaries) or light (counts only)",
    "hpd_member_cap": "max HPD member curves written to density_grid.csv",
    "max_modes": "cap on greedy local-mode detection",
}

_INT_FIELDS = {
    "iterations", "burn_in", "thin", "seed", "k_max", "fixed_k",
    "grid_size", "parts", "max_lag", "hpd_member_cap", "max_modes",
}
_FLOAT_FIELDS = {
    "scale_nu", "scale_tau", "scale_omega", "s", "S", "nu0", "psi",
    "grid_pad", "target_prob", "zeta",
}


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="key=value file of defaults")
    parser.add_argument("--out", type=Path, help="artifact directory")
    for name, help_text in _FLAG_HELP.items():
        flag = "--" + name.replace("_", "-")
        if name in _INT_FIELDS:
            parser.add_argument(flag, type=int, default=None, help=help_text)
        elif name in _FLOAT_FIELDS:
            parser.add_argument(flag, type=float, default=None, help=help_text)
        else:
            parser.add_argument(flag, type=str, default=None, help=help_text)


def _read_config_file(path: Path) -> dict:
    values: dict = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise TransdimError(f"{path}:{lineno}: expected key=value")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _coerce(name: str, raw):
    if raw is None or not isinstance(raw, str):
        return raw
    if name in _INT_FIELDS:
        return int(raw)
    if name in _FLOAT_FIELDS:
        return float(raw)
    return raw


def build_settings(args: argparse.Namespace) -> RunSettings:
    file_values = _read_config_file(args.config) if args.config else {}
    merged: dict = {}
    for name in _FLAG_HELP:
        flag_value = getattr(args, name, None)
        if flag_value is not None:
            merged[name] = flag_value
        elif name in file_values:
            merged[name] = _coerce(name, file_values[name])
    if "dataset" not in merged:
        raise TransdimError("a dataset is required (flag --dataset or config file)")
    if "seed" not in merged:
        raise TransdimError("a seed is required (flag --seed or config file)")
    return RunSettings(**merged)


def _resolve_out(args: argparse.Namespace) -> Path:
    return args.out if args.out is not None else default_output_dir()


def cmd_run(args: argparse.Namespace) -> int:
    settings = build_settings(args)
    out_dir = _resolve_out(args)
    output = execute_run(settings, out_dir)
    accept = output.summary["acceptance"]["overall"]
    print(f"wrote {out_dir} (overall acceptance {accept:.6f}, "
          f"{output.summary['sample_count']} stored samples)")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    settings = build_settings(args)
    trials = [float(v) for v in args.scales.split(",") if v.strip()]
    out_dir = _resolve_out(args)
    table = scale_sweep(settings, trials, out_dir)
    print(f"{'scale':>8} {'eta1':>10} {'eta2':>10} {'acceptance':>11}")
    for row in table["trials"]:
        print(
            f"{row['scale']:>8g} {row['eta1']:>10.5f} {row['eta2']:>10.5f} "
            f"{row['acceptance']:>11.6f}"
        )
    print(f"selected scale: {table['selected_scale']:g}")
    return 0


def cmd_summarize(args: argparse.Namespace) -> int:
    summary = summarize_dir(args.dir)
    print(f"rewrote {Path(args.dir) / 'summary.json'} "
          f"({summary['sample_count']} samples)")
    return 0


def cmd_diagnose(args: argparse.Namespace) -> int:
    run_dir = Path(args.dir)
    settings = load_settings(run_dir)
    summary = json.loads((run_dir / "summary.json").read_text())
    acf = summary.get("k_autocorrelation")
    print(f"dataset={summary['dataset']} sampler={summary['sampler']} "
          f"samples={summary['sample_count']}")
    block = summary.get("summarization")
    if block:
        eta = block["eta"]
        print(f"eta1={eta['eta1']:.5f} eta2={eta['eta2']:.5f} "
              f"(part radii {eta['part_radii']})")
        print(f"credible region: radius={block['credible_region']['radius']:.5f} "
              f"attained={block['credible_region']['attained_prob']:.4f}")
        print(f"hpd: union_prob={block['hpd']['union_prob']:.4f} "
              f"balls={len(block['hpd']['balls'])}")
    else:
        print("summarization: not computed (diagnostics=light); "
              "run `transdim summarize` with diagnostics=full settings")
    if acf:
        if acf["degenerate"]:
            print("k autocorrelation: degenerate (constant k chain)")
        else:
            lead = ", ".join(f"{v:.3f}" for v in acf["values"][1:6])
            print(f"k autocorrelation (lags 1-5): {lead}")
    parts = settings.parts
    print(f"diagnostic parts: {parts}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="transdim",
        description="Trans-dimensional MCMC for normal mixtures with unknown k",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one chain and write artifacts")
    _add_run_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a scale sweep")
    _add_run_flags(p_sweep)
    p_sweep.add_argument("--scales", required=True, help="comma-separated trial scales")
    p_sweep.set_defaults(func=cmd_sweep)

    p_sum = sub.add_parser("summarize", help="recompute summary.json for a run directory")
    p_sum.add_argument("--dir", type=Path, required=True)
    p_sum.set_defaults(func=cmd_summarize)

    p_diag = sub.add_parser("diagnose", help="print diagnostics for a run directory")
    p_diag.add_argument("--dir", type=Path, required=True)
    p_diag.set_defaults(func=cmd_diagnose)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TransdimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
