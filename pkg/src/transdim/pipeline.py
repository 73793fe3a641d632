"""Run orchestration: configuration, artifact writing, re-summarization.

A run directory holds:

* ``config.json``    resolved settings (inputs to re-summarization)
* ``data.txt``       the observations actually used, one per line
* ``trace.csv``      one row per post-burn-in iteration:
                     ``iteration,k,move_type,accepted,log_posterior``
* ``samples.jsonl``  one stored sample per line:
                     ``{"iter":..,"k":..,"nu":[..],"tau_star":[..],"omega":[..]}``
* ``summary.json``   deterministic function of the artifacts above
* ``density_grid.csv``  grid evaluations of the modal density and HPD members
* ``timing.json``    wall-clock seconds (kept out of summary.json so reruns
                     with one seed are byte-identical)

Floats serialize via ``repr`` (shortest round-trip); JSON keys are sorted.
"""
from __future__ import annotations

import json
import math
import os
import time
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from . import datasets, mixture, summary as summ
from .chain import ChainConfig, ChainResult, run_chain
from .errors import ConfigError, TransdimError
from .mixture import KPrior, MixtureHyperparams, MixtureParams, OmegaPrior
from .moves import BlockState, MoveWeights
from .transforms import additive_family

OUTPUT_ENV = "TRANSDIM_OUTPUT_DIR"

SAMPLER_ALIASES = {
    "ttmcmc": "ttmcmc",
    "rjmcmc": "rjmcmc",
    "tmcmc-fixed-k": "tmcmc",
    "tmcmc": "tmcmc",
}


@dataclass(frozen=True)
class RunSettings:
    """Resolved run configuration; every field has a serializable value."""

    dataset: str
    sampler: str = "ttmcmc"
    iterations: int = 1_800_000
    burn_in: int = 300_000
    thin: int = 150
    seed: int = 1
    scale_nu: float | None = None
    scale_tau: float | None = None
    scale_omega: float | None = None
    s: float | None = None
    S: float | None = None
    nu0: float | None = None
    psi: float | None = None
    omega_prior: str | None = None  # "normal:MU,VAR" | "loggamma:ALPHA"
    k_prior: str | None = None      # "uniform" | "poisson:LAM" | "dnorm:MU,VAR"
    k_max: int = 30
    fixed_k: int | None = None
    grid_size: int = 512
    grid_pad: float = 0.5
    target_prob: float = 0.95
    zeta: float = 1e-5
    parts: int = 2
    max_lag: int = 50
    diagnostics: str = "full"
    hpd_member_cap: int = 50
    max_modes: int = 10

    def __post_init__(self) -> None:
        if self.sampler not in SAMPLER_ALIASES:
            raise ConfigError(f"unknown sampler {self.sampler!r}")
        if self.burn_in >= self.iterations or self.burn_in < 0:
            raise ConfigError("need 0 <= burn_in < iterations")
        if self.thin < 1:
            raise ConfigError("thin must be >= 1")
        if self.diagnostics not in ("full", "light"):
            raise ConfigError("diagnostics must be 'full' or 'light'")
        for name in ("scale_nu", "scale_tau", "scale_omega"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ConfigError(f"{name} must be positive")

    def resolved_scales(self) -> tuple[float, float, float]:
        base = datasets.default_scale(self.dataset)
        return (
            self.scale_nu if self.scale_nu is not None else base,
            self.scale_tau if self.scale_tau is not None else base,
            self.scale_omega if self.scale_omega is not None else base,
        )


def parse_omega_prior(spec: str) -> OmegaPrior:
    kind, _, args = spec.partition(":")
    try:
        if kind == "normal":
            mu, var = (float(v) for v in args.split(","))
            return OmegaPrior.normal(mu, var)
        if kind == "loggamma":
            return OmegaPrior.log_gamma(float(args))
    except ValueError:
        pass
    raise ConfigError(f"cannot parse omega prior {spec!r}")


def parse_k_prior(spec: str) -> KPrior:
    kind, _, args = spec.partition(":")
    try:
        if kind == "uniform":
            return KPrior.uniform()
        if kind == "poisson":
            return KPrior.poisson(float(args))
        if kind == "dnorm":
            mu, var = (float(v) for v in args.split(","))
            return KPrior.discretized_normal(mu, var)
    except ValueError:
        pass
    raise ConfigError(f"cannot parse k prior {spec!r}")


def resolve_hyperparams(settings: RunSettings, data: np.ndarray) -> MixtureHyperparams:
    try:
        base = datasets.default_hyperparams(settings.dataset, settings.k_max)
    except TransdimError:
        base = datasets.generic_hyperparams(data, settings.k_max)
    return MixtureHyperparams(
        s=settings.s if settings.s is not None else base.s,
        S=settings.S if settings.S is not None else base.S,
        nu0=settings.nu0 if settings.nu0 is not None else base.nu0,
        psi=settings.psi if settings.psi is not None else base.psi,
        omega_prior=(
            parse_omega_prior(settings.omega_prior)
            if settings.omega_prior is not None
            else base.omega_prior
        ),
        k_prior=(
            parse_k_prior(settings.k_prior) if settings.k_prior is not None else base.k_prior
        ),
        k_max=settings.k_max,
    )


@dataclass
class RunOutput:
    settings: RunSettings
    data: np.ndarray
    hyper: MixtureHyperparams
    result: ChainResult
    summary: dict
    density_grid: dict | None
    wall_seconds: float


def execute_run(settings: RunSettings, out_dir: Path | None = None) -> RunOutput:
    """Run one chain and summarize it; optionally write the artifact set."""
    started = time.perf_counter()
    data = datasets.load_dataset(settings.dataset)
    hyper = resolve_hyperparams(settings, data)
    target = mixture.as_target(data, hyper)
    init_rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((settings.seed, 0))))
    if settings.fixed_k is not None:
        params = mixture.initial_params_fixed_k(data, hyper, settings.fixed_k)
    else:
        params = mixture.initial_params(data, hyper, init_rng)
    state = params.to_state()

    fam = additive_family(list(settings.resolved_scales()), k_max=hyper.k_max, n_blocks=3)
    sampler = SAMPLER_ALIASES[settings.sampler]
    config = ChainConfig(
        iterations=settings.iterations,
        burn_in=settings.burn_in,
        thin=settings.thin,
        seed=settings.seed,
        sampler=sampler,
    )
    result = run_chain(state, target, fam, config)

    summary, grid_payload = build_summary(settings, data, result)
    wall = time.perf_counter() - started
    output = RunOutput(settings, data, hyper, result, summary, grid_payload, wall)
    if out_dir is not None:
        write_artifacts(out_dir, output)
    return output


def build_summary(
    settings: RunSettings, data: np.ndarray, result: ChainResult
) -> tuple[dict, dict | None]:
    """Summary dict (no wall clock) plus the density-grid payload for full mode."""
    samples = [(it, MixtureParams.from_state(st)) for it, st in result.samples]
    trace = result.trace
    return summarize_arrays(
        settings,
        data,
        params_list=[p for _, p in samples],
        trace_move=trace.move_code,
        trace_accepted=trace.accepted,
    )


def summarize_arrays(
    settings: RunSettings,
    data: np.ndarray,
    params_list,
    trace_move,
    trace_accepted,
) -> tuple[dict, dict | None]:
    from .chain import MOVE_NAMES

    n_rows = len(trace_move)
    acceptance: dict = {"overall": None}
    total_acc = 0
    for code, name in enumerate(MOVE_NAMES):
        mask = trace_move == code
        proposed = int(mask.sum())
        accepted = int(trace_accepted[mask].sum())
        total_acc += accepted
        acceptance[name] = {
            "proposed": proposed,
            "accepted": accepted,
            "rate": accepted / proposed if proposed else None,
        }
    acceptance["overall"] = total_acc / n_rows if n_rows else None

    ks = np.array([p.k for p in params_list], dtype=int)
    k_values, k_counts = np.unique(ks, return_counts=True)
    k_posterior = {int(k): int(c) / ks.size for k, c in zip(k_values, k_counts)}

    acf = summ.k_autocorrelation(ks, min(settings.max_lag, ks.size - 2)) if ks.size >= 4 else None
    acf_payload = None
    if acf is not None:
        acf_payload = {
            "max_lag": min(settings.max_lag, ks.size - 2),
            "degenerate": acf.degenerate,
            "values": None if acf.values is None else [float(v) for v in acf.values],
        }

    summary = {
        "dataset": settings.dataset,
        "sampler": settings.sampler,
        "n_observations": int(data.size),
        "sample_count": int(ks.size),
        "trace_rows": int(n_rows),
        "acceptance": acceptance,
        "k_posterior": {str(k): v for k, v in sorted(k_posterior.items())},
        "k_autocorrelation": acf_payload,
        "summarization": None,
    }

    grid_payload = None
    if settings.diagnostics == "full" and ks.size >= 4:
        grid = summ.DensityGrid.from_data(data, settings.grid_size, settings.grid_pad)
        values = summ.evaluate_samples(params_list, grid)
        dmat = summ.distance_matrix(values)
        eps = summ.default_epsilon(dmat)
        if eps <= 0:
            eps = settings.zeta
        center = summ.central_density(values, eps, dmat=dmat)
        region = summ.credible_region(
            values, center, settings.target_prob, settings.zeta, dmat=dmat
        )
        modes = summ.find_local_modes(values, eta=eps, dmat=dmat, max_modes=settings.max_modes)
        hpd = summ.hpd_region(values, modes, settings.target_prob, settings.zeta, dmat=dmat)
        report = summ.convergence_diagnostic(
            values, settings.parts, settings.target_prob, settings.zeta, dmat=dmat
        )
        summary["summarization"] = {
            "grid": {
                "size": int(grid.size),
                "lo": float(grid.points[0]),
                "hi": float(grid.points[-1]),
            },
            "epsilon": float(eps),
            "central_index": int(center),
            "credible_region": {
                "radius": float(region.radius),
                "attained_prob": float(region.attained_prob),
                "member_count": int(region.member_indices.size),
            },
            "local_modes": [int(m) for m in modes],
            "hpd": {
                "union_prob": float(hpd.union_prob),
                "balls": [
                    {
                        "center": int(r.center_index),
                        "radius": float(r.radius),
                        "member_count": int(r.member_indices.size),
                    }
                    for r in hpd.regions
                ],
            },
            "eta": {
                "eta1": float(report.eta1),
                "eta2": float(report.eta2),
                "part_centers": [int(c) for c in report.part_centers],
                "part_radii": [float(r) for r in report.part_radii],
                "part_epsilons": [float(e) for e in report.part_epsilons],
            },
        }
        union_members = sorted({int(i) for r in hpd.regions for i in r.member_indices})
        if len(union_members) > settings.hpd_member_cap:
            stride = len(union_members) / settings.hpd_member_cap
            union_members = [union_members[int(i * stride)] for i in range(settings.hpd_member_cap)]
        grid_payload = {
            "grid": grid.points,
            "modal": values[center],
            "members": {int(i): values[i] for i in union_members},
        }
    return summary, grid_payload


# ---------------------------------------------------------------------------
# artifact files
# ---------------------------------------------------------------------------

def _json_dump(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n")


def write_artifacts(out_dir: Path, output: RunOutput) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    settings = output.settings

    _json_dump({"settings": asdict(settings)}, out_dir / "config.json")
    (out_dir / "data.txt").write_text(
        "\n".join(repr(float(v)) for v in output.data) + "\n"
    )

    trace = output.result.trace
    from .chain import MOVE_NAMES

    with open(out_dir / "trace.csv", "w") as fh:
        fh.write("iteration,k,move_type,accepted,log_posterior\n")
        first = trace.first_iteration
        rows = (
            f"{first + i},{trace.k[i]},{MOVE_NAMES[trace.move_code[i]]},"
            f"{int(trace.accepted[i])},{repr(float(trace.log_posterior[i]))}\n"
            for i in range(trace.k.size)
        )
        fh.writelines(rows)

    with open(out_dir / "samples.jsonl", "w") as fh:
        for it, state in output.result.samples:
            params = MixtureParams.from_state(state)
            fh.write(
                json.dumps(
                    {
                        "iter": int(it),
                        "k": int(params.k),
                        "nu": [float(v) for v in params.means],
                        "tau_star": [float(v) for v in params.log_precisions],
                        "omega": [float(v) for v in params.weight_logits],
                    },
                    sort_keys=True,
                )
                + "\n"
            )

    _json_dump(output.summary, out_dir / "summary.json")
    if output.density_grid is not None:
        _write_density_grid(out_dir / "density_grid.csv", output.density_grid)
    _json_dump({"wall_seconds": output.wall_seconds}, out_dir / "timing.json")


def _write_density_grid(path: Path, payload: dict) -> None:
    members = payload["members"]
    header = "x,modal," + ",".join(f"hpd_{i}" for i in members)
    lines = [header]
    grid = payload["grid"]
    modal = payload["modal"]
    cols = list(members.values())
    for g in range(grid.size):
        row = [repr(float(grid[g])), repr(float(modal[g]))]
        row.extend(repr(float(col[g])) for col in cols)
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# re-summarization from artifacts
# ---------------------------------------------------------------------------

def read_samples_jsonl(path: Path) -> tuple[list[int], list[MixtureParams]]:
    iters: list[int] = []
    params: list[MixtureParams] = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        iters.append(int(obj["iter"]))
        params.append(
            MixtureParams(
                np.asarray(obj["nu"], dtype=float),
                np.asarray(obj["tau_star"], dtype=float),
                np.asarray(obj["omega"], dtype=float),
            )
        )
    return iters, params


def read_trace_csv(path: Path) -> tuple[np.ndarray, np.ndarray]:
    from .chain import MOVE_NAMES

    code = {name: i for i, name in enumerate(MOVE_NAMES)}
    moves: list[int] = []
    accepted: list[bool] = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "iteration,k,move_type,accepted,log_posterior":
            raise TransdimError(f"unexpected trace.csv header: {header!r}")
        for line in fh:
            parts = line.rstrip("\n").split(",")
            moves.append(code[parts[2]])
            accepted.append(parts[3] == "1")
    return np.asarray(moves, dtype=np.int8), np.asarray(accepted, dtype=bool)


def load_settings(run_dir: Path) -> RunSettings:
    payload = json.loads((Path(run_dir) / "config.json").read_text())
    return RunSettings(**payload["settings"])


def summarize_dir(run_dir: Path) -> dict:
    """Recompute summary.json (and density_grid.csv) from stored artifacts."""
    run_dir = Path(run_dir)
    settings = load_settings(run_dir)
    data = np.array(
        [float(v) for v in (run_dir / "data.txt").read_text().split()], dtype=float
    )
    _, params = read_samples_jsonl(run_dir / "samples.jsonl")
    move_code, accepted = read_trace_csv(run_dir / "trace.csv")
    summary, grid_payload = summarize_arrays(settings, data, params, move_code, accepted)
    _json_dump(summary, run_dir / "summary.json")
    if grid_payload is not None:
        _write_density_grid(run_dir / "density_grid.csv", grid_payload)
    return summary


# ---------------------------------------------------------------------------
# scale sweep
# ---------------------------------------------------------------------------

def scale_sweep(
    settings: RunSettings, trials, out_dir: Path | None = None
) -> dict:
    """One full run per trial scale; selects the trial minimizing max(eta1, eta2)."""
    trials = [float(t) for t in trials]
    if not trials:
        raise ConfigError("sweep needs at least one trial scale")
    rows = []
    for i, scale in enumerate(trials):
        trial_seed = int(np.random.SeedSequence((settings.seed, i)).generate_state(1)[0])
        trial = replace(
            settings,
            scale_nu=scale,
            scale_tau=scale,
            scale_omega=scale,
            seed=trial_seed,
            diagnostics="full",
        )
        trial_dir = None if out_dir is None else Path(out_dir) / f"scale_{scale:g}"
        output = execute_run(trial, trial_dir)
        eta = output.summary["summarization"]["eta"]
        rows.append(
            {
                "scale": scale,
                "eta1": eta["eta1"],
                "eta2": eta["eta2"],
                "acceptance": output.summary["acceptance"]["overall"],
                "seed": trial_seed,
            }
        )
    best = min(rows, key=lambda r: max(r["eta1"], r["eta2"]))
    table = {"trials": rows, "selected_scale": best["scale"]}
    if out_dir is not None:
        _json_dump(table, Path(out_dir) / "sweep.json")
    return table


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_ENV, "transdim_out"))
