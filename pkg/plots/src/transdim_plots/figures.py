"""Offline figures from sampler run directories.

Reads only the documented artifact files (samples.jsonl, summary.json,
density_grid.csv, data.txt) and writes image files; inputs are never
modified.  Four figure kinds:

* ``trace``            panels of k and the leading mean / log-precision /
                       weight-logit coordinate over stored iterations
* ``k_pmf``            bar chart of the posterior of the component count
* ``density_overlay``  data histogram, the modal density as a heavy curve,
                       and the high-density member curves drawn lightly
* ``acf_compare``      component-count autocorrelations of two runs

Layout is deterministic: fixed figure sizes and axis ranges derived only
from the inputs.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

KINDS = ("trace", "k_pmf", "density_overlay", "acf_compare")

MAX_MEMBER_CURVES = 50


class PlotError(Exception):
    pass


@dataclass(frozen=True)
class FigureRequest:
    input_dir: Path
    kind: str
    output: Path
    second_input: Path | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise PlotError(f"unknown figure kind {self.kind!r}")
        if self.kind == "acf_compare" and self.second_input is None:
            raise PlotError("acf_compare needs a second input directory")


def _require(path: Path) -> Path:
    if not path.exists():
        raise PlotError(f"missing artifact file: {path}")
    return path


def read_samples(run_dir: Path):
    rows = []
    for line in _require(run_dir / "samples.jsonl").read_text().splitlines():
        if line.strip():
            rows.append(json.loads(line))
    if not rows:
        raise PlotError(f"no samples in {run_dir / 'samples.jsonl'}")
    return rows


def read_summary(run_dir: Path) -> dict:
    return json.loads(_require(run_dir / "summary.json").read_text())


def read_density_grid(run_dir: Path):
    lines = _require(run_dir / "density_grid.csv").read_text().splitlines()
    header = lines[0].split(",")
    table = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return header, table


def read_data(run_dir: Path) -> np.ndarray:
    values = [float(v) for v in _require(run_dir / "data.txt").read_text().split()]
    return np.asarray(values)


def freedman_diaconis_bins(data: np.ndarray) -> int:
    q75, q25 = np.percentile(data, [75, 25])
    iqr = q75 - q25
    if iqr <= 0:
        return 10
    width = 2.0 * iqr / len(data) ** (1 / 3)
    return max(1, int(np.ceil((data.max() - data.min()) / width)))


def render(request: FigureRequest) -> Path:
    run_dir = Path(request.input_dir)
    out = Path(request.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    if request.kind == "trace":
        _render_trace(run_dir, out)
    elif request.kind == "k_pmf":
        _render_k_pmf(run_dir, out)
    elif request.kind == "density_overlay":
        _render_density_overlay(run_dir, out)
    else:
        _render_acf_compare(run_dir, Path(request.second_input), out)
    return out


def _render_trace(run_dir: Path, out: Path) -> None:
    rows = read_samples(run_dir)
    iters = np.array([r["iter"] for r in rows])
    panels = [
        ("k", np.array([r["k"] for r in rows])),
        ("nu_1", np.array([r["nu"][0] for r in rows])),
        ("tau*_1", np.array([r["tau_star"][0] for r in rows])),
        ("omega_1", np.array([r["omega"][0] for r in rows])),
    ]
    fig, axes = plt.subplots(2, 2, figsize=(10, 7))
    for ax, (label, series) in zip(axes.ravel(), panels):
        ax.plot(iters, series, linewidth=0.4, color="tab:blue")
        ax.set_xlim(iters[0], iters[-1])
        ax.set_xlabel("iteration")
        ax.set_ylabel(label)
    fig.suptitle("stored-sample traces")
    fig.tight_layout()
    fig.savefig(out, dpi=110)
    plt.close(fig)


def _render_k_pmf(run_dir: Path, out: Path) -> None:
    rows = read_samples(run_dir)
    ks = np.array([r["k"] for r in rows])
    values, counts = np.unique(ks, return_counts=True)
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.bar(values, counts / ks.size, width=0.8, color="tab:blue")
    ax.set_xlim(values.min() - 1, values.max() + 1)
    ax.set_ylim(0, 1.05)
    ax.set_xlabel("number of components k")
    ax.set_ylabel("posterior probability")
    fig.tight_layout()
    fig.savefig(out, dpi=110)
    plt.close(fig)


def _render_density_overlay(run_dir: Path, out: Path) -> None:
    data = read_data(run_dir)
    header, table = read_density_grid(run_dir)
    grid = table[:, 0]
    modal = table[:, 1]
    members = table[:, 2:]
    if members.shape[1] > MAX_MEMBER_CURVES:
        idx = np.linspace(0, members.shape[1] - 1, MAX_MEMBER_CURVES).astype(int)
        members = members[:, idx]
    fig, ax = plt.subplots(figsize=(9, 6.5))
    ax.hist(
        data,
        bins=freedman_diaconis_bins(data),
        density=True,
        color="0.85",
        edgecolor="0.6",
    )
    for col in range(members.shape[1]):
        ax.plot(grid, members[:, col], linewidth=0.5, alpha=0.5, color="tab:orange")
    ax.plot(grid, modal, linewidth=2.2, color="black", label="modal density")
    ax.set_xlim(grid[0], grid[-1])
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(out, dpi=110)
    plt.close(fig)


def _render_acf_compare(run_dir: Path, other_dir: Path, out: Path) -> None:
    fig, ax = plt.subplots(figsize=(7.5, 5.5))
    drew_any = False
    for run, color in ((run_dir, "tab:green"), (other_dir, "tab:red")):
        summary = read_summary(run)
        label = f"{summary.get('sampler', '?')} ({Path(run).name})"
        acf = summary.get("k_autocorrelation")
        if acf is None or acf.get("degenerate"):
            ax.annotate(
                f"{label}: constant k chain (autocorrelation undefined)",
                xy=(0.5, 0.9 if color == "tab:green" else 0.8),
                xycoords="axes fraction",
                ha="center",
                color=color,
            )
            continue
        values = np.asarray(acf["values"])
        ax.plot(np.arange(values.size), values, color=color, label=label)
        drew_any = True
    ax.set_xlabel("lag")
    ax.set_ylabel("autocorrelation of k")
    ax.set_ylim(-1.05, 1.05)
    if drew_any:
        ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(out, dpi=110)
    plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="transdim-plots", description="render figures from run artifacts"
    )
    parser.add_argument("--input-dir", type=Path, required=True)
    parser.add_argument("--kind", choices=KINDS, required=True)
    parser.add_argument("--out", type=Path, required=True)
    parser.add_argument("--second-input", type=Path, default=None)
    args = parser.parse_args(argv)
    try:
        request = FigureRequest(args.input_dir, args.kind, args.out, args.second_input)
        path = render(request)
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
