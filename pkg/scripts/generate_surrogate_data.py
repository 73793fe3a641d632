"""Regenerate the surrogate enzyme/acidity datasets shipped with the package.

The original two datasets are not redistributable from this environment, so
the package ships deterministic surrogates drawn from two-component normal
mixtures whose size, support and cluster structure match the published
descriptions (see data/PROVENANCE.md).  Running this script rewrites the
text files bit-for-bit.
"""
from __future__ import annotations

import pathlib

import numpy as np

DATA_DIR = pathlib.Path(__file__).resolve().parents[1] / "src" / "transdim" / "data"


def mixture_draws(rng, n, weight, mu, sd, lo, hi):
    out = np.empty(n)
    for i in range(n):
        while True:
            comp = 0 if rng.random() < weight else 1
            value = rng.normal(mu[comp], sd[comp])
            if lo < value < hi:
                out[i] = value
                break
    return out


def write(path, header, values):
    lines = [header] + [f"{v:.3f}" for v in values]
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path} ({len(values)} values)")


def main():
    rng = np.random.Generator(np.random.PCG64(20240915))
    enzyme = mixture_draws(
        rng, 245, weight=0.61, mu=(0.19, 1.25), sd=(0.07, 0.42), lo=0.02, hi=2.95
    )
    write(
        DATA_DIR / "enzyme.txt",
        "# Surrogate enzymatic-activity dataset (245 values, support (0,3)); see PROVENANCE.md.",
        enzyme,
    )

    rng = np.random.Generator(np.random.PCG64(20240916))
    acidity = mixture_draws(
        rng, 155, weight=0.59, mu=(4.33, 6.25), sd=(0.45, 0.50), lo=2.8, hi=7.8
    )
    write(
        DATA_DIR / "acidity.txt",
        "# Surrogate lake-acidity dataset (155 values, support (2,8)); see PROVENANCE.md.",
        acidity,
    )


if __name__ == "__main__":
    main()
