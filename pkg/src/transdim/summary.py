"""Posterior-of-densities summarization and convergence diagnostics.

Stored mixture samples are evaluated on a fixed grid; the sup norm over that
grid turns the sample of densities into a finite metric space.  On top of it:

* the empirically central density (most neighbours within epsilon),
* adaptive credible regions on a zeta-resolution radius ladder,
* multi-mode highest-density regions grown ball by ball,
* the split-sample radius-increment diagnostic (small increments mean the
  two halves describe the same distribution),
* the autocorrelation of the component-count chain.

Everything here is a deterministic function of its inputs; ties break toward
the smallest index.  Membership in a ball of radius r means distance <= r.
The O(N^2) distance matrix is the dominant cost; pass ``stride`` to
summarize a regular subsample when N is large.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, GridMismatchError, TransdimError
from .mixture import MixtureParams


@dataclass(frozen=True)
class DensityGrid:
    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ConfigError("grid needs at least two points")
        if not np.all(np.diff(pts) > 0):
            raise ConfigError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.points.size

    @classmethod
    def from_data(cls, data, size: int = 512, pad: float = 0.5) -> "DensityGrid":
        """Equidistant grid spanning the data range padded by ``pad`` * range."""
        data = np.asarray(data, dtype=float)
        lo, hi = float(np.min(data)), float(np.max(data))
        span = hi - lo
        if span <= 0:
            span = max(abs(lo), 1.0)
        return cls(np.linspace(lo - pad * span, hi + pad * span, size))


@dataclass(frozen=True)
class DensitySample:
    values: np.ndarray
    index: int

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise TransdimError("density values must be finite and nonnegative")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class CredibleRegion:
    center_index: int
    radius: float
    member_indices: np.ndarray
    attained_prob: float


@dataclass(frozen=True)
class HpdRegions:
    regions: tuple[CredibleRegion, ...]
    union_prob: float


@dataclass(frozen=True)
class ConvergenceReport:
    part_centers: tuple[int, ...]
    part_radii: tuple[float, ...]
    part_epsilons: tuple[float, ...]
    eta1: float
    eta2: float


@dataclass(frozen=True)
class KAutocorrelation:
    degenerate: bool
    values: np.ndarray | None


def evaluate_on_grid(params: MixtureParams, grid: DensityGrid) -> np.ndarray:
    return kernels.mixture_density(
        grid.points, params.means, params.log_precisions, params.weight_logits
    )


def evaluate_samples(params_list, grid: DensityGrid) -> np.ndarray:
    out = np.empty((len(params_list), grid.size))
    for i, params in enumerate(params_list):
        out[i] = evaluate_on_grid(params, grid)
    return out


def sup_distance(f, g) -> float:
    f = _values(f)
    g = _values(g)
    if f.shape != g.shape:
        raise GridMismatchError("density samples live on different grids")
    return float(np.max(np.abs(f - g)))


def _values(f) -> np.ndarray:
    return f.values if isinstance(f, DensitySample) else np.asarray(f, dtype=float)


def distance_matrix(values: np.ndarray, stride: int = 1) -> np.ndarray:
    """All pairwise sup-norm distances; ``stride`` summarizes every n-th sample."""
    values = np.asarray(values, dtype=float)
    if stride > 1:
        values = values[::stride]
    return kernels.cheb_matrix(values)


def default_epsilon(dmat: np.ndarray, quantile: float = 0.05) -> float:
    """Scale-free neighbourhood radius: a low quantile of the pairwise distances."""
    n = dmat.shape[0]
    if n < 2:
        return 0.0
    iu = np.triu_indices(n, k=1)
    return float(np.quantile(dmat[iu], quantile))


def central_density(values: np.ndarray, epsilon: float, dmat: np.ndarray | None = None) -> int:
    """Index with the most neighbours within epsilon (strict), first on ties."""
    if epsilon <= 0:
        raise ConfigError("epsilon must be positive")
    if dmat is None:
        dmat = distance_matrix(values)
    counts = (dmat < epsilon).sum(axis=1)
    return int(np.argmax(counts))


def _ceil_to_grid(x: float, zeta: float) -> float:
    """Smallest multiple of zeta that is >= x, robust to division rounding."""
    if x <= 0:
        return 0.0
    n = int(math.ceil(x / zeta))
    while n > 0 and (n - 1) * zeta >= x:
        n -= 1
    while n * zeta < x:
        n += 1
    return n * zeta


def credible_region(
    values: np.ndarray,
    center: int,
    target_prob: float = 0.95,
    zeta: float = 1e-5,
    dmat: np.ndarray | None = None,
) -> CredibleRegion:
    """Smallest radius on the zeta ladder whose ball holds >= target_prob mass."""
    if dmat is None:
        dmat = distance_matrix(values)
    d = dmat[center]
    n = d.shape[0]
    need = int(math.ceil(target_prob * n))
    dm = float(np.partition(d, need - 1)[need - 1])
    radius = _ceil_to_grid(dm, zeta)
    members = np.flatnonzero(d <= radius)
    return CredibleRegion(int(center), radius, members, members.size / n)


def hpd_region(
    values: np.ndarray,
    modes,
    target_prob: float = 0.95,
    zeta: float = 1e-5,
    dmat: np.ndarray | None = None,
) -> HpdRegions:
    """Grow sup-norm balls around the modes until their union covers the target.

    Sweeping the samples in order, any sample outside every ball inflates the
    ball with the nearest center by zeta; growth stops as soon as the union
    reaches the target, so the attained probability overshoots by at most the
    resolution of one sample.
    """
    modes = [int(m) for m in modes]
    if not modes:
        raise ConfigError("need at least one mode index")
    if dmat is None:
        dmat = distance_matrix(values)
    n = dmat.shape[0]
    need = int(math.ceil(target_prob * n))
    dmode = dmat[modes]  # (L, n)
    radii = np.zeros(len(modes))
    member = dmode <= 0.0
    cover = member.sum(axis=0)
    union = int((cover > 0).sum())

    while union < need:
        progressed = False
        for i in range(n):
            if union >= need:
                break
            if cover[i] > 0:
                continue
            nearest = int(np.argmin(dmode[:, i]))
            radii[nearest] += zeta
            newly = (dmode[nearest] <= radii[nearest]) & ~member[nearest]
            if newly.any():
                member[nearest] |= newly
                union += int((cover[newly] == 0).sum())
                cover[newly] += 1
            progressed = True
        if not progressed:  # everything covered yet short of target: cannot happen
            break

    regions = tuple(
        CredibleRegion(
            modes[j],
            float(radii[j]),
            np.flatnonzero(member[j]),
            int(member[j].sum()) / n,
        )
        for j in range(len(modes))
    )
    return HpdRegions(regions, union / n)


def find_local_modes(
    values: np.ndarray,
    eta: float | None = None,
    epsilon: float | None = None,
    min_count: int | None = None,
    dmat: np.ndarray | None = None,
    max_modes: int | None = None,
) -> list[int]:
    """Greedy peeling: take the central density, drop its eta-ball, repeat.

    Stops once fewer than ``min_count`` samples remain (default 1% of N) or
    ``max_modes`` centers have been found.  Returned centers are pairwise more
    than eta apart.
    """
    if dmat is None:
        dmat = distance_matrix(values)
    n = dmat.shape[0]
    if n == 0:
        raise ConfigError("need at least one sample")
    if eta is None:
        eta = default_epsilon(dmat)
        if eta <= 0:
            eta = 1e-12
    if epsilon is None:
        epsilon = eta
    if min_count is None:
        min_count = max(1, math.ceil(0.01 * n))

    alive = np.arange(n)
    modes: list[int] = []
    while alive.size >= min_count and alive.size > 0:
        if max_modes is not None and len(modes) >= max_modes:
            break
        sub = dmat[np.ix_(alive, alive)] if alive.size < n else dmat
        counts = (sub < epsilon).sum(axis=1)
        local = int(np.argmax(counts))
        center = int(alive[local])
        modes.append(center)
        alive = alive[sub[local] > eta]
    return modes


def convergence_diagnostic(
    values: np.ndarray,
    parts: int = 2,
    target_prob: float = 0.95,
    zeta: float = 1e-5,
    epsilon: float | None = None,
    dmat: np.ndarray | None = None,
) -> ConvergenceReport:
    """Split the sample, summarize each part, and measure the radius increments
    needed for each part's credible region to swallow the other's.
    """
    if parts != 2:
        raise ConfigError("the diagnostic compares exactly two parts")
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    half = n // parts
    if half < 2:
        raise TransdimError("need at least two samples per part")
    if dmat is None:
        dmat = distance_matrix(values[: half * parts])

    centers = []
    radii = []
    epsilons = []
    regions = []
    for p in range(parts):
        idx = np.arange(p * half, (p + 1) * half)
        sub = dmat[np.ix_(idx, idx)]
        eps_p = epsilon if epsilon is not None else default_epsilon(sub)
        if eps_p <= 0:
            eps_p = 1e-12
        local_center = central_density(None, eps_p, dmat=sub)
        region = credible_region(None, local_center, target_prob, zeta, dmat=sub)
        centers.append(int(idx[local_center]))
        radii.append(region.radius)
        epsilons.append(eps_p)
        regions.append(idx[region.member_indices])

    eta1 = _containment_increment(dmat, centers[0], radii[0], regions[1])
    eta2 = _containment_increment(dmat, centers[1], radii[1], regions[0])
    return ConvergenceReport(tuple(centers), tuple(radii), tuple(epsilons), eta1, eta2)


def _containment_increment(
    dmat: np.ndarray, center: int, radius: float, other_members: np.ndarray
) -> float:
    """Least nonnegative inflation of (center, radius) covering the other region."""
    reach = float(np.max(dmat[center, other_members]))
    return max(0.0, reach - radius)


def k_autocorrelation(ks, max_lag: int) -> KAutocorrelation:
    """Sample ACF of the component-count chain; flags a constant chain instead
    of reporting the undefined ratio."""
    x = np.asarray(ks, dtype=float)
    if x.size < max_lag + 2:
        raise ConfigError("trace shorter than max_lag + 2")
    x = x - x.mean()
    denom = float(np.dot(x, x))
    if denom == 0.0:
        return KAutocorrelation(True, None)
    vals = np.empty(max_lag + 1)
    vals[0] = 1.0
    for lag in range(1, max_lag + 1):
        vals[lag] = float(np.dot(x[:-lag], x[lag:])) / denom
    return KAutocorrelation(False, vals)
