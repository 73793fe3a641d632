"""Structured direction probabilities estimated from a pilot run.

Per-coordinate forward/backward/no-change probabilities are reparameterized
through three logit vectors psi_1, psi_2, psi_3 drawn from label-specific
Gaussians whose moments come from a fixed-dimension pilot chain: the mean of
coordinate i under label psi_l is the pilot average of x_i over iterations
whose drawn direction z_i equalled +1, -1 or 0 respectively, and covariance
entries condition on both coordinates carrying the same label.  Mixed label
pairs have no estimate and are zeroed; empty label cells fall back to the
unconditional moment and are flagged.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

_LABELS = (1, -1, 0)


@dataclass(frozen=True)
class StructuredMoveModel:
    """Three Gaussian logit generators over k_max coordinates."""

    means: tuple[np.ndarray, ...]
    covariances: tuple[np.ndarray, ...]
    fallback_entries: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self) -> None:
        if len(self.means) != 3 or len(self.covariances) != 3:
            raise ConfigError("structured model needs moments for the three labels")
        k = self.means[0].shape[0]
        for mu, cov in zip(self.means, self.covariances):
            if mu.shape != (k,) or cov.shape != (k, k):
                raise ConfigError("moment shapes must agree across labels")
            if not np.allclose(cov, cov.T, atol=1e-10):
                raise ConfigError("covariances must be symmetric")

    @property
    def k_max(self) -> int:
        return self.means[0].shape[0]

    def _roots(self) -> tuple[np.ndarray, ...]:
        # eigen square roots, clipping tiny negative eigenvalues from the
        # zeroed mixed-label entries
        roots = []
        for cov in self.covariances:
            vals, vecs = np.linalg.eigh(cov)
            vals = np.clip(vals, 0.0, None)
            roots.append(vecs * np.sqrt(vals))
        return tuple(roots)

    def draw_probs(self, k: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        """Sample (p_i, q_i) for the leading k coordinates.

        The third softmax component is the per-coordinate no-change mass.
        """
        if k < 1 or k > self.k_max:
            raise ConfigError(f"k={k} outside [1, {self.k_max}]")
        roots = self._roots()
        psi = np.empty((3, k))
        for lab in range(3):
            noise = roots[lab] @ rng.standard_normal(self.k_max)
            psi[lab] = (self.means[lab] + noise)[:k]
        return probs_from_logits(psi)


def probs_from_logits(psi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Column-wise softmax of a (3, k) logit array -> (p, q) rows."""
    shifted = psi - psi.max(axis=0, keepdims=True)
    e = np.exp(shifted)
    probs = e / e.sum(axis=0, keepdims=True)
    return probs[0], probs[1]


def estimate_structured_model(
    pilot_xs: np.ndarray, pilot_zs: np.ndarray
) -> StructuredMoveModel:
    """Label-conditional moments from a pilot trace at fixed dimension k_max.

    ``pilot_xs`` holds the coordinate values and ``pilot_zs`` the directions
    drawn at each pilot iteration, both (T, k_max).
    """
    xs = np.asarray(pilot_xs, dtype=float)
    zs = np.asarray(pilot_zs)
    if xs.ndim != 2 or xs.shape != zs.shape:
        raise ConfigError("pilot trace arrays must share shape (T, k_max)")
    t, k = xs.shape
    if t < 2:
        raise ConfigError("pilot trace too short")

    grand_mean = xs.mean(axis=0)
    grand_cov = np.cov(xs, rowvar=False, ddof=0).reshape(k, k)

    means = []
    covs = []
    fallbacks: list[tuple[int, int]] = []
    for lab_idx, lab in enumerate(_LABELS):
        hit = zs == lab
        mu = np.empty(k)
        for i in range(k):
            sel = hit[:, i]
            if sel.any():
                mu[i] = xs[sel, i].mean()
            else:
                mu[i] = grand_mean[i]
                fallbacks.append((lab, i))
        cov = np.zeros((k, k))
        for i in range(k):
            for jj in range(i, k):
                sel = hit[:, i] & hit[:, jj]
                if sel.sum() >= 2:
                    xi = xs[sel, i]
                    xj = xs[sel, jj]
                    cov[i, jj] = cov[jj, i] = float(np.mean((xi - xi.mean()) * (xj - xj.mean())))
                elif i == jj:
                    cov[i, i] = grand_cov[i, i]
                    fallbacks.append((lab, i))
                # mixed or unobserved pairs stay zero
        means.append(mu)
        covs.append(cov)
    return StructuredMoveModel(tuple(means), tuple(covs), tuple(sorted(set(fallbacks))))


def structured_probs(
    pilot_xs: np.ndarray,
    pilot_zs: np.ndarray,
    k: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Estimate the model from a pilot trace and draw one (p, q) vector pair."""
    model = estimate_structured_model(pilot_xs, pilot_zs)
    return model.draw_probs(k, rng)
