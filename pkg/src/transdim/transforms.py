"""Deterministic coordinate transformations and innovation proposals.

A move transforms every coordinate through the same scalar innovation eps,
with a per-coordinate ternary direction z in {-1, 0, +1} choosing the
backward transform, no change, or the forward transform.  Two families are
provided:

* additive:        forward x + a*eps, backward x - a*eps, eps > 0
* multiplicative:  forward x * eps,   backward x / eps,   eps in (-1,1)\\{0}

Scales apply to the additive maps only; the multiplicative maps use the raw
innovation (scales are still validated so either family can be constructed
from the same configuration).  Dimension-changing moves support the additive
family only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

LOG_2PI = math.log(2.0 * math.pi)

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"


@dataclass(frozen=True)
class TransformFamily:
    """A transformation family with per-block, per-coordinate scales.

    ``scales`` has shape (n_blocks, k_max); single-block samplers use row 0.
    Trans-dimensional moves additionally require each row to be constant
    (a split coordinate and its children must share one scale for the
    death move to invert the birth exactly); the chain driver enforces this.
    """

    kind: str
    scales: np.ndarray

    def __post_init__(self) -> None:
        if self.kind not in (ADDITIVE, MULTIPLICATIVE):
            raise ConfigError(f"unknown transform kind {self.kind!r}")
        scales = np.atleast_2d(np.asarray(self.scales, dtype=float))
        if scales.ndim != 2:
            raise ConfigError("scales must be at most 2-dimensional")
        if not np.all(np.isfinite(scales)) or np.any(scales <= 0.0):
            raise ConfigError("scales must be finite and strictly positive")
        object.__setattr__(self, "scales", scales)

    @property
    def n_blocks(self) -> int:
        return self.scales.shape[0]

    @property
    def k_max(self) -> int:
        return self.scales.shape[1]

    def innovation_support(self) -> tuple[float, float]:
        if self.kind == ADDITIVE:
            return (0.0, math.inf)
        return (-1.0, 1.0)

    def block_scales(self, block: int, k: int | None = None) -> np.ndarray:
        row = self.scales[block]
        return row if k is None else row[:k]

    def has_uniform_blocks(self) -> bool:
        """True when every block uses a single scale for all coordinates."""
        return bool(np.all(self.scales == self.scales[:, :1]))

    def forward(self, x, eps: float, block: int = 0):
        if self.kind == ADDITIVE:
            x = np.asarray(x, dtype=float)
            return x + self._a(x, block) * eps
        return np.asarray(x, dtype=float) * eps

    def backward(self, x, eps: float, block: int = 0):
        if self.kind == ADDITIVE:
            x = np.asarray(x, dtype=float)
            return x - self._a(x, block) * eps
        return np.asarray(x, dtype=float) / eps

    def _a(self, x: np.ndarray, block: int) -> np.ndarray:
        return self.scales[block, : x.size] if x.ndim else self.scales[block, 0]

    def apply(self, x: np.ndarray, z: np.ndarray, eps: float, block: int = 0) -> np.ndarray:
        """Elementwise move: forward where z=+1, backward where z=-1, else keep."""
        x = np.asarray(x, dtype=float)
        if self.kind == ADDITIVE:
            return x + z * self.scales[block, : x.size] * eps
        return x * float(eps) ** z

    def log_jacobian_fixed(self, z: np.ndarray, eps: float) -> float:
        """log |det| of (x, eps) -> (T_z(x, eps), eps) for a fixed-dimension move."""
        if self.kind == ADDITIVE:
            return 0.0
        return float(np.sum(z)) * math.log(abs(eps))


def additive_family(scales, k_max: int, n_blocks: int = 1) -> TransformFamily:
    """Build an additive family from a scalar, per-block, or full scale spec."""
    return TransformFamily(ADDITIVE, _expand_scales(scales, k_max, n_blocks))


def multiplicative_family(k_max: int, n_blocks: int = 1) -> TransformFamily:
    return TransformFamily(MULTIPLICATIVE, np.ones((n_blocks, k_max)))


def _expand_scales(scales, k_max: int, n_blocks: int) -> np.ndarray:
    arr = np.asarray(scales, dtype=float)
    if arr.ndim == 0:
        return np.full((n_blocks, k_max), float(arr))
    if arr.ndim == 1:
        if arr.shape[0] == n_blocks:
            return np.repeat(arr[:, None], k_max, axis=1)
        if n_blocks == 1:
            if arr.shape[0] != k_max:
                raise ConfigError("per-coordinate scales must have length k_max")
            return arr[None, :].copy()
        raise ConfigError("1-d scales must carry one entry per block")
    if arr.shape != (n_blocks, k_max):
        raise ConfigError(f"scales shape {arr.shape} != ({n_blocks}, {k_max})")
    return arr.copy()


class TruncatedNormalInnovation:
    """Standard normal restricted to (0, inf); the default innovation draw."""

    support = (0.0, math.inf)

    def sample(self, rng: np.random.Generator, size: int | None = None):
        if size is None:
            value = abs(rng.standard_normal())
            while value == 0.0:
                value = abs(rng.standard_normal())
            return value
        draw = np.abs(rng.standard_normal(size))
        while not draw.all():
            draw = np.abs(rng.standard_normal(size))
        return draw

    def log_density(self, eps):
        eps = np.asarray(eps, dtype=float)
        out = math.log(2.0) - 0.5 * LOG_2PI - 0.5 * eps**2
        return np.where(eps > 0.0, out, -math.inf) if eps.ndim else (float(out) if eps > 0 else -math.inf)


class ExponentialInnovation:
    """Exp(1) on (0, inf); used to demonstrate proposal-density independence."""

    support = (0.0, math.inf)

    def sample(self, rng: np.random.Generator, size: int | None = None):
        if size is None:
            value = rng.standard_exponential()
            while value == 0.0:
                value = rng.standard_exponential()
            return value
        draw = rng.standard_exponential(size)
        while not draw.all():
            draw = rng.standard_exponential(size)
        return draw

    def log_density(self, eps):
        eps = np.asarray(eps, dtype=float)
        return np.where(eps > 0.0, -eps, -math.inf) if eps.ndim else (-float(eps) if eps > 0 else -math.inf)


class SymmetricUnitInnovation:
    """Uniform on (-1, 1) excluding 0; innovation draw for multiplicative moves."""

    support = (-1.0, 1.0)

    def sample(self, rng: np.random.Generator, size: int | None = None):
        draw = rng.uniform(-1.0, 1.0, size)
        while np.any(draw == 0.0) or np.any(np.abs(draw) >= 1.0):
            draw = rng.uniform(-1.0, 1.0, size)
        return draw

    def log_density(self, eps):
        eps = np.asarray(eps, dtype=float)
        inside = (np.abs(eps) < 1.0) & (eps != 0.0)
        out = np.where(inside, math.log(0.5), -math.inf)
        return out if eps.ndim else float(out)


DEFAULT_INNOVATION = TruncatedNormalInnovation()
