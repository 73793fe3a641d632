"""Shared test oracles: numeric Jacobians of the explicit proposal maps."""
from __future__ import annotations

import numpy as np

from transdim.moves import merge_death, merge_death_related, split_birth, split_birth_related


def numeric_jacobian(fn, v0: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of a vector map at v0."""
    v0 = np.asarray(v0, dtype=float)
    f0 = np.asarray(fn(v0), dtype=float)
    jac = np.empty((f0.size, v0.size))
    for i in range(v0.size):
        step = h * max(1.0, abs(v0[i]))
        plus = v0.copy()
        plus[i] += step
        minus = v0.copy()
        minus[i] -= step
        jac[:, i] = (np.asarray(fn(plus)) - np.asarray(fn(minus))) / (2.0 * step)
    return jac


def numeric_logdet(fn, v0: np.ndarray, h: float = 1e-6) -> float:
    sign, logdet = np.linalg.slogdet(numeric_jacobian(fn, v0, h))
    assert sign != 0, "proposal map is numerically singular"
    return float(logdet)


def birth_map(a: np.ndarray, js, z: np.ndarray, k: int, m: int):
    """(x, eps_1..m) -> x' for the m-split birth; a square (k+m)-map."""

    def fn(v):
        x, eps = v[:k], v[k:]
        return split_birth(x, a, js, eps, eps[0], z)

    return fn


def death_map(a: np.ndarray, js, jps, z: np.ndarray, k: int, m: int):
    """(x, eps_1..m) -> (x'', eps*_1..m, eps_1..m); a square (k+m)-map.

    The reconstructed innovations and the drawn innovations are both carried
    as outputs so the map stays square, mirroring how the merge inverts the
    split.
    """

    def fn(v):
        x, eps = v[:k], v[k:]
        out, eps_star = merge_death(x, a, js, jps, eps, eps[0], z)
        return np.concatenate([out, eps_star, eps])

    return fn


def related_birth_map(scales: np.ndarray, j: int, z: np.ndarray, k: int, m: int):
    """(blocks..., eps_1..m) -> blocks'...; a square m(k+1)-map."""

    def fn(v):
        blocks = [v[ell * k : (ell + 1) * k] for ell in range(m)]
        eps = v[m * k :]
        return np.concatenate(split_birth_related(blocks, scales, j, eps, z))

    return fn


def related_death_map(scales: np.ndarray, j: int, jp: int, z: np.ndarray, k: int, m: int):
    """(blocks..., eps_1..m) -> (blocks''..., eps*_1..m, eps_1..m); square."""

    def fn(v):
        blocks = [v[ell * k : (ell + 1) * k] for ell in range(m)]
        eps = v[m * k :]
        out, eps_star = merge_death_related(blocks, scales, j, jp, eps, z)
        return np.concatenate([np.concatenate(out), eps_star, eps])

    return fn
