"""Random-walk reversible-jump baseline.

Shares its move geometry with the related-blocks jumps: one shared index
splits (or a pair merges) in every block, and the same move-weight,
selection-count and Jacobian factors enter the acceptance ratio.  Two things
differ from the transformation-driven sampler:

* every updated coordinate receives its own innovation with a fair-coin
  sign, rather than sharing a single innovation;
* dimension matching puts the innovation density into the ratio: a birth
  divides by the density of the split innovations, a death multiplies by the
  density of the innovations its reverse birth would need.  A merge whose
  reconstructed innovation falls outside the proposal support is rejected
  outright.

The merged coordinate of a death is the plain pair average and consumes no
innovation; all other coordinates random-walk.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BlockMismatchError, InvalidStateError, MoveUnavailableError
from .moves import (
    BIRTH,
    DEATH,
    NO_CHANGE,
    BlockState,
    MoveWeights,
    _finite_or_neginf,
    _metropolis_accept,
    related_birth_log_terms,
    related_death_log_terms,
)
from .transforms import DEFAULT_INNOVATION, TransformFamily


@dataclass(frozen=True)
class RjMoveSpec:
    """Record of one reversible-jump proposal."""

    move_type: str
    index: int
    partner_index: int
    split_innovations: np.ndarray | None
    log_proposal_density: float
    log_accept_ratio: float
    log_target_proposed: float


def _signed_steps(n: int, rng: np.random.Generator, innovation) -> np.ndarray:
    eps = np.atleast_1d(innovation.sample(rng, n)) if n else np.empty(0)
    signs = np.where(rng.random(n) < 0.5, 1.0, -1.0) if n else np.empty(0)
    return signs * eps


def rj_no_change(
    state: BlockState,
    target,
    family: TransformFamily,
    rng: np.random.Generator,
    log_target_current: float | None = None,
    innovation=DEFAULT_INNOVATION,
) -> tuple[BlockState, RjMoveSpec, bool]:
    """Random-walk Metropolis: each coordinate gets its own signed innovation."""
    if log_target_current is None:
        log_target_current = target.log_density(state)
    if not math.isfinite(log_target_current):
        raise InvalidStateError("current state has non-finite log density")
    k = state.k
    new_blocks = []
    for ell, x in enumerate(state.blocks):
        a = family.block_scales(ell, k)
        new_blocks.append(x + a * _signed_steps(k, rng, innovation))
    proposal = BlockState(tuple(new_blocks))
    log_target_new = _finite_or_neginf(target.log_density(proposal))
    log_ratio = log_target_new - log_target_current
    accepted = _metropolis_accept(log_ratio, rng)
    spec = RjMoveSpec(NO_CHANGE, -1, -1, None, 0.0, log_ratio, log_target_new)
    return (proposal if accepted else state), spec, accepted


def rj_birth(
    state: BlockState,
    target,
    family: TransformFamily,
    weights: MoveWeights,
    rng: np.random.Generator,
    log_target_current: float | None = None,
    innovation=DEFAULT_INNOVATION,
) -> tuple[BlockState, RjMoveSpec, bool]:
    """Shared-index split with one fresh innovation per block.

    log acceptance = (shared birth terms) + target ratio - sum_l log rho(u_l).
    """
    k = state.k
    m = state.n_blocks
    if family.n_blocks != m:
        raise BlockMismatchError("family block count does not match the state")
    if k + 1 > weights.k_max:
        raise MoveUnavailableError(f"birth at k_max={weights.k_max}")
    if log_target_current is None:
        log_target_current = target.log_density(state)
    if not math.isfinite(log_target_current):
        raise InvalidStateError("current state has non-finite log density")

    j = int(rng.integers(k))
    split = np.atleast_1d(innovation.sample(rng, m))
    new_blocks = []
    for ell, x in enumerate(state.blocks):
        a = family.block_scales(ell, k)
        steps = _signed_steps(k - 1, rng, innovation)
        aj = a[j]
        out = np.empty(k + 1)
        out[:j] = x[:j] + a[:j] * steps[:j]
        out[j] = x[j] + aj * split[ell]
        out[j + 1] = x[j] - aj * split[ell]
        out[j + 2 :] = x[j + 1 :] + a[j + 1 :] * steps[j:]
        new_blocks.append(out)
    proposal = BlockState(tuple(new_blocks))

    base, log_jac = related_birth_log_terms(k, weights, family.scales[:, j])
    log_target_new = _finite_or_neginf(target.log_density(proposal))
    log_rho = float(np.sum(innovation.log_density(split)))
    log_ratio = base + (log_target_new - log_target_current) + log_jac - log_rho
    accepted = _metropolis_accept(log_ratio, rng)
    spec = RjMoveSpec(BIRTH, j, -1, split, log_rho, log_ratio, log_target_new)
    return (proposal if accepted else state), spec, accepted


def rj_death(
    state: BlockState,
    target,
    family: TransformFamily,
    weights: MoveWeights,
    rng: np.random.Generator,
    log_target_current: float | None = None,
    innovation=DEFAULT_INNOVATION,
) -> tuple[BlockState, RjMoveSpec, bool]:
    """Shared-index merge: pair averages replace index j, index j' is deleted.

    log acceptance = (shared death terms) + target ratio + sum_l log rho(u*_l),
    where u*_l = (x_lj - x_lj') / (2 a_lj) reconstructs the reverse birth.
    """
    k = state.k
    m = state.n_blocks
    if family.n_blocks != m:
        raise BlockMismatchError("family block count does not match the state")
    if k <= 1:
        raise MoveUnavailableError("death at dimension 1")
    if log_target_current is None:
        log_target_current = target.log_density(state)
    if not math.isfinite(log_target_current):
        raise InvalidStateError("current state has non-finite log density")

    j = int(rng.integers(k))
    jp = int(rng.integers(k - 1))
    if jp >= j:
        jp += 1
    new_blocks = []
    recon = np.empty(m)
    for ell, x in enumerate(state.blocks):
        a = family.block_scales(ell, k)
        steps = _signed_steps(k - 2, rng, innovation)
        out = np.empty(k - 1)
        pos = 0
        walked = 0
        for i in range(k):
            if i == jp:
                continue
            if i == j:
                out[pos] = 0.5 * (x[j] + x[jp])
            else:
                out[pos] = x[i] + a[i] * steps[walked]
                walked += 1
            pos += 1
        recon[ell] = (x[j] - x[jp]) / (2.0 * a[j])
        new_blocks.append(out)
    proposal = BlockState(tuple(new_blocks))

    base, log_jac = related_death_log_terms(k, weights, family.scales[:, j])
    log_target_new = _finite_or_neginf(target.log_density(proposal))
    log_rho = float(np.sum(innovation.log_density(recon)))
    log_ratio = base + (log_target_new - log_target_current) + log_jac + log_rho
    accepted = _metropolis_accept(log_ratio, rng)
    spec = RjMoveSpec(DEATH, j, jp, recon, log_rho, log_ratio, log_target_new)
    return (proposal if accepted else state), spec, accepted
