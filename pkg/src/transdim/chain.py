"""Chain driver: advances a sampler, records traces and thinned samples.

A run is deterministic given its seed.  Acceptance bookkeeping covers the
post-burn-in iterations only; stored samples are taken every ``thin``
post-burn-in iterations, dropping any trailing partial stride.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvalidStateError
from .moves import (
    BIRTH,
    DEATH,
    NO_CHANGE,
    BlockState,
    MoveWeights,
    birth_step_m,
    birth_step_related,
    death_step_m,
    death_step_related,
    draw_move_type,
    tmcmc_step,
)
from .rjmcmc import rj_birth, rj_death, rj_no_change
from .transforms import DEFAULT_INNOVATION, TransformFamily

SAMPLER_TTMCMC = "ttmcmc"
SAMPLER_RJMCMC = "rjmcmc"
SAMPLER_TMCMC = "tmcmc"

_MOVE_CODE = {BIRTH: 0, DEATH: 1, NO_CHANGE: 2}
MOVE_NAMES = (BIRTH, DEATH, NO_CHANGE)


@dataclass(frozen=True)
class ChainConfig:
    iterations: int
    burn_in: int
    thin: int
    seed: int
    sampler: str = SAMPLER_TTMCMC
    jump_size: int = 1
    p_forward: float = 0.5
    p_backward: float = 0.5
    structured: object | None = None
    record_pilot: bool = False

    def __post_init__(self) -> None:
        if self.iterations <= 0 or self.burn_in < 0 or self.burn_in >= self.iterations:
            raise ConfigError("need 0 <= burn_in < iterations")
        if self.thin < 1:
            raise ConfigError("thin must be >= 1")
        if self.sampler not in (SAMPLER_TTMCMC, SAMPLER_RJMCMC, SAMPLER_TMCMC):
            raise ConfigError(f"unknown sampler {self.sampler!r}")
        if self.jump_size < 1:
            raise ConfigError("jump size must be >= 1")
        if not (0 < self.p_forward < 1 and 0 < self.p_backward < 1):
            raise ConfigError("direction probabilities must lie in (0,1)")
        if self.p_forward + self.p_backward > 1.0 + 1e-12:
            raise ConfigError("p_forward + p_backward must be <= 1")


@dataclass
class Trace:
    """Per-iteration record of the post-burn-in chain."""

    first_iteration: int
    k: np.ndarray
    move_code: np.ndarray
    accepted: np.ndarray
    log_posterior: np.ndarray

    def move_names(self) -> list[str]:
        return [MOVE_NAMES[c] for c in self.move_code]


@dataclass
class RunStats:
    proposed: dict[str, int]
    accepted: dict[str, int]
    acceptance_rate: float
    wall_seconds: float

    def rate(self, move: str) -> float:
        n = self.proposed.get(move, 0)
        return self.accepted.get(move, 0) / n if n else math.nan


@dataclass
class ChainResult:
    samples: list[tuple[int, BlockState]]
    trace: Trace
    stats: RunStats
    final_state: BlockState
    pilot: tuple[np.ndarray, np.ndarray] | None = None


def run_chain(
    init: BlockState,
    target,
    family: TransformFamily,
    config: ChainConfig,
    weights: MoveWeights | None = None,
    innovation=DEFAULT_INNOVATION,
) -> ChainResult:
    """Advance the configured sampler and collect samples, trace and counts."""
    state = init
    state.validate_finite()
    if config.sampler != SAMPLER_TMCMC and not family.has_uniform_blocks():
        raise ConfigError("dimension-changing chains need one scale per block")
    if weights is None:
        weights = MoveWeights.default(target.k_max, jump=config.jump_size)
    single = state.n_blocks == 1
    rng = np.random.Generator(np.random.PCG64(config.seed))
    logp = target.log_density(state)
    if not math.isfinite(logp):
        raise InvalidStateError("initial state has non-finite log density")

    n_post = config.iterations - config.burn_in
    trace_k = np.empty(n_post, dtype=np.int16)
    trace_move = np.empty(n_post, dtype=np.int8)
    trace_acc = np.empty(n_post, dtype=bool)
    trace_logp = np.empty(n_post, dtype=np.float64)
    samples: list[tuple[int, BlockState]] = []
    proposed = {BIRTH: 0, DEATH: 0, NO_CHANGE: 0}
    accepted_n = {BIRTH: 0, DEATH: 0, NO_CHANGE: 0}
    pilot_xs: list[np.ndarray] = []
    pilot_zs: list[np.ndarray] = []

    p_scalar = config.p_forward
    q_scalar = config.p_backward
    structured = config.structured
    fixed_only = config.sampler == SAMPLER_TMCMC
    rj = config.sampler == SAMPLER_RJMCMC
    m_jump = config.jump_size

    started = time.perf_counter()
    for it in range(1, config.iterations + 1):
        k = state.k
        if structured is not None:
            p, q = structured.draw_probs(k, rng)
        else:
            p, q = p_scalar, q_scalar

        move = NO_CHANGE if fixed_only else draw_move_type(k, weights, rng)
        if move == NO_CHANGE:
            if rj:
                state2, spec, acc = rj_no_change(
                    state, target, family, rng, logp, innovation
                )
            else:
                state2, spec, acc = tmcmc_step(
                    state, target, family, p, q, rng, logp, innovation
                )
        elif move == BIRTH:
            if rj:
                state2, spec, acc = rj_birth(
                    state, target, family, weights, rng, logp, innovation
                )
            elif single:
                state2, spec, acc = birth_step_m(
                    state, target, family, weights, p, q, m_jump, rng, logp, innovation
                )
            else:
                state2, spec, acc = birth_step_related(
                    state, target, family, weights, p, q, rng, logp, innovation
                )
        else:
            if rj:
                state2, spec, acc = rj_death(
                    state, target, family, weights, rng, logp, innovation
                )
            elif single:
                state2, spec, acc = death_step_m(
                    state, target, family, weights, p, q, m_jump, rng, logp, innovation
                )
            else:
                state2, spec, acc = death_step_related(
                    state, target, family, weights, p, q, rng, logp, innovation
                )

        if config.record_pilot and fixed_only and it > config.burn_in:
            pilot_xs.append(np.concatenate(state.blocks))
            pilot_zs.append(spec.z.ravel().copy())

        if acc:
            state = state2
            logp = spec.log_target_proposed

        if it > config.burn_in:
            idx = it - config.burn_in - 1
            trace_k[idx] = state.k
            trace_move[idx] = _MOVE_CODE[move]
            trace_acc[idx] = acc
            trace_logp[idx] = logp
            proposed[move] += 1
            if acc:
                accepted_n[move] += 1
            if (it - config.burn_in) % config.thin == 0:
                samples.append((it, state))
    wall = time.perf_counter() - started

    total = sum(proposed.values())
    stats = RunStats(
        proposed=proposed,
        accepted=accepted_n,
        acceptance_rate=sum(accepted_n.values()) / total if total else math.nan,
        wall_seconds=wall,
    )
    trace = Trace(config.burn_in + 1, trace_k, trace_move, trace_acc, trace_logp)
    pilot = None
    if config.record_pilot and fixed_only:
        pilot = (np.array(pilot_xs), np.array(pilot_zs))
    return ChainResult(samples, trace, stats, state, pilot)


def batch_means_se(values: np.ndarray, n_batches: int = 100) -> float:
    """Batch-means standard error of the mean of a correlated scalar series."""
    values = np.asarray(values, dtype=float)
    if values.size < 2 * n_batches:
        n_batches = max(2, values.size // 2)
    usable = (values.size // n_batches) * n_batches
    batches = values[:usable].reshape(n_batches, -1).mean(axis=1)
    return float(np.std(batches, ddof=1) / math.sqrt(n_batches))
