"""Trans-dimensional MCMC with transformation-driven moves.

Public surface: move kernels and chain driver (``moves``, ``chain``), the
normal-mixture target (``mixture``), a random-walk reversible-jump baseline
(``rjmcmc``), posterior-of-densities summarization (``summary``), dataset
handling (``datasets``) and the batch CLI (``cli``).
"""

from .chain import ChainConfig, ChainResult, RunStats, batch_means_se, run_chain
from .moves import (
    BlockState,
    MoveSpec,
    MoveWeights,
    birth_step,
    birth_step_m,
    birth_step_related,
    death_step,
    death_step_m,
    death_step_related,
    draw_move_type,
    simulate_direction,
    tmcmc_step,
)
from .mixture import (
    KPrior,
    MixtureHyperparams,
    MixtureParams,
    OmegaPrior,
    as_target,
    initial_params,
    log_k_prior,
    log_likelihood,
    log_prior,
    weights_from_omega,
)
from .transforms import (
    ExponentialInnovation,
    SymmetricUnitInnovation,
    TransformFamily,
    TruncatedNormalInnovation,
    additive_family,
    multiplicative_family,
)

__all__ = [
    "BlockState",
    "ChainConfig",
    "ChainResult",
    "ExponentialInnovation",
    "KPrior",
    "MixtureHyperparams",
    "MixtureParams",
    "MoveSpec",
    "MoveWeights",
    "OmegaPrior",
    "RunStats",
    "SymmetricUnitInnovation",
    "TransformFamily",
    "TruncatedNormalInnovation",
    "additive_family",
    "as_target",
    "batch_means_se",
    "birth_step",
    "birth_step_m",
    "birth_step_related",
    "death_step",
    "death_step_m",
    "death_step_related",
    "draw_move_type",
    "initial_params",
    "log_k_prior",
    "log_likelihood",
    "log_prior",
    "multiplicative_family",
    "run_chain",
    "simulate_direction",
    "tmcmc_step",
    "weights_from_omega",
]

__version__ = "0.1.0"
