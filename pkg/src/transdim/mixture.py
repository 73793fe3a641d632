"""Bayesian normal mixture with an unknown number of components.

The model works throughout in an unconstrained parameterization: component
precisions as log-precisions and component weights as logits, so every
coordinate lives on the whole real line and additive moves apply directly.

Priors, with G(a, b) meaning the gamma distribution with mean a/b:

* precision tau_j ~ G(s/2, S/2), stored as log tau_j (the change-of-variable
  term is folded into the log prior)
* mean_j | tau_j ~ Normal(nu0, psi / tau_j)
* logit_j ~ Normal(mu, var), or exp(logit_j) ~ Gamma(alpha, 1) which induces
  a symmetric Dirichlet(alpha) on the weights
* component count k ~ uniform, truncated Poisson, or a discretized normal,
  all supported on {1, ..., k_max}
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, TransdimError
from .moves import BlockState

OMEGA_NORMAL = "normal"
OMEGA_LOG_GAMMA = "log_gamma"

K_UNIFORM = "uniform"
K_POISSON = "poisson"
K_DNORM = "dnorm"


@dataclass(frozen=True)
class MixtureParams:
    """One mixture configuration: k means, k log-precisions, k weight logits."""

    means: np.ndarray
    log_precisions: np.ndarray
    weight_logits: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.means, dtype=float)
        t = np.asarray(self.log_precisions, dtype=float)
        w = np.asarray(self.weight_logits, dtype=float)
        if not (m.ndim == t.ndim == w.ndim == 1) or not (m.size == t.size == w.size):
            raise ConfigError("parameter blocks must be 1-d with a common length")
        if m.size < 1:
            raise ConfigError("a mixture needs at least one component")
        if not (np.all(np.isfinite(m)) and np.all(np.isfinite(t)) and np.all(np.isfinite(w))):
            raise ConfigError("parameters must be finite")
        object.__setattr__(self, "means", m)
        object.__setattr__(self, "log_precisions", t)
        object.__setattr__(self, "weight_logits", w)

    @property
    def k(self) -> int:
        return self.means.size

    def weights(self) -> np.ndarray:
        return weights_from_omega(self.weight_logits)

    def to_state(self) -> BlockState:
        return BlockState((self.means, self.log_precisions, self.weight_logits))

    @classmethod
    def from_state(cls, state: BlockState) -> "MixtureParams":
        if state.n_blocks != 3:
            raise ConfigError("mixture states carry exactly three blocks")
        return cls(*state.blocks)


@dataclass(frozen=True)
class OmegaPrior:
    kind: str
    mean: float = 0.0
    variance: float = 1.0
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in (OMEGA_NORMAL, OMEGA_LOG_GAMMA):
            raise ConfigError(f"unknown weight-logit prior {self.kind!r}")
        if self.kind == OMEGA_NORMAL and self.variance <= 0:
            raise ConfigError("logit prior variance must be positive")
        if self.kind == OMEGA_LOG_GAMMA and self.alpha <= 0:
            raise ConfigError("logit prior alpha must be positive")

    @classmethod
    def normal(cls, mean: float, variance: float) -> "OmegaPrior":
        return cls(OMEGA_NORMAL, mean=mean, variance=variance)

    @classmethod
    def log_gamma(cls, alpha: float) -> "OmegaPrior":
        return cls(OMEGA_LOG_GAMMA, alpha=alpha)

    def kernel_args(self) -> tuple[int, float, float]:
        if self.kind == OMEGA_NORMAL:
            return 0, self.mean, self.variance
        return 1, self.alpha, 1.0


@dataclass(frozen=True)
class KPrior:
    kind: str
    rate: float = 1.0
    mean: float = 1.0
    variance: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in (K_UNIFORM, K_POISSON, K_DNORM):
            raise ConfigError(f"unknown k prior {self.kind!r}")
        if self.kind == K_POISSON and self.rate <= 0:
            raise ConfigError("poisson rate must be positive")
        if self.kind == K_DNORM and self.variance <= 0:
            raise ConfigError("discretized-normal variance must be positive")

    @classmethod
    def uniform(cls) -> "KPrior":
        return cls(K_UNIFORM)

    @classmethod
    def poisson(cls, rate: float) -> "KPrior":
        return cls(K_POISSON, rate=rate)

    @classmethod
    def discretized_normal(cls, mean: float, variance: float) -> "KPrior":
        return cls(K_DNORM, mean=mean, variance=variance)

    def log_pmf_table(self, k_max: int) -> np.ndarray:
        """log pmf over {1..k_max}, renormalized; index 0 is -inf padding."""
        ks = np.arange(1, k_max + 1, dtype=float)
        if self.kind == K_UNIFORM:
            raw = np.zeros(k_max)
        elif self.kind == K_POISSON:
            raw = ks * math.log(self.rate) - np.array([math.lgamma(v + 1.0) for v in ks])
        else:
            raw = -((ks - self.mean) ** 2) / (2.0 * self.variance)
        m = raw.max()
        norm = m + math.log(np.sum(np.exp(raw - m)))
        table = np.concatenate(([-math.inf], raw - norm))
        return table


@dataclass(frozen=True)
class MixtureHyperparams:
    """Prior settings; s and S are the doubled gamma shape and rate for tau."""

    s: float
    S: float
    nu0: float
    psi: float
    omega_prior: OmegaPrior
    k_prior: KPrior
    k_max: int = 30

    def __post_init__(self) -> None:
        if self.s <= 0 or self.S <= 0 or self.psi <= 0:
            raise ConfigError("s, S and psi must be strictly positive")
        if self.k_max < 1:
            raise ConfigError("k_max must be >= 1")
        table = self.k_prior.log_pmf_table(self.k_max)
        if abs(float(np.sum(np.exp(table[1:]))) - 1.0) > 1e-12:
            raise ConfigError("k prior pmf must sum to 1 over its support")


def weights_from_omega(omega) -> np.ndarray:
    """Softmax with max subtraction; entries in (0,1), exact shift invariance."""
    omega = np.asarray(omega, dtype=float)
    shifted = omega - np.max(omega)
    e = np.exp(shifted)
    return e / e.sum()


def log_likelihood(data, params: MixtureParams) -> float:
    data = np.asarray(data, dtype=float)
    if data.size == 0:
        raise TransdimError("log likelihood needs at least one observation")
    return kernels.mixture_loglik(
        data, params.means, params.log_precisions, params.weight_logits
    )


def log_k_prior(k: int, hyper: MixtureHyperparams) -> float:
    if k < 1 or k > hyper.k_max:
        return -math.inf
    return float(hyper.k_prior.log_pmf_table(hyper.k_max)[k])


def log_prior(params: MixtureParams, hyper: MixtureHyperparams) -> float:
    """Component-parameter prior plus the k-prior mass at the current k."""
    kind, a, b = hyper.omega_prior.kernel_args()
    comp = kernels.mixture_logprior(
        params.means,
        params.log_precisions,
        params.weight_logits,
        hyper.s,
        hyper.S,
        hyper.nu0,
        hyper.psi,
        kind,
        a,
        b,
    )
    return comp + log_k_prior(params.k, hyper)


class MixtureTarget:
    """log-posterior interface over three related blocks (means, log-precisions, logits)."""

    n_blocks = 3

    def __init__(self, data, hyper: MixtureHyperparams):
        data = np.ascontiguousarray(data, dtype=float)
        if data.size == 0:
            raise TransdimError("target needs at least one observation")
        if not np.all(np.isfinite(data)):
            raise TransdimError("observations must be finite")
        self.data = data
        self.hyper = hyper
        self.k_max = hyper.k_max
        self._k_table = hyper.k_prior.log_pmf_table(hyper.k_max)
        self._omega_args = hyper.omega_prior.kernel_args()

    def log_density(self, state: BlockState) -> float:
        k = state.k
        if k < 1 or k > self.k_max:
            return -math.inf
        means, log_prec, logits = state.blocks
        kind, a, b = self._omega_args
        out = kernels.mixture_logpost(
            self.data,
            means,
            log_prec,
            logits,
            self.hyper.s,
            self.hyper.S,
            self.hyper.nu0,
            self.hyper.psi,
            kind,
            a,
            b,
        )
        return out + float(self._k_table[k])

    def log_density_params(self, params: MixtureParams) -> float:
        return self.log_density(params.to_state())


def as_target(data, hyper: MixtureHyperparams) -> MixtureTarget:
    """Bind likelihood and priors into the related-blocks sampler interface."""
    return MixtureTarget(data, hyper)


def sample_k(hyper: MixtureHyperparams, rng: np.random.Generator) -> int:
    pmf = np.exp(hyper.k_prior.log_pmf_table(hyper.k_max)[1:])
    return int(rng.choice(np.arange(1, hyper.k_max + 1), p=pmf / pmf.sum()))


def initial_params_fixed_k(data, hyper: MixtureHyperparams, k: int) -> MixtureParams:
    """Deterministic start at a given k: quantile means, components sized to the
    quantile spacing (precision k^2 / var), zero logits."""
    data = np.asarray(data, dtype=float)
    if k < 1 or k > hyper.k_max:
        raise ConfigError(f"k={k} outside [1, {hyper.k_max}]")
    qs = (2.0 * np.arange(k) + 1.0) / (2.0 * k)
    means = np.quantile(data, qs)
    var = float(np.var(data))
    if var <= 0.0:
        var = 1.0
    log_prec = np.full(k, math.log(k * k / var))
    return MixtureParams(means, log_prec, np.zeros(k))


def initial_params(data, hyper: MixtureHyperparams, rng: np.random.Generator) -> MixtureParams:
    """Draw k from its prior, then place the blocks deterministically."""
    return initial_params_fixed_k(data, hyper, sample_k(hyper, rng))
