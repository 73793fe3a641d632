"""Hot numeric kernels: numba-jitted with pure-numpy fallbacks.

The jitted path is used when numba imports cleanly; set
``TRANSDIM_DISABLE_NUMBA=1`` before import to force the numpy path.
``benchmarks/bench_kernels.py`` times the two side by side.
"""
from __future__ import annotations

import math
import os

import numpy as np

LOG_2PI = math.log(2.0 * math.pi)


def _numba_requested() -> bool:
    flag = os.environ.get("TRANSDIM_DISABLE_NUMBA", "")
    return flag.strip().lower() not in {"1", "true", "yes", "on"}


NUMBA_ENABLED = False
if _numba_requested():
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass

if not NUMBA_ENABLED:
    def njit(*args, **kwargs):  # type: ignore[no-redef]
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


# ---------------------------------------------------------------------------
# mixture log likelihood
# ---------------------------------------------------------------------------

def loglik_numpy(data: np.ndarray, means: np.ndarray, log_prec: np.ndarray, logits: np.ndarray) -> float:
    """Sum_i log sum_j pi_j N(y_i | mean_j, 1/tau_j), via per-observation log-sum-exp."""
    logw = logits - _logsumexp_np(logits)
    tau = np.exp(log_prec)
    comp = (
        logw[None, :]
        + 0.5 * log_prec[None, :]
        - 0.5 * LOG_2PI
        - 0.5 * tau[None, :] * (data[:, None] - means[None, :]) ** 2
    )
    m = comp.max(axis=1)
    total = float(np.sum(m + np.log(np.sum(np.exp(comp - m[:, None]), axis=1))))
    return total if math.isfinite(total) else -math.inf


def _logsumexp_np(x: np.ndarray) -> float:
    m = float(np.max(x))
    return m + math.log(float(np.sum(np.exp(x - m))))


@njit(cache=True)
def _loglik_nb(data, means, log_prec, logits):  # pragma: no cover - jitted
    k = logits.shape[0]
    wmax = logits[0]
    for j in range(1, k):
        if logits[j] > wmax:
            wmax = logits[j]
    wsum = 0.0
    for j in range(k):
        wsum += math.exp(logits[j] - wmax)
    lse_w = wmax + math.log(wsum)

    const = np.empty(k)
    tau = np.empty(k)
    for j in range(k):
        const[j] = (logits[j] - lse_w) + 0.5 * log_prec[j] - 0.5 * LOG_2PI
        tau[j] = math.exp(log_prec[j])

    total = 0.0
    terms = np.empty(k)
    for i in range(data.shape[0]):
        y = data[i]
        m = -math.inf
        for j in range(k):
            d = y - means[j]
            t = const[j] - 0.5 * tau[j] * d * d
            terms[j] = t
            if t > m:
                m = t
        if m == -math.inf:
            return -math.inf
        s = 0.0
        for j in range(k):
            s += math.exp(terms[j] - m)
        total += m + math.log(s)
    return total


# ---------------------------------------------------------------------------
# mixture log prior (component terms; the k-prior term is added by the caller)
# ---------------------------------------------------------------------------

def logprior_numpy(
    means: np.ndarray,
    log_prec: np.ndarray,
    logits: np.ndarray,
    s: float,
    big_s: float,
    nu0: float,
    psi: float,
    omega_kind: int,
    omega_a: float,
    omega_b: float,
) -> float:
    """Component-parameter prior in the log-precision / logit parameterization.

    omega_kind 0: logits ~ Normal(omega_a, omega_b); kind 1: exp(logit) ~
    Gamma(omega_a, 1) with the +logit change-of-variable term.
    """
    a = 0.5 * s
    b = 0.5 * big_s
    tau = np.exp(log_prec)
    t_term = a * math.log(b) - math.lgamma(a) + a * log_prec - b * tau
    m_term = -0.5 * (LOG_2PI + math.log(psi)) + 0.5 * log_prec - tau * (means - nu0) ** 2 / (2.0 * psi)
    if omega_kind == 0:
        w_term = -0.5 * (LOG_2PI + math.log(omega_b)) - (logits - omega_a) ** 2 / (2.0 * omega_b)
    else:
        w_term = -math.lgamma(omega_a) + omega_a * logits - np.exp(logits)
    total = float(np.sum(t_term) + np.sum(m_term) + np.sum(w_term))
    return total if math.isfinite(total) else -math.inf


@njit(cache=True)
def _logprior_nb(means, log_prec, logits, s, big_s, nu0, psi, omega_kind, omega_a, omega_b):  # pragma: no cover
    a = 0.5 * s
    b = 0.5 * big_s
    base = a * math.log(b) - math.lgamma(a)
    total = 0.0
    for j in range(means.shape[0]):
        tau = math.exp(log_prec[j])
        total += base + a * log_prec[j] - b * tau
        d = means[j] - nu0
        total += -0.5 * (LOG_2PI + math.log(psi)) + 0.5 * log_prec[j] - tau * d * d / (2.0 * psi)
        if omega_kind == 0:
            dw = logits[j] - omega_a
            total += -0.5 * (LOG_2PI + math.log(omega_b)) - dw * dw / (2.0 * omega_b)
        else:
            total += -math.lgamma(omega_a) + omega_a * logits[j] - math.exp(logits[j])
    return total


@njit(cache=True)
def _logpost_nb(data, means, log_prec, logits, s, big_s, nu0, psi, omega_kind, omega_a, omega_b):  # pragma: no cover
    lp = _logprior_nb(means, log_prec, logits, s, big_s, nu0, psi, omega_kind, omega_a, omega_b)
    return lp + _loglik_nb(data, means, log_prec, logits)


def mixture_loglik(data, means, log_prec, logits) -> float:
    if NUMBA_ENABLED:
        out = float(_loglik_nb(data, means, log_prec, logits))
        return out if math.isfinite(out) else -math.inf
    return loglik_numpy(data, means, log_prec, logits)


def mixture_logprior(means, log_prec, logits, s, big_s, nu0, psi, omega_kind, omega_a, omega_b) -> float:
    if NUMBA_ENABLED:
        out = float(_logprior_nb(means, log_prec, logits, s, big_s, nu0, psi, omega_kind, omega_a, omega_b))
        return out if math.isfinite(out) else -math.inf
    return logprior_numpy(means, log_prec, logits, s, big_s, nu0, psi, omega_kind, omega_a, omega_b)


def mixture_logpost(data, means, log_prec, logits, s, big_s, nu0, psi, omega_kind, omega_a, omega_b) -> float:
    if NUMBA_ENABLED:
        out = float(_logpost_nb(data, means, log_prec, logits, s, big_s, nu0, psi, omega_kind, omega_a, omega_b))
        return out if math.isfinite(out) else -math.inf
    return logprior_numpy(means, log_prec, logits, s, big_s, nu0, psi, omega_kind, omega_a, omega_b) + loglik_numpy(
        data, means, log_prec, logits
    )


# ---------------------------------------------------------------------------
# density evaluation on a grid
# ---------------------------------------------------------------------------

def density_numpy(grid: np.ndarray, means: np.ndarray, log_prec: np.ndarray, logits: np.ndarray) -> np.ndarray:
    w = np.exp(logits - _logsumexp_np(logits))
    tau = np.exp(log_prec)
    comp = np.sqrt(tau / (2.0 * np.pi))[None, :] * np.exp(
        -0.5 * tau[None, :] * (grid[:, None] - means[None, :]) ** 2
    )
    return comp @ w


@njit(cache=True)
def _density_nb(grid, means, log_prec, logits):  # pragma: no cover - jitted
    k = logits.shape[0]
    wmax = logits[0]
    for j in range(1, k):
        if logits[j] > wmax:
            wmax = logits[j]
    wsum = 0.0
    for j in range(k):
        wsum += math.exp(logits[j] - wmax)
    w = np.empty(k)
    amp = np.empty(k)
    tau = np.empty(k)
    for j in range(k):
        w[j] = math.exp(logits[j] - wmax) / wsum
        tau[j] = math.exp(log_prec[j])
        amp[j] = w[j] * math.sqrt(tau[j] / (2.0 * math.pi))
    out = np.zeros(grid.shape[0])
    for g in range(grid.shape[0]):
        x = grid[g]
        acc = 0.0
        for j in range(k):
            d = x - means[j]
            acc += amp[j] * math.exp(-0.5 * tau[j] * d * d)
        out[g] = acc
    return out


def mixture_density(grid, means, log_prec, logits) -> np.ndarray:
    if NUMBA_ENABLED:
        return np.asarray(_density_nb(grid, means, log_prec, logits))
    return density_numpy(grid, means, log_prec, logits)


# ---------------------------------------------------------------------------
# pairwise sup-norm distances
# ---------------------------------------------------------------------------

def cheb_matrix_numpy(values: np.ndarray, chunk: int = 8) -> np.ndarray:
    n = values.shape[0]
    out = np.zeros((n, n))
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        out[lo:hi] = np.max(np.abs(values[lo:hi, None, :] - values[None, :, :]), axis=2)
    return out


@njit(cache=True)
def _cheb_matrix_nb(values):  # pragma: no cover - jitted
    n, g = values.shape
    out = np.zeros((n, n))
    for i in range(n):
        for l in range(i + 1, n):
            m = 0.0
            for t in range(g):
                d = abs(values[i, t] - values[l, t])
                if d > m:
                    m = d
            out[i, l] = m
            out[l, i] = m
    return out


def cheb_matrix(values: np.ndarray) -> np.ndarray:
    values = np.ascontiguousarray(values, dtype=float)
    if NUMBA_ENABLED:
        return np.asarray(_cheb_matrix_nb(values))
    return cheb_matrix_numpy(values)
