"""Move kernels: fixed-dimension steps plus birth/death jumps.

Three dimension-changing geometries are implemented, all additive:

* ``birth_step`` / ``death_step``: one coordinate of a single block splits
  into two adjacent children (or a pair merges back), dimension k -> k+-1.
* ``birth_step_m`` / ``death_step_m``: m coordinates of a single block split
  at once, each with its own innovation; dimension k -> k+-m.
* ``birth_step_related`` / ``death_step_related``: every block splits/merges
  at one shared index, so related blocks change dimension together.

A birth draws its innovations, splits the selected coordinates into
(x + a eps, x - a eps) pairs, and moves every other coordinate by the first
innovation.  A death draws the same number of innovations, merges each
selected pair into its backward/forward average, moves the other
coordinates by the first drawn innovation, and reports the reconstructed
innovations eps* = (x_j - x_j')/(2 a_j) that solve the reverse split.

Acceptance ratios are assembled in log space from the coordinate-selection
counts, the move-type weights, the direction-probability ratio, the target
ratio and the analytic Jacobian magnitude.  The innovation density never
enters any acceptance ratio, and a death's freshly drawn innovations stand
in for the ones its reverse birth would use.  This density-free jump rule is
implemented verbatim; the toy-target check in the acceptance suite measures
how far the dimension-changing pair is from leaving its target invariant
(see README, "Known properties"), and the reversible-jump baseline in
``rjmcmc`` provides the density-weighted alternative.

Scale caveat: splitting coordinate j uses scale a_j for both children, so a
death only inverts a birth exactly when the merged pair shares that scale.
Chains that change dimension should therefore use one scale per block; the
step formulas themselves are valid for any scales and are exercised that way
by the Jacobian tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BlockMismatchError,
    ConfigError,
    DimensionBoundsError,
    InvalidStateError,
    JumpSizeError,
    MoveUnavailableError,
)
from .transforms import ADDITIVE, DEFAULT_INNOVATION, TransformFamily

BIRTH = "birth"
DEATH = "death"
NO_CHANGE = "no_change"

LOG2 = math.log(2.0)


# ---------------------------------------------------------------------------
# state & move records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockState:
    """A variable-dimension state: one or more coordinate blocks of equal length.

    Arrays are treated as immutable snapshots; steps always allocate new ones.
    """

    blocks: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        blocks = tuple(np.asarray(b, dtype=float) for b in self.blocks)
        if not blocks:
            raise BlockMismatchError("state needs at least one block")
        k = blocks[0].shape[0]
        for b in blocks:
            if b.ndim != 1 or b.shape[0] != k:
                raise BlockMismatchError("blocks must be 1-d and share a common length")
        object.__setattr__(self, "blocks", blocks)

    @property
    def k(self) -> int:
        return self.blocks[0].shape[0]

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def validate_finite(self) -> None:
        for b in self.blocks:
            if not np.all(np.isfinite(b)):
                raise InvalidStateError("state contains non-finite coordinates")

    @classmethod
    def single(cls, x) -> "BlockState":
        return cls((np.asarray(x, dtype=float),))


@dataclass(frozen=True)
class MoveSpec:
    """Record of one proposed transition.

    ``z`` holds the drawn directions as an (n_blocks, k) matrix at the
    pre-move dimension; entries for split/merge coordinates stay 0.
    """

    move_type: str
    jump_size: int
    indices: tuple[int, ...]
    partner_indices: tuple[int, ...]
    z: np.ndarray
    epsilons: np.ndarray
    epsilons_star: np.ndarray | None
    log_jacobian: float
    log_accept_ratio: float
    log_target_proposed: float


@dataclass(frozen=True)
class MoveWeights:
    """Per-dimension birth/death/no-change probabilities, indexed by k.

    Arrays have length k_max + 1 with entry 0 unused.
    """

    birth: np.ndarray
    death: np.ndarray
    no_change: np.ndarray
    k_max: int

    def __post_init__(self) -> None:
        b = np.asarray(self.birth, dtype=float)
        d = np.asarray(self.death, dtype=float)
        n = np.asarray(self.no_change, dtype=float)
        if b.shape != (self.k_max + 1,) or d.shape != b.shape or n.shape != b.shape:
            raise ConfigError("move-weight arrays must have length k_max + 1")
        if np.any(b < 0) or np.any(d < 0) or np.any(n < 0):
            raise ConfigError("move weights must be nonnegative")
        if not np.allclose(b[1:] + d[1:] + n[1:], 1.0, atol=1e-12):
            raise ConfigError("move weights must sum to 1 at every dimension")
        if d[1] != 0.0:
            raise ConfigError("death weight must vanish at k=1")
        if b[self.k_max] != 0.0:
            raise ConfigError("birth weight must vanish at k=k_max")
        object.__setattr__(self, "birth", b)
        object.__setattr__(self, "death", d)
        object.__setattr__(self, "no_change", n)

    @classmethod
    def default(cls, k_max: int, jump: int = 1) -> "MoveWeights":
        """Equal thirds in the interior; an unavailable move's mass shifts to no-change.

        ``jump`` is the per-move dimension change: birth needs k + jump <= k_max,
        death needs k >= 2 * jump.
        """
        if k_max < 1:
            raise ConfigError("k_max must be >= 1")
        if jump < 1:
            raise JumpSizeError("jump size must be >= 1")
        b = np.full(k_max + 1, 1.0 / 3.0)
        d = np.full(k_max + 1, 1.0 / 3.0)
        ks = np.arange(k_max + 1)
        b[ks + jump > k_max] = 0.0
        d[ks < 2 * jump] = 0.0
        n = 1.0 - b - d
        b[0] = d[0] = 0.0
        n[0] = 1.0
        return cls(b, d, n, k_max)


def draw_move_type(k: int, weights: MoveWeights, rng: np.random.Generator) -> str:
    """Sample birth/death/no-change from the dimension-k multinomial."""
    if k < 1 or k > weights.k_max:
        raise DimensionBoundsError(f"dimension {k} outside [1, {weights.k_max}]")
    u = rng.random()
    if u < weights.birth[k]:
        return BIRTH
    if u < weights.birth[k] + weights.death[k]:
        return DEATH
    return NO_CHANGE


# ---------------------------------------------------------------------------
# direction vectors
# ---------------------------------------------------------------------------

def simulate_direction(
    k: int,
    excluded: Sequence[int],
    p,
    q,
    rng: np.random.Generator,
    reject_all_zero: bool = False,
) -> np.ndarray:
    """Draw ternary directions for the non-excluded coordinates.

    Returns a length-k int8 array; excluded entries are fixed at 0 and do not
    consume randomness.  With ``reject_all_zero`` the draw repeats until some
    entry is nonzero (the identity move is rejected and redrawn).
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any(p <= 0) or np.any(q <= 0) or np.any(p + q > 1.0 + 1e-12):
        raise ConfigError("need p, q in (0,1) with p + q <= 1")
    mask = np.ones(k, dtype=bool)
    if len(excluded):
        mask[list(excluded)] = False
    n = int(mask.sum())
    z = np.zeros(k, dtype=np.int8)
    if n == 0:
        return z
    pm = p[mask] if p.ndim else p
    qm = q[mask] if q.ndim else q
    while True:
        u = rng.random(n)
        zm = np.zeros(n, dtype=np.int8)
        zm[u < pm] = 1
        zm[(u >= pm) & (u < pm + qm)] = -1
        if not reject_all_zero or zm.any():
            break
    z[mask] = zm
    return z


def conjugate(z: np.ndarray) -> np.ndarray:
    return -z


def log_direction_ratio(z: np.ndarray, p, q) -> float:
    """log P(z^c)/P(z): forward entries contribute q/p, backward entries p/q."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.ndim == 0 and q.ndim == 0 and p == q:
        return 0.0
    logdiff = np.log(p) - np.log(q)
    if logdiff.ndim == 0:
        return float(-np.sum(z) * logdiff)
    return float(-np.sum(z * logdiff))


def _draw_z_full(
    m: int,
    k: int,
    p,
    q,
    rng: np.random.Generator,
    reject_all_zero: bool = False,
) -> np.ndarray:
    """(m, k) ternary directions from one uniform block; p, q scalar or length k.

    Hot-path variant of :func:`simulate_direction`: excluded coordinates are
    zeroed by the caller after the draw.  With ``reject_all_zero`` the whole
    matrix redraws until some entry is nonzero.
    """
    while True:
        u = rng.random((m, k))
        z = np.zeros((m, k), dtype=np.int8)
        z[u < p] = 1
        z[(u >= p) & (u < p + q)] = -1
        if not reject_all_zero or z.any():
            return z


def _logdir(z: np.ndarray, p, q) -> float:
    """log P(z^c)/P(z) for a direction matrix; zero entries contribute nothing."""
    if isinstance(p, float) and isinstance(q, float):
        if p == q:
            return 0.0
        return float(-z.sum()) * (math.log(p) - math.log(q))
    logdiff = np.log(np.asarray(p, dtype=float)) - np.log(np.asarray(q, dtype=float))
    return float(-(z * logdiff).sum())


def _metropolis_accept(log_ratio: float, rng: np.random.Generator) -> bool:
    if math.isnan(log_ratio):
        return False
    if log_ratio >= 0.0:
        return True
    return math.log(rng.random()) < log_ratio


def _finite_or_neginf(value: float) -> float:
    return value if math.isfinite(value) else -math.inf


def falling_factorial_log(a: int, r: int) -> float:
    """log of a (a-1) ... (a-r+1), the ordered-selection count."""
    out = 0.0
    for i in range(r):
        out += math.log(a - i)
    return out


def _log0(x: float) -> float:
    """log with log(0) = -inf; a zero reverse-move weight means certain rejection."""
    return math.log(x) if x > 0.0 else -math.inf


# ---------------------------------------------------------------------------
# fixed-dimension step
# ---------------------------------------------------------------------------

def tmcmc_step(
    state: BlockState,
    target,
    family: TransformFamily,
    p,
    q,
    rng: np.random.Generator,
    log_target_current: float | None = None,
    innovation=DEFAULT_INNOVATION,
) -> tuple[BlockState, MoveSpec, bool]:
    """One fixed-dimension move: every coordinate shifts through a single eps.

    All blocks share the innovation; each coordinate of each block carries its
    own direction.  The acceptance ratio is free of the innovation density.
    """
    if log_target_current is None:
        log_target_current = target.log_density(state)
    if not math.isfinite(log_target_current):
        raise InvalidStateError("current state has non-finite log density")
    k = state.k
    m = state.n_blocks
    z = _draw_z_full(m, k, p, q, rng, reject_all_zero=True)
    eps = innovation.sample(rng)
    if family.kind == ADDITIVE:
        new_blocks = tuple(
            state.blocks[ell] + z[ell] * family.scales[ell, :k] * eps for ell in range(m)
        )
        log_jac = 0.0
    else:
        new_blocks = tuple(state.blocks[ell] * float(eps) ** z[ell] for ell in range(m))
        log_jac = float(z.sum()) * math.log(abs(eps))
    proposal = BlockState(new_blocks)
    log_pz = _logdir(z, p, q)
    log_target_new = _finite_or_neginf(target.log_density(proposal))
    log_ratio = log_pz + (log_target_new - log_target_current) + log_jac
    accepted = _metropolis_accept(log_ratio, rng)
    spec = MoveSpec(
        NO_CHANGE, 0, (), (), z, np.array([eps]), None, log_jac, log_ratio, log_target_new
    )
    return (proposal if accepted else state), spec, accepted


# ---------------------------------------------------------------------------
# pure proposal builders (shared by the samplers and the oracle tests)
# ---------------------------------------------------------------------------

def split_birth(
    x: np.ndarray,
    a: np.ndarray,
    js: Sequence[int],
    eps_split: np.ndarray,
    eps_other: float,
    z: np.ndarray,
) -> np.ndarray:
    """Split each x[j_l] into (x[j_l] + a_j eps_split_l, x[j_l] - a_j eps_split_l).

    Children occupy adjacent slots at the parent's position; every other
    coordinate moves to x_i + z_i a_i eps_other.
    """
    k = x.shape[0]
    out = np.empty(k + len(js), dtype=float)
    slot = {j: ell for ell, j in enumerate(js)}
    pos = 0
    for i in range(k):
        ell = slot.get(i)
        if ell is None:
            out[pos] = x[i] + z[i] * a[i] * eps_other
            pos += 1
        else:
            step = a[i] * eps_split[ell]
            out[pos] = x[i] + step
            out[pos + 1] = x[i] - step
            pos += 2
    return out


def merge_death(
    x: np.ndarray,
    a: np.ndarray,
    js: Sequence[int],
    jps: Sequence[int],
    eps_merge: np.ndarray,
    eps_other: float,
    z: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Merge each pair (j_l, j'_l): the backward/forward average replaces j_l.

    Returns the reduced vector and the reconstructed innovations
    eps*_l = (x[j_l] - x[j'_l]) / (2 a[j_l]) that the reverse birth would use.
    """
    k = x.shape[0]
    keep = {j: ell for ell, j in enumerate(js)}
    drop = set(jps)
    out = np.empty(k - len(js), dtype=float)
    pos = 0
    for i in range(k):
        if i in drop:
            continue
        ell = keep.get(i)
        if ell is None:
            out[pos] = x[i] + z[i] * a[i] * eps_other
        else:
            jp = jps[ell]
            out[pos] = 0.5 * ((x[i] - a[i] * eps_merge[ell]) + (x[jp] + a[jp] * eps_merge[ell]))
        pos += 1
    eps_star = np.array([(x[j] - x[jp]) / (2.0 * a[j]) for j, jp in zip(js, jps)])
    return out, eps_star


def _split_single(
    x: np.ndarray, a: np.ndarray, j: int, eps_split: float, eps_other: float, z: np.ndarray
) -> np.ndarray:
    """Vectorized split of one coordinate (z[j] must be 0)."""
    k = x.shape[0]
    a = a[:k]
    out = np.empty(k + 1)
    out[:j] = x[:j] + z[:j] * a[:j] * eps_other
    step = a[j] * eps_split
    out[j] = x[j] + step
    out[j + 1] = x[j] - step
    out[j + 2 :] = x[j + 1 :] + z[j + 1 :] * a[j + 1 :] * eps_other
    return out


def _merge_single(
    x: np.ndarray, a: np.ndarray, j: int, jp: int, eps_merge: float, eps_other: float, z: np.ndarray
) -> tuple[np.ndarray, float]:
    """Vectorized merge of the pair (j, jp) into index j (z[j] = z[jp] = 0)."""
    a = a[: x.shape[0]]
    moved = x + z * a * eps_other
    moved[j] = 0.5 * ((x[j] - a[j] * eps_merge) + (x[jp] + a[jp] * eps_merge))
    out = np.delete(moved, jp)
    return out, (x[j] - x[jp]) / (2.0 * a[j])


def split_birth_related(
    blocks: Sequence[np.ndarray],
    scales: np.ndarray,
    j: int,
    eps: np.ndarray,
    z: np.ndarray,
) -> tuple[np.ndarray, ...]:
    """Block l splits coordinate j with eps_l; all other coordinates use eps_1."""
    return tuple(
        _split_single(blocks[ell], scales[ell], j, eps[ell], eps[0], z[ell])
        for ell in range(len(blocks))
    )


def merge_death_related(
    blocks: Sequence[np.ndarray],
    scales: np.ndarray,
    j: int,
    jp: int,
    eps: np.ndarray,
    z: np.ndarray,
) -> tuple[tuple[np.ndarray, ...], np.ndarray]:
    """Block l merges (j, j') with eps_l; all other coordinates use eps_1."""
    new_blocks = []
    eps_star = np.empty(len(blocks))
    for ell, x in enumerate(blocks):
        out, es = _merge_single(x, scales[ell], j, jp, eps[ell], eps[0], z[ell])
        new_blocks.append(out)
        eps_star[ell] = es
    return tuple(new_blocks), eps_star


# ---------------------------------------------------------------------------
# single-block m-dimension jumps
# ---------------------------------------------------------------------------

def birth_step_m(
    state: BlockState,
    target,
    family: TransformFamily,
    weights: MoveWeights,
    p,
    q,
    m: int,
    rng: np.random.Generator,
    log_target_current: float | None = None,
    innovation=DEFAULT_INNOVATION,
) -> tuple[BlockState, MoveSpec, bool]:
    """Raise a single-block state from dimension k to k + m."""
    _require_additive(family)
    if state.n_blocks != 1:
        raise BlockMismatchError("birth_step_m applies to single-block states")
    k = state.k
    if m < 1 or m > k:
        raise JumpSizeError(f"jump size {m} invalid for dimension {k}")
    if k + m > weights.k_max:
        raise MoveUnavailableError(f"birth to {k + m} exceeds k_max={weights.k_max}")
    if log_target_current is None:
        log_target_current = target.log_density(state)
    if not math.isfinite(log_target_current):
        raise InvalidStateError("current state has non-finite log density")

    x = state.blocks[0]
    a = family.block_scales(0)
    if m == 1:
        js = (int(rng.integers(k)),)
    else:
        js = tuple(int(v) for v in rng.choice(k, size=m, replace=False))
    eps = np.atleast_1d(innovation.sample(rng, m))
    z = _draw_z_full(1, k, p, q, rng)
    z[0, list(js)] = 0
    if m == 1:
        new_x = _split_single(x, a, js[0], eps[0], eps[0], z[0])
    else:
        new_x = split_birth(x, a, js, eps, eps[0], z[0])
    proposal = BlockState((new_x,))

    log_jac = m * LOG2 + float(np.sum(np.log(a[list(js)])))
    log_target_new = _finite_or_neginf(target.log_density(proposal))
    log_ratio = (
        -falling_factorial_log(k + m, m)
        + _log0(weights.death[k + m])
        - math.log(weights.birth[k])
        + _logdir(z, p, q)
        + (log_target_new - log_target_current)
        + log_jac
    )
    accepted = _metropolis_accept(log_ratio, rng)
    spec = MoveSpec(
        BIRTH, m, js, (), z, eps, None, log_jac, log_ratio, log_target_new
    )
    return (proposal if accepted else state), spec, accepted


def death_step_m(
    state: BlockState,
    target,
    family: TransformFamily,
    weights: MoveWeights,
    p,
    q,
    m: int,
    rng: np.random.Generator,
    log_target_current: float | None = None,
    innovation=DEFAULT_INNOVATION,
) -> tuple[BlockState, MoveSpec, bool]:
    """Lower a single-block state from dimension k to k - m.

    The innovations are drawn before the pair selection, mirroring the birth
    direction's draw count; the reconstructed eps* enter only the move record.
    """
    _require_additive(family)
    if state.n_blocks != 1:
        raise BlockMismatchError("death_step_m applies to single-block states")
    k = state.k
    if m < 1:
        raise JumpSizeError("jump size must be >= 1")
    if k < 2 * m:
        raise MoveUnavailableError(f"death of {m} pairs needs dimension >= {2 * m}")
    if log_target_current is None:
        log_target_current = target.log_density(state)
    if not math.isfinite(log_target_current):
        raise InvalidStateError("current state has non-finite log density")

    x = state.blocks[0]
    a = family.block_scales(0)
    eps = np.atleast_1d(innovation.sample(rng, m))
    if m == 1:
        j = int(rng.integers(k))
        jp = int(rng.integers(k - 1))
        if jp >= j:
            jp += 1
        js, jps = (j,), (jp,)
    else:
        sel = rng.choice(k, size=2 * m, replace=False)
        js = tuple(int(v) for v in sel[:m])
        jps = tuple(int(v) for v in sel[m:])
    z = _draw_z_full(1, k, p, q, rng)
    z[0, list(js + jps)] = 0
    if m == 1:
        new_x, es = _merge_single(x, a, js[0], jps[0], eps[0], eps[0], z[0])
        eps_star = np.array([es])
    else:
        new_x, eps_star = merge_death(x, a, js, jps, eps, eps[0], z[0])
    proposal = BlockState((new_x,))

    log_jac = -(m * LOG2 + float(np.sum(np.log(a[list(js)]))))
    log_target_new = _finite_or_neginf(target.log_density(proposal))
    log_ratio = (
        falling_factorial_log(k, m)
        + _log0(weights.birth[k - m])
        - math.log(weights.death[k])
        + _logdir(z, p, q)
        + (log_target_new - log_target_current)
        + log_jac
    )
    accepted = _metropolis_accept(log_ratio, rng)
    spec = MoveSpec(
        DEATH, m, js, jps, z, eps, eps_star, log_jac, log_ratio, log_target_new
    )
    return (proposal if accepted else state), spec, accepted


def birth_step(state, target, family, weights, p, q, rng, log_target_current=None, innovation=DEFAULT_INNOVATION):
    """Single-coordinate birth (the m = 1 specialization)."""
    return birth_step_m(state, target, family, weights, p, q, 1, rng, log_target_current, innovation)


def death_step(state, target, family, weights, p, q, rng, log_target_current=None, innovation=DEFAULT_INNOVATION):
    """Single-pair death (the m = 1 specialization)."""
    return death_step_m(state, target, family, weights, p, q, 1, rng, log_target_current, innovation)


# ---------------------------------------------------------------------------
# related-blocks jumps
# ---------------------------------------------------------------------------

def related_birth_log_terms(
    k: int, weights: MoveWeights, split_scales: np.ndarray
) -> tuple[float, float]:
    """(selection + move-weight term, log Jacobian); shared with the RJ baseline."""
    base = -math.log(k + 1) + _log0(weights.death[k + 1]) - math.log(weights.birth[k])
    log_jac = len(split_scales) * LOG2 + float(np.sum(np.log(split_scales)))
    return base, log_jac


def related_death_log_terms(
    k: int, weights: MoveWeights, split_scales: np.ndarray
) -> tuple[float, float]:
    base = math.log(k) + _log0(weights.birth[k - 1]) - math.log(weights.death[k])
    log_jac = -(len(split_scales) * LOG2 + float(np.sum(np.log(split_scales))))
    return base, log_jac


def birth_step_related(
    state: BlockState,
    target,
    family: TransformFamily,
    weights: MoveWeights,
    p,
    q,
    rng: np.random.Generator,
    log_target_current: float | None = None,
    innovation=DEFAULT_INNOVATION,
) -> tuple[BlockState, MoveSpec, bool]:
    """Shared-index birth: every block grows from k to k + 1 together."""
    _require_additive(family)
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
    eps = np.atleast_1d(innovation.sample(rng, m))
    z = _draw_z_full(m, k, p, q, rng)
    z[:, j] = 0
    proposal = BlockState(split_birth_related(state.blocks, family.scales, j, eps, z))

    base, log_jac = related_birth_log_terms(k, weights, family.scales[:, j])
    log_target_new = _finite_or_neginf(target.log_density(proposal))
    log_ratio = base + _logdir(z, p, q) + (log_target_new - log_target_current) + log_jac
    accepted = _metropolis_accept(log_ratio, rng)
    spec = MoveSpec(
        BIRTH, 1, (j,), (), z, eps, None, log_jac, log_ratio, log_target_new
    )
    return (proposal if accepted else state), spec, accepted


def death_step_related(
    state: BlockState,
    target,
    family: TransformFamily,
    weights: MoveWeights,
    p,
    q,
    rng: np.random.Generator,
    log_target_current: float | None = None,
    innovation=DEFAULT_INNOVATION,
) -> tuple[BlockState, MoveSpec, bool]:
    """Shared-index death: every block shrinks from k to k - 1 together."""
    _require_additive(family)
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

    eps = np.atleast_1d(innovation.sample(rng, m))
    j = int(rng.integers(k))
    jp = int(rng.integers(k - 1))
    if jp >= j:
        jp += 1
    z = _draw_z_full(m, k, p, q, rng)
    z[:, j] = 0
    z[:, jp] = 0
    new_blocks, eps_star = merge_death_related(state.blocks, family.scales, j, jp, eps, z)
    proposal = BlockState(new_blocks)

    base, log_jac = related_death_log_terms(k, weights, family.scales[:, j])
    log_target_new = _finite_or_neginf(target.log_density(proposal))
    log_ratio = base + _logdir(z, p, q) + (log_target_new - log_target_current) + log_jac
    accepted = _metropolis_accept(log_ratio, rng)
    spec = MoveSpec(
        DEATH, 1, (j,), (jp,), z, eps, eps_star, log_jac, log_ratio, log_target_new
    )
    return (proposal if accepted else state), spec, accepted


def _require_additive(family: TransformFamily) -> None:
    if family.kind != ADDITIVE:
        raise ConfigError("dimension-changing moves support the additive family only")
