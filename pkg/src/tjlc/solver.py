"""ADMM solver for tensor completion under the joint-rank surrogate.

The model couples every mode-(l1, l2) unfolding of the unknown tensor ``X``
to an auxiliary copy ``Z_{l1 l2}`` and minimizes

    sum_{l1 <= l2} beta_{l1 l2} * ||unfold(Z_{l1 l2}, l1, l2)||_LC
    subject to  Z_{l1 l2} = X,  X = T on the observed set.

Each iteration runs a proximal step per pair, a closed-form weighted average
for ``X`` that pins the observed entries, a dual ascent step and a geometric
increase of the penalties ``mu <- eta * mu``. Geometric growth with
``eta > 1`` makes ``sum_j (mu_j + mu_{j-1}) / mu_{j-1}**2`` a convergent
geometric series, which is what the boundedness argument for the iterates
requires.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .lcnorm import LCParams, tensor_prox
from .talgebra import joint_rank
from .tensor import as_mask, fold_pair, frobenius_norm, mode_pairs, unfold_pair

log = logging.getLogger(__name__)

Pair = tuple[int, int]


@dataclass(frozen=True)
class SolverConfig:
    """Solver scalars.

    `alpha` holds one unnormalized weight per mode pair in lexicographic
    order; the pair weights ``beta`` are ``alpha / sum(alpha)`` and the
    initial penalties are ``beta / tau``.
    """

    alpha: tuple[float, ...]
    tau: float = 1e4
    eta: float = 1.1
    lc: LCParams = field(default_factory=LCParams)
    epsilon: float = 1e-4
    max_iters: int = 500
    rank_tol: float | None = None
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if not self.eta > 1:
            raise ValueError("eta must exceed 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if int(self.max_iters) < 1:
            raise ValueError("max_iters must be a positive integer")
        if int(self.threads) < 1:
            raise ValueError("threads must be a positive integer")


@dataclass
class SolverState:
    x: np.ndarray
    z: dict[Pair, np.ndarray]
    q: dict[Pair, np.ndarray]
    mu: dict[Pair, float]
    beta: dict[Pair, float]
    iter: int = 0
    re_history: list[float] = field(default_factory=list)


@dataclass
class CompletionResult:
    x: np.ndarray
    iterations: int
    converged: bool
    re_history: list[float]
    joint_rank_final: list[int]


def n_pairs(ndim: int) -> int:
    return ndim * (ndim + 1) // 2


def derive_betas(alpha: Sequence[float], ndim: int | None = None) -> dict[Pair, float]:
    """Normalize per-pair weights to sum to one, keyed by mode pair."""
    alpha = [float(a) for a in alpha]
    if ndim is None:
        ndim = int(round((math.sqrt(8 * len(alpha) + 1) - 1) / 2))
    if len(alpha) != n_pairs(ndim):
        raise ValueError(f"alpha has {len(alpha)} entries; an order-{ndim} tensor needs {n_pairs(ndim)}")
    if any(not a > 0 for a in alpha):
        raise ValueError("all alpha entries must be positive")
    total = math.fsum(alpha)
    return {pair: a / total for pair, a in zip(mode_pairs(ndim), alpha)}


def init_state(t, omega, cfg: SolverConfig) -> SolverState:
    t = np.asarray(t, dtype=np.float64)
    omega = as_mask(omega, t.shape)
    beta = derive_betas(cfg.alpha, t.ndim)
    x0 = np.where(omega, t, 0.0)
    return SolverState(
        x=x0,
        z={pair: x0.copy() for pair in beta},
        q={pair: np.zeros_like(x0) for pair in beta},
        mu={pair: b / cfg.tau for pair, b in beta.items()},
        beta=beta,
    )


def _z_step(pair: Pair, state: SolverState, lc: LCParams) -> np.ndarray:
    l1, l2 = pair
    mu = state.mu[pair]
    w = state.x + state.q[pair] / mu
    shrunk = tensor_prox(unfold_pair(w, l1, l2), mu / state.beta[pair], lc)
    return fold_pair(shrunk, state.x.shape, l1, l2)


def update_z(state: SolverState, cfg: SolverConfig) -> SolverState:
    """Proximal step for every pair (pairs are independent)."""
    pairs = list(state.z)
    if cfg.threads > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(lambda pr: _z_step(pr, state, cfg.lc), pairs))
    else:
        results = [_z_step(pr, state, cfg.lc) for pr in pairs]
    return replace(state, z=dict(zip(pairs, results)))


def update_x(state: SolverState, t, omega) -> SolverState:
    """Weighted average of ``Z - Q/mu`` off the observed set, ``T`` on it."""
    t = np.asarray(t, dtype=np.float64)
    omega = as_mask(omega, t.shape)
    num = np.zeros_like(state.x)
    den = 0.0
    for pair in state.z:  # fixed pair order keeps the reduction deterministic
        mu = state.mu[pair]
        num += mu * (state.z[pair] - state.q[pair] / mu)
        den += mu
    return replace(state, x=np.where(omega, t, num / den))


def update_q(state: SolverState) -> SolverState:
    q = {pair: state.q[pair] + state.mu[pair] * (state.x - state.z[pair]) for pair in state.q}
    return replace(state, q=q)


def relative_change(x_new, x_old) -> float:
    """``||x_new - x_old||_F**2 / ||x_old||_F**2``; ``inf`` when `x_old` is zero."""
    den = frobenius_norm(x_old) ** 2
    if den == 0:
        return math.inf
    return frobenius_norm(np.asarray(x_new) - np.asarray(x_old)) ** 2 / den


def step(state: SolverState, t, omega, cfg: SolverConfig) -> SolverState:
    """One full iteration: Z, X, Q, then ``mu <- eta * mu``; appends the relative change."""
    x_old = state.x
    state = update_z(state, cfg)
    state = update_x(state, t, omega)
    state = update_q(state)
    re = relative_change(state.x, x_old)
    return replace(
        state,
        mu={pair: cfg.eta * m for pair, m in state.mu.items()},
        iter=state.iter + 1,
        re_history=state.re_history + [re],
    )


def run(
    t,
    omega,
    cfg: SolverConfig,
    callback: Callable[[SolverState], None] | None = None,
) -> CompletionResult:
    """Complete `t` from its entries on `omega`.

    Iterates until the relative change drops to ``cfg.epsilon`` or
    ``cfg.max_iters`` iterations have run. `callback`, if given, sees the
    state after every iteration.
    """
    t = np.asarray(t, dtype=np.float64)
    omega = as_mask(omega, t.shape)
    state = init_state(t, omega, cfg)
    converged = False
    while state.iter < cfg.max_iters:
        state = step(state, t, omega, cfg)
        if callback is not None:
            callback(state)
        re = state.re_history[-1]
        log.debug("iter %d  RE %.3e", state.iter, re)
        if re <= cfg.epsilon:
            converged = True
            break
    if not converged:
        log.warning("no convergence within %d iterations (last RE %.3e)", cfg.max_iters, state.re_history[-1])
    return CompletionResult(
        x=state.x,
        iterations=state.iter,
        converged=converged,
        re_history=list(state.re_history),
        joint_rank_final=joint_rank(state.x, cfg.rank_tol) if state.x.ndim >= 2 else [],
    )
