"""Maximal states of the measure and a numerical check of their optimality.

For a pure state only the magnitudes ``|c_i|`` enter the measure, and only
through their sums per distinct eigenvalue.  Maximizing over states therefore
reduces to maximizing the ratio of quadratic forms

    f(w) = w^T D w / (1^T w)^2,      D_ab = |v_a - v_b|,

over the nonnegative orthant.  ``f`` is invariant under ``w -> s w``, so every
iterate is renormalized to the simplex, where ``f`` is concave (``D`` is
conditionally negative definite).  The known optimum is half the spectral
span, reached by equal weight on the two extreme eigenvalues.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Observable, PureState, merge_close
from .errors import AllZeroWeights, CounterexampleFound, FlatSpectrum, TooLarge
from .oracle import dense_measure_batch, random_density_batch, random_pure_vectors

MAX_CLASSES = 64
MAX_SCAN_DIM = 8
GRAD_TOL = 1e-9
MAX_ITER = 10_000
BOUND_SLACK = 1e-9
OPTIMUM_TOL = 1e-6
EXTREME_MASS_TOL = 1e-4
POLISH_START = 1e-2
POLISH_SUPPORT = 1e-9


@dataclass(frozen=True)
class OptimizationResult:
    best_m: float
    weights: np.ndarray
    class_values: np.ndarray
    restarts_used: int
    converged: bool
    iterations: int = 0

    def extreme_mass(self) -> float:
        """Fraction of the weight sitting on the smallest and largest class."""
        w = self.weights
        if w.size == 1:
            return 1.0
        return float((w[0] + w[-1]) / w.sum())


@dataclass(frozen=True)
class TheoremReport:
    d_max_over_2: float
    best_m: float
    max_sampled_mixed: float
    max_sampled_pure: float
    bound_violations: int
    converged: bool
    optimum_attained: bool
    extreme_mass: float
    degenerate: bool
    trials: int

    @property
    def unique_optimum(self) -> Optional[bool]:
        """Whether the optimizer concentrated on the two extremes; ``None`` under degeneracy."""
        if self.degenerate:
            return None
        return self.extreme_mass >= 1.0 - EXTREME_MASS_TOL

    def as_dict(self) -> dict:
        return {
            "d_max_over_2": self.d_max_over_2,
            "best_m": self.best_m,
            "bound_violations": self.bound_violations,
            "converged": self.converged,
        }


def construct_mmqs(obs: Observable, phi: float = 0.0) -> PureState:
    """``(|i_max> + e^{i phi} |i_min>) / sqrt(2)`` for the extreme eigenvalues of ``obs``.

    Under degeneracy the lowest basis index of each extreme class is used.
    """
    i_min, i_max = obs.extremes()
    if obs.eigenvalue(i_max) == obs.eigenvalue(i_min):
        raise FlatSpectrum("all eigenvalues are equal")
    h = math.sqrt(0.5)
    return PureState({i_max: h, i_min: h * cmath.exp(1j * phi)}, obs.dimension)


def pure_objective(weights, distinct_eigenvalues) -> float:
    """``sum_ab w_a w_b |v_a - v_b| / (sum_a w_a)**2`` for nonnegative ``w``."""
    w = np.asarray(weights, dtype=float)
    v = np.asarray(distinct_eigenvalues, dtype=float)
    if w.shape != v.shape:
        raise ValueError("one weight per eigenvalue is required")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    s = w.sum()
    if not s > 0:
        raise AllZeroWeights("at least one weight must be positive")
    return float(w @ np.abs(v[:, None] - v[None, :]) @ w / (s * s))


def _projected_norm(w, g):
    pg = np.where(w > 0, g, np.maximum(g, 0.0))
    return float(np.linalg.norm(pg))


def _polish(w, dist, f):
    """Stationary point of ``f`` on the face spanned by the support of ``w``.

    Solves ``D_S w = lam 1, sum w = 1``.  Returns ``None`` unless the solution is
    feasible, no worse than ``f`` and satisfies the first-order conditions off
    the support.
    """
    support = np.flatnonzero(w > POLISH_SUPPORT)
    k = support.size
    if k < 2:
        return None
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = dist[np.ix_(support, support)]
    kkt[:k, k] = kkt[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    try:
        sol = np.linalg.solve(kkt, rhs)[:k]
    except np.linalg.LinAlgError:
        return None
    if sol.min() < -1e-12:
        return None
    out = np.zeros_like(w)
    out[support] = np.maximum(sol, 0.0)
    out /= out.sum()
    f_new = out @ dist @ out
    if f_new < f - 1e-12 or _projected_norm(out, 2.0 * (dist @ out) - 2.0 * f_new) >= GRAD_TOL:
        return None
    return out, f_new


def _ascend(w, dist):
    """Projected gradient ascent from ``w`` (on the simplex).  Returns ``(w, f, converged, iters)``.

    Backtracking halves the step until an Armijo condition holds; the first
    trial step is 1.0 and later ones start from twice the last accepted step.
    The gradient vanishes on every interior class at the optimum, so once it is
    small the support is polished by solving the stationarity conditions exactly.
    """
    f = w @ dist @ w
    # near the optimum the gain per step drops below the rounding of f itself
    slack = 16 * np.finfo(float).eps * max(1.0, float(dist.max()))
    t = 0.5
    for it in range(MAX_ITER):
        g = 2.0 * (dist @ w) - 2.0 * f
        pn = _projected_norm(w, g)
        if pn < GRAD_TOL:
            return w, f, True, it
        if pn < POLISH_START:
            polished = _polish(w, dist, f)
            if polished is not None:
                return polished[0], polished[1], True, it
        # flat directions between close eigenvalues need long steps
        t = min(2.0 * t, 1e12)
        while True:
            trial = np.maximum(w + t * g, 0.0)
            s = trial.sum()
            if s > 0:
                trial /= s
                f_trial = trial @ dist @ trial
                if f_trial >= f + 1e-4 * (g @ (trial - w)) - slack:
                    break
            t *= 0.5
            if t < 1e-30:
                return w, f, False, it
        w, f = trial, f_trial
    g = 2.0 * (dist @ w) - 2.0 * f
    return w, f, _projected_norm(w, g) < GRAD_TOL, MAX_ITER


def maximize_measure(obs: Observable, restarts: int = 20, seed=0) -> OptimizationResult:
    """Maximize the pure-state measure over per-eigenvalue weights.

    Each restart starts from a Dirichlet(1, ..., 1) draw with its own child
    generator; the best final value over restarts is reported.  Non-convergence
    is reported through ``converged`` rather than raised.
    """
    if restarts < 1:
        raise ValueError("at least one restart is required")
    values, _ = merge_close(obs.eigenvalues, np.ones(obs.dimension))
    k = values.size
    if k > MAX_CLASSES:
        raise TooLarge(f"{k} distinct eigenvalues exceeds the optimizer limit {MAX_CLASSES}")
    if k == 1:
        return OptimizationResult(0.0, np.ones(1), values, restarts, True)
    dist = np.abs(values[:, None] - values[None, :])
    best = None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.Generator(np.random.PCG64(child))
        w, f, ok, iters = _ascend(rng.dirichlet(np.ones(k)), dist)
        if best is None or f > best[1]:
            best = (w, f, ok, iters)
    w, f, ok, iters = best
    return OptimizationResult(float(f), w, values, restarts, ok, iters)


def verify_theorem(obs: Observable, trials: int = 1000, seed=0, restarts: int = 20,
                   raise_on_violation: bool = True) -> TheoremReport:
    """Check that no sampled state beats half the spectral span and that the optimizer reaches it.

    Samples ``trials`` Hilbert-Schmidt random density matrices and ``trials``
    Gaussian random pure states.  Uniqueness is only examined for
    non-degenerate spectra.
    """
    dim = obs.dimension
    if dim > MAX_SCAN_DIM:
        raise TooLarge(f"the mixed-state scan is limited to dimension {MAX_SCAN_DIM}")
    a = np.asarray(obs.eigenvalues)
    bound = 0.5 * (a.max() - a.min())
    mixed_seed, pure_seed = np.random.SeedSequence(seed).spawn(2)
    m_mixed = dense_measure_batch(random_density_batch(dim, trials, mixed_seed), a)
    vecs = random_pure_vectors(dim, trials, pure_seed)
    m_pure = dense_measure_batch(np.abs(vecs)[:, :, None] * np.abs(vecs)[:, None, :], a)
    violations = int(np.sum(m_mixed > bound + BOUND_SLACK) + np.sum(m_pure > bound + BOUND_SLACK))
    if violations and raise_on_violation:
        worst = max(m_mixed.max(), m_pure.max())
        raise CounterexampleFound(f"sampled measure {worst!r} exceeds bound {bound!r}")
    opt = maximize_measure(obs, restarts, seed)
    values, _ = merge_close(a, np.ones(dim))
    return TheoremReport(
        d_max_over_2=float(bound),
        best_m=opt.best_m,
        max_sampled_mixed=float(m_mixed.max()) if trials else 0.0,
        max_sampled_pure=float(m_pure.max()) if trials else 0.0,
        bound_violations=violations,
        converged=opt.converged,
        optimum_attained=bool(abs(opt.best_m - bound) <= OPTIMUM_TOL),
        extreme_mass=opt.extreme_mass(),
        degenerate=values.size < dim,
        trials=trials,
    )
