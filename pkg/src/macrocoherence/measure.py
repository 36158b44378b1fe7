"""The macroscopic-coherence measure and its distance distribution.

For a state ``rho`` written in the eigenbasis of an observable with eigenvalues
``a_i`` the measure is the ``|rho_ij|``-weighted mean of ``|a_i - a_j|`` over all
ordered index pairs, diagonal included::

    M(rho) = sum_ij |a_i - a_j| |rho_ij| / sum_ij |rho_ij|

Two evaluation routes are provided: a sparse route over the stored entries of a
:class:`~macrocoherence.core.DensityMatrix` (``path="dense"``) and a grouped route
for pure states that only needs the summed amplitude magnitude per distinct
eigenvalue (``path="grouped"``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from typing import Optional

import numpy as np

from .core import (
    NORM_TOL,
    DensityMatrix,
    Observable,
    PureState,
    group_by_eigenvalue,
    merge_close,
    validate_pair,
)
from .errors import NonNormalized, NonPositiveUnit

PATHS = ("grouped", "dense", "analytic")

#: measure of a one-particle maximal state for spin-1/2 magnetization in units of 1/2
SPIN_HALF_UNIT = 0.5

# slack when turning M / unit into an integer size, so M = 5 + 1e-15 still gives 10
_NEFF_SLACK = 1e-9


@dataclass(frozen=True)
class DistanceDistribution:
    """Probability ``p`` of finding coherence weight at eigenvalue gap ``delta``.

    ``points`` is a tuple of ``(delta, p)`` pairs sorted by ``delta``.
    """

    points: tuple

    def __post_init__(self):
        pts = tuple((float(d), float(p)) for d, p in self.points)
        if not pts:
            raise ValueError("a distance distribution needs at least one point")
        deltas = [d for d, _ in pts]
        if any(d < 0 for d in deltas):
            raise ValueError("distances must be nonnegative")
        if any(b <= a for a, b in zip(deltas, deltas[1:])):
            raise ValueError("distances must be distinct and ascending")
        if any(p < 0 or p > 1 + NORM_TOL for _, p in pts):
            raise ValueError("probabilities must lie in [0, 1]")
        total = math.fsum(p for _, p in pts)
        if abs(total - 1.0) > NORM_TOL:
            raise NonNormalized(f"probabilities sum to {total!r}")
        object.__setattr__(self, "points", pts)

    @property
    def deltas(self) -> np.ndarray:
        return np.array([d for d, _ in self.points])

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for _, p in self.points])

    def mean(self) -> float:
        return mean_of_distribution(self)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class BinSpec:
    """Equal-width bins ``[origin + k w, origin + (k+1) w)``.

    With ``origin=None`` the bins are anchored at the smallest eigenvalue
    instead: ``[a_min, a_min + w]`` then ``(a_min + k w, a_min + (k+1) w]``, so a
    width of at least the spectral span always yields a single bin.
    """

    width: float
    origin: Optional[float] = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.width) and self.width > 0):
            raise ValueError(f"bin width must be finite and positive, got {self.width!r}")
        if self.origin is not None and not math.isfinite(self.origin):
            raise ValueError("bin origin must be finite")


@dataclass(frozen=True)
class MeasureReport:
    m: float
    n_eff: int
    distribution: DistanceDistribution
    path: str

    def __post_init__(self):
        if self.path not in PATHS:
            raise ValueError(f"unknown path {self.path!r}")


def distance(obs: Observable, i: int, j: int) -> float:
    """``|a_i - a_j|`` for basis indices ``i`` and ``j``."""
    return abs(obs.eigenvalue(i) - obs.eigenvalue(j))


def _off_diagonal_factor(rho: DensityMatrix) -> np.ndarray:
    # each stored off-diagonal entry stands for itself and its conjugate partner
    return np.where(rho.rows == rho.cols, 1.0, 2.0)


def l1_coherence(rho: DensityMatrix) -> float:
    """Sum of ``|rho_ij|`` over all off-diagonal positions."""
    off = rho.rows != rho.cols
    return float(2.0 * math.fsum(np.abs(rho.values[off])))


def _pair_distances(rho: DensityMatrix, obs: Observable):
    support = np.union1d(rho.rows, rho.cols)
    values = obs.values_at(support)
    a = values[np.searchsorted(support, rho.rows)]
    b = values[np.searchsorted(support, rho.cols)]
    return np.abs(a - b)


def raw_weighted_sum(rho: DensityMatrix, obs: Observable) -> float:
    """Unnormalized ``sum_ij |a_i - a_j| |rho_ij|`` over ordered pairs."""
    validate_pair(rho, obs)
    d = _pair_distances(rho, obs)
    return float(np.sum(_off_diagonal_factor(rho) * np.abs(rho.values) * d))


def _distribution_from_pairs(deltas, weights) -> DistanceDistribution:
    deltas, mass = merge_close(deltas, weights)
    total = math.fsum(mass)
    return DistanceDistribution(tuple(zip(deltas.tolist(), (mass / total).tolist())))


def distance_distribution(rho: DensityMatrix, obs: Observable) -> DistanceDistribution:
    """Normalized coherence weight per distinct eigenvalue gap (gap 0 included)."""
    validate_pair(rho, obs)
    weights = _off_diagonal_factor(rho) * np.abs(rho.values)
    return _distribution_from_pairs(_pair_distances(rho, obs), weights)


def mean_of_distribution(dist: DistanceDistribution) -> float:
    return math.fsum(d * p for d, p in dist.points)


def effective_size(m: float, unit_mmqs_value: float = SPIN_HALF_UNIT) -> int:
    """Size of the smallest maximal state whose measure reaches ``m``.

    The maximal state of ``n`` particles has measure ``n * unit_mmqs_value``, so
    this is ``ceil(m / unit_mmqs_value)``.  A relative slack of 1e-9 absorbs
    rounding in ``m``.
    """
    if not unit_mmqs_value > 0:
        raise NonPositiveUnit(f"unit value must be positive, got {unit_mmqs_value!r}")
    if m < 0:
        raise ValueError(f"measure must be nonnegative, got {m!r}")
    ratio = m / unit_mmqs_value
    return max(0, math.ceil(ratio - _NEFF_SLACK * max(1.0, ratio)))


def measure_m(rho: DensityMatrix, obs: Observable, unit_mmqs_value: float = SPIN_HALF_UNIT) -> MeasureReport:
    """Evaluate the measure from the stored entries of a density matrix."""
    validate_pair(rho, obs)
    weights = _off_diagonal_factor(rho) * np.abs(rho.values)
    d = _pair_distances(rho, obs)
    m = float(np.sum(weights * d) / np.sum(weights))
    dist = _distribution_from_pairs(d, weights)
    return MeasureReport(m, effective_size(m, unit_mmqs_value), dist, "dense")


def grouped_measure(values: np.ndarray, weights: np.ndarray) -> tuple[float, DistanceDistribution]:
    """Measure and distribution from per-class summed magnitudes.

    ``M = sum_ab w_a w_b |v_a - v_b| / (sum_a w_a)**2``.
    """
    values = np.asarray(values, dtype=float)
    w = np.asarray(weights, dtype=float) / np.sum(weights)
    gaps = np.abs(values[:, None] - values[None, :])
    pw = w[:, None] * w[None, :]
    m = float(np.sum(pw * gaps))
    return m, _distribution_from_pairs(gaps.ravel(), pw.ravel())


def measure_m_pure(psi: PureState, obs: Observable, unit_mmqs_value: float = SPIN_HALF_UNIT) -> MeasureReport:
    """Evaluate the measure of a pure state through eigenvalue-class aggregation.

    Cost is quadratic in the number of distinct eigenvalues on the support, never
    in the Hilbert space dimension.
    """
    sw = group_by_eigenvalue(psi, obs)
    m, dist = grouped_measure(sw.values, sw.weights)
    return MeasureReport(m, effective_size(m, unit_mmqs_value), dist, "grouped")


def measure(state, obs: Observable, unit_mmqs_value: float = SPIN_HALF_UNIT) -> MeasureReport:
    """Dispatch to :func:`measure_m_pure` or :func:`measure_m` by state type."""
    if isinstance(state, PureState):
        return measure_m_pure(state, obs, unit_mmqs_value)
    return measure_m(state, obs, unit_mmqs_value)


def bin_observable(obs: Observable, bins: BinSpec) -> Observable:
    """Replace every eigenvalue by the center of the bin that contains it."""
    w, o = bins.width, bins.origin
    if o is None:
        lo = obs.bounds()[0]

        def center(a):
            return lo + (np.maximum(np.ceil((a - lo) / w) - 1, 0) + 0.5) * w
    else:
        def center(a):
            return o + (np.floor((a - o) / w) + 0.5) * w

    name = f"{obs.name}[bin {w:g}]"
    if not obs.is_lazy:
        return Observable(center(obs.eigenvalues), name)
    lo, hi = obs.extremes()
    return Observable.from_function(obs.dimension, lambda i: float(center(obs.eigenvalue(i))), name,
                                    extremes=(lo, hi), tag=obs.tag)

