"""Dense reference evaluation and seeded random instances.

Everything here is deliberately naive: the measure is summed over every ordered
pair ``(i, j)`` of a dense matrix with no use of sparsity or eigenvalue
grouping, so it can arbitrate the fast paths in :mod:`macrocoherence.measure`.

Random generators use numpy's ``PCG64`` bit generator seeded with the given
integer, so instances are reproducible bit for bit across runs.
"""
from __future__ import annotations

import numpy as np

from .core import NORM_TOL, Observable, PureState
from .errors import DimensionMismatch, NonHermitian, NonNormalized, TooLarge

MAX_DENSE_DIM = 4096
# pure states are expanded row by row, never as a full matrix
MAX_DENSE_PURE_DIM = 2 ** 14
_ROW_BLOCK = 256


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def dense_measure(rho: np.ndarray, obs: Observable) -> float:
    """Literal ``sum_ij |a_i - a_j| |rho_ij| / sum_ij |rho_ij|`` over all ordered pairs."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {rho.shape}")
    dim = rho.shape[0]
    if dim > MAX_DENSE_DIM:
        raise TooLarge(f"dense oracle limited to dimension {MAX_DENSE_DIM}")
    if dim != obs.dimension:
        raise DimensionMismatch(f"matrix dimension {dim} != observable dimension {obs.dimension}")
    if not np.allclose(rho, rho.conj().T, rtol=0.0, atol=1e-12):
        raise NonHermitian("matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > NORM_TOL:
        raise NonNormalized("trace is not one")
    a = obs.eigenvalues
    num = 0.0
    den = 0.0
    for start in range(0, dim, _ROW_BLOCK):
        block = np.abs(rho[start:start + _ROW_BLOCK])
        dist = np.abs(a[start:start + _ROW_BLOCK, None] - a[None, :])
        num += float(np.sum(dist * block))
        den += float(np.sum(block))
    return num / den


def dense_measure_pure(psi: PureState, obs: Observable) -> float:
    """Same double sum for ``|psi><psi|``, with ``|rho_ij| = |c_i| |c_j|`` built row block by row block."""
    if psi.dimension > MAX_DENSE_PURE_DIM:
        raise TooLarge(f"dense pure-state oracle limited to dimension {MAX_DENSE_PURE_DIM}")
    if psi.dimension != obs.dimension:
        raise DimensionMismatch(f"state dimension {psi.dimension} != observable dimension {obs.dimension}")
    c = psi.to_dense()
    a = obs.eigenvalues
    dim = c.size
    num = 0.0
    den = 0.0
    for start in range(0, dim, _ROW_BLOCK):
        block = np.abs(np.outer(c[start:start + _ROW_BLOCK], c.conj()))
        dist = np.abs(a[start:start + _ROW_BLOCK, None] - a[None, :])
        num += float(np.sum(dist * block))
        den += float(np.sum(block))
    return num / den


def dense_measure_batch(rhos: np.ndarray, eigenvalues) -> np.ndarray:
    """Vectorized double sum for a stack of matrices of shape ``(k, d, d)``."""
    a = np.asarray(eigenvalues, dtype=float)
    mags = np.abs(np.asarray(rhos))
    dist = np.abs(a[:, None] - a[None, :])
    return np.einsum("kij,ij->k", mags, dist) / mags.sum(axis=(1, 2))


def random_density(dim: int, seed) -> np.ndarray:
    """Hilbert-Schmidt random density matrix ``G G^dagger / tr`` from a complex Gaussian ``G``."""
    return random_density_batch(dim, 1, seed)[0]


def random_density_batch(dim: int, count: int, seed) -> np.ndarray:
    if dim < 1:
        raise ValueError("dim must be positive")
    rng = _rng(seed)
    g = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
    rho = g @ np.conj(np.swapaxes(g, 1, 2))
    rho = 0.5 * (rho + np.conj(np.swapaxes(rho, 1, 2)))
    tr = np.einsum("kii->k", rho).real
    return rho / tr[:, None, None]


def random_pure_vectors(dim: int, count: int, seed) -> np.ndarray:
    if dim < 1:
        raise ValueError("dim must be positive")
    rng = _rng(seed)
    v = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_pure(dim: int, seed) -> PureState:
    """Normalized complex Gaussian vector."""
    return PureState.from_dense(random_pure_vectors(dim, 1, seed)[0])


def random_spectrum(dim: int, seed, non_degenerate: bool = True, min_gap: float = 1e-3) -> Observable:
    """Sorted uniform eigenvalues on ``[-1, 1]``.

    With ``non_degenerate`` the draws are taken on a shortened interval and
    spread by ``k * min_gap`` so consecutive gaps are at least ``min_gap``.
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    rng = _rng(seed)
    if not non_degenerate:
        return Observable(np.sort(rng.uniform(-1.0, 1.0, dim)), f"random({dim})")
    room = 2.0 - (dim - 1) * min_gap
    if room <= 0:
        raise ValueError(f"cannot fit {dim} eigenvalues with gap {min_gap} in [-1, 1]")
    values = np.sort(rng.uniform(-1.0, -1.0 + room, dim)) + min_gap * np.arange(dim)
    return Observable(values, f"random({dim})")
