"""Quadrature observables on a truncated Fock space.

``X_theta = (a e^{-i theta} + a^dagger e^{i theta}) / 2`` is tridiagonal in the
Fock basis.  Conjugating with ``G = diag(e^{i n theta})`` removes the phases,
leaving the real symmetric matrix with zero diagonal and off-diagonal
``sqrt(n + 1) / 2``; that matrix is diagonalized with implicit-shift QL and the
gauge is put back on the eigenvectors.

With this normalization a coherent state ``|alpha>`` is a packet centred at
``|alpha|`` along ``theta = arg(alpha)`` with vacuum variance ``1/4``, so the
two packets of a cat state sit ``2 |alpha|`` apart.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import DensityMatrix, Observable, PureState
from .errors import CutoffTooSmall, NoConvergence
from .measure import SPIN_HALF_UNIT, BinSpec, MeasureReport, bin_observable, measure_m, measure_m_pure
from .states import coherent_cutoff, mixed_scs_fock, scs

DEFAULT_BINS = BinSpec(0.1, 0.0)
MAX_BIN_WIDTH = 0.25


@dataclass(frozen=True)
class SymmetricTridiagonal:
    """Real symmetric tridiagonal matrix, optionally dressed by diagonal phases.

    The represented matrix is ``G T G^dagger`` with ``T`` built from
    ``diagonal``/``off_diagonal`` and ``G = diag(phases)``.
    """

    diagonal: np.ndarray
    off_diagonal: np.ndarray
    phases: Optional[np.ndarray] = None

    def __post_init__(self):
        d = np.asarray(self.diagonal, dtype=float)
        e = np.asarray(self.off_diagonal, dtype=float)
        if e.size != max(d.size - 1, 0):
            raise ValueError("off_diagonal must have one entry fewer than diagonal")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("tridiagonal entries must be finite")
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "off_diagonal", e)
        if self.phases is not None:
            object.__setattr__(self, "phases", np.asarray(self.phases, dtype=complex))

    @property
    def dimension(self) -> int:
        return self.diagonal.size

    def real_part(self) -> np.ndarray:
        return np.diag(self.diagonal) + np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)

    def to_dense(self) -> np.ndarray:
        t = self.real_part()
        if self.phases is None:
            return t
        return self.phases[:, None] * t * np.conj(self.phases)[None, :]


@dataclass(frozen=True)
class TridiagonalSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def residual(self, matrix) -> float:
        """Largest ``||X v - lambda v||`` over eigenpairs."""
        x = matrix.to_dense() if isinstance(matrix, SymmetricTridiagonal) else np.asarray(matrix)
        v = self.eigenvectors
        return float(np.max(np.linalg.norm(x @ v - v * self.eigenvalues[None, :], axis=0)))

    def orthonormality_error(self) -> float:
        v = self.eigenvectors
        return float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))))


def quadrature_matrix(theta: float, cutoff: int) -> SymmetricTridiagonal:
    """``X_theta`` on Fock levels ``0..cutoff-1`` (``cutoff`` levels in total)."""
    if int(cutoff) != cutoff or cutoff < 2:
        raise CutoffTooSmall(f"quadrature needs at least 2 levels, got {cutoff!r}")
    n = np.arange(int(cutoff))
    phases = None if theta == 0 else np.exp(1j * theta * n)
    return SymmetricTridiagonal(np.zeros(n.size), 0.5 * np.sqrt(n[1:]), phases)


def _tql_implicit(d, e, z, max_sweeps=None):
    """In-place QL with implicit Wilkinson-type shifts on a symmetric tridiagonal.

    ``d`` is the diagonal, ``e`` the subdiagonal padded with a trailing zero, and
    ``z`` holds the eigenvector rows (rotations are applied to rows ``i, i+1``).
    At most ``max_sweeps`` (default ``30 * n``) implicit QL sweeps are run.
    """
    n = d.size
    budget = 30 * n if max_sweeps is None else max_sweeps
    spent = 0
    eps = np.finfo(float).eps
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd or abs(e[m]) < np.finfo(float).tiny:
                    break
                m += 1
            if m == l:
                break
            spent += 1
            if spent > budget:
                raise NoConvergence(f"no convergence after {budget} QL sweeps")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi = z[i].copy()
                z[i] = c * zi - s * z[i + 1]
                z[i + 1] = s * zi + c * z[i + 1]
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


def eigendecompose(tri: SymmetricTridiagonal) -> TridiagonalSpectrum:
    """Full eigendecomposition, eigenvalues ascending.

    Eigenvectors are columns, signed so that their largest component (of the
    real, ungauged matrix) is positive, then multiplied by the phases.
    Raises :class:`NoConvergence` after ``30 * dim`` QL sweeps.
    """
    d = tri.diagonal.copy()
    e = np.append(tri.off_diagonal, 0.0)
    n = d.size
    z = np.eye(n)
    if n > 1:
        _tql_implicit(d, e, z)
    order = np.argsort(d, kind="stable")
    values = d[order]
    vecs = z[order].T.copy()
    peak = vecs[np.argmax(np.abs(vecs), axis=0), np.arange(n)]
    vecs *= np.where(peak < 0, -1.0, 1.0)[None, :]
    if tri.phases is not None:
        vecs = tri.phases[:, None] * vecs
    return TridiagonalSpectrum(values, vecs)


def quadrature_angle(alpha: complex) -> float:
    """Angle with ``tan(theta) = Im(alpha) / Re(alpha)``, on the branch where ``<X_theta> = |alpha|``."""
    alpha = complex(alpha)
    return math.atan2(alpha.imag, alpha.real)


def quadrature_spectrum(alpha: complex, cutoff: int) -> TridiagonalSpectrum:
    """Eigenbasis of ``X_theta`` on Fock levels ``0..cutoff``."""
    return eigendecompose(quadrature_matrix(quadrature_angle(alpha), cutoff + 1))


def _check_bins(bins):
    if bins.width > MAX_BIN_WIDTH:
        raise ValueError(f"bin width {bins.width} exceeds {MAX_BIN_WIDTH}")


def pure_to_quadrature(psi: PureState, spectrum: TridiagonalSpectrum, bins: BinSpec = DEFAULT_BINS):
    """Re-express a Fock-basis pure state in the quadrature eigenbasis.

    Returns ``(state, binned_observable)``.
    """
    coeffs = spectrum.eigenvectors.conj().T @ psi.to_dense()
    state = PureState.from_dense(coeffs, normalize=True)
    obs = bin_observable(Observable(spectrum.eigenvalues, "X_theta"), bins)
    return state, obs


def density_to_quadrature(rho: DensityMatrix, spectrum: TridiagonalSpectrum, bins: BinSpec = DEFAULT_BINS):
    v = spectrum.eigenvectors
    dense = v.conj().T @ rho.to_dense() @ v
    dense = 0.5 * (dense + dense.conj().T)
    state = DensityMatrix.from_dense(dense / np.trace(dense).real, check_psd=False)
    obs = bin_observable(Observable(spectrum.eigenvalues, "X_theta"), bins)
    return state, obs


def scs_full_report(alpha: complex, cutoff: Optional[int] = None, bins: BinSpec = DEFAULT_BINS,
                    unit_mmqs_value: float = SPIN_HALF_UNIT) -> MeasureReport:
    _check_bins(bins)
    cutoff = coherent_cutoff(alpha) if cutoff is None else int(cutoff)
    spectrum = quadrature_spectrum(alpha, cutoff)
    state, obs = pure_to_quadrature(scs(alpha, cutoff), spectrum, bins)
    return measure_m_pure(state, obs, unit_mmqs_value)


def scs_full_measure(alpha: complex, cutoff: Optional[int] = None, bins: BinSpec = DEFAULT_BINS) -> float:
    """Measure of the truncated cat state in the binned ``X_theta`` eigenbasis.

    Tends to ``|alpha|`` from above; the finite width of each packet adds a
    contribution of order one.
    """
    return scs_full_report(alpha, cutoff, bins).m


def mixed_scs_full_report(alpha: complex, cutoff: Optional[int] = None, bins: BinSpec = DEFAULT_BINS,
                          unit_mmqs_value: float = SPIN_HALF_UNIT) -> MeasureReport:
    _check_bins(bins)
    cutoff = coherent_cutoff(alpha) if cutoff is None else int(cutoff)
    spectrum = quadrature_spectrum(alpha, cutoff)
    state, obs = density_to_quadrature(mixed_scs_fock(alpha, cutoff), spectrum, bins)
    return measure_m(state, obs, unit_mmqs_value)


def mixed_scs_full_measure(alpha: complex, cutoff: Optional[int] = None, bins: BinSpec = DEFAULT_BINS) -> float:
    """Measure of the two-packet mixture; only the spread inside each packet survives."""
    return mixed_scs_full_report(alpha, cutoff, bins).m
