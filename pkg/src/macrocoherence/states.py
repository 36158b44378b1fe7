"""Spin-register and photonic states with their natural observables.

Spin conventions
----------------
Basis index ``b`` of an ``n``-spin register is read as the bitstring
``format(b, f"0{n}b")``; the first spin is the most significant bit and a ``1``
bit is the spin state ``|1>``.  With the default :class:`SpinBasisConvention`
each ``|0>`` contributes ``+1/2`` and each ``|1>`` ``-1/2`` to the total
magnetization, so flipping one spin moves the eigenvalue by exactly one.

Fock conventions
----------------
Single-mode states are truncated to levels ``0..cutoff`` (dimension
``cutoff + 1``).  Two-mode states use index ``n1 * (cutoff + 1) + n2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .core import DensityMatrix, Observable, PureState
from .errors import CutoffTooSmall, TooLarge

MAX_UNIFORM_SPINS = 12
MAX_GGHZ_SPINS = 20
COHERENT_TAIL_TOL = 1e-10

_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class SpinBasisConvention:
    """Per-spin magnetization eigenvalues for ``|0>`` and ``|1>``."""

    up: float = 0.5
    down: float = -0.5

    def __post_init__(self):
        if self.up == self.down:
            raise ValueError("the two per-spin eigenvalues must differ")


def _check_spins(n):
    if int(n) != n or n < 1:
        raise ValueError(f"number of spins must be a positive integer, got {n!r}")
    return int(n)


def magnetization_z(n: int, conv: SpinBasisConvention = SpinBasisConvention()) -> Observable:
    """Total z magnetization of ``n`` spins, evaluated lazily from the bitstring.

    Any ``n`` is accepted: eigenvalues are computed per index, and only the
    support of a state is ever visited.
    """
    n = _check_spins(n)
    up, down = float(conv.up), float(conv.down)

    def eig(b):
        k = b.bit_count()
        return up * (n - k) + down * k

    top = 2 ** n - 1
    extremes = (0, top) if up < down else (top, 0)
    return Observable.from_function(2 ** n, eig, f"S_z({n})", extremes=extremes,
                                    tag=lambda b: format(b, f"0{n}b"))


def ghz(n: int) -> PureState:
    """``(|0...0> + |1...1>) / sqrt(2)``."""
    n = _check_spins(n)
    return PureState({0: _SQRT_HALF, 2 ** n - 1: _SQRT_HALF}, 2 ** n)


def single_excitation(n: int) -> PureState:
    """First spin in ``|+>``, the remaining ``n - 1`` spins in ``|0>``."""
    n = _check_spins(n)
    return PureState({0: _SQRT_HALF, 2 ** (n - 1): _SQRT_HALF}, 2 ** n)


def uniform(n: int) -> PureState:
    """``|+>^{(x) n}``: all ``2**n`` amplitudes equal to ``2**(-n/2)``."""
    n = _check_spins(n)
    if n > MAX_UNIFORM_SPINS:
        raise TooLarge(f"uniform state limited to {MAX_UNIFORM_SPINS} spins; use the analytic module")
    c = 2.0 ** (-n / 2)
    return PureState({b: c for b in range(2 ** n)}, 2 ** n)


def w_state(n: int) -> PureState:
    """Equal superposition of the ``n`` single-flip bitstrings, normalized by ``1/sqrt(n)``."""
    n = _check_spins(n)
    c = 1.0 / math.sqrt(n)
    return PureState({2 ** k: c for k in range(n)}, 2 ** n)


def generalized_ghz(n: int, eps: float) -> PureState:
    """``|0>^n + (cos(eps)|0> + sin(eps)|1>)^n``, normalized numerically.

    The second branch is expanded over all bitstrings: a string with ``k`` ones
    carries ``cos(eps)**(n-k) * sin(eps)**k``.
    """
    n = _check_spins(n)
    if n > MAX_GGHZ_SPINS:
        raise TooLarge(f"generalized GHZ limited to {MAX_GGHZ_SPINS} spins")
    c, s = math.cos(eps), math.sin(eps)
    by_weight = [c ** (n - k) * s ** k for k in range(n + 1)]
    amps = {}
    for b in range(2 ** n):
        a = by_weight[b.bit_count()]
        if b == 0:
            a += 1.0
        if a != 0.0:
            amps[b] = a
    return PureState.from_amplitudes(amps, 2 ** n, normalize=True)


def _check_cutoff(cutoff):
    if int(cutoff) != cutoff or cutoff < 0:
        raise CutoffTooSmall(f"cutoff must be a nonnegative integer, got {cutoff!r}")
    return int(cutoff)


def photon_number(cutoff: int) -> Observable:
    """Single-mode number operator on levels ``0..cutoff``."""
    cutoff = _check_cutoff(cutoff)
    return Observable(np.arange(cutoff + 1, dtype=float), "n", tags=[f"n={k}" for k in range(cutoff + 1)])


def _two_mode_tags(cutoff):
    return [f"({a},{b})" for a, b in product(range(cutoff + 1), repeat=2)]


def mode_photon_number(cutoff: int) -> Observable:
    """Photon number of the first mode on a two-mode space truncated at ``cutoff`` per mode."""
    cutoff = _check_cutoff(cutoff)
    n1 = np.repeat(np.arange(cutoff + 1, dtype=float), cutoff + 1)
    return Observable(n1, "n_1", tags=_two_mode_tags(cutoff))


def total_photon_number(cutoff: int) -> Observable:
    cutoff = _check_cutoff(cutoff)
    grid = np.arange(cutoff + 1, dtype=float)
    return Observable(np.add.outer(grid, grid).ravel(), "n_1 + n_2", tags=_two_mode_tags(cutoff))


def noon(n: int, cutoff: int | None = None) -> PureState:
    """``(|n,0> + |0,n>) / sqrt(2)`` on the two-mode space truncated at ``cutoff``.

    For ``n = 0`` both branches coincide and the state is the two-mode vacuum.
    """
    if int(n) != n or n < 0:
        raise ValueError(f"photon number must be a nonnegative integer, got {n!r}")
    n = int(n)
    cutoff = n if cutoff is None else _check_cutoff(cutoff)
    if n > cutoff:
        raise CutoffTooSmall(f"cutoff {cutoff} cannot hold {n} photons")
    side = cutoff + 1
    if n == 0:
        return PureState({0: 1.0}, side * side)
    return PureState({n * side: _SQRT_HALF, n: _SQRT_HALF}, side * side)


def coherent_cutoff(alpha: complex) -> int:
    """Default truncation for a coherent state of amplitude ``alpha``.

    Starts from ``max(20, ceil(|alpha|**2 + 8 |alpha|))`` and is raised until the
    discarded Poisson weight drops below ``1e-10`` (the starting value alone is
    not enough for ``2 <= |alpha| <= 3``).
    """
    r = abs(complex(alpha))
    cutoff = max(20, math.ceil(r * r + 8 * r))
    while r > 0 and poisson.sf(cutoff, r * r) >= COHERENT_TAIL_TOL:
        cutoff += 1
    return cutoff


def _coherent_vector(alpha: complex, cutoff: int) -> np.ndarray:
    alpha = complex(alpha)
    r = abs(alpha)
    k = np.arange(cutoff + 1)
    if r == 0.0:
        out = np.zeros(cutoff + 1, dtype=complex)
        out[0] = 1.0
        return out
    tail = poisson.sf(cutoff, r * r)
    if tail >= COHERENT_TAIL_TOL:
        raise CutoffTooSmall(f"cutoff {cutoff} leaves tail weight {tail:.3g} for |alpha|={r:g}")
    log_mag = -0.5 * r * r + k * math.log(r) - 0.5 * gammaln(k + 1)
    return np.exp(log_mag) * np.exp(1j * k * np.angle(alpha))


def coherent(alpha: complex, cutoff: int | None = None) -> PureState:
    """Truncated coherent state ``e^{-|a|^2/2} sum_n a^n / sqrt(n!) |n>``, renormalized.

    Raises :class:`CutoffTooSmall` when the discarded Poisson tail is ``>= 1e-10``.
    """
    cutoff = coherent_cutoff(alpha) if cutoff is None else _check_cutoff(cutoff)
    return PureState.from_dense(_coherent_vector(alpha, cutoff), normalize=True)


def scs(alpha: complex, cutoff: int | None = None) -> PureState:
    """Even cat state ``(|alpha> + |-alpha>) / z`` in the truncated Fock basis.

    ``z = sqrt(2 + 2 exp(-2 |alpha|^2))``; the residual truncation error is
    removed by a final renormalization.
    """
    alpha = complex(alpha)
    cutoff = coherent_cutoff(alpha) if cutoff is None else _check_cutoff(cutoff)
    z = math.sqrt(2.0 + 2.0 * math.exp(-2.0 * abs(alpha) ** 2))
    vec = (_coherent_vector(alpha, cutoff) + _coherent_vector(-alpha, cutoff)) / z
    return PureState.from_dense(vec, normalize=True)


def mixed_scs_fock(alpha: complex, cutoff: int | None = None) -> DensityMatrix:
    """``(|alpha><alpha| + |-alpha><-alpha|) / 2`` in the truncated Fock basis."""
    alpha = complex(alpha)
    cutoff = coherent_cutoff(alpha) if cutoff is None else _check_cutoff(cutoff)
    plus = _coherent_vector(alpha, cutoff)
    minus = _coherent_vector(-alpha, cutoff)
    rho = np.outer(plus, plus.conj()) + np.outer(minus, minus.conj())
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix.from_dense(rho / np.trace(rho).real, check_psd=False)


def idealized_quadrature(alpha: complex) -> Observable:
    """Two-point quadrature spectrum ``{+|alpha|, -|alpha|}`` seen by well separated packets."""
    r = abs(complex(alpha))
    return Observable([r, -r], "X_theta (two-level)", tags=["+alpha", "-alpha"])


def scs_idealized(alpha: complex) -> PureState:
    """Large-``|alpha|`` cat state as an equal superposition of the two packet states.

    Pair with :func:`idealized_quadrature`.
    """
    return PureState({0: _SQRT_HALF, 1: _SQRT_HALF}, 2)


def mixed_scs(alpha: complex) -> DensityMatrix:
    """Large-``|alpha|`` mixture of the two packets: ``diag(1/2, 1/2)``.

    Pair with :func:`idealized_quadrature`.
    """
    return DensityMatrix.diagonal([0.5, 0.5])


def thermal(beta: float, cutoff: int) -> DensityMatrix:
    """Thermal photon state ``sum_n e^{-beta n} |n><n| / Z`` with ``Z`` summed up to ``cutoff``."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    cutoff = _check_cutoff(cutoff)
    weights = np.exp(-beta * np.arange(cutoff + 1))
    return DensityMatrix.diagonal(weights / weights.sum())
