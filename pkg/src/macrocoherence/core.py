"""Shared domain types: observables, pure states, sparse density matrices.

States are always expressed in the eigenbasis of the observable they are
measured against, so an observable is nothing more than a list of real
eigenvalues indexed by basis position.  Spin registers of more than a few
dozen qubits are supported through *lazy* observables whose eigenvalue is
computed from the basis index on demand; nothing of size ``2**n`` is ever
allocated unless a dense view is explicitly requested.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NonHermitian,
    NonNormalized,
    NotPositiveSemidefinite,
    TooLarge,
)

SPARSITY_FLOOR = 1e-12
NORM_TOL = 1e-10
MERGE_RTOL = 1e-9
MERGE_ATOL = 1e-12
PSD_CHECK_MAX_DIM = 64
PSD_TOL = 1e-9
# Largest dimension for which a dense eigenvalue array / state vector is built.
MAX_EXPLICIT_DIM = 2 ** 24


def merge_close(values, weights, rtol=MERGE_RTOL, atol=MERGE_ATOL):
    """Coalesce nearly equal real values, summing their weights.

    Values are sorted and a new class is opened whenever a value is further than
    ``max(rtol * |x|, atol)`` from the first member of the current class.  The
    first (smallest) member is the class representative, which keeps the result
    independent of input order.

    ``weights`` may be a 1-D array or a 2-D array with one column per weight
    series.  Returns ``(representatives, summed_weights)``.
    """
    values = np.asarray(values, dtype=float).ravel()
    weights = np.asarray(weights, dtype=float)
    squeeze = weights.ndim == 1
    if squeeze:
        weights = weights[:, None]
    if values.size == 0:
        return values, (weights[:, 0] if squeeze else weights)
    # exact duplicates first, so the Python loop only sees distinct values
    uniq, inverse = np.unique(values, return_inverse=True)
    summed = np.zeros((uniq.size, weights.shape[1]))
    for k in range(weights.shape[1]):
        summed[:, k] = np.bincount(inverse.ravel(), weights=weights[:, k], minlength=uniq.size)

    reps = [uniq[0]]
    groups = [0]
    for x in uniq[1:]:
        start = reps[-1]
        if x - start <= max(rtol * max(abs(start), abs(x)), atol):
            groups.append(len(reps) - 1)
        else:
            reps.append(x)
            groups.append(len(reps) - 1)
    groups = np.asarray(groups)
    out = np.zeros((len(reps), weights.shape[1]))
    np.add.at(out, groups, summed)
    reps = np.asarray(reps)
    return reps, (out[:, 0] if squeeze else out)


@dataclass(frozen=True)
class BasisLabel:
    index: int
    tag: Optional[str] = None

    def __post_init__(self):
        if self.index < 0:
            raise IndexOutOfRange(f"basis index must be nonnegative, got {self.index}")


class Observable:
    """A diagonal observable given by its eigenvalues in its own eigenbasis.

    Parameters
    ----------
    eigenvalues : array_like of float
        One finite real eigenvalue per basis index.  Degeneracies are allowed.
    name : str
        Human readable name.
    tags : sequence of str, optional
        Unique labels for the basis states, e.g. bitstrings.

    Use :meth:`from_function` for spaces too large to enumerate.
    """

    __slots__ = ("name", "dimension", "_values", "_fn", "_tags", "_tag_fn", "_extremes")

    def __init__(self, eigenvalues, name: str = "", tags: Optional[Sequence[str]] = None):
        values = np.array(eigenvalues, dtype=float).ravel()
        if values.size < 1:
            raise ValueError("an observable needs at least one eigenvalue")
        if not np.all(np.isfinite(values)):
            raise ValueError("eigenvalues must be finite")
        values.flags.writeable = False
        if tags is not None:
            tags = tuple(tags)
            if len(tags) != values.size:
                raise DimensionMismatch("one tag per eigenvalue is required")
            if len(set(tags)) != len(tags):
                raise ValueError("basis tags must be unique")
        self._init(name, int(values.size), values, None, tags, None, None)

    def _init(self, name, dimension, values, fn, tags, tag_fn, extremes):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "dimension", dimension)
        object.__setattr__(self, "_values", values)
        object.__setattr__(self, "_fn", fn)
        object.__setattr__(self, "_tags", tags)
        object.__setattr__(self, "_tag_fn", tag_fn)
        object.__setattr__(self, "_extremes", extremes)

    def __setattr__(self, key, value):
        raise AttributeError("Observable is immutable")

    @classmethod
    def from_function(
        cls,
        dimension: int,
        eigenvalue: Callable[[int], float],
        name: str = "",
        *,
        extremes: tuple[int, int],
        tag: Optional[Callable[[int], str]] = None,
    ) -> "Observable":
        """Lazy observable whose eigenvalue at index ``i`` is ``eigenvalue(i)``.

        ``extremes`` gives ``(argmin, argmax)`` with the lowest index chosen on ties.
        """
        if dimension < 1:
            raise ValueError("dimension must be positive")
        obj = cls.__new__(cls)
        obj._init(name, int(dimension), None, eigenvalue, None, tag, tuple(int(i) for i in extremes))
        return obj

    @property
    def is_lazy(self) -> bool:
        return self._values is None

    def _check_index(self, i):
        if not 0 <= i < self.dimension:
            raise IndexOutOfRange(f"index {i} outside [0, {self.dimension})")

    def eigenvalue(self, i: int) -> float:
        i = int(i)
        self._check_index(i)
        if self._values is not None:
            return float(self._values[i])
        value = float(self._fn(i))
        if not math.isfinite(value):
            raise ValueError(f"non-finite eigenvalue at index {i}")
        return value

    def values_at(self, indices: Iterable[int]) -> np.ndarray:
        """Eigenvalues at the given basis indices."""
        if self._values is not None:
            idx = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices, dtype=np.int64)
            if idx.size and (idx.min() < 0 or idx.max() >= self.dimension):
                bad = idx[(idx < 0) | (idx >= self.dimension)][0]
                raise IndexOutOfRange(f"index {bad} outside [0, {self.dimension})")
            return self._values[idx]
        return np.fromiter((self.eigenvalue(i) for i in indices), dtype=float)

    @property
    def eigenvalues(self) -> np.ndarray:
        """The full eigenvalue array (materialized for lazy observables)."""
        if self._values is not None:
            return self._values
        if self.dimension > MAX_EXPLICIT_DIM:
            raise TooLarge(f"refusing to materialize {self.dimension} eigenvalues")
        values = self.values_at(range(self.dimension))
        values.flags.writeable = False
        return values

    def extremes(self) -> tuple[int, int]:
        """``(index of minimum, index of maximum)``, lowest index on ties."""
        if self._extremes is not None:
            return self._extremes
        return int(np.argmin(self._values)), int(np.argmax(self._values))

    def bounds(self) -> tuple[float, float]:
        lo, hi = self.extremes()
        return self.eigenvalue(lo), self.eigenvalue(hi)

    def span(self) -> float:
        lo, hi = self.bounds()
        return hi - lo

    def tag(self, i: int) -> Optional[str]:
        self._check_index(int(i))
        if self._tags is not None:
            return self._tags[i]
        if self._tag_fn is not None:
            return self._tag_fn(int(i))
        return None

    def label(self, i: int) -> BasisLabel:
        return BasisLabel(int(i), self.tag(i))

    def __len__(self):
        return self.dimension

    def __repr__(self):
        kind = "lazy" if self.is_lazy else "explicit"
        return f"Observable(name={self.name!r}, dimension={self.dimension}, {kind})"


@dataclass(frozen=True)
class PureState:
    """Sparse state vector ``sum_i c_i |i>``.

    Entries with magnitude at or below the sparsity floor are dropped.  The norm
    must already be one; use :meth:`from_amplitudes` with ``normalize=True`` to
    rescale.
    """

    amplitudes: Mapping[int, complex]
    dimension: int

    def __post_init__(self):
        dim = int(self.dimension)
        if dim < 1:
            raise ValueError("dimension must be positive")
        kept = {}
        for i, c in sorted(self.amplitudes.items()):
            i = int(i)
            if not 0 <= i < dim:
                raise IndexOutOfRange(f"amplitude index {i} outside [0, {dim})")
            c = complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError(f"non-finite amplitude at index {i}")
            if abs(c) > SPARSITY_FLOOR:
                kept[i] = c
        object.__setattr__(self, "dimension", dim)
        object.__setattr__(self, "amplitudes", MappingProxyType(kept))
        object.__setattr__(self, "_indices", tuple(kept))
        coeffs = np.fromiter(kept.values(), dtype=complex, count=len(kept))
        coeffs.flags.writeable = False
        object.__setattr__(self, "_coefficients", coeffs)
        norm2 = float(np.sum(np.abs(coeffs) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NonNormalized(f"squared norm is {norm2!r}, expected 1")

    @classmethod
    def from_amplitudes(cls, amplitudes: Mapping[int, complex], dimension: int,
                        normalize: bool = False) -> "PureState":
        if normalize:
            norm = math.sqrt(sum(abs(complex(c)) ** 2 for c in amplitudes.values()))
            if norm == 0.0:
                raise NonNormalized("cannot normalize the zero vector")
            amplitudes = {i: complex(c) / norm for i, c in amplitudes.items()}
        return cls(amplitudes, dimension)

    @classmethod
    def from_dense(cls, vector, normalize: bool = False) -> "PureState":
        vector = np.asarray(vector, dtype=complex).ravel()
        if normalize:
            norm = np.linalg.norm(vector)
            if norm == 0.0:
                raise NonNormalized("cannot normalize the zero vector")
            vector = vector / norm
        nz = np.flatnonzero(np.abs(vector) > SPARSITY_FLOOR)
        return cls({int(i): vector[i] for i in nz}, vector.size)

    @property
    def indices(self) -> tuple:
        """Support of the state, ascending."""
        return self._indices

    @property
    def coefficients(self) -> np.ndarray:
        """Amplitudes aligned with :attr:`indices`."""
        return self._coefficients

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self._coefficients) ** 2))

    def to_dense(self) -> np.ndarray:
        if self.dimension > MAX_EXPLICIT_DIM:
            raise TooLarge(f"dimension {self.dimension} too large for a dense vector")
        out = np.zeros(self.dimension, dtype=complex)
        out[list(self._indices)] = self._coefficients
        return out

    def __len__(self):
        return len(self._indices)


class DensityMatrix:
    """Sparse Hermitian unit-trace matrix stored as its upper triangle.

    Parameters
    ----------
    entries : mapping (i, j) -> complex with i <= j
        Upper-triangle entries; the lower triangle is implied by Hermiticity.
    dimension : int
    check_psd : bool, optional
        Verify positivity with a dense eigensolve.  Defaults to ``True`` when
        ``dimension <= 64``.
    """

    __slots__ = ("dimension", "rows", "cols", "values")

    def __init__(self, entries: Mapping[tuple, complex], dimension: int, check_psd: Optional[bool] = None):
        rows, cols, vals = [], [], []
        for (i, j), v in entries.items():
            i, j = int(i), int(j)
            if i > j:
                raise ValueError(f"entry ({i}, {j}) is below the diagonal; give the upper triangle only")
            rows.append(i)
            cols.append(j)
            vals.append(complex(v))
        self._setup(np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64),
                    np.array(vals, dtype=complex), dimension, check_psd)

    def __setattr__(self, key, value):
        raise AttributeError("DensityMatrix is immutable")

    def _setup(self, rows, cols, vals, dimension, check_psd, floor=SPARSITY_FLOOR):
        dim = int(dimension)
        if dim < 1:
            raise ValueError("dimension must be positive")
        if dim >= 2 ** 63:
            raise TooLarge("density matrices are limited to int64 indices")
        if rows.size:
            if rows.min() < 0 or cols.max() >= dim:
                raise IndexOutOfRange(f"entry index outside [0, {dim})")
            if np.any(rows > cols):
                raise ValueError("entries must satisfy i <= j")
        if not np.all(np.isfinite(vals)):
            raise ValueError("non-finite density matrix entry")
        keep = np.abs(vals) > floor
        rows, cols, vals = rows[keep], cols[keep], vals[keep]
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        if rows.size > 1:
            dup = (np.diff(rows) == 0) & (np.diff(cols) == 0)
            if np.any(dup):
                raise ValueError("duplicate density matrix entries")
        diag = rows == cols
        if np.any(np.abs(vals[diag].imag) > NORM_TOL):
            raise NonHermitian("diagonal entries must be real")
        vals = vals.copy()
        vals[diag] = vals[diag].real
        trace = float(np.sum(vals[diag].real))
        if abs(trace - 1.0) > NORM_TOL:
            raise NonNormalized(f"trace is {trace!r}, expected 1")
        for arr in (rows, cols, vals):
            arr.flags.writeable = False
        object.__setattr__(self, "dimension", dim)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "values", vals)
        if check_psd is None:
            check_psd = dim <= PSD_CHECK_MAX_DIM
        if check_psd:
            lowest = np.linalg.eigvalsh(self.to_dense())[0]
            if lowest < -PSD_TOL:
                raise NotPositiveSemidefinite(f"smallest eigenvalue {lowest!r} is negative")

    @classmethod
    def from_arrays(cls, rows, cols, values, dimension, check_psd=None) -> "DensityMatrix":
        obj = cls.__new__(cls)
        obj._setup(np.asarray(rows, dtype=np.int64).ravel(), np.asarray(cols, dtype=np.int64).ravel(),
                   np.asarray(values, dtype=complex).ravel(), dimension, check_psd)
        return obj

    @classmethod
    def from_dense(cls, matrix, check_psd=None) -> "DensityMatrix":
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {matrix.shape}")
        if not np.allclose(matrix, matrix.conj().T, rtol=0.0, atol=NORM_TOL):
            raise NonHermitian("matrix is not Hermitian")
        r, c = np.triu_indices(matrix.shape[0])
        return cls.from_arrays(r, c, matrix[r, c], matrix.shape[0], check_psd)

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        """Outer product ``|psi><psi|`` restricted to the support of ``psi``.

        The amplitudes were already floored, so every product of them is kept:
        flooring the products again would drop up to ``len(psi)**2`` small
        entries and shift the measure well beyond rounding.
        """
        idx = np.asarray(psi.indices, dtype=np.int64)
        c = psi.coefficients
        a, b = np.triu_indices(idx.size)
        obj = cls.__new__(cls)
        obj._setup(idx[a], idx[b], c[a] * np.conj(c[b]), psi.dimension, False, floor=0.0)
        return obj

    @classmethod
    def diagonal(cls, probabilities) -> "DensityMatrix":
        p = np.asarray(probabilities, dtype=float).ravel()
        if np.any(p < -PSD_TOL):
            raise NotPositiveSemidefinite("diagonal probabilities must be nonnegative")
        idx = np.arange(p.size)
        return cls.from_arrays(idx, idx, p, p.size, check_psd=False)

    @property
    def entries(self) -> Mapping[tuple, complex]:
        return MappingProxyType({(int(i), int(j)): complex(v) for i, j, v in zip(self.rows, self.cols, self.values)})

    def trace(self) -> float:
        return float(np.sum(self.values[self.rows == self.cols].real))

    def to_dense(self) -> np.ndarray:
        if self.dimension > MAX_EXPLICIT_DIM ** 0.5:
            raise TooLarge(f"dimension {self.dimension} too large for a dense matrix")
        out = np.zeros((self.dimension, self.dimension), dtype=complex)
        out[self.rows, self.cols] = self.values
        off = self.rows != self.cols
        out[self.cols[off], self.rows[off]] = np.conj(self.values[off])
        return out

    def __repr__(self):
        return f"DensityMatrix(dimension={self.dimension}, stored={self.values.size})"


State = Union[PureState, DensityMatrix]


@dataclass(frozen=True)
class SpectralWeights:
    """Per-eigenvalue aggregation of a pure state's amplitude magnitudes.

    ``weights[k]`` is the sum of ``|c_i|`` over the basis states in class ``k``
    and ``masses[k]`` the sum of ``|c_i|**2``.
    """

    values: np.ndarray
    weights: np.ndarray
    masses: np.ndarray

    @property
    def classes(self) -> dict:
        return {float(v): float(w) for v, w in zip(self.values, self.weights)}

    def __len__(self):
        return self.values.size


def validate_pair(state: State, obs: Observable) -> None:
    """Check that ``state`` can be measured against ``obs``.

    Raises :class:`DimensionMismatch`, :class:`NonNormalized` or
    :class:`NonHermitian`.
    """
    if state.dimension != obs.dimension:
        raise DimensionMismatch(f"state dimension {state.dimension} != observable dimension {obs.dimension}")
    if isinstance(state, PureState):
        norm2 = state.norm_squared()
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NonNormalized(f"squared norm is {norm2!r}")
    elif isinstance(state, DensityMatrix):
        diag = state.rows == state.cols
        if np.any(np.abs(state.values[diag].imag) > NORM_TOL):
            raise NonHermitian("diagonal entries must be real")
        if abs(state.trace() - 1.0) > NORM_TOL:
            raise NonNormalized(f"trace is {state.trace()!r}")
    else:
        raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def group_by_eigenvalue(state: PureState, obs: Observable) -> SpectralWeights:
    """Aggregate ``|c_i|`` and ``|c_i|**2`` over classes of equal eigenvalue."""
    validate_pair(state, obs)
    values = obs.values_at(state.indices)
    mags = np.abs(state.coefficients)
    reps, sums = merge_close(values, np.column_stack([mags, mags ** 2]))
    keep = sums[:, 0] > 0
    return SpectralWeights(reps[keep], sums[keep, 0], sums[keep, 1])
