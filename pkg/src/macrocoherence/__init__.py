"""Macroscopic coherence of quantum states relative to a measured observable.

The measure averages the eigenvalue distance ``|a_i - a_j|`` over all density
matrix elements in the observable's eigenbasis, weighted by ``|rho_ij|``.
"""
from .core import BasisLabel, DensityMatrix, Observable, PureState, SpectralWeights, group_by_eigenvalue
from .errors import (
    AllZeroWeights,
    CounterexampleFound,
    CutoffTooSmall,
    DimensionMismatch,
    FlatSpectrum,
    IndexOutOfRange,
    NoConvergence,
    NonHermitian,
    NonNormalized,
    NonPositiveUnit,
    NotPositiveSemidefinite,
    OutOfRange,
    TooLarge,
)
from .measure import (
    SPIN_HALF_UNIT,
    BinSpec,
    DistanceDistribution,
    MeasureReport,
    bin_observable,
    distance,
    distance_distribution,
    effective_size,
    l1_coherence,
    mean_of_distribution,
    measure,
    measure_m,
    measure_m_pure,
)
from .mmqs import construct_mmqs, maximize_measure, pure_objective, verify_theorem

__version__ = "0.1.0"
