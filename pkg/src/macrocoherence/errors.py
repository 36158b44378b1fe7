"""Exception types raised across the package."""


class DimensionMismatch(ValueError):
    pass


class NonNormalized(ValueError):
    pass


class NonHermitian(ValueError):
    pass


class NotPositiveSemidefinite(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


class NonPositiveUnit(ValueError):
    pass


class TooLarge(ValueError):
    """Requested object would exceed the supported size for an explicit construction."""


class CutoffTooSmall(ValueError):
    pass


class OutOfRange(ValueError):
    pass


class FlatSpectrum(ValueError):
    """The observable has a single distinct eigenvalue, so no extremal superposition exists."""


class AllZeroWeights(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass


class CounterexampleFound(AssertionError):
    """A sampled state exceeded the proven upper bound on the measure.

    This indicates a bug in the evaluation code, not in the bound.
    """
