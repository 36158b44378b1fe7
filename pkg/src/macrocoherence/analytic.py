"""Exact combinatorics for the uniform product state ``|+>^{(x) n}``.

Under total magnetization (one unit per flipped spin) a basis pair ``(i, j)``
has distance ``|popcount(i) - popcount(j)|`` and every density matrix entry of
the uniform state equals ``2**-n``.  Counting ordered pairs per distance gives
the distribution and the measure exactly, in ``O(n**2)`` big-integer work.
By the Vandermonde identity the count sums to ``n C(2n, n) / 4**n``, which
grows like ``sqrt(n / pi)``.

Two printed formulas are reproduced verbatim for comparison only:
:func:`uniform_measure_closed` and :func:`uniform_measure_asymptotic`.  Neither
agrees with the direct count for ``n >= 2``.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .errors import OutOfRange
from .measure import DistanceDistribution


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return int(n)


def binomial_overlap(n: int, d: int) -> int:
    """``sum_m C(n, m) C(n, m + d)``."""
    return sum(math.comb(n, m) * math.comb(n, m + d) for m in range(n - d + 1))


def uniform_pair_count(n: int, d: int) -> int:
    """Number of ordered basis pairs of ``n`` spins whose magnetizations differ by ``d``.

    For ``d > 0`` pairs with either sign of the difference are counted, hence the
    factor two; the ``d = 0`` class is counted once.  The counts over
    ``d = 0..n`` add up to ``4**n``.
    """
    n = _check_n(n)
    if int(d) != d or not 0 <= d <= n:
        raise OutOfRange(f"distance must be an integer in [0, {n}], got {d!r}")
    d = int(d)
    count = binomial_overlap(n, d)
    return count if d == 0 else 2 * count


def uniform_distribution_exact(n: int) -> list[tuple[int, Fraction]]:
    """``[(d, P(d))]`` with ``P(d) = N_d / 4**n`` as exact fractions."""
    n = _check_n(n)
    total = 4 ** n
    return [(d, Fraction(uniform_pair_count(n, d), total)) for d in range(n + 1)]


def uniform_distribution(n: int) -> DistanceDistribution:
    return DistanceDistribution(tuple((float(d), float(p)) for d, p in uniform_distribution_exact(n)))


def uniform_measure_sum(n: int) -> Fraction:
    """Exact measure of the uniform state, ``sum_d d N_d / 4**n``."""
    n = _check_n(n)
    return Fraction(sum(d * uniform_pair_count(n, d) for d in range(1, n + 1)), 4 ** n)


def uniform_measure_closed(n: int) -> float:
    """Printed closed form ``(n+1)! (2n+1)! / (n! (n+2)! 2**(2n))``.

    Returns ``inf`` once the value leaves the double range.
    """
    n = _check_n(n)
    value = Fraction(math.factorial(n + 1) * math.factorial(2 * n + 1),
                     math.factorial(n) * math.factorial(n + 2) * 4 ** n)
    try:
        return float(value)
    except OverflowError:
        return math.inf


def uniform_measure_asymptotic(n: int) -> float:
    """Printed large-``n`` form ``exp(n ln((n + 1/2)**2 / ((n - 1)(n + 2))))``.

    The expression has a pole at ``n = 1``, where ``nan`` is returned.
    """
    n = _check_n(n)
    if n == 1:
        return math.nan
    return math.exp(n * math.log((n + 0.5) ** 2 / ((n - 1) * (n + 2))))
