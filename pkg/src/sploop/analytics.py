"""Distribution studies: density against (zeta(2)-1) * n/ln n, final-digit
census with the digit-1 constant, gap statistics, and the certified
Hurwitz zeta evaluations behind the digit-1 constant.

All logarithms are natural logarithms. The density comparison is a trend
check: the ratio sp_count(n) * ln(n) / n drifts toward zeta(2) - 1 but the
second-order term keeps the constant itself out of reach at desk scale,
so only the shrinking of the absolute error across decades is asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError
from .sieve import QIndex, SpSieve

DENSITY_TARGET = math.pi * math.pi / 6 - 1

_ZETA_TOL = 1e-10
_ROUNDING_MARGIN = 2e-13


@dataclass(frozen=True)
class HurwitzEval:
    """One certified evaluation of zeta(2, a) = sum of (m + a)^-2, m >= 0."""

    a: float
    value: float
    abs_error_bound: float
    terms: int


def hurwitz_zeta2(a: float) -> HurwitzEval:
    """zeta(2, a) by direct summation plus an Euler-Maclaurin tail.

    The first M terms are summed exactly (math.fsum); the tail from M on
    is 1/(M+a) + 1/(2(M+a)^2) + 1/(6(M+a)^3) - 1/(30(M+a)^5) with
    truncation error below (M+a)^-7 / 42. M grows until that bound plus a
    rounding margin sits safely under 1e-10.
    """
    if not 0 < a <= 2:
        raise DomainError(f"need 0 < a <= 2, got {a}")
    m = 16
    while (m + a) ** -7 / 42 > _ZETA_TOL / 100:
        m *= 2
    head = math.fsum((i + a) ** -2 for i in range(m))
    x = m + a
    tail = 1 / x + 1 / (2 * x * x) + 1 / (6 * x**3) - 1 / (30 * x**5)
    bound = x**-7 / 42 + _ROUNDING_MARGIN
    return HurwitzEval(a=a, value=head + tail, abs_error_bound=bound, terms=m)


def digit1_constant() -> float:
    """(zeta(2,.1) + zeta(2,.9) + zeta(2,.3) + zeta(2,.7) - 4) / 400.

    The four offsets are the residues mod 10 whose squares end in 1; the
    constant scales n/ln n into the expected count of SP numbers with
    final digit 1.
    """
    parts = [hurwitz_zeta2(a).value for a in (0.1, 0.9, 0.3, 0.7)]
    return (math.fsum(parts) - 4) / 400


@dataclass(frozen=True)
class DensityRow:
    n: int
    sp_count: int
    ratio: float
    target: float
    abs_error: float


def density_table(sieve: SpSieve, checkpoints: list[int]) -> list[DensityRow]:
    """One row per checkpoint: ratio = sp_count(n) * ln(n) / n vs the target."""
    rows = []
    for n in checkpoints:
        if n < 3:
            raise DomainError(f"checkpoints must be >= 3, got {n}")
        if n > sieve.limit:
            raise CapacityError(
                f"checkpoint {n} exceeds the sieve limit {sieve.limit}", required=n
            )
        count = sieve.sp_count(n)
        ratio = count * math.log(n) / n
        rows.append(
            DensityRow(
                n=n,
                sp_count=count,
                ratio=ratio,
                target=DENSITY_TARGET,
                abs_error=abs(ratio - DENSITY_TARGET),
            )
        )
    return rows


@dataclass(frozen=True)
class DigitCensus:
    limit: int
    counts: dict[int, int]
    digit1_target: float


def digit_census(sieve: SpSieve, limit: int) -> DigitCensus:
    """Exact counts of SP numbers <= limit by final decimal digit.

    digit1_target is the modeled count digit1_constant() * limit / ln(limit),
    reported for side-by-side comparison; it is not a tolerance assertion.
    """
    if limit < 0:
        raise DomainError(f"need limit >= 0, got {limit}")
    if limit > sieve.limit:
        raise CapacityError(
            f"limit {limit} exceeds the sieve limit {sieve.limit}", required=limit
        )
    sps = np.flatnonzero(sieve.flags[: limit + 1])
    tally = np.bincount(sps % 10, minlength=10)
    target = digit1_constant() * limit / math.log(limit) if limit >= 2 else 0.0
    return DigitCensus(
        limit=limit,
        counts={d: int(tally[d]) for d in range(10)},
        digit1_target=target,
    )


def gap_histogram(index: QIndex, limit: int) -> dict[int, int]:
    """Counts of consecutive-SP gaps among SP numbers <= limit."""
    if limit < 0:
        raise DomainError(f"need limit >= 0, got {limit}")
    if limit > index.limit:
        raise CapacityError(
            f"limit {limit} exceeds the index limit {index.limit}", required=limit
        )
    sps = index.elements[1:]
    sps = sps[sps <= limit]
    if sps.size < 2:
        return {}
    gaps, counts = np.unique(np.diff(sps), return_counts=True)
    return {int(g): int(c) for g, c in zip(gaps, counts)}
