"""Constructions and exhaustive verifiers for the structural claims about Q.

Everything here is a desk-scale check, not a proof: runs of non-SP
numbers, SP pairs at a fixed gap, arithmetic progressions of SP numbers
built from prime progressions, the constant-chain property of those
progressions, the search for equal-product triples, the doubling
property (an SP strictly between n and 2n), successor adjacency, and the
twin-shift adjacency property. Scans either return the first
counterexample or report absence over the whole range.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import spcore
from .errors import (
    CapacityError,
    ChainBrokenError,
    DomainError,
    NotFoundError,
    SearchBudgetError,
    ValidationError,
)
from .loop_algebra import lop
from .sieve import QIndex

TRIPLE_RANK_BUDGET = 2000
_SCAN_CHUNK = 1 << 20


@dataclass(frozen=True)
class GapRun:
    """Maximal block of consecutive naturals containing no SP number."""

    start: int
    length: int


@dataclass(frozen=True)
class SpPair:
    """Consecutive SP numbers lo < hi with no SP strictly between."""

    lo: int
    hi: int
    gap: int


@dataclass(frozen=True)
class SpAp:
    """Arithmetic progression of SP numbers.

    chain_value, once verified, is the common value of every consecutive
    pair under the loop operation: N(common_difference).
    """

    terms: tuple[int, ...]
    common_difference: int
    chain_value: int | None = None


def find_gap_run(index: QIndex, n: int) -> GapRun:
    """First maximal SP-free run of length at least n, with its full length."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    sps = index.elements[1:]
    if sps.size == 0:
        raise CapacityError(f"no SP numbers below limit {index.limit}")
    first = int(sps[0])
    if n <= first - 1:
        return GapRun(start=1, length=first - 1)
    lengths = np.diff(sps) - 1
    hits = np.flatnonzero(lengths >= n)
    if hits.size == 0:
        raise CapacityError(
            f"no SP-free run of length {n} below limit {index.limit}; "
            f"rebuild with a larger limit",
            required=2 * index.limit,
        )
    j = int(hits[0])
    return GapRun(start=int(sps[j]) + 1, length=int(lengths[j]))


def gap_pairs(index: QIndex, g: int, limit: int) -> list[SpPair]:
    """All consecutive SP pairs with hi - lo = g and hi <= limit, ascending."""
    if g < 1:
        raise DomainError(f"need gap g >= 1, got {g}")
    if limit > index.limit:
        raise CapacityError(
            f"limit {limit} exceeds the index limit {index.limit}", required=limit
        )
    sps = index.elements[1:]
    if sps.size < 2:
        return []
    diffs = np.diff(sps)
    mask = (diffs == g) & (sps[1:] <= limit)
    return [
        SpPair(lo=int(sps[j]), hi=int(sps[j + 1]), gap=g)
        for j in np.flatnonzero(mask)
    ]


def _primorial_below(n: int) -> int:
    out = 1
    for p in range(2, n):
        if spcore.is_prime(p):
            out *= p
    return out


def find_prime_ap(n: int, search_bound: int) -> tuple[int, ...]:
    """Prime arithmetic progression of length n with the smallest last term.

    Last terms are enumerated over primes in increasing order; for each,
    differences are tried in increasing order, so ties on the last term
    resolve to the smallest difference. When the first term exceeds n the
    difference must be a multiple of the primorial of primes below n (a
    necessary condition: otherwise some small prime divides a term), which
    prunes the search without excluding any valid progression.
    """
    if n < 1:
        raise DomainError(f"need length n >= 1, got {n}")
    primorial = _primorial_below(n)
    for last in range(2, search_bound + 1):
        if not spcore.is_prime(last):
            continue
        if n == 1:
            return (last,)
        for d in range(1, (last - 2) // (n - 1) + 1):
            first = last - (n - 1) * d
            if first > n and d % primorial:
                continue
            terms = range(first, last + 1, d)
            if all(spcore.is_prime(t) for t in terms):
                return tuple(terms)
    raise NotFoundError(
        f"no prime progression of length {n} with last term <= {search_bound}; "
        f"raise the bound"
    )


def construct_sp_ap(prime_ap: list[int] | tuple[int, ...], r: int) -> SpAp:
    """Multiply a prime progression through by r**2, giving an SP progression."""
    if r < 2:
        raise DomainError(f"need square root r >= 2, got {r}")
    terms = tuple(prime_ap)
    if not terms:
        raise ValidationError("need at least one prime")
    for p in terms:
        if not spcore.is_prime(p):
            raise ValidationError(f"{p} is not prime")
    diffs = {b - a for a, b in zip(terms, terms[1:])}
    if len(diffs) > 1:
        raise ValidationError(f"terms {terms} are not an arithmetic progression")
    if diffs and min(diffs) <= 0:
        raise ValidationError(f"terms {terms} are not strictly increasing")
    rr = r * r
    sp_terms = tuple(p * rr for p in terms)
    for t in sp_terms:
        if not spcore.is_sp(t):
            raise ValidationError(f"constructed term {t} failed the SP check")
    d = diffs.pop() * rr if diffs else 0
    return SpAp(terms=sp_terms, common_difference=d, chain_value=None)


def sp_ap_from_terms(terms: list[int] | tuple[int, ...]) -> SpAp:
    """Validate raw terms as an SP arithmetic progression."""
    terms = tuple(terms)
    if len(terms) < 2:
        raise ValidationError("need at least two terms")
    for t in terms:
        if not spcore.is_sp(t):
            raise ValidationError(f"{t} is not an SP number")
    diffs = {b - a for a, b in zip(terms, terms[1:])}
    if len(diffs) > 1:
        raise ValidationError(f"terms {terms} are not an arithmetic progression")
    d = diffs.pop()
    if d <= 0:
        raise ValidationError(f"terms {terms} are not strictly increasing")
    return SpAp(terms=terms, common_difference=d, chain_value=None)


def verify_bullet_chain(index: QIndex, ap: SpAp) -> int:
    """Common value of t[i] • t[i+1] across the progression.

    Raises a chain-broken error carrying the first consecutive pair whose
    product differs from the first pair's. For a genuine SP progression
    every difference is the common difference, so the chain value is
    N(common_difference) and the error never fires.
    """
    terms = ap.terms
    if len(terms) < 2:
        raise DomainError("need at least two terms to evaluate the chain")
    if max(terms) > index.limit:
        raise CapacityError(
            f"term {max(terms)} exceeds the index limit {index.limit}",
            required=max(terms),
        )
    values = [lop(index, a, b) for a, b in zip(terms, terms[1:])]
    for i, v in enumerate(values[1:], start=1):
        if v != values[0]:
            raise ChainBrokenError(
                f"pair ({terms[i]}, {terms[i + 1]}) gives {v}, "
                f"first pair gave {values[0]}",
                position=i,
                pair=(terms[i], terms[i + 1]),
            )
    return values[0]


def search_equal_triple(index: QIndex, r: int) -> tuple[int, int, int] | None:
    """First distinct a < b < c in the rank-r prefix with
    a • b = b • c = a • c, or None when no such triple exists.

    The enumeration is cubic in r, so ranks above the budget are refused.
    Pairs (a, b) are scanned in lexicographic order; candidates c are kept
    only where b • c matches a • b, and a • c is checked on the survivors.
    """
    if r < 0:
        raise DomainError(f"need rank r >= 0, got {r}")
    if r > TRIPLE_RANK_BUDGET:
        raise SearchBudgetError(
            f"rank {r} exceeds the enumeration budget {TRIPLE_RANK_BUDGET}"
        )
    if r >= len(index.elements):
        raise CapacityError(
            f"rank {r} exceeds the {len(index.elements) - 1} indexed SP numbers"
        )
    m = index.elements[: r + 1]
    pair = index.successor_many(np.abs(m[:, None] - m[None, :]))
    s = len(m)
    for i in range(s - 2):
        for j in range(i + 1, s - 1):
            v = pair[i, j]
            hit = np.flatnonzero((pair[j, j + 1 :] == v) & (pair[i, j + 1 :] == v))
            if hit.size:
                k = j + 1 + int(hit[0])
                return int(m[i]), int(m[j]), int(m[k])
    return None


def _bertrand_chunk(index: QIndex, lo: int, hi: int) -> list[int]:
    ns = np.arange(lo, hi + 1, dtype=np.int64)
    idx = np.searchsorted(index.elements, ns, side="right")
    succ = index.elements[np.minimum(idx, len(index.elements) - 1)]
    bad = (idx >= len(index.elements)) | (succ >= 2 * ns)
    return [int(n) for n in ns[bad]]


def scan_bertrand(
    index: QIndex, lo: int, hi: int, *, threads: int = 1
) -> list[int]:
    """All n in [lo, hi] whose open interval (n, 2n) contains no SP number.

    The check is successor(n) < 2n. The interval is open on both ends, so
    n = 4 fails even though 8 = 2n is SP.
    """
    if lo < 1:
        raise DomainError(f"need lo >= 1, got {lo}")
    if hi < lo:
        raise DomainError(f"need hi >= lo, got [{lo}, {hi}]")
    if 2 * hi > index.limit:
        raise CapacityError(
            f"the interval ({hi}, {2 * hi}) is not covered by limit "
            f"{index.limit}; rebuild with limit >= {2 * hi}",
            required=2 * hi,
        )
    bounds = list(range(lo, hi + 1, _SCAN_CHUNK))
    chunks = [(a, min(a + _SCAN_CHUNK - 1, hi)) for a in bounds]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _bertrand_chunk(index, *c), chunks))
    else:
        parts = [_bertrand_chunk(index, a, b) for a, b in chunks]
    return sorted(n for part in parts for n in part)


def _adjacency_chunk(index: QIndex, lo: int, hi: int) -> int | None:
    ts = np.arange(lo, hi + 1, dtype=np.int64)
    i1 = np.searchsorted(index.elements, ts, side="right")
    i2 = np.searchsorted(index.elements, ts + 1, side="right")
    bad = np.flatnonzero(i2 - i1 > 1)
    return int(ts[bad[0]]) if bad.size else None


def check_adjacency(index: QIndex, t_max: int, *, threads: int = 1) -> int | None:
    """First t <= t_max where N(t) and N(t+1) are neither equal nor
    consecutive in Q, or None when every t passes.
    """
    if t_max < 0:
        raise DomainError(f"need t_max >= 0, got {t_max}")
    if t_max + 1 >= index.max_element:
        raise CapacityError(
            f"t_max {t_max} needs successor coverage past {t_max + 1}; "
            f"largest indexed element is {index.max_element}",
            required=2 * (t_max + 1),
        )
    bounds = list(range(0, t_max + 1, _SCAN_CHUNK))
    chunks = [(a, min(a + _SCAN_CHUNK - 1, t_max)) for a in bounds]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _adjacency_chunk(index, *c), chunks))
    else:
        parts = [_adjacency_chunk(index, a, b) for a, b in chunks]
    hits = [t for t in parts if t is not None]
    return min(hits) if hits else None


def check_twin_shift(
    index: QIndex, limit: int
) -> tuple[int, int, int] | None:
    """Probe every twin pair (a, a+1) with a+1 <= limit against every
    x in Q below a: the two products a • x and (a+1) • x must be equal or
    consecutive in Q. Returns the first violating (a, x, a • x) or None.
    """
    if limit > index.limit:
        raise CapacityError(
            f"limit {limit} exceeds the index limit {index.limit}", required=limit
        )
    elements = index.elements
    for twin in gap_pairs(index, 1, limit):
        a = twin.lo
        xs = elements[: int(np.searchsorted(elements, a))]
        ts = a - xs
        i1 = np.searchsorted(elements, ts, side="right")
        i2 = np.searchsorted(elements, ts + 1, side="right")
        bad = np.flatnonzero(i2 - i1 > 1)
        if bad.size:
            x = int(xs[bad[0]])
            return a, x, int(elements[i1[bad[0]]])
    return None
