"""Bulk SP generation, counting, and the successor index realizing N(x).

The sieve is k-major: primes p <= limit/4 are sieved once, then for each
k from 2 up to sqrt(limit/2) every product p * k**2 within range is marked.
Uniqueness of the prime-times-square decomposition means each SP number is
marked exactly once. The output range is processed in fixed-size segments
(default 2**20 numbers) so builds stay cache-friendly and can run on
several threads with disjoint writes.

Memory cost: the in-memory flag array spends one byte per number in
[0, limit] (numpy bool), plus one 8-byte prefix count per 4096 numbers and
8 bytes per SP for the sorted index. The cache file stores one bit per
number. A 10**8 build therefore needs roughly 130 MB resident and 12.5 MB
on disk.
"""

from __future__ import annotations

import math
import os
import struct
import zlib
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import (
    CacheChecksumError,
    CacheMagicError,
    CacheTruncatedError,
    CacheVersionError,
    CapacityError,
    DomainError,
)

DEFAULT_SEGMENT_SIZE = 1 << 20
COUNT_BLOCK = 4096  # numbers per prefix-count block
DEFAULT_MEMORY_BUDGET = 4 << 30

CACHE_MAGIC = b"SPLQ"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sIQ")
_CRC = struct.Struct("<I")


def _prime_sieve(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (ordinary sieve of Eratosthenes)."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def _estimate_build_bytes(limit: int) -> int:
    flags = limit + 1
    pmax = max(limit // 4, 2)
    primes = int(1.3 * pmax / math.log(pmax)) * 8
    prefix = (limit // COUNT_BLOCK + 2) * 8
    return flags + primes + prefix + (1 << 20)


class SpSieve:
    """Flags over [0, limit] with bit i set iff i is SP, plus prefix counts."""

    __slots__ = ("limit", "flags", "_prefix")

    def __init__(self, limit: int, flags: np.ndarray):
        self.limit = limit
        self.flags = flags
        self._prefix = self._build_prefix(flags)

    @staticmethod
    def _build_prefix(flags: np.ndarray) -> np.ndarray:
        full = len(flags) // COUNT_BLOCK
        prefix = np.zeros(full + 2, dtype=np.int64)
        if full:
            body = flags[: full * COUNT_BLOCK].reshape(full, COUNT_BLOCK)
            np.cumsum(body.sum(axis=1, dtype=np.int64), out=prefix[1 : full + 1])
        prefix[full + 1] = prefix[full] + int(flags[full * COUNT_BLOCK :].sum())
        return prefix

    def is_sp(self, n: int) -> bool:
        """Flag lookup; raises when n is outside the sieved range."""
        if n < 0:
            raise DomainError(f"need n >= 0, got {n}")
        if n > self.limit:
            raise CapacityError(
                f"n={n} exceeds sieve limit {self.limit}; rebuild with limit >= {n}",
                required=n,
            )
        return bool(self.flags[n])

    def sp_count(self, n: int) -> int:
        """Number of SP numbers <= n (inclusive), O(1) amortized.

        The inclusive convention is deliberate and documented: counts at a
        checkpoint include the checkpoint itself when it is SP.
        """
        if n < 0:
            raise DomainError(f"need n >= 0, got {n}")
        if n > self.limit:
            raise CapacityError(
                f"n={n} exceeds sieve limit {self.limit}; rebuild with limit >= {n}",
                required=n,
            )
        block = (n + 1) // COUNT_BLOCK
        tail = int(self.flags[block * COUNT_BLOCK : n + 1].sum())
        return int(self._prefix[block]) + tail

    # -- cache -----------------------------------------------------------

    def save(self, path) -> None:
        """Write the cache file (see module docstring for the layout)."""
        payload = np.packbits(self.flags, bitorder="little").tobytes()
        blob = (
            _HEADER.pack(CACHE_MAGIC, CACHE_VERSION, self.limit)
            + payload
            + _CRC.pack(zlib.crc32(payload) & 0xFFFFFFFF)
        )
        tmp = f"{path}.tmp.{os.getpid()}"
        with open(tmp, "wb") as fh:
            fh.write(blob)
        os.replace(tmp, path)

    @classmethod
    def load(cls, path) -> "SpSieve":
        """Read a cache file, rejecting malformed input with distinct errors."""
        with open(path, "rb") as fh:
            data = fh.read()
        if len(data) >= 4 and data[:4] != CACHE_MAGIC:
            raise CacheMagicError(f"bad magic {data[:4]!r}, expected {CACHE_MAGIC!r}")
        if len(data) < _HEADER.size:
            raise CacheTruncatedError(
                f"file is {len(data)} bytes, shorter than the {_HEADER.size}-byte header"
            )
        _, version, limit = _HEADER.unpack_from(data)
        if version != CACHE_VERSION:
            raise CacheVersionError(f"unsupported cache version {version}")
        payload_len = (limit + 8) // 8  # ceil((limit + 1) / 8)
        expected = _HEADER.size + payload_len + _CRC.size
        if len(data) != expected:
            raise CacheTruncatedError(
                f"file is {len(data)} bytes, header promises {expected}"
            )
        payload = data[_HEADER.size : _HEADER.size + payload_len]
        (crc,) = _CRC.unpack_from(data, expected - _CRC.size)
        if zlib.crc32(payload) & 0xFFFFFFFF != crc:
            raise CacheChecksumError("payload CRC-32 mismatch")
        bits = np.unpackbits(
            np.frombuffer(payload, dtype=np.uint8), count=limit + 1, bitorder="little"
        )
        return cls(limit, bits.astype(bool))


def save_cache(sieve: SpSieve, destination) -> None:
    sieve.save(destination)


def load_cache(source) -> SpSieve:
    return SpSieve.load(source)


def _mark_segment(flags: np.ndarray, primes: np.ndarray, lo: int, hi: int) -> None:
    """Mark every SP in [lo, hi): products p * k**2 with lo <= p*k**2 < hi."""
    k = 2
    while 2 * k * k < hi:
        kk = k * k
        i0 = np.searchsorted(primes, -(-lo // kk)) if lo else 0
        i1 = np.searchsorted(primes, (hi - 1) // kk, side="right")
        if i0 < i1:
            flags[primes[i0:i1] * kk] = True
        k += 1


def build_sieve(
    limit: int,
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> SpSieve:
    """Sieve all SP numbers in [0, limit].

    Marking is idempotent and, by uniqueness of the decomposition, each SP
    is in fact hit exactly once across the whole (k, p) double loop.
    """
    if limit < 1:
        raise DomainError(f"need limit >= 1, got {limit}")
    if segment_size < 1:
        raise DomainError(f"need segment_size >= 1, got {segment_size}")
    need = _estimate_build_bytes(limit)
    if need > memory_budget:
        raise CapacityError(
            f"limit {limit} needs about {need} bytes, over the {memory_budget}-byte budget"
        )
    primes = _prime_sieve(limit // 4)
    flags = np.zeros(limit + 1, dtype=bool)
    bounds = list(range(0, limit + 1, segment_size)) + [limit + 1]
    segments = [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if lo < hi]
    if threads > 1 and len(segments) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda seg: _mark_segment(flags, primes, *seg), segments))
    else:
        for lo, hi in segments:
            _mark_segment(flags, primes, lo, hi)
    return SpSieve(limit, flags)


class QIndex:
    """Sorted members of Q (1 followed by every SP <= limit) with order queries."""

    __slots__ = ("limit", "elements")

    def __init__(self, limit: int, elements: np.ndarray):
        self.limit = limit
        self.elements = elements

    @classmethod
    def from_sieve(cls, sieve: SpSieve) -> "QIndex":
        elements = np.concatenate(
            (np.ones(1, dtype=np.int64), np.flatnonzero(sieve.flags).astype(np.int64))
        )
        return cls(sieve.limit, elements)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def max_element(self) -> int:
        return int(self.elements[-1])

    def contains(self, x: int) -> bool:
        """Membership in Q, restricted to the indexed range."""
        if x < 1 or x > self.limit:
            return False
        i = int(np.searchsorted(self.elements, x))
        return i < len(self.elements) and int(self.elements[i]) == x

    def successor(self, x: int) -> int:
        """N(x): the smallest element of Q strictly greater than x."""
        if x < 0:
            raise DomainError(f"need x >= 0, got {x}")
        if x >= self.max_element:
            raise CapacityError(
                f"successor({x}) is beyond the largest indexed element "
                f"{self.max_element}; rebuild with a larger limit",
                required=2 * x,
            )
        i = int(np.searchsorted(self.elements, x, side="right"))
        return int(self.elements[i])

    def successor_many(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized successor over a non-negative int array."""
        if xs.size and int(xs.min()) < 0:
            raise DomainError("successor_many needs non-negative inputs")
        if xs.size and int(xs.max()) >= self.max_element:
            raise CapacityError(
                f"successor of {int(xs.max())} is beyond the largest indexed "
                f"element {self.max_element}",
                required=2 * int(xs.max()),
            )
        return self.elements[np.searchsorted(self.elements, xs, side="right")]

    def predecessor(self, x: int) -> int:
        """The largest element of Q strictly below x (x >= 2)."""
        if x <= 1:
            raise DomainError(f"no Q element below {x}")
        if x > self.limit + 1:
            raise CapacityError(
                f"predecessor({x}) is not covered by limit {self.limit}",
                required=x,
            )
        i = int(np.searchsorted(self.elements, x, side="left"))
        return int(self.elements[i - 1])

    def nth_sp(self, r: int) -> int:
        """The r-th SP number, r >= 1 (the identity 1 is not counted)."""
        if r < 1:
            raise DomainError(f"need r >= 1, got {r}")
        if r >= len(self.elements):
            raise CapacityError(
                f"index holds only {len(self.elements) - 1} SP numbers, "
                f"asked for number {r}"
            )
        return int(self.elements[r])
