from __future__ import annotations

import os
import struct
import zlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sploop import (
    CacheChecksumError,
    CacheError,
    CacheMagicError,
    CacheTruncatedError,
    CacheVersionError,
    CapacityError,
    DomainError,
    QIndex,
    SpSieve,
    build_sieve,
    load_cache,
    save_cache,
)

from _oracles import sp_list_slow

FIRST_25 = [8, 12, 18, 20, 27, 28, 32, 44, 45, 48, 50, 52, 63, 68,
            72, 75, 76, 80, 92, 98, 99, 108, 112, 116, 117]


class TestBuild:
    def test_matches_slow_oracle(self):
        sieve = build_sieve(3000)
        assert np.flatnonzero(sieve.flags).tolist() == sp_list_slow(3000)

    def test_zero_and_one_are_clear(self, sieve_1e4):
        assert not sieve_1e4.flags[0]
        assert not sieve_1e4.flags[1]

    def test_segment_size_invariance(self):
        base = build_sieve(10**5)
        small = build_sieve(10**5, segment_size=999)
        assert np.array_equal(base.flags, small.flags)

    def test_thread_invariance(self):
        base = build_sieve(10**5)
        threaded = build_sieve(10**5, threads=4, segment_size=1 << 12)
        assert np.array_equal(base.flags, threaded.flags)

    def test_memory_budget(self):
        with pytest.raises(CapacityError):
            build_sieve(10**6, memory_budget=1000)

    def test_degenerate_limits(self):
        with pytest.raises(DomainError):
            build_sieve(0)
        tiny = build_sieve(7)
        assert not tiny.flags.any()

    @given(st.integers(min_value=8, max_value=4000))
    @settings(max_examples=30, deadline=None)
    def test_prefix_of_larger_build(self, limit):
        big = build_sieve(4000)
        small = build_sieve(limit)
        assert np.array_equal(small.flags, big.flags[: limit + 1])


class TestCounting:
    def test_known_counts(self, sieve_1e7):
        assert sieve_1e7.sp_count(100) == 21
        assert sieve_1e7.sp_count(117) == 25
        assert sieve_1e7.sp_count(2000) == 307
        assert sieve_1e7.sp_count(10**4) == 1230
        assert sieve_1e7.sp_count(10**5) == 9036
        assert sieve_1e7.sp_count(10**6) == 69179
        assert sieve_1e7.sp_count(10**7) == 553539

    def test_inclusive_boundary(self, sieve_1e4):
        assert sieve_1e4.sp_count(7) == 0
        assert sieve_1e4.sp_count(8) == 1
        assert sieve_1e4.sp_count(116) == 24
        assert sieve_1e4.sp_count(117) == 25

    def test_matches_cumulative_flags(self, sieve_1e4):
        running = np.cumsum(sieve_1e4.flags)
        for n in list(range(0, 200)) + [4095, 4096, 4097, 8191, 9999, 10**4]:
            assert sieve_1e4.sp_count(n) == int(running[n]), n

    def test_out_of_range(self, sieve_1e4):
        with pytest.raises(CapacityError):
            sieve_1e4.sp_count(10**4 + 1)
        with pytest.raises(DomainError):
            sieve_1e4.sp_count(-1)

    def test_is_sp_lookup(self, sieve_1e4):
        assert sieve_1e4.is_sp(8)
        assert not sieve_1e4.is_sp(7)
        with pytest.raises(CapacityError):
            sieve_1e4.is_sp(10**5)


class TestQIndex:
    def test_elements_start_with_identity(self, index_117):
        assert index_117.elements[0] == 1
        assert index_117.elements[1:].tolist() == FIRST_25

    def test_successor_known(self, index_1e4):
        assert index_1e4.successor(0) == 1
        assert index_1e4.successor(1) == 8
        assert index_1e4.successor(8) == 12
        assert index_1e4.successor(24) == 27
        assert index_1e4.successor(117) == 124

    def test_successor_errors(self, index_117):
        with pytest.raises(DomainError):
            index_117.successor(-1)
        with pytest.raises(CapacityError) as exc:
            index_117.successor(117)
        assert exc.value.required is not None

    def test_predecessor_known(self, index_1e4):
        assert index_1e4.predecessor(8) == 1
        assert index_1e4.predecessor(9) == 8
        assert index_1e4.predecessor(13) == 12
        assert index_1e4.predecessor(28) == 27

    def test_predecessor_errors(self, index_117):
        with pytest.raises(DomainError):
            index_117.predecessor(1)
        with pytest.raises(CapacityError):
            index_117.predecessor(500)

    def test_nth_sp_known(self, index_117):
        assert index_117.nth_sp(1) == 8
        assert index_117.nth_sp(5) == 27
        assert index_117.nth_sp(25) == 117
        with pytest.raises(DomainError):
            index_117.nth_sp(0)
        with pytest.raises(CapacityError):
            index_117.nth_sp(26)

    def test_contains(self, index_117):
        assert index_117.contains(1)
        assert index_117.contains(8)
        assert index_117.contains(117)
        assert not index_117.contains(7)
        assert not index_117.contains(0)
        assert not index_117.contains(118)

    def test_successor_of_predecessor_roundtrip(self, index_1e5):
        for q in index_1e5.elements[1:].tolist():
            assert index_1e5.successor(index_1e5.predecessor(q)) == q

    def test_successor_monotone(self, index_1e4):
        succs = index_1e4.successor_many(np.arange(0, 5000, dtype=np.int64))
        assert (np.diff(succs) >= 0).all()

    def test_successor_many_matches_scalar(self, index_1e4):
        xs = np.array([0, 1, 7, 8, 24, 116, 117, 4000], dtype=np.int64)
        assert index_1e4.successor_many(xs).tolist() == [
            index_1e4.successor(int(x)) for x in xs
        ]
        with pytest.raises(CapacityError):
            index_1e4.successor_many(np.array([10**4], dtype=np.int64))

    def test_rank_select_duality(self, sieve_1e4, index_1e4):
        for r in range(1, len(index_1e4.elements)):
            n = index_1e4.nth_sp(r)
            assert sieve_1e4.sp_count(n) == r
            assert sieve_1e4.sp_count(n - 1) == r - 1


class TestCache:
    def test_roundtrip(self, tmp_path):
        sieve = build_sieve(117)
        path = tmp_path / "q.spq"
        save_cache(sieve, path)
        back = load_cache(path)
        assert back.limit == 117
        assert int(back.flags.sum()) == 25
        assert np.array_equal(back.flags, sieve.flags)

    def test_file_layout(self, tmp_path):
        sieve = build_sieve(117)
        path = tmp_path / "q.spq"
        sieve.save(path)
        raw = path.read_bytes()
        payload_len = (117 + 8) // 8
        assert len(raw) == 16 + payload_len + 4
        assert raw[:4] == b"SPLQ"
        version, limit = struct.unpack_from("<IQ", raw, 4)
        assert version == 1
        assert limit == 117
        payload = raw[16:-4]
        (crc,) = struct.unpack("<I", raw[-4:])
        assert zlib.crc32(payload) & 0xFFFFFFFF == crc
        # bit j of byte i is number 8*i + j
        assert payload[1] & 1  # 8 is SP
        assert not payload[0]  # 0..7 are not

    def test_no_temp_file_left(self, tmp_path):
        sieve = build_sieve(117)
        sieve.save(tmp_path / "q.spq")
        assert sorted(p.name for p in tmp_path.iterdir()) == ["q.spq"]

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "q.spq"
        build_sieve(117).save(path)
        raw = path.read_bytes()
        path.write_bytes(b"NOPE" + raw[4:])
        with pytest.raises(CacheMagicError):
            load_cache(path)

    def test_bad_version(self, tmp_path):
        path = tmp_path / "q.spq"
        build_sieve(117).save(path)
        raw = path.read_bytes()
        path.write_bytes(raw[:4] + struct.pack("<I", 99) + raw[8:])
        with pytest.raises(CacheVersionError):
            load_cache(path)

    def test_truncated(self, tmp_path):
        path = tmp_path / "q.spq"
        build_sieve(117).save(path)
        raw = path.read_bytes()
        path.write_bytes(raw[:10])
        with pytest.raises(CacheTruncatedError):
            load_cache(path)
        path.write_bytes(raw[:-3])
        with pytest.raises(CacheTruncatedError):
            load_cache(path)

    def test_bad_checksum(self, tmp_path):
        path = tmp_path / "q.spq"
        build_sieve(117).save(path)
        raw = bytearray(path.read_bytes())
        raw[20] ^= 0xFF
        path.write_bytes(bytes(raw))
        with pytest.raises(CacheChecksumError):
            load_cache(path)

    def test_error_types_are_distinct_cache_errors(self):
        kinds = {CacheMagicError, CacheVersionError, CacheTruncatedError,
                 CacheChecksumError}
        assert len(kinds) == 4
        for kind in kinds:
            assert issubclass(kind, CacheError)

    @given(st.integers(min_value=8, max_value=3000))
    @settings(max_examples=20, deadline=None)
    def test_roundtrip_any_limit(self, tmp_path_factory, limit):
        sieve = build_sieve(limit)
        path = tmp_path_factory.mktemp("cache") / "q.spq"
        sieve.save(path)
        back = load_cache(path)
        assert back.limit == limit
        assert np.array_equal(back.flags, sieve.flags)

    def test_trimmed_view_matches_fresh_build(self):
        big = build_sieve(2000)
        trimmed = SpSieve(500, big.flags[:501])
        fresh = build_sieve(500)
        assert np.array_equal(trimmed.flags, fresh.flags)
        assert trimmed.sp_count(500) == fresh.sp_count(500)
