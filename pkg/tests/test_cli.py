from __future__ import annotations

import contextlib
import io
import json
import os

import pytest

from sploop import load_cache
from sploop.cli import dispatch

FIRST_25 = [8, 12, 18, 20, 27, 28, 32, 44, 45, 48, 50, 52, 63, 68,
            72, 75, 76, 80, 92, 98, 99, 108, 112, 116, 117]


def run(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = dispatch(list(argv))
    return code, out.getvalue(), err.getvalue()


def run_json(*argv: str) -> tuple[int, dict]:
    code, out, _ = run(*argv)
    return code, json.loads(out)


class TestQueries:
    def test_list_count(self):
        code, payload = run_json("list", "--count", "25", "--limit", "200")
        assert code == 0
        assert payload["sp"] == FIRST_25

    def test_list_max(self):
        code, payload = run_json("list", "--max", "20", "--limit", "100")
        assert code == 0
        assert payload["sp"] == [8, 12, 18, 20]

    def test_list_too_many(self):
        code, _, err = run("list", "--count", "100", "--limit", "117")
        assert code == 3
        assert "capacity" in err

    def test_op(self):
        code, payload = run_json("op", "164", "188", "--limit", "1000")
        assert code == 0
        assert payload["result"] == 27

    def test_op_non_member(self):
        code, _, err = run("op", "7", "8", "--limit", "1000")
        assert code == 2
        assert "not" in err

    def test_succ_pred_nth_count(self):
        assert run_json("succ", "24", "--limit", "1000")[1]["successor"] == 27
        assert run_json("pred", "13", "--limit", "1000")[1]["predecessor"] == 12
        assert run_json("nth", "25", "--limit", "1000")[1]["sp"] == 117
        assert run_json("count", "117", "--limit", "1000")[1]["sp_count"] == 25

    def test_succ_capacity(self):
        code, _, err = run("succ", "999", "--limit", "1000")
        assert code == 3
        assert "--limit" in err

    def test_global_flag_position_is_flexible(self):
        before = run("--limit", "1000", "op", "212", "236")
        after = run("op", "212", "236", "--limit", "1000")
        assert before == after

    def test_table(self):
        code, payload = run_json("table", "--rank", "2", "--limit", "1000")
        assert code == 0
        assert payload["entries"] == [[1, 8, 12], [8, 1, 8], [12, 8, 1]]

    def test_nonassoc(self):
        code, payload = run_json("nonassoc", "--rank", "3", "--limit", "1000")
        assert code == 0
        assert payload["witness"] == [8, 8, 12]
        assert payload["left"] != payload["right"]

    def test_fixed_point(self):
        code, payload = run_json("fixed-point", "8", "--limit", "1000")
        assert code == 0
        assert payload["fixed_point"] == 44

    def test_fixed_point_capacity(self):
        code, _, err = run("fixed-point", "117", "--limit", "1000")
        assert code == 3

    def test_gap_run(self):
        code, payload = run_json("gap-run", "8", "--limit", "1000")
        assert code == 0
        assert (payload["start"], payload["length"]) == (33, 11)

    def test_pairs(self):
        code, payload = run_json("pairs", "--gap", "1", "--max", "117",
                                 "--limit", "1000")
        assert code == 0
        assert payload["pairs"] == [[27, 28], [44, 45], [75, 76],
                                    [98, 99], [116, 117]]

    def test_census(self):
        code, payload = run_json("census", "--max", "117", "--limit", "1000")
        assert code == 0
        assert payload["counts"]["8"] == 7
        assert payload["digit1_count"] == 0
        assert payload["sp_count"] == 25

    def test_zeta(self):
        code, payload = run_json("zeta", "--a", "1.0")
        assert code == 0
        assert payload["value"] == pytest.approx(1.6449340668482264, abs=1e-10)
        assert payload["abs_error_bound"] <= 1e-10

    def test_zeta_domain(self):
        assert run("zeta", "--a", "-1")[0] == 2

    def test_density_json(self):
        code, payload = run_json("density", "--checkpoints", "100,1000",
                                 "--limit", "10000")
        assert code == 0
        assert [r["n"] for r in payload["rows"]] == [100, 1000]
        assert payload["rows"][0]["sp_count"] == 21

    def test_density_csv_column_order(self):
        code, out, _ = run("density", "--checkpoints", "100", "--limit",
                           "10000", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,sp_count,ratio,target,abs_error"
        assert lines[1].startswith("100,21,")

    def test_plain_format(self):
        code, out, _ = run("op", "164", "188", "--limit", "1000",
                           "--format", "plain")
        assert code == 0
        assert out.strip() == "27"


class TestFindings:
    def test_triples_found_is_exit_1(self):
        code, payload = run_json("triples", "--rank", "7", "--limit", "1000")
        assert code == 1
        assert payload["triple"] == [27, 28, 32]
        assert payload["product"] == 8

    def test_triples_absent_is_exit_0(self):
        code, payload = run_json("triples", "--rank", "6", "--limit", "1000")
        assert code == 0
        assert payload["triple"] is None

    def test_triples_budget(self):
        assert run("triples", "--rank", "2001", "--limit", "1000")[0] == 3

    def test_bertrand_small_failures_are_expected(self):
        code, payload = run_json("bertrand", "--from", "1", "--to", "100",
                                 "--limit", "1000")
        assert code == 0
        assert payload["failures"] == [1, 2, 3, 4]
        assert payload["failures_from_5"] == []

    def test_ap_verify_good_chain(self):
        code, payload = run_json("ap", "verify", "164,188,212,236",
                                 "--limit", "1000")
        assert code == 0
        assert payload["chain_value"] == 27
        assert payload["successor_of_difference"] == 27
        assert payload["verified"] is True

    def test_ap_verify_non_sp_term_is_exit_1(self):
        code, _, err = run("ap", "verify", "164,188,213", "--limit", "1000")
        assert code == 1
        assert "falsifying" in err

    def test_ap_verify_non_progression_is_exit_1(self):
        code, _, err = run("ap", "verify", "8,27,45", "--limit", "1000")
        assert code == 1
        assert "falsifying" in err

    def test_ap_find(self):
        code, payload = run_json("ap", "find", "--length", "4", "--bound",
                                 "100", "--square", "2")
        assert code == 0
        assert payload["primes"] == [5, 11, 17, 23]
        assert payload["terms"] == [20, 44, 68, 92]
        assert payload["common_difference"] == 24

    def test_ap_find_not_found(self):
        assert run("ap", "find", "--length", "4", "--bound", "20")[0] == 3


class TestUsage:
    def test_unknown_command(self):
        assert run("frobnicate")[0] == 2

    def test_missing_command(self):
        assert run()[0] == 2

    def test_limit_floor(self):
        code, _, err = run("--limit", "5", "list")
        assert code == 2
        assert "at least 8" in err

    def test_threads_floor(self):
        assert run("list", "--count", "1", "--threads", "0")[0] == 2

    def test_help_exits_zero(self):
        assert run("--help")[0] == 0

    def test_bad_checkpoint_list(self):
        assert run("density", "--checkpoints", "10,zap", "--limit", "100")[0] == 2


class TestDeterminismAndCache:
    def test_idempotent_output(self):
        first = run("list", "--max", "117", "--limit", "117")
        second = run("list", "--max", "117", "--limit", "117")
        assert first == second

    def test_cache_written_then_used(self, tmp_path):
        cache = str(tmp_path / "q.spq")
        fresh = run("count", "117", "--limit", "100000")
        primed = run("count", "117", "--limit", "100000", "--cache", cache)
        assert os.path.exists(cache)
        reused = run("count", "117", "--limit", "100000", "--cache", cache)
        assert fresh == primed == reused

    def test_cache_trimmed_for_smaller_limit(self, tmp_path):
        cache = str(tmp_path / "q.spq")
        run("build", "--limit", "100000", "--cache", cache)
        small_cached = run("list", "--max", "117", "--limit", "50000",
                           "--cache", cache)
        small_fresh = run("list", "--max", "117", "--limit", "50000")
        assert small_cached == small_fresh
        assert load_cache(cache).limit == 100000  # trim does not rewrite

    def test_stale_cache_is_rebuilt(self, tmp_path):
        cache = str(tmp_path / "q.spq")
        run("build", "--limit", "1000", "--cache", cache)
        code, payload = run_json("count", "50000", "--limit", "50000",
                                 "--cache", cache)
        assert code == 0
        assert load_cache(cache).limit == 50000

    def test_corrupt_cache_is_a_usage_error(self, tmp_path):
        cache = tmp_path / "q.spq"
        cache.write_bytes(b"not a cache at all")
        code, _, err = run("count", "117", "--limit", "1000",
                           "--cache", str(cache))
        assert code == 2

    def test_build_out(self, tmp_path):
        out_path = str(tmp_path / "built.spq")
        code, payload = run_json("build", "--limit", "117", "--out", out_path)
        assert code == 0
        assert payload["sp_count"] == 25
        assert payload["max_sp"] == 117
        assert load_cache(out_path).limit == 117

    def test_threads_do_not_change_output(self):
        single = run("bertrand", "--from", "1", "--to", "1000",
                     "--limit", "10000")
        multi = run("bertrand", "--from", "1", "--to", "1000",
                    "--limit", "10000", "--threads", "4")
        assert single == multi


class TestVerifySuites:
    def test_axioms(self):
        code, payload = run_json("verify", "--suite", "axioms",
                                 "--limit", "10000", "--rank", "100")
        assert code == 0
        names = [c["name"] for c in payload["suites"][0]["checks"]]
        assert names == ["closure", "commutativity", "identity",
                         "self_inverse", "bound"]

    def test_lemma1(self):
        code, payload = run_json("verify", "--suite", "lemma1",
                                 "--limit", "100000", "--n-max", "12")
        assert code == 0
        assert len(payload["suites"][0]["checks"]) == 12

    def test_lemma2_and_theorem2(self):
        for suite in ("lemma2", "theorem2"):
            code, payload = run_json("verify", "--suite", suite,
                                     "--limit", "10000")
            assert code == 0, suite
            assert payload["ok"] is True

    def test_lemma3(self):
        code, payload = run_json("verify", "--suite", "lemma3",
                                 "--limit", "100000", "--to", "10000")
        assert code == 0

    def test_lemma4(self):
        code, payload = run_json("verify", "--suite", "lemma4",
                                 "--limit", "100000", "--t-max", "10000")
        assert code == 0

    def test_theorem1(self):
        code, payload = run_json("verify", "--suite", "theorem1",
                                 "--limit", "1000000", "--q-max", "50")
        assert code == 0

    def test_theorem3_reports_the_counterexample(self):
        code, payload = run_json("verify", "--suite", "theorem3",
                                 "--limit", "10000", "--rank", "10")
        assert code == 1
        check = payload["suites"][0]["checks"][0]
        assert check["ok"] is False
        assert "(27, 28, 32)" in check["detail"]

    def test_theorem4(self):
        code, payload = run_json("verify", "--suite", "theorem4",
                                 "--limit", "10000", "--max", "1000")
        assert code == 0

    def test_plain_output_lists_checks(self):
        code, out, _ = run("verify", "--suite", "axioms", "--limit", "10000",
                           "--rank", "20", "--format", "plain")
        assert code == 0
        assert "[ok] axioms.closure" in out
