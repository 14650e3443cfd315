"""Command-line surface for the package.

Every operation is reachable as a subcommand. Results go to stdout in the
selected format (json by default, csv, or plain); diagnostics go to
stderr. Exit codes:

  0  success, or the checked claim held
  1  a counterexample or broken chain was found
  2  usage error (bad arguments, non-member operands, malformed cache)
  3  capacity exceeded (enlarge --limit or the relevant search bound)

The sieve bound is the global --limit flag (default 10**7). With --cache
the sieve is loaded from the given file when it exists and covers the
requested limit (trimmed down if larger), otherwise built and saved
there. Results with and without a cache are identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import analytics, theorems
from .errors import (
    CacheError,
    CapacityError,
    ChainBrokenError,
    DomainError,
    MembershipError,
    NotFoundError,
    SearchBudgetError,
    SploopError,
    ValidationError,
)
from .loop_algebra import cayley_table, find_nonassoc_witness, fixed_point, lop
from .sieve import QIndex, SpSieve, build_sieve, load_cache

DEFAULT_LIMIT = 10_000_000

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3


@dataclass
class CliConfig:
    limit: int
    cache: str | None
    format: str
    threads: int
    verbosity: int


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {exc}")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--limit", type=int, default=argparse.SUPPRESS,
                   help=f"sieve bound (default {DEFAULT_LIMIT})")
    g.add_argument("--cache", default=argparse.SUPPRESS, metavar="PATH",
                   help="sieve cache file: loaded when fresh, else built and saved")
    g.add_argument("--format", choices=("json", "csv", "plain"),
                   default=argparse.SUPPRESS, help="output format (default json)")
    g.add_argument("--threads", type=int, default=argparse.SUPPRESS, metavar="N",
                   help="worker threads for range scans and sieve builds")
    g.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS,
                   help="diagnostics on stderr; repeat for more")

    parser = argparse.ArgumentParser(
        prog="sploop",
        parents=[common],
        description="SP numbers and the loop they form: queries, searches, "
                    "and claim verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def cmd(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    p = cmd("build", "build the sieve (and optionally write a cache file)")
    p.add_argument("--out", metavar="PATH", help="write the sieve cache here")

    p = cmd("list", "list SP numbers")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--max", type=int, help="list SP numbers <= MAX")
    group.add_argument("--count", type=int, help="list the first COUNT SP numbers")

    p = cmd("count", "count SP numbers <= N")
    p.add_argument("n", type=int)

    p = cmd("succ", "smallest element of Q strictly greater than X")
    p.add_argument("x", type=int)

    p = cmd("pred", "largest element of Q strictly below X")
    p.add_argument("x", type=int)

    p = cmd("nth", "the R-th SP number")
    p.add_argument("r", type=int)

    p = cmd("op", "the loop operation A • B")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)

    p = cmd("table", "full operation table over the rank-R prefix of Q")
    p.add_argument("--rank", type=int, required=True)

    p = cmd("nonassoc", "smallest associativity failure in the rank-R prefix")
    p.add_argument("--rank", type=int, required=True)

    p = cmd("fixed-point", "smallest a in Q with a • q = a")
    p.add_argument("q", type=int)

    p = cmd("gap-run", "first run of at least N consecutive non-SP numbers")
    p.add_argument("n", type=int)

    p = cmd("pairs", "consecutive SP pairs at a fixed gap")
    p.add_argument("--gap", type=int, required=True)
    p.add_argument("--max", type=int, help="largest pair member (default --limit)")

    ap_parser = sub.add_parser("ap", parents=[common],
                               help="arithmetic progressions of SP numbers")
    ap_sub = ap_parser.add_subparsers(dest="ap_command", required=True,
                                      metavar="ACTION")
    p = ap_sub.add_parser("find", parents=[common],
                          help="find a prime progression, optionally scaled by a square")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--bound", type=int, required=True,
                   help="largest allowed last term of the prime progression")
    p.add_argument("--square", type=int, metavar="R",
                   help="also emit the SP progression with terms prime * R**2")
    p = ap_sub.add_parser("verify", parents=[common],
                          help="check terms form an SP progression with a constant chain")
    p.add_argument("terms", type=_int_list, metavar="T1,T2,...")

    p = cmd("triples", "search the rank-R prefix for an equal-product triple")
    p.add_argument("--rank", type=int, required=True)

    p = cmd("bertrand", "find n in [FROM, TO] with no SP strictly between n and 2n")
    p.add_argument("--from", dest="lo", type=int, required=True)
    p.add_argument("--to", dest="hi", type=int, required=True)

    p = cmd("census", "final-digit census of SP numbers <= MAX")
    p.add_argument("--max", type=int, required=True)

    p = cmd("density", "sp_count(n) * ln(n) / n against zeta(2) - 1")
    p.add_argument("--checkpoints", type=_int_list, required=True,
                   metavar="N1,N2,...")

    p = cmd("zeta", "certified Hurwitz zeta(2, a) evaluation")
    p.add_argument("--a", type=float, required=True)

    p = cmd("verify", "run a named verification suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    p.add_argument("--rank", type=int, help="prefix rank (axioms, theorem3)")
    p.add_argument("--n-max", type=int, help="largest run length (lemma1)")
    p.add_argument("--length", type=int, help="largest progression length (lemma2, theorem2)")
    p.add_argument("--bound", type=int, help="prime search bound (lemma2, theorem2)")
    p.add_argument("--square", type=int, help="square root for scaling (lemma2, theorem2)")
    p.add_argument("--from", dest="lo", type=int, help="scan start (lemma3)")
    p.add_argument("--to", dest="hi", type=int, help="scan end (lemma3)")
    p.add_argument("--t-max", type=int, help="largest t checked (lemma4)")
    p.add_argument("--q-max", type=int, help="largest q checked (theorem1)")
    p.add_argument("--max", type=int, help="largest twin member (theorem4)")

    return parser


# -- sieve acquisition ----------------------------------------------------


def _load_or_build(cfg: CliConfig) -> SpSieve:
    if cfg.cache and os.path.exists(cfg.cache):
        cached = load_cache(cfg.cache)
        if cached.limit >= cfg.limit:
            if cfg.verbosity:
                print(f"loaded cache {cfg.cache} (limit {cached.limit})",
                      file=sys.stderr)
            if cached.limit == cfg.limit:
                return cached
            return SpSieve(cfg.limit, cached.flags[: cfg.limit + 1])
    started = time.monotonic()
    sieve = build_sieve(cfg.limit, threads=cfg.threads)
    if cfg.verbosity:
        print(f"built sieve to {cfg.limit} in {time.monotonic() - started:.2f}s",
              file=sys.stderr)
    if cfg.cache:
        sieve.save(cfg.cache)
        if cfg.verbosity:
            print(f"saved cache {cfg.cache}", file=sys.stderr)
    return sieve


# -- output ---------------------------------------------------------------


def _emit(cfg: CliConfig, payload: dict, plain_lines: list[str],
          csv_rows: list[list] | None = None) -> None:
    if cfg.format == "json":
        print(json.dumps(payload))
    elif cfg.format == "plain":
        for line in plain_lines:
            print(line)
    else:
        if csv_rows is None:
            keys = list(payload)
            csv_rows = [keys, [payload[k] for k in keys]]
        writer = csv.writer(sys.stdout, lineterminator="\n")
        for row in csv_rows:
            writer.writerow(row)


# -- command handlers -----------------------------------------------------


def _cmd_build(cfg: CliConfig, args) -> int:
    sieve = _load_or_build(cfg)
    count = sieve.sp_count(sieve.limit)
    sps = np.flatnonzero(sieve.flags)
    largest = int(sps[-1]) if sps.size else None
    out = getattr(args, "out", None)
    if out:
        sieve.save(out)
    payload = {"limit": sieve.limit, "sp_count": count, "max_sp": largest,
               "out": out}
    plain = [f"limit {sieve.limit}: {count} SP numbers, largest {largest}"]
    if out:
        plain.append(f"cache written to {out}")
    _emit(cfg, payload, plain)
    return EXIT_OK


def _cmd_list(cfg: CliConfig, args) -> int:
    index = QIndex.from_sieve(_load_or_build(cfg))
    sps = index.elements[1:]
    if args.count is not None:
        if args.count < 0:
            raise DomainError(f"need --count >= 0, got {args.count}")
        if args.count > sps.size:
            raise CapacityError(
                f"only {sps.size} SP numbers below limit {cfg.limit}, "
                f"asked for {args.count}")
        chosen = sps[: args.count]
    else:
        bound = args.max if args.max is not None else cfg.limit
        if bound > cfg.limit:
            raise CapacityError(
                f"--max {bound} exceeds limit {cfg.limit}", required=bound)
        chosen = sps[sps <= bound]
    values = [int(v) for v in chosen]
    payload = {"limit": cfg.limit, "sp": values}
    _emit(cfg, payload, [str(v) for v in values],
          [["sp"]] + [[v] for v in values])
    return EXIT_OK


def _cmd_count(cfg: CliConfig, args) -> int:
    sieve = _load_or_build(cfg)
    c = sieve.sp_count(args.n)
    _emit(cfg, {"n": args.n, "sp_count": c}, [str(c)])
    return EXIT_OK


def _cmd_succ(cfg: CliConfig, args) -> int:
    index = QIndex.from_sieve(_load_or_build(cfg))
    v = index.successor(args.x)
    _emit(cfg, {"x": args.x, "successor": v}, [str(v)])
    return EXIT_OK


def _cmd_pred(cfg: CliConfig, args) -> int:
    index = QIndex.from_sieve(_load_or_build(cfg))
    v = index.predecessor(args.x)
    _emit(cfg, {"x": args.x, "predecessor": v}, [str(v)])
    return EXIT_OK


def _cmd_nth(cfg: CliConfig, args) -> int:
    index = QIndex.from_sieve(_load_or_build(cfg))
    v = index.nth_sp(args.r)
    _emit(cfg, {"r": args.r, "sp": v}, [str(v)])
    return EXIT_OK


def _cmd_op(cfg: CliConfig, args) -> int:
    index = QIndex.from_sieve(_load_or_build(cfg))
    v = lop(index, args.a, args.b)
    _emit(cfg, {"a": args.a, "b": args.b, "result": v}, [str(v)])
    return EXIT_OK


def _cmd_table(cfg: CliConfig, args) -> int:
    index = QIndex.from_sieve(_load_or_build(cfg))
    table = cayley_table(index, args.rank)
    members = list(table.members)
    entries = table.to_lists()
    payload = {"rank": args.rank, "members": members, "entries": entries}
    width = len(str(members[-1]))
    plain = [" ".join([f"{'*':>{width}}"] + [f"{v:>{width}}" for v in members])]
    plain += [" ".join(f"{v:>{width}}" for v in [m] + row)
              for m, row in zip(members, entries)]
    csv_rows = [[""] + members] + [[m] + row for m, row in zip(members, entries)]
    _emit(cfg, payload, plain, csv_rows)
    return EXIT_OK


def _cmd_nonassoc(cfg: CliConfig, args) -> int:
    index = QIndex.from_sieve(_load_or_build(cfg))
    witness = find_nonassoc_witness(index, args.rank)
    payload = {"rank": args.rank,
               "witness": list(witness) if witness else None}
    if witness:
        a, b, c = witness
        left = lop(index, lop(index, a, b), c)
        right = lop(index, a, lop(index, b, c))
        payload["left"] = left
        payload["right"] = right
        plain = [f"({a} • {b}) • {c} = {left}  !=  "
                 f"{a} • ({b} • {c}) = {right}"]
    else:
        plain = [f"rank {args.rank}: associative (no witness)"]
    _emit(cfg, payload, plain)
    return EXIT_OK


def _cmd_fixed_point(cfg: CliConfig, args) -> int:
    index = QIndex.from_sieve(_load_or_build(cfg))
    a = fixed_point(index, args.q)
    _emit(cfg, {"q": args.q, "fixed_point": a}, [str(a)])
    return EXIT_OK


def _cmd_gap_run(cfg: CliConfig, args) -> int:
    index = QIndex.from_sieve(_load_or_build(cfg))
    run = theorems.find_gap_run(index, args.n)
    payload = {"n": args.n, "start": run.start, "length": run.length}
    _emit(cfg, payload,
          [f"{run.length} consecutive non-SP numbers starting at {run.start}"])
    return EXIT_OK


def _cmd_pairs(cfg: CliConfig, args) -> int:
    index = QIndex.from_sieve(_load_or_build(cfg))
    bound = args.max if args.max is not None else cfg.limit
    pairs = theorems.gap_pairs(index, args.gap, bound)
    payload = {"gap": args.gap, "max": bound,
               "pairs": [[p.lo, p.hi] for p in pairs]}
    plain = [f"({p.lo}, {p.hi})" for p in pairs] or ["none"]
    csv_rows = [["lo", "hi", "gap"]] + [[p.lo, p.hi, p.gap] for p in pairs]
    _emit(cfg, payload, plain, csv_rows)
    return EXIT_OK


def _cmd_ap_find(cfg: CliConfig, args) -> int:
    primes = theorems.find_prime_ap(args.length, args.bound)
    payload = {"length": args.length, "bound": args.bound,
               "primes": list(primes), "square": args.square,
               "terms": None, "common_difference": None}
    plain = [f"primes: {', '.join(str(p) for p in primes)}"]
    if args.square is not None:
        ap = theorems.construct_sp_ap(primes, args.square)
        payload["terms"] = list(ap.terms)
        payload["common_difference"] = ap.common_difference
        plain.append(f"terms: {', '.join(str(t) for t in ap.terms)}")
        plain.append(f"common difference: {ap.common_difference}")
    _emit(cfg, payload, plain)
    return EXIT_OK


def _cmd_ap_verify(cfg: CliConfig, args) -> int:
    try:
        ap = theorems.sp_ap_from_terms(args.terms)
    except ValidationError as exc:
        print(f"falsifying input: {exc}", file=sys.stderr)
        return EXIT_FINDING
    index = QIndex.from_sieve(_load_or_build(cfg))
    value = theorems.verify_bullet_chain(index, ap)
    via_difference = index.successor(ap.common_difference)
    verified = value == via_difference
    payload = {"terms": list(ap.terms),
               "common_difference": ap.common_difference,
               "chain_value": value,
               "successor_of_difference": via_difference,
               "verified": verified}
    plain = [f"chain value {value}; successor of difference "
             f"{ap.common_difference} is {via_difference}; "
             f"{'verified' if verified else 'MISMATCH'}"]
    _emit(cfg, payload, plain)
    return EXIT_OK if verified else EXIT_FINDING


def _cmd_triples(cfg: CliConfig, args) -> int:
    index = QIndex.from_sieve(_load_or_build(cfg))
    triple = theorems.search_equal_triple(index, args.rank)
    payload = {"rank": args.rank,
               "triple": list(triple) if triple else None}
    if triple:
        a, b, c = triple
        common = lop(index, a, b)
        payload["product"] = common
        plain = [f"equal-product triple: ({a}, {b}, {c}), every pair gives {common}"]
    else:
        plain = [f"rank {args.rank}: no equal-product triple"]
    _emit(cfg, payload, plain)
    return EXIT_FINDING if triple else EXIT_OK


def _cmd_bertrand(cfg: CliConfig, args) -> int:
    index = QIndex.from_sieve(_load_or_build(cfg))
    failures = theorems.scan_bertrand(index, args.lo, args.hi,
                                      threads=cfg.threads)
    real = [n for n in failures if n >= 5]
    payload = {"from": args.lo, "to": args.hi, "failures": failures,
               "failures_from_5": real}
    plain = [f"failures in [{args.lo}, {args.hi}]: "
             f"{', '.join(str(n) for n in failures) or 'none'}"]
    if real:
        plain.append(f"counterexamples at n >= 5: "
                     f"{', '.join(str(n) for n in real)}")
    csv_rows = [["n"]] + [[n] for n in failures]
    _emit(cfg, payload, plain, csv_rows)
    return EXIT_FINDING if real else EXIT_OK


def _cmd_census(cfg: CliConfig, args) -> int:
    sieve = _load_or_build(cfg)
    result = analytics.digit_census(sieve, args.max)
    total = sum(result.counts.values())
    payload = {"limit": result.limit,
               "counts": {str(d): result.counts[d] for d in range(10)},
               "sp_count": total,
               "digit1_count": result.counts[1],
               "digit1_target": result.digit1_target}
    plain = [f"digit {d}: {result.counts[d]}" for d in range(10)]
    plain.append(f"total {total}; modeled digit-1 count "
                 f"{result.digit1_target:.3f}")
    csv_rows = [["digit", "count"]] + [[d, result.counts[d]] for d in range(10)]
    _emit(cfg, payload, plain, csv_rows)
    return EXIT_OK


def _cmd_density(cfg: CliConfig, args) -> int:
    sieve = _load_or_build(cfg)
    rows = analytics.density_table(sieve, args.checkpoints)
    payload = {"target": analytics.DENSITY_TARGET,
               "rows": [{"n": r.n, "sp_count": r.sp_count, "ratio": r.ratio,
                         "target": r.target, "abs_error": r.abs_error}
                        for r in rows]}
    plain = [f"n={r.n}: count {r.sp_count}, ratio {r.ratio:.6f}, "
             f"abs error {r.abs_error:.6f}" for r in rows]
    csv_rows = [["n", "sp_count", "ratio", "target", "abs_error"]]
    csv_rows += [[r.n, r.sp_count, repr(r.ratio), repr(r.target),
                  repr(r.abs_error)] for r in rows]
    _emit(cfg, payload, plain, csv_rows)
    return EXIT_OK


def _cmd_zeta(cfg: CliConfig, args) -> int:
    ev = analytics.hurwitz_zeta2(args.a)
    payload = {"a": ev.a, "value": ev.value,
               "abs_error_bound": ev.abs_error_bound, "terms": ev.terms}
    plain = [f"zeta(2, {ev.a}) = {ev.value!r} "
             f"(error bound {ev.abs_error_bound:.2e}, {ev.terms} summed terms)"]
    _emit(cfg, payload, plain)
    return EXIT_OK


# -- verification suites --------------------------------------------------


def _check(name: str, ok: bool, detail: str) -> dict:
    return {"name": name, "ok": bool(ok), "detail": detail}


def _suite_axioms(cfg, args, sieve, index):
    rank = args.rank if args.rank is not None else sieve.sp_count(
        min(2000, cfg.limit))
    table = cayley_table(index, rank)
    m = np.asarray(table.members, dtype=np.int64)
    t = table.entries
    checks = []
    member_hit = np.isin(t, m)
    checks.append(_check(
        "closure", bool(member_hit.all()),
        f"all {t.size} products stay in the rank-{rank} prefix"))
    checks.append(_check(
        "commutativity", bool((t == t.T).all()), "table equals its transpose"))
    checks.append(_check(
        "identity", bool((t[0] == m).all() and (t[:, 0] == m).all()),
        "row and column of 1 reproduce the members"))
    checks.append(_check(
        "self_inverse", bool((np.diag(t) == 1).all()), "diagonal is all 1s"))
    off = ~np.eye(len(m), dtype=bool)
    bound_ok = bool((t[off] <= np.maximum(m[:, None], m[None, :])[off]).all())
    checks.append(_check(
        "bound", bound_ok, "a != b implies a • b <= max(a, b)"))
    return checks


def _suite_lemma1(cfg, args, sieve, index):
    n_max = args.n_max if args.n_max is not None else 25
    checks = []
    for n in range(1, n_max + 1):
        run = theorems.find_gap_run(index, n)
        lo, hi = run.start, run.start + run.length
        interior_clear = not sieve.flags[lo:hi].any()
        bounded = (lo == 1 or bool(sieve.flags[lo - 1])) and bool(sieve.flags[hi])
        ok = run.length >= n and interior_clear and bounded
        checks.append(_check(
            f"run_{n}", ok,
            f"{run.length} non-SP numbers from {run.start}"))
    return checks


def _ap_chain_checks(cfg, args, sieve, index, *, dual_route: bool):
    max_len = args.length if args.length is not None else 4
    bound = args.bound if args.bound is not None else 200
    square = args.square if args.square is not None else 2
    checks = []
    for n in range(2, max_len + 1):
        primes = theorems.find_prime_ap(n, bound)
        ap = theorems.construct_sp_ap(primes, square)
        value = theorems.verify_bullet_chain(index, ap)
        if dual_route:
            via = index.successor(ap.common_difference)
            checks.append(_check(
                f"chain_{n}", value == via,
                f"terms {ap.terms}: chain value {value}, successor of "
                f"difference {ap.common_difference} is {via}"))
        else:
            checks.append(_check(
                f"progression_{n}", True,
                f"primes {primes} scaled by {square}**2 give SP terms "
                f"{ap.terms}"))
    return checks


def _suite_lemma2(cfg, args, sieve, index):
    return _ap_chain_checks(cfg, args, sieve, index, dual_route=False)


def _suite_theorem2(cfg, args, sieve, index):
    return _ap_chain_checks(cfg, args, sieve, index, dual_route=True)


def _suite_lemma3(cfg, args, sieve, index):
    lo = args.lo if args.lo is not None else 1
    hi = args.hi if args.hi is not None else min(10**6, cfg.limit // 2)
    failures = theorems.scan_bertrand(index, lo, hi, threads=cfg.threads)
    real = [n for n in failures if n >= 5]
    small = [n for n in failures if n < 5]
    checks = [_check(
        "doubling", not real,
        f"[{lo}, {hi}]: {len(real)} failures at n >= 5"
        + (f" (first {real[0]})" if real else "")
        + (f"; expected small-n failures {small}" if small else ""))]
    return checks


def _suite_lemma4(cfg, args, sieve, index):
    t_max = args.t_max if args.t_max is not None else min(10**6, cfg.limit // 2)
    violation = theorems.check_adjacency(index, t_max, threads=cfg.threads)
    checks = [_check(
        "adjacency", violation is None,
        f"t <= {t_max}: "
        + ("no violation" if violation is None else f"violated at t={violation}"))]
    return checks


def _suite_theorem1(cfg, args, sieve, index):
    q_max = args.q_max if args.q_max is not None else 100
    qs = [int(q) for q in index.elements[index.elements <= q_max]]
    checks = []
    for q in qs:
        a = fixed_point(index, q)
        checks.append(_check(
            f"fixed_point_{q}", lop(index, a, q) == a,
            f"{a} • {q} = {a}"))
    return checks


def _suite_theorem3(cfg, args, sieve, index):
    rank = args.rank if args.rank is not None else sieve.sp_count(
        min(2000, cfg.limit))
    triple = theorems.search_equal_triple(index, rank)
    if triple is None:
        detail = f"rank {rank}: no equal-product triple"
    else:
        a, b, c = triple
        detail = (f"rank {rank}: counterexample ({a}, {b}, {c}) with "
                  f"common product {lop(index, a, b)}")
    return [_check("no_equal_triple", triple is None, detail)]


def _suite_theorem4(cfg, args, sieve, index):
    bound = args.max if args.max is not None else min(10**5, cfg.limit)
    violation = theorems.check_twin_shift(index, bound)
    if violation is None:
        detail = f"twins up to {bound}: products stay equal or adjacent"
    else:
        a, x, product = violation
        detail = f"twin ({a}, {a + 1}) with x={x}: products split apart"
    return [_check("twin_shift", violation is None, detail)]


SUITES = {
    "axioms": _suite_axioms,
    "lemma1": _suite_lemma1,
    "lemma2": _suite_lemma2,
    "lemma3": _suite_lemma3,
    "lemma4": _suite_lemma4,
    "theorem1": _suite_theorem1,
    "theorem2": _suite_theorem2,
    "theorem3": _suite_theorem3,
    "theorem4": _suite_theorem4,
}

SUITE_ORDER = ["axioms", "lemma1", "lemma2", "lemma3", "lemma4",
               "theorem1", "theorem2", "theorem3", "theorem4"]


def _cmd_verify(cfg: CliConfig, args) -> int:
    names = SUITE_ORDER if args.suite == "all" else [args.suite]
    sieve = _load_or_build(cfg)
    index = QIndex.from_sieve(sieve)
    suites_out = []
    all_ok = True
    for name in names:
        checks = SUITES[name](cfg, args, sieve, index)
        ok = all(c["ok"] for c in checks)
        all_ok = all_ok and ok
        suites_out.append({"suite": name, "ok": ok, "checks": checks})
    payload = {"limit": cfg.limit, "ok": all_ok, "suites": suites_out}
    plain = []
    csv_rows = [["suite", "check", "ok", "detail"]]
    for s in suites_out:
        for c in s["checks"]:
            status = "ok" if c["ok"] else "FAIL"
            plain.append(f"[{status}] {s['suite']}.{c['name']}: {c['detail']}")
            csv_rows.append([s["suite"], c["name"], c["ok"], c["detail"]])
        plain.append(f"suite {s['suite']}: "
                     + ("verified" if s["ok"] else "FOUND A COUNTEREXAMPLE"))
    _emit(cfg, payload, plain, csv_rows)
    return EXIT_OK if all_ok else EXIT_FINDING


HANDLERS = {
    "build": _cmd_build,
    "list": _cmd_list,
    "count": _cmd_count,
    "succ": _cmd_succ,
    "pred": _cmd_pred,
    "nth": _cmd_nth,
    "op": _cmd_op,
    "table": _cmd_table,
    "nonassoc": _cmd_nonassoc,
    "fixed-point": _cmd_fixed_point,
    "gap-run": _cmd_gap_run,
    "pairs": _cmd_pairs,
    "triples": _cmd_triples,
    "bertrand": _cmd_bertrand,
    "census": _cmd_census,
    "density": _cmd_density,
    "zeta": _cmd_zeta,
    "verify": _cmd_verify,
}


def dispatch(argv: list[str]) -> int:
    """Parse argv, run the subcommand, and return the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    cfg = CliConfig(
        limit=getattr(args, "limit", DEFAULT_LIMIT),
        cache=getattr(args, "cache", None),
        format=getattr(args, "format", "json"),
        threads=getattr(args, "threads", 1),
        verbosity=getattr(args, "verbose", 0),
    )
    if cfg.limit < 8:
        print(f"--limit must be at least 8 (the first SP number), got "
              f"{cfg.limit}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.threads < 1:
        print(f"--threads must be at least 1, got {cfg.threads}",
              file=sys.stderr)
        return EXIT_USAGE
    if args.command == "ap":
        handler = _cmd_ap_find if args.ap_command == "find" else _cmd_ap_verify
    else:
        handler = HANDLERS[args.command]
    try:
        return handler(cfg, args)
    except ChainBrokenError as exc:
        print(f"chain broken at position {exc.position}, pair {exc.pair}: "
              f"{exc}", file=sys.stderr)
        return EXIT_FINDING
    except (CapacityError, NotFoundError, SearchBudgetError) as exc:
        hint = ""
        if isinstance(exc, CapacityError) and exc.required is not None:
            hint = f" (try --limit {exc.required})"
        print(f"capacity: {exc}{hint}", file=sys.stderr)
        return EXIT_CAPACITY
    except (DomainError, MembershipError, ValidationError, CacheError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SploopError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
