"""Command line entry point.

Bit strings on the command line and in output are written low-order digit
first: ``100`` is the parity vector (s_0, s_1, s_2) = (1, 0, 0). Note that the
usual 2-adic notation ``...1001_2`` runs the other way.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import cycles, embedding, search, transform
from .collatz import DEFAULT_BUDGET, parity_vector
from .padic import TruncatedPadic, format_rational, odd_rational, valuation
from .qmap import check_functional_equations, feq_guard, q_iterate, q_mod, q_mod_array

THREADS_ENV = "PARITYLAB_THREADS"


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _bits(text: str) -> tuple[int, ...]:
    if not text or set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"not a bit string: {text!r}")
    return tuple(int(c) for c in text)


def _rational(text: str) -> Fraction:
    try:
        return odd_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _k_range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    try:
        ks = list(range(int(lo), int(hi) + 1)) if sep else [int(lo)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected K or K1..K2, got {text!r}") from None
    if not ks or min(ks) < 2:
        raise argparse.ArgumentTypeError("square indices start at 2")
    return ks


def write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        write_atomic(args.output, text)
        _progress(f"wrote {args.output}")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _bitstr(bits) -> str:
    return "".join(str(b) for b in bits)


# --- subcommands -------------------------------------------------------------

def cmd_parity(args) -> int:
    v = parity_vector(args.x, args.len)
    if args.format == "json":
        _emit(args, json.dumps({"x": format_rational(args.x), "length": args.len, "parity": list(v)}))
    else:
        _emit(args, _bitstr(v))
    return 0


def cmd_invert(args) -> int:
    s = args.bits
    results = {}
    if args.formula in ("v1", "both"):
        results["v1"] = transform.invert_v1(s)
    if args.formula in ("v2", "both"):
        results["v2"] = transform.invert_v2(s)
    agree = len(set(results.values())) == 1
    if args.format == "json":
        payload = {name: {"residue": c.residue, "modulus": c.modulus} for name, c in results.items()}
        payload["agree"] = agree
        _emit(args, json.dumps(payload))
    elif args.formula == "both":
        lines = [f"{name}: {c}" for name, c in results.items()]
        lines.append("agree" if agree else "DISAGREE")
        _emit(args, "\n".join(lines))
    else:
        _emit(args, str(next(iter(results.values()))))
    return 0 if agree else 1


def cmd_q(args) -> int:
    j = -args.iterations if args.inverse else args.iterations
    if args.exact and args.precision is not None:
        raise SystemExit("--exact and --precision are exclusive")
    if args.precision is not None:
        res = q_iterate(args.x, j, precision=args.precision)
    else:
        res = q_iterate(args.x, j, budget=args.budget)
        if args.exact and not res.exact:
            _progress(f"orbit did not cycle within {args.budget} steps")
            return 1
    if isinstance(res.value, Fraction):
        text = format_rational(res.value)
    else:
        text = f"{res.value.value} mod 2^{res.value.precision}"
    if args.format == "json":
        out = {"x": format_rational(args.x), "iterations": j, "exact": res.exact, "value": text}
        if not isinstance(res.value, Fraction):
            out["digits_low_first"] = _bitstr(res.value.bits)
        _emit(args, json.dumps(out))
    else:
        _emit(args, text)
    return 0


def cmd_ergodic(args) -> int:
    t0 = time.perf_counter()
    _progress(f"enumerating odd ergodic sets up to measure 2^-{args.max_k} (table cap {args.cap})")
    census = cycles.enumerate_ergodic_sets(args.max_k, args.cap)
    _progress(f"done in {time.perf_counter() - t0:.1f}s, highest level {census.highest_level}")
    odd, full = cycles.measure_summary(census.records)
    if args.format == "json":
        _emit(args, census.to_json())
        return 0 if census.complete else 1
    lines = ["k  N_k  N_k*2^-k"]
    for k, n in census.counts.items():
        lines.append(f"{k:<2} {n:<4} {n / (1 << k):.3f}")
    lines.append(f"odd-side measure {float(odd):.5f}, whole domain {float(full):.5f}")
    if not census.complete:
        lines.append("incomplete: some cycles were undecided at the highest level")
    if args.list:
        lines.append("m  k  cycle  measure")
        for r in census.records:
            lines.append(f"{r.level} {r.base_cycle.log_length} {r.base_cycle.elements} 2^-{r.k}")
    _emit(args, "\n".join(lines))
    return 0 if census.complete else 1


def cmd_search(args) -> int:
    cfg = search.SearchConfig(args.bound, args.max_period, args.modulus_bits, args.budget)
    _progress(f"screening |p|, q <= {cfg.bound} modulo 2^{cfg.modulus_bits} on {args.threads} thread(s)")
    report = search.search(cfg, threads=args.threads)
    _progress(f"{report.candidates_screened} candidates, {len(report.survivors)} survivors, "
              f"{report.seconds:.2f}s")
    ok = all(c.verified_exact for c in report.survivors)
    if args.format == "json":
        payload = json.loads(report.to_json())
        payload.pop("seconds")  # keep the data stream deterministic
        _emit(args, json.dumps(payload, indent=1))
        return 0 if ok else 1
    lines = ["seed  period  exact  cycle"]
    for c in report.survivors:
        cyc = ", ".join(format_rational(e) for e in c.cycle_elements)
        lines.append(f"{format_rational(c.seed)}  {c.period}  {c.verified_exact}  ({cyc})")
    _emit(args, "\n".join(lines))
    return 0 if ok else 1


def cmd_embed(args) -> int:
    fmt = args.format
    if args.squares:
        if fmt != "svg":
            raise SystemExit("--squares renders panels and needs --format svg")
        _emit(args, embedding.render_squares_svg(args.squares, args.bits))
        return 0
    if fmt == "json":
        _emit(args, embedding.points_json(embedding.rational_points()))
        return 0
    ps = embedding.generate_arrays(args.bits)
    boxes = embedding.box_cover(args.boxes) if args.boxes else None
    if fmt == "csv":
        _emit(args, embedding.points_csv(ps))
    elif fmt == "svg":
        _emit(args, embedding.render_svg(ps, boxes))
    else:
        rows = embedding.box_counting_stats(max(args.bits, 2))
        lines = [f"{len(ps)} points at depth {args.bits}", "k  boxes  log(boxes)/log(1/side)"]
        lines += [f"{r.k:<2} {r.boxes:<8} {r.ratio:.4f}" for r in rows]
        _emit(args, "\n".join(lines))
    return 0


# --- verify ------------------------------------------------------------------

def _suite_feq() -> list[tuple[str, bool]]:
    rng = random.Random(1)
    checks = []
    inputs = [Fraction(v) for v in (1, 2, 3, 5, 7, -1, -3, -5, -7)] + [Fraction(1, 3), Fraction(-1, 3),
                                                                       Fraction(1, 5), Fraction(-1, 5)]
    inputs += [Fraction(rng.randrange(-99, 100), rng.randrange(1, 40, 2)) for _ in range(20)]
    inputs += [Fraction(-1 - (-2) ** (k - 2) + (rng.randrange(10) << k)) for k in range(2, 8)]
    failed = []
    passed = 0
    for x in inputs:
        for name, status in check_functional_equations(x).items():
            if status == "fail":
                failed.append(f"{name} at {format_rational(x)}")
            passed += status == "pass"
    checks.append((f"functional equations, {passed} exact identities", not failed and passed > 0))
    for msg in failed:
        checks.append((msg, False))
    return checks


def _suite_tables() -> list[tuple[str, bool]]:
    checks = []
    census = cycles.enumerate_ergodic_sets(6, 18)
    got = {(r.level, r.base_cycle.log_length, r.base_cycle.elements) for r in census.records}
    want = {(5, 1, (5, 17)), (6, 2, (9, 29, 25, 13)), (6, 2, (41, 61, 57, 45)),
            (8, 2, (27, 251, 219, 59)), (8, 2, (91, 187, 155, 123))}
    checks.append(("ever-doubling base cycles of measure >= 2^-6", got == want))
    census = cycles.enumerate_ergodic_sets(12, 18)
    checks.append(("ergodic set counts N_1..N_12", census.complete and list(census.counts.values())
                   == [0, 0, 0, 3, 0, 2, 10, 11, 11, 29, 54, 91]))
    try:
        search.verify_known_cycles()
        checks.append(("known rational cycles", True))
    except AssertionError:
        checks.append(("known rational cycles", False))
    rep = search.search(search.SearchConfig(bound=7))
    checks.append(("cycle search to bound 7", sorted(c.seed for c in rep.survivors)
                   == sorted(Fraction(v) for v in ("-1", "1", "-1/3", "1/3", "-1/5", "5/7"))
                   and all(c.verified_exact for c in rep.survivors)))
    pts = embedding.rational_points()
    table4 = [(format_rational(p.parameter), format_rational(p.q_value),
               *(format_rational(c) for c in p.as_fractions())) for p in pts]
    checks.append(("exact rational points", table4 == RATIONAL_POINTS))
    return checks


RATIONAL_POINTS = [
    ("1", "-1/3", "1", "4/3"), ("17", "-401/3", "17/16", "493/384"),
    ("9", "-6377/3", "9/8", "8941/6144"), ("-7", "-5/7", "5/4", "10/7"),
    ("5", "-13/3", "5/4", "13/12"), ("-1/3", "1", "4/3", "1"), ("-3", "-7", "3/2", "5/4"),
    ("3", "-23/3", "3/2", "37/24"), ("5/7", "-1/5", "11/7", "8/5"), ("-1/5", "5/7", "8/5", "11/7"),
    ("1/3", "1/3", "5/3", "5/3"), ("-5", "-3/7", "7/4", "12/7"),
    ("7", "-1595/3", "7/4", "2797/1536"), ("-1", "-1", "2", "2"),
]


def _suite_invariants() -> list[tuple[str, bool]]:
    rng = random.Random(2)
    checks = []
    ok = True
    for j in range(1, 9):
        for v in range(1 << j):
            s = tuple((v >> i) & 1 for i in range(j))
            c = transform.invert_v1(s)
            ok &= parity_vector(c.residue, j) == s and c == transform.invert_v2(s)
    checks.append(("inverse round trip, all vectors of length <= 8", ok))
    ok = True
    for _ in range(1000):
        j = rng.randrange(1, 65)
        s = [rng.randrange(2) for _ in range(j)]
        ok &= transform.invariant_sum(s) == (1 << j) - 1
    checks.append(("signed sum is -1 mod 2^j on 1000 random vectors", ok))
    ok = True
    for n in range(1, 13):
        img = q_mod_array(np.arange(1 << n, dtype=np.uint64), n)
        ok &= len(np.unique(img)) == 1 << n
    checks.append(("Q mod 2^n is a bijection for n <= 12", ok))
    ok = True
    for _ in range(200):
        a, b, n = rng.getrandbits(30), rng.getrandbits(30), 30
        if a == b:
            continue
        v = valuation(TruncatedPadic(a - b, n))
        ok &= valuation(TruncatedPadic(q_mod(a, n) - q_mod(b, n), n)) == v
    checks.append(("Q preserves 2-adic distance (200 random pairs)", ok))
    ok = True
    for _ in range(100):
        x = rng.getrandbits(24)
        ok &= q_iterate(TruncatedPadic(x, 4), 2).value.value == x % 16
        for k in range(2, 5):
            n = k + 4
            ok &= q_iterate(TruncatedPadic(x % (1 << n), n), 1 << k).value.value == x % (1 << n)
    checks.append(("Q^2 = id mod 16 and Q^(2^k) = id mod 2^(k+4)", ok))
    ok = True
    for x in (Fraction(1, 5), Fraction(-7), Fraction(9)):
        k = feq_guard(x, 40)
        ok &= embedding.check_self_affine(x) and (k is None or embedding.check_self_affine(x, k))
    for k in range(2, 10):
        ok &= embedding.check_self_affine(TruncatedPadic(embedding.alpha(k), 16), k)
    checks.append(("self-affine relations", ok))
    ok = all(embedding.interval_family(k).congruences_hold and embedding.interval_family(k).ball_images_hold
             for k in range(2, 13))
    checks.append(("interval families and ball images, 2 <= k <= 12", ok))
    ps = embedding.generate_arrays(10)
    checks.append(("box covers contain every depth-10 point",
                   all(embedding.box_cover(k).contains(ps).all() for k in range(1, 11))))
    return checks


SUITES: dict[str, Callable[[], list[tuple[str, bool]]]] = {
    "feq": _suite_feq,
    "tables": _suite_tables,
    "invariants": _suite_invariants,
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = []
    for name in names:
        _progress(f"running {name} suite")
        results += [(name, label, ok) for label, ok in SUITES[name]()]
    if args.format == "json":
        _emit(args, json.dumps([{"suite": s, "check": c, "pass": ok} for s, c, ok in results], indent=1))
    else:
        lines = [f"{'PASS' if ok else 'FAIL'}  [{s}] {c}" for s, c, ok in results]
        failed = sum(not ok for _, _, ok in results)
        lines.append(f"{len(results) - failed}/{len(results)} checks passed")
        _emit(args, "\n".join(lines))
    return 0 if all(ok for _, _, ok in results) else 1


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="paritylab",
        description="3x+1 parity sequences on the 2-adic integers. "
                    "Bit strings are written low-order digit first.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, formats=("text", "json")):
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.add_argument("--format", choices=formats, default="text")
        sp.add_argument("--output", "-o", help="write to this file (atomically) instead of stdout")
        sp.set_defaults(func=func)
        return sp

    sp = add("parity", cmd_parity, "parity vector of a rational with odd denominator")
    sp.add_argument("x", type=_rational)
    sp.add_argument("--len", "-j", type=int, default=16, help="vector length")

    sp = add("invert", cmd_invert, "congruence class with a given parity vector (bits low-first)")
    sp.add_argument("bits", type=_bits)
    sp.add_argument("--formula", choices=("v1", "v2", "both"), default="v1")

    sp = add("q", cmd_q, "apply Q or its inverse")
    sp.add_argument("x", type=_rational)
    sp.add_argument("--inverse", action="store_true")
    sp.add_argument("--iterations", "-j", type=int, default=1)
    sp.add_argument("--precision", "-n", type=int, help="work modulo 2^n")
    sp.add_argument("--exact", action="store_true", help="fail unless the result is an exact rational")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="T-steps allowed for cycle detection")

    sp = add("ergodic", cmd_ergodic, "count odd ergodic sets of Q by measure")
    sp.add_argument("--max-k", type=int, default=12)
    sp.add_argument("--cap", type=int,
                    help="largest tabulated Q_m level (default 18 for max-k <= 12, else 24)")
    sp.add_argument("--list", action="store_true", help="list the base cycles")

    sp = add("search", cmd_search, "search for rational Q-cycles p/q")
    sp.add_argument("--bound", type=int, default=999)
    sp.add_argument("--max-period", type=int, default=16)
    sp.add_argument("--modulus-bits", type=int, default=40)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--threads", type=int, default=_default_threads(),
                    help=f"worker threads (default from ${THREADS_ENV}, else 1)")

    sp = add("embed", cmd_embed, "points (M(r), M(Q(r))) of the plane set", ("text", "csv", "svg", "json"))
    sp.add_argument("--bits", "-k", type=int,
                    help="depth k: all residues below 2^k (default 12, or 20 with --squares)")
    sp.add_argument("--boxes", type=int, nargs="?", const=-1, default=None,
                    help="draw the 2^K box cover (K defaults to --bits)")
    sp.add_argument("--squares", type=_k_range, help="enlarged square panels, e.g. 2..7")

    sp = add("verify", cmd_verify, "run built-in verification suites")
    sp.add_argument("--suite", choices=("all", *SUITES), default="all")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "embed" and args.bits is None:
        args.bits = 20 if args.squares else 12
    if args.command == "ergodic" and args.cap is None:
        args.cap = 18 if args.max_k <= 12 else cycles.MAX_LEVEL
    if getattr(args, "boxes", None) == -1:
        args.boxes = args.bits
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
