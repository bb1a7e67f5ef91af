"""Command-line front end.

    conglab analyze --level 113 --prime 2
    conglab sweep --max-level 200 --jobs 4
    conglab synthetic --trials 500 --seed 7 --prime 5 --prime 7
    conglab import --table table.json

Every command prints an aligned text report, or with ``--json`` an envelope
``{"schema_version", "command", "inputs", "precision", "results",
"version", "timings", "cache"}``.  The last two are filled only with
``--timings`` so that reports are byte-identical across runs.

Exit codes: 0 success, 1 internal invariant violation, 2 user or
hypothesis error, 3 precision cap reached.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import sympy

from . import __version__
from .arith import is_prime
from .cache import HeckeCache
from .congruence import depth_report, random_instance, strict_fixture, compare_block_orders
from .eisenstein import MAX_PRECISION, START_PRECISION, analyze, export_table, mazur_sweep
from .errors import BadPrime, CompositeLevel, CongLabError, HypothesisViolated, InvariantViolation, SchemaError
from .tables import SCHEMA_VERSION, dump_table, load_table

log = logging.getLogger("conglab")


class _Timer:
    def __init__(self):
        self.marks: dict[str, float] = {}
        self._t = time.perf_counter()

    def mark(self, name: str) -> None:
        now = time.perf_counter()
        self.marks[name] = round(now - self._t, 3)
        self._t = now


def _envelope(command, inputs, precision, results, args, timer=None, cache=None) -> dict:
    env = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "precision": precision,
        "results": results,
        "version": __version__,
        "timings": None,
        "cache": None,
    }
    if getattr(args, "timings", False):
        env["timings"] = timer.marks if timer else None
        env["cache"] = {"hits": cache.hits, "misses": cache.misses} if cache else None
    return env


def _table(rows: list[list[str]], header: list[str]) -> str:
    cells = [header] + rows
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _kv(pairs: list[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in pairs)
    return "\n".join(f"{k.ljust(width)}  {_fmt(v)}" for k, v in pairs)


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return ", ".join(_fmt(x) for x in v) if v else "-"
    return str(v)


def _emit(args, env: dict, text: str) -> None:
    if args.json:
        print(json.dumps(env, indent=2, sort_keys=True))
    else:
        print(text)
        if env.get("timings"):
            print()
            print(_kv([(f"time {k}", f"{v:.3f}s") for k, v in env["timings"].items()]))
        if env.get("cache"):
            print(_kv([("cache hits", env["cache"]["hits"]), ("cache misses", env["cache"]["misses"])]))


# --- analyze ----------------------------------------------------------------


def _orbit_rows(orbits: list[dict]) -> list[list[str]]:
    return [
        [str(i + 1), str(o["degree"]), str(o["ramification"]), str(o["residue_degree"]), o["depth"], o["certificate"]]
        for i, o in enumerate(orbits)
    ]


def render_row(row: dict) -> str:
    head = _kv(
        [
            ("level", row["N"]),
            ("prime", row["p"]),
            ("numerator valuation", row["numerator_valuation"]),
            ("component rank", row["rank"]),
            ("order of T/J", row["order_T_mod_J"]),
            ("total depth", row["total_depth"]),
            ("J principal", "unknown" if row["principal"] is None else row["principal"]),
            ("verdict", row["verdict"]),
        ]
    )
    if not row["orbits"]:
        return head + "\n\nno Eisenstein-congruent eigenforms"
    orbits = _table(_orbit_rows(row["orbits"]), ["orbit", "degree", "e", "f", "depth", "certificate"])
    return head + "\n\n" + orbits


def cmd_analyze(args) -> int:
    N, p = args.level, args.prime
    if not is_prime(N):
        raise CompositeLevel(f"level {N} is not prime")
    if not is_prime(p):
        raise BadPrime(f"{p} is not prime")
    timer = _Timer()
    cache = HeckeCache(args.cache_dir) if not args.no_cache else None
    row, comp, orbits = analyze(N, p, args.precision, range_factor=args.range_factor, cache=cache, max_precision=args.max_precision)
    timer.mark("analyze")
    if args.export_table:
        dump_table(export_table(comp, orbits), args.export_table)
        timer.mark("export")
    results = row.to_dict()
    env = _envelope("analyze", {"level": N, "prime": p, "precision": args.precision}, row.precision, results, args, timer, cache)
    _emit(args, env, render_row(results))
    if row.verdict != "equality":
        return 1
    return 0


# --- sweep ------------------------------------------------------------------


def render_sweep(rows: list[dict]) -> str:
    if not rows:
        return "no (N, p) pairs with p dividing the numerator of (N - 1)/12"
    body = [
        [str(r["N"]), str(r["p"]), str(r["numerator_valuation"]), str(r["rank"]), str(r["order_T_mod_J"]), r["total_depth"],
         str(len(r["orbits"])), r["verdict"]]
        for r in rows
    ]
    table = _table(body, ["N", "p", "val", "rank", "order", "total", "orbits", "verdict"])
    eq = sum(r["verdict"] == "equality" for r in rows)
    return table + f"\n\n{eq} of {len(rows)} rows with equality"


def cmd_sweep(args) -> int:
    if args.max_level > 1000:
        raise CongLabError("--max-level is limited to 1000")
    timer = _Timer()
    cache_dir = None if args.no_cache else str(HeckeCache(args.cache_dir).root)
    rows = mazur_sweep(args.max_level, args.primes, jobs=args.jobs, cache_dir=cache_dir)
    timer.mark("sweep")
    results = [r.to_dict() for r in rows]
    precision = max((r.precision for r in rows), default=START_PRECISION)
    env = _envelope("sweep", {"max_level": args.max_level, "primes": args.primes}, precision, results, args, timer)
    _emit(args, env, render_sweep(results))
    codes = {0}
    for r in rows:
        if r.verdict == "error":
            codes.add(int(r.error.rsplit("exit ", 1)[1].rstrip(")")))
        elif r.verdict != "equality":
            codes.add(1)
    # an invariant violation outranks the other failures
    return 1 if 1 in codes else max(codes)


# --- synthetic ----------------------------------------------------------------


def _trial(args_tuple) -> dict:
    index, seed, primes, max_blocks, precision = args_tuple
    rng = random.Random(f"{seed}:{index}")
    p = rng.choice(primes)
    s = rng.randint(1, max_blocks)
    inst_seed = rng.randrange(2**32)
    out = {"trial": index, "p": p, "s": s, "seed": inst_seed}
    try:
        T, J = random_instance(s, p, precision, seed=inst_seed)
        rep = compare_block_orders(T, J, seed=inst_seed)
    except HypothesisViolated as exc:
        out.update(status="skipped", error=str(exc))
        return out
    except CongLabError as exc:
        out.update(status="failure", error=f"{type(exc).__name__}: {exc}")
        return out
    out.update(
        status="pass",
        blocks=list(T.ambient.block_sizes),
        order=rep.order_T_mod_J,
        block_orders=rep.block_orders,
        principal=rep.principal,
        hypotheses_hold=rep.hypotheses_hold,
        generator=rep.generator_method,
        verdict=rep.verdict,
    )
    if rep.hypotheses_hold and sum(rep.block_orders) < rep.order_T_mod_J:
        out.update(status="failure", error="block sum below the order")
    elif rep.principal and rep.verdict != "equality":
        out.update(status="failure", error="principal J without equality")
    elif rep.hypotheses_hold and rep.generator_method is None:
        out.update(status="failure", error="no simultaneous generator")
    return out


def cmd_synthetic(args) -> int:
    primes = args.primes or [5, 7]
    for p in primes:
        if not is_prime(p):
            raise BadPrime(f"{p} is not prime")
    if args.max_blocks < 1 or args.trials < 0:
        raise CongLabError("--max-blocks must be positive and --trials non-negative")
    timer = _Timer()
    work = [(i, args.seed, primes, args.max_blocks, args.precision) for i in range(args.trials)]
    if args.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            trials = list(ex.map(_trial, work, chunksize=16))
    else:
        trials = [_trial(w) for w in work]
    T, J = strict_fixture(primes[0], args.precision)
    fixture = compare_block_orders(T, J)
    timer.mark("synthetic")
    failures = [t for t in trials if t["status"] == "failure"]
    summary = {
        "trials": len(trials),
        "passes": sum(t["status"] == "pass" for t in trials),
        "skipped": sum(t["status"] == "skipped" for t in trials),
        "failures": len(failures),
        "equality": sum(t.get("verdict") == "equality" for t in trials),
        "strict_inequality": sum(t.get("verdict") == "strict-inequality" for t in trials),
        "principal_J": sum(bool(t.get("principal")) for t in trials),
        "hypotheses_hold": sum(bool(t.get("hypotheses_hold")) for t in trials),
        "generator_random": sum(t.get("generator") == "random" for t in trials),
        "generator_induction": sum(t.get("generator") == "induction" for t in trials),
        "strict_fixture": {
            "order": fixture.order_T_mod_J,
            "block_orders": fixture.block_orders,
            "verdict": fixture.verdict,
            "expected": "strict-inequality",
        },
        "counterexamples": failures,
    }
    inputs = {"trials": args.trials, "seed": args.seed, "max_blocks": args.max_blocks, "primes": primes}
    env = _envelope("synthetic", inputs, args.precision, summary, args, timer)
    text = _kv([(k.replace("_", " "), v) for k, v in summary.items() if k not in ("strict_fixture", "counterexamples")])
    text += "\n\n" + _kv(
        [
            ("strict fixture order", fixture.order_T_mod_J),
            ("strict fixture blocks", fixture.block_orders),
            ("strict fixture verdict", f"{fixture.verdict} (expected strict-inequality)"),
        ]
    )
    for f in failures:
        text += "\n" + json.dumps(f, sort_keys=True)
    _emit(args, env, text)
    if fixture.verdict != "strict-inequality":
        return 1
    return 1 if failures else 0


# --- import -------------------------------------------------------------------


def parse_poly(text: str) -> list[int]:
    """Coefficients, constant term first, from "1,0,1" or a polynomial in x such as "x^2 + 2"."""
    text = text.strip()
    if "x" not in text:
        try:
            return [int(c) for c in text.replace(" ", "").split(",")]
        except ValueError as exc:
            raise SchemaError(f"cannot parse polynomial {text!r}") from exc
    x = sympy.Symbol("x")
    try:
        poly = sympy.Poly(sympy.sympify(text.replace("^", "**")), x)
    except (sympy.SympifyError, sympy.PolynomialError) as exc:
        raise SchemaError(f"cannot parse polynomial {text!r}") from exc
    coeffs = poly.all_coeffs()[::-1]
    if not all(c.is_Integer for c in coeffs):
        raise SchemaError("polynomial must have integer coefficients")
    return [int(c) for c in coeffs]


def render_depths(rep: dict) -> str:
    head = _kv(
        [
            ("order of T/J", rep["normalized_order"]),
            ("total depth", rep["normalized_total"]),
            ("Z_p-length of T/J", rep["order_T_mod_J"]),
            ("Z_p-length of C(T0)", rep["congruence_module_order"]),
            ("J principal", rep["principal"]),
            ("residue field large enough", rep["residue_field_ok"]),
            ("verdict", rep["verdict"]),
        ]
    )
    rows = [[lab, d, str(b)] for lab, d, b in zip(rep["labels"], rep["depths"], rep["block_orders"])]
    text = head + "\n\n" + _table(rows, ["system", "depth", "Z_p-length"])
    for note in rep["notes"]:
        text += f"\nnote: {note}"
    return text


def cmd_import(args) -> int:
    timer = _Timer()
    mod = parse_poly(args.ext_modulus) if args.ext_modulus else None
    table = load_table(args.table, mod)
    rep = depth_report(table, seed=args.seed)
    timer.mark("import")
    if not rep.residue_field_ok and not rep.principal:
        raise HypothesisViolated(
            f"residue field too small for the number of systems and J is not principal ({'; '.join(rep.notes)})"
        )
    results = rep.to_dict()
    inputs = {"table": str(args.table), "ext_modulus": mod}
    env = _envelope("import", inputs, table.precision, results, args, timer)
    _emit(args, env, render_depths(results))
    return 0


# --- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conglab", description="Eisenstein congruences and congruence modules.")
    parser.add_argument("--version", action="version", version=f"conglab {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON envelope")
    common.add_argument("--timings", action="store_true", help="include timings and cache statistics")
    common.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="analyze one (N, p)")
    a.add_argument("--level", type=int, required=True)
    a.add_argument("--prime", type=int, required=True)
    a.add_argument("--precision", type=int, default=START_PRECISION)
    a.add_argument("--max-precision", type=int, default=MAX_PRECISION)
    a.add_argument("--range-factor", type=int, default=1, help="multiply the Hecke generator range")
    a.add_argument("--export-table", metavar="PATH")
    a.add_argument("--cache-dir")
    a.add_argument("--no-cache", action="store_true")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sweep", parents=[common], help="all prime levels up to a bound")
    s.add_argument("--max-level", type=int, required=True)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--prime", dest="primes", type=int, action="append")
    s.add_argument("--cache-dir")
    s.add_argument("--no-cache", action="store_true")
    s.set_defaults(func=cmd_sweep)

    y = sub.add_parser("synthetic", parents=[common], help="random subalgebra and ideal campaign")
    y.add_argument("--trials", type=int, default=100)
    y.add_argument("--seed", type=int, default=0)
    y.add_argument("--max-blocks", type=int, default=4)
    y.add_argument("--prime", dest="primes", type=int, action="append")
    y.add_argument("--precision", type=int, default=64)
    y.add_argument("--jobs", type=int, default=1)
    y.set_defaults(func=cmd_synthetic)

    i = sub.add_parser("import", parents=[common], help="depth report for an eigenvalue table")
    i.add_argument("--table", required=True)
    i.add_argument("--ext-modulus", metavar="POLY", help='e.g. "x^2 + 2" or "2,0,1" (constant term first)')
    i.add_argument("--seed", type=int, default=0)
    i.set_defaults(func=cmd_import)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except CongLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # anything else is a bug
        log.exception("internal error")
        print(f"error: internal: {type(exc).__name__}: {exc}", file=sys.stderr)
        return InvariantViolation.exit_code


if __name__ == "__main__":
    sys.exit(main())
