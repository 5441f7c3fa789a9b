"""Command line entry point."""

from __future__ import annotations

import argparse
import multiprocessing as mp
import sys
import time
from typing import Optional

from ..carriers import cone_validate, morphism_validate
from ..errors import ModelError, PreconditionError, UnsupportedError
from ..verdict import FAILS, HOLDS, UNKNOWN
from .checks import CENSUS_PREDICATES, ERROR, run_check
from .explain import explain
from .model import ParseError, catalog_model, parse_model, print_model
from .report import Record, emit_report, exit_code

EPILOG = """exit codes:
  0  every check holds
  1  some check fails (a refutation outranks an open case)
  2  some check is unknown up to the bound, none fails
  3  model or usage error
"""

DEFAULT_WORD_BOUND = 6

# jobs for worker processes; set before the pool forks so workers inherit them
_JOBS: list = []


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--bound", type=int, default=None, help=f"word-ball radius (default {DEFAULT_WORD_BOUND})")
    common.add_argument("--parallel", type=int, default=1, metavar="N", help="worker processes")
    common.add_argument("--timing", action="store_true", help="report wall time per check")

    p = _Parser(
        prog="preordgrp",
        description="Decide extension classes of preordered groups.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("validate", parents=[common], help="parse and validate a model file")
    v.add_argument("file")
    c = sub.add_parser("check", parents=[common], help="run the check directives of a model file")
    c.add_argument("file")
    cs = sub.add_parser("census", parents=[common], help="sweep catalog surjections through all predicates")
    cs.add_argument("--max-order", type=int, default=8)
    cs.add_argument("--limit", type=int, default=None, help="surjections per pair of objects")
    cs.add_argument("--block-limit", type=int, default=6)
    cs.add_argument("--records", action="store_true", help="include every check record in JSON output")
    e = sub.add_parser("explain", parents=[common], help="construction trace of an object or morphism")
    e.add_argument("name")
    e.add_argument("--model", help="model file to look the name up in (default: catalog)")
    k = sub.add_parser("catalog", parents=[common], help="list or dump the built-in catalog")
    k.add_argument("--dump", action="store_true", help="print the catalog as a model file")
    pr = sub.add_parser("print", parents=[common], help="print a model file in normal form")
    pr.add_argument("file")
    return p


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _timed(fn, timing: bool):
    t0 = time.perf_counter()
    v = fn()
    return v, int(round((time.perf_counter() - t0) * 1000)) if timing else 0


def _run_job(i: int):
    predicate, target, bound, base, tag, timing = _JOBS[i]
    return _timed(lambda: run_check(predicate, target, bound, base, tag), timing)


def _run_all(jobs: list, parallel: int) -> list:
    """Evaluate jobs in order; with parallel > 1 a forked pool shares the job list."""
    global _JOBS
    _JOBS = jobs
    try:
        if parallel > 1 and len(jobs) > 1 and "fork" in mp.get_all_start_methods():
            with mp.get_context("fork").Pool(parallel) as pool:
                return pool.map(_run_job, range(len(jobs)), chunksize=max(1, len(jobs) // (4 * parallel)))
        return [_run_job(i) for i in range(len(jobs))]
    finally:
        _JOBS = []


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 3


def cmd_validate(args) -> int:
    m = parse_model(_read(args.file))
    for name, x in m.pogs.items():
        v = cone_validate(x)
        if v.fails:
            return _fail(f"pog {name}: invalid cone ({v.reason}) at {v.witness}")
    for name, f in m.morphisms.items():
        v = morphism_validate(f)
        if v.fails:
            return _fail(f"morphism {name}: {v.reason} at {v.witness}")
    print(f"ok: {len(m.groups)} groups, {len(m.cones)} cones, {len(m.pogs)} objects, "
          f"{len(m.morphisms)} morphisms, {len(m.checks)} checks")
    return 0


def cmd_check(args) -> int:
    m = parse_model(_read(args.file))
    jobs = []
    for c in m.checks:
        bound = c.bound if c.bound is not None else args.bound
        base = m.pogs[c.base] if c.base else None
        jobs.append((c.predicate, m.resolve(c.target), bound, base, c.tag, args.timing))
    results = _run_all(jobs, args.parallel)
    records = [Record(c.predicate, c.target, v, ms) for c, (v, ms) in zip(m.checks, results)]
    sys.stdout.write(emit_report(records, args.format))
    return exit_code(r.status for r in records)


def census_morphisms(max_order: int, limit: Optional[int], block_limit: Optional[int]) -> list:
    from ..corpus import builtin_catalog, regular_epi_corpus

    ms = [
        f
        for f in builtin_catalog().morphisms.values()
        if f.flags["regular_epi"] and (f.domain.group.backend != "finite" or f.domain.group.finite.order <= max_order)
    ]
    ms += regular_epi_corpus(max_order, limit, block_limit)
    seen, out = set(), []
    for f in ms:
        if f.name not in seen:
            seen.add(f.name)
            out.append(f)
    return out


def census(max_order: int = 8, limit=None, block_limit=6, bound=None, parallel: int = 1, timing: bool = False):
    ms = census_morphisms(max_order, limit, block_limit)
    jobs = [(p, f, bound, None, None, timing) for f in ms for p in CENSUS_PREDICATES]
    results = _run_all(jobs, parallel)
    records = [Record(j[0], j[1].name, v, t) for j, (v, t) in zip(jobs, results)]
    counts = {p: {HOLDS: 0, FAILS: 0, UNKNOWN: 0, ERROR: 0} for p in CENSUS_PREDICATES}
    by = {}
    for r in records:
        counts[r.predicate][r.status] += 1
        by.setdefault(r.target, {})[r.predicate] = r.status
    sep = [n for n, s in by.items() if s["gammac-normal"] == HOLDS and s["central"] == FAILS]
    central_not_gc = [n for n, s in by.items() if s["central"] == HOLDS and s["gammac-normal"] == FAILS]

    def disagree(a, b):
        return sum(1 for s in by.values() if {s[a], s[b]} == {HOLDS, FAILS})

    summary = {
        "max_order": max_order,
        "morphisms": len(ms),
        "block": sum(1 for f in ms if f.domain.group.backend != "finite"),
        "counts": counts,
        "gammac_not_central_count": len(sep),
        "gammac_not_central": sep[:10],
        "central_not_gammac": len(central_not_gc),
        "central_vs_normal_g": disagree("central", "normal-g"),
        "gammac_vs_normal_gc": disagree("gammac-normal", "normal-gc"),
    }
    return records, summary


def cmd_census(args) -> int:
    records, summary = census(args.max_order, args.limit, args.block_limit, args.bound, args.parallel, args.timing)
    if args.format == "json" and not args.records:
        code = exit_code(r.status for r in records)
        sys.stdout.write(emit_report([], "json", summary, code))
        return code
    sys.stdout.write(emit_report(records, args.format, summary))
    return exit_code(r.status for r in records)


def cmd_explain(args) -> int:
    if args.model:
        target = parse_model(_read(args.model)).resolve(args.name)
    else:
        from ..corpus import builtin_catalog

        try:
            target = builtin_catalog()[args.name]
        except KeyError:
            return _fail(f"no catalog entry named {args.name!r}")
    sys.stdout.write(explain(args.name, target))
    return 0


def cmd_catalog(args) -> int:
    if args.dump:
        sys.stdout.write(print_model(catalog_model()))
        return 0
    from ..corpus import builtin_catalog

    cat = builtin_catalog()
    print(f"catalog version {cat.version}")
    print("groups: " + " ".join(cat.groups))
    print("objects: " + " ".join(cat.objects))
    print("morphisms: " + " ".join(cat.morphisms))
    return 0


def cmd_print(args) -> int:
    sys.stdout.write(print_model(parse_model(_read(args.file))))
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "check": cmd_check,
    "census": cmd_census,
    "explain": cmd_explain,
    "catalog": cmd_catalog,
    "print": cmd_print,
}


def run_command(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.bound is not None and args.bound < 1:
        return _fail("--bound must be positive")
    if args.parallel < 1:
        return _fail("--parallel must be positive")
    try:
        return COMMANDS[args.command](args)
    except ParseError as e:
        return _fail(f"{getattr(args, 'file', None) or getattr(args, 'model', '')}:{e.line}:{e.col}: {e.msg}")
    except (ModelError, PreconditionError, UnsupportedError, OSError) as e:
        return _fail(str(e))


def main() -> int:
    return run_command(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
