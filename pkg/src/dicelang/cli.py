"""Command-line front end: one-shot rolls, a REPL, verification and benchmarks.

Exit codes: 0 success, 1 verification failure, 2 user error (syntax,
evaluation), 3 internal resource limit.

Environment overrides: ``DICE_LIMIT_L`` caps reroll/explosion chains,
``DICE_MAX_POOL`` caps pool sizes.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import statistics
import sys
import time

from .errors import DiceError, ParseError
from .evaluator import (Limits, MacroTable, builtin_macro_table, evaluate,
                        parse_macro_text)
from .nodes import MacroDefinition
from .parser import parse
from .rng import SeededSource

BENCH_LADDER = ["1d1", "10d10", "100d100", "1000d1000", "10000d10000"]

VERIFY_DEFAULT_SAMPLES = 100_000


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dicelang",
        description="Roll dice-notation expressions.")
    sub = ap.add_subparsers(dest="mode", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None,
                       help="64-bit seed for the randomness source")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--macros", metavar="FILE", default=None,
                       help="macro file, one #NAME = expr per line")

    roll = sub.add_parser("roll", help="evaluate one expression and exit")
    roll.add_argument("expression")
    common(roll)

    repl = sub.add_parser("repl", help="interactive session")
    common(repl)

    verify = sub.add_parser(
        "verify", help="chi-square the evaluator against exact enumeration")
    verify.add_argument("expression")
    verify.add_argument("--samples", type=int, default=VERIFY_DEFAULT_SAMPLES)
    common(verify)

    bench = sub.add_parser(
        "bench", help="time the NdN ladder and emit CSV")
    bench.add_argument("--trials", type=int, default=20)
    common(bench)

    return ap


def _limits_from_env() -> Limits:
    limits = Limits()
    chain = os.environ.get("DICE_LIMIT_L")
    if chain is not None:
        limits.chain_limit = int(chain)
    max_pool = os.environ.get("DICE_MAX_POOL")
    if max_pool is not None:
        limits.max_pool = int(max_pool)
    return limits


def _load_macros(path: str | None) -> MacroTable:
    table = builtin_macro_table()
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            loaded = parse_macro_text(fh.read())
        table.entries.update(loaded.entries)
    return table


def _emit_error(err: DiceError, fmt: str, stream) -> int:
    if fmt == "json":
        stream.write(json.dumps({"error": err.to_dict()}) + "\n")
    else:
        stream.write(f"error[{err.code}]: {err}\n")
    return err.exit_status


def _print_result(result, fmt: str, stream):
    if fmt == "json":
        stream.write(json.dumps(result.to_dict()) + "\n")
    else:
        stream.write(result.text() + "\n")


def _cmd_roll(args, stdout, stderr) -> int:
    limits = _limits_from_env()
    try:
        ast = parse(args.expression)
        macros = _load_macros(args.macros)
        result = evaluate(ast, macros=macros,
                          rng=SeededSource(args.seed), limits=limits)
    except DiceError as err:
        return _emit_error(err, args.format, stderr)
    _print_result(result, args.format, stdout)
    return 0


def _cmd_repl(args, stdin, stdout, stderr) -> int:
    limits = _limits_from_env()
    try:
        macros = _load_macros(args.macros)
    except DiceError as err:
        return _emit_error(err, args.format, stderr)
    session_rng = SeededSource(args.seed)
    machine = args.format == "json"
    prompt = stdin.isatty() if hasattr(stdin, "isatty") else False

    for raw in stdin:
        line = raw.rstrip("\n")
        if machine:
            # Machine mode: each line is a JSON document, either a plain
            # string or {"expression": ..., "seed": ...}; one JSON result or
            # structured error is written per input line.  A request that
            # carries its own seed is hermetic: it gets a private draw
            # stream and a throwaway copy of the macro table, so replaying
            # it alone reproduces the reply byte for byte.
            try:
                doc = json.loads(line)
                if isinstance(doc, str):
                    expression, rng, table = doc, session_rng, macros
                elif isinstance(doc, dict):
                    expression = doc["expression"]
                    if "seed" in doc:
                        rng, table = SeededSource(doc["seed"]), macros.copy()
                    else:
                        rng, table = session_rng, macros
                else:
                    raise ValueError("expected a string or object")
            except (ValueError, KeyError, TypeError) as exc:
                bad = ParseError(f"bad request line: {exc}")
                _emit_error(bad, "json", stdout)
                continue
            try:
                result = evaluate(parse(expression), macros=table,
                                  rng=rng, limits=limits)
                _print_result(result, "json", stdout)
            except DiceError as err:
                _emit_error(err, "json", stdout)
            stdout.flush()
            continue

        line = line.strip()
        if not line:
            continue
        if line in ("exit", "quit"):
            break
        try:
            result = evaluate(parse(line), macros=macros,
                              rng=session_rng, limits=limits)
            _print_result(result, "text", stdout)
        except DiceError as err:
            _emit_error(err, "text", stderr)
        if prompt:
            stdout.write("dice> ")
            stdout.flush()
    return 0


def _cmd_verify(args, stdout, stderr) -> int:
    from .oracle import compare  # deferred: pulls in scipy

    limits = _limits_from_env()
    try:
        report = compare(args.expression, samples=args.samples,
                         seed=args.seed if args.seed is not None else 0,
                         limits=limits)
    except DiceError as err:
        return _emit_error(err, args.format, stderr)
    if args.format == "json":
        stdout.write(json.dumps({
            "expression": report.expression,
            "samples": report.samples,
            "support_size": report.support_size,
            "chi_square": report.chi_square,
            "p_value": report.p_value,
            "degrees_of_freedom": report.degrees_of_freedom,
            "passed": report.passed,
        }) + "\n")
    else:
        stdout.write(report.summary() + "\n")
    return 0 if report.passed else 1


def _cmd_bench(args, stdout, stderr) -> int:
    import gc

    limits = _limits_from_env()
    seed = args.seed if args.seed is not None else 0
    writer = csv.writer(stdout)
    writer.writerow(["expression", "mean_ns", "p99_ns"])
    for expression in BENCH_LADDER:
        # One untimed warmup with collected garbage so timings reflect the
        # expression, not allocator debt left behind by earlier work.
        gc.collect()
        evaluate(parse(expression), macros=builtin_macro_table(),
                 rng=SeededSource(seed), limits=limits)
        times = []
        for trial in range(args.trials):
            rng = SeededSource(seed + trial)
            start = time.perf_counter_ns()
            ast = parse(expression)
            evaluate(ast, macros=builtin_macro_table(), rng=rng,
                     limits=limits)
            times.append(time.perf_counter_ns() - start)
        times.sort()
        p99 = times[min(len(times) - 1, int(0.99 * (len(times) - 1) + 0.5))]
        writer.writerow([expression, int(statistics.fmean(times)), p99])
    return 0


def main(argv: list[str] | None = None, stdin=None, stdout=None,
         stderr=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    args = build_arg_parser().parse_args(argv)
    try:
        if args.mode == "roll":
            return _cmd_roll(args, stdout, stderr)
        if args.mode == "repl":
            return _cmd_repl(args, stdin, stdout, stderr)
        if args.mode == "verify":
            return _cmd_verify(args, stdout, stderr)
        if args.mode == "bench":
            return _cmd_bench(args, stdout, stderr)
    except DiceError as err:
        return _emit_error(err, getattr(args, "format", "text"), stderr)
    raise AssertionError(f"unhandled mode {args.mode!r}")


if __name__ == "__main__":
    sys.exit(main())
