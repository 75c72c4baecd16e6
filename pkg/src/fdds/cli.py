"""Command-line front end.

Exit status: 0 solved / ok, 1 no solution, 2 precondition failed,
3 parse error, 4 size overflow.
"""
from __future__ import annotations

import argparse
import random
import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import DEFAULT_SIZE_CAP, Fdds, SizeOverflow, format_fdds, parse_fdds, product
from .cycles import (
    Reason,
    format_trace,
    solve_linear_compact,
    solve_linear_explicit,
    solve_linear_explicit_fast,
    solve_poly_compact,
    solve_poly_explicit,
)
from .cyclesum import CycleSum, cs_to_fdds, fdds_to_cs, format_cyclesum, parse_cyclesum
from .enumerate import EnumerationBudgetExceeded, brute_force_solve
from .general import solve_poly_general
from .generate import (
    general_instance,
    linear_cycle_instance,
    poly_cycle_instance,
    random_cyclesum,
    random_fdds,
    random_pseudo_cancelable,
)
from .poly import Poly
from .unroll import unroll

EXIT_OK, EXIT_NO_SOLUTION, EXIT_PRECONDITION, EXIT_PARSE, EXIT_OVERFLOW = range(5)


class ParseError(ValueError):
    pass


class Precondition(ValueError):
    pass


# ---------------------------------------------------------------------------
# operands and equation files

_COMPACT = re.compile(r"^\s*\d+\s*x\s*\d+(\s*\+\s*\d+\s*x\s*\d+)*\s*$")


def looks_compact(text: str) -> bool:
    body = " ".join(l for l in text.splitlines() if not l.lstrip().startswith("#"))
    return bool(_COMPACT.match(body))


def parse_operand(text: str, encoding: str | None = None):
    """``encoding`` is "compact", "explicit" or None (guess from the text)."""
    if encoding is None:
        encoding = "compact" if looks_compact(text) else "explicit"
    try:
        if encoding == "compact":
            return parse_cyclesum(text)
        return parse_fdds(text)
    except ValueError as e:
        raise ParseError(str(e)) from e


def format_operand(value) -> str:
    if isinstance(value, CycleSum):
        return format_cyclesum(value)
    return format_fdds(value)


_LINE = re.compile(r"^(?:(?P<lhs>[^=:]+)=)?\s*(?P<enc>compact|explicit)\s*:(?P<body>.*)$")


@dataclass
class Equation:
    coeffs: dict[int, Fdds | CycleSum]
    rhs: Fdds | CycleSum


def parse_equation(text: str) -> Equation:
    section = None
    coeffs: dict[int, Fdds | CycleSum] = {}
    rhs = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in ("polynomial", "rhs"):
                raise ParseError(f"line {no}: unknown section {line}")
            continue
        m = _LINE.match(line)
        if not m or section is None:
            raise ParseError(f"line {no}: expected '<degree> = compact|explicit: ...'")
        value = parse_operand(m.group("body"), m.group("enc"))
        if section == "polynomial":
            lhs = (m.group("lhs") or "").strip()
            if not lhs.isdigit():
                raise ParseError(f"line {no}: degree must be a non-negative integer")
            d = int(lhs)
            if d in coeffs:
                raise ParseError(f"line {no}: degree {d} given twice")
            coeffs[d] = value
        else:
            if rhs is not None:
                raise ParseError(f"line {no}: more than one right-hand side")
            rhs = value
    if rhs is None:
        raise ParseError("missing [rhs] section")
    if not coeffs:
        raise ParseError("missing [polynomial] section")
    return Equation(coeffs, rhs)


def format_equation(poly: Poly, rhs) -> str:
    enc = "compact" if poly.kind is CycleSum else "explicit"
    lines = ["[polynomial]"]
    lines += [f"{d} = {enc}: {format_operand(c)}" for d, c in reversed(poly.terms)]
    lines += ["[rhs]", f"{enc}: {format_operand(rhs)}"]
    return "\n".join(lines) + "\n"


def _to_explicit(v, cap):
    return cs_to_fdds(v, cap) if isinstance(v, CycleSum) else v


def _to_compact(v):
    if isinstance(v, CycleSum):
        return v
    cs = fdds_to_cs(v)
    if cs is None:
        raise Precondition("operand has transient states and no compact form")
    return cs


def resolve_mode(mode: str, values) -> str:
    if mode != "auto":
        return mode
    if all(isinstance(v, CycleSum) for v in values):
        return "compact"
    if any(isinstance(v, Fdds) and not v.is_sum_of_cycles for v in values):
        return "general"
    return "explicit"


# ---------------------------------------------------------------------------
# commands


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e


def cmd_solve(args, out) -> int:
    eq = parse_equation(_read(args.equation))
    values = [*eq.coeffs.values(), eq.rhs]
    mode = resolve_mode(args.mode, values)
    linear = set(eq.coeffs) == {1}
    if mode == "compact":
        coeffs = {d: _to_compact(c) for d, c in eq.coeffs.items()}
        b = _to_compact(eq.rhs)
        if linear:
            res = solve_linear_compact(coeffs[1], b)
        else:
            res = solve_poly_compact(Poly(coeffs, CycleSum), b)
        trace = res.trace
    else:
        coeffs = {d: _to_explicit(c, args.cap) for d, c in eq.coeffs.items()}
        b = _to_explicit(eq.rhs, args.cap)
        if mode == "general":
            res = solve_poly_general(Poly(coeffs, Fdds), b)
            trace = ()
        elif linear:
            res = solve_linear_explicit(coeffs[1], b)
            trace = res.trace
        else:
            res = solve_poly_explicit(Poly(coeffs, Fdds), b)
            trace = res.trace
    if res.reason is Reason.PRECONDITION:
        print(f"precondition failed: {res.message}", file=out)
        return EXIT_PRECONDITION
    if not res.solved:
        print("no solution", file=out)
        if args.trace and trace:
            print(format_trace(trace), file=out)
        return EXIT_NO_SOLUTION
    solution = res.solution
    if isinstance(solution, Fdds) and all(isinstance(v, CycleSum) for v in values):
        # answer in the encoding the equation was written in
        compact = fdds_to_cs(solution)
        solution = solution if compact is None else compact
    print(format_operand(solution), file=out)
    if args.trace:
        print(format_trace(trace), file=out)
    return EXIT_OK


def _two_operands(args):
    a = parse_operand(_read(args.a), _forced(args.mode))
    b = parse_operand(_read(args.b), _forced(args.mode))
    if type(a) is not type(b):
        # only reachable in auto mode; a forced encoding parses both alike
        a, b = _to_explicit(a, args.cap), _to_explicit(b, args.cap)
    return a, b


def _forced(mode: str) -> str | None:
    return {"compact": "compact", "explicit": "explicit", "general": "explicit"}.get(mode)


def cmd_mul(args, out) -> int:
    a, b = _two_operands(args)
    if isinstance(a, CycleSum):
        print(format_cyclesum(a * b), file=out)
    else:
        print(format_fdds(product(a, b, cap=args.cap)), file=out)
    return EXIT_OK


def cmd_add(args, out) -> int:
    a, b = _two_operands(args)
    print(format_operand(a + b), file=out)
    return EXIT_OK


def cmd_iso(args, out) -> int:
    a, b = _two_operands(args)
    same = a == b if isinstance(a, CycleSum) else a.canon == b.canon
    print("isomorphic" if same else "not-isomorphic", file=out)
    return EXIT_OK


def cmd_canon(args, out) -> int:
    a = parse_operand(_read(args.a), _forced(args.mode))
    print(format_operand(a if isinstance(a, CycleSum) else a.canonical()), file=out)
    return EXIT_OK


def cmd_unroll(args, out) -> int:
    a = _to_explicit(parse_operand(_read(args.a), _forced(args.mode)), args.cap)
    depth = args.depth if args.depth is not None else len(a)
    for k, t in enumerate(unroll(a, depth)):
        sizes = " ".join(map(str, t.level_sizes))
        print(f"tree {k}\tperiod {t.period}\t{sizes}", file=out)
    return EXIT_OK


def cmd_convert(args, out) -> int:
    a = parse_operand(_read(args.a), _forced(args.mode))
    target = args.to or ("explicit" if isinstance(a, CycleSum) else "compact")
    if target == "compact":
        print(format_cyclesum(_to_compact(a)), file=out)
    else:
        print(format_fdds(_to_explicit(a, args.cap)), file=out)
    return EXIT_OK


def cmd_gen(args, out) -> int:
    rng = random.Random(args.seed)
    n = args.size
    kind = args.kind
    if kind == "fdds":
        print(format_fdds(random_fdds(rng, n)), file=out)
    elif kind == "cyclesum":
        print(format_cyclesum(random_cyclesum(rng, n)), file=out)
    elif kind == "pseudo-cancelable":
        print(format_cyclesum(random_pseudo_cancelable(rng, n)), file=out)
    else:
        if kind == "linear":
            inst = linear_cycle_instance(rng, n, n)
        elif kind == "poly":
            inst = poly_cycle_instance(rng, x_states=n)
        else:
            inst = general_instance(rng, x_states=n)
        print(f"# ground truth: {format_operand(inst.x0)}", file=out)
        out.write(format_equation(inst.poly, inst.rhs))
    return EXIT_OK


def bench_rows(kind: str, sizes, seed: int, repeats: int = 3) -> list[tuple[int, float]]:
    """Best-of-``repeats`` wall time of one solve per size."""
    rng = random.Random(seed)
    rows = []
    for n in sizes:
        if kind == "explicit":
            a = CycleSum(((2, 1), (4, 1)))
            x = random_cyclesum(rng, n // a.size, n // a.size)
            fa, fb = cs_to_fdds(a, None), cs_to_fdds(a * x, None)

            def run():
                res = solve_linear_explicit_fast(fa, fb)
                assert res.solved
        else:
            # n distinct lengths, all multiples of the shortest coefficient cycle
            a = CycleSum(((2, 1), (6, 1)))
            x = CycleSum(tuple((l, 1) for l in range(1, n + 1)))
            b = a * x

            def run():
                res = solve_linear_compact(a, b)
                assert res.solved
        best = float("inf")
        for _ in range(repeats):
            t = time.perf_counter()
            run()
            best = min(best, time.perf_counter() - t)
        rows.append((n, best))
    return rows


def fit_exponent(rows) -> float:
    xs = np.log([n for n, _ in rows])
    ys = np.log([max(t, 1e-9) for _, t in rows])
    return float(np.polyfit(xs, ys, 1)[0])


def cmd_bench(args, out) -> int:
    if args.sizes:
        sizes = [int(s) for s in args.sizes.split(",")]
    elif args.kind == "explicit":
        sizes = [10**3, 10**4, 10**5, 10**6]
    else:
        sizes = [10, 30, 100, 300, 1000]
    rows = bench_rows(args.kind, sizes, args.seed, args.repeats)
    print("size\tseconds", file=out)
    for n, t in rows:
        print(f"{n}\t{t:.6f}", file=out)
    print(f"fitted exponent\t{fit_exponent(rows):.3f}", file=out)
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    eq = parse_equation(_read(args.equation))
    coeffs = {d: _to_explicit(c, args.cap) for d, c in eq.coeffs.items()}
    b = _to_explicit(eq.rhs, args.cap)
    try:
        sols = brute_force_solve(Poly(coeffs, Fdds), b, args.max_states)
    except EnumerationBudgetExceeded as e:
        print(f"precondition failed: {e}", file=out)
        return EXIT_PRECONDITION
    for x in sols:
        print(format_fdds(x), file=out)
    if not sols:
        print("no solution", file=out)
        return EXIT_NO_SOLUTION
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["explicit", "compact", "general", "auto"], default="auto")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-states", type=int, default=8)
    common.add_argument("--cap", type=int, default=DEFAULT_SIZE_CAP)
    common.add_argument("--depth", type=int, default=None)
    common.add_argument("--trace", action="store_true")
    common.add_argument("--out", default="-", help="output file (default: stdout)")

    parser = argparse.ArgumentParser(prog="fdds", description="Finite dynamical systems: algebra and equation solving.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="solve an equation file")
    p.add_argument("equation")
    p.set_defaults(func=cmd_solve)

    for name, func, doc in (
        ("mul", cmd_mul, "product of two systems"),
        ("add", cmd_add, "sum of two systems"),
        ("iso", cmd_iso, "isomorphism test"),
    ):
        p = sub.add_parser(name, parents=[common], help=doc)
        p.add_argument("a")
        p.add_argument("b")
        p.set_defaults(func=func)

    p = sub.add_parser("canon", parents=[common], help="canonical relabelling")
    p.add_argument("a")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("unroll", parents=[common], help="level sizes of the truncated unroll trees")
    p.add_argument("a")
    p.set_defaults(func=cmd_unroll)

    p = sub.add_parser("convert", parents=[common], help="switch between explicit and compact text")
    p.add_argument("a")
    p.add_argument("--to", choices=["explicit", "compact"])
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("gen", parents=[common], help="random instances")
    p.add_argument("--kind", choices=["fdds", "cyclesum", "pseudo-cancelable", "linear", "poly", "general"], default="linear")
    p.add_argument("--size", type=int, default=10)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", parents=[common], help="time the linear solvers over a size sweep")
    p.add_argument("--kind", choices=["explicit", "compact"], default="explicit")
    p.add_argument("--sizes", help="comma-separated sizes")
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", parents=[common], help="all small solutions by exhaustive search")
    p.add_argument("equation")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout if args.out == "-" else open(args.out, "w")
    try:
        return args.func(args, out)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except Precondition as e:
        print(f"precondition failed: {e}", file=out)
        return EXIT_PRECONDITION
    except SizeOverflow as e:
        print(f"overflow: {e}", file=sys.stderr)
        return EXIT_OVERFLOW
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
