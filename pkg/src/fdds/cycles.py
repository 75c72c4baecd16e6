"""Solvers for ``A X = B`` and ``P(X) = B`` over sums of cycles.

All solvers are greedy: each step adds cycles of the shortest length
compatible with the current minimum cycle length of the right-hand side,
which yields the solution with the most connected components.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import Fdds, SizeOverflow, product, sub_components
from .cyclesum import CycleSum, anti_lcm, cs_to_fdds, fdds_to_cs, format_cyclesum
from .poly import Poly


class Reason(str, enum.Enum):
    SOLVED = "solved"
    NO_SOLUTION = "no-solution"
    PRECONDITION = "precondition-failed"


@dataclass(frozen=True)
class SolveStep:
    """One greedy iteration, in the column order of a run table."""

    b_remaining: CycleSum
    y_partial: CycleSum
    c_chosen: CycleSum
    p_of_y_plus_c: CycleSum
    p_of_y: CycleSum
    delta: CycleSum

    FIELDS = ("B_remaining", "Y", "C", "P(Y+C)", "P(Y)", "delta")

    def row(self) -> tuple[str, ...]:
        return tuple(
            format_cyclesum(v)
            for v in (
                self.b_remaining,
                self.y_partial,
                self.c_chosen,
                self.p_of_y_plus_c,
                self.p_of_y,
                self.delta,
            )
        )


@dataclass(frozen=True)
class SolveOutcome:
    solution: Fdds | CycleSum | None
    trace: tuple[SolveStep, ...] = ()
    reason: Reason = Reason.SOLVED
    message: str = ""

    @property
    def solved(self) -> bool:
        return self.reason is Reason.SOLVED


def format_trace(trace) -> str:
    lines = ["\t".join(SolveStep.FIELDS)]
    lines.extend("\t".join(step.row()) for step in trace)
    return "\n".join(lines)


def _fail(reason: Reason, message: str, trace=()) -> SolveOutcome:
    return SolveOutcome(None, tuple(trace), reason, message)


def _cs(a: Fdds) -> CycleSum:
    cs = fdds_to_cs(a)
    assert cs is not None
    return cs


# ---------------------------------------------------------------------------
# explicit encoding


def solve_linear_explicit(a: Fdds, b: Fdds) -> SolveOutcome:
    """``a X = b`` for sums of cycles given as graphs, ``a`` pseudo-cancelable."""
    if not a or not a.is_sum_of_cycles or not b.is_sum_of_cycles:
        return _fail(Reason.PRECONDITION, "both sides must be non-empty sums of cycles")
    if not a.is_pseudo_cancelable:
        return _fail(Reason.PRECONDITION, "coefficient is not pseudo-cancelable")
    if len(b) % len(a):
        return _fail(Reason.NO_SOLUTION, "|a| does not divide |b|")
    m_a = a.min_length
    x_parts: list[Fdds] = []
    ax = Fdds.zero()
    rest = b
    trace = []
    while rest:
        if len(a) > len(rest):
            return _fail(Reason.NO_SOLUTION, "coefficient larger than remainder", trace)
        q = rest.min_length
        if q % m_a:
            return _fail(Reason.NO_SOLUTION, f"m(a)={m_a} does not divide {q}", trace)
        c = Fdds.cycle(anti_lcm(q, m_a))
        ac = product(a, c)
        left = sub_components(rest, ac)
        x_cs = _cs(Fdds.disjoint_sum(x_parts))
        trace.append(SolveStep(_cs(rest), x_cs, _cs(c), _cs(ax + ac), _cs(ax), _cs(ac)))
        if left is None:
            return _fail(Reason.NO_SOLUTION, "a*C is not contained in the remainder", trace)
        x_parts.append(c)
        ax = ax + ac
        rest = left
    return SolveOutcome(Fdds.disjoint_sum(x_parts), tuple(trace))


def solve_poly_explicit(p: Poly, b: Fdds) -> SolveOutcome:
    """``P(Y) = b`` with sum-of-cycles coefficients given as graphs."""
    if p.kind is not Fdds:
        return _fail(Reason.PRECONDITION, "explicit solver needs graph coefficients")
    if not p.nonconstant():
        return _fail(Reason.PRECONDITION, "polynomial has no non-constant term")
    if not b.is_sum_of_cycles or not all(c.is_sum_of_cycles for _, c in p):
        return _fail(Reason.PRECONDITION, "coefficients and right-hand side must be sums of cycles")
    if not p.is_pseudo_injective:
        return _fail(Reason.PRECONDITION, "polynomial is not pseudo-injective")
    rest = sub_components(b, p.constant)
    if rest is None:
        return _fail(Reason.NO_SOLUTION, "constant term is not contained in b")
    q_poly = p.without_constant()
    m_a = q_poly.nonconstant_sum().min_length
    cap = len(rest)
    y = Fdds.zero()
    p_y = Fdds.zero()
    trace = []
    while rest:
        q = rest.min_length
        if q % m_a:
            return _fail(Reason.NO_SOLUTION, f"m(A)={m_a} does not divide {q}", trace)
        c = Fdds.cycle(anti_lcm(q, m_a))
        try:
            p_yc = q_poly.evaluate(y + c, cap)
        except SizeOverflow:
            return _fail(Reason.NO_SOLUTION, "P(Y+C) exceeds |B|", trace)
        delta = sub_components(p_yc, p_y)
        assert delta is not None, "P(Y) must be contained in P(Y+C)"
        left = sub_components(rest, delta)
        trace.append(SolveStep(_cs(rest), _cs(y), _cs(c), _cs(p_yc), _cs(p_y), _cs(delta)))
        if left is None:
            return _fail(Reason.NO_SOLUTION, "P(Y+C)-P(Y) is not contained in the remainder", trace)
        rest, y, p_y = left, y + c, p_yc
    return SolveOutcome(y, tuple(trace))


# ---------------------------------------------------------------------------
# compact encoding


def solve_linear_compact(a: CycleSum, b: CycleSum) -> SolveOutcome:
    """``a X = b`` on ``(length, count)`` arrays, whole batches of cycles per step."""
    if not a:
        return _fail(Reason.PRECONDITION, "coefficient is empty")
    if not a.is_pseudo_cancelable:
        return _fail(Reason.PRECONDITION, "coefficient is not pseudo-cancelable")
    if b.size % a.size:
        return _fail(Reason.NO_SOLUTION, "|a| does not divide |b|")
    m_a = a.min_length
    x = CycleSum()
    ax = CycleSum()
    rest = b
    trace = []
    while rest:
        if a.size > rest.size:
            return _fail(Reason.NO_SOLUTION, "coefficient larger than remainder", trace)
        q, nq = rest.entries[0]
        if q % m_a:
            return _fail(Reason.NO_SOLUTION, f"m(a)={m_a} does not divide {q}", trace)
        p = anti_lcm(q, m_a)
        d = (a * CycleSum.cycle(p)).count(q)
        if d == 0 or nq % d:
            return _fail(Reason.NO_SOLUTION, f"{nq} cycles of length {q} not divisible by {d}", trace)
        s = CycleSum.cycle(p, nq // d)
        a_s = a * s
        left = rest.minus(a_s)
        trace.append(SolveStep(rest, x, s, ax + a_s, ax, a_s))
        if left is None:
            return _fail(Reason.NO_SOLUTION, "a*S is not contained in the remainder", trace)
        x, ax, rest = x + s, ax + a_s, left
    return SolveOutcome(x, tuple(trace))


def solve_poly_compact(p: Poly, b: CycleSum) -> SolveOutcome:
    """``P(Y) = b`` on compact sums, binary-searching the multiplicity of each new length.

    For a fixed new cycle length ``l``, the number of minimum-length cycles
    in ``P(Y + d*C_l) - P(Y)`` strictly increases with ``d``; the step picks
    the unique ``d`` that consumes all of them.
    """
    if p.kind is not CycleSum:
        return _fail(Reason.PRECONDITION, "compact solver needs compact coefficients")
    if not p.nonconstant():
        return _fail(Reason.PRECONDITION, "polynomial has no non-constant term")
    if not p.is_pseudo_injective:
        return _fail(Reason.PRECONDITION, "polynomial is not pseudo-injective")
    rest = b.minus(p.constant)
    if rest is None:
        return _fail(Reason.NO_SOLUTION, "constant term is not contained in b")
    q_poly = p.without_constant()
    m_a = q_poly.nonconstant_sum().min_length
    cap = rest.size
    y = CycleSum()
    p_y = CycleSum()
    trace = []
    while rest:
        q, nq = rest.entries[0]
        if q % m_a:
            return _fail(Reason.NO_SOLUTION, f"m(A)={m_a} does not divide {q}", trace)
        l = anti_lcm(q, m_a)

        def attempt(d: int):
            try:
                value = q_poly.evaluate(y + CycleSum.cycle(l, d), cap)
            except SizeOverflow:
                return None
            delta = value.minus(p_y)
            assert delta is not None, "P(Y) must be contained in P(Y+dC)"
            return value, delta

        lo, hi = 1, nq
        found = None
        while lo <= hi:
            mid = (lo + hi) // 2
            got = attempt(mid)
            if got is None:
                hi = mid - 1
                continue
            consumed = got[1].count(q)
            if consumed == nq:
                found = (mid, *got)
                break
            if consumed < nq:
                lo = mid + 1
            else:
                hi = mid - 1
        if found is None:
            return _fail(Reason.NO_SOLUTION, f"no multiplicity of C_{l} consumes {nq} cycles of length {q}", trace)
        d, p_yc, delta = found
        c = CycleSum.cycle(l, d)
        left = rest.minus(delta)
        trace.append(SolveStep(rest, y, c, p_yc, p_y, delta))
        if left is None:
            return _fail(Reason.NO_SOLUTION, "P(Y+dC)-P(Y) is not contained in the remainder", trace)
        rest, y, p_y = left, y + c, p_yc
    return SolveOutcome(y, tuple(trace))


def solve_linear_explicit_fast(a: Fdds, b: Fdds) -> SolveOutcome:
    """Convert graphs to compact arrays, solve there, expand the answer."""
    ca, cb = fdds_to_cs(a), fdds_to_cs(b)
    if ca is None or cb is None or not ca:
        return _fail(Reason.PRECONDITION, "both sides must be non-empty sums of cycles")
    out = solve_linear_compact(ca, cb)
    if not out.solved:
        return out
    return SolveOutcome(cs_to_fdds(out.solution, cap=None), out.trace)


def rewrite_solution(x: CycleSum, k: int, d: int, l: int, copies: int | None = 1) -> CycleSum:
    """Replace ``C_{k*l}`` by ``d`` copies of ``C_{(k/d)*l}``.

    ``copies`` cycles are rewritten (all of them when None). Under the
    divisibility side conditions this preserves ``P(x)``.
    """
    if k < 1 or d < 1 or k % d:
        raise ValueError(f"{d} does not divide {k}")
    have = x.count(k * l)
    if copies is None:
        copies = have
    if copies < 0 or have < copies or have == 0:
        raise ValueError(f"solution lacks {copies} cycles of length {k * l}")
    out = x.minus(CycleSum.cycle(k * l, copies))
    return out + CycleSum.cycle(k // d * l, d * copies)

