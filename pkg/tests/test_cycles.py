import math
import random
import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import cycle_sums, pseudo_cancelable
from fdds.core import Fdds
from fdds.cycles import (
    Reason,
    SolveStep,
    format_trace,
    rewrite_solution,
    solve_linear_compact,
    solve_linear_explicit,
    solve_linear_explicit_fast,
    solve_poly_compact,
    solve_poly_explicit,
)
from fdds.cyclesum import CycleSum, anti_lcm, cs_to_fdds, fdds_to_cs, parse_cyclesum
from fdds.enumerate import brute_force_solve_cycles, cycle_sums as all_cycle_sums, extreme_solutions
from fdds.generate import linear_cycle_instance, poly_cycle_instance
from fdds.poly import Poly

P = parse_cyclesum
E = lambda text: cs_to_fdds(P(text))
RHS = "16x2+4x4+18x6+1x12"
POLY = Poly({2: P("1x2"), 1: P("1x4+1x6")})
POLY_E = POLY.map(cs_to_fdds)

# rows of the worked run: B, Y, C, P(Y+C), P(Y), delta
WORKED = [
    ("16x2+4x4+18x6+1x12", "0", "1x1", "1x2+1x4+1x6", "0", "1x2+1x4+1x6"),
    ("15x2+3x4+17x6+1x12", "1x1", "1x1", "4x2+2x4+2x6", "1x2+1x4+1x6", "3x2+1x4+1x6"),
    ("12x2+2x4+16x6+1x12", "2x1", "1x1", "9x2+3x4+3x6", "4x2+2x4+2x6", "5x2+1x4+1x6"),
    ("7x2+1x4+15x6+1x12", "3x1", "1x1", "16x2+4x4+4x6", "9x2+3x4+3x6", "7x2+1x4+1x6"),
    ("14x6+1x12", "4x1", "1x3", "16x2+4x4+18x6+1x12", "16x2+4x4+4x6", "14x6+1x12"),
]


def cs(x):
    return x if isinstance(x, CycleSum) else fdds_to_cs(x)


class TestLinearExplicit:
    def test_max_components(self):
        out = solve_linear_explicit(E("1x2"), E("2x2"))
        assert out.solved and cs(out.solution) == P("2x1")

    @given(cycle_sums(max_len=5, max_count=2, min_terms=1))
    def test_identity_coefficient(self, b):
        out = solve_linear_explicit(Fdds.one(), cs_to_fdds(b))
        assert cs(out.solution) == b

    def test_two_cycle_coefficient(self):
        a = P("1x2+1x4")
        b = a * P("1x1+1x3")
        assert b == P("1x2+1x4+1x6+1x12")
        out = solve_linear_explicit(cs_to_fdds(a), cs_to_fdds(b))
        assert cs(out.solution) == P("1x1+1x3")
        assert brute_force_solve_cycles(Poly({1: a}), b, 4) == [P("1x1+1x3")]

    def test_preconditions(self):
        assert solve_linear_explicit(E("1x2+1x3"), E("1x6")).reason is Reason.PRECONDITION
        assert solve_linear_explicit(Fdds((0, 0)), E("2x1")).reason is Reason.PRECONDITION
        assert solve_linear_explicit(Fdds.zero(), E("1x1")).reason is Reason.PRECONDITION

    def test_no_solution(self):
        assert solve_linear_explicit(E("1x2"), E("1x3")).reason is Reason.NO_SOLUTION
        assert solve_linear_explicit(E("1x2"), E("1x4")).reason is Reason.NO_SOLUTION
        assert solve_linear_explicit(E("1x4"), E("1x2+1x2")).reason is Reason.NO_SOLUTION

    def test_zero_rhs(self):
        out = solve_linear_explicit(E("1x2"), Fdds.zero())
        assert out.solved and len(out.solution) == 0


class TestPolyExplicit:
    def test_worked_run(self):
        t = time.perf_counter()
        out = solve_poly_explicit(POLY_E, E(RHS))
        assert time.perf_counter() - t < 1
        assert cs(out.solution) == P("4x1+1x3")
        rows = [s.row() for s in out.trace]
        assert rows == WORKED

    def test_trace_text(self):
        out = solve_poly_explicit(POLY_E, E(RHS))
        lines = format_trace(out.trace).splitlines()
        assert lines[0].split("\t") == list(SolveStep.FIELDS)
        assert [tuple(l.split("\t")) for l in lines[1:]] == WORKED

    @given(cycle_sums(max_len=5, max_count=2, min_terms=1))
    def test_identity_polynomial(self, b):
        out = solve_poly_explicit(Poly({1: Fdds.one()}), cs_to_fdds(b))
        assert cs(out.solution) == b

    def test_missing_cycle(self):
        b = P(RHS).minus(P("1x6"))
        out = solve_poly_explicit(POLY_E, cs_to_fdds(b))
        assert out.reason is Reason.NO_SOLUTION
        assert brute_force_solve_cycles(POLY, b, 12) == []

    def test_preconditions(self):
        assert solve_poly_explicit(Poly({0: E("1x1")}), E("1x1")).reason is Reason.PRECONDITION
        bad = Poly({1: E("1x2"), 2: E("1x3")})
        assert solve_poly_explicit(bad, E("1x6")).reason is Reason.PRECONDITION
        assert solve_poly_explicit(POLY, P(RHS)).reason is Reason.PRECONDITION

    def test_constant_term(self):
        p = Poly({0: E("1x5"), 1: E("1x2")})
        out = solve_poly_explicit(p, E("1x5+2x2"))
        assert cs(out.solution) == P("2x1")
        assert solve_poly_explicit(p, E("2x2")).reason is Reason.NO_SOLUTION
        out = solve_poly_explicit(p, E("1x5"))
        assert out.solved and len(out.solution) == 0

    def test_overflow_is_no_solution(self):
        p = Poly({3: E("1x1")})
        assert solve_poly_explicit(p, E("2x1")).reason is Reason.NO_SOLUTION


class TestCompact:
    def test_linear_examples(self):
        assert solve_linear_compact(P("1x2"), P("2x2")).solution == P("2x1")
        b = P("3x1+2x7")
        assert solve_linear_compact(P("1x1"), b).solution == b

    def test_huge_counts(self):
        a = P("1x2+1x4")
        x = CycleSum(((1, 10**30), (3, 10**30)))
        out = solve_linear_compact(a, a * x)
        assert out.solution == x

    def test_worked_run(self):
        out = solve_poly_compact(POLY, P(RHS))
        assert out.solution == P("4x1+1x3")
        assert [s.c_chosen for s in out.trace] == [P("4x1"), P("1x3")]

    def test_identity_at_scale(self):
        b = CycleSum(((7, 10**50),))
        assert solve_poly_compact(Poly({1: CycleSum.one()}), b).solution == b

    def test_no_solution(self):
        b = P(RHS).minus(P("1x6"))
        assert solve_poly_compact(POLY, b).reason is Reason.NO_SOLUTION
        assert solve_linear_compact(P("1x2"), P("1x3")).reason is Reason.NO_SOLUTION
        assert solve_linear_compact(P("2x2"), P("3x2")).reason is Reason.NO_SOLUTION
        assert solve_linear_compact(P("1x2+1x4"), P("3x2")).reason is Reason.NO_SOLUTION

    def test_preconditions(self):
        assert solve_linear_compact(P("1x2+1x3"), P("1x6")).reason is Reason.PRECONDITION
        assert solve_linear_compact(CycleSum(), P("1x6")).reason is Reason.PRECONDITION
        assert solve_poly_compact(POLY_E, E(RHS)).reason is Reason.PRECONDITION

    def test_rest_empty_after_constant(self):
        p = Poly({0: P("1x3"), 2: P("1x1")})
        out = solve_poly_compact(p, P("1x3"))
        assert out.solved and out.solution == CycleSum()

    def test_fast_variant(self):
        rng = random.Random(11)
        for n in (10**2, 10**3, 10**4):
            a = P("1x2+1x6")
            x = CycleSum(tuple((rng.randint(1, 40), 1) for _ in range(n // 200 + 1)))
            fa, fb = cs_to_fdds(a), cs_to_fdds(a * x)
            slow, fast = solve_linear_explicit(fa, fb), solve_linear_explicit_fast(fa, fb)
            assert slow.solved and fast.solved
            assert slow.solution.canon == fast.solution.canon


class TestRewrite:
    def test_worked_family(self):
        y = P("2x2+1x3")
        one = rewrite_solution(y, 2, 2, 1)
        assert one == P("2x1+1x2+1x3")
        assert rewrite_solution(y, 2, 2, 1, copies=None) == P("4x1+1x3")
        for sol in (y, one, P("4x1+1x3")):
            assert POLY(sol) == P(RHS)

    def test_identity(self):
        assert rewrite_solution(P("2x2+1x3"), 2, 1, 1) == P("2x2+1x3")

    def test_errors(self):
        with pytest.raises(ValueError):
            rewrite_solution(P("1x3"), 2, 2, 1)
        with pytest.raises(ValueError):
            rewrite_solution(P("1x6"), 6, 4, 1)

    def test_rewrites_of_oracle_solutions(self):
        # every admissible rewrite of a solution is again a solution
        rng = random.Random(5)
        checked = 0
        for _ in range(40):
            inst = poly_cycle_instance(rng, coeff_states=6, x_states=6)
            p = inst.poly
            m_a = p.nonconstant_sum().min_length
            for y in brute_force_solve_cycles(p, inst.rhs, 6):
                for x, _ in y.entries:
                    for k in range(1, math.gcd(x, m_a) + 1):
                        if math.gcd(x, m_a) % k or math.gcd(k, x // k) != 1:
                            continue
                        for d in range(1, k + 1):
                            if k % d == 0:
                                z = rewrite_solution(y, k, d, x // k)
                                assert p(z) == inst.rhs
                                checked += 1
        assert checked > 40


def _pseudo_cancelable_sums(max_states):
    for n in range(1, max_states + 1):
        for a in all_cycle_sums(n):
            if a.is_pseudo_cancelable:
                yield a


def test_completeness_at_desk_scale():
    # every pseudo-cancelable A (<= 8 states) and every B (<= 12 states)
    bs = [b for n in range(1, 13) for b in all_cycle_sums(n)]
    for a in _pseudo_cancelable_sums(8):
        for b in bs:
            if b.size % a.size:
                continue
            sols = brute_force_solve_cycles(Poly({1: a}), b, b.size // a.size)
            out = solve_linear_compact(a, b)
            assert out.solved == bool(sols), (a, b)
            if sols:
                assert out.solution == extreme_solutions(sols)[0]


def test_binary_search_monotone():
    rng = random.Random(2)
    for _ in range(30):
        inst = poly_cycle_instance(rng)
        p = inst.poly.without_constant()
        b = inst.rhs.minus(inst.poly.constant)
        if not b:
            continue
        q, _ = b.entries[0]
        m_a = p.nonconstant_sum().min_length
        if q % m_a:
            continue
        l = anti_lcm(q, m_a)
        prev = None
        for d in range(1, 7):
            delta = p(CycleSum.cycle(l, d))
            if prev is not None:
                assert prev.issubset(delta)
                assert delta.count(q) > prev.count(q)
            prev = delta


@given(pseudo_cancelable(), cycle_sums(max_len=10, max_count=3, min_terms=1))
def test_explicit_compact_agree(a, x):
    b = a * x
    ex = solve_linear_explicit(cs_to_fdds(a), cs_to_fdds(b))
    co = solve_linear_compact(a, b)
    assert ex.solved and co.solved
    assert cs(ex.solution) == co.solution
    assert a * co.solution == b


@pytest.mark.parametrize("seed", range(5))
def test_poly_solvers_agree(seed):
    rng = random.Random(seed)
    for _ in range(20):
        inst = poly_cycle_instance(rng)
        ex = solve_poly_explicit(inst.poly.map(cs_to_fdds), cs_to_fdds(inst.rhs))
        co = solve_poly_compact(inst.poly, inst.rhs)
        assert ex.solved and co.solved
        assert cs(ex.solution) == co.solution
        assert inst.poly(co.solution) == inst.rhs


def test_linear_instances_round_trip():
    rng = random.Random(9)
    for _ in range(30):
        inst = linear_cycle_instance(rng, 12, 12)
        a = inst.poly[1]
        out = solve_linear_compact(a, inst.rhs)
        assert out.solved and a * out.solution == inst.rhs
        assert out.solution.n_cycles >= inst.x0.n_cycles
