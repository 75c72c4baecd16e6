import math
import random

import pytest
from hypothesis import given

from conftest import connected_systems, systems
from fdds.core import Fdds, product
from fdds.cycles import Reason
from fdds.cyclesum import cs_to_fdds, fdds_to_cs, parse_cyclesum
from fdds.enumerate import all_fdds, brute_force_solve, extreme_solutions
from fdds.general import (
    candidate_cycle_length,
    divide,
    iroot,
    min_tree_divide,
    solve_poly_general,
)
from fdds.generate import general_instance, random_poly
from fdds.poly import Poly
from fdds.unroll import bare_spine, deroll, tree_key, tree_power, tree_product, unroll

E = lambda text: cs_to_fdds(parse_cyclesum(text))
TAIL = Fdds((0, 0))


def test_candidate_length():
    assert candidate_cycle_length(2, 2, 1) == 1
    assert candidate_cycle_length(12, 252, 2) == 126
    assert candidate_cycle_length(2, 4, 1) == 4
    with pytest.raises(ValueError):
        candidate_cycle_length(3, 4, 1)
    with pytest.raises(ValueError):
        candidate_cycle_length(2, 4, 0)


def test_iroot():
    assert iroot(27, 3) == 3
    assert iroot(28, 3) is None
    assert iroot(10**40, 2) == 10**20
    assert iroot(5, 1) == 5


class TestDivide:
    def test_cycles_only(self):
        d = 5
        x = min_tree_divide(Poly({2: E("1x2")}), E("2x2"), d)
        assert x is not None
        tree, degree = x
        assert tree == bare_spine(d) and tree.period == 1 and degree == 2

    def test_tail_times_cycle(self):
        # the tail tree is unchanged by a cycle, so the quotient is a bare spine
        b = product(TAIL, Fdds.cycle(3))
        tree, degree = min_tree_divide(Poly({1: TAIL}), b, 6)
        assert degree == 1
        assert tree == bare_spine(6) and tree.period == 1

    def test_tail_by_spine(self):
        b = product(TAIL, TAIL)
        tree, _ = min_tree_divide(Poly({1: TAIL}), b, 6)
        assert tree == unroll(TAIL, 6)[0]

    @given(connected_systems(max_states=5), connected_systems(max_states=4))
    def test_round_trip(self, c, a):
        # t_a times any tree of c divides back to that tree
        depth = len(c) + len(a) + c.min_length
        t_a = min(unroll(a, depth), key=tree_key)
        for t in unroll(c, depth):
            qs = divide(t_a, tree_product(t_a, t), 1)
            assert t.root in {x.root for x in qs}

    @given(connected_systems(max_states=4), connected_systems(max_states=3))
    def test_square_round_trip(self, c, a):
        depth = len(c) + len(a) + 2
        t_a, t = unroll(a, depth)[0], unroll(c, depth)[0]
        qs = divide(t_a, tree_product(t_a, tree_power(t, 2)), 2)
        assert t.root in {x.root for x in qs}

    def test_incompatible(self):
        d = 4
        t_a = unroll(Fdds.cycle(2), d)[0]
        t_b = unroll(TAIL, d)[0]
        assert divide(t_a, t_b, 2) == []


class TestSolve:
    def test_worked_instance(self):
        p = Poly({2: E("1x2"), 1: E("1x4+1x6")})
        out = solve_poly_general(p, E("16x2+4x4+18x6+1x12"))
        assert out.solved and out.verified
        assert fdds_to_cs(out.solution) == parse_cyclesum("4x1+1x3")
        assert len(out.components_added) == 5

    @given(systems(min_states=1, max_states=8))
    def test_identity(self, b):
        out = solve_poly_general(Poly({1: Fdds.one()}), b)
        assert out.verified and out.solution.canon == b.canon

    def test_tail_instance(self):
        out = solve_poly_general(Poly({1: TAIL}), product(TAIL, Fdds.cycle(3)))
        assert out.solution.canon == Fdds.cycle(3).canon

    def test_preconditions(self):
        bad = Poly({1: E("1x2"), 2: E("1x3")})
        assert solve_poly_general(bad, E("1x6")).reason is Reason.PRECONDITION
        assert solve_poly_general(Poly({0: TAIL}), TAIL).reason is Reason.PRECONDITION

    def test_no_solution(self):
        out = solve_poly_general(Poly({1: E("1x2")}), TAIL)
        assert out.reason is Reason.NO_SOLUTION and out.solution is None and not out.verified
        assert solve_poly_general(Poly({0: E("1x3"), 1: TAIL}), TAIL).reason is Reason.NO_SOLUTION

    @pytest.mark.parametrize("seed", range(4))
    def test_generated(self, seed):
        rng = random.Random(100 + seed)
        for _ in range(25):
            inst = general_instance(rng)
            out = solve_poly_general(inst.poly, inst.rhs)
            assert out.verified
            assert inst.poly(out.solution).canon == inst.rhs.canon
            assert len(out.solution.components) >= len(inst.x0.components)


SUITE = [
    Poly({1: TAIL}),
    Poly({1: Fdds((1, 0))}),
    Poly({2: Fdds.one()}),
    Poly({1: TAIL, 2: Fdds.one()}),
    Poly({0: Fdds.one(), 1: Fdds((1, 0, 0))}),
    Poly({1: Fdds((1, 0, 3, 2))}),
]


@pytest.mark.parametrize("k", range(len(SUITE)))
def test_oracle_agreement(k):
    # every right-hand side with at most 8 states
    p = SUITE[k]
    for n in range(0, 9):
        for b in all_fdds(n):
            out = solve_poly_general(p, b)
            sols = brute_force_solve(p, b, 8)
            assert out.solved == bool(sols), b
            if sols:
                assert out.solution.canon == extreme_solutions(sols)[0].canon


def test_rewritten_oracle_solutions():
    # a component with cycle k*l (k | m(A), gcd(k, l) = 1, period | l) may be
    # replaced by d copies of the same trees on a cycle of (k/d)*l
    rng = random.Random(1)
    checked = 0
    for _ in range(60):
        p = random_poly(rng, 2, 6)
        m_a = p.nonconstant_sum().min_length
        for n in range(1, 5):
            for x in all_fdds(n):
                b = p(x)
                sols = None
                for comp in x.components:
                    c = comp.cycle_len
                    t = unroll(comp.as_fdds(), len(comp) + c)[0]
                    for k in range(2, c + 1):
                        if c % k or m_a % k or math.gcd(k, c // k) != 1 or (c // k) % t.period:
                            continue
                        if sols is None:
                            sols = {s.canon for s in brute_force_solve(p, b, n)}
                        rest = [o.as_fdds() for o in x.components if o is not comp]
                        for d in range(2, k + 1):
                            if k % d == 0:
                                y = Fdds.disjoint_sum(rest + [deroll(t, (k // d) * (c // k))] * d)
                                assert y.canon in sols
                                checked += 1
    assert checked > 20
