"""Seeded random instances: systems, cycle sums, polynomials, solvable equations.

Every generator takes a :class:`random.Random`, so a seed fixes the output.
Solvable equations are built forwards (pick ``X0``, compute ``B = P(X0)``).
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .core import Fdds
from .cyclesum import CycleSum, cs_to_fdds, fdds_to_cs
from .poly import Poly


def random_fdds(rng: random.Random, n: int) -> Fdds:
    """A uniformly random map on ``n`` states."""
    return Fdds(tuple(rng.randrange(n) for _ in range(n)))


def random_connected(rng: random.Random, n: int, cycle_len: int | None = None) -> Fdds:
    """A connected system: a cycle with random trees hung on it."""
    if n < 1:
        raise ValueError("a connected system needs at least one state")
    length = cycle_len if cycle_len is not None else rng.randint(1, n)
    if not 1 <= length <= n:
        raise ValueError(f"cycle length {length} does not fit in {n} states")
    succ = [(i + 1) % length for i in range(length)]
    for i in range(length, n):
        succ.append(rng.randrange(i))
    return Fdds(tuple(succ))


def with_lengths(rng: random.Random, lengths, transients: int = 0) -> Fdds:
    """Cycles of the given lengths plus ``transients`` random tree states."""
    succ: list[int] = []
    for l in lengths:
        base = len(succ)
        succ.extend(base + (i + 1) % l for i in range(l))
    if not succ and transients:
        raise ValueError("transient states need at least one cycle")
    for _ in range(transients):
        succ.append(rng.randrange(len(succ)))
    return Fdds(tuple(succ))


def random_partition(rng: random.Random, n: int) -> list[int]:
    parts = []
    while n:
        k = rng.randint(1, n)
        parts.append(k)
        n -= k
    return parts


def random_cyclesum(rng: random.Random, max_states: int, min_states: int = 1) -> CycleSum:
    n = rng.randint(min_states, max_states)
    return CycleSum(tuple((l, 1) for l in random_partition(rng, n)))


def random_pseudo_cancelable(rng: random.Random, max_states: int) -> CycleSum:
    """A sum of cycles whose lengths are all multiples of the shortest one."""
    m = rng.randint(1, max(1, max_states // 2))
    n = rng.randint(m, max_states)
    lengths = [m]
    left = n - m
    while left >= m:
        k = m * rng.randint(1, left // m)
        lengths.append(k)
        left -= k
    return CycleSum(tuple((l, 1) for l in lengths))


def random_pseudo_cancelable_fdds(rng: random.Random, max_states: int, transient_share: float = 0.5) -> Fdds:
    """Pseudo-cancelable system with random transient trees."""
    total = rng.randint(1, max_states)
    cyc = rng.randint(1, total) if rng.random() < transient_share else total
    base = random_pseudo_cancelable(rng, cyc)
    lengths = [l for l, n in base.entries for _ in range(n)]
    return with_lengths(rng, lengths, total - sum(lengths))


def random_poly(
    rng: random.Random,
    degree: int = 2,
    coeff_states: int = 6,
    terms: int = 2,
    transients: bool = True,
    constant: bool = True,
) -> Poly:
    """A pseudo-injective polynomial with graph coefficients."""
    degrees = sorted(rng.sample(range(1, degree + 1), min(terms, degree)))
    m = rng.randint(1, max(1, coeff_states // 3))
    coeffs: dict[int, Fdds] = {}
    for d in degrees:
        budget = rng.randint(m, coeff_states)
        lengths = [m]
        while rng.random() < 0.5 and budget - sum(lengths) >= m:
            lengths.append(m * rng.randint(1, (budget - sum(lengths)) // m))
        extra = rng.randint(0, budget - sum(lengths)) if transients else 0
        coeffs[d] = with_lengths(rng, lengths, extra)
    if constant and rng.random() < 0.5:
        coeffs[0] = random_fdds(rng, rng.randint(1, 3))
    return Poly(coeffs, Fdds)


def random_cycle_poly(rng: random.Random, degree: int = 2, coeff_states: int = 6, terms: int = 2) -> Poly:
    """A pseudo-injective polynomial with compact coefficients."""
    p = random_poly(rng, degree, coeff_states, terms, transients=False, constant=False)
    coeffs = {d: _compact(c) for d, c in p}
    if rng.random() < 0.5:
        coeffs[0] = random_cyclesum(rng, 3)
    return Poly(coeffs, CycleSum)


def _compact(a: Fdds) -> CycleSum:
    cs = fdds_to_cs(a)
    assert cs is not None
    return cs


@dataclass(frozen=True)
class Instance:
    poly: Poly
    x0: Fdds | CycleSum
    rhs: Fdds | CycleSum


def linear_cycle_instance(rng: random.Random, a_states: int = 30, x_states: int = 30) -> Instance:
    """``A X = B`` over sums of cycles with ``A`` pseudo-cancelable."""
    a = random_pseudo_cancelable(rng, a_states)
    x0 = random_cyclesum(rng, x_states)
    return Instance(Poly({1: a}, CycleSum), x0, a * x0)


def poly_cycle_instance(rng: random.Random, degree: int = 2, coeff_states: int = 6, x_states: int = 8) -> Instance:
    p = random_cycle_poly(rng, degree, coeff_states)
    x0 = random_cyclesum(rng, x_states)
    return Instance(p, x0, p.evaluate(x0))


def general_instance(rng: random.Random, degree: int = 2, coeff_states: int = 6, x_states: int = 10) -> Instance:
    """``P(X) = B`` with transients in ``X0`` and in the coefficients."""
    p = random_poly(rng, degree, coeff_states)
    x0 = random_fdds(rng, rng.randint(1, x_states))
    return Instance(p, x0, p.evaluate(x0))


def as_explicit(inst: Instance) -> Instance:
    """Expand a compact instance into graphs."""
    if inst.poly.kind is Fdds:
        return inst
    p = inst.poly.map(lambda c: cs_to_fdds(c))
    return Instance(Poly(dict(p.terms), Fdds), cs_to_fdds(inst.x0), cs_to_fdds(inst.rhs))
