"""Exhaustive enumeration of small FDDS up to isomorphism, used as an oracle.

Rooted trees are nested sorted tuples. A connected system is the
least rotation of its cycle of hung forests, and a general system is a
non-increasing multiset of connected ones. Every isomorphism class is
produced exactly once.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from .core import Fdds, SizeOverflow
from .cyclesum import CycleSum
from .poly import Poly


class EnumerationBudgetExceeded(RuntimeError):
    """The oracle would have to examine more candidates than allowed."""


class InvariantViolation(AssertionError):
    """An extreme solution is not unique."""


Tree = tuple  # tuple of child trees, sorted


@lru_cache(maxsize=None)
def rooted_trees(n: int) -> tuple[Tree, ...]:
    """All unlabelled rooted trees with ``n`` nodes."""
    if n < 1:
        return ()
    return tuple(tuple(sorted(f)) for f in forests(n - 1))


@lru_cache(maxsize=None)
def forests(n: int) -> tuple[tuple[Tree, ...], ...]:
    """All multisets of rooted trees with ``n`` nodes in total."""
    # (size, index) pairs in non-increasing order give each multiset once
    out: list[tuple[Tree, ...]] = []

    def rec(left: int, bound: tuple[int, int], acc: list[Tree]) -> None:
        if left == 0:
            out.append(tuple(acc))
            return
        for size in range(min(left, bound[0]), 0, -1):
            trees = rooted_trees(size)
            top = len(trees) - 1 if size < bound[0] else bound[1]
            for idx in range(top, -1, -1):
                acc.append(trees[idx])
                rec(left - size, (size, idx), acc)
                acc.pop()

    rec(n, (n, len(rooted_trees(n)) - 1), [])
    return tuple(out)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


@lru_cache(maxsize=None)
def connected_shapes(n: int) -> tuple[tuple[tuple[Tree, ...], ...], ...]:
    """Connected systems with ``n`` states as cycles of hung forests (least rotation)."""
    seen: set = set()
    for length in range(1, n + 1):
        for comp in _compositions(n - length, length):
            pools = [forests(k) for k in comp]
            for choice in _product(pools):
                seq = tuple(choice)
                canon = min(seq[i:] + seq[:i] for i in range(length))
                seen.add(canon)
    return tuple(sorted(seen, key=lambda s: (len(s), s)))


def _product(pools):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for tail in _product(pools[1:]):
            yield (head, *tail)


def _emit_tree(tree: Tree, parent: int, succ: list[int]) -> None:
    stack = [(tree, parent)]
    while stack:
        t, p = stack.pop()
        me = len(succ)
        succ.append(p)
        stack.extend((c, me) for c in t)


def shape_to_fdds(shapes) -> Fdds:
    """Build the successor table of a multiset of connected shapes."""
    succ: list[int] = []
    for shape in shapes:
        base = len(succ)
        length = len(shape)
        succ.extend(base + (i + 1) % length for i in range(length))
        for i, forest in enumerate(shape):
            for tree in forest:
                _emit_tree(tree, base + i, succ)
    return Fdds(tuple(succ))


def connected_fdds(n: int) -> Iterator[Fdds]:
    for shape in connected_shapes(n):
        yield shape_to_fdds([shape])


def all_fdds(n: int) -> Iterator[Fdds]:
    """Every FDDS with ``n`` states, one per isomorphism class."""
    def rec(left: int, bound: tuple[int, int], acc: list) -> Iterator[Fdds]:
        if left == 0:
            yield shape_to_fdds(acc)
            return
        for size in range(min(left, bound[0]), 0, -1):
            shapes = connected_shapes(size)
            top = len(shapes) - 1 if size < bound[0] else bound[1]
            for idx in range(top, -1, -1):
                acc.append(shapes[idx])
                yield from rec(left - size, (size, idx), acc)
                acc.pop()

    if n == 0:
        yield Fdds.zero()
        return
    yield from rec(n, (n, len(connected_shapes(n)) - 1), [])


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k, *rest)


def cycle_sums(n: int) -> Iterator[CycleSum]:
    """Every sum of cycles with ``n`` states (partitions of ``n``)."""
    for part in _partitions(n):
        yield CycleSum(tuple((l, 1) for l in part))


def _feasible_sizes(p: Poly, target: int, max_states: int) -> list[int]:
    sizes = []
    for s in range(max_states + 1):
        try:
            if p.size_at(s, target) == target:
                sizes.append(s)
        except SizeOverflow:
            break
    return sizes


def brute_force_solve(
    p: Poly, b: Fdds, max_states: int, budget: int = 200_000
) -> list[Fdds]:
    """All ``X`` with at most ``max_states`` states and ``P(X)`` isomorphic to ``b``.

    Only sizes compatible with ``|P(X)| = |b|`` are enumerated. Solutions
    come back canonically relabelled and sorted by canonical code.
    """
    if p.kind is not Fdds:
        raise TypeError("brute_force_solve needs graph coefficients")
    target = b.canon
    n_b = len(b)
    sizes = _feasible_sizes(p, n_b, max_states)
    examined = 0
    found: list[Fdds] = []
    for s in sizes:
        for x in all_fdds(s):
            examined += 1
            if examined > budget:
                raise EnumerationBudgetExceeded(f"more than {budget} candidates")
            if p.evaluate(x, n_b).canon == target:
                found.append(x.canonical())
    found.sort(key=lambda f: f.canon)
    return found


def brute_force_solve_cycles(
    p: Poly, b: CycleSum, max_states: int, budget: int = 200_000
) -> list[CycleSum]:
    """Compact counterpart: all sums of cycles ``X`` with ``P(X) = b``."""
    if p.kind is not CycleSum:
        raise TypeError("brute_force_solve_cycles needs compact coefficients")
    sizes = _feasible_sizes(p, b.size, max_states)
    examined = 0
    found = []
    for s in sizes:
        for x in cycle_sums(s):
            examined += 1
            if examined > budget:
                raise EnumerationBudgetExceeded(f"more than {budget} candidates")
            if p.evaluate(x, b.size) == b:
                found.append(x)
    return found


def n_components(x) -> int:
    if isinstance(x, CycleSum):
        return x.n_cycles
    return len(x.components)


def extreme_solutions(solutions):
    """``(max-component, min-component)`` solution, each required to be unique."""
    if not solutions:
        return None
    counts = [n_components(x) for x in solutions]
    out = []
    for target in (max(counts), min(counts)):
        hits = [x for x, c in zip(solutions, counts) if c == target]
        if len(hits) != 1:
            raise InvariantViolation(f"{len(hits)} solutions with {target} components")
        out.append(hits[0])
    return tuple(out)


def count_extreme_solutions(p: Poly, b: Fdds, max_states: int, budget: int = 200_000):
    """Oracle max- and min-component solutions, or None when there is none."""
    return extreme_solutions(brute_force_solve(p, b, max_states, budget))
