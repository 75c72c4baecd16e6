"""``P(X) = B`` for arbitrary FDDS, transient states included.

The greedy loop mirrors the sum-of-cycles solver. Each step looks at the
components of the remainder with the shortest cycle ``q`` and finds a
connected ``C`` whose contribution accounts for them. Candidate components
come from dividing unroll trees: if ``t_a`` is an unroll tree of the chosen
coefficient and ``t_b`` one of the remainder, every tree ``x`` with
``t_a * x**i == t_b`` is the unroll tree of a possible new component.

Tree division is a level-by-level search with exact prefix checks, and a
bounded backtracking over candidates replaces the polynomial-time
division from the literature. Every answer is checked by a full product.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .core import Fdds, SizeOverflow, restrict_dividing, restrict_exact, sub_components
from .cycles import Reason
from .cyclesum import anti_lcm
from .poly import Poly
from .unroll import FOREST, UnrollTree, detect_period, deroll, tree_key, unroll


@dataclass(frozen=True)
class GeneralOutcome:
    solution: Fdds | None
    components_added: tuple[Fdds, ...] = ()
    verified: bool = False
    reason: Reason = Reason.SOLVED
    message: str = ""

    @property
    def solved(self) -> bool:
        return self.reason is Reason.SOLVED


def candidate_cycle_length(a_min: int, b_min: int, p: int) -> int:
    """Shortest admissible cycle for a new component whose tree has period ``p``."""
    if a_min < 1 or b_min < 1 or p < 1:
        raise ValueError("lengths and periods must be positive")
    if b_min % a_min:
        raise ValueError(f"{a_min} does not divide {b_min}")
    return math.lcm(p, anti_lcm(b_min, a_min))


# ---------------------------------------------------------------------------
# tree division


def iroot(n: int, k: int) -> int | None:
    """Exact integer ``k``-th root of ``n``, or None."""
    if n < 0:
        return None
    if k == 1 or n < 2:
        return n
    r = round(n ** (1.0 / k))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == n:
            return c
    return None


def _mul_power(values: list[int], i: int) -> Counter:
    out = Counter({1: 1})
    base = Counter(values)
    for _ in range(i):
        nxt: Counter = Counter()
        for u, m in out.items():
            for v, n in base.items():
                nxt[u * v] += m * n
        out = nxt
    return out


def _scale(a: Counter, xs: Counter) -> Counter:
    out: Counter = Counter()
    for u, m in a.items():
        for v, n in xs.items():
            out[u * v] += m * n
    return out


def _child_count_multiset(ca: Counter, cb: Counter, i: int, width: int) -> list[int] | None:
    """The unique multiset ``M`` of ``width`` counts with ``ca * M**i == cb``.

    Positive values are peeled off from the largest product downwards;
    the number of zeros follows from the number of zero products.
    """
    a_pos = Counter({v: m for v, m in ca.items() if v})
    rem = Counter({v: m for v, m in cb.items() if v})
    n_a = sum(a_pos.values())
    if n_a == 0:
        return [0] * width if not rem else None
    nz = iroot(sum(rem.values()) // n_a, i) if sum(rem.values()) % n_a == 0 else None
    if nz is None or nz > width:
        return None
    amax = max(a_pos)
    chosen: list[int] = []
    power: Counter = Counter()
    while rem:
        top = max(rem)
        denom = amax * (chosen[0] ** (i - 1) if chosen else 1)
        if chosen:
            if top % denom:
                return None
            v = top // denom
        else:
            if top % amax:
                return None
            v = iroot(top // amax, i)
            if v is None:
                return None
        if v < 1 or (chosen and v > chosen[-1]):
            return None
        new_power = _mul_power(chosen + [v], i)
        delta = _scale(a_pos, new_power - power)
        if any(rem[k] < n for k, n in delta.items()):
            return None
        rem -= delta
        chosen.append(v)
        power = new_power
        if len(chosen) > nz:
            return None
    if len(chosen) != nz:
        return None
    return chosen + [0] * (width - nz)


def _child_counts(root: int, depth: int) -> list[Counter]:
    levels = FOREST.level_counts(root)
    out = []
    for k in range(depth):
        c: Counter = Counter()
        if k < len(levels):
            for x, m in levels[k].items():
                c[len(FOREST.kids[x])] += m
        out.append(c)
    return out


def _build(levels: list[list[tuple[int, bool]]]) -> int:
    """Hash-cons a tree given level by level as ``(parent index, spine)`` pairs."""
    ids = [FOREST.node(s, ()) for _, s in levels[-1]]
    for k in range(len(levels) - 2, -1, -1):
        kids: list[list[int]] = [[] for _ in levels[k]]
        for (par, _), nid in zip(levels[k + 1], ids):
            kids[par].append(nid)
        ids = [FOREST.node(s, kk) for (_, s), kk in zip(levels[k], kids)]
    return ids[0]


def _placements(nodes: list[tuple[int, bool]], pool: Counter) -> Iterator[tuple[int, ...]]:
    """Assign the multiset ``pool`` to ``nodes`` (spine gets at least one).

    Non-spine siblings are interchangeable leaves, so their counts are
    taken non-increasing.
    """
    n = len(nodes)
    out = [0] * n

    def rec(j: int) -> Iterator[tuple[int, ...]]:
        if j == n:
            yield tuple(out)
            return
        par, spine = nodes[j]
        bound = None
        if j and not spine and nodes[j - 1][0] == par and not nodes[j - 1][1]:
            bound = out[j - 1]
        for v in sorted(pool, reverse=True):
            if pool[v] == 0 or (bound is not None and v > bound) or (spine and v == 0):
                continue
            pool[v] -= 1
            out[j] = v
            yield from rec(j + 1)
            pool[v] += 1

    yield from rec(0)


def divide(t_a: UnrollTree, t_b: UnrollTree, i: int, limit: int = 200_000) -> list[UnrollTree]:
    """All trees ``x`` of the same depth with ``t_a * x**i == t_b``.

    ``limit`` bounds the number of prefix checks; past it the search gives
    up and returns no trees.
    """
    if t_a.depth != t_b.depth:
        raise ValueError("depth mismatch")
    if i < 1:
        raise ValueError("degree must be positive")
    depth = t_a.depth
    sa, sb = FOREST.sizes(t_a.root), FOREST.sizes(t_b.root)
    if len(sa) != depth + 1 or len(sb) != depth + 1:
        return []
    widths = []
    for na, nb in zip(sa, sb):
        if nb % na:
            return []
        w = iroot(nb // na, i)
        if w is None:
            return []
        widths.append(w)
    # bare spines on both sides
    if all(w == 1 for w in widths) and FOREST.spine_child(t_b.root) is not None:
        spine_only = _build([[(-1, True)]] + [[(0, True)] for _ in range(depth)])
        if FOREST.product(t_a.root, FOREST.power(spine_only, i)) == t_b.root:
            return [UnrollTree(spine_only, depth)]
    ca, cb = _child_counts(t_a.root, depth), _child_counts(t_b.root, depth)
    pools = []
    for k in range(depth):
        m = _child_count_multiset(ca[k], cb[k], i, widths[k])
        if m is None or sum(m) != widths[k + 1]:
            return []
        pools.append(Counter(m))

    beam: dict[int, list[list[tuple[int, bool]]]] = {FOREST.node(True, ()): [[(-1, True)]]}
    checks = 0
    for k in range(depth):
        ta_k = FOREST.truncate(t_a.root, k + 1)
        tb_k = FOREST.truncate(t_b.root, k + 1)
        nxt: dict[int, list[list[tuple[int, bool]]]] = {}
        for levels in beam.values():
            last = levels[-1]
            for counts in _placements(last, Counter(pools[k])):
                new_level: list[tuple[int, bool]] = []
                for j, ((_, spine), c) in enumerate(zip(last, counts)):
                    for r in range(c):
                        new_level.append((j, spine and r == 0))
                cand = levels + [new_level]
                xid = _build(cand)
                if xid in nxt:
                    continue
                checks += 1
                if checks > limit:
                    return []
                if FOREST.product(ta_k, FOREST.power(xid, i)) == tb_k:
                    nxt[xid] = cand
        if not nxt:
            return []
        beam = nxt
    out = [UnrollTree(x, depth) for x in beam]
    out.sort(key=tree_key)
    return out


def _min_tree(a: Fdds, depth: int) -> UnrollTree:
    return min(unroll(a, depth), key=tree_key)


def min_tree_divide(p_restricted: Poly, b_restricted: Fdds, depth: int):
    """Least ``x`` with ``min U(A_i) * x**i == min U(B)`` for some degree ``i``.

    Returns ``(x, i)`` with ``x.period`` set, or None.
    """
    if not b_restricted:
        return None
    t_b = _min_tree(b_restricted, depth)
    best = None
    bound = math.lcm(*b_restricted.lengths)
    for i, coeff in p_restricted.nonconstant():
        t_a = _min_tree(coeff, depth)
        for x in divide(t_a, t_b, i):
            period = detect_period(x.root, depth, bound)
            if period is None:
                continue
            x = UnrollTree(x.root, depth, period)
            if best is None or tree_key(x) < tree_key(best[0]):
                best = (x, i)
            break
    return best


# ---------------------------------------------------------------------------
# the solver


def _candidates(q_poly: Poly, rest: Fdds, m_a: int, degree: int, coeff: Fdds) -> Iterator[Fdds]:
    """Possible next components, smallest tree first, without repeats."""
    q = rest.min_length
    if q % m_a:
        return
    depth = q + rest.transient_height + 1
    t_a = _min_tree(restrict_dividing(coeff, q), depth)
    trees_b = {t.root: t for t in unroll(restrict_exact(rest, q), depth)}
    seen: set = set()
    for t_b in sorted(trees_b.values(), key=tree_key):
        for x in divide(t_a, t_b, degree):
            period = detect_period(x.root, depth, q)
            if period is None:
                continue
            length = candidate_cycle_length(m_a, q, period)
            if math.lcm(m_a, length) != q:
                continue
            c = deroll(UnrollTree(x.root, depth, period), length)
            key = c.canon
            if key not in seen:
                seen.add(key)
                yield c


def solve_poly_general(p: Poly, b: Fdds, backtrack_budget: int | None = None) -> GeneralOutcome:
    """Greedy component-by-component solver with bounded backtracking.

    The returned solution is verified: ``P(Y)`` is isomorphic to ``b``.
    """
    if p.kind is not Fdds:
        return GeneralOutcome(None, reason=Reason.PRECONDITION, message="needs graph coefficients")
    if not p.nonconstant():
        return GeneralOutcome(None, reason=Reason.PRECONDITION, message="polynomial has no non-constant term")
    if not p.is_pseudo_injective:
        return GeneralOutcome(None, reason=Reason.PRECONDITION, message="polynomial is not pseudo-injective")
    rest0 = sub_components(b, p.constant)
    if rest0 is None:
        return GeneralOutcome(None, reason=Reason.NO_SOLUTION, message="constant term is not contained in b")
    q_poly = p.without_constant()
    m_a = q_poly.nonconstant_sum().min_length
    # lowest degree whose coefficient reaches the minimum cycle length
    degree, coeff = next((d, c) for d, c in q_poly.nonconstant() if c.min_length == m_a)
    cap = len(rest0)
    budget = len(b) if backtrack_budget is None else backtrack_budget
    backtracks = 0

    # frame: remainder, partial solution, P(Y), components so far, candidate iterator
    y0, py0 = Fdds.zero(), Fdds.zero()
    stack = [(rest0, y0, py0, (), _candidates(q_poly, rest0, m_a, degree, coeff) if rest0 else iter(()))]
    while stack:
        rest, y, p_y, added, cands = stack[-1]
        if not rest:
            if p.evaluate(y).canon == b.canon:
                return GeneralOutcome(y, added, True)
            stack.pop()
            continue
        c = next(cands, None)
        if c is None:
            stack.pop()
            backtracks += 1
            if backtracks > budget:
                return GeneralOutcome(None, reason=Reason.NO_SOLUTION, message="backtracking budget exhausted")
            continue
        y_new = y + c
        try:
            p_new = q_poly.evaluate(y_new, cap)
        except SizeOverflow:
            continue
        delta = sub_components(p_new, p_y)
        if delta is None:
            continue
        left = sub_components(rest, delta)
        if left is None:
            continue
        nxt = _candidates(q_poly, left, m_a, degree, coeff) if left else iter(())
        stack.append((left, y_new, p_new, added + (c,), nxt))
    return GeneralOutcome(None, reason=Reason.NO_SOLUTION, message="no candidate component fits")
