"""Depth-truncated unroll trees and their levelwise product.

Trees are hash-consed: every distinct rooted tree (with the spine branch
marked) is stored once in a process-wide table and referred to by an
integer id, so isomorphism of trees is integer equality and products,
truncations and level statistics are memoised on ids.
"""
from __future__ import annotations

import math
import threading
from collections import Counter
from dataclasses import dataclass, field
from functools import cmp_to_key

from .core import Component, Fdds


class _Forest:
    def __init__(self) -> None:
        self._ids: dict[tuple[bool, tuple[int, ...]], int] = {}
        self.kids: list[tuple[int, ...]] = []
        self.spine: list[bool] = []
        self.height: list[int] = []
        self._lock = threading.Lock()
        self._prod: dict[tuple[int, int], int] = {}
        self._trunc: dict[tuple[int, int], int] = {}
        self._sizes: dict[int, tuple[int, ...]] = {}
        self._key: dict[int, tuple] = {}

    def node(self, spine: bool, kids) -> int:
        key = (spine, tuple(sorted(kids)))
        nid = self._ids.get(key)
        if nid is not None:
            return nid
        with self._lock:
            nid = self._ids.get(key)
            if nid is None:
                nid = len(self.kids)
                self.kids.append(key[1])
                self.spine.append(spine)
                self.height.append(1 + max(self.height[k] for k in key[1]) if key[1] else 0)
                self._ids[key] = nid
        return nid

    def spine_child(self, nid: int) -> int | None:
        for k in self.kids[nid]:
            if self.spine[k]:
                return k
        return None

    def hung(self, nid: int) -> tuple[int, ...]:
        """Non-spine children of a node."""
        return tuple(k for k in self.kids[nid] if not self.spine[k])

    def product(self, a: int, b: int) -> int:
        memo = self._prod
        key = (a, b) if a <= b else (b, a)
        if key in memo:
            return memo[key]
        stack = [key]
        while stack:
            x, y = stack[-1]
            if (x, y) in memo:
                stack.pop()
                continue
            pending, kids = [], []
            for c in self.kids[x]:
                for d in self.kids[y]:
                    k2 = (c, d) if c <= d else (d, c)
                    r = memo.get(k2)
                    if r is None:
                        pending.append(k2)
                    else:
                        kids.append(r)
            if pending:
                stack.extend(pending)
                continue
            memo[(x, y)] = self.node(self.spine[x] and self.spine[y], kids)
            stack.pop()
        return memo[key]

    def power(self, a: int, i: int) -> int:
        if i < 1:
            raise ValueError("tree powers start at 1")
        r = a
        for _ in range(i - 1):
            r = self.product(r, a)
        return r

    def truncate(self, a: int, depth: int) -> int:
        if self.height[a] <= depth:
            return a
        memo = self._trunc
        if (a, depth) in memo:
            return memo[(a, depth)]
        stack = [(a, depth)]
        while stack:
            x, d = stack[-1]
            if self.height[x] <= d or (x, d) in memo:
                stack.pop()
                continue
            if d == 0:
                memo[(x, d)] = self.node(self.spine[x], ())
                stack.pop()
                continue
            pending, kids = [], []
            for c in self.kids[x]:
                if self.height[c] <= d - 1:
                    kids.append(c)
                elif (c, d - 1) in memo:
                    kids.append(memo[(c, d - 1)])
                else:
                    pending.append((c, d - 1))
            if pending:
                stack.extend(pending)
                continue
            memo[(x, d)] = self.node(self.spine[x], kids)
            stack.pop()
        return memo[(a, depth)]

    def sizes(self, a: int) -> tuple[int, ...]:
        """Number of nodes on each level below (and including) ``a``."""
        memo = self._sizes
        if a in memo:
            return memo[a]
        for x in self._postorder(a, memo):
            acc = [1] + [0] * self.height[x]
            for c in self.kids[x]:
                for k, s in enumerate(memo[c], start=1):
                    acc[k] += s
            memo[x] = tuple(acc)
        return memo[a]

    def order_key(self, a: int) -> tuple:
        memo = self._key
        if a in memo:
            return memo[a]
        for x in self._postorder(a, memo):
            memo[x] = (self.spine[x], tuple(sorted(memo[c] for c in self.kids[x])))
        return memo[a]

    def _postorder(self, a: int, memo) -> list[int]:
        # children always have smaller ids than their parents
        seen, todo = set(), [a]
        while todo:
            x = todo.pop()
            if x in seen or x in memo:
                continue
            seen.add(x)
            todo.extend(self.kids[x])
        return sorted(seen)

    def level_counts(self, a: int) -> list[Counter]:
        """Per level, a multiset of node ids (with multiplicity)."""
        levels = [Counter({a: 1})]
        for _ in range(self.height[a]):
            nxt: Counter = Counter()
            for x, m in levels[-1].items():
                for c in self.kids[x]:
                    nxt[c] += m
            levels.append(nxt)
        return levels


FOREST = _Forest()


@dataclass(frozen=True)
class UnrollTree:
    """A truncated unroll tree.

    Equality is isomorphism (the root ids are hash-consed). ``period`` is
    the smallest spine shift leaving the tree invariant.
    """

    root: int
    depth: int
    period: int = field(default=1, compare=False)

    @property
    def level_sizes(self) -> tuple[int, ...]:
        return FOREST.sizes(self.root)

    @property
    def levels(self) -> list[list[int]]:
        """Parent index of every node, level by level (root parent is -1)."""
        out: list[list[int]] = [[-1]]
        current = [self.root]
        for _ in range(self.depth):
            parents, nxt = [], []
            for pi, x in enumerate(current):
                for c in FOREST.kids[x]:
                    parents.append(pi)
                    nxt.append(c)
            out.append(parents)
            current = nxt
        return out

    @property
    def spine(self) -> list[int]:
        """Index of the spine node on each level, consistent with :attr:`levels`."""
        out = [0]
        current = [self.root]
        for _ in range(self.depth):
            nxt = [c for x in current for c in FOREST.kids[x]]
            s = current[out[-1]]
            sc = FOREST.spine_child(s)
            # first occurrence of the spine child under the spine parent
            offset = sum(len(FOREST.kids[x]) for x in current[: out[-1]])
            out.append(offset + FOREST.kids[s].index(sc))
            current = nxt
        return out

    def spine_node(self, level: int) -> int:
        x = self.root
        for _ in range(level):
            x = FOREST.spine_child(x)
        return x

    def truncated(self, depth: int) -> UnrollTree:
        return UnrollTree(FOREST.truncate(self.root, depth), depth, self.period)

    def code(self) -> bytes:
        """Parenthesised canonical string; spine nodes use square brackets."""
        out = bytearray()
        stack: list[tuple[int, bool]] = [(self.root, True)]
        keys = FOREST.order_key
        while stack:
            x, entering = stack.pop()
            spine = FOREST.spine[x]
            if not entering:
                out += b"]" if spine else b")"
                continue
            out += b"[" if spine else b"("
            stack.append((x, False))
            kids = sorted(FOREST.kids[x], key=keys, reverse=True)
            stack.extend((c, True) for c in kids)
        return bytes(out)


def bare_spine(depth: int) -> UnrollTree:
    """The unroll tree of a cycle: a single branch."""
    x = FOREST.node(True, ())
    for _ in range(depth):
        x = FOREST.node(True, (x,))
    return UnrollTree(x, depth, 1)


def _hung_ids(comp: Component) -> dict[int, int]:
    """Tree id of every transient state's full in-tree."""
    a = comp.parent
    preds = a.predecessors
    transient = sorted(
        (s for s in comp.states if not a.is_periodic(s)),
        key=lambda s: a._structure.height[s],
    )
    full: dict[int, int] = {}
    for s in transient:
        full[s] = FOREST.node(False, [full[u] for u in preds[s]])
    return full


def _cyclic_period(seq) -> int:
    n = len(seq)
    for p in range(1, n + 1):
        if n % p == 0 and all(seq[i] == seq[(i + p) % n] for i in range(n)):
            return p
    return n


def unroll_truncated(c: Component, depth: int) -> list[UnrollTree]:
    """One truncated tree per periodic state of ``c``, in cycle order."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    a = c.parent
    preds = a.predecessors
    full = _hung_ids(c)
    cyc = c.cycle
    L = len(cyc)
    hung = [[full[u] for u in preds[v] if not a.is_periodic(u)] for v in cyc]
    period = _cyclic_period([FOREST.node(False, h) for h in hung])
    layer = [FOREST.node(True, ()) for _ in range(L)]
    for d in range(1, depth + 1):
        trunc = [[FOREST.truncate(h, d - 1) for h in hung[i]] for i in range(L)]
        # the spine child of cycle[i] is cycle[i - 1]
        layer = [FOREST.node(True, [layer[(i - 1) % L], *trunc[i]]) for i in range(L)]
    return [UnrollTree(r, depth, period) for r in layer]


def unroll(a: Fdds, depth: int) -> list[UnrollTree]:
    """The truncated unroll of a whole system (one tree per periodic state)."""
    out: list[UnrollTree] = []
    for c in a.components:
        out.extend(unroll_truncated(c, depth))
    return out


def detect_period(root: int, depth: int, bound: int) -> int | None:
    """Smallest ``p`` dividing ``bound`` with the tree invariant under a ``p``-shift."""
    for p in range(1, bound + 1):
        if bound % p or p > depth:
            continue
        shifted = root
        for _ in range(p):
            shifted = FOREST.spine_child(shifted)
        if FOREST.truncate(root, depth - p) == shifted:
            return p
    return None


def tree_product(t1: UnrollTree, t2: UnrollTree) -> UnrollTree:
    if t1.depth != t2.depth:
        raise ValueError(f"depth mismatch: {t1.depth} != {t2.depth}")
    root = FOREST.product(t1.root, t2.root)
    bound = math.lcm(t1.period, t2.period)
    period = detect_period(root, t1.depth, bound) or bound
    return UnrollTree(root, t1.depth, period)


def tree_power(t: UnrollTree, i: int) -> UnrollTree:
    return UnrollTree(FOREST.power(t.root, i), t.depth, t.period)


def tree_key(t: UnrollTree) -> tuple:
    return (FOREST.sizes(t.root), FOREST.order_key(t.root))


def tree_compare(t1: UnrollTree, t2: UnrollTree) -> int:
    """Total order: level sizes first (lexicographically), then structure."""
    if t1.depth != t2.depth:
        raise ValueError(f"depth mismatch: {t1.depth} != {t2.depth}")
    if t1.root == t2.root:
        return 0
    k1, k2 = tree_key(t1), tree_key(t2)
    return -1 if k1 < k2 else 1


tree_sort_key = cmp_to_key(tree_compare)


def deroll(t: UnrollTree, length: int) -> Fdds:
    """The connected system with cycle ``length`` whose unroll trees are the shifts of ``t``."""
    if length < 1 or length % t.period:
        raise ValueError(f"period {t.period} does not divide cycle length {length}")
    spine = [t.root]
    for _ in range(min(t.period, t.depth)):
        spine.append(FOREST.spine_child(spine[-1]))
    succ = [(i + 1) % length for i in range(length)]
    for i in range(length):
        level = (-i) % t.period
        stack = [(h, i) for h in FOREST.hung(spine[level])]
        while stack:
            x, parent = stack.pop()
            me = len(succ)
            succ.append(parent)
            stack.extend((c, me) for c in FOREST.kids[x])
    return Fdds(tuple(succ))
