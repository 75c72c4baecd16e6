"""Explicit finite dynamical systems as functional digraphs.

An :class:`Fdds` is a successor table: state ``i`` moves to ``succ[i]``.
Sum is disjoint union and product is the direct (synchronous) product,
which makes isomorphism classes of FDDS a commutative semiring.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

DEFAULT_SIZE_CAP = 10**7


class SizeOverflow(ArithmeticError):
    """A result would have more states than the configured cap."""


class EmptySystemError(ValueError):
    """An operation needs at least one state (e.g. the minimum cycle length)."""


def least_rotation(seq: Sequence) -> int:
    """Start index of the lexicographically least rotation (Booth)."""
    n = len(seq)
    if n == 0:
        return 0
    fail = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = seq[j % n]
        i = fail[j - k - 1]
        while i != -1 and sj != seq[(k + i + 1) % n]:
            if sj < seq[(k + i + 1) % n]:
                k = j - i - 1
            i = fail[i]
        if sj != seq[(k + i + 1) % n]:
            # here i == -1
            if sj < seq[k % n]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k % n


@dataclass(frozen=True)
class Component:
    """A connected component of a parent :class:`Fdds`.

    ``cycle`` lists the periodic states in dynamical order
    (``succ[cycle[i]] == cycle[i + 1]``), ``tree_heights[i]`` is the height
    of the in-tree hanging on ``cycle[i]``.
    """

    states: tuple[int, ...]
    cycle: tuple[int, ...]
    tree_heights: tuple[int, ...]
    parent: Fdds = field(repr=False, compare=False)

    @property
    def cycle_len(self) -> int:
        return len(self.cycle)

    def __len__(self) -> int:
        return len(self.states)

    def as_fdds(self) -> Fdds:
        return Fdds.from_components(self.parent, [self])


@dataclass(frozen=True)
class CanonForm:
    """Canonical code; equal iff the encoded systems are isomorphic."""

    code: bytes

    def __lt__(self, other: CanonForm) -> bool:
        return self.code < other.code

    def __le__(self, other: CanonForm) -> bool:
        return self.code <= other.code


@dataclass(frozen=True)
class _Structure:
    comp_of: tuple[int, ...]
    components: tuple[Component, ...]
    preds: tuple[tuple[int, ...], ...]
    on_cycle: bytes
    height: tuple[int, ...]


@dataclass(frozen=True)
class Fdds:
    """A finite dynamical system given by its successor table."""

    succ: tuple[int, ...] = ()

    def __post_init__(self):
        succ = self.succ
        if isinstance(succ, np.ndarray):
            succ = tuple(succ.tolist())
        elif not isinstance(succ, tuple):
            succ = tuple(succ)
        n = len(succ)
        if n:
            lo, hi = min(succ), max(succ)
            if lo < 0 or hi >= n:
                raise ValueError(f"successor index out of range [0, {n})")
        object.__setattr__(self, "succ", succ)

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls) -> Fdds:
        return cls(())

    @classmethod
    def one(cls) -> Fdds:
        return cls((0,))

    @classmethod
    def cycle(cls, length: int, copies: int = 1) -> Fdds:
        if length < 1 or copies < 0:
            raise ValueError("cycle length must be >= 1 and copies >= 0")
        idx = np.arange(length * copies)
        return cls((idx - idx % length) + (idx + 1) % length)

    @classmethod
    def from_components(cls, parent: Fdds, comps: Iterable[Component]) -> Fdds:
        """Relabel the given components of ``parent`` into a fresh system."""
        relabel: dict[int, int] = {}
        order: list[int] = []
        for c in comps:
            for s in c.states:
                relabel[s] = len(order)
                order.append(s)
        succ = parent.succ
        return cls(tuple(relabel[succ[s]] for s in order))

    @classmethod
    def disjoint_sum(cls, systems: Iterable[Fdds]) -> Fdds:
        out: list[int] = []
        for a in systems:
            off = len(out)
            out.extend(v + off for v in a.succ)
        return cls(tuple(out))

    # -- basic queries ------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.succ)

    def __len__(self) -> int:
        return len(self.succ)

    def __bool__(self) -> bool:
        return bool(self.succ)

    def __add__(self, other: Fdds) -> Fdds:
        if not isinstance(other, Fdds):
            return NotImplemented
        off = len(self.succ)
        return Fdds(self.succ + tuple(v + off for v in other.succ))

    def __mul__(self, other: Fdds) -> Fdds:
        if not isinstance(other, Fdds):
            return NotImplemented
        return product(self, other)

    def __pow__(self, k: int) -> Fdds:
        if k < 0:
            raise ValueError("negative exponent")
        result, base = Fdds.one(), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __str__(self) -> str:
        return format_fdds(self)

    # -- structure ----------------------------------------------------

    @cached_property
    def _structure(self) -> _Structure:
        succ = self.succ
        n = len(succ)
        comp_of = [-1] * n
        state = bytearray(n)  # 0 new, 1 on current walk, 2 done
        on_cycle = bytearray(n)
        cycles: list[list[int]] = []
        for s in range(n):
            if state[s]:
                continue
            path = []
            v = s
            while state[v] == 0:
                state[v] = 1
                path.append(v)
                v = succ[v]
            if state[v] == 1:
                start = path.index(v)
                cid = len(cycles)
                cycles.append(path[start:])
                for u in path[start:]:
                    on_cycle[u] = 1
            else:
                cid = comp_of[v]
            for u in path:
                comp_of[u] = cid
                state[u] = 2

        preds: list[list[int]] = [[] for _ in range(n)]
        for u, v in enumerate(succ):
            preds[v].append(u)

        # Heights: reverse BFS order from the cycles over transient preds.
        height = [0] * n
        members: list[list[int]] = [[] for _ in cycles]
        for cid, cyc in enumerate(cycles):
            order = list(cyc)
            i = 0
            while i < len(order):
                v = order[i]
                i += 1
                order.extend(u for u in preds[v] if not on_cycle[u])
            for v in reversed(order):
                h = 0
                for u in preds[v]:
                    if not on_cycle[u] and height[u] + 1 > h:
                        h = height[u] + 1
                height[v] = h
            members[cid] = order

        comps = []
        for cid, cyc in enumerate(cycles):
            comps.append(
                Component(
                    states=tuple(sorted(members[cid])),
                    cycle=tuple(cyc),
                    tree_heights=tuple(height[v] for v in cyc),
                    parent=self,
                )
            )
        return _Structure(
            comp_of=tuple(comp_of),
            components=tuple(comps),
            preds=tuple(tuple(p) for p in preds),
            on_cycle=bytes(on_cycle),
            height=tuple(height),
        )

    @property
    def components(self) -> tuple[Component, ...]:
        return self._structure.components

    @property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        return self._structure.preds

    def is_periodic(self, state: int) -> bool:
        return bool(self._structure.on_cycle[state])

    @property
    def is_connected(self) -> bool:
        return len(self.components) == 1

    @property
    def is_sum_of_cycles(self) -> bool:
        """True when the transition map is a permutation (no transients)."""
        n = len(self.succ)
        if n == 0:
            return True
        return bool(np.all(np.bincount(np.asarray(self.succ), minlength=n) == 1))

    @property
    def lengths(self) -> frozenset[int]:
        return frozenset(c.cycle_len for c in self.components)

    @property
    def min_length(self) -> int:
        if not self.succ:
            raise EmptySystemError("the empty system has no cycles")
        return min(c.cycle_len for c in self.components)

    @property
    def is_pseudo_cancelable(self) -> bool:
        m = self.min_length
        return all(l % m == 0 for l in self.lengths)

    @property
    def has_fixed_point(self) -> bool:
        return any(i == v for i, v in enumerate(self.succ))

    @property
    def transient_height(self) -> int:
        return max(self._structure.height, default=0)

    # -- canonical form ----------------------------------------------

    @cached_property
    def _component_codes(self) -> tuple[tuple[bytes, tuple[int, ...]], ...]:
        st = self._structure
        return tuple(_encode_component(st, c) for c in st.components)

    @cached_property
    def canon(self) -> CanonForm:
        return CanonForm(b"".join(sorted(code for code, _ in self._component_codes)))

    def component_codes(self) -> list[bytes]:
        """Canonical code of each component, aligned with :attr:`components`."""
        return [code for code, _ in self._component_codes]

    def component_multiset(self) -> Counter:
        return Counter(self.component_codes())

    def canonical(self) -> Fdds:
        """The canonical relabelling: isomorphic inputs give equal tables."""
        order: list[int] = []
        for _, emitted in sorted(self._component_codes, key=lambda ce: ce[0]):
            order.extend(emitted)
        relabel = [0] * len(order)
        for new, old in enumerate(order):
            relabel[old] = new
        succ = self.succ
        return Fdds(tuple(relabel[succ[old]] for old in order))

    def restrict(self, keep) -> Fdds:
        comps = [c for c in self.components if keep(c.cycle_len)]
        if len(comps) == len(self.components):
            return self
        return Fdds.from_components(self, comps)


def _encode_component(st: _Structure, comp: Component) -> tuple[bytes, tuple[int, ...]]:
    """AHU ranks for the in-trees, least rotation of the cycle, DFS emission.

    Ranks are assigned per component so that the code of a component does
    not depend on which other components share its parent system.
    """
    preds, on_cycle, height = st.preds, st.on_cycle, st.height
    by_height: dict[int, list[int]] = defaultdict(list)
    for v in comp.states:
        if not on_cycle[v]:
            by_height[height[v]].append(v)
    rank: dict[int, int] = {}
    next_rank = 0
    for h in sorted(by_height):
        keyed = [(tuple(sorted(rank[u] for u in preds[v])), v) for v in by_height[h]]
        distinct = sorted({k for k, _ in keyed})
        index = {k: next_rank + i for i, k in enumerate(distinct)}
        for k, v in keyed:
            rank[v] = index[k]
        next_rank += len(distinct)

    cyc = comp.cycle
    hung = [tuple(sorted(rank[u] for u in preds[v] if not on_cycle[u])) for v in cyc]
    distinct = sorted(set(hung))
    index = {k: i for i, k in enumerate(distinct)}
    seq = [index[k] for k in hung]
    r = least_rotation(seq)

    out = bytearray(b"[")
    emitted: list[int] = []
    L = len(cyc)
    for j in range(L):
        root = cyc[(r + j) % L]
        # iterative DFS; children in rank order
        stack: list[tuple[int, bool]] = [(root, True)]
        while stack:
            v, entering = stack.pop()
            if not entering:
                out += b")"
                continue
            out += b"("
            emitted.append(v)
            stack.append((v, False))
            kids = [u for u in preds[v] if not on_cycle[u]]
            kids.sort(key=rank.__getitem__, reverse=True)
            stack.extend((u, True) for u in kids)
    out += b"]"
    return bytes(out), tuple(emitted)


# ---------------------------------------------------------------------------
# Text format


def parse_fdds(text: str) -> Fdds:
    """Parse a successor table; ``#`` starts a comment line."""
    tokens: list[int] = []
    for line in text.splitlines():
        if line.lstrip().startswith("#"):
            continue
        for tok in line.split():
            if not tok.isdigit():
                raise ValueError(f"non-numeric token {tok!r} in successor table")
            tokens.append(int(tok))
    return Fdds(tuple(tokens))


def format_fdds(a: Fdds) -> str:
    return " ".join(map(str, a.succ))


# ---------------------------------------------------------------------------
# Semiring operations and component multisets


def product(a: Fdds, b: Fdds, cap: int | None = DEFAULT_SIZE_CAP) -> Fdds:
    """Direct product; state ``(u, v)`` is labelled ``u * len(b) + v``."""
    na, nb = len(a), len(b)
    if cap is not None and na * nb > cap:
        raise SizeOverflow(f"product would have {na * nb} states (cap {cap})")
    if na == 0 or nb == 0:
        return Fdds.zero()
    sa = np.asarray(a.succ, dtype=np.int64)
    sb = np.asarray(b.succ, dtype=np.int64)
    return Fdds((sa[:, None] * nb + sb[None, :]).ravel())


def cycle_lengths(a: Fdds) -> tuple[frozenset[int], int]:
    return a.lengths, a.min_length


def is_isomorphic(a: Fdds, b: Fdds) -> bool:
    if len(a) != len(b):
        return False
    return a.canon == b.canon


def sub_components(b: Fdds, s: Fdds) -> Fdds | None:
    """``b`` minus the components of ``s``, or None if they are not all in ``b``."""
    if not s:
        return b
    need = s.component_multiset()
    have = b.component_multiset()
    if any(have[k] < n for k, n in need.items()):
        return None
    keep = []
    for comp, code in zip(b.components, b.component_codes()):
        if need[code] > 0:
            need[code] -= 1
        else:
            keep.append(comp)
    return Fdds.from_components(b, keep)


def restrict_dividing(a: Fdds, p: int) -> Fdds:
    """Components whose cycle length divides ``p``."""
    if p < 1:
        raise ValueError("p must be positive")
    return a.restrict(lambda l: p % l == 0)


def restrict_exact(a: Fdds, p: int) -> Fdds:
    """Components whose cycle length is exactly ``p``."""
    if p < 1:
        raise ValueError("p must be positive")
    return a.restrict(lambda l: l == p)
