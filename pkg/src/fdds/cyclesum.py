"""Sums of cycles in compact form: sorted ``(length, count)`` pairs.

Counts and lengths are Python integers, so a system with ``10**100``
states costs a few machine words. The product of ``n`` copies of ``C_p``
with ``m`` copies of ``C_q`` is ``n*m*gcd(p, q)`` copies of ``C_lcm(p, q)``.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .core import DEFAULT_SIZE_CAP, EmptySystemError, Fdds, SizeOverflow


@dataclass(frozen=True)
class CycleSum:
    """A multiset of cycles; ``entries`` are ``(length, count)`` with increasing lengths."""

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        merged: Counter = Counter()
        for l, n in self.entries:
            l, n = int(l), int(n)
            if l < 1 or n < 0:
                raise ValueError(f"invalid cycle entry ({l}, {n})")
            if n:
                merged[l] += n
        object.__setattr__(self, "entries", tuple(sorted(merged.items())))

    @classmethod
    def zero(cls) -> CycleSum:
        return cls()

    @classmethod
    def one(cls) -> CycleSum:
        return cls(((1, 1),))

    @classmethod
    def cycle(cls, length: int, count: int = 1) -> CycleSum:
        return cls(((length, count),))

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> CycleSum:
        return cls(tuple(counts.items()))

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    @property
    def size(self) -> int:
        return sum(l * n for l, n in self.entries)

    def __len__(self) -> int:
        # number of distinct lengths; ``size`` is the state count
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(l for l, _ in self.entries)

    @property
    def n_cycles(self) -> int:
        return sum(n for _, n in self.entries)

    @property
    def min_length(self) -> int:
        if not self.entries:
            raise EmptySystemError("the empty sum has no cycles")
        return self.entries[0][0]

    def count(self, length: int) -> int:
        return self.as_dict().get(length, 0)

    @property
    def is_pseudo_cancelable(self) -> bool:
        m = self.min_length
        return all(l % m == 0 for l in self.lengths)

    @property
    def has_fixed_point(self) -> bool:
        return bool(self.entries) and self.entries[0][0] == 1

    def __add__(self, other: CycleSum) -> CycleSum:
        if not isinstance(other, CycleSum):
            return NotImplemented
        return CycleSum(self.entries + other.entries)

    def __mul__(self, other: CycleSum) -> CycleSum:
        if not isinstance(other, CycleSum):
            return NotImplemented
        out: Counter = Counter()
        for la, na in self.entries:
            for lb, nb in other.entries:
                g = math.gcd(la, lb)
                out[la // g * lb] += na * nb * g
        return CycleSum(tuple(out.items()))

    def __pow__(self, k: int) -> CycleSum:
        if k < 0:
            raise ValueError("negative exponent")
        result, base = CycleSum.one(), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __le__(self, other: CycleSum) -> bool:
        return self.issubset(other)

    def issubset(self, other: CycleSum) -> bool:
        have = other.as_dict()
        return all(have.get(l, 0) >= n for l, n in self.entries)

    def minus(self, other: CycleSum) -> CycleSum | None:
        """Countwise difference, or None when ``other`` is not contained in ``self``."""
        have = self.as_dict()
        for l, n in other.entries:
            left = have.get(l, 0) - n
            if left < 0:
                return None
            have[l] = left
        return CycleSum(tuple(have.items()))

    def __str__(self) -> str:
        return format_cyclesum(self)


def cs_product(a: CycleSum, b: CycleSum) -> CycleSum:
    return a * b


def cs_add(a: CycleSum, b: CycleSum) -> CycleSum:
    return a + b


def cs_sub(a: CycleSum, b: CycleSum) -> CycleSum | None:
    return a.minus(b)


def cs_is_subset(a: CycleSum, b: CycleSum) -> bool:
    return a.issubset(b)


def cs_size(a: CycleSum) -> int:
    return a.size


_TERM = re.compile(r"^(\d+)x(\d+)$")


def parse_cyclesum(text: str) -> CycleSum:
    """Parse ``"16x2+4x4+18x6+1x12"``; ``"0"`` is the empty sum."""
    s = "".join(line for line in text.splitlines() if not line.lstrip().startswith("#"))
    s = "".join(s.split())
    if s in ("", "0"):
        return CycleSum()
    entries = []
    for term in s.split("+"):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"malformed cycle-sum term {term!r}")
        n, l = int(m.group(1)), int(m.group(2))
        if l < 1:
            raise ValueError(f"cycle length must be positive in {term!r}")
        entries.append((l, n))
    return CycleSum(tuple(entries))


def format_cyclesum(a: CycleSum) -> str:
    if not a.entries:
        return "0"
    return "+".join(f"{n}x{l}" for l, n in a.entries)


def anti_lcm(b: int, a: int) -> int:
    """Product of ``p**e_b(p)`` over primes whose exponent in ``b`` exceeds that in ``a``.

    Uses ``gcd(b, (b // a) ** ceil(log2 b))``: a prime divides ``b // a``
    exactly when its exponent grows, and the power lifts it to at least its
    full exponent in ``b``. No factorisation is needed.
    """
    if a < 1 or b < 1:
        raise ValueError("anti_lcm needs positive integers")
    if b % a:
        raise ValueError(f"{a} does not divide {b}")
    k = (b - 1).bit_length()  # ceil(log2 b)
    return math.gcd(b, pow(b // a, k, b)) if b > 1 else 1


def fdds_to_cs(a: Fdds) -> CycleSum | None:
    """Compact summary of a permutation; None if ``a`` has a transient state."""
    n = len(a)
    if n == 0:
        return CycleSum()
    succ = np.asarray(a.succ, dtype=np.int64)
    if not np.all(np.bincount(succ, minlength=n) == 1):
        return None
    seen = bytearray(n)
    lengths: Counter = Counter()
    s = a.succ
    for start in range(n):
        if seen[start]:
            continue
        l = 0
        v = start
        while not seen[v]:
            seen[v] = 1
            v = s[v]
            l += 1
        lengths[l] += 1
    return CycleSum(tuple(lengths.items()))


def cs_to_fdds(a: CycleSum, cap: int | None = DEFAULT_SIZE_CAP) -> Fdds:
    size = a.size
    if cap is not None and size > cap:
        raise SizeOverflow(f"expansion would have {size} states (cap {cap})")
    parts = []
    off = 0
    for l, n in a.entries:
        idx = np.arange(l * n, dtype=np.int64)
        parts.append(off + idx - idx % l + (idx + 1) % l)
        off += l * n
    if not parts:
        return Fdds.zero()
    return Fdds(np.concatenate(parts))


def cycle_sum_of(lengths: Iterable[int]) -> CycleSum:
    return CycleSum(tuple((l, 1) for l in lengths))
