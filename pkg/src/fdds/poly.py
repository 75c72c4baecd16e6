"""Polynomials over FDDS, with explicit or compact coefficients."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Generic, Iterator, Mapping, TypeVar

from .core import Fdds, SizeOverflow
from .cyclesum import CycleSum

T = TypeVar("T", Fdds, CycleSum)


@dataclass(frozen=True)
class Poly(Generic[T]):
    """``sum(A_i * X**i)`` stored as ``(degree, coefficient)`` pairs, zero terms dropped."""

    terms: tuple[tuple[int, T], ...]
    kind: type

    def __init__(self, coeffs: Mapping[int, T], kind: type | None = None):
        items = sorted((int(d), c) for d, c in coeffs.items())
        if any(d < 0 for d, _ in items):
            raise ValueError("negative degree")
        if kind is None:
            if not items:
                raise ValueError("cannot infer the coefficient type of an empty polynomial")
            kind = type(items[0][1])
        if any(not isinstance(c, kind) for _, c in items):
            raise TypeError("all coefficients must share one encoding")
        object.__setattr__(self, "terms", tuple((d, c) for d, c in items if c))
        object.__setattr__(self, "kind", kind)

    def __getitem__(self, degree: int) -> T:
        for d, c in self.terms:
            if d == degree:
                return c
        return self.kind.zero()

    def __iter__(self) -> Iterator[tuple[int, T]]:
        return iter(self.terms)

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    @property
    def constant(self) -> T:
        return self[0]

    def nonconstant(self) -> list[tuple[int, T]]:
        return [(d, c) for d, c in self.terms if d >= 1]

    def nonconstant_sum(self) -> T:
        total = self.kind.zero()
        for _, c in self.nonconstant():
            total = total + c
        return total

    @property
    def is_pseudo_injective(self) -> bool:
        s = self.nonconstant_sum()
        return bool(s) and s.is_pseudo_cancelable

    def without_constant(self) -> Poly[T]:
        return Poly(dict(self.nonconstant()), self.kind)

    def map(self, fn) -> Poly:
        mapped = {d: fn(c) for d, c in self.terms}
        kind = type(next(iter(mapped.values()))) if mapped else self.kind
        return Poly(mapped, kind)

    def size_at(self, x_size: int, cap: int | None = None) -> int:
        """``|P(X)|`` from ``|X|`` alone (the size map is a homomorphism).

        With a cap, stops as soon as a partial result exceeds it and raises
        :class:`SizeOverflow`.
        """
        total = 0
        power, done = 1, 0
        for d, c in self.terms:
            while done < d:
                power *= x_size
                done += 1
                if cap is not None and power > cap and x_size > 1:
                    raise SizeOverflow(f"|X|^{done} exceeds {cap}")
            total += c.size * power
            if cap is not None and total > cap:
                raise SizeOverflow(f"|P(X)| exceeds {cap}")
        return total

    def __call__(self, x: T, cap: int | None = None) -> T:
        return self.evaluate(x, cap)

    def evaluate(self, x: T, cap: int | None = None) -> T:
        """``P(x)``; checks sizes before building any product, powers by squaring."""
        if cap is not None:
            self.size_at(x.size, cap)
        result = self.kind.zero()
        for d, c in self.terms:
            result = result + c * _power(x, d)
        return result


def _power(x, k: int):
    result, base = type(x).one(), x
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def poly_eval_capped(p: Poly, x, cap: int):
    """Evaluate with an abort as soon as any intermediate size exceeds ``cap``."""
    if cap < 0:
        raise ValueError("cap must be non-negative")
    return p.evaluate(x, cap)
