"""Finite subgroups of Q*/Q*^2, represented by squarefree integers."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import NotAGroup


def squarefree_mul(a: int, b: int) -> int:
    """Product of square classes: squarefree representative of a*b."""
    g = gcd(a, b)
    return (a // g) * (b // g)


@dataclass(frozen=True)
class SquareClassGroup:
    """A finite subgroup of Q*/Q*^2 as a frozenset of squarefree ints.

    Always contains 1. Construct with `span` (closure of generators) or
    `from_elements` (verifies closure, raises NotAGroup otherwise).
    """

    elements: frozenset[int]

    @staticmethod
    def span(*generators: int) -> "SquareClassGroup":
        elems = {1}
        for g in generators:
            if g == 0:
                raise ValueError("0 is not a square class")
            new = {squarefree_mul(g, e) for e in elems}
            elems |= new
            # one more closure pass; dim grows by at most 1 per generator
            changed = True
            while changed:
                extra = {squarefree_mul(a, b) for a in elems for b in elems}
                changed = not extra <= elems
                elems |= extra
        return SquareClassGroup(frozenset(elems))

    @staticmethod
    def from_elements(elements) -> "SquareClassGroup":
        elems = frozenset(elements) | {1}
        for a in elems:
            for b in elems:
                if squarefree_mul(a, b) not in elems:
                    raise NotAGroup(
                        f"{a} * {b} = {squarefree_mul(a, b)} missing from {sorted(elems)}"
                    )
        return SquareClassGroup(elems)

    @staticmethod
    def trivial() -> "SquareClassGroup":
        return SquareClassGroup(frozenset({1}))

    def __contains__(self, x: int) -> bool:
        return x in self.elements

    def __iter__(self):
        return iter(sorted(self.elements, key=lambda v: (abs(v), v < 0)))

    def __len__(self) -> int:
        return len(self.elements)

    def __le__(self, other: "SquareClassGroup") -> bool:
        return self.elements <= other.elements

    @property
    def dim(self) -> int:
        """F_2-dimension; the order is always a power of two."""
        n = len(self.elements)
        return n.bit_length() - 1

    def generators(self) -> tuple[int, ...]:
        """Canonical minimal generating set: greedy by (|x|, sign)."""
        gens: list[int] = []
        span = {1}
        for x in self:
            if x in span:
                continue
            gens.append(x)
            span |= {squarefree_mul(x, e) for e in span}
        return tuple(gens)

    def describe(self) -> str:
        if len(self.elements) == 1:
            return "1"
        return "<" + ", ".join(str(g) for g in self.generators()) + ">"
