"""Sequences (finite multisets) over a finite abelian group and their cross numbers."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .groups import DirectSum, Element, FiniteAbelianGroup, GroupError


class SequenceError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CrossValue:
    """A cross number stored as numerator over the fixed denominator exp(G)."""

    numerator: int
    denominator: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def rescale(self, denominator: int) -> "CrossValue":
        f = self.as_fraction() * denominator
        if f.denominator != 1:
            raise SequenceError(f"{self} is not a multiple of 1/{denominator}")
        return CrossValue(int(f), denominator)

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class CrossSet:
    """Sorted, deduplicated cross numbers over a common denominator."""

    denominator: int
    numerators: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "numerators", tuple(sorted(set(int(x) for x in self.numerators))))

    @classmethod
    def from_mask(cls, mask: int, denominator: int, drop_zero: bool = False) -> "CrossSet":
        nums = []
        i = 0
        while mask:
            if mask & 1:
                nums.append(i)
            mask >>= 1
            i += 1
        if drop_zero and nums and nums[0] == 0:
            nums = nums[1:]
        return cls(denominator, tuple(nums))

    def __contains__(self, numerator) -> bool:
        if isinstance(numerator, CrossValue):
            numerator = numerator.rescale(self.denominator).numerator
        return numerator in set(self.numerators)

    def __iter__(self) -> Iterator[int]:
        return iter(self.numerators)

    def __len__(self):
        return len(self.numerators)

    @property
    def min(self) -> CrossValue:
        return CrossValue(self.numerators[0], self.denominator)

    @property
    def max(self) -> CrossValue:
        return CrossValue(self.numerators[-1], self.denominator)

    def fractions(self) -> list[Fraction]:
        return [Fraction(x, self.denominator) for x in self.numerators]

    def difference(self) -> int | None:
        """Common step if the set is an arithmetic progression, else None."""
        if len(self.numerators) < 2:
            return None
        steps = {b - a for a, b in zip(self.numerators, self.numerators[1:])}
        return steps.pop() if len(steps) == 1 else None

    def __str__(self):
        return "{" + ", ".join(str(x) for x in self.numerators) + "}/" + str(self.denominator)


def _translate(tables, mask: int, g: int) -> int:
    add_g = tables.add[:, g]
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << int(add_g[low.bit_length() - 1])
        mask ^= low
    return out


@dataclass(frozen=True)
class SumSet:
    """Σ(S) as a membership mask over G's canonical element indices."""

    group: FiniteAbelianGroup
    mask: int

    def __contains__(self, g: Element) -> bool:
        return bool(self.mask >> self.group.index(g) & 1)

    def elements(self) -> list[Element]:
        out = []
        m, i = self.mask, 0
        while m:
            if m & 1:
                out.append(self.group.element(i))
            m >>= 1
            i += 1
        return out

    def __len__(self):
        return bin(self.mask).count("1")


class Sequence:
    """An element of the free abelian monoid over G: a multiset of group elements."""

    __slots__ = ("group", "_items", "_hash")

    def __init__(self, group: FiniteAbelianGroup, elements: Iterable[Element] | Mapping[Element, int] = ()):
        self.group = group
        counts: Counter = Counter()
        if isinstance(elements, Mapping):
            for g, v in elements.items():
                if v < 0:
                    raise SequenceError(f"negative multiplicity {v}")
                counts[tuple(g)] += v
        else:
            for g in elements:
                counts[tuple(g)] += 1
        for g in counts:
            if not group.contains(g):
                raise GroupError(f"{g} is not an element of {group}")
        self._items = tuple(sorted((g, v) for g, v in counts.items() if v > 0))
        self._hash = None

    # multiset protocol

    @property
    def multiplicities(self) -> dict[Element, int]:
        return dict(self._items)

    def multiplicity(self, g: Element) -> int:
        return self.multiplicities.get(tuple(g), 0)

    def support(self) -> list[Element]:
        return [g for g, _ in self._items]

    def elements(self) -> list[Element]:
        """Terms in canonical order, repeated by multiplicity."""
        return [g for g, v in self._items for _ in range(v)]

    def __iter__(self):
        return iter(self.elements())

    def __len__(self):
        return sum(v for _, v in self._items)

    def __eq__(self, other):
        return isinstance(other, Sequence) and self.group == other.group and self._items == other._items

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.group, self._items))
        return self._hash

    def __repr__(self):
        return f"Sequence({self.group.key!r}, {format_sequence(self)!r})"

    def __mul__(self, other: "Sequence") -> "Sequence":
        if other.group != self.group:
            raise SequenceError("sequences over different groups")
        c = Counter(self.multiplicities)
        c.update(other.multiplicities)
        return Sequence(self.group, c)

    def is_subsequence_of(self, other: "Sequence") -> bool:
        mine = other.multiplicities
        return all(mine.get(g, 0) >= v for g, v in self._items)

    # invariants

    @property
    def length(self) -> int:
        return len(self)

    def sigma(self) -> Element:
        G = self.group
        return G.sum(G.scale(v, g) for g, v in self._items)

    def cross_number(self) -> CrossValue:
        G = self.group
        e = G.exponent
        return CrossValue(sum(v * (e // G.element_order(g)) for g, v in self._items), e)

    def subset_sums(self) -> SumSet:
        G = self.group
        tables = G.tables
        mask = 0
        for g in self.elements():
            gi = G.index(g)
            mask = mask | _translate(tables, mask, gi) | (1 << gi)
        return SumSet(G, mask)

    def is_zero_sum(self) -> bool:
        return self.sigma() == self.group.zero

    def is_zero_sum_free(self) -> bool:
        return not (self.subset_sums().mask & 1)

    def is_minimal_zero_sum(self) -> bool:
        if not self._items or not self.is_zero_sum():
            return False
        g = self._items[0][0]
        return self.replace([g], []).is_zero_sum_free()

    def replace(self, out: Iterable[Element], into: Iterable[Element]) -> "Sequence":
        c = Counter(self.multiplicities)
        for g in out:
            g = tuple(g)
            if c[g] == 0:
                raise SequenceError(f"{g} is not a term of the sequence")
            c[g] -= 1
        for g in into:
            c[tuple(g)] += 1
        return Sequence(self.group, c)

    def map(self, f, group: FiniteAbelianGroup) -> "Sequence":
        c: Counter = Counter()
        for g, v in self._items:
            c[f(g)] += v
        return Sequence(group, c)


def sigma(S: Sequence) -> Element:
    return S.sigma()


def length(S: Sequence) -> int:
    return len(S)


def cross_number(S: Sequence) -> CrossValue:
    return S.cross_number()


def subset_sums(S: Sequence) -> SumSet:
    return S.subset_sums()


def is_zero_sum_free(S: Sequence) -> bool:
    return S.is_zero_sum_free()


def is_minimal_zero_sum(S: Sequence) -> bool:
    return S.is_minimal_zero_sum()


def replace(S: Sequence, out, into) -> Sequence:
    return S.replace(out, into)


def concat(S1: Sequence, S2: Sequence, ds: DirectSum) -> Sequence:
    """S1 and S2 pushed into G1 + G2 along the direct-sum embeddings."""
    return S1.map(ds.embed1, ds.group) * S2.map(ds.embed2, ds.group)


def power(G: FiniteAbelianGroup, g: Element, j: int) -> Sequence:
    return Sequence(G, {tuple(g): j})


_TERM = re.compile(r"^\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)\s*(?:\^\s*(\d+))?$")


def parse_sequence(G: FiniteAbelianGroup, text: str) -> Sequence:
    """Parse literals like '(1,0)^2;(1,1)'; coordinates are reduced mod the factors."""
    counts: Counter = Counter()
    text = text.strip()
    if not text:
        return Sequence(G)
    for term in text.split(";"):
        m = _TERM.match(term.strip())
        if not m:
            raise SequenceError(f"cannot parse term {term.strip()!r}")
        coords = [int(c) for c in m.group(1).split(",")]
        counts[G.reduce(coords)] += int(m.group(2) or 1)
    return Sequence(G, counts)


def format_sequence(S: Sequence) -> str:
    parts = []
    for g, v in S._items:
        term = "(" + ",".join(map(str, g)) + ")"
        parts.append(term if v == 1 else f"{term}^{v}")
    return ";".join(parts)
