"""Finite abelian groups presented by invariant factors.

Elements are plain tuples of residues, one per invariant factor. The
lexicographic order on these tuples is the canonical element order used
everywhere else in the package (sequence printing, search tables,
deterministic witness choices).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import gcd, lcm, prod
from typing import Callable, Iterable, Sequence

Element = tuple[int, ...]

SUBGROUP_LIMIT = 64


class GroupError(ValueError):
    """Base class for invalid group data."""


class InvalidOrderError(GroupError):
    pass


class NoLiftError(GroupError):
    pass


class NotAGroupError(GroupError):
    pass


class CardinalityBoundError(GroupError):
    pass


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs here are tiny)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def valuation(p: int, n: int) -> int:
    """Largest e with p**e dividing n."""
    if n < 1:
        raise ValueError("valuation needs n >= 1")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def _chain_from_prime_powers(parts: dict[int, list[int]]) -> list[int]:
    # parts[p] = exponents; the largest exponent of every prime goes to the last factor
    r = max((len(v) for v in parts.values()), default=0)
    chain = [1] * r
    for p, exps in parts.items():
        for slot, e in zip(range(r - 1, -1, -1), sorted(exps, reverse=True)):
            chain[slot] *= p**e
    return chain


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """C_{n_1} + ... + C_{n_r} with n_1 | ... | n_r."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(int(n) for n in self.invariant_factors))
        for n in self.invariant_factors:
            if n < 2:
                raise InvalidOrderError(f"invariant factor {n} < 2")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a:
                raise GroupError(f"{a} does not divide {b}")

    # structure

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @cached_property
    def prime_power_factors(self) -> tuple[int, ...]:
        return tuple(sorted(p**e for n in self.invariant_factors for p, e in factorize(n).items()))

    @property
    def total_rank(self) -> int:
        return len(self.prime_power_factors)

    def p_rank(self, p: int) -> int:
        return sum(1 for q in self.prime_power_factors if q % p == 0)

    @property
    def primes(self) -> list[int]:
        return sorted(factorize(self.exponent))

    @property
    def is_cyclic(self) -> bool:
        return self.rank <= 1

    @property
    def is_p_group(self) -> bool:
        return len(self.primes) == 1

    @property
    def key(self) -> str:
        """Canonical spec string (invariant factors ascending)."""
        return ",".join(map(str, self.invariant_factors)) if self.invariant_factors else "1"

    def __str__(self):
        if not self.invariant_factors:
            return "C_1"
        return " + ".join(f"C_{n}" for n in self.invariant_factors)

    # elements

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def elements(self) -> list[Element]:
        """All elements in canonical (lexicographic) order."""
        return list(itertools.product(*(range(n) for n in self.invariant_factors)))

    def index(self, g: Element) -> int:
        i = 0
        for c, n in zip(g, self.invariant_factors):
            i = i * n + c
        return i

    def element(self, i: int) -> Element:
        out = []
        for n in reversed(self.invariant_factors):
            i, c = divmod(i, n)
            out.append(c)
        return tuple(reversed(out))

    def reduce(self, coords: Iterable[int]) -> Element:
        coords = tuple(coords)
        if len(coords) != self.rank:
            raise GroupError(f"expected {self.rank} coordinates, got {len(coords)}")
        return tuple(c % n for c, n in zip(coords, self.invariant_factors))

    def contains(self, g) -> bool:
        return (
            isinstance(g, tuple)
            and len(g) == self.rank
            and all(isinstance(c, int) and 0 <= c < n for c, n in zip(g, self.invariant_factors))
        )

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.invariant_factors))

    def sub(self, a: Element, b: Element) -> Element:
        return tuple((x - y) % n for x, y, n in zip(a, b, self.invariant_factors))

    def neg(self, a: Element) -> Element:
        return tuple(-x % n for x, n in zip(a, self.invariant_factors))

    def scale(self, m: int, a: Element) -> Element:
        return tuple(m * x % n for x, n in zip(a, self.invariant_factors))

    def sum(self, elems: Iterable[Element]) -> Element:
        return reduce(self.add, elems, self.zero)

    def element_order(self, g: Element) -> int:
        return lcm(1, *(n // gcd(n, c) for c, n in zip(g, self.invariant_factors)))

    def count_killed_by(self, d: int) -> int:
        """|{x : d x = 0}|."""
        return prod(gcd(d, n) for n in self.invariant_factors)

    def order_statistics(self) -> dict[int, int]:
        stats: dict[int, int] = {}
        for g in self.elements():
            o = self.element_order(g)
            stats[o] = stats.get(o, 0) + 1
        return stats

    def stats(self) -> "GroupStats":
        return group_stats(self)

    @cached_property
    def tables(self) -> "GroupTables":
        return GroupTables.build(self)


@dataclass(frozen=True)
class GroupStats:
    exponent: int
    rank: int
    total_rank: int
    p_ranks: dict[int, int] = field(default_factory=dict)


def group_stats(G: FiniteAbelianGroup) -> GroupStats:
    return GroupStats(G.exponent, G.rank, G.total_rank, {p: G.p_rank(p) for p in G.primes})


def element_order(G: FiniteAbelianGroup, g: Element) -> int:
    return G.element_order(g)


def trivial_group() -> FiniteAbelianGroup:
    return FiniteAbelianGroup(())


def cyclic(n: int) -> FiniteAbelianGroup:
    return normalize_factors([n])


class Presentation:
    """Explicit isomorphism from C_{m_1} + ... + C_{m_k} onto its invariant-factor form.

    Each input coordinate is split by CRT into prime-power residues; the
    prime-power parts of each prime are sent largest-to-largest into the
    invariant factors, a residue a of C_{p^e} landing on a * (n_i / p^e).
    """

    def __init__(self, orders: Sequence[int]):
        orders = [int(m) for m in orders]
        for pos, m in enumerate(orders):
            if m < 2:
                raise InvalidOrderError(f"cyclic order {m} at position {pos} is < 2")
        self.orders = tuple(orders)
        # (input coord, modulus p^e, prime) for every prime-power component
        comps: dict[int, list[tuple[int, int]]] = {}
        for j, m in enumerate(orders):
            for p, e in factorize(m).items():
                comps.setdefault(p, []).append((e, j))
        chain = _chain_from_prime_powers({p: [e for e, _ in v] for p, v in comps.items()})
        self.group = FiniteAbelianGroup(chain)
        r = len(chain)
        # route[j] = list of (modulus q, target slot, multiplier)
        self._route: list[list[tuple[int, int, int]]] = [[] for _ in orders]
        for p, v in comps.items():
            ranked = sorted(v, key=lambda t: (-t[0], -t[1]))  # ties keep input order
            for slot, (e, j) in zip(range(r - 1, -1, -1), ranked):
                q = p**e
                self._route[j].append((q, slot, chain[slot] // q))

    def __call__(self, coords: Sequence[int]) -> Element:
        out = [0] * self.group.rank
        for c, route in zip(coords, self._route):
            for q, slot, mult in route:
                out[slot] += (c % q) * mult
        return self.group.reduce(out)

    def generator(self, j: int) -> Element:
        return self([1 if i == j else 0 for i in range(len(self.orders))])


def normalize_factors(orders: Sequence[int]) -> FiniteAbelianGroup:
    """The invariant-factor form of C_{orders[0]} + ... ."""
    return Presentation(orders).group


def parse_group(spec: str) -> FiniteAbelianGroup:
    """Parse '2,4' style specs; errors carry the character position."""
    text = spec.strip()
    if not text:
        raise GroupSpecError("empty group spec", 0)
    orders = []
    pos = 0
    for token in spec.split(","):
        stripped = token.strip()
        col = pos + (len(token) - len(token.lstrip()))
        if not stripped.isdigit():
            raise GroupSpecError(f"expected a positive integer, got {stripped!r}", col)
        if int(stripped) < 2:
            raise GroupSpecError(f"cyclic orders must be >= 2, got {stripped}", col)
        orders.append(int(stripped))
        pos += len(token) + 1
    return normalize_factors(orders)


class GroupSpecError(InvalidOrderError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class DirectSum:
    group: FiniteAbelianGroup
    embed1: Callable[[Element], Element]
    embed2: Callable[[Element], Element]


def direct_sum(G1: FiniteAbelianGroup, G2: FiniteAbelianGroup) -> DirectSum:
    r1 = G1.rank
    pres = Presentation(G1.invariant_factors + G2.invariant_factors)

    def embed1(g: Element) -> Element:
        return pres(tuple(g) + (0,) * G2.rank)

    def embed2(h: Element) -> Element:
        return pres((0,) * r1 + tuple(h))

    return DirectSum(pres.group, embed1, embed2)


def prime_divide(G: FiniteAbelianGroup, p: int, g: Element) -> Element:
    """First g0 (canonical order) with p*g0 = g and ord(g0) = p*ord(g)."""
    if not G.is_cyclic:
        raise GroupError("prime_divide needs a cyclic group")
    n = G.exponent
    o = G.element_order(g)
    if valuation(p, o) >= valuation(p, n):
        raise NoLiftError(f"v_{p}(ord {o}) already equals v_{p}({n})")
    for x in G.elements():
        if G.scale(p, x) == g and G.element_order(x) == p * o:
            return x
    raise NoLiftError(f"no {p}-th part of {g} in {G}")  # unreachable for cyclic G


def generated_subgroup(G: FiniteAbelianGroup, gens: Iterable[Element]) -> frozenset[Element]:
    H = {G.zero}
    frontier = [G.zero]
    gens = list(gens)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = G.add(x, g)
            if y not in H:
                H.add(y)
                frontier.append(y)
    return frozenset(H)


def subgroups(G: FiniteAbelianGroup, limit: int = SUBGROUP_LIMIT) -> list[frozenset[Element]]:
    """All subgroups, as element sets, sorted by size then canonical content."""
    if G.order > limit:
        raise CardinalityBoundError(f"|G| = {G.order} exceeds subgroup bound {limit}")
    found = {generated_subgroup(G, [g]) for g in G.elements()}
    frontier = list(found)
    cyclics = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclics:
                if C <= H:
                    continue
                J = frozenset(G.add(a, b) for a in H for b in C)
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted(found, key=lambda H: (len(H), sorted(H)))


def _chains_of_order(n: int) -> list[FiniteAbelianGroup]:
    per_prime = []
    for p, e in factorize(n).items():
        per_prime.append([(p, part) for part in _partitions(e)])
    out = []
    for combo in itertools.product(*per_prime):
        out.append(FiniteAbelianGroup(_chain_from_prime_powers({p: list(part) for p, part in combo})))
    return out


def _partitions(e: int, largest: int | None = None) -> list[tuple[int, ...]]:
    if e == 0:
        return [()]
    largest = e if largest is None else largest
    out = []
    for first in range(min(e, largest), 0, -1):
        for rest in _partitions(e - first, first):
            out.append((first,) + rest)
    return out


def iso_class_from_stats(stats: dict[int, int]) -> FiniteAbelianGroup:
    """Group whose element-order counts are `stats`."""
    size = sum(stats.values())
    for cand in _chains_of_order(size):
        if cand.order_statistics() == stats:
            return cand
    raise NotAGroupError(f"no abelian group has order statistics {stats}")


def iso_class(G: FiniteAbelianGroup, elements: Iterable[Element]) -> FiniteAbelianGroup:
    """Isomorphism type of a subgroup of G given by its elements."""
    elements = set(elements)
    if G.zero not in elements or any(G.add(a, b) not in elements for a in elements for b in elements):
        raise NotAGroupError("element set is not closed under addition")
    stats: dict[int, int] = {}
    for g in elements:
        o = G.element_order(g)
        stats[o] = stats.get(o, 0) + 1
    return iso_class_from_stats(stats)


def quotient(G: FiniteAbelianGroup, H: Iterable[Element]) -> FiniteAbelianGroup:
    """Isomorphism type of G/H, read off the orders of the cosets."""
    H = frozenset(H)
    seen: set[frozenset] = set()
    stats: dict[int, int] = {}
    for g in G.elements():
        coset = frozenset(G.add(g, h) for h in H)
        if coset in seen:
            continue
        seen.add(coset)
        m, x = 1, g
        while x not in H:
            x = G.add(x, g)
            m += 1
        stats[m] = stats.get(m, 0) + 1
    return iso_class_from_stats(stats)


def contains_square_of_2_part(G: FiniteAbelianGroup) -> bool:
    """True when G has a subgroup C_{2^k}^2 with 2^k the 2-part of exp(G)."""
    k = valuation(2, G.exponent) if G.exponent > 1 else 0
    if k == 0:
        return False
    return sum(1 for n in G.invariant_factors if n % 2**k == 0) >= 2


@dataclass
class GroupTables:
    """Index-based arithmetic tables shared by the search kernels."""

    size: int
    exponent: int
    add: "object"  # numpy int64 [N, N]
    neg: "object"  # numpy int64 [N]
    weight: "object"  # numpy int64 [N], exp/ord
    orders: "object"

    @classmethod
    def build(cls, G: FiniteAbelianGroup) -> "GroupTables":
        import numpy as np

        els = G.elements()
        N = len(els)
        coords = np.array(els, dtype=np.int64).reshape(N, G.rank)
        mods = np.array(G.invariant_factors, dtype=np.int64)
        radix = np.ones(G.rank, dtype=np.int64)
        for i in range(G.rank - 2, -1, -1):
            radix[i] = radix[i + 1] * mods[i + 1]
        summed = (coords[:, None, :] + coords[None, :, :]) % mods
        add = (summed * radix).sum(axis=2) if G.rank else np.zeros((N, N), dtype=np.int64)
        neg = ((-coords) % mods * radix).sum(axis=1) if G.rank else np.zeros(N, dtype=np.int64)
        orders = np.array([G.element_order(g) for g in els], dtype=np.int64)
        return cls(N, G.exponent, add.astype(np.int64), neg.astype(np.int64), G.exponent // orders, orders)
