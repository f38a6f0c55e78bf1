"""Explicit zero-sum free and minimal zero-sum sequences with known cross numbers.

Every builder returns a `Witness`: the sequence together with the claims
made about it (kind, cross number, sometimes σ or order counts). The claims
are computed from the parameters, not from the sequence, so `verify()` is a
real check.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence as Seq

from .groups import (
    DirectSum,
    Element,
    FiniteAbelianGroup,
    GroupError,
    Presentation,
    factorize,
    is_prime,
    normalize_factors,
    prime_divide,
    valuation,
)
from .sequences import CrossValue, Sequence


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    name: str
    sequence: Sequence
    kind: str  # "zsf" or "minimal"
    claimed: CrossValue
    sigma: Element | None = None
    avoids: tuple[Element, ...] = ()  # claimed to lie outside Σ(S)
    order_counts: tuple[tuple[int, int], ...] | None = None

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.sequence.group

    def checks(self) -> dict[str, bool]:
        S = self.sequence
        out = {
            "kind": S.is_zero_sum_free() and len(S) > 0 if self.kind == "zsf" else S.is_minimal_zero_sum(),
            "cross number": S.cross_number() == self.claimed.rescale(S.group.exponent),
        }
        if self.sigma is not None:
            out["sigma"] = S.sigma() == tuple(self.sigma)
        if self.avoids:
            sums = S.subset_sums()
            out["avoids"] = not any(tuple(g) in sums for g in self.avoids)
        if self.order_counts is not None:
            got = Counter(S.group.element_order(g) for g in S)
            out["orders"] = sorted(got.items()) == sorted(self.order_counts)
        return out

    def verify(self) -> bool:
        return all(self.checks().values())


def _cv(G: FiniteAbelianGroup, value: Fraction) -> CrossValue:
    num = value * G.exponent
    if num.denominator != 1:
        raise ConstructionError(f"{value} is not a multiple of 1/{G.exponent}")
    return CrossValue(int(num), G.exponent)


# ---------------------------------------------------------------------------
# basic pieces


def basis_witness(G: FiniteAbelianGroup) -> tuple[Witness, Witness]:
    """T = prod e_i^(q_i - 1) over a prime-power basis, and the atom T(e_1 + ... + e_s)."""
    if G.order == 1:
        raise ConstructionError("the trivial group has no basis witness")
    qs = G.prime_power_factors
    pres = Presentation(qs)
    if pres.group != G:
        raise ConstructionError("presentation mismatch")  # pragma: no cover
    gens = [pres.generator(i) for i in range(len(qs))]
    T = Sequence(G, {e: q - 1 for e, q in zip(gens, qs)})
    S = T * Sequence(G, [G.sum(gens)])
    kstar = sum(Fraction(q - 1, q) for q in qs)
    return (
        Witness("basis-T", T, "zsf", _cv(G, kstar)),
        Witness("basis-S", S, "minimal", _cv(G, kstar + Fraction(1, G.exponent))),
    )


def power_witness(G: FiniteAbelianGroup, g: Element, j: int) -> Witness:
    g = tuple(g)
    o = G.element_order(g)
    if not 1 <= j <= o - 1:
        raise ConstructionError(f"j = {j} outside [1, {o - 1}]")
    return Witness("power", Sequence(G, {g: j}), "zsf", _cv(G, Fraction(j, o)))


def glue_minimal(U1: Sequence, g1: Element, U2: Sequence, g2: Element, ds: DirectSum) -> Witness:
    """(g1^-1 U1)(g2^-1 U2)(g1 + g2) over G1 + G2."""
    g1, g2 = tuple(g1), tuple(g2)
    for U, g in ((U1, g1), (U2, g2)):
        if U.multiplicity(g) == 0:
            raise ConstructionError(f"{g} is not a term of the sequence")
    G = ds.group
    rest1 = U1.replace([g1], []).map(ds.embed1, G)
    rest2 = U2.replace([g2], []).map(ds.embed2, G)
    joint = G.add(ds.embed1(g1), ds.embed2(g2))
    S = rest1 * rest2 * Sequence(G, [joint])
    claim = (U1.cross_number().as_fraction() - Fraction(1, U1.group.element_order(g1))
             + U2.cross_number().as_fraction() - Fraction(1, U2.group.element_order(g2))
             + Fraction(1, G.element_order(joint)))
    return Witness("glue", S, "minimal", _cv(G, claim))


def fix_valuation(A: Sequence) -> Witness:
    """A minimal zero-sum sequence with k(A) and, for each p | n, a term of order with full p-valuation."""
    G = A.group
    if not G.is_cyclic:
        raise ConstructionError("fix_valuation needs a cyclic group")
    if not A.is_minimal_zero_sum():
        raise ConstructionError("input is not a minimal zero-sum sequence")
    n = G.exponent
    S = A
    for p in sorted(factorize(n)) if n > 1 else []:
        target = valuation(p, n)
        while True:
            # terms ordered by decreasing v_p(ord), ties in canonical order
            g = min(S.support(), key=lambda x: (-valuation(p, G.element_order(x)), x))
            if valuation(p, G.element_order(g)) == target:
                break
            g0 = prime_divide(G, p, g)
            S = S.replace([g], [g0] * p)
    return Witness("fix-valuation", S, "minimal", A.cross_number())


def glue_prop_W(S_c: Sequence, q: Seq[int], j: Seq[int]) -> Witness:
    """An atom over C_n + C_q1 + ... with cross number k(S_c) + Σ j_i / q_i.

    For each prime, a term g of S_c whose order has full valuation is
    replaced by g - Σ j_i e_i (same order) and the e_i^j_i are appended.
    """
    Gc = S_c.group
    if not Gc.is_cyclic or Gc.order == 1:
        raise ConstructionError("S_c must live in a non-trivial cyclic group")
    n = Gc.exponent
    q, j = [int(x) for x in q], [int(x) for x in j]
    if len(q) != len(j):
        raise ConstructionError("q and j differ in length")
    for qi, ji in zip(q, j):
        if qi < 2 or n % qi or len(factorize(qi)) != 1:
            raise ConstructionError(f"{qi} is not a prime power dividing {n}")
        if not 0 <= ji <= qi - 1:
            raise ConstructionError(f"j = {ji} outside [0, {qi - 1}]")
    base = fix_valuation(S_c).sequence
    mods = (n,) + tuple(q)
    t = len(q)

    def order(v):
        o = 1
        for c, m in zip(v, mods):
            oc = m // _gcd(c, m)
            o = o * oc // _gcd(o, oc)
        return o

    terms = [(c[0],) + (0,) * t for c in base]
    extra = []
    primes = sorted({next(iter(factorize(qi))) for qi in q})
    for p in primes:
        block = [i for i, qi in enumerate(q) if qi % p == 0 and j[i]]
        if not block:
            continue
        full = valuation(p, n)
        pick = min((v for v in terms if valuation(p, order(v)) == full), default=None)
        if pick is None:
            raise ConstructionError(f"no term of full {p}-valuation")  # pragma: no cover
        star = list(pick)
        for i in block:
            star[1 + i] = (star[1 + i] - j[i]) % q[i]
            extra += [tuple(1 if k == 1 + i else 0 for k in range(1 + t))] * j[i]
        terms.remove(pick)
        terms.append(tuple(star))
    pres = Presentation(mods)
    G = pres.group
    S = Sequence(G, [pres(v) for v in terms + extra])
    claim = S_c.cross_number().as_fraction() + sum(Fraction(ji, qi) for qi, ji in zip(q, j))
    return Witness("glue-W", S, "minimal", _cv(G, claim))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


# ---------------------------------------------------------------------------
# cyclic p^k pieces


def _odd_prime_power(G: FiniteAbelianGroup) -> tuple[int, int]:
    f = factorize(G.order) if G.order > 1 else {}
    if not G.is_cyclic or len(f) != 1 or 2 in f:
        raise ConstructionError(f"{G} is not cyclic of odd prime-power order")
    p, k = next(iter(f.items()))
    return p, k


def _sj_coeffs(p: int, pk: int, j: int) -> list[int]:
    if not 1 <= j <= pk - 1:
        raise ConstructionError(f"j = {j} outside [1, {pk - 1}]")
    if (pk - j) % p:
        return [1] * (j - 1) + [pk - j]
    assert j >= 2, "fallback needs j >= 2"
    return [1] * (j - 2) + [2, pk - j - 1]


def _tj_coeffs(p: int, pk: int, j: int) -> list[int]:
    if not 1 <= j <= pk - 2:
        raise ConstructionError(f"j = {j} outside [1, {pk - 2}]")
    if (pk - j - 1) % p:
        return [1] * (j - 1) + [pk - j - 1]
    assert j >= 2, "fallback needs j >= 2"
    return [1] * (j - 2) + [2, pk - j - 2]


def _check_generator(G: FiniteAbelianGroup, f: Element) -> Element:
    f = tuple(f)
    if G.element_order(f) != G.order:
        raise ConstructionError(f"{f} does not generate {G}")
    return f


def cyclic_Sj(G: FiniteAbelianGroup, f: Element, j: int) -> Witness:
    """Zero-sum free, σ = -f, k = j/p^k, over cyclic G of odd prime-power order."""
    p, k = _odd_prime_power(G)
    f = _check_generator(G, f)
    S = Sequence(G, [G.scale(c, f) for c in _sj_coeffs(p, G.order, j)])
    return Witness("S_j", S, "zsf", _cv(G, Fraction(j, G.order)), sigma=G.neg(f))


def cyclic_Tj(G: FiniteAbelianGroup, f: Element, j: int) -> Witness:
    """Zero-sum free, σ = -2f, -f outside Σ, k = j/p^k."""
    p, k = _odd_prime_power(G)
    f = _check_generator(G, f)
    S = Sequence(G, [G.scale(c, f) for c in _tj_coeffs(p, G.order, j)])
    return Witness("T_j", S, "zsf", _cv(G, Fraction(j, G.order)),
                   sigma=G.neg(G.scale(2, f)), avoids=(G.neg(f),))


def _odd_prime(p: int) -> None:
    if not is_prime(p) or p == 2:
        raise ConstructionError(f"{p} is not an odd prime")


def w2pk_witnesses(p: int, k: int, l: int) -> tuple[Witness, Witness]:
    """B_l = e(e+f)f^(p^k-1-l) and B = B_l (e+f)^-1 over C_2 + C_{p^k}."""
    _odd_prime(p)
    pk = p**k
    if not 0 <= l <= (pk - 1) // 2:
        raise ConstructionError(f"l = {l} outside [0, {(pk - 1) // 2}]")
    pres = Presentation([2, pk])
    G = pres.group
    e, f = pres.generator(0), pres.generator(1)
    ef = G.add(e, f)
    Bl = Sequence(G, {e: 1, ef: 1, f: pk - 1 - l})
    B = Bl.replace([ef], [])
    kl = Fraction(3 * pk - 1 - 2 * l, 2 * pk)
    return (
        Witness("B_l", Bl, "minimal" if l == 0 else "zsf", _cv(G, kl)),
        Witness("B", B, "zsf", _cv(G, kl - Fraction(1, 2 * pk))),
    )


C22_VARIANTS = ("Aj", "Ajprime", "special1", "special2")


def c22_witnesses(p: int, k: int, j: int | None, variant: str) -> Witness:
    """Atoms over C_2 + C_2 + C_{p^k} filling the top of W."""
    _odd_prime(p)
    pk = p**k
    pres = Presentation([2, 2, pk])
    G = pres.group
    e1, e2, f = (pres.generator(i) for i in range(3))
    add, neg = G.add, G.neg
    u = Fraction(1, 2 * pk)
    if variant == "Aj":
        cs = _sj_coeffs(p, pk, j)
        terms = [e1, e2, add(add(e1, e2), f)] + [G.scale(c, f) for c in cs]
        claim = 1 + (1 + 2 * j) * u
    elif variant == "Ajprime":
        cs = _tj_coeffs(p, pk, j)
        terms = [e1, e2, add(e1, f), add(e2, f)] + [G.scale(c, f) for c in cs]
        claim = 1 + (2 + 2 * j) * u
    elif variant == "special1":
        terms = [e1, e2, add(e1, f), add(e2, neg(f))]
        claim = 1 + 2 * u
    elif variant == "special2":
        terms = [add(add(e1, e2), neg(f)), add(e1, f), add(e2, f)] + [f] * (pk - 1)
        claim = 1 + u
    else:
        raise ConstructionError(f"unknown variant {variant!r}; expected one of {C22_VARIANTS}")
    return Witness(variant, Sequence(G, terms), "minimal", _cv(G, claim))


# ---------------------------------------------------------------------------
# gap witnesses for C_p^r + C_q^s


def gap_regime_ok(p: int, q: int, s: int, eta_fn=None) -> tuple[bool, int]:
    """(p >= eta(C_q^s) + 2q, eta(C_q^s))."""
    if eta_fn is None:
        from .search import eta as eta_fn
    e = eta_fn(normalize_factors([q] * s))
    return p >= e + 2 * q, e


def gap_witness(p: int, r: int, q: int, s: int, closed: bool = False, deficit: int = 0,
                swaps: int = 0, eta_fn=None) -> Witness:
    """S_q S_p' with `swaps` terms g of S_p' replaced by g + h.

    S_q = prod f_i^(q-1) and S_p' = prod e_i^(p-1) with `deficit` copies of
    e_1 removed. The closed variant picks h so that σ has order pq and
    appends -σ.
    """
    _odd_prime(p)
    _odd_prime(q)
    if p <= q:
        raise ConstructionError("need p > q")
    if r < 1 or s < 1:
        raise ConstructionError("need r, s >= 1")
    if deficit not in (0, 1) or swaps not in (0, 1, 2):
        raise ConstructionError("deficit must be 0 or 1 and swaps 0, 1 or 2")
    ok, eta_q = gap_regime_ok(p, q, s, eta_fn)
    if not ok:
        raise ConstructionError(f"p = {p} < eta(C_{q}^{s}) + 2q = {eta_q + 2 * q}")
    pres = Presentation([p] * r + [q] * s)
    G = pres.group
    e = [pres.generator(i) for i in range(r)]
    f = [pres.generator(r + i) for i in range(s)]
    Sp = [x for x in e for _ in range(p - 1)]
    for _ in range(deficit):
        Sp.remove(e[0])
    Sq = [x for x in f for _ in range(q - 1)]
    q_part = Presentation([q] * s)
    hs = [tuple(v) for v in q_part.group.elements() if any(v)]
    if q_part.group.rank != s:
        raise ConstructionError("unexpected q-part presentation")  # pragma: no cover

    def lift(v):
        return pres((0,) * r + tuple(v))

    for hv in hs:
        h = lift(hv)
        terms = Sq + [G.add(g, h) for g in Sp[:swaps]] + Sp[swaps:]
        sig = G.sum(terms)
        if not closed or G.element_order(sig) == p * q:
            break
    else:
        raise ConstructionError("no h gives a sum of order pq")  # pragma: no cover
    M = Fraction(r * (p - 1) - deficit - swaps, p) + Fraction(swaps, p * q)
    value = M + Fraction(s * (q - 1), q)
    n_p = r * (p - 1) - deficit - swaps
    counts = {q: s * (q - 1), p: n_p, p * q: swaps}
    kind = "zsf"
    if closed:
        terms = terms + [G.neg(sig)]
        value += Fraction(1, p * q)
        counts[p * q] += 1
        kind = "minimal"
    name = f"gap{'-closed' if closed else ''}(deficit={deficit},swaps={swaps})"
    return Witness(name, Sequence(G, terms), kind, _cv(G, value),
                   order_counts=tuple(sorted((o, c) for o, c in counts.items() if c)))


def gap_member_witnesses(p: int, r: int, q: int, s: int, eta_fn=None) -> list[Witness]:
    """All table rows (deficit x swaps), open and closed."""
    return [gap_witness(p, r, q, s, closed, d, w, eta_fn)
            for closed in (False, True) for d in (0, 1) for w in (0, 1, 2)]
