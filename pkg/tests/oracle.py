"""Naive reference implementations used only by the tests.

Everything here works straight from the definitions: sequences are sorted
tuples of residue vectors, subsequences are all sub-multisets, and no
subset-sum bookkeeping from the package is reused. The only shortcut is
that "contains a (short) zero-sum subsequence" is inherited by every
extension, so extensions of such sequences are not generated.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from math import gcd


def elements(factors):
    return list(itertools.product(*[range(n) for n in factors]))


def add(factors, a, b):
    return tuple((x + y) % n for x, y, n in zip(a, b, factors))


def order(factors, g):
    o = 1
    for c, n in zip(g, factors):
        oc = n // gcd(c, n)
        o = o * oc // gcd(o, oc)
    return o


def exponent(factors):
    e = 1
    for n in factors:
        e = e * n // gcd(e, n)
    return e


def submultisets(seq):
    """All non-empty sub-multisets of a sorted tuple, as Counters."""
    c = Counter(seq)
    items = sorted(c.items())
    for mult in itertools.product(*[range(v + 1) for _, v in items]):
        if any(mult):
            yield [(g, m) for (g, _), m in zip(items, mult) if m]


def total(factors, parts):
    s = tuple(0 for _ in factors)
    for g, m in parts:
        for _ in range(m):
            s = add(factors, s, g)
    return s


def has_zero_sum(factors, seq, max_len=None, proper=False):
    zero = tuple(0 for _ in factors)
    n = len(seq)
    for parts in submultisets(seq):
        size = sum(m for _, m in parts)
        if proper and size == n:
            continue
        if max_len is not None and size > max_len:
            continue
        if total(factors, parts) == zero:
            return True
    return False


def is_minimal(factors, seq):
    zero = tuple(0 for _ in factors)
    if not seq or total(factors, Counter(seq).items()) != zero:
        return False
    return not has_zero_sum(factors, seq, proper=True)


def cross(factors, seq):
    return sum(Fraction(1, order(factors, g)) for g in seq)


def _zsf_tree(factors):
    """Every non-trivial zero-sum free sequence, generated in nondecreasing order."""
    nonzero = [g for g in elements(factors) if any(g)]
    out = []

    def grow(seq):
        start = nonzero.index(seq[-1]) if seq else 0
        for g in nonzero[start:]:
            s2 = seq + (g,)
            if not has_zero_sum(factors, s2):
                out.append(s2)
                grow(s2)

    grow(())
    return out


def oracle(factors):
    """(w numerators, W numerators, d, eta) over exp(G)."""
    factors = tuple(factors)
    e = exponent(factors)
    zsf = _zsf_tree(factors)
    w = {int(cross(factors, s) * e) for s in zsf}
    d = max((len(s) for s in zsf), default=0)
    # minimal zero-sum sequences: every proper prefix in nondecreasing order is zero-sum free
    W = set()
    everything = elements(factors)
    for prefix in [()] + zsf:
        start = everything.index(prefix[-1]) if prefix else 0
        for g in everything[start:]:
            s2 = prefix + (g,)
            if is_minimal(factors, s2):
                W.add(int(cross(factors, s2) * e))
    return sorted(w), sorted(W), d, eta_oracle(factors)


def eta_oracle(factors):
    factors = tuple(factors)
    e = exponent(factors)
    nonzero = [g for g in elements(factors) if any(g)]
    best = 0

    def grow(seq):
        nonlocal best
        best = max(best, len(seq))
        start = nonzero.index(seq[-1]) if seq else 0
        for g in nonzero[start:]:
            s2 = seq + (g,)
            if not has_zero_sum(factors, s2, max_len=e):
                grow(s2)

    grow(())
    return best + 1


# abelian groups of order 2..10 as invariant factor chains
SMALL_GROUPS = [
    (2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (2, 4), (2, 2, 2), (9,), (3, 3), (10,),
]
