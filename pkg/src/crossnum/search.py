"""Exhaustive computation of w(G), W(G), d(G), D(G) and eta(G).

The engine walks zero-sum free sequences by extending one element at a
time. A partial sequence S is summarised by (Σ(S), σ(S)): whether S*T is
zero-sum free and what S*T contributes afterwards depend only on that
pair, so the DFS memoizes every pair it finishes and never revisits one.
Each memo entry stores the set of numerator increments reachable below it
(for w) and the set of increments plus closing term exp/ord(-σ) (for W),
as bitmasks. Minimal zero-sum sequences are exactly the closures S*(-σ(S))
of zero-sum free S, so one pass yields both sets.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import _kernels
from ._kernels import Budget, BudgetExceeded
from .groups import Element, FiniteAbelianGroup, iso_class, subgroups
from .sequences import CrossSet, CrossValue, Sequence

log = logging.getLogger(__name__)

ENGINE_VERSION = "crossnum-dag-1"
DEFAULT_LIMIT = 64
ETA_LIMIT = 32


class SearchError(RuntimeError):
    pass


class PartialResultError(SearchError):
    """Budget ran out; `frontier` is the partial sequence being explored."""

    def __init__(self, message: str, states: int, frontier: Sequence | None):
        super().__init__(message)
        self.states = states
        self.frontier = frontier


@dataclass(frozen=True)
class SearchResult:
    group: FiniteAbelianGroup
    w_set: CrossSet
    W_set: CrossSet
    d_small: int
    D_large: int
    states_visited: int
    millis: int = 0
    backend: str = ""
    support: frozenset | None = field(default=None, compare=False)

    @property
    def k_max(self) -> CrossValue | None:
        return self.w_set.max if len(self.w_set) else None

    @property
    def K_max(self) -> CrossValue:
        return self.W_set.max


def _support_mask(G: FiniteAbelianGroup, support: Iterable[Element] | None) -> np.ndarray:
    N = G.order
    allowed = np.zeros(N, dtype=np.bool_)
    if support is None:
        allowed[1:] = True
    else:
        for g in support:
            allowed[G.index(tuple(g))] = True
        allowed[0] = False
    return allowed


def numerator_bound(G: FiniteAbelianGroup) -> int:
    """Upper bound on exp*k(S) + exp over zero-sum free S.

    Terms of order exactly o lie in G[o] = {x : o x = 0} and form a
    zero-sum free sequence there, so there are at most |G[o]| - 1 of them.
    """
    e = G.exponent
    bound = e
    for o in range(2, e + 1):
        if e % o == 0:
            bound += (e // o) * (G.count_killed_by(o) - 1)
    return bound


def _frontier(G: FiniteAbelianGroup, path: list[int]) -> Sequence:
    return Sequence(G, [G.element(i) for i in path])


def enumerate_sets(
    G: FiniteAbelianGroup,
    support: Iterable[Element] | None = None,
    budget: Budget | None = None,
    backend: str | None = None,
) -> SearchResult:
    """Compute w, W and the Davenport constants of G (optionally over a support subset).

    W includes exp/exp = 1 from the trivial sequence closed by 0; this never
    changes W(G) as a set since g^ord(g) also has cross number 1.
    """
    support_key = None if support is None else frozenset(tuple(g) for g in support)
    budget = budget or Budget()
    backend = _kernels.backend_for(G.order, backend)
    return _enumerate_cached(G, support_key, budget.max_states, budget.max_seconds, backend)


# `enumerate` would shadow the builtin inside this module
enumerate_ = enumerate_sets


@lru_cache(maxsize=256)
def _enumerate_cached(G, support_key, max_states, max_seconds, backend) -> SearchResult:
    budget = Budget(max_states, max_seconds)
    tables = G.tables
    allowed = _support_mask(G, support_key)
    t0 = time.perf_counter()
    try:
        if backend == "numba":
            root, states = _kernels.dag_numba(tables.add, tables.neg, tables.weight, allowed,
                                              numerator_bound(G), budget)
        else:
            root, states = _kernels.dag_python(tables.add, tables.neg, tables.weight, allowed, budget)
    except BudgetExceeded as exc:
        raise PartialResultError(f"{G}: {exc.reason}", exc.states, _frontier(G, exc.path)) from None
    millis = int(round(1000 * (time.perf_counter() - t0)))
    mw, mW, dmax = root
    e = G.exponent
    w_set = CrossSet.from_mask(mw, e, drop_zero=True)
    W_set = CrossSet.from_mask(mW, e)
    log.debug("%s: %d states in %d ms (%s)", G, states, millis, backend)
    return SearchResult(G, w_set, W_set, dmax, dmax + 1, states, millis, backend, support_key)


def _target_numerator(G: FiniteAbelianGroup, target) -> int:
    if isinstance(target, CrossValue):
        return target.rescale(G.exponent).numerator
    if isinstance(target, Fraction):
        f = target * G.exponent
        if f.denominator != 1:
            raise SearchError(f"{target} is not a multiple of 1/{G.exponent}")
        return int(f)
    return int(target)


def membership(
    G: FiniteAbelianGroup,
    target,
    kind: str = "zsf",
    support: Iterable[Element] | None = None,
    budget: Budget | None = None,
) -> Sequence | None:
    """A sequence of the requested kind with cross number `target`, or None.

    `target` is a CrossValue, a Fraction, or an integer numerator over exp(G).
    `kind` is "zsf" (non-trivial zero-sum free) or "minimal".
    """
    if kind not in ("zsf", "minimal"):
        raise ValueError(f"unknown kind {kind!r}")
    need0 = _target_numerator(G, target)
    budget = budget or Budget()
    deadline = budget.deadline()
    tables = G.tables
    N = G.order
    allowed = _support_mask(G, support)
    trans = _translation_py(G)
    add = tables.add.tolist()
    neg = tables.neg.tolist()
    wt = tables.weight.tolist()
    children = [g for g in range(N) if allowed[g]]
    wmax = max((wt[g] for g in children), default=0)
    e = G.exponent
    minimal = kind == "minimal"
    failed: set = set()
    path: list[int] = []
    visited = 0

    def translate(S, g):
        t = trans[g]
        out, b = 0, 0
        while S:
            byte = S & 255
            if byte:
                out |= t[b][byte]
            S >>= 8
            b += 1
        return out

    def search(S, s, need):
        nonlocal visited
        if path:
            if minimal and need == wt[s]:
                return True
            if not minimal and need == 0:
                return True
        if need <= 0:
            return False
        key = (S, s, need) if minimal else (S, need)
        if key in failed:
            return False
        free = N - 1 - S.bit_count()
        if need > free * wmax + (e if minimal else 0):
            return False
        visited += 1
        if visited >= budget.max_states or (visited & 4095 == 0 and time.monotonic() > deadline):
            raise PartialResultError(f"{G}: membership budget exceeded", visited, _frontier(G, path))
        for g in children:
            w = wt[g]
            if w > need or S >> neg[g] & 1:
                continue
            path.append(g)
            if search(S | translate(S, g) | (1 << g), add[s][g], need - w):
                return True
            path.pop()
        failed.add(key)
        return False

    if search(0, 0, need0):
        elems = [G.element(i) for i in path]
        if minimal:
            elems.append(G.neg(G.sum(elems)))
        return Sequence(G, elems)
    if minimal and need0 == e:
        # the trivial sequence closed by 0
        return Sequence(G, [G.zero])
    return None


@lru_cache(maxsize=64)
def _translation_py(G: FiniteAbelianGroup):
    return _kernels.translation_tables_py(G.tables.add)


def eta(G: FiniteAbelianGroup, budget: Budget | None = None, limit: int = ETA_LIMIT) -> int:
    """Smallest t such that every length-t sequence has a zero-sum subsequence of length in [1, exp(G)].

    State: for every x in G, the set of lengths <= exp(G) of non-empty
    subsequences summing to x (bit l-1 for length l). Longer lengths are
    never needed, so the cap keeps the state finite.
    """
    if G.order > limit:
        raise SearchError(f"|G| = {G.order} exceeds eta bound {limit}")
    return _eta_cached(G, *(astuple_budget(budget or Budget())))


def astuple_budget(b: Budget) -> tuple[int, float]:
    return b.max_states, b.max_seconds


@lru_cache(maxsize=64)
def _eta_cached(G, max_states, max_seconds) -> int:
    N = G.order
    e = G.exponent
    cap = (1 << e) - 1
    add = G.tables.add.tolist()
    neg = G.tables.neg.tolist()
    sub = [[add[x][neg[g]] for g in range(N)] for x in range(N)]
    memo: dict[tuple, int] = {}
    deadline = time.monotonic() + max_seconds
    path: list[int] = []

    def best(P: tuple) -> int:
        hit = memo.get(P)
        if hit is not None:
            return hit
        top = 0
        for g in range(N):
            new = [P[x] | ((P[sub[x][g]] << 1) & cap) for x in range(N)]
            new[g] |= 1
            if new[0]:
                continue
            path.append(g)
            top = max(top, 1 + best(tuple(new)))
            path.pop()
        memo[P] = top
        if len(memo) >= max_states or (len(memo) & 1023 == 0 and time.monotonic() > deadline):
            raise PartialResultError(f"{G}: eta budget exceeded", len(memo), _frontier(G, path))
        return top

    return 1 + best((0,) * N)


@dataclass(frozen=True)
class SubgroupProfile:
    iso: FiniteAbelianGroup
    elements: frozenset
    result: SearchResult


def enumerate_subgroup_profiles(G: FiniteAbelianGroup, budget: Budget | None = None) -> list[SubgroupProfile]:
    """w/W of every subgroup H, computed inside G (denominator stays exp(G))."""
    out = []
    for H in subgroups(G):
        res = enumerate_sets(G, support=[h for h in H if h != G.zero], budget=budget)
        out.append(SubgroupProfile(iso_class(G, H), H, res))
    return out
