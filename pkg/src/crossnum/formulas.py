"""Closed-form constants, predicted shapes of w(G) and W(G), and the checks that compare them with search output."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .groups import (
    FiniteAbelianGroup,
    contains_square_of_2_part,
    factorize,
    is_prime,
    normalize_factors,
    valuation,
)
from .sequences import CrossSet, CrossValue

EQUALS = "equals"
SUBSET = "subset-of-computed"  # predicted values all occur
SUPERSET = "superset-of-computed"  # computed values all lie in the prediction
EXCLUDES = "excludes"
MAX = "max"
MIN = "min"


class FormulaError(ValueError):
    pass


# ---------------------------------------------------------------------------
# constants


def k_star(G: FiniteAbelianGroup) -> CrossValue:
    if G.order == 1:
        return CrossValue(0, 1)
    e = G.exponent
    return CrossValue(sum((q - 1) * (e // q) for q in G.prime_power_factors), e)


def K_star(G: FiniteAbelianGroup) -> CrossValue:
    if G.order == 1:
        return CrossValue(1, 1)
    k = k_star(G)
    return CrossValue(k.numerator + 1, k.denominator)


def davenport(G: FiniteAbelianGroup) -> int | None:
    """D(G) where a closed form is known (cyclic groups and p-groups), else None."""
    if G.order == 1:
        return 1
    if G.is_cyclic:
        return G.order
    if G.is_p_group:
        return 1 + sum(q - 1 for q in G.prime_power_factors)
    return None


# ---------------------------------------------------------------------------
# integer set utilities


def interval(a: int, b: int) -> set[int]:
    return set(range(a, b + 1))


def delta_set(A: Iterable[int]) -> set[int]:
    xs = sorted(set(A))
    if len(xs) < 2:
        raise FormulaError("delta set needs at least two elements")
    return {b - a for a, b in zip(xs, xs[1:])}


def sumset(A: Iterable[int], B: Iterable[int]) -> set[int]:
    B = set(B)
    return {a + b for a in set(A) for b in B}


def interval_add(l: int, A: Iterable[int]) -> set[int]:
    """[0, l-1] + A."""
    return sumset(range(l), A)


def s_fold(A: Iterable[int], s: int) -> set[int]:
    if s < 1:
        raise FormulaError("s-fold sumset needs s >= 1")
    A = set(A)
    out = set(A)
    for _ in range(s - 1):
        out = sumset(out, A)
    return out


def dilate(factor: Fraction, A: Iterable[int]) -> set[int]:
    out = set()
    for a in A:
        v = Fraction(factor) * a
        if v.denominator != 1:
            raise FormulaError(f"{factor} * {a} is not an integer")
        out.add(int(v))
    return out


@dataclass(frozen=True)
class FringeProfile:
    lower: tuple[int, ...]
    middle: tuple[int, int]
    upper: tuple[int, ...]


def fringe_profile(A: Iterable[int]) -> FringeProfile:
    """Split a finite set into lower fringe, longest interval, upper fringe.

    Descriptive only: used to look at the s-fold sumsets of exp*w°(G),
    which are intervals apart from bounded pieces at both ends.
    """
    xs = sorted(set(A))
    if not xs:
        raise FormulaError("empty set")
    best = (xs[0], xs[0])
    start = xs[0]
    for a, b in zip(xs, xs[1:] + [None]):
        if b != a + 1:
            if a - start > best[1] - best[0]:
                best = (start, a)
            start = b
    lo, hi = best
    return FringeProfile(tuple(x for x in xs if x < lo), best, tuple(x for x in xs if x > hi))


# ---------------------------------------------------------------------------
# predictions


@dataclass(frozen=True)
class Prediction:
    theorem_id: str
    group: FiniteAbelianGroup
    kind: str  # "w" or "W"
    relation: str
    predicted: frozenset
    preconditions: tuple[tuple[str, bool], ...] = ()

    @property
    def comparable(self) -> bool:
        return all(ok for _, ok in self.preconditions)

    def check(self, computed: CrossSet) -> tuple[bool, list[int]]:
        """(passed, offending numerators)."""
        got = set(computed.numerators)
        want = set(self.predicted)
        if self.relation == EQUALS:
            bad = sorted(got ^ want)
        elif self.relation == SUBSET:
            bad = sorted(want - got)
        elif self.relation == SUPERSET:
            bad = sorted(got - want)
        elif self.relation == EXCLUDES:
            bad = sorted(want & got)
        elif self.relation == MAX:
            bad = [] if got and max(got) in want else ([max(got)] if got else [])
        elif self.relation == MIN:
            bad = [] if got and min(got) in want else ([min(got)] if got else [])
        else:
            raise FormulaError(f"unknown relation {self.relation}")
        return not bad, bad


def _even_up_to(top: int) -> set[int]:
    return set(range(2, top + 1, 2))


def is_pgroup_case_two(G: FiniteAbelianGroup) -> bool:
    """p = 2 and the top invariant factor is strictly larger than the one below it."""
    if not G.is_p_group or G.primes != [2]:
        return False
    f = (1,) + G.invariant_factors
    return f[-2] < f[-1]


def predict_pgroup(G: FiniteAbelianGroup) -> tuple[Prediction, Prediction]:
    if not G.is_p_group:
        raise FormulaError(f"{G} is not a p-group")
    top_W = K_star(G).numerator
    top_w = k_star(G).numerator
    W = _even_up_to(top_W) if is_pgroup_case_two(G) else interval(2, top_W)
    return (
        Prediction("pgroup", G, "W", EQUALS, frozenset(W)),
        Prediction("pgroup", G, "w", EQUALS, frozenset(interval(1, top_w))),
    )


def predict_2pk(p: int, k: int) -> tuple[Prediction, Prediction]:
    if not is_prime(p) or p == 2:
        raise FormulaError("p must be an odd prime")
    G = normalize_factors([2 * p**k])
    pk = p**k
    return (
        Prediction("cyclic-2pk", G, "W", EQUALS, frozenset(_even_up_to(K_star(G).numerator))),
        Prediction("cyclic-2pk", G, "w", EQUALS, frozenset(interval(1, 3 * pk - 2))),
    )


def predict_c2r_odd(Gp: FiniteAbelianGroup, r: int) -> tuple[Prediction, Prediction]:
    if not Gp.is_p_group or Gp.exponent % 2 == 0:
        raise FormulaError(f"{Gp} is not a p-group of odd order")
    if r not in (1, 2):
        raise FormulaError("only r = 1, 2 have unconditional descriptions")
    G = normalize_factors(list(Gp.invariant_factors) + [2] * r)
    top_W = K_star(G).numerator
    W = _even_up_to(top_W) if r == 1 else interval(2, top_W)
    return (
        Prediction("c2r-odd", G, "W", EQUALS, frozenset(W)),
        Prediction("c2r-odd", G, "w", EQUALS, frozenset(interval(1, k_star(G).numerator))),
    )


def split_top_cyclic(G: FiniteAbelianGroup) -> FiniteAbelianGroup:
    """H with G = H + C_exp(G)."""
    return FiniteAbelianGroup(G.invariant_factors[:-1])


def predict_lower_bounds(G: FiniteAbelianGroup, H: FiniteAbelianGroup | None = None) -> list[Prediction]:
    """Progressions that must sit inside w(G) and W(G) for G = H + C_n, n = exp(G)."""
    n = G.exponent
    H = split_top_cyclic(G) if H is None else H
    pre = (("G = H + C_exp", normalize_factors(list(H.invariant_factors) + [n]) == G),)
    kH = Fraction(k_star(H).numerator, k_star(H).denominator)
    nkH = kH * n
    if nkH.denominator != 1:
        raise FormulaError("exp(H) must divide exp(G)")
    nkH = int(nkH)
    out = [Prediction("lower-bounds", G, "w", SUBSET, frozenset(interval(1, n - 1 + nkH)), pre)]
    if n % 2:
        out.append(Prediction("lower-bounds", G, "W", SUBSET, frozenset(interval(2, n + nkH)), pre))
    else:
        out.append(Prediction("lower-bounds", G, "W", SUBSET, frozenset(_even_up_to(n + nkH)), pre))
    copies = sum(1 for m in G.invariant_factors if m == n)
    out.append(Prediction("progression", G, "w", SUBSET, frozenset(interval(1, (n - 1) * copies))))
    return out


def gap_numbers(p: int, r: int, q: int, s: int) -> dict[str, object]:
    """Numerators (over pq) of the predicted members and holes near k*(G) and K*(G)."""
    top = r * (p - 1) * q + s * (q - 1) * p  # pq k*(G)
    out = {}
    for kind, t in (("w", top), ("W", top + 1)):
        out[kind] = {
            "top": t,
            "holes": interval(t - (2 * q - 3), t - (q + 1)) | interval(t - (q - 2), t - 1),
            "members": {t - (2 * q - 2), t - q, t - (q - 1), t},
        }
    return out


def gap_regime(p: int, q: int, eta_q: int) -> tuple[tuple[str, bool], ...]:
    return (
        ("p prime", is_prime(p)),
        ("q odd prime", is_prime(q) and q % 2 == 1),
        ("p > q", p > q),
        (f"p >= eta(C_q^s) + 2q = {eta_q + 2 * q}", p >= eta_q + 2 * q),
    )


def predict_gaps(p: int, r: int, q: int, s: int, eta_q: int) -> list[Prediction]:
    """Holes and required members near the top of w and W for C_p^r + C_q^s.

    eta_q is eta(C_q^s); callers compute it by search.
    """
    G = normalize_factors([p] * r + [q] * s)
    pre = gap_regime(p, q, eta_q)
    nums = gap_numbers(p, r, q, s)
    out = []
    for kind, lo in (("w", 1), ("W", 2)):
        d = nums[kind]
        out += [
            Prediction("gaps", G, kind, EXCLUDES, frozenset(d["holes"]), pre),
            Prediction("gaps", G, kind, SUBSET, frozenset(d["members"]), pre),
            Prediction("gaps", G, kind, MAX, frozenset({d["top"]}), pre),
            Prediction("gaps", G, kind, SUPERSET, frozenset(interval(lo, d["top"])), pre),
        ]
    return out


# ---------------------------------------------------------------------------
# verification


@dataclass
class Report:
    theorem: str
    group: str
    relation: str
    passed: bool | None  # None = not comparable
    details: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {"theorem": self.theorem, "group": self.group, "relation": self.relation,
             "pass": self.passed, "details": self.details},
            sort_keys=True,
        )


def check_prediction(pred: Prediction, computed: CrossSet | None) -> Report:
    rel = f"{pred.kind} {pred.relation}"
    details = {"preconditions": {name: ok for name, ok in pred.preconditions}}
    if not pred.comparable:
        return Report(pred.theorem_id, pred.group.key, rel, None, {**details, "reason": "preconditions fail"})
    if computed is None:
        return Report(pred.theorem_id, pred.group.key, rel, None, {**details, "reason": "incomplete search"})
    ok, bad = pred.check(computed)
    details["predicted"] = sorted(pred.predicted) if len(pred.predicted) <= 64 else \
        f"{len(pred.predicted)} values in [{min(pred.predicted)}, {max(pred.predicted)}]"
    if bad:
        details["counterexamples"] = bad
    return Report(pred.theorem_id, pred.group.key, rel, ok, details)


def _sets(result, kind):
    if result is None:
        return None
    return result.w_set if kind == "w" else result.W_set


def _report(theorem, G, relation, ok, **details) -> Report:
    return Report(theorem, G.key, relation, bool(ok), details)


def structural_checks(G: FiniteAbelianGroup, result) -> list[Report]:
    """Identities between w, W, k, K, k*, K* that hold for every group."""
    if result is None:
        return [Report("structure", G.key, "all", None, {"reason": "incomplete search"})]
    e = G.exponent
    w, W = result.w_set, result.W_set
    k, K = w.max.numerator, W.max.numerator
    ks, Ks = k_star(G).numerator, K_star(G).numerator
    out = [
        _report("structure", G, "min w = 1/exp", w.min.numerator == 1, min=w.min.numerator),
        _report("structure", G, "K >= 1/exp + k", K >= 1 + k, k=k, K=K),
        _report("structure", G, "W within [2, exp K]", set(W) <= interval(2, K)),
        _report("structure", G, "w within [1, exp k]", set(w) <= interval(1, k)),
        _report("structure", G, "K = K* implies k = k* and K = 1/exp + k",
                K != Ks or (k == ks and K == 1 + k), k=k, K=K, k_star=ks, K_star=Ks),
        _report("structure", G, "k* <= k and K* <= K", ks <= k and Ks <= K),
        _report("structure", G, "w contains [1, exp-1]", interval(1, e - 1) <= set(w)),
    ]
    if G.order >= 3:
        out.append(_report("structure", G, "min W = 2/exp", W.min.numerator == 2, min=W.min.numerator))
    if G.order % 2 == 0 and not contains_square_of_2_part(G):
        odd = sorted(x for x in W if x % 2)
        out.append(_report("structure", G, "W numerators even (no C_{2^k}^2)", not odd, counterexamples=odd))
    out.append(_report("conjecture", G, "K = K* and k = k*", K == Ks and k == ks,
                       k=k, K=K, k_star=ks, K_star=Ks))
    return out


def subgroup_checks(G: FiniteAbelianGroup, profiles) -> list[Report]:
    """w(H) ⊆ w(G) for every subgroup, with equality only for H = G."""
    full = next(pr for pr in profiles if len(pr.elements) == G.order).result.w_set
    out = []
    for pr in profiles:
        sub = set(pr.result.w_set)
        proper = len(pr.elements) < G.order
        ok = sub <= set(full) and (sub != set(full)) == proper
        out.append(Report("subgroups", G.key, f"w({pr.iso.key}) in w(G)", ok,
                          {"subgroup_size": len(pr.elements), "missing": sorted(set(full) - sub)[:8]}))
    return out


def connection_check(G: FiniteAbelianGroup, result) -> Report:
    """W(G) ⊆ 1/pq + w(G) when exp(G) = pq with p > q primes."""
    f = factorize(G.exponent)
    if len(f) != 2 or any(e != 1 for e in f.values()):
        return Report("connection", G.key, "W in 1/pq + w", None, {"reason": "exp is not pq"})
    shifted = {x + 1 for x in result.w_set}
    bad = sorted(set(result.W_set) - shifted)
    return Report("connection", G.key, "W in 1/pq + w", not bad, {"counterexamples": bad})


def exp_determines_check(G1: FiniteAbelianGroup, G2: FiniteAbelianGroup, r1=None, r2=None) -> list[Report]:
    """Equal W forces equal exp and K; equal w forces equal exp and k.

    With search results the sets are compared directly; otherwise the
    p-group descriptions stand in for them.
    """
    key = f"{G1.key} vs {G2.key}"
    if r1 is not None and r2 is not None:
        W1, W2 = r1.W_set.fractions(), r2.W_set.fractions()
        w1, w2 = r1.w_set.fractions(), r2.w_set.fractions()
        source = "search"
    else:
        W1, w1 = (_pred_fracs(p) for p in predict_pgroup(G1))
        W2, w2 = (_pred_fracs(p) for p in predict_pgroup(G2))
        source = "formula"
    same_exp = G1.exponent == G2.exponent
    out = [
        Report("exp-determines", key, "W equal => exp, K equal",
               W1 != W2 or (same_exp and max(W1) == max(W2)), {"W_equal": W1 == W2, "source": source}),
        Report("exp-determines", key, "w equal => exp, k equal",
               w1 != w2 or (same_exp and max(w1) == max(w2)), {"w_equal": w1 == w2, "source": source}),
    ]
    for G, W in ((G1, W1), (G2, W2)):
        if G.order >= 3:
            out.append(Report("exp-determines", key, f"min W({G.key}) = 2/exp",
                              min(W) == Fraction(2, G.exponent), {"source": source}))
    return out


def _pred_fracs(pred: Prediction) -> list[Fraction]:
    e = pred.group.exponent
    return sorted(Fraction(x, e) for x in pred.predicted)


def split_c2r_odd(G: FiniteAbelianGroup) -> tuple[FiniteAbelianGroup, int] | None:
    """(G_p, r) with G = C_2^r + G_p and G_p an odd p-group, if that shape applies."""
    f = factorize(G.exponent)
    if set(f) - {2} == set() or f.get(2) != 1 or len(f) != 2:
        return None
    p = max(f)
    odd = [n // 2 if n % 2 == 0 else n for n in G.invariant_factors]
    odd = [n for n in odd if n > 1]
    return normalize_factors(odd), G.p_rank(2)


def predictions_for(theorem_id: str, G: FiniteAbelianGroup, eta_fn=None) -> list[Prediction]:
    """Every prediction a theorem makes about G (empty when G is out of scope)."""
    if theorem_id == "pgroup":
        return list(predict_pgroup(G)) if G.is_p_group else []
    if theorem_id == "cyclic-2pk":
        f = factorize(G.exponent)
        if G.is_cyclic and f.get(2) == 1 and len(f) == 2:
            p = max(f)
            return list(predict_2pk(p, f[p]))
        return []
    if theorem_id == "c2r-odd":
        split = split_c2r_odd(G)
        if split and split[0].is_p_group and split[1] in (1, 2):
            return list(predict_c2r_odd(*split))
        return []
    if theorem_id == "lower-bounds":
        return predict_lower_bounds(G) if G.order > 1 else []
    if theorem_id == "gaps":
        f = factorize(G.exponent)
        if len(f) != 2 or any(e != 1 for e in f.values()):
            return []
        q, p = sorted(f)
        if eta_fn is None:
            raise FormulaError("gap predictions need an eta oracle")
        eta_q = eta_fn(normalize_factors([q] * G.p_rank(q)))
        return predict_gaps(p, G.p_rank(p), q, G.p_rank(q), eta_q)
    raise FormulaError(f"unknown theorem id {theorem_id!r}")


THEOREM_IDS = ("pgroup", "cyclic-2pk", "c2r-odd", "lower-bounds", "gaps", "structure", "subgroups",
               "connection")


def verify(theorem_id: str, G: FiniteAbelianGroup, result, profiles=None, eta_fn=None) -> list[Report]:
    """Compare one theorem's predictions for G with a search result (None = incomplete)."""
    if theorem_id == "structure":
        return structural_checks(G, result)
    if theorem_id == "subgroups":
        if profiles is None:
            return [Report("subgroups", G.key, "w(H) in w(G)", None, {"reason": "no subgroup profiles"})]
        return subgroup_checks(G, profiles)
    if theorem_id == "connection":
        if result is None:
            return [Report("connection", G.key, "W in 1/pq + w", None, {"reason": "incomplete search"})]
        return [connection_check(G, result)]
    preds = predictions_for(theorem_id, G, eta_fn)
    if not preds:
        return [Report(theorem_id, G.key, "applicable", None, {"reason": "group outside the theorem's scope"})]
    return [check_prediction(pr, _sets(result, pr.kind)) for pr in preds]
