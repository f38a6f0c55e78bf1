import numpy as np
import pytest

from crossnum import _kernels, search
from crossnum.groups import cyclic, normalize_factors
from crossnum.search import (
    Budget,
    PartialResultError,
    SearchError,
    enumerate_sets,
    enumerate_subgroup_profiles,
    eta,
    membership,
    numerator_bound,
)
from crossnum.sequences import CrossValue, Sequence

import oracle


def nums(cs):
    return list(cs.numerators)


# enumerate


def test_c4():
    r = enumerate_sets(cyclic(4))
    assert nums(r.w_set) == [1, 2, 3] and r.w_set.denominator == 4
    assert nums(r.W_set) == [2, 4]
    assert r.D_large == 4 and r.d_small == 3


def test_c3_c3():
    r = enumerate_sets(normalize_factors([3, 3]))
    assert nums(r.w_set) == [1, 2, 3, 4]
    assert nums(r.W_set) == [2, 3, 4, 5]
    assert r.D_large == 5


def test_c6():
    r = enumerate_sets(cyclic(6))
    assert nums(r.W_set) == [2, 4, 6, 8]
    assert r.k_max == CrossValue(7, 6) and r.K_max == CrossValue(8, 6)


def test_result_invariants():
    r = enumerate_sets(normalize_factors([2, 6]))
    assert r.k_max == r.w_set.max and r.K_max == r.W_set.max
    assert r.D_large == r.d_small + 1
    assert r.states_visited > 0


@pytest.mark.parametrize("factors", [(4,), (2, 2), (6,), (2, 4), (3, 3), (10,), (2, 6), (12,), (15,), (4, 4)])
def test_backends_agree(factors):
    G = normalize_factors(factors)
    a = enumerate_sets(G, backend="numba")
    b = enumerate_sets(G, backend="python")
    assert (a.w_set, a.W_set, a.d_small, a.states_visited) == (b.w_set, b.W_set, b.d_small, b.states_visited)


def test_backends_agree_on_support():
    G = normalize_factors([2, 6])
    support = [g for g in G.elements() if G.element_order(g) in (2, 3)]
    a = enumerate_sets(G, support=support, backend="numba")
    b = enumerate_sets(G, support=support, backend="python")
    assert (a.w_set, a.W_set, a.d_small) == (b.w_set, b.W_set, b.d_small)


def test_determinism():
    G = normalize_factors([3, 6])
    raw = search._enumerate_cached.__wrapped__
    runs = [raw(G, None, 10**8, 600.0, backend) for backend in ("numba", "numba", "python")]
    assert len({(r.w_set, r.W_set, r.d_small) for r in runs}) == 1


@pytest.mark.parametrize("factors", [(6,), (2, 4), (3, 3), (9,), (2, 2, 2), (10,), (12,), (4, 4), (3, 9)])
def test_numerator_bound_covers_W(factors):
    G = normalize_factors(factors)
    assert max(enumerate_sets(G).W_set.numerators) <= numerator_bound(G)


@pytest.mark.parametrize("backend", ["numba", "python"])
def test_budget_exceeded_reports_frontier(backend):
    G = normalize_factors([6, 6])
    with pytest.raises(PartialResultError) as info:
        enumerate_sets(G, budget=Budget(max_states=500), backend=backend)
    err = info.value
    assert err.states >= 500 - 1
    assert isinstance(err.frontier, Sequence)
    assert err.frontier.is_zero_sum_free()


def test_time_budget():
    with pytest.raises(PartialResultError):
        enumerate_sets(normalize_factors([3, 9]), budget=Budget(max_states=10**9, max_seconds=0.0),
                       backend="python")


# membership


def test_c33_gap_value_absent():
    assert membership(cyclic(33), CrossValue(51, 33), "zsf") is None


def test_c33_top_witness():
    G = cyclic(33)
    S = membership(G, CrossValue(52, 33), "zsf")
    assert S is not None and S.is_zero_sum_free()
    assert S.cross_number() == CrossValue(52, 33)
    assert {G.element_order(g) for g in S} == {3, 11}


def test_c9_minimal_one():
    S = membership(cyclic(9), CrossValue(1, 1), "minimal")
    assert S is not None and S.is_minimal_zero_sum() and S.cross_number().as_fraction() == 1


@pytest.mark.parametrize("factors", [(6,), (2, 4), (3, 3), (10,), (2, 6), (12,), (2, 2, 2)])
def test_every_value_witnessed(factors):
    G = normalize_factors(factors)
    r = enumerate_sets(G)
    top = numerator_bound(G)
    for x in range(0, top + 2):
        S = membership(G, x, "zsf")
        assert (S is not None) == (x in r.w_set), x
        if S is not None:
            assert S.is_zero_sum_free() and len(S) > 0 and S.cross_number().numerator == x
        U = membership(G, x, "minimal")
        assert (U is not None) == (x in r.W_set), x
        if U is not None:
            assert U.is_minimal_zero_sum() and U.cross_number().numerator == x


def test_membership_rejects_bad_kind():
    with pytest.raises(ValueError):
        membership(cyclic(6), 3, "atom")


def test_membership_budget():
    with pytest.raises(PartialResultError):
        membership(normalize_factors([6, 6]), 16, "zsf", budget=Budget(max_states=50))


# eta


@pytest.mark.parametrize("factors, value", [((3,), 3), ((3, 3), 7), ((2,), 2)])
def test_eta_examples(factors, value):
    assert eta(normalize_factors(factors)) == value
    assert oracle.eta_oracle(factors) == value


def test_eta_size_bound():
    with pytest.raises(SearchError):
        eta(normalize_factors([6, 6]))


# subgroup profiles


def test_subgroup_profiles_c6():
    G = cyclic(6)
    prof = {len(p.elements): p for p in enumerate_subgroup_profiles(G)}
    assert prof[3].iso.invariant_factors == (3,)
    assert nums(prof[3].result.w_set) == [2, 4] and prof[3].result.w_set.denominator == 6
    assert len(prof[1].result.w_set) == 0
    full = enumerate_sets(G)
    assert prof[6].result.w_set == full.w_set and prof[6].result.W_set == full.W_set


# kernels


def test_backend_selection(monkeypatch):
    monkeypatch.setenv("CROSSNUM_JIT", "0")
    assert _kernels.backend_for(16) == "python"
    monkeypatch.setenv("CROSSNUM_JIT", "1")
    assert _kernels.backend_for(16) == "numba"
    assert _kernels.backend_for(65) == "python"
    assert _kernels.backend_for(16, "python") == "python"


def test_translation_tables_agree():
    G = normalize_factors([2, 6])
    add = G.tables.add
    a = _kernels.translation_tables(add)
    b = _kernels.translation_tables_py(add)
    for g in range(G.order):
        for slot in range(a.shape[1]):
            assert [int(x) for x in a[g, slot]] == b[g][slot]
    # translating a single element moves it
    assert int(a[1, 0, 1]) == 1 << int(add[0, 1])


def test_group_tables():
    G = normalize_factors([2, 4])
    t = G.tables
    for i, a in enumerate(G.elements()):
        assert G.element(int(t.neg[i])) == G.neg(a)
        assert int(t.weight[i]) == G.exponent // G.element_order(a)
        for j, b in enumerate(G.elements()):
            assert G.element(int(t.add[i, j])) == G.add(a, b)
    assert t.add.dtype == np.int64
