import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossnum.groups import cyclic, direct_sum, normalize_factors, trivial_group
from crossnum.sequences import (
    CrossSet,
    CrossValue,
    Sequence,
    SequenceError,
    concat,
    cross_number,
    format_sequence,
    is_minimal_zero_sum,
    is_zero_sum_free,
    length,
    parse_sequence,
    power,
    replace,
    sigma,
    subset_sums,
)

import oracle


def seq(G, text):
    return parse_sequence(G, text)


# basic invariants


def test_c6_example():
    C6 = cyclic(6)
    S = seq(C6, "(3);(2)^2")
    assert sigma(S) == (1,)
    assert length(S) == 3
    assert cross_number(S) == CrossValue(7, 6)
    assert oracle.cross((6,), [(3,), (2,), (2,)]) == Fraction(7, 6)


def test_trivial_and_full_power():
    C9 = cyclic(9)
    T = Sequence(C9)
    assert sigma(T) == (0,) and len(T) == 0 and cross_number(T) == CrossValue(0, 9)
    S = power(C9, (1,), 9)
    assert sigma(S) == (0,) and cross_number(S).as_fraction() == 1


def test_subset_sum_examples():
    assert set(subset_sums(seq(cyclic(6), "(2);(5)")).elements()) == {(1,), (2,), (5,)}
    assert set(subset_sums(seq(cyclic(3), "(1)^2")).elements()) == {(1,), (2,)}
    sums = subset_sums(seq(cyclic(9), "(2);(5)"))
    assert set(sums.elements()) == {(2,), (5,), (7,)}
    assert (8,) not in sums
    assert len(subset_sums(Sequence(cyclic(9)))) == 0


def test_predicate_examples():
    C6, C4 = cyclic(6), cyclic(4)
    assert is_zero_sum_free(seq(C6, "(3);(2)^2"))
    U = seq(C4, "(1)^2;(2)")
    assert is_minimal_zero_sum(U) and cross_number(U).as_fraction() == 1
    assert not is_minimal_zero_sum(seq(C6, "(3)^2;(2);(4)"))
    assert is_minimal_zero_sum(Sequence(C6, [(0,)]))
    assert not is_minimal_zero_sum(Sequence(C6))
    assert is_zero_sum_free(Sequence(C6))


# brute-force agreement


GROUPS_16 = [(2,), (3,), (4,), (2, 2), (6,), (8,), (2, 4), (2, 2, 2), (9,), (3, 3), (10,), (12,), (2, 6),
             (14,), (15,), (16,), (4, 4), (2, 8), (2, 2, 4), (2, 2, 2, 2)]


@st.composite
def group_and_sequence(draw, max_len=12):
    factors = draw(st.sampled_from(GROUPS_16))
    G = normalize_factors(factors)
    terms = draw(st.lists(st.sampled_from(G.elements()), max_size=max_len))
    return G, terms


def brute_sums(G, terms):
    out = set()
    for r in range(1, len(terms) + 1):
        for combo in itertools.combinations(terms, r):
            out.add(G.sum(combo))
    return out


@settings(max_examples=150, deadline=None)
@given(group_and_sequence())
def test_subset_sums_match_brute_force(gs):
    G, terms = gs
    S = Sequence(G, terms)
    assert set(S.subset_sums().elements()) == brute_sums(G, terms)


@settings(max_examples=150, deadline=None)
@given(group_and_sequence(max_len=9))
def test_minimality_matches_definition(gs):
    G, terms = gs
    S = Sequence(G, terms)
    f = G.invariant_factors
    assert S.is_minimal_zero_sum() == oracle.is_minimal(f, tuple(sorted(terms)))
    assert S.is_zero_sum_free() == (not oracle.has_zero_sum(f, tuple(sorted(terms))))


@pytest.mark.parametrize("factors", [(4,), (2, 2), (6,), (3, 3)])
def test_minimality_exhaustive_small(factors):
    G = normalize_factors(factors)
    for n in range(1, 6):
        for combo in itertools.combinations_with_replacement(G.elements(), n):
            S = Sequence(G, combo)
            assert S.is_minimal_zero_sum() == oracle.is_minimal(G.invariant_factors, combo)


@settings(max_examples=100, deadline=None)
@given(group_and_sequence(), st.data())
def test_cross_number_additive_and_monotone(gs, data):
    G, terms = gs
    split = data.draw(st.integers(0, len(terms)))
    A, B = Sequence(G, terms[:split]), Sequence(G, terms[split:])
    S = A * B
    assert S.cross_number().numerator == A.cross_number().numerator + B.cross_number().numerator
    assert A.is_subsequence_of(S) and A.cross_number() <= S.cross_number()
    e = G.exponent
    assert S.cross_number().as_fraction() == oracle.cross(G.invariant_factors, terms)
    assert S.cross_number().denominator == e


# concatenation and gluing


def test_concat_examples():
    C2, C3 = cyclic(2), cyclic(3)
    ds = direct_sum(C2, C3)
    S = concat(Sequence(C2, [(1,)]), Sequence(C3, [(1,), (1,)]), ds)
    assert S.group == cyclic(6)
    assert S.cross_number().as_fraction() == Fraction(7, 6)

    G = normalize_factors([2, 4])
    ds = direct_sum(trivial_group(), G)
    S2 = seq(G, "(1,1);(0,2)")
    assert concat(Sequence(trivial_group()), S2, ds) == S2

    ds = direct_sum(C3, C3)
    S = concat(seq(C3, "(1)^2"), seq(C3, "(1)^2"), ds)
    assert S.is_zero_sum_free()
    assert S.cross_number() == CrossValue(4, 3)


@pytest.mark.parametrize("f1, f2", [((2,), (3,)), ((4,), (2,)), ((3,), (3,)), ((2,), (2, 2))])
def test_concat_of_zero_sum_free_is_zero_sum_free(f1, f2):
    G1, G2 = normalize_factors(f1), normalize_factors(f2)
    ds = direct_sum(G1, G2)
    zsf1 = [Sequence(G1, c) for n in range(1, 4) for c in itertools.combinations_with_replacement(G1.elements()[1:], n)]
    zsf2 = [Sequence(G2, c) for n in range(1, 4) for c in itertools.combinations_with_replacement(G2.elements()[1:], n)]
    zsf1 = [S for S in zsf1 if S.is_zero_sum_free()]
    zsf2 = [S for S in zsf2 if S.is_zero_sum_free()]
    for A in zsf1:
        for B in zsf2:
            C = concat(A, B, ds)
            assert C.is_zero_sum_free()
            assert C.cross_number().as_fraction() == A.cross_number().as_fraction() + B.cross_number().as_fraction()


def _atoms(G, max_len):
    return [Sequence(G, c) for n in range(1, max_len + 1)
            for c in itertools.combinations_with_replacement(G.elements(), n)
            if Sequence(G, c).is_minimal_zero_sum()]


@pytest.mark.parametrize("f1, f2", [((2,), (3,)), ((3,), (3,)), ((2,), (4,)), ((2, 2), (3,))])
def test_glued_atoms_are_atoms(f1, f2):
    G1, G2 = normalize_factors(f1), normalize_factors(f2)
    ds = direct_sum(G1, G2)
    for U1 in _atoms(G1, 4):
        for U2 in _atoms(G2, 4):
            for g in U1.support():
                for h in U2.support():
                    rest1 = U1.replace([g], []).map(ds.embed1, ds.group)
                    rest2 = U2.replace([h], []).map(ds.embed2, ds.group)
                    V = rest1 * rest2 * Sequence(ds.group, [ds.group.add(ds.embed1(g), ds.embed2(h))])
                    assert V.is_minimal_zero_sum()
                    assert len(V) == len(U1) + len(U2) - 1


# replace


def test_replace_examples():
    C6 = cyclic(6)
    S = seq(C6, "(1);(2);(3)")
    T = replace(S, [(1,), (2,)], [(3,)])
    assert len(T) == len(S) - 1 and T.multiplicity((3,)) == 2
    U = replace(S, [], [(4,)])
    assert U.multiplicity((4,)) == 1 and len(U) == 4
    assert replace(S, S.elements(), []) == Sequence(C6)
    with pytest.raises(SequenceError):
        replace(S, [(5,)], [])


# multiset semantics and text format


def test_multiset_equality():
    G = cyclic(6)
    assert Sequence(G, [(1,), (2,), (1,)]) == Sequence(G, {(1,): 2, (2,): 1})
    assert hash(Sequence(G, [(2,), (1,)])) == hash(Sequence(G, [(1,), (2,)]))


def test_parse_and_format():
    G = normalize_factors([2, 4])
    S = seq(G, "(1,0)^2;(1,1)")
    assert S.multiplicity((1, 0)) == 2 and S.multiplicity((1, 1)) == 1
    assert format_sequence(S) == "(1,0)^2;(1,1)"
    assert seq(G, format_sequence(S)) == S
    assert seq(G, "(3,7)") == seq(G, "(1,3)")
    assert seq(G, "") == Sequence(G)
    with pytest.raises(SequenceError):
        seq(G, "(1,0)^;")


def test_crossset():
    cs = CrossSet(6, (4, 2, 2, 6))
    assert cs.numerators == (2, 4, 6)
    assert cs.min == CrossValue(2, 6) and cs.max == CrossValue(6, 6)
    assert cs.difference() == 2
    assert CrossValue(1, 3) in cs
    assert CrossSet.from_mask(0b1011, 4, drop_zero=True).numerators == (1, 3)
    assert str(cs) == "{2, 4, 6}/6"
