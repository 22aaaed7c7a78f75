from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import labelled, set_systems
from sunflower_vc.errors import LimitExceeded, PreconditionError
from sunflower_vc.setsystem import SetSystem, core, is_subset, upset_contains
from sunflower_vc.spread import (
    E_UPPER,
    avoids_every_pair,
    choose,
    count_bound,
    count_bound_vc1,
    decompose,
    expectation_by_enumeration,
    expectation_large_weight_exact,
    large_profile,
    reduced_family,
)
from sunflower_vc.vc import vc_dimension

RULES = ("lexicographic", "seeded-random")
fractions01 = st.fractions(0, 1, max_denominator=12)


def test_reduced_family_examples():
    H = labelled("123", [[1, 2], [2, 3], [3]])
    assert reduced_family(H, H.mask("2")).sets() == [["1"], ["3"]]
    A = labelled("1234", [[1, 2], [3, 4], [2, 3]])
    assert reduced_family(A, 0) == A
    assert reduced_family(H, H.mask("23")).members == (0,)


def test_decompose_examples():
    H = labelled("123", [[1, 2], [1, 3]])
    dec = decompose(H, 0, 10)
    assert dec.small == H and len(dec.large) == 0

    H = labelled("12", [[1, 2]])
    S = H.mask("12")
    dec = decompose(H, H.mask("1"), 1)
    assert dec.chooser[S] == H.mask("2")
    assert dec.f_star[S] == S
    assert dec.large.members == (S,) and len(dec.small) == 0


def test_decompose_t_zero_all_large():
    H = labelled("123", [[1, 2], [3]])
    for W in range(8):
        dec = decompose(H, W, 0)
        assert len(dec.small) == 0
        assert set(dec.large.members) == set(dec.f_star.values())


def test_decompose_rejects_empty_family():
    with pytest.raises(PreconditionError):
        decompose(SetSystem(("a",), ()), 0, 1)


def test_choose_rules():
    assert choose([0b110, 0b011]) == 0b011
    a = choose([1, 2, 4, 8], "seeded-random", 5)
    assert a == choose([8, 4, 2, 1], "seeded-random", 5)
    with pytest.raises(PreconditionError):
        choose([1], "other")


def test_expectation_single_point():
    H = labelled("1", [[1]])
    for p in (Fraction(0), Fraction(1, 3), Fraction(1)):
        assert expectation_large_weight_exact(H, p, Fraction(2, 7), 0) == Fraction(2, 7)


def test_expectation_hand_computed():
    # H = {{1,2}}, t = 1: large weight q^2 unless W = {1,2}
    H = labelled("12", [[1, 2]])
    p, q = Fraction(1, 3), Fraction(1, 5)
    assert expectation_large_weight_exact(H, p, q, 1) == q**2 * (1 - p**2)


def test_expectation_trivial_zeros():
    H = labelled("123", [[1, 2], [3]])
    assert expectation_large_weight_exact(H, Fraction(1, 2), Fraction(1, 2), 3) == 0
    assert expectation_large_weight_exact(H, Fraction(1, 2), 0, 1) == 0


def test_expectation_limit(monkeypatch):
    monkeypatch.setenv("SUNFLOWER_VC_SPREAD_LIMIT", "3")
    H = SetSystem(tuple("abcd"), (1,))
    with pytest.raises(LimitExceeded, match="sampling"):
        expectation_large_weight_exact(H, Fraction(1, 2), Fraction(1, 4), 0)


@given(set_systems(max_n=5, max_members=6, min_members=1), fractions01, fractions01, st.integers(0, 4), st.sampled_from(RULES))
def test_profile_matches_enumeration(H, p, q, t, rule):
    assert expectation_large_weight_exact(H, p, q, t, rule, 99) == expectation_by_enumeration(H, p, q, t, rule, 99)


def test_count_bound_examples():
    assert count_bound_vc1(Fraction(1, 4), Fraction(1, 2), 3) == Fraction(1, 4)
    q, p = Fraction(1, 8), Fraction(1, 2)
    assert count_bound(3, 3, q, p, 2) == 2 * E_UPPER**3 * (q / p) ** 2
    assert count_bound(4, 0, q, p, 1) == 2 * (q / p)
    for bad in ((Fraction(1, 2), Fraction(3, 4)), (0, Fraction(1, 2))):
        with pytest.raises(PreconditionError):
            count_bound(3, 1, bad[0], bad[1], 1)
    with pytest.raises(PreconditionError):
        count_bound(2, 3, q, p, 1)
    with pytest.raises(PreconditionError):
        count_bound_vc1(Fraction(1, 2), Fraction(1, 2), 0)


def test_e_upper_is_an_upper_bound():
    import math

    assert E_UPPER > Fraction(math.e)
    assert E_UPPER - Fraction(math.e) < Fraction(1, 10**9)


def test_avoids_every_pair():
    assert avoids_every_pair(labelled("abc", [[], ["a"]]))
    assert not avoids_every_pair(labelled("ab", [["a"], ["b"]]))


# ---------------------------------------------------------------- invariants


@given(set_systems(max_n=5, max_members=7, min_members=1), st.integers(0, 31), st.integers(0, 5), st.sampled_from(RULES), st.integers(0, 2**64 - 1))
def test_decomposition_invariants(H, W, t, rule, seed):
    W &= H.full_mask
    HW = reduced_family(H, W).members
    dec = decompose(H, W, t, rule, seed)
    for F in HW:
        assert upset_contains(H, W | F) and is_subset(F, core(H, W | F))
    for S in H:
        F, Fs = dec.chooser[S], dec.f_star[S]
        assert F in HW and is_subset(F, S & ~W)
        assert is_subset(F, Fs) and is_subset(Fs, S) and Fs & ~W == F
    both = dec.small.members + dec.large.members
    assert all(any(is_subset(P, S) for P in both) for S in H)
    assert all(F.bit_count() <= t - 1 for F in dec.small)
    assert all((F & ~W).bit_count() >= t for F in dec.large)
    for Wp in range(1 << H.n):
        if upset_contains(dec.small, Wp):
            assert upset_contains(H, W | Wp)
    if len(dec.small):
        assert vc_dimension(dec.small).dimension <= vc_dimension(H).dimension


@given(set_systems(max_n=8, max_members=8, min_members=1), st.sampled_from(RULES), st.data())
def test_counting_bound_holds(H, rule, data):
    d = vc_dimension(H).dimension
    ell = max(H.ell, d, 1)
    p = data.draw(st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(2, 3), Fraction(1)]))
    q = p / data.draw(st.sampled_from([2, 3, 5, 16]))
    prof = large_profile(H, rule, 1)
    for t in range(ell + 1):
        e = prof.expectation(p, q, t)
        assert e <= count_bound(ell, d, q, p, t)
        if d <= 1 and avoids_every_pair(H):
            assert e <= count_bound_vc1(q, p, t)
