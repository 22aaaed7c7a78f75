from fractions import Fraction
from itertools import chain, combinations

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import labelled, set_systems
from sunflower_vc.errors import LimitExceeded, PreconditionError
from sunflower_vc.setsystem import SetSystem, submasks
from sunflower_vc.threshold import (
    intersection_closure,
    kk_dichotomy,
    log2_upper,
    min_cover_weight,
    prob_upset_exact,
    prob_upset_mc,
    smallest_working_constant,
)

fractions01 = st.fractions(0, 1, max_denominator=20)


def naive_prob(H, p):
    total = Fraction(0)
    for W in range(1 << H.n):
        if any(S & ~W == 0 for S in H.members):
            k = W.bit_count()
            total += p**k * (1 - p) ** (H.n - k)
    return total


def brute_cover(H, q):
    """Minimum over every family of subsets of members."""
    cands = sorted({s for S in H.members for s in submasks(S)})
    best = None
    for k in range(len(cands) + 1):
        for fam in combinations(cands, k):
            if all(any(P & ~S == 0 for P in fam) for S in H.members):
                w = sum((q ** P.bit_count() for P in fam), Fraction(0))
                best = w if best is None else min(best, w)
    return best


# ---------------------------------------------------------------- probabilities


@pytest.mark.parametrize("p", [Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)])
def test_prob_examples(p):
    assert prob_upset_exact(labelled("1", [[1]]), p) == p
    assert prob_upset_exact(labelled("12", [[1], [2]]), p) == 1 - (1 - p) ** 2
    assert prob_upset_exact(labelled("12", [[1, 2]]), p) == p**2


def test_prob_clamps_above_one():
    assert prob_upset_exact(labelled("12", [[1, 2]]), Fraction(5, 2)) == 1
    with pytest.raises(PreconditionError):
        prob_upset_exact(labelled("1", [[1]]), Fraction(-1, 2))


def test_prob_edge_families():
    assert prob_upset_exact(SetSystem(("a",), ()), Fraction(1, 2)) == 0
    assert prob_upset_exact(SetSystem(("a",), (0,)), Fraction(1, 2)) == 1


def test_prob_limit(monkeypatch):
    monkeypatch.setenv("SUNFLOWER_VC_PROB_LIMIT", "2")
    with pytest.raises(LimitExceeded, match="prob_upset_mc"):
        prob_upset_exact(labelled("abc", [["a", "b", "c"]]), Fraction(1, 2))


@given(set_systems(max_n=8, max_members=8), fractions01)
def test_prob_matches_naive(H, p):
    assert prob_upset_exact(H, p) == naive_prob(H, p)


@given(set_systems(max_n=8, max_members=8))
def test_prob_monotone(H):
    grid = [Fraction(k, 10) for k in range(11)]
    vals = [prob_upset_exact(H, p) for p in grid]
    assert vals == sorted(vals)


def test_mc_examples():
    H = labelled("1", [[1]])
    est = prob_upset_mc(H, Fraction(1, 2), 10**5, seed=1)
    assert abs(est.estimate - 0.5) <= est.half_width
    z = prob_upset_mc(labelled("12", [[1], [2]]), 0, 200, seed=2)
    assert (z.estimate, z.half_width) == (0.0, 0.0)
    one = prob_upset_mc(labelled("12", [[1, 2]]), 1, 200, seed=3)
    assert (one.estimate, one.half_width) == (1.0, 0.0)
    assert prob_upset_mc(H, Fraction(1, 3), 500, 9) == prob_upset_mc(H, Fraction(1, 3), 500, 9)
    with pytest.raises(PreconditionError):
        prob_upset_mc(H, Fraction(1, 2), 99, 0)


def test_mc_agrees_with_exact():
    H = labelled("abcde", [["a", "b"], ["c"], ["d", "e"]])
    p = Fraction(2, 5)
    est = prob_upset_mc(H, p, 40000, seed=11)
    assert abs(est.estimate - float(prob_upset_exact(H, p))) <= est.half_width


# ---------------------------------------------------------------- covers


def test_cover_examples():
    w, cert = min_cover_weight(labelled("12", [[1], [2]]), Fraction(1, 2))
    assert w == 1 and cert.covers(labelled("12", [[1], [2]]))
    H = labelled("12", [[1, 2]])
    w, cert = min_cover_weight(H, Fraction(1, 2))
    assert w == Fraction(1, 4) and cert.pieces.members == (0b11,)
    w, cert = min_cover_weight(SetSystem(("a",), ()), Fraction(1, 2))
    assert w == 0 and len(cert.pieces) == 0


def test_cover_q_extremes():
    H = labelled("123", [[1, 2], [3]])
    assert min_cover_weight(H, 0)[0] == 0
    assert min_cover_weight(H, 1)[0] == 1


def test_cover_limit(monkeypatch):
    monkeypatch.setenv("SUNFLOWER_VC_COVER_LIMIT", "2")
    with pytest.raises(LimitExceeded):
        min_cover_weight(labelled("abc", [["a"], ["b"], ["c"]]), Fraction(1, 2))


def test_intersection_closure():
    assert intersection_closure([0b011, 0b110, 0b101]) == [0, 0b001, 0b010, 0b011, 0b100, 0b101, 0b110]


@given(set_systems(max_n=4, max_members=4, max_size=3), st.sampled_from([Fraction(0), Fraction(1, 5), Fraction(1, 2), Fraction(2, 3), Fraction(1)]))
def test_cover_matches_brute_force(H, q):
    w, cert = min_cover_weight(H, q)
    assert w == brute_cover(H, q)
    assert cert.covers(H)
    assert cert.weight == w == sum((q ** P.bit_count() for P in cert.pieces), Fraction(0))


@given(set_systems(max_n=8, max_members=9), fractions01)
def test_cover_certificate_sound(H, q):
    w, cert = min_cover_weight(H, q)
    assert cert.covers(H)
    assert w <= min(Fraction(1), sum((q ** S.bit_count() for S in H), Fraction(0))) or len(H) == 0


# ---------------------------------------------------------------- dichotomy


def test_log2_upper():
    assert log2_upper(8) == 3
    assert log2_upper(Fraction(1, 4)) == -2
    for x in (3, Fraction(5, 2), 10, Fraction(1000, 7)):
        v = log2_upper(x)
        with mpmath.workprec(400):
            exact = mpmath.log(mpmath.mpf(x.numerator if isinstance(x, Fraction) else x) / (x.denominator if isinstance(x, Fraction) else 1), 2)
            assert mpmath.mpf(v.numerator) / v.denominator > exact
            assert mpmath.mpf(v.numerator) / v.denominator - exact < mpmath.mpf(2) ** -63
    with pytest.raises(PreconditionError):
        log2_upper(0)


def test_kk_examples():
    r = kk_dichotomy(labelled("1", [[1]]), 1, Fraction(1, 4))
    assert r.p_evaluated == 1 and r.prob_upset == 1 and r.branch2_holds
    H = labelled("12", [[1], [2]])
    r = kk_dichotomy(H, Fraction(1, 8), Fraction(1, 2), "kk-bell")
    assert r.min_cover_weight == Fraction(1, 4) and r.branch1_holds
    assert r.constant_used == 48


def test_kk_p_formula():
    # ell = 2, eps = 1/2: p = 48 q log2(4) = 96 q
    H = labelled("abc", [["a", "b"], ["c"]])
    r = kk_dichotomy(H, Fraction(1, 1000), Fraction(1, 2))
    assert r.p_uncapped == Fraction(96, 1000) == r.p_evaluated
    assert r.prob_upset == prob_upset_exact(H, r.p_evaluated)


def test_kk_variants_need_constant():
    H = labelled("ab", [["a"], ["b"]])
    with pytest.raises(PreconditionError):
        kk_dichotomy(H, Fraction(1, 2), Fraction(1, 2), "vc")
    r = kk_dichotomy(H, Fraction(1, 16), Fraction(1, 4), "vc1", 2)
    # p = 2 q log2(4)
    assert r.p_evaluated == Fraction(1, 4) and r.cover_threshold == Fraction(2, 3)
    r = kk_dichotomy(H, Fraction(1, 64), Fraction(1, 2), "vc", 1)
    # d = 1, ell = 1: log2(2) + log*(1) = 1 + 1/2
    assert r.p_evaluated == Fraction(3, 2) / 64


def test_kk_epsilon_range():
    H = labelled("a", [["a"]])
    for eps in (0, Fraction(3, 4)):
        with pytest.raises(PreconditionError):
            kk_dichotomy(H, Fraction(1, 2), eps)


def test_kk_vc1_rejects_dimension_two():
    H = labelled("ab", [[], ["a"], ["b"], ["a", "b"]])
    with pytest.raises(PreconditionError):
        kk_dichotomy(H, Fraction(1, 2), Fraction(1, 2), "vc1", 4)


@given(set_systems(max_n=8, max_members=8, min_members=1), st.sampled_from([Fraction(1, 2**k) for k in range(1, 11)]), st.sampled_from([Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]))
def test_kk_bell_dichotomy(H, q, eps):
    r = kk_dichotomy(H, q, eps)
    assert r.branch1_holds or r.branch2_holds
    assert r.branch1_holds == (r.min_cover_weight <= Fraction(1, 2))
    assert r.branch2_holds == (r.prob_upset > 1 - eps)


def test_smallest_working_constant():
    H = labelled("abc", [["a"], ["a", "b"]])
    cases = [(H, Fraction(1, 8), Fraction(1, 2))]
    A = smallest_working_constant(cases)
    assert A is not None
    for B in (1, 2, 4, 8, 16, 32, 64):
        if B < A:
            assert not kk_dichotomy(H, Fraction(1, 8), Fraction(1, 2), "vc1", B).holds
