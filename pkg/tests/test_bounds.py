from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sunflower_vc.bounds import (
    HalfInteger,
    ell_zero,
    er_bound,
    lambda_d,
    log_star_of_power_of_two,
    log_star_smoothed,
    vc1_threshold,
)
from sunflower_vc.errors import PreconditionError


def tower(h):
    v = 1
    for _ in range(h):
        v = 2 ** v
    return v


def oracle_log_star(x):
    """Interval definition: t on (tower(t-2), 2**(2**...3)], t + 1/2 above, for x > 4.

    The split point of the interval (tower(t-1), tower(t)] is the tower of
    height t with its top 2 replaced by a 3.
    """
    t = 1
    while tower(t) < x:
        t += 1
    # x in (tower(t-1), tower(t)]
    split = 3
    for _ in range(t - 2):
        split = 2 ** split
    return Fraction(t) if x <= split else Fraction(2 * t + 1, 2)


@pytest.mark.parametrize(
    "x,val",
    [(16, "3.5"), (17, 4), (100, 4), (256, 4), (257, "4.5"), (300, "4.5"), (65536, "4.5"), (65537, 5)],
)
def test_interval_values(x, val):
    assert log_star_smoothed(x) == Fraction(val)


def test_small_values():
    assert [str(log_star_smoothed(x)) for x in (1, 2, 3, 4, 5, 8, 9)] == ["0.5", "1.5", "2", "2.5", "3", "3", "3.5"]


@given(st.integers(5, 10**6))
def test_matches_interval_oracle(x):
    assert log_star_smoothed(x).as_fraction() == oracle_log_star(x)


def test_huge_arguments():
    # (65536, 2**65536] splits at 2**256
    assert log_star_smoothed(2**256) == 5
    assert log_star_smoothed(2**256 + 1) == Fraction(11, 2)
    assert log_star_smoothed(2**65536) == Fraction(11, 2)
    assert log_star_of_power_of_two(2**65536) == Fraction(13, 2)


@given(st.integers(1, 5000))
def test_shift_identity(x):
    assert log_star_smoothed(2**x) == log_star_smoothed(x) + 1
    assert log_star_of_power_of_two(x) == log_star_smoothed(2**x)


@given(st.integers(9, 5000))
def test_square_claim(x):
    assert log_star_smoothed(x * x) + Fraction(1, 2) <= log_star_smoothed(2**x)


@given(st.integers(1, 10**5), st.integers(1, 10**5))
def test_monotone(a, b):
    if a <= b:
        assert log_star_smoothed(a) <= log_star_smoothed(b)


def test_log_star_domain():
    with pytest.raises(PreconditionError):
        log_star_smoothed(0)
    with pytest.raises(TypeError):
        log_star_smoothed(2.5)


def test_lambda_cases():
    # ell <= 9 d^2: base value
    assert lambda_d(2, 36) == log_star_smoothed(36)
    # 9 d^2 < ell <= 2^(3d)
    assert lambda_d(2, 37) == log_star_smoothed(37) + 1
    assert lambda_d(2, 64) == log_star_smoothed(64) + 1
    # ell > 2^(3d)
    assert lambda_d(2, 65) == log_star_smoothed(65) + 2


def test_ell_zero():
    assert ell_zero(1, Fraction(1, 2)) == 2400
    assert ell_zero(2, Fraction(1, 4)) == 300 * 512
    for bad in (0, Fraction(3, 4)):
        with pytest.raises(PreconditionError):
            ell_zero(1, bad)


def test_er_bound_and_threshold():
    assert er_bound(3, 3) == 48
    assert er_bound(2, 4) == 24
    assert vc1_threshold(3, 2) == 4
    assert vc1_threshold(5, 4) == 256


def test_half_integer_arithmetic():
    h = HalfInteger.of("4.5")
    assert str(h) == "4.5" and float(h) == 4.5
    assert h + 1 == HalfInteger(11)
    assert h - HalfInteger(1) == 4
    assert h > 4 and h < 5 and h >= Fraction(9, 2)
    assert hash(HalfInteger(8)) == hash(Fraction(4))
    with pytest.raises(ValueError):
        HalfInteger.of(Fraction(1, 3))
