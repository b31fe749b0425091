from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from paritylab.padic import (
    DyadicRational,
    EventuallyPeriodicBits,
    TruncatedPadic,
    bits_of,
    format_rational,
    mod_inverse_odd,
    odd_rational,
    padic_norm,
    periodic_expansion,
    rational_from_periodic,
    residue,
    valuation,
    value_of,
)

from strategies import small_rationals


def test_parse_rationals():
    assert odd_rational("-1/3") == Fraction(-1, 3)
    assert odd_rational(" 5 ") == 5
    assert odd_rational("+7/21") == Fraction(1, 3)
    with pytest.raises(ValueError):
        odd_rational("1/2")
    with pytest.raises(ValueError):
        odd_rational("one")
    with pytest.raises(ZeroDivisionError):
        odd_rational("1/0")
    with pytest.raises(TypeError):
        odd_rational(0.5)


def test_format_rational():
    assert format_rational(Fraction(-13, 3)) == "-13/3"
    assert format_rational(Fraction(4)) == "4"


def test_mod_inverse():
    assert mod_inverse_odd(3, 3) == 3  # 3*3 = 9 = 1 mod 8
    assert 3 * mod_inverse_odd(3, 64) % (1 << 64) == 1
    with pytest.raises(ValueError):
        mod_inverse_odd(6, 8)


def test_residues_of_known_rationals():
    assert residue(Fraction(-1, 3), 4) == 0b0101
    assert residue(Fraction(1, 3), 4) == 0b1011
    assert residue(-1, 8) == 255
    assert residue(Fraction(1, 5), 8) == 0b11001101


def test_truncated_arithmetic():
    a = TruncatedPadic(5, 4)
    b = TruncatedPadic(13, 6)
    assert (a + b).precision == 4
    assert (a + b).value == (5 + 13) % 16
    assert (a * b).value == 65 % 16
    assert (-a).value == 11
    assert (a - 5).value == 0
    assert TruncatedPadic(12, 5).halve() == TruncatedPadic(6, 4)
    with pytest.raises(ValueError):
        a.halve()
    assert TruncatedPadic(-1, 3).value == 7
    assert str(TruncatedPadic(5, 4)) == "...0101_2"
    assert TruncatedPadic.from_bits((1, 0, 1)).value == 5
    assert TruncatedPadic(0b0101, 4).agrees_with(Fraction(-1, 3))


def test_valuation_and_norm():
    assert valuation(Fraction(12, 7)) == 2
    assert valuation(0) is None
    assert padic_norm(Fraction(12, 7)) == Fraction(1, 4)
    assert padic_norm(0) == 0
    assert padic_norm(TruncatedPadic(0, 8)) is None
    assert padic_norm(TruncatedPadic(8, 8)) == Fraction(1, 8)


@pytest.mark.parametrize("x, pre, per", [
    (Fraction(-1, 3), (), (1, 0)),
    (Fraction(1, 3), (1,), (1, 0)),
    (Fraction(-1), (), (1,)),
    (Fraction(0), (), (0,)),
    (Fraction(5), (1, 0, 1), (0,)),
    (Fraction(1, 5), (1,), (0, 1, 1, 0)),
])
def test_periodic_expansions(x, pre, per):
    e = periodic_expansion(x)
    assert (e.preperiod, e.period) == (pre, per)
    assert rational_from_periodic(e) == x


def test_expansion_canonical_form():
    e = EventuallyPeriodicBits((1, 0, 1, 0), (1, 0, 1, 0))
    assert e == EventuallyPeriodicBits((), (1, 0))
    assert str(EventuallyPeriodicBits((1,), (0, 1, 1, 0))) == "(0110)1_2"
    with pytest.raises(ValueError):
        EventuallyPeriodicBits((), ())


@given(small_rationals)
def test_expansion_round_trip(x):
    e = periodic_expansion(x)
    assert rational_from_periodic(e) == x
    assert e.truncate(40).value == residue(x, 40)


@given(st.integers(min_value=0, max_value=2**40), st.integers(min_value=1, max_value=48))
def test_bits_round_trip(v, n):
    assert value_of(bits_of(v, n)) == v % (1 << n)


def test_dyadic_canonical():
    d = DyadicRational(12, 4)
    assert (d.num, d.exp) == (3, 2)
    assert DyadicRational(0, 7) == DyadicRational(0, 0)
    assert DyadicRational.from_fraction(Fraction(13, 16)).as_fraction() == Fraction(13, 16)
    assert float(DyadicRational(3, 1)) == 1.5
    with pytest.raises(ValueError):
        DyadicRational.from_fraction(Fraction(1, 3))
