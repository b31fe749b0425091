from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from paritylab.collatz import parity_vector
from paritylab.padic import EventuallyPeriodicBits, periodic_expansion
from paritylab.transform import (
    CongruenceClass,
    invariant_sum,
    inverse_2adic,
    invert_v1,
    invert_v2,
    qinv_exact_rational,
)

from strategies import bit_vectors


def brute_force_classes(j):
    """Every residue mod 2^j, grouped by its parity vector."""
    return {parity_vector(n, j): n for n in range(1 << j)}


@pytest.mark.parametrize("j", range(1, 11))
def test_inverse_matches_scan(j):
    table = brute_force_classes(j)
    assert len(table) == 1 << j  # parity vectors of length j are a bijection
    for s, n in table.items():
        assert invert_v1(s) == CongruenceClass(n, 1 << j)
        assert invert_v2(s) == CongruenceClass(n, 1 << j)


def test_repeated_100_examples():
    assert invert_v1((1, 0, 0)) == CongruenceClass(5, 8)
    assert invert_v1((1, 0, 0) * 2).residue == 13
    assert invert_v1((1, 0, 0) * 3).residue == 205


def test_all_ones_is_minus_one():
    assert str(invert_v2((1,) * 6)) == "63 mod 64"


@given(bit_vectors())
def test_signed_sum_is_minus_one(s):
    assert invariant_sum(s) == (1 << len(s)) - 1


@given(bit_vectors(max_size=40))
def test_formulas_agree(s):
    assert invert_v1(s) == invert_v2(s)
    assert parity_vector(invert_v1(s).residue, len(s)) == tuple(s)


def test_bad_input():
    with pytest.raises(ValueError):
        invert_v1(())
    with pytest.raises(ValueError):
        invert_v1((1, 2))
    with pytest.raises(ValueError):
        CongruenceClass(3, 6)
    with pytest.raises(ValueError):
        inverse_2adic((1, 0), 5)
    with pytest.raises(ValueError):
        inverse_2adic((1, 0, 1), 3, formula="v3")


def test_congruence_class():
    c = CongruenceClass(5, 8)
    assert 13 in c and 6 not in c
    assert c.length == 3


def test_inverse_2adic_of_streams():
    minus_third = EventuallyPeriodicBits((), (1, 0))
    # parity sequence (1,0,1,0,...) belongs to 1: 1 -> 2 -> 1 -> ...
    assert inverse_2adic(minus_third, 20, formula="both").value == 1
    assert inverse_2adic(iter([1] * 30), 30).value == (1 << 30) - 1


@pytest.mark.parametrize("pre, per, want", [
    ((1,), (0,), Fraction(-1, 3)),
    ((), (1, 0), Fraction(1)),
    ((), (1, 1, 0, 0), Fraction(5, 7)),
    ((), (1,), Fraction(-1)),
    ((), (0,), Fraction(0)),
    ((), (1, 0, 0), Fraction(1, 5)),
])
def test_exact_inverse(pre, per, want):
    assert qinv_exact_rational(EventuallyPeriodicBits(pre, per)) == want


@given(st.lists(st.integers(0, 1), max_size=6), st.lists(st.integers(0, 1), min_size=1, max_size=6))
def test_exact_inverse_reproduces_sequence(pre, per):
    e = EventuallyPeriodicBits(tuple(pre), tuple(per))
    x = qinv_exact_rational(e)
    assert parity_vector(x, 40) == e.digits(40)
    assert inverse_2adic(e, 40).agrees_with(x)


def test_exact_inverse_of_all_short_periods():
    # every period up to length 6 gives an odd-denominator rational
    for ell in range(1, 7):
        for per in product((0, 1), repeat=ell):
            x = qinv_exact_rational(EventuallyPeriodicBits((), per))
            assert x.denominator % 2 == 1
            assert periodic_expansion(x)  # well-defined 2-adic integer
