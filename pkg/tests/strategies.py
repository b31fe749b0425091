from fractions import Fraction

from hypothesis import strategies as st

odd_denominators = st.integers(min_value=0, max_value=60).map(lambda k: 2 * k + 1)

small_rationals = st.builds(Fraction, st.integers(min_value=-500, max_value=500), odd_denominators)

integers = st.integers(min_value=-10**6, max_value=10**6).map(Fraction)


def bit_vectors(min_size=1, max_size=64):
    return st.lists(st.integers(min_value=0, max_value=1), min_size=min_size, max_size=max_size)
