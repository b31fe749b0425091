"""
Parity vectors and their inverse
================================

The first j parities of the 3x+1 orbit of n depend only on n mod 2^j, and
every one of the 2^j possible vectors occurs exactly once. So a vector can be
turned back into a residue class.
"""

from fractions import Fraction

from paritylab import invert_v1, invert_v2, parity_vector

# vectors print low-order first: s_0 s_1 s_2 ...
for n in (5, 13, 205):
    print(n, "".join(map(str, parity_vector(n, 9))))

# the pattern 100 repeated picks out 5 mod 8, 13 mod 64, 205 mod 512
for reps in (1, 2, 3):
    s = (1, 0, 0) * reps
    print(s, invert_v1(s), invert_v2(s))

# rationals with odd denominator have parity sequences too
print("1/5:", "".join(map(str, parity_vector(Fraction(1, 5), 12))))
