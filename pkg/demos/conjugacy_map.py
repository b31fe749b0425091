"""
The map Q and its iterates
==========================

Q sends x to the 2-adic integer whose digits are the parities of x, T(x),
T^2(x), ... On a rational whose orbit cycles, those digits are eventually
periodic and Q(x) is again rational.
"""

from fractions import Fraction

from paritylab import padic_norm, q_exact, q_iterate, q_mod
from paritylab.qmap import check_functional_equations

for x in (1, 5, 7, Fraction(-1, 3), Fraction(5, 7)):
    print(f"Q({x}) = {q_exact(x).value}")

# orbits of Q stay close to their start, closer after 2^k steps
x = Fraction(1, 5)
for j in (1, 2, 3, 4, -1, -2, -3, -4):
    y = q_iterate(x, j).value
    print(f"j={j:+d}  |Q^j(x) - x|_2 = {padic_norm(y - x)}")

# modulo 2^n Q is a permutation; Q(7) mod 2^40
print(q_mod(7, 40))

for name, status in check_functional_equations(11).items():
    print(f"{status:7s} {name}")
