"""Inverse parity transforms.

Two closed forms give the congruence class of integers with a prescribed
parity vector ``S`` of length j (``sigma_k`` is the number of ones among
``s_0..s_k``)::

    n = -sum s_k 2^k 3^-sigma_k                 (mod 2^j)
    n = -1 - sum (1 - s_k) 2^k 3^-sigma_k       (mod 2^j)

Their difference gives the invariant ``sum (-1)^s_k 2^k 3^-sigma_k = -1``.
Letting j grow, the same series converge 2-adically to the unique 2-adic
integer with a given infinite parity sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import Iterable, Sequence, Union

from .collatz import parity_vector
from .padic import EventuallyPeriodicBits, TruncatedPadic, mod_inverse_odd


@dataclass(frozen=True)
class CongruenceClass:
    residue: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2 or self.modulus & (self.modulus - 1):
            raise ValueError("modulus must be a power of two, at least 2")
        if not 0 <= self.residue < self.modulus:
            raise ValueError("residue out of range")

    @property
    def length(self) -> int:
        return self.modulus.bit_length() - 1

    def __contains__(self, n: int) -> bool:
        return (n - self.residue) % self.modulus == 0

    def __str__(self) -> str:
        return f"{self.residue} mod {self.modulus}"


def _check_bits(s: Sequence[int]) -> tuple[int, ...]:
    s = tuple(int(b) for b in s)
    if not s:
        raise ValueError("parity vector must be nonempty")
    if any(b not in (0, 1) for b in s):
        raise ValueError("parity vector entries must be 0 or 1")
    return s


def _weighted_sums(s: Sequence[int]) -> tuple[int, int]:
    """Return (sum over odd terms, sum over even terms) of 2^k 3^-sigma_k mod 2^j."""
    j = len(s)
    mask = (1 << j) - 1
    inv3 = mod_inverse_odd(3, j)
    w = 1  # 3^-sigma_k
    odd_sum = even_sum = 0
    for k, b in enumerate(s):
        if b:
            w = w * inv3 & mask
            odd_sum += w << k
        else:
            even_sum += w << k
    return odd_sum & mask, even_sum & mask


def invert_v1(s: Sequence[int]) -> CongruenceClass:
    s = _check_bits(s)
    odd_sum, _ = _weighted_sums(s)
    return CongruenceClass(-odd_sum % (1 << len(s)), 1 << len(s))


def invert_v2(s: Sequence[int]) -> CongruenceClass:
    s = _check_bits(s)
    _, even_sum = _weighted_sums(s)
    return CongruenceClass((-1 - even_sum) % (1 << len(s)), 1 << len(s))


def invariant_sum(s: Sequence[int]) -> int:
    """``sum (-1)^s_k 2^k 3^-sigma_k mod 2^j``; always ``2^j - 1``."""
    s = _check_bits(s)
    odd_sum, even_sum = _weighted_sums(s)
    return (even_sum - odd_sum) % (1 << len(s))


def inverse_2adic(
    s: Union[EventuallyPeriodicBits, Iterable[int]], n: int, formula: str = "v1"
) -> TruncatedPadic:
    """First ``n`` digits of the 2-adic integer whose parity sequence is ``s``.

    ``formula`` picks the series ("v1" or "v2"); "both" evaluates the two and
    raises if they disagree.
    """
    if n < 1:
        raise ValueError("precision must be at least 1")
    if isinstance(s, EventuallyPeriodicBits):
        head = s.digits(n)
    else:
        head = tuple(islice(iter(s), n))
        if len(head) < n:
            raise ValueError(f"need {n} parity digits, stream gave {len(head)}")
    if formula == "v1":
        c = invert_v1(head)
    elif formula == "v2":
        c = invert_v2(head)
    elif formula == "both":
        c = invert_v1(head)
        if c != invert_v2(head):
            raise AssertionError("the two inverse series disagree")
    else:
        raise ValueError(f"unknown formula {formula!r}")
    return TruncatedPadic(c.residue, n)


def _periodic_point(period: Sequence[int]) -> Fraction:
    # 2^l T^l(x) = 3^sigma (x + c) with T^l(x) = x
    c = Fraction(0)
    sigma = 0
    for k, b in enumerate(period):
        if b:
            sigma += 1
            c += Fraction(1 << k, 3 ** sigma)
    return 3 ** sigma * c / ((1 << len(period)) - 3 ** sigma)


def qinv_exact_rational(s: EventuallyPeriodicBits) -> Fraction:
    """Exact rational whose parity sequence is the eventually periodic ``s``.

    The periodic part is a T-cycle solved in closed form; the preperiod is
    then undone with exact T-predecessors. The answer is checked by forward
    iteration before it is returned.
    """
    x = _periodic_point(s.period)
    for b in reversed(s.preperiod):
        x = (2 * x - 1) / 3 if b else 2 * x
    if x.denominator % 2 == 0:
        raise ArithmeticError(f"pullback produced {x}, which is not a 2-adic integer")
    check = len(s.preperiod) + 2 * len(s.period)
    if parity_vector(x, check) != s.digits(check):
        raise ArithmeticError(f"{x} does not reproduce the parity sequence {s}")
    return x
