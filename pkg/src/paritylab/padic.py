"""Exact 2-adic integers at finite precision and rationals with odd denominator.

Rationals are plain :class:`fractions.Fraction` objects; :func:`odd_rational`
checks that the denominator is odd, which is what makes them 2-adic integers.
Everything here is integer arithmetic, no floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

RationalLike = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def odd_rational(x: RationalLike) -> Fraction:
    """Coerce ``x`` to a Fraction and reject even denominators.

    Strings of the form ``"p/q"`` or ``"-p/q"`` are accepted.
    """
    if isinstance(x, str):
        m = _RATIONAL_RE.match(x)
        if m is None:
            raise ValueError(f"cannot parse rational {x!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ZeroDivisionError(f"zero denominator in {x!r}")
        x = Fraction(num, den)
    elif isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise TypeError(f"expected int, Fraction or 'p/q' string, got {type(x).__name__}")
    x = Fraction(x)
    if x.denominator % 2 == 0:
        raise ValueError(f"{x} has an even denominator and is not a 2-adic integer")
    return x


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def mod_inverse_odd(a: int, n: int) -> int:
    """Inverse of the odd number ``a`` modulo ``2**n``."""
    if n < 1:
        raise ValueError("precision must be at least 1")
    if a % 2 == 0:
        raise ValueError(f"{a} is even and has no inverse modulo 2^{n}")
    return pow(a, -1, 1 << n)


def residue(x: RationalLike, n: int) -> int:
    """Least nonnegative residue of an odd-denominator rational modulo ``2**n``."""
    x = odd_rational(x)
    mask = (1 << n) - 1
    if x.denominator == 1:
        return x.numerator & mask
    return (x.numerator * mod_inverse_odd(x.denominator, n)) & mask


def bits_of(value: int, n: int) -> tuple[int, ...]:
    """Low-order-first bits of ``value mod 2**n``."""
    return tuple((value >> k) & 1 for k in range(n))


def value_of(bits: Iterable[int]) -> int:
    v = 0
    for k, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bit {k} is {b!r}, expected 0 or 1")
        v |= b << k
    return v


@dataclass(frozen=True)
class TruncatedPadic:
    """A 2-adic integer known modulo ``2**precision``.

    Stored as the least nonnegative residue; ``bits`` gives the low-first
    digit view. Binary operations keep the smaller precision of the operands.
    """

    value: int
    precision: int

    def __post_init__(self) -> None:
        if self.precision < 1:
            raise ValueError("precision must be at least 1")
        object.__setattr__(self, "value", self.value & ((1 << self.precision) - 1))

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "TruncatedPadic":
        return cls(value_of(bits), len(bits))

    @property
    def bits(self) -> tuple[int, ...]:
        return bits_of(self.value, self.precision)

    @property
    def modulus(self) -> int:
        return 1 << self.precision

    def is_odd(self) -> bool:
        return bool(self.value & 1)

    def _coerce(self, other) -> "TruncatedPadic":
        if isinstance(other, TruncatedPadic):
            return other
        if isinstance(other, (int, Fraction)):
            return padic_from_rational(other, self.precision)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncatedPadic(self.value + other.value, min(self.precision, other.precision))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncatedPadic(self.value - other.value, min(self.precision, other.precision))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncatedPadic(self.value * other.value, min(self.precision, other.precision))

    __rmul__ = __mul__

    def __neg__(self) -> "TruncatedPadic":
        return TruncatedPadic(-self.value, self.precision)

    def halve(self) -> "TruncatedPadic":
        """Exact division by 2 of an even value; one bit of precision is lost."""
        if self.value & 1:
            raise ValueError("cannot halve an odd 2-adic integer")
        if self.precision < 2:
            raise ValueError("precision exhausted")
        return TruncatedPadic(self.value >> 1, self.precision - 1)

    def agrees_with(self, x: RationalLike) -> bool:
        return residue(x, self.precision) == self.value

    def __str__(self) -> str:
        # right-to-left, as 2-adic digits are usually written
        return "..." + "".join(str(b) for b in reversed(self.bits)) + "_2"


def padic_from_rational(x: RationalLike, n: int) -> TruncatedPadic:
    return TruncatedPadic(residue(x, n), n)


def valuation(x: Union[TruncatedPadic, RationalLike]) -> int | None:
    """Index of the lowest nonzero digit; None for zero (at the known precision)."""
    if isinstance(x, TruncatedPadic):
        if x.value == 0:
            return None
        return (x.value & -x.value).bit_length() - 1
    x = odd_rational(x)
    if x == 0:
        return None
    num = x.numerator
    return (num & -num).bit_length() - 1


def padic_norm(x: Union[TruncatedPadic, RationalLike]) -> Fraction | None:
    """2-adic norm ``2**-l``.

    Returns ``Fraction(0)`` for an exact zero and ``None`` for a truncated
    value whose known digits are all zero (it cannot be told apart from 0).
    """
    v = valuation(x)
    if v is None:
        return None if isinstance(x, TruncatedPadic) else Fraction(0)
    return Fraction(1, 1 << v)


@dataclass(frozen=True)
class EventuallyPeriodicBits:
    """Digits ``preperiod`` followed by ``period`` repeated forever, low-first.

    Instances are canonicalized on construction: shortest period, then the
    shortest preperiod, so equal 2-adic integers compare equal.
    """

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self) -> None:
        pre = tuple(int(b) for b in self.preperiod)
        per = tuple(int(b) for b in self.period)
        if not per:
            raise ValueError("period must be nonempty")
        if any(b not in (0, 1) for b in pre + per):
            raise ValueError("digits must be 0 or 1")
        ell = len(per)
        for d in range(1, ell + 1):
            if ell % d == 0 and per == per[:d] * (ell // d):
                per = per[:d]
                break
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def digit(self, k: int) -> int:
        a = len(self.preperiod)
        if k < a:
            return self.preperiod[k]
        return self.period[(k - a) % len(self.period)]

    def digits(self, n: int) -> tuple[int, ...]:
        return tuple(self.digit(k) for k in range(n))

    def truncate(self, n: int) -> TruncatedPadic:
        return TruncatedPadic.from_bits(self.digits(n))

    def __str__(self) -> str:
        # conventional right-to-left notation, the bar written as (...)
        pre = "".join(map(str, reversed(self.preperiod)))
        per = "".join(map(str, reversed(self.period)))
        return f"({per}){pre}_2"


def rational_from_periodic(e: EventuallyPeriodicBits) -> Fraction:
    """The rational ``A + 2**a * P / (1 - 2**l)`` denoted by ``e``."""
    a = len(e.preperiod)
    ell = len(e.period)
    return value_of(e.preperiod) + Fraction(value_of(e.period) << a, 1 - (1 << ell))


def periodic_expansion(x: RationalLike) -> EventuallyPeriodicBits:
    """Exact eventually periodic 2-adic expansion of an odd-denominator rational.

    Runs the shift map ``x -> (x - digit) / 2`` until a state repeats; the
    numerators are bounded so this always terminates.
    """
    x = odd_rational(x)
    seen: dict[Fraction, int] = {}
    digits: list[int] = []
    while x not in seen:
        seen[x] = len(digits)
        b = x.numerator & 1
        digits.append(b)
        x = (x - b) / 2
    start = seen[x]
    return EventuallyPeriodicBits(tuple(digits[:start]), tuple(digits[start:]))


@dataclass(frozen=True, order=False)
class DyadicRational:
    """``num / 2**exp`` kept in lowest terms (``num`` odd, or zero with ``exp == 0``)."""

    num: int
    exp: int = 0

    def __post_init__(self) -> None:
        if self.exp < 0:
            raise ValueError("exponent must be nonnegative")
        num, exp = self.num, self.exp
        if num == 0:
            exp = 0
        else:
            tz = min((num & -num).bit_length() - 1, exp)
            num >>= tz
            exp -= tz
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    @classmethod
    def from_fraction(cls, x: Fraction) -> "DyadicRational":
        den = x.denominator
        if den & (den - 1):
            raise ValueError(f"{x} is not dyadic")
        return cls(x.numerator, den.bit_length() - 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def __float__(self) -> float:
        return self.num / (1 << self.exp)

    def __str__(self) -> str:
        return format_rational(self.as_fraction())
