"""The 3x+1 map T, its conjugate U, the shift map, parity vectors and orbits."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .padic import RationalLike, TruncatedPadic, odd_rational

DEFAULT_BUDGET = 100_000


def t_step(x: RationalLike) -> Fraction:
    """T(x) = (3x+1)/2 for odd x, x/2 otherwise."""
    x = odd_rational(x)
    if x.numerator & 1:
        return (3 * x + 1) / 2
    return x / 2


def u_step(x: RationalLike) -> Fraction:
    """U(x) = (x+1)/2 for odd x, 3x/2 otherwise; U(x+1) = T(x) + 1."""
    x = odd_rational(x)
    if x.numerator & 1:
        return (x + 1) / 2
    return 3 * x / 2


def shift_step(x: Union[TruncatedPadic, RationalLike]):
    """Drop the lowest 2-adic digit: (x-1)/2 for odd x, x/2 otherwise."""
    if isinstance(x, TruncatedPadic):
        if x.precision < 2:
            raise ValueError("precision exhausted")
        return TruncatedPadic(x.value >> 1, x.precision - 1)
    x = odd_rational(x)
    return (x - (x.numerator & 1)) / 2


def parity_vector(x: Union[TruncatedPadic, RationalLike], j: int) -> tuple[int, ...]:
    """Parities of ``x, T(x), ..., T^(j-1)(x)``.

    A truncated input needs at least ``j`` known digits; each T-step uses up
    one of them.
    """
    if j < 1:
        raise ValueError("length must be at least 1")
    if isinstance(x, TruncatedPadic):
        if x.precision < j:
            raise ValueError(
                f"a parity vector of length {j} needs {j} digits, only {x.precision} known"
            )
        v = x.value
        out = []
        for _ in range(j):
            s = v & 1
            out.append(s)
            v = (3 * v + 1) >> 1 if s else v >> 1
        return tuple(out)
    x = odd_rational(x)
    if x.denominator == 1:
        v = x.numerator
        out = []
        for _ in range(j):
            s = v & 1
            out.append(s)
            v = (3 * v + 1) >> 1 if s else v >> 1
        return tuple(out)
    out = []
    for _ in range(j):
        out.append(x.numerator & 1)
        x = t_step(x)
    return tuple(out)


@dataclass(frozen=True)
class OrbitReport:
    iterates: tuple[Fraction, ...]
    preperiod_length: int
    cycle_length: Optional[int]
    budget_exhausted: bool = False

    @property
    def cycle(self) -> tuple[Fraction, ...]:
        if self.cycle_length is None:
            return ()
        a = self.preperiod_length
        return self.iterates[a:a + self.cycle_length]

    @property
    def parities(self) -> tuple[int, ...]:
        return tuple(x.numerator & 1 for x in self.iterates)


def detect_orbit_cycle(x: RationalLike, budget: int = DEFAULT_BUDGET) -> OrbitReport:
    """Iterate T on an exact rational until a value repeats or the budget runs out.

    ``iterates`` holds the preperiod followed by one full cycle.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    x = odd_rational(x)
    seen: dict[Fraction, int] = {}
    orbit: list[Fraction] = []
    for _ in range(budget + 1):
        if x in seen:
            start = seen[x]
            return OrbitReport(tuple(orbit), start, len(orbit) - start)
        seen[x] = len(orbit)
        orbit.append(x)
        x = t_step(x)
    return OrbitReport(tuple(orbit), len(orbit), None, budget_exhausted=True)
