"""The automorphism Q, sending a 2-adic integer to the 2-adic integer whose
digits are its parity sequence, together with its inverse and iterates.

Q is a 2-adic isometry, so ``Q(x) mod 2**n`` depends only on ``x mod 2**n``
and :func:`q_mod` computes it with n T-steps on a residue. On rationals whose
T-orbit cycles, :func:`q_exact` returns the exact rational value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .collatz import DEFAULT_BUDGET, detect_orbit_cycle
from .padic import (
    EventuallyPeriodicBits,
    RationalLike,
    TruncatedPadic,
    odd_rational,
    periodic_expansion,
    rational_from_periodic,
    residue,
)
from .transform import invert_v1, qinv_exact_rational

DEFAULT_PRECISION = 64
MAX_ARRAY_BITS = 62


def q_mod(x: int, n: int) -> int:
    """``Q(x) mod 2**n`` for an integer residue ``x``."""
    if n < 1:
        raise ValueError("precision must be at least 1")
    mask = (1 << n) - 1
    x &= mask
    y = 0
    for k in range(n):
        if x & 1:
            y |= 1 << k
            x = ((3 * x + 1) >> 1) & mask
        else:
            x >>= 1
    return y


def q_mod_array(x, n: int) -> np.ndarray:
    """Vectorized :func:`q_mod` over an array of residues (``n <= 62``)."""
    if not 1 <= n <= MAX_ARRAY_BITS:
        raise ValueError(f"array precision must be in 1..{MAX_ARRAY_BITS}")
    mask = np.uint64((1 << n) - 1)
    one = np.uint64(1)
    x = np.asarray(x, dtype=np.uint64) & mask
    y = np.zeros_like(x)
    for k in range(n):
        s = x & one
        y |= s << np.uint64(k)
        # s=1: (3x+1)/2, s=0: x/2
        x = ((x + s * ((x << one) | one)) >> one) & mask
    return y


def qinv_mod(y: int, n: int) -> int:
    """``Q^-1(y) mod 2**n``: the residue class whose parity vector is ``y``'s digits."""
    if n < 1:
        raise ValueError("precision must be at least 1")
    y &= (1 << n) - 1
    return invert_v1([(y >> k) & 1 for k in range(n)]).residue


@dataclass(frozen=True)
class QResult:
    value: Union[Fraction, TruncatedPadic]
    exact: bool
    budget_exhausted: bool = False


def q_digits(x: RationalLike, budget: int = DEFAULT_BUDGET) -> Optional[EventuallyPeriodicBits]:
    """Parity sequence of ``x`` as eventually periodic digits, or None if the
    orbit did not cycle within ``budget`` steps."""
    report = detect_orbit_cycle(x, budget)
    if report.budget_exhausted:
        return None
    par = report.parities
    a = report.preperiod_length
    return EventuallyPeriodicBits(par[:a], par[a:])


def q_exact(
    x: RationalLike, budget: int = DEFAULT_BUDGET, precision: int = DEFAULT_PRECISION
) -> QResult:
    """Q(x) as an exact rational when the T-orbit of ``x`` cycles within ``budget``;
    otherwise ``Q(x) mod 2**precision``."""
    x = odd_rational(x)
    digits = q_digits(x, budget)
    if digits is None:
        return QResult(TruncatedPadic(q_mod(residue(x, precision), precision), precision),
                       exact=False, budget_exhausted=True)
    return QResult(rational_from_periodic(digits), exact=True)


def q_inverse_exact(x: RationalLike) -> Fraction:
    """Q^-1 of a rational; always rational and needs no budget."""
    return qinv_exact_rational(periodic_expansion(x))


def q_iterate(
    x: Union[RationalLike, TruncatedPadic],
    j: int,
    precision: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
) -> QResult:
    """``Q^j(x)``; negative ``j`` applies the inverse.

    With ``precision=None`` and a rational ``x`` the iterates are exact as
    long as every forward step cycles within ``budget``; on the first step
    that does not, the remaining work continues modulo ``2**DEFAULT_PRECISION``.
    Passing a precision (or a TruncatedPadic) works modulo ``2**precision``.
    """
    if isinstance(x, TruncatedPadic):
        precision = x.precision if precision is None else min(precision, x.precision)
        r = x.value
    elif precision is not None:
        r = residue(x, precision)
    else:
        value = odd_rational(x)
        for done in range(abs(j)):
            if j < 0:
                value = q_inverse_exact(value)
                continue
            step = q_exact(value, budget)
            if not step.exact:
                r = step.value.value
                rest = j - done - 1
                out = q_iterate(TruncatedPadic(r, DEFAULT_PRECISION), rest)
                return QResult(out.value, exact=False, budget_exhausted=True)
            value = step.value
        return QResult(value, exact=True)
    f = q_mod if j >= 0 else qinv_mod
    for _ in range(abs(j)):
        r = f(r, precision)
    return QResult(TruncatedPadic(r, precision), exact=False)


def feq_guard(x: Union[RationalLike, int], limit: int) -> Optional[int]:
    """The k >= 2 with ``x = -1 - (-2)^(k-2) (mod 2^k)``, searched up to ``limit``."""
    if isinstance(x, int):
        x = Fraction(x)
    for k in range(2, limit + 1):
        if residue(x + 1 + (-2) ** (k - 2), k) == 0:
            return k
    return None


def check_functional_equations(
    x: RationalLike, precision: Optional[int] = None, budget: int = DEFAULT_BUDGET
) -> dict[str, str]:
    """Check the functional equations of Q and Q^-1 at ``x``.

    Exact rational arithmetic when ``precision`` is None, otherwise modulo
    ``2**precision`` on the residue of ``x``. Each entry is "pass", "fail" or
    "skipped" (guard not met, or an orbit that did not cycle within budget).
    """
    x = odd_rational(x)
    odd = bool(x.numerator & 1)
    report: dict[str, str] = {}

    if precision is None:
        def Q(v):
            res = q_exact(v, budget)
            return res.value if res.exact else None

        Qi = q_inverse_exact
        k = feq_guard(x, 256)

        def same(a, b):
            return a is not None and b is not None and a == b
    else:
        n = precision

        def Q(v):
            return Fraction(q_mod(residue(v, n), n))

        def Qi(v):
            return Fraction(qinv_mod(residue(v, n), n))

        k = feq_guard(x, n)

        def same(a, b):
            return residue(a - b, n) == 0

    def record(name, lhs_thunk, rhs_thunk, applies=True):
        if not applies:
            report[name] = "skipped"
            return
        lhs, rhs = lhs_thunk(), rhs_thunk()
        if lhs is None or rhs is None:
            report[name] = "skipped"
        else:
            report[name] = "pass" if same(lhs, rhs) else "fail"

    qx, qix = Q(x), Qi(x)

    def from_qx(g):
        return lambda: None if qx is None else g(qx)

    record("Qinv(2x) = 2 Qinv(x)", lambda: Qi(2 * x), lambda: 2 * qix)
    record("Qinv(2x+1) = (2 Qinv(x) - 1)/3", lambda: Qi(2 * x + 1), lambda: (2 * qix - 1) / 3)
    record("Q(2x) = 2 Q(x)", lambda: Q(2 * x), from_qx(lambda v: 2 * v))
    record("Q(2x+1) = 2 Q(x) - 2^k + 1", lambda: Q(2 * x + 1),
           from_qx(lambda v: 2 * v - (1 << k) + 1), applies=k is not None)
    record("Q(8x+5) = 8 Q(x) - 2^(k+2) + 1", lambda: Q(8 * x + 5),
           from_qx(lambda v: 8 * v - (1 << (k + 2)) + 1), applies=k is not None)
    record("Q(4x+1) = 4 Q(x) - 3", lambda: Q(4 * x + 1),
           from_qx(lambda v: 4 * v - 3), applies=odd)
    record("Q(3x+1) = Q(x) - 1", lambda: Q(3 * x + 1),
           from_qx(lambda v: v - 1), applies=odd)
    return report
