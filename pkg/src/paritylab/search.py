"""Search for odd rational Q-cycles p/q with small numerator and denominator.

Every candidate is first screened modulo 2^w: an exact cycle of period pi
satisfies Q^pi(x) = x, hence also modulo 2^w since Q is an isometry, so the
screen never drops a true cycle. The few survivors are then checked with
exact rational arithmetic.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .collatz import DEFAULT_BUDGET, detect_orbit_cycle
from .padic import TruncatedPadic, format_rational, residue, valuation
from .cycles import build_qn
from .qmap import q_exact, q_mod_array


@dataclass(frozen=True)
class SearchConfig:
    bound: int = 999
    max_period: int = 16
    modulus_bits: int = 40
    budget: int = DEFAULT_BUDGET

    def __post_init__(self) -> None:
        if self.bound < 1:
            raise ValueError("bound must be at least 1")
        if self.max_period < 1 or self.max_period & (self.max_period - 1):
            raise ValueError("max_period must be a power of two")
        if not 8 <= self.modulus_bits <= 62:
            raise ValueError("modulus_bits must be in 8..62")


@dataclass(frozen=True)
class CycleCandidate:
    seed: Fraction
    period: int
    verified_exact: bool
    cycle_elements: tuple[Fraction, ...] = ()

    def as_dict(self) -> dict:
        return {
            "seed": format_rational(self.seed),
            "period": self.period,
            "verified_exact": self.verified_exact,
            "cycle": [format_rational(c) for c in self.cycle_elements],
        }


@dataclass
class SearchReport:
    config: SearchConfig
    candidates_screened: int
    survivors: list[CycleCandidate] = field(default_factory=list)
    seconds: float = 0.0

    def to_json(self) -> str:
        return json.dumps(
            {
                "config": asdict(self.config),
                "candidates_screened": self.candidates_screened,
                "survivors": [c.as_dict() for c in self.survivors],
                "seconds": round(self.seconds, 3),
            },
            indent=1,
        )


def candidates(bound: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced fractions p/q with p, q odd, |p| <= bound, 1 <= q <= bound.

    Sorted by (|p|, q, sign), negative first.
    """
    odd = np.arange(1, bound + 1, 2, dtype=np.int64)
    p, q = np.meshgrid(odd, odd, indexing="ij")
    p, q = p.ravel(), q.ravel()
    keep = np.gcd(p, q) == 1
    p, q = p[keep], q[keep]
    p = np.concatenate([-p, p])
    q = np.concatenate([q, q])
    order = np.lexsort((p > 0, q, np.abs(p)))
    return p[order], q[order]


def _screen(x: np.ndarray, cfg: SearchConfig) -> np.ndarray:
    """Smallest power-of-two period of each residue under Q mod 2^w, 0 if none."""
    period = np.zeros(len(x), dtype=np.int64)
    y = x.copy()
    done = 0
    pi = 1
    while pi <= cfg.max_period:
        for _ in range(pi - done):
            y = q_mod_array(y, cfg.modulus_bits)
        done = pi
        hit = (y == x) & (period == 0)
        period[hit] = pi
        pi *= 2
    return period


def _verify(seed: Fraction, period: int, budget: int) -> CycleCandidate:
    elems = [seed]
    x = seed
    for _ in range(period):
        res = q_exact(x, budget)
        if not res.exact:
            return CycleCandidate(seed, period, False)
        x = res.value
        elems.append(x)
    if x != seed:
        return CycleCandidate(seed, period, False)
    return CycleCandidate(seed, period, True, tuple(elems[:-1]))


def search(cfg: SearchConfig = SearchConfig(), threads: int = 1) -> SearchReport:
    t0 = time.perf_counter()
    p, q = candidates(cfg.bound)
    w = cfg.modulus_bits
    mod = 1 << w
    inv = {int(d): pow(int(d), -1, mod) for d in np.unique(q)}
    inv_q = np.array([inv[int(d)] for d in q], dtype=object)
    x = np.array((p.astype(object) * inv_q) % mod, dtype=np.uint64)
    chunks = np.array_split(np.arange(len(x)), max(threads, 1))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda idx: _screen(x[idx], cfg), chunks))
    else:
        parts = [_screen(x[idx], cfg) for idx in chunks]
    period = np.concatenate(parts)
    report = SearchReport(cfg, len(x))
    for i in np.flatnonzero(period):
        seed = Fraction(int(p[i]), int(q[i]))
        report.survivors.append(_verify(seed, int(period[i]), cfg.budget))
    report.seconds = time.perf_counter() - t0
    return report


KNOWN_Q_CYCLES = (
    (Fraction(-1),),
    (Fraction(1, 3),),
    (Fraction(-1, 3), Fraction(1)),
    (Fraction(-1, 5), Fraction(5, 7)),
)

# each rational of a known Q-cycle and the T-cycle its orbit falls into
KNOWN_T_CYCLES = {
    Fraction(-1): (Fraction(-1),),
    Fraction(1, 3): (Fraction(1), Fraction(2)),
    Fraction(-1, 3): (Fraction(0),),
    Fraction(1): (Fraction(1), Fraction(2)),
    Fraction(-1, 5): (Fraction(1, 5), Fraction(4, 5), Fraction(2, 5)),
    Fraction(5, 7): (Fraction(5, 7), Fraction(11, 7), Fraction(20, 7), Fraction(10, 7)),
}


def _same_cycle(a: tuple, b: tuple) -> bool:
    if len(a) != len(b):
        return False
    return any(a[i:] + a[:i] == b for i in range(len(a)))


def verify_known_cycles(budget: int = DEFAULT_BUDGET) -> list[tuple[str, bool]]:
    """Exact checks of the known odd Q-cycles and their T-cycles; raises on failure."""
    checks: list[tuple[str, bool]] = []
    for cyc in KNOWN_Q_CYCLES:
        for i, x in enumerate(cyc):
            want = cyc[(i + 1) % len(cyc)]
            got = q_exact(x, budget)
            checks.append((f"Q({format_rational(x)}) = {format_rational(want)}",
                           got.exact and got.value == want))
    for x, tcyc in KNOWN_T_CYCLES.items():
        orbit = detect_orbit_cycle(x, budget)
        name = "(" + ", ".join(format_rational(c) for c in tcyc) + ")"
        checks.append((f"T-orbit of {format_rational(x)} ends in {name}",
                       orbit.cycle_length is not None and _same_cycle(orbit.cycle, tcyc)))
    failed = [name for name, ok in checks if not ok]
    if failed:
        raise AssertionError("known cycle check failed: " + "; ".join(failed))
    return checks


@dataclass(frozen=True)
class FixedPoint:
    residue: int
    precision: int
    agree_minus_one: int  # number of low digits shared with -1
    agree_one_third: int  # number of low digits shared with 1/3

    @property
    def nearest(self) -> str:
        return "-1" if self.agree_minus_one >= self.agree_one_third else "1/3"

    @property
    def distance(self) -> Fraction:
        """2-adic distance to the nearest of -1, 1/3 (0 when equal mod 2^n)."""
        agree = max(self.agree_minus_one, self.agree_one_third)
        return Fraction(0) if agree >= self.precision else Fraction(1, 1 << agree)


def fixed_point_locality(n: int) -> list[FixedPoint]:
    """Odd residues fixed by Q_n and how closely they match -1 and 1/3."""
    table = build_qn(n)
    idx = np.flatnonzero(table.mapping == np.arange(len(table), dtype=np.uint32))
    third = residue(Fraction(1, 3), n)
    out = []
    for i in idx:
        x = 2 * int(i) + 1
        a = valuation(TruncatedPadic(x + 1, n))
        b = valuation(TruncatedPadic(x - third, n))
        out.append(FixedPoint(x, n, n if a is None else a, n if b is None else b))
    return out

