"""Plane picture of Q: the points (M(r), M(Q(r))) for 2-adic r.

M reads the 2-adic digits of r as binary digits after the point,
``M(sum r_k 2^k) = sum r_k 2^-k``, so it sends Z_2 onto [0, 2]. On a
truncated value M is a dyadic rational; on an eventually periodic expansion
it is an exact rational. Coordinates stay exact until SVG rendering.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .collatz import DEFAULT_BUDGET
from .padic import (
    DyadicRational,
    EventuallyPeriodicBits,
    RationalLike,
    TruncatedPadic,
    format_rational,
    odd_rational,
    periodic_expansion,
    rational_from_periodic,
    residue,
)
from .qmap import q_digits, q_mod, q_mod_array

Coordinate = Union[DyadicRational, Fraction]


def _reverse_bits(value: int, n: int) -> int:
    out = 0
    for _ in range(n):
        out = (out << 1) | (value & 1)
        value >>= 1
    return out


def monna(x: TruncatedPadic) -> DyadicRational:
    """M of the known digits: ``sum_{k<n} b_k 2^-k``."""
    return DyadicRational(_reverse_bits(x.value, x.precision), x.precision - 1)


def monna_exact(e: EventuallyPeriodicBits) -> Fraction:
    a = len(e.preperiod)
    ell = len(e.period)
    head = Fraction(_reverse_bits(_digits_value(e.preperiod), a), 1 << (a - 1)) if a else Fraction(0)
    per = Fraction(_reverse_bits(_digits_value(e.period), ell), 1 << (ell - 1))
    # per repeats every ell digits, starting at digit a
    return head + per / (1 << a) / (1 - Fraction(1, 1 << ell))


def _digits_value(bits: Sequence[int]) -> int:
    v = 0
    for k, b in enumerate(bits):
        v |= b << k
    return v


def monna_of(x: RationalLike) -> Fraction:
    return monna_exact(periodic_expansion(x))


@dataclass(frozen=True)
class EmbeddedPoint:
    x: Coordinate
    y: Coordinate
    parameter: Union[Fraction, TruncatedPadic]
    exact: bool
    q_value: Optional[Fraction] = None

    def as_fractions(self) -> tuple[Fraction, Fraction]:
        return _frac(self.x), _frac(self.y)


def _frac(c: Coordinate) -> Fraction:
    return c.as_fraction() if isinstance(c, DyadicRational) else Fraction(c)


def embed_point(r: Union[RationalLike, TruncatedPadic], precision: Optional[int] = None,
                budget: int = DEFAULT_BUDGET) -> EmbeddedPoint:
    """(X, Y)(r) = (M(r), M(Q(r))).

    Without ``precision`` the point is exact, which needs the T-orbit of r to
    cycle within ``budget``; otherwise both coordinates are computed from
    ``r mod 2^precision``.
    """
    if isinstance(r, TruncatedPadic) or precision is not None:
        t = r if isinstance(r, TruncatedPadic) else TruncatedPadic(residue(r, precision), precision)
        if precision is not None and precision < t.precision:
            t = TruncatedPadic(t.value, precision)
        return EmbeddedPoint(monna(t), monna(TruncatedPadic(q_mod(t.value, t.precision), t.precision)),
                             t, exact=False)
    r = odd_rational(r)
    digits = q_digits(r, budget)
    if digits is None:
        raise ValueError(f"T-orbit of {r} did not cycle within {budget} steps; no exact point")
    return EmbeddedPoint(monna_of(r), monna_exact(digits), r, exact=True,
                         q_value=rational_from_periodic(digits))


TABLE_POINT_PARAMETERS = tuple(
    Fraction(v) for v in ("1", "17", "9", "-7", "5", "-1/3", "-3", "3", "5/7", "-1/5",
                          "1/3", "-5", "7", "-1")
)


def rational_points(parameters: Iterable[RationalLike] = TABLE_POINT_PARAMETERS) -> list[EmbeddedPoint]:
    """Exact points for rational parameters, sorted by abscissa then parameter."""
    pts = [embed_point(r) for r in parameters]
    return sorted(pts, key=lambda p: (_frac(p.x), p.parameter))


def points_json(points: Sequence[EmbeddedPoint]) -> str:
    rows = [
        {
            "r": format_rational(p.parameter),
            "q_of_r": format_rational(p.q_value),
            "x": format_rational(_frac(p.x)),
            "y": format_rational(_frac(p.y)),
        }
        for p in points
    ]
    return json.dumps(rows, indent=1)


# --- whole sets at finite depth ---------------------------------------------

def _reverse_bits_array(v: np.ndarray, n: int) -> np.ndarray:
    v = v.astype(np.uint64)
    out = np.zeros_like(v)
    one = np.uint64(1)
    for _ in range(n):
        out = (out << one) | (v & one)
        v = v >> one
    return out


@dataclass(frozen=True)
class PointSet:
    """All 2^k points of depth k; coordinates are ``num / 2^(k-1)``."""

    k: int
    x_num: np.ndarray
    y_num: np.ndarray

    @property
    def denominator_exp(self) -> int:
        return self.k - 1

    def __len__(self) -> int:
        return len(self.x_num)

    def point(self, n: int) -> tuple[DyadicRational, DyadicRational]:
        e = self.denominator_exp
        return DyadicRational(int(self.x_num[n]), e), DyadicRational(int(self.y_num[n]), e)


def generate_arrays(k: int) -> PointSet:
    """X and Y of every n < 2^k from its k-digit residue and parity vector."""
    if not 1 <= k <= 24:
        raise ValueError("depth must be in 1..24")
    n = np.arange(1 << k, dtype=np.uint64)
    q = q_mod_array(n, k)
    return PointSet(k, _reverse_bits_array(n, k).astype(np.int64),
                    _reverse_bits_array(q, k).astype(np.int64))


def generate_set(k: int) -> list[EmbeddedPoint]:
    ps = generate_arrays(k)
    out = []
    for n in range(len(ps)):
        x, y = ps.point(n)
        out.append(EmbeddedPoint(x, y, TruncatedPadic(n, k), exact=False))
    return out


def _canonical_dyadic(num: np.ndarray, exp: int) -> tuple[np.ndarray, np.ndarray]:
    num = num.astype(np.int64)
    e = np.full(len(num), exp, dtype=np.int64)
    for _ in range(exp):
        even = (num % 2 == 0) & (e > 0) & (num != 0)
        if not even.any():
            break
        num = np.where(even, num // 2, num)
        e = np.where(even, e - 1, e)
    e[num == 0] = 0
    return num, e


def points_csv(ps: PointSet) -> str:
    xn, xe = _canonical_dyadic(ps.x_num, ps.denominator_exp)
    yn, ye = _canonical_dyadic(ps.y_num, ps.denominator_exp)
    lines = ["n,x_num,x_exp,y_num,y_exp"]
    lines += [f"{i},{a},{b},{c},{d}" for i, (a, b, c, d) in enumerate(zip(xn, xe, yn, ye))]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class BoxCover:
    """2^k squares of side 2^(1-k); box n has corner (M(n), M(Q(n) mod 2^k))."""

    k: int
    x0_num: np.ndarray  # over 2^(k-1)
    y0_num: np.ndarray

    @property
    def side(self) -> Fraction:
        return Fraction(2, 1 << self.k)

    @property
    def boxes(self) -> list[tuple[DyadicRational, DyadicRational, Fraction]]:
        e = self.k - 1
        return [(DyadicRational(int(a), e), DyadicRational(int(b), e), self.side)
                for a, b in zip(self.x0_num, self.y0_num)]

    def __len__(self) -> int:
        return len(self.x0_num)

    def contains(self, ps: PointSet) -> np.ndarray:
        """For each point of a depth-K set (K >= k), is it in the box of n mod 2^k?"""
        if ps.k < self.k:
            raise ValueError("point set must be at least as deep as the cover")
        shift = ps.k - self.k
        box = np.arange(len(ps), dtype=np.int64) & ((1 << self.k) - 1)
        x0 = self.x0_num[box] << shift
        y0 = self.y0_num[box] << shift
        side = 1 << shift  # 2^(1-k) over 2^(K-1)
        return ((x0 <= ps.x_num) & (ps.x_num <= x0 + side)
                & (y0 <= ps.y_num) & (ps.y_num <= y0 + side))


def box_cover(k: int) -> BoxCover:
    ps = generate_arrays(k)
    return BoxCover(k, ps.x_num, ps.y_num)


# --- self-affinity -----------------------------------------------------------

@dataclass(frozen=True)
class IntervalFamily:
    k: int
    alpha: int
    m: int
    n: int
    I: tuple[Fraction, Fraction]
    J: tuple[Fraction, Fraction]
    congruences_hold: bool
    ball_images_hold: bool


def alpha(k: int) -> int:
    """Residue class mod 2^k on which Q(2x+1) = 2Q(x) - 2^k + 1 holds."""
    if k < 2:
        raise ValueError("k must be at least 2")
    return (-1 - (-2) ** (k - 2)) % (1 << k)


def _m(k: int) -> int:
    return (1 << (k - 2)) - 1


def _n(k: int) -> int:
    return 3 * (1 << (k - 2)) - 1


def _interval_I(k: int) -> tuple[Fraction, Fraction]:
    return 2 - Fraction(8, 1 << k), 2 - Fraction(6, 1 << k)


def _interval_J(k: int) -> tuple[Fraction, Fraction]:
    return 2 - Fraction(6, 1 << k), 2 - Fraction(4, 1 << k)


def _ball_image(center: int, k: int, extra: int) -> set[int]:
    """q_mod over the whole ball center + 2^k Z_2, seen at precision k + extra."""
    n = k + extra
    ball = center + (np.arange(1 << extra, dtype=np.uint64) << np.uint64(k))
    return set(int(v) for v in q_mod_array(ball, n))


def interval_family(k: int, extra_bits: int = 4) -> IntervalFamily:
    """alpha_k, m_k, n_k, I_k, J_k, with two checks:

    * Q(m_k), Q(n_k) mod 2^k are m_k, n_k (k even) or n_k, m_k (k odd);
    * Q maps the ball of alpha_k onto the ball of n_k, and the ball of
      2 alpha_k + 1 (radius 2^-(k+1)) onto that of m_(k+1), checked
      exhaustively at ``extra_bits`` digits beyond the radius.

    Together with M sending B(c, 2^-k) onto [M(c), M(c) + 2^(1-k)], the
    second check is Y(B(alpha_k)) = J_k and Y(B(2 alpha_k + 1)) = I_(k+1).
    """
    a, m, n = alpha(k), _m(k), _n(k)
    mod = 1 << k
    qm, qn = q_mod(m, k), q_mod(n, k)
    congruent = (qm, qn) == ((m, n) if k % 2 == 0 else (n, m))
    want_j = {n % mod + (t << k) for t in range(1 << extra_bits)}
    want_i = {_m(k + 1) + (t << (k + 1)) for t in range(1 << extra_bits)}
    images = (_ball_image(a, k, extra_bits) == want_j
              and _ball_image(2 * a + 1, k + 1, extra_bits) == want_i)
    # the interval endpoints are M of the class representatives
    endpoints = (_interval_I(k) == (monna_of(m), monna_of(n))
                 and _interval_J(k) == (monna_of(n), monna_of(_m(k + 1))))
    return IntervalFamily(k, a, m, n, _interval_I(k), _interval_J(k),
                          congruences_hold=congruent, ball_images_hold=images and endpoints)


def check_self_affine(r: Union[RationalLike, TruncatedPadic], k: Optional[int] = None,
                      precision: Optional[int] = None, budget: int = DEFAULT_BUDGET) -> bool:
    """Check (X,Y)(2r) = (X,Y)(r)/2, and with ``k`` given also
    (X,Y)(2r+1) = (X,Y)(r)/2 + (1, 1 - 2^-k), which needs r = alpha_k mod 2^k.

    Exact for rational r when ``precision`` is None; otherwise on truncations,
    where the depth-(N+1) points of 2r and 2r+1 are compared with the depth-N
    point of r.
    """
    if k is not None:
        rr = r.value if isinstance(r, TruncatedPadic) else residue(r, k)
        if k < 2 or (rr - alpha(k)) % (1 << k):
            raise ValueError(f"guard violated: r is not alpha_{k} mod 2^{k}")
    if isinstance(r, TruncatedPadic) or precision is not None:
        t = r if isinstance(r, TruncatedPadic) else TruncatedPadic(residue(r, precision), precision)
        if k is not None and t.precision < k:
            raise ValueError("precision below the guard depth")
        N = t.precision
        base = embed_point(t)
        bx, by = base.as_fractions()
        ex, ey = embed_point(TruncatedPadic(2 * t.value, N + 1)).as_fractions()
        ok = (ex, ey) == (bx / 2, by / 2)
        if k is not None:
            ox, oy = embed_point(TruncatedPadic(2 * t.value + 1, N + 1)).as_fractions()
            ok = ok and (ox, oy) == (bx / 2 + 1, by / 2 + 1 - Fraction(1, 1 << k))
        return ok
    r = odd_rational(r)
    bx, by = embed_point(r, budget=budget).as_fractions()
    ex, ey = embed_point(2 * r, budget=budget).as_fractions()
    ok = (ex, ey) == (bx / 2, by / 2)
    if k is not None:
        ox, oy = embed_point(2 * r + 1, budget=budget).as_fractions()
        ok = ok and (ox, oy) == (bx / 2 + 1, by / 2 + 1 - Fraction(1, 1 << k))
    return ok


def square_boxes(k: int) -> tuple[tuple, tuple]:
    """The pair of boxes related by (x, y) -> (1 + x/2, 1 + y/2 - 2^-k):
    J_k^2 and J_(k+1) x I_(k+1) for even k, I_k x J_k and I_(k+1)^2 for odd k."""
    if k % 2 == 0:
        return (_interval_J(k), _interval_J(k)), (_interval_J(k + 1), _interval_I(k + 1))
    return (_interval_I(k), _interval_J(k)), (_interval_I(k + 1), _interval_I(k + 1))


def check_square_pair(k: int, depth: int) -> bool:
    """Points with parameter in the ball of alpha_k fill box 1, and their
    affine images are exactly the points of the ball of 2 alpha_k + 1, which
    fill box 2 (all at finite depth, exact dyadics)."""
    if depth < k + 1:
        raise ValueError("depth must exceed k")
    a = alpha(k)
    ps = generate_arrays(depth + 1)
    scale = 1 << depth  # coordinates are num / 2^depth
    n = np.arange(len(ps), dtype=np.int64)
    low = n < (1 << depth)
    first = low & ((n & ((1 << k) - 1)) == a)
    second = (n & ((1 << (k + 1)) - 1)) == 2 * a + 1

    def inside(sel, box):
        (x0, x1), (y0, y1) = box
        xs, ys = ps.x_num[sel], ps.y_num[sel]
        return bool(np.all((xs >= x0 * scale) & (xs <= x1 * scale)
                           & (ys >= y0 * scale) & (ys <= y1 * scale)))

    box1, box2 = square_boxes(k)
    # depth-`depth` points of the first ball, as numerators over 2^(depth-1)
    sub = generate_arrays(depth)
    fx = sub.x_num[(np.arange(len(sub)) & ((1 << k) - 1)) == a]
    fy = sub.y_num[(np.arange(len(sub)) & ((1 << k) - 1)) == a]
    # (1 + x/2, 1 + y/2 - 2^-k) over 2^depth
    mapped = set(zip((scale + fx).tolist(),
                     (scale + fy - (scale >> k)).tolist()))
    target = set(zip(ps.x_num[second].tolist(), ps.y_num[second].tolist()))
    return inside(first, box1) and inside(second, box2) and mapped == target


def square_panel(k: int, depth: int) -> tuple[tuple, np.ndarray, np.ndarray]:
    """Points of depth ``depth`` inside the first box of the k-th square pair,
    rescaled to [0, 1]^2 as exact fractions' floats (for drawing only)."""
    ps = generate_arrays(depth)
    box, _ = square_boxes(k)
    (x0, x1), (y0, y1) = box
    scale = 1 << (depth - 1)
    xs = ps.x_num / scale
    ys = ps.y_num / scale
    sel = (xs >= float(x0)) & (xs <= float(x1)) & (ys >= float(y0)) & (ys <= float(y1))
    return box, (xs[sel] - float(x0)) / float(x1 - x0), (ys[sel] - float(y0)) / float(y1 - y0)


@dataclass(frozen=True)
class BoxCountRow:
    k: int
    boxes: int
    ratio: float


def box_counting_stats(k_max: int) -> list[BoxCountRow]:
    """log(nu_k) / log(1/l_k) with nu_k = 2^k boxes of side l_k = 2^(1-k)."""
    if not 2 <= k_max <= 24:
        raise ValueError("k_max must be in 2..24")
    return [BoxCountRow(k, 1 << k, math.log(1 << k) / math.log(1 << (k - 1)))
            for k in range(2, k_max + 1)]


def symmetry_report(k: int) -> np.ndarray:
    """Residues n < 2^k whose depth-k point has its mirror image across the
    diagonal in the set too, i.e. Q_k(Q_k(n)) = n."""
    if not 2 <= k <= 24:
        raise ValueError("k must be in 2..24")
    n = np.arange(1 << k, dtype=np.uint64)
    q = q_mod_array(n, k)
    return np.flatnonzero(q_mod_array(q, k) == n)


# --- rendering ---------------------------------------------------------------

VIEW = 1024


def _px(v: np.ndarray) -> np.ndarray:
    # [0, 2] -> 0..VIEW-1
    return np.minimum((np.asarray(v, dtype=np.float64) * (VIEW / 2)).astype(np.int64), VIEW - 1)


def _svg_body(xs, ys, boxes: Optional[BoxCover] = None, x_off: int = 0) -> list[str]:
    out = []
    if boxes is not None:
        e = boxes.k - 1
        side = VIEW / (1 << boxes.k) * 2
        for a, b in zip(boxes.x0_num, boxes.y0_num):
            x = int(a) / (1 << e) * (VIEW / 2)
            y = VIEW - int(b) / (1 << e) * (VIEW / 2) - side
            out.append(f'<rect x="{x + x_off:.3f}" y="{y:.3f}" width="{side:.3f}" height="{side:.3f}" '
                       'fill="none" stroke="#1f4e99" stroke-width="1"/>')
    px, py = _px(xs), VIEW - 1 - _px(ys)
    # one rect per pixel, in order of the first parameter that lands there
    _, first = np.unique(px * VIEW + py, return_index=True)
    first.sort()
    for a, b in zip(px[first].tolist(), py[first].tolist()):
        out.append(f'<rect x="{a + x_off}" y="{b}" width="1" height="1"/>')
    return out


def render_svg(ps: Optional[PointSet] = None, boxes: Optional[BoxCover] = None) -> str:
    """Points as 1-pixel squares on a VIEW x VIEW canvas, y axis pointing up.

    Pixels are emitted once each, ordered by the smallest parameter drawn
    there, so the output depends only on the point set.
    """
    body = []
    if ps is not None:
        scale = 1 << ps.denominator_exp
        body = _svg_body(ps.x_num / scale, ps.y_num / scale, boxes)
    elif boxes is not None:
        body = _svg_body(np.zeros(0), np.zeros(0), boxes)
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{VIEW}" height="{VIEW}" '
            f'viewBox="0 0 {VIEW} {VIEW}">')
    return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', *body, "</svg>"]) + "\n"


def render_squares_svg(ks: Sequence[int], depth: int) -> str:
    """Enlarged first boxes of the square pairs, one VIEW-sized panel per k."""
    width = VIEW * len(ks)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{VIEW}" '
             f'viewBox="0 0 {width} {VIEW}">', '<rect width="100%" height="100%" fill="white"/>']
    for i, k in enumerate(ks):
        _, u, v = square_panel(k, depth)
        parts.append(f'<rect x="{i * VIEW}" y="0" width="{VIEW}" height="{VIEW}" fill="none" stroke="black"/>')
        # panel coordinates live in [0, 1]; stretch to the full panel
        parts += _svg_body(2 * u, 2 * v, None, x_off=i * VIEW)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
