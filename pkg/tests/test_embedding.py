from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from paritylab.embedding import (
    TABLE_POINT_PARAMETERS,
    alpha,
    box_counting_stats,
    box_cover,
    check_self_affine,
    check_square_pair,
    embed_point,
    generate_arrays,
    generate_set,
    interval_family,
    monna,
    monna_exact,
    monna_of,
    points_csv,
    points_json,
    rational_points,
    render_squares_svg,
    render_svg,
    square_boxes,
    symmetry_report,
)
from paritylab.padic import DyadicRational, EventuallyPeriodicBits, TruncatedPadic, residue
from paritylab.qmap import q_mod

from strategies import small_rationals

RATIONAL_POINTS = [
    ("1", "-1/3", "1", "4/3"), ("17", "-401/3", "17/16", "493/384"),
    ("9", "-6377/3", "9/8", "8941/6144"), ("-7", "-5/7", "5/4", "10/7"),
    ("5", "-13/3", "5/4", "13/12"), ("-1/3", "1", "4/3", "1"), ("-3", "-7", "3/2", "5/4"),
    ("3", "-23/3", "3/2", "37/24"), ("5/7", "-1/5", "11/7", "8/5"), ("-1/5", "5/7", "8/5", "11/7"),
    ("1/3", "1/3", "5/3", "5/3"), ("-5", "-3/7", "7/4", "12/7"),
    ("7", "-1595/3", "7/4", "2797/1536"), ("-1", "-1", "2", "2"),
]


def direct_monna(bits):
    return sum((Fraction(b, 1 << k) for k, b in enumerate(bits)), Fraction(0))


def test_monna_values():
    assert monna_exact(EventuallyPeriodicBits((), (1, 0))) == Fraction(4, 3)
    assert monna_of(1) == 1 == monna_of(-2)
    assert monna_of(-1) == 2
    assert monna(TruncatedPadic(5, 3)) == DyadicRational(5, 2)


@given(st.integers(0, 2**20 - 1), st.integers(1, 20))
def test_monna_is_digit_sum(v, n):
    t = TruncatedPadic(v, n)
    d = monna(t)
    assert d.as_fraction() == direct_monna(t.bits)
    assert d.exp <= n - 1


@given(small_rationals)
def test_exact_monna_is_limit_of_truncations(x):
    exact = monna_of(x)
    n = 40
    approx = monna(TruncatedPadic(residue(x, n), n)).as_fraction()
    assert 0 <= exact - approx <= Fraction(2, 1 << n)


@given(st.integers(0, 2**24 - 1), st.integers(0, 2**24 - 1))
def test_two_lipschitz(a, b):
    assume(a != b)
    n = 24
    d = a ^ b
    norm = Fraction(1, (d & -d))
    gap = abs(monna(TruncatedPadic(a, n)).as_fraction() - monna(TruncatedPadic(b, n)).as_fraction())
    assert gap <= 2 * norm


@pytest.mark.parametrize("k", range(1, 11))
def test_balls_go_to_intervals(k):
    """M of the ball c + 2^k Z_2, seen at depth k + 6, fills [M(c), M(c) + 2^(1-k)]."""
    extra = 6
    n = k + extra
    for c in range(0, 1 << k, max(1, (1 << k) // 16)):
        vals = sorted(monna(TruncatedPadic(c + (t << k), n)).as_fraction() for t in range(1 << extra))
        lo = monna(TruncatedPadic(c, k)).as_fraction()
        assert vals[0] == lo
        assert vals[-1] == lo + Fraction(2, 1 << k) - Fraction(2, 1 << n)
        steps = {b - a for a, b in zip(vals, vals[1:])}
        assert steps == {Fraction(2, 1 << n)}


def test_point_examples():
    assert embed_point(5).as_fractions() == (Fraction(5, 4), Fraction(13, 12))
    assert embed_point(-7).as_fractions() == (Fraction(5, 4), Fraction(10, 7))
    assert embed_point(Fraction(1, 3)).as_fractions() == (Fraction(5, 3), Fraction(5, 3))
    with pytest.raises(ValueError):
        embed_point(27, budget=5)
    p = embed_point(5, precision=10)
    assert not p.exact and p.y == monna(TruncatedPadic(q_mod(5, 10), 10))


def test_rational_points_exact():
    rows = [(str(p.parameter), str(p.q_value), *map(str, p.as_fractions())) for p in rational_points()]
    assert rows == RATIONAL_POINTS
    assert len(TABLE_POINT_PARAMETERS) == 14
    assert '"q_of_r": "-6377/3"' in points_json(rational_points())


@given(small_rationals)
def test_odd_parameters_on_the_right(x):
    p = embed_point(x, precision=30)
    x_coord = p.x.as_fraction()
    assert (1 <= x_coord <= 2) if x.numerator % 2 else (0 <= x_coord <= 1)


def test_generate_set_small():
    pts = generate_set(1)
    assert [(p.x.as_fraction(), p.y.as_fraction()) for p in pts] == [(0, 0), (1, 1)]
    ps = generate_arrays(12)
    assert len(ps) == 4096
    assert ps.x_num.min() >= 0 and ps.x_num.max() < 2 << 11 and ps.y_num.max() < 2 << 11
    for n in (0, 1, 5, 77, 4095):
        x, y = ps.point(n)
        assert x == monna(TruncatedPadic(n, 12))
        assert y == monna(TruncatedPadic(q_mod(n, 12), 12))


def test_csv_format():
    text = points_csv(generate_arrays(3))
    lines = text.splitlines()
    assert lines[0] == "n,x_num,x_exp,y_num,y_exp"
    assert lines[2] == "1,1,0,5,2"  # Q(1) = 5 mod 8, M(5) = 5/4
    assert len(lines) == 9
    assert text == points_csv(generate_arrays(3))


def test_box_cover():
    cov = box_cover(1)
    assert [(x.as_fraction(), y.as_fraction(), s) for x, y, s in cov.boxes] == [(0, 0, 1), (1, 1, 1)]
    for k in (4, 5, 6):
        cov = box_cover(k)
        assert len(cov) == 1 << k
        assert sorted(cov.x0_num.tolist()) == list(range(1 << k))  # x-projections tile [0, 2]


@pytest.mark.parametrize("k", range(1, 13))
def test_covering(k):
    ps = generate_arrays(14)
    assert box_cover(k).contains(ps).all()


@pytest.mark.parametrize("k", range(2, 17))
def test_interval_families(k):
    f = interval_family(k)
    assert f.congruences_hold and f.ball_images_hold
    assert f.alpha == (f.m if k % 2 else f.n)
    assert f.I[1] - f.I[0] == f.J[1] - f.J[0] == Fraction(2, 1 << k)


def test_interval_family_examples():
    assert (alpha(2), interval_family(2).m, interval_family(2).n) == (2, 0, 2)
    assert (alpha(3), interval_family(3).m, interval_family(3).n) == (1, 1, 5)
    assert alpha(4) == 11
    assert q_mod(3, 4) == 3 and q_mod(11, 4) == 11


def test_self_affine_examples():
    assert check_self_affine(2, 2)
    assert embed_point(5).as_fractions() == (
        embed_point(2).as_fractions()[0] / 2 + 1, embed_point(2).as_fractions()[1] / 2 + Fraction(3, 4))
    assert check_self_affine(1)
    with pytest.raises(ValueError):
        check_self_affine(3, 2)


@given(st.integers(2, 12), st.integers(0, 2**12), st.integers(0, 12))
def test_self_affine_on_guarded_parameters(k, t, extra):
    r = alpha(k) + (t << k)
    assert check_self_affine(TruncatedPadic(r, k + extra), k)
    assert check_self_affine(Fraction(r), k)


@given(small_rationals)
def test_doubling_halves_points(x):
    assert check_self_affine(x, precision=24)
    assert check_self_affine(x)


@pytest.mark.parametrize("k", range(2, 8))
def test_square_pairs(k):
    assert check_square_pair(k, 16)


def test_square_box_shapes():
    b1, b2 = square_boxes(2)
    assert b1 == ((Fraction(1, 2), 1), (Fraction(1, 2), 1))
    assert b2 == ((Fraction(5, 4), Fraction(3, 2)), (1, Fraction(5, 4)))


def test_box_counting():
    rows = {r.k: r for r in box_counting_stats(21)}
    assert rows[2].ratio == pytest.approx(2.0)
    assert rows[11].ratio == pytest.approx(1.1)
    assert rows[21].ratio == pytest.approx(1.05)
    assert rows[21].boxes == 1 << 21


def test_symmetry():
    assert len(symmetry_report(4)) == 16
    sym5 = set(symmetry_report(5).tolist())
    short = {n for n in range(32) if q_mod(q_mod(n, 5), 5) == n}
    assert sym5 == short and len(sym5) < 32
    a, b = embed_point(Fraction(-1, 5)).as_fractions(), embed_point(Fraction(5, 7)).as_fractions()
    assert a == b[::-1] == (Fraction(8, 5), Fraction(11, 7))


def test_svg():
    svg = render_svg(generate_arrays(6), box_cover(4))
    assert svg.startswith('<svg xmlns="http://www.w3.org/2000/svg" width="1024" height="1024"')
    assert svg.count('fill="none"') == 16
    assert svg == render_svg(generate_arrays(6), box_cover(4))
    # (0, 0) lands in the bottom-left pixel
    assert '<rect x="0" y="1023" width="1" height="1"/>' in svg
    panels = render_squares_svg([2, 3], 12)
    assert 'width="2048"' in panels
