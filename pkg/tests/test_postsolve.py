import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvelab.bisolve import solve
from curvelab.poly import IntPoly2, parse_poly
from curvelab.postsolve import (
    NONZERO,
    ZERO_COMMON,
    ZERO_FACTOR,
    bad_value_estimates,
    match_common_solutions,
    rejects,
    separating_form,
    sign_at_real_solutions,
    sign_at_solutions,
)
from tests.constructed import _mp, contains, random_system, rational_point


def h_exact(h: IntPoly2, x: Fraction, y: Fraction) -> int:
    v = sum(c * x**i * y**j for (i, j), c in h.terms.items())
    return (v > 0) - (v < 0)


def sums_disjoint(sf) -> bool:
    ds = list(sf.certificate)
    for i in range(len(ds)):
        for j in range(i + 1, len(ds)):
            (ci, ri), (cj, rj) = ds[i], ds[j]
            if (ci[0] - cj[0]) ** 2 + (ci[1] - cj[1]) ** 2 <= (ri + rj) ** 2:
                return False
    return True


def in_enclosure(enc, z) -> bool:
    # the 200-bit reference points carry their own rounding error
    (cr, ci), r = enc
    c = _mp.mpc(_mp.mpf(cr.numerator) / cr.denominator, _mp.mpf(ci.numerator) / ci.denominator)
    return abs(z - c) <= _mp.mpf(r.numerator) / r.denominator + _mp.ldexp(1, -150)


def test_sepform_examples():
    sf = separating_form(solve(parse_poly("y - x"), parse_poly("x^2 - x")))
    assert sf.s == 0
    sf = separating_form(solve(parse_poly("x - 3"), parse_poly("y - 2")))
    assert sf.s == 0 and sf.rejections == ()
    sf = separating_form(solve(parse_poly("x"), parse_poly("y^2 - y")))
    assert sf.s == 1
    assert sf.rejections and sf.rejections[0][0] == 0
    assert sums_disjoint(sf)


def test_rejects_is_open_disk():
    assert rejects((Fraction(0), Fraction(0)), 0)
    assert not rejects((Fraction(1, 2), Fraction(0)), 0)
    assert rejects((Fraction(2), Fraction(1, 3)), 2)


def test_bad_value_estimates_cover_pair_values():
    sr = solve(parse_poly("y - x"), parse_poly("x^2 - x"))
    est = bad_value_estimates(sr)
    (key, (er, ei)), = est.items()
    assert abs(er + 1) < Fraction(1, 2) and abs(ei) < Fraction(1, 2)


@pytest.mark.parametrize("seed", range(6))
def test_sepform_certificate(seed):
    k = random_system(random.Random(500 + seed), max_deg=4, concurrent=seed % 2 == 1)
    sr = solve(k.F, k.G)
    sf = separating_form(sr)
    assert sums_disjoint(sf)
    pts = k.numeric()
    # each x_i + s*y_i lies in its own enclosure
    for t, s in enumerate(sr.solutions):
        hit = [(a, b) for a, b in pts if contains(s.polydisk.dx, a) and contains(s.polydisk.dy, b)]
        assert len(hit) == 1
        assert in_enclosure(sf.certificate[t], hit[0][0] + sf.s * hit[0][1])
    if len({s.ix for s in sr.solutions}) == len(sr.solutions):
        assert sf.s == 0


def test_match_common_solutions_examples():
    f = parse_poly("x^2 + y^2 - 1")
    sr = solve(f, parse_poly("x - y"))
    assert match_common_solutions(sr, sr) == [0, 1]
    assert match_common_solutions(sr, solve(f, parse_poly("x + y"))) == [None, None]
    assert match_common_solutions(sr, solve(parse_poly("x - 5"), parse_poly("y"))) == [None, None]
    other = solve(parse_poly("x - y"), parse_poly("2*x^2 - 1"))
    m = match_common_solutions(sr, other)
    assert sorted(m) == [0, 1]


def test_sign_examples():
    f, g = parse_poly("x^2 + y^2 - 1"), parse_poly("x - y")
    rep = sign_at_real_solutions(f, g, parse_poly("x + y"))
    by_x = sorted((e.x.center.re.to_fraction(), e.sign) for e in rep.entries)
    assert [s for _, s in by_x] == [-1, 1]
    assert rep.entries[0].reason == NONZERO
    rep = sign_at_real_solutions(f, g, g)
    assert rep.signs() == [0, 0]
    rep = sign_at_real_solutions(f, parse_poly("y - x"), parse_poly("x*(y - x)"))
    assert rep.signs() == [0, 0]
    assert all(e.reason == ZERO_FACTOR for e in rep.entries)


def test_sign_common_zero_without_shared_factor():
    f, g = parse_poly("x^2 + y^2 - 1"), parse_poly("x - y")
    rep = sign_at_real_solutions(f, g, parse_poly("2*x^2 - 1"))
    assert rep.signs() == [0, 0]
    assert all(e.reason == ZERO_COMMON for e in rep.entries)
    rep = sign_at_real_solutions(f, g, parse_poly("y - x + 2*x^2 - 1"))
    assert rep.signs() == [0, 0]


def test_sign_shared_factor_case_split():
    # g = (x - y)(x + 1), h = (x - y)(y - 3): the x = -1 solutions need the split
    f = parse_poly("x^2 + y^2 - 1")
    g = parse_poly("(x - y)*(x + 1)")
    h = parse_poly("(x - y)*(y - 3)")
    rep = sign_at_real_solutions(f, g, h)
    got = sorted((float(e.x.center.re), e.sign) for e in rep.entries)
    # (-1, 0) is not on x = y: h = (-1 - 0)(0 - 3) = 3 > 0; the diagonal points give 0
    assert [s for _, s in got] == [1, 0, 0] or [s for _, s in got] == [0, 1, 0]
    assert sorted(e.sign for e in rep.entries) == [0, 0, 1]


def test_nonreal_solutions_skipped():
    rep = sign_at_real_solutions(parse_poly("x^2 + y^2 + 1"), parse_poly("x - y"), parse_poly("x"))
    assert rep.entries == []


@pytest.mark.parametrize("seed", range(6))
def test_signs_against_exact_oracle(seed):
    rng = random.Random(700 + seed)
    while True:
        k = random_system(rng, max_deg=4)
        if k.rational():
            break
    sr = solve(k.F, k.G)
    h = parse_poly(rng.choice(["x + y", "x*y - 1", "x^2 - y + 1", "2*x - 3*y + 1"]))
    rep = sign_at_solutions(sr, h)
    for e in rep.entries:
        s = sr.solutions[e.index]
        hit = [i for i, (a, b) in enumerate(k.numeric()) if contains(s.polydisk.dx, a) and contains(s.polydisk.dy, b)]
        x, y = rational_point(k, hit[0])
        assert e.sign == h_exact(h, x, y)


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_sign_of_product_is_product_of_signs(seed):
    k = random_system(random.Random(seed), max_deg=3)
    sr = solve(k.F, k.G)
    a, b = parse_poly("x - y + 1"), parse_poly("x + 2*y - 1")
    sa, sb, sab = (sign_at_solutions(sr, h).signs() for h in (a, b, a * b))
    assert sab == [u * v for u, v in zip(sa, sb)]
