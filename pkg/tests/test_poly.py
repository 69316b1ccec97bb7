import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvelab.arith import Disk, Dyadic, DyadicComplex
from curvelab.poly import (
    ApproxPoly,
    ExactOracle,
    IntPoly1,
    IntPoly2,
    PolySyntaxError,
    build_subproduct_tree,
    cauchy_root_bound,
    div_rem_approx,
    eval_coeff_views,
    format_poly,
    gcd_1,
    kronecker_mul,
    mul_approx,
    mul_exact,
    multipoint_eval,
    newton_inverse,
    parse_poly,
    remainder_norm_bound,
    reverse,
    shear,
    sqf_list_1,
    squarefree_part_1,
)
from curvelab.poly.approx import InsufficientPrecision
from tests.helpers import cabs_le, cfrac, horner_exact, within

int_lists = st.lists(st.integers(-(1 << 40), 1 << 40), min_size=1, max_size=24)


def P(*c):
    return IntPoly1(list(c))


# --- exact univariate -------------------------------------------------------


def test_mul_exact_examples():
    assert mul_exact(P(1, 1), P(-1, 1)) == P(-1, 0, 1)
    assert mul_exact(P(0, 2), P(0, 0, 3)) == P(0, 0, 0, 6)


def test_mul_exact_degree_64_against_schoolbook():
    rng = random.Random(7)
    a = [rng.randint(-(1 << 30), 1 << 30) for _ in range(65)]
    b = [rng.randint(-(1 << 30), 1 << 30) for _ in range(65)]
    ref = [0] * 129
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            ref[i + j] += x * y
    assert mul_exact(P(*a), P(*b)).coeffs == ref


@given(int_lists, int_lists)
def test_kronecker_matches_convolution(a, b):
    ref = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            ref[i + j] += x * y
    assert kronecker_mul(a, b) == ref


def test_reverse_examples():
    assert reverse(P(3, 2, 1), 2) == P(1, 2, 3)
    assert reverse(P(1, 1), 3) == P(0, 0, 1, 1)
    with pytest.raises(ValueError):
        reverse(P(1, 2, 3), 1)


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=10).filter(lambda c: c[0] != 0 and c[-1] != 0))
def test_reverse_involution(c):
    F = P(*c)
    d = F.degree
    assert reverse(reverse(F, d), d) == F


def test_cauchy_bound_examples():
    assert cauchy_root_bound(P(-4, 0, 1)) == Dyadic(5)
    assert cauchy_root_bound(P(-1, 1)) == Dyadic(2)
    assert cauchy_root_bound(P(8, 0, 0, 2)) == Dyadic(5)


def test_squarefree_examples():
    assert squarefree_part_1(P(0, 0, 1)) == P(0, 1)
    F = mul_exact(mul_exact(P(-1, 1), P(-1, 1)), P(2, 1))
    assert squarefree_part_1(F) == mul_exact(P(-1, 1), P(2, 1))


def test_squarefree_random_products():
    rng = random.Random(3)
    irreducibles = [P(-2, 0, 1), P(1, 1, 1), P(-3, 1), P(5, 2), P(1, 0, 0, 1, 1)]
    for _ in range(20):
        chosen = rng.sample(irreducibles, 3)
        F, G = P(1), P(1)
        for q in chosen:
            F = mul_exact(F, q ** rng.randint(1, 3))
            G = mul_exact(G, q)
        S = squarefree_part_1(F)
        assert S == G or S == G * -1
        assert sum(k * p.degree for p, k in sqf_list_1(F)) == F.degree


def test_gcd_1():
    a = mul_exact(P(-1, 1), P(2, 1))
    b = mul_exact(P(-1, 1), P(5, 1))
    g = gcd_1(a, b)
    assert g.degree == 1 and g.eval(1) == 0


# --- bivariate and parsing --------------------------------------------------


def test_parse_and_format():
    f = parse_poly("3*x^2*y - 7*y + 1")
    assert len(f.terms) == 3
    assert str(f) == "3*x^2*y - 7*y + 1"
    assert parse_poly("x^2 + y^2 - 1") == IntPoly2({(2, 0): 1, (0, 2): 1, (0, 0): -1})
    assert parse_poly("(x - y)^2") == parse_poly("x^2 - 2*x*y + y^2")
    assert format_poly({}) == "0"


def test_parse_errors():
    with pytest.raises(PolySyntaxError) as e:
        parse_poly("x^")
    assert e.value.offset == 2
    with pytest.raises(PolySyntaxError):
        parse_poly("2x")
    with pytest.raises(PolySyntaxError):
        parse_poly("x + z")


poly2 = st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)), st.integers(-(10**12), 10**12), max_size=8)


@given(poly2)
def test_print_parse_round_trip(terms):
    p = IntPoly2(terms)
    assert parse_poly(str(p)) == p
    assert IntPoly2.from_json(p.to_json()) == p


def test_shear_examples():
    x, y = IntPoly2.x(), IntPoly2.y()
    assert shear(x, 1) == x + y
    circle = parse_poly("x^2 + y^2 - 1")
    assert shear(circle, 0) == circle
    s = shear(x * y, 1)
    assert s == x * y + y * y
    assert s.leading_coeff("y") == IntPoly1([1])


@given(poly2, st.integers(-3, 3), st.integers(-5, 5), st.integers(-5, 5))
def test_shear_is_substitution(terms, s, a, b):
    f = IntPoly2(terms)
    assert shear(f, s).eval(a, b) == f.eval(a + s * b, b)


def test_eval_coeff_views_examples():
    circle = parse_poly("x^2 + y^2 - 1")
    A = eval_coeff_views(circle, "x", Disk(DyadicComplex(Dyadic(0))), 10)
    assert within(A, [-1, 0, 1], 10)
    B = eval_coeff_views(parse_poly("x*y"), "y", Dyadic(2), 10)
    assert within(B, [0, 2], 10)
    C = eval_coeff_views(parse_poly("x^2*y + 3*x - 7"), "x", Dyadic(1, -1), 20)
    assert within(C, [Fraction(-11, 2), Fraction(1, 4)], 20)


# --- approximate arithmetic -------------------------------------------------


def test_mul_approx_examples():
    a = ApproxPoly.from_exact([1, 1], 12)
    r = mul_approx(a, a, 10)
    assert within(r, [1, 2, 1], 10)
    x = ApproxPoly([0, 1 << 20], None, 20, 1)
    r = mul_approx(x, ApproxPoly.from_exact([0, 1], 20), 10)
    assert within(r, [0, 0, 1], 10)


def test_mul_approx_random_degree_32():
    rng = random.Random(11)
    a = [Dyadic(rng.randint(-(1 << 16), 1 << 16), -rng.randint(0, 30)) for _ in range(33)]
    b = [Dyadic(rng.randint(-(1 << 16), 1 << 16), -rng.randint(0, 30)) for _ in range(33)]
    A, B = ApproxPoly.from_exact(a, 200), ApproxPoly.from_exact(b, 200)
    exact = [Fraction(0)] * 65
    for i, u in enumerate(a):
        for j, v in enumerate(b):
            exact[i + j] += u.to_fraction() * v.to_fraction()
    assert within(mul_approx(A, B, 64), exact, 64)


def test_newton_inverse_examples():
    h = newton_inverse(ApproxPoly.from_exact([1, -1], 40), 3, 30)
    assert within(h, [1, 1, 1, 1], 30)
    h = newton_inverse(ApproxPoly.from_exact([1], 40), 5, 30)
    assert within(h, [1, 0, 0, 0, 0, 0], 30)
    h = newton_inverse(ApproxPoly.from_exact([1, 1], 40), 4, 30)
    assert within(h, [1, -1, 1, -1, 1], 30)


def test_newton_inverse_prefix_consistency():
    g = ApproxPoly.from_exact([1, 3, -2, 5, 7, 1, 1, 2, 3], 80)
    h8 = newton_inverse(g, 7, 40)
    h4 = newton_inverse(g, 3, 40)
    assert within(h8.truncate(4), [c for c in _exact_series_inverse([1, 3, -2, 5], 4)], 39)
    assert within(h4, _exact_series_inverse([1, 3, -2, 5], 4), 40)


def _exact_series_inverse(g: list, n: int) -> list:
    h = [Fraction(1, g[0])]
    for k in range(1, n):
        s = sum(Fraction(g[i]) * h[k - i] for i in range(1, min(k, len(g) - 1) + 1))
        h.append(-s / g[0])
    return h


def _exact_divmod(F: list, G: list):
    F = [Fraction(c) for c in F]
    n = len(G) - 1
    Q = [Fraction(0)] * max(1, len(F) - n)
    R = list(F)
    for k in range(len(F) - 1, n - 1, -1):
        c = R[k] / G[-1]
        Q[k - n] = c
        for i in range(n + 1):
            R[k - n + i] -= c * G[i]
    return Q, R[:n]


def test_div_rem_examples():
    Q, R = div_rem_approx(ApproxPoly.from_exact([0, 0, 1], 30), ApproxPoly.from_exact([-1, 1], 30), 1, 20)
    assert within(Q, [1, 1], 18) and within(R, [1], 20)
    G = ApproxPoly.from_exact([2, -3, 1], 30)
    Q, R = div_rem_approx(G, G, 2, 20)
    assert within(Q, [1], 18) and within(R, [0, 0], 20)
    Q, R = div_rem_approx(ApproxPoly.from_exact([1, 0, 0, 0, 1], 60), ApproxPoly.from_exact([1, 1, 1], 60), 1, 40)
    assert within(R, [1, 1], 40)
    assert within(Q, [0, -1, 1], 36)


def test_div_rem_requires_monic():
    with pytest.raises(ValueError):
        div_rem_approx(ApproxPoly.from_exact([1, 2, 3], 10), ApproxPoly.from_exact([1, 2], 10), 1, 10)


def test_remainder_norm_bound_examples():
    assert remainder_norm_bound(1, 1, 1) == (4, 16)
    assert remainder_norm_bound(1 << 12, 0, 1) == (1 << 12, 1 << 12)


def test_subproduct_tree_examples():
    t = build_subproduct_tree([Dyadic(1), Dyadic(-1)], 20)
    assert within(t.root, [-1, 0, 1], 20)
    t = build_subproduct_tree([Dyadic(0)] * 4, 20)
    assert within(t.root, [0, 0, 0, 0, 1], 20)
    t = build_subproduct_tree([Dyadic(k) for k in (1, 2, 3, 4)], 30)
    assert within(t.root, [24, -50, 35, -10, 1], 30)


def test_subproduct_leaf_consistency():
    rng = random.Random(5)
    pts = [DyadicComplex(Dyadic(rng.randint(-64, 64), -4), Dyadic(rng.randint(-64, 64), -4)) for _ in range(6)]
    t = build_subproduct_tree(pts, 60)
    for p in pts:
        v, e = t.root.eval_ball(p)
        assert cabs_le(cfrac(v), e + Fraction(1, 1 << 40))


def test_multipoint_examples():
    vals = multipoint_eval(ExactOracle([1, 0, 1]), [Dyadic(0), Dyadic(1), Dyadic(2)], 10)
    for v, want in zip(vals, (1, 2, 5)):
        d = cfrac(v)
        assert cabs_le((d[0] - want, d[1]), Fraction(1, 1 << 10))
    vals = multipoint_eval(IntPoly1([7]), [Dyadic(3), DyadicComplex(Dyadic(1), Dyadic(1))], 10)
    assert all(cfrac(v) == (7, 0) for v in vals)


def test_multipoint_random_degree_64():
    rng = random.Random(17)
    F = [rng.randint(-(1 << 32), 1 << 32) for _ in range(65)]
    pts = [(Fraction(rng.randint(-(1 << 10), 1 << 10), 1 << 8), Fraction(rng.randint(-(1 << 10), 1 << 10), 1 << 8))
           for _ in range(64)]
    dpts = [DyadicComplex(Dyadic.from_fraction(a), Dyadic.from_fraction(b)) for a, b in pts]
    vals = multipoint_eval(IntPoly1(F), dpts, 128)
    for v, p in zip(vals, pts):
        e = horner_exact(F, p)
        c = cfrac(v)
        assert cabs_le((c[0] - e[0], c[1] - e[1]), Fraction(1, 1 << 128))


def test_insufficient_precision_oracle_rejected():
    from curvelab.poly import FunctionOracle

    bad = FunctionOracle(lambda ell: ApproxPoly([1, 1], None, 2, 3), 1, 1)
    with pytest.raises(InsufficientPrecision):
        bad.request(20)
