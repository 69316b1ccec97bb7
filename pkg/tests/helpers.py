"""Small exact helpers shared by the unit tests."""

from fractions import Fraction

from curvelab.arith import Dyadic, DyadicComplex


def cfrac(z) -> tuple:
    z = DyadicComplex.coerce(z)
    return z.re.to_fraction(), z.im.to_fraction()


def ball_l1_distance(A, exact) -> Fraction:
    """Upper bound on ``||center(A) - exact||_1`` computed with Fractions (complex modulus bounded by |re|+|im|)."""
    n = max(len(A.re), len(exact))
    cs = A.padded(n).coeffs
    tot = Fraction(0)
    for i in range(n):
        e = exact[i] if i < len(exact) else 0
        er, ei = (e, Fraction(0)) if not isinstance(e, tuple) else e
        cr, ci = cfrac(cs[i])
        tot += abs(cr - Fraction(er)) + abs(ci - Fraction(ei))
    return tot


def within(A, exact, ell: int) -> bool:
    """Exact polynomial lies in the ball of ``A`` and the ball radius is at most ``2**-ell``."""
    return A.contains([_dc(e) for e in exact]) and A.err_bound <= Dyadic(1, -ell)


def _dc(e):
    if isinstance(e, tuple):
        return DyadicComplex(Dyadic.from_fraction(Fraction(e[0])), Dyadic.from_fraction(Fraction(e[1])))
    return DyadicComplex(Dyadic.from_fraction(Fraction(e)))


def horner_exact(coeffs: list, x: tuple) -> tuple:
    """Exact complex Horner with Fraction pairs; coefficients low to high."""
    ar, ai = Fraction(0), Fraction(0)
    xr, xi = x
    for c in reversed(coeffs):
        cr, ci = (Fraction(c), Fraction(0)) if not isinstance(c, tuple) else c
        ar, ai = ar * xr - ai * xi + cr, ar * xi + ai * xr + ci
    return ar, ai


def cabs_le(d: tuple, bound: Fraction) -> bool:
    return d[0] * d[0] + d[1] * d[1] <= bound * bound
