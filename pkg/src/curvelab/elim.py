"""Sylvester matrices, modular resultants, magnitude bounds and bivariate gcds."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import prevprime
from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dmp_gcd
from sympy.polys.densearith import dmp_exquo

from .arith import Disk, Dyadic, ceil_log2, log_bar
from .poly.exact import IntPoly1, IntPoly2

__all__ = [
    "DegenerateDegree",
    "ResultantArtifacts",
    "sylvester",
    "sylvester_det",
    "resultant_modular",
    "resultants",
    "magnitude_bound",
    "hadamard_sq",
    "cofactor_ub",
    "gcd_2",
    "squarefree_part_2",
    "exact_quotient_2",
]

PRIME_START = 1 << 62


class DegenerateDegree(ValueError):
    """The eliminated variable does not occur in one of the inputs."""


@dataclass(frozen=True)
class ResultantArtifacts:
    Ry: IntPoly1
    Rx: IntPoly1
    degree_bound: int
    bitsize_bound: int


def _orient(f: IntPoly2, axis: str) -> IntPoly2:
    # internally the eliminated variable is always y
    if axis == "y":
        return f
    if axis == "x":
        return f.swap()
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def sylvester(f: IntPoly2, g: IntPoly2, axis: str = "y") -> list:
    """Sylvester matrix w.r.t. ``axis``; rows of ``f`` first, entries in the other variable."""
    F, G = _orient(f, axis), _orient(g, axis)
    m, n = F.deg_y, G.deg_y
    if m <= 0 or n <= 0:
        raise DegenerateDegree(f"zero degree in eliminated variable {axis}")
    fv = F.views("y")[::-1]
    gv = G.views("y")[::-1]
    size = m + n
    zero = IntPoly1()
    rows = []
    for i in range(n):
        rows.append([zero] * i + fv + [zero] * (size - i - m - 1))
    for i in range(m):
        rows.append([zero] * i + gv + [zero] * (size - i - n - 1))
    return rows


def sylvester_det(mat: list) -> IntPoly1:
    """Fraction-free (Bareiss) determinant of a square matrix over Z[x]."""
    n = len(mat)
    if n == 0:
        return IntPoly1([1])
    a = [list(r) for r in mat]
    sign = 1
    prev = IntPoly1([1])
    for k in range(n - 1):
        if a[k][k].is_zero():
            piv = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if piv is None:
                return IntPoly1()
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).divmod_exact(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


# ---------------------------------------------------------------------------
# modular resultant
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _prime(i: int) -> int:
    return prevprime(PRIME_START if i == 0 else _prime(i - 1))


def _strip(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _res_univariate_mod(A: list, B: list, p: int) -> int:
    """Resultant of two coefficient lists (low to high) over Z/p."""
    A = _strip([c % p for c in A])
    B = _strip([c % p for c in B])
    if not A or not B:
        return 0
    res = 1
    while True:
        da, db = len(A) - 1, len(B) - 1
        if db == 0:
            return res * pow(B[0], da, p) % p
        if da == 0:
            return res * pow(A[0], db, p) % p
        # R = A mod B
        R = list(A)
        inv = pow(B[-1], p - 2, p)
        for k in range(da, db - 1, -1):
            c = R[k] * inv % p
            if c:
                off = k - db
                for i in range(db + 1):
                    R[off + i] = (R[off + i] - c * B[i]) % p
        R = _strip(R[:db])
        if not R:
            return 0
        dr = len(R) - 1
        if (da * db) & 1:
            res = -res
        res = res * pow(B[-1], da - dr, p) % p
        A, B = B, R


def _eval_views_mod(views: list, x0: int, p: int) -> list:
    out = []
    for v in views:
        acc = 0
        for c in reversed(v):
            acc = (acc * x0 + c) % p
        out.append(acc)
    return out


def _interpolate_mod(xs: list, ys: list, p: int) -> list:
    """Newton interpolation over Z/p; coefficients low to high."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], p - 2, p) % p
    poly = [0] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        new = [0] * n
        for k in range(n - 1):
            new[k + 1] = poly[k]
        for k in range(n):
            new[k] = (new[k] - xs[i] * poly[k]) % p
        new[0] = (new[0] + coef[i]) % p
        poly = new
    return poly


def _res_image(fv: list, gv: list, p: int, dbound: int):
    """Image of ``res_y`` modulo ``p`` as a coefficient list, or None for a bad prime."""
    lf, lg = fv[-1], gv[-1]
    if not any(c % p for c in lf) or not any(c % p for c in lg):
        return None
    fvl = [v.coeffs for v in fv]
    gvl = [v.coeffs for v in gv]
    xs, ys = [], []
    x0 = 0
    while len(xs) < dbound + 1:
        a = _eval_views_mod(fvl, x0, p)
        b = _eval_views_mod(gvl, x0, p)
        if a[-1] and b[-1]:
            xs.append(x0)
            ys.append(_res_univariate_mod(a, b, p))
        x0 += 1
        if x0 >= p:
            return None
    return _interpolate_mod(xs, ys, p)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CURVELAB_THREADS", "1")))
    except ValueError:
        return 1


def resultant_modular(f: IntPoly2, g: IntPoly2, axis: str = "y") -> IntPoly1:
    """Exact ``res(f, g; axis)`` by reduction modulo word-size primes and CRT lifting.

    A zero result signals a common factor.  If one input does not involve the
    eliminated variable the resultant is that input raised to the other's
    degree (and ``1`` when neither does).
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of the zero polynomial")
    F, G = _orient(f, axis), _orient(g, axis)
    m, n = F.deg_y, G.deg_y
    if m == 0 and n == 0:
        return IntPoly1([1])
    if m == 0:
        return F.coeff_view("y", 0) ** n
    if n == 0:
        return G.coeff_view("y", 0) ** m
    fv, gv = F.views("y"), G.views("y")
    dbound = n * F.deg_x + m * G.deg_x
    dbound = min(dbound, F.total_degree * G.total_degree)
    _, T = magnitude_bound(f, g)
    target = 1 << (T + 1)

    images = []
    modulus = 1
    i = 0
    workers = _threads()
    while modulus <= target:
        batch = [_prime(i + k) for k in range(workers)]
        i += workers
        if workers > 1:
            with ThreadPoolExecutor(workers) as ex:
                got = list(ex.map(lambda p: _res_image(fv, gv, p, dbound), batch))
        else:
            got = [_res_image(fv, gv, p, dbound) for p in batch]
        for p, img in zip(batch, got):
            if img is not None and modulus <= target:
                images.append((p, img))
                modulus *= p
    # Garner-style incremental CRT
    coeffs = [0] * (dbound + 1)
    mod = 1
    for p, img in images:
        inv = pow(mod % p, p - 2, p)
        for k in range(dbound + 1):
            c = coeffs[k]
            t = (img[k] - c) * inv % p
            coeffs[k] = c + mod * t
        mod *= p
    half = mod // 2
    return IntPoly1([c - mod if c > half else c for c in coeffs])


def resultants(f: IntPoly2, g: IntPoly2) -> ResultantArtifacts:
    N, T = magnitude_bound(f, g)
    return ResultantArtifacts(resultant_modular(f, g, "y"), resultant_modular(f, g, "x"), N, T)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def magnitude_bound(f: IntPoly2, g: IntPoly2) -> tuple:
    """``(N, T)``: degree bound ``m*n`` and an exact ``T >= log H(B)`` for both resultants.

    Entries of ``B`` are overestimated by ``(m+1)*2**tau_f`` and
    ``(n+1)*2**tau_g``, which gives
    ``H(B)**2 <= (m+1)**(3n) * (n+1)**(3m) * 2**(2 n tau_f + 2 m tau_g)``.
    """
    m, n = max(f.total_degree, 0), max(g.total_degree, 0)
    tf, tg = f.bitsize(), g.bitsize()
    N = m * n
    h2 = (m + 1) ** (3 * n) * (n + 1) ** (3 * m) << (2 * n * tf + 2 * m * tg)
    T = (ceil_log2(Fraction(h2)) + 1) // 2 if h2 > 1 else 0
    return N, T


def hadamard_sq(f: IntPoly2, g: IntPoly2, axis: str = "y") -> int:
    """Exact ``H(B)**2`` with ``b_ij = ||a_ij||_1`` for the Sylvester matrix."""
    prod = 1
    for row in sylvester(f, g, axis):
        prod *= sum(e.norm1() ** 2 for e in row)
    return prod


def cofactor_ub(disk: Disk, m: int, n: int, tau_f: int, tau_g: int) -> int:
    """Exponent ``ub`` bounding the cofactors of both resultants over the disk.

    ``log_bar((3M)**n* * ((m+1) 2**tau_f (3M)**m)**n * ((n+1) 2**tau_g (3M)**n)**m)``
    with ``n* = max(m, n)`` and ``M`` an upper bound for ``max(1, |z|)`` on the disk.
    """
    M = disk.magnitude_bound().to_fraction() if isinstance(disk, Disk) else Fraction(max(1, disk))
    three_m = 3 * M
    nstar = max(m, n)
    val = (three_m ** nstar
           * (Fraction((m + 1) << tau_f) * three_m**m) ** n
           * (Fraction((n + 1) << tau_g) * three_m**n) ** m)
    return log_bar(val)


# ---------------------------------------------------------------------------
# gcd and square-free part
# ---------------------------------------------------------------------------


def gcd_2(f: IntPoly2, g: IntPoly2) -> IntPoly2:
    """Primitive gcd in Z[x, y] with positive graded-lex leading coefficient."""
    if f.is_zero():
        return g.normalized()
    if g.is_zero():
        return f.normalized()
    h = dmp_gcd(f.to_dmp(), g.to_dmp(), 1, ZZ)
    return IntPoly2.from_dmp(h).normalized()


def exact_quotient_2(f: IntPoly2, g: IntPoly2) -> IntPoly2:
    """``f / g`` for an exact divisor ``g``."""
    return IntPoly2.from_dmp(dmp_exquo(f.to_dmp(), g.to_dmp(), 1, ZZ))


def squarefree_part_2(f: IntPoly2) -> IntPoly2:
    """``f / gcd(f, f_x, f_y)``, primitive and normalized."""
    if f.is_zero():
        raise ValueError("square-free part of the zero polynomial")
    if f.is_constant():
        return IntPoly2.const(1)
    d = gcd_2(f, gcd_2(f.diff("x"), f.diff("y")))
    return exact_quotient_2(f, d).normalized()
