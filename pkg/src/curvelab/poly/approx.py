"""Ball polynomials with Gaussian-integer fixed-point centers.

An :class:`ApproxPoly` stores coefficient ``k`` as ``(re[k] + i*im[k]) * 2**-prec``
together with one integer ``err`` (in units of ``2**-prec``) bounding the
1-norm distance to every polynomial the ball stands for.  All operations
return balls that contain the exact results for every member of the inputs.
When such a ball is used as a divisor with center leading coefficient exactly
``1``, its members are understood to be monic.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2

from ..arith import Dyadic, DyadicComplex, ceil_log2

__all__ = [
    "InsufficientPrecision",
    "ApproxPoly",
    "kronecker_mul",
    "mul_approx",
    "newton_inverse",
    "div_rem_approx",
    "remainder_norm_bound",
]

SCHOOLBOOK_CUTOFF = 24


class InsufficientPrecision(ArithmeticError):
    """The requested output precision cannot be reached from the given inputs."""


# ---------------------------------------------------------------------------
# integer convolution kernels
# ---------------------------------------------------------------------------


def _school(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _digit_bytes(bound: int) -> int:
    # digits must satisfy |h| < 2^(8*kb - 1)
    return (bound.bit_length() + 2 + 7) // 8


def _pack(a: list, kb: int) -> int:
    half = 1 << (8 * kb - 1)
    raw = b"".join((c + half).to_bytes(kb, "little") for c in a)
    off = int.from_bytes(half.to_bytes(kb, "little") * len(a), "little")
    return int.from_bytes(raw, "little") - off


def _unpack(h: int, n: int, kb: int) -> list:
    half = 1 << (8 * kb - 1)
    off = int.from_bytes(half.to_bytes(kb, "little") * n, "little")
    raw = (h + off).to_bytes(kb * n, "little")
    return [int.from_bytes(raw[i * kb:(i + 1) * kb], "little") - half for i in range(n)]


def kronecker_mul(a: list, b: list) -> list:
    """Exact product of integer coefficient lists by Kronecker substitution."""
    if not a or not b:
        return []
    if min(len(a), len(b)) <= SCHOOLBOOK_CUTOFF:
        return _school(a, b)
    ma = max(abs(c) for c in a)
    mb = max(abs(c) for c in b)
    if not ma or not mb:
        return [0] * (len(a) + len(b) - 1)
    kb = _digit_bytes(ma * mb * min(len(a), len(b)))
    p = gmpy2.mpz(_pack(a, kb)) * gmpy2.mpz(_pack(b, kb))
    return _unpack(int(p), len(a) + len(b) - 1, kb)


def _cconv(ar: list, ai: list, br: list, bi: list):
    """Exact product of Gaussian-integer coefficient lists (three real products)."""
    n = len(ar) + len(br) - 1
    if not ar or not br:
        return [], []
    if not any(ai) and not any(bi):
        return kronecker_mul(ar, br), [0] * n
    if min(len(ar), len(br)) <= SCHOOLBOOK_CUTOFF:
        t1 = _school(ar, br)
        t2 = _school(ai, bi)
        t3 = _school([x + y for x, y in zip(ar, ai)], [x + y for x, y in zip(br, bi)])
        return [p - q for p, q in zip(t1, t2)], [r - p - q for p, q, r in zip(t1, t2, t3)]
    ma = max(max(abs(c) for c in ar), max(abs(c) for c in ai))
    mb = max(max(abs(c) for c in br), max(abs(c) for c in bi))
    kb = _digit_bytes(4 * ma * mb * min(len(ar), len(br)) + 1)
    Ar, Ai = gmpy2.mpz(_pack(ar, kb)), gmpy2.mpz(_pack(ai, kb))
    Br, Bi = gmpy2.mpz(_pack(br, kb)), gmpy2.mpz(_pack(bi, kb))
    p1 = Ar * Br
    p2 = Ai * Bi
    p3 = (Ar + Ai) * (Br + Bi)
    return _unpack(int(p1 - p2), n, kb), _unpack(int(p3 - p1 - p2), n, kb)


def _shift_round(v: list, k: int):
    """Divide by ``2**k`` rounding to nearest; returns (list, any_rounded)."""
    if k <= 0:
        return [c << -k for c in v], False
    half = 1 << (k - 1)
    mask = (1 << k) - 1
    inexact = any(c & mask for c in v)
    return [(c + half) >> k for c in v], inexact


def _norm1_units(re: list, im: list) -> int:
    return sum(abs(a) + abs(b) for a, b in zip(re, im))


def _cdiv(a: int, k: int) -> int:
    """``ceil(a / 2**k)`` for ``a >= 0``."""
    if k <= 0:
        return a << -k
    return -((-a) >> k)


# ---------------------------------------------------------------------------
# ball polynomial
# ---------------------------------------------------------------------------


class ApproxPoly:
    __slots__ = ("re", "im", "prec", "err")

    def __init__(self, re: list, im: list | None = None, prec: int = 0, err: int = 0):
        self.re = list(re)
        self.im = list(im) if im is not None else [0] * len(self.re)
        if len(self.re) != len(self.im):
            raise ValueError("re/im length mismatch")
        self.prec = prec
        self.err = err
        if err < 0:
            raise ValueError("negative error")

    # construction -----------------------------------------------------------

    @classmethod
    def from_exact(cls, coeffs, prec: int) -> "ApproxPoly":
        """Round exact coefficients (int, Dyadic, DyadicComplex) to ``prec`` fractional bits."""
        re, im = [], []
        err = 0
        for c in coeffs:
            z = DyadicComplex.coerce(c)
            r = z.re.floor_scaled(prec + 1)
            i = z.im.floor_scaled(prec + 1)
            rr = (r + 1) >> 1
            ii = (i + 1) >> 1
            if Dyadic(rr, -prec) != z.re or Dyadic(ii, -prec) != z.im:
                err += 1
            re.append(rr)
            im.append(ii)
        return cls(re, im, prec, err)

    @classmethod
    def zero(cls, prec: int = 0) -> "ApproxPoly":
        return cls([], [], prec, 0)

    # views ------------------------------------------------------------------

    @property
    def coeffs(self) -> list:
        p = -self.prec
        return [DyadicComplex(Dyadic(a, p), Dyadic(b, p)) for a, b in zip(self.re, self.im)]

    @property
    def err_bound(self) -> Dyadic:
        return Dyadic(self.err, -self.prec)

    @property
    def degree(self) -> int:
        return len(self.re) - 1

    def __len__(self):
        return len(self.re)

    def __repr__(self):
        return f"ApproxPoly(len={len(self.re)}, prec={self.prec}, err={self.err}*2^-{self.prec})"

    def norm1_upper(self) -> Fraction:
        """Upper bound for the 1-norm of any member."""
        return Fraction(_norm1_units(self.re, self.im) + self.err, 1 << self.prec) if self.prec >= 0 else \
            Fraction((_norm1_units(self.re, self.im) + self.err) << -self.prec)

    def tau(self) -> int:
        """``tau >= 1`` with all member coefficients below ``2**tau`` in absolute value."""
        m = max((max(abs(a), abs(b)) for a, b in zip(self.re, self.im)), default=0)
        return max(1, (2 * m + self.err).bit_length() - self.prec)

    # precision changes ------------------------------------------------------

    def at_prec(self, p: int) -> "ApproxPoly":
        if p == self.prec:
            return self
        k = self.prec - p
        re, r1 = _shift_round(self.re, k)
        im, r2 = _shift_round(self.im, k)
        err = _cdiv(self.err, k)
        if r1 or r2:
            err += len(self.re)
        return ApproxPoly(re, im, p, err)

    def truncate(self, k: int) -> "ApproxPoly":
        """Keep coefficients of ``x**0 .. x**(k-1)``."""
        return ApproxPoly(self.re[:k], self.im[:k], self.prec, self.err)

    def padded(self, n: int) -> "ApproxPoly":
        z = [0] * max(0, n - len(self.re))
        return ApproxPoly(self.re + z, self.im + z, self.prec, self.err)

    def reverse(self, d: int) -> "ApproxPoly":
        re, im = list(self.re), list(self.im)
        while len(re) > d + 1:
            if re[-1] or im[-1]:
                raise ValueError("d must be at least deg F")
            re.pop()
            im.pop()
        p = self.padded(d + 1)
        return ApproxPoly(p.re[::-1], p.im[::-1], self.prec, self.err)

    # ball arithmetic --------------------------------------------------------

    def _align(self, o: "ApproxPoly"):
        p = max(self.prec, o.prec)
        a, b = self.at_prec(p), o.at_prec(p)
        n = max(len(a), len(b))
        return a.padded(n), b.padded(n), p

    def __add__(self, o: "ApproxPoly") -> "ApproxPoly":
        a, b, p = self._align(o)
        return ApproxPoly([x + y for x, y in zip(a.re, b.re)], [x + y for x, y in zip(a.im, b.im)], p, a.err + b.err)

    def __neg__(self):
        return ApproxPoly([-x for x in self.re], [-x for x in self.im], self.prec, self.err)

    def __sub__(self, o: "ApproxPoly") -> "ApproxPoly":
        return self + (-o)

    def ball_mul(self, o: "ApproxPoly", s: int) -> "ApproxPoly":
        """Product ball with centers rounded to ``s`` fractional bits."""
        a, b = self.at_prec(s), o.at_prec(s)
        if not a.re or not b.re:
            return ApproxPoly([], [], s, 0)
        cr, ci = _cconv(a.re, a.im, b.re, b.im)
        na = _norm1_units(a.re, a.im)
        nb = _norm1_units(b.re, b.im)
        e2 = na * b.err + a.err * nb + a.err * b.err
        re, r1 = _shift_round(cr, s)
        im, r2 = _shift_round(ci, s)
        err = _cdiv(e2, s)
        if r1 or r2:
            err += len(re)
        return ApproxPoly(re, im, s, err)

    def eval_ball(self, x) -> tuple:
        """Exact center value ``F~(x)`` and an error bound (Fraction) valid for all members."""
        x = DyadicComplex.coerce(x)
        e = min(x.re.e, x.im.e, 0)
        k = -e
        a = x.re.scaled_int(k)
        b = x.im.scaled_int(k)
        n = len(self.re) - 1
        if n < 0:
            return DyadicComplex(), Fraction(0)
        ar, ai = 0, 0
        for i in range(n, -1, -1):
            sh = k * (n - i)
            ar, ai = ar * a - ai * b + (self.re[i] << sh), ar * b + ai * a + (self.im[i] << sh)
        sc = -k * n - self.prec
        val = DyadicComplex(Dyadic(ar, sc), Dyadic(ai, sc))
        M = x.abs_upper(32)
        if M < 1:
            M = Dyadic(1)
        eb = Fraction(self.err) / Fraction(2) ** self.prec * M.to_fraction() ** n
        return val, eb

    def cauchy_bound(self) -> Dyadic:
        if not self.re:
            raise ValueError("zero polynomial")
        lc = DyadicComplex(Dyadic(self.re[-1]), Dyadic(self.im[-1]))
        lo = lc.abs_lower(64) - Dyadic(self.err)
        if lo.sign() <= 0:
            raise ValueError("leading coefficient ball contains zero")
        hi = max((DyadicComplex(Dyadic(a), Dyadic(b)).abs_upper(64) for a, b in zip(self.re[:-1], self.im[:-1])),
                 default=Dyadic(0)) + Dyadic(self.err)
        q = hi.to_fraction() / lo.to_fraction()
        return Dyadic(1 + -(-q.numerator // q.denominator))

    def contains(self, coeffs) -> bool:
        """True if the exact coefficient vector lies in the ball (conservative)."""
        total = Dyadic(0)
        n = max(len(self.re), len(coeffs))
        cs = self.padded(n).coeffs
        for i in range(n):
            c = DyadicComplex.coerce(coeffs[i]) if i < len(coeffs) else DyadicComplex()
            total = total + (c - cs[i]).abs_upper(64)
        return total <= self.err_bound


# ---------------------------------------------------------------------------
# multiplication, inversion, division
# ---------------------------------------------------------------------------


def _clog(n: int) -> int:
    return 0 if n <= 1 else (n - 1).bit_length()


def mul_approx(a: ApproxPoly, b: ApproxPoly, ell: int) -> ApproxPoly:
    """Ball product whose error is at most ``2**-ell``.

    Works at ``s = ell + tau + 2*ceil(log(n+1)) + 2`` fractional bits where
    ``(n, tau)`` bounds degree and coefficient size of both inputs.
    """
    n = max(a.degree, b.degree, 0)
    tau = max(a.tau(), b.tau())
    s = ell + tau + 2 * _clog(n + 1) + 2
    r = a.ball_mul(b, s)
    if r.err > (1 << (s - ell)):
        raise InsufficientPrecision(f"product error exceeds 2^-{ell}")
    return r


def _newton_center(g: ApproxPoly, N: int, w: int) -> ApproxPoly:
    # h_i := 2 h_{i-1} - g h_{i-1}^2 mod x^(2^i), centers only, at w bits
    gw = g.at_prec(w).truncate(N).padded(N)
    one = 1 << w
    hr, hi = [one], [0]
    m = 1
    while m < N:
        m = min(2 * m, N)
        sr, si = _cconv(hr, hi, hr, hi)
        sr, _ = _shift_round(sr[:m], w)
        si, _ = _shift_round(si[:m], w)
        tr, ti = _cconv(gw.re[:m], gw.im[:m], sr, si)
        tr, _ = _shift_round(tr[:m], w)
        ti, _ = _shift_round(ti[:m], w)
        hr = hr + [0] * (m - len(hr))
        hi = hi + [0] * (m - len(hi))
        tr = tr + [0] * (m - len(tr))
        ti = ti + [0] * (m - len(ti))
        hr = [2 * u - v for u, v in zip(hr, tr)]
        hi = [2 * u - v for u, v in zip(hi, ti)]
    return ApproxPoly(hr[:N], hi[:N], w, 0)


def _inverse_bound(g: ApproxPoly, h: ApproxPoly, N: int):
    """A posteriori radius: ``|| g^-1 - h ||_1 mod x^N`` over all members of ``g``.

    With ``E = 1 - g h mod x^N`` and ``q = ||E||_1 + err(g) ||h||_1 < 1`` the
    truncated power-series inverse satisfies
    ``||g^-1 - h||_1 <= ||h||_1 q / (1 - q)``.  Returns ``None`` when ``q >= 1``.
    """
    gt = g.truncate(N)
    er, ei = _cconv(gt.re, gt.im, h.re, h.im)
    sc = gt.prec + h.prec
    er = (er + [0] * N)[:N]
    ei = (ei + [0] * N)[:N]
    er[0] -= 1 << sc
    nE = Fraction(_norm1_units(er, ei), 1 << sc)
    nh = Fraction(_norm1_units(h.re, h.im), 1 << h.prec)
    q = nE + Fraction(g.err, 1 << g.prec) * nh
    if q >= 1:
        return None
    return nh * q / (1 - q)


def _newton_ball(g: ApproxPoly, N: int, w: int):
    if g.re[0] != (1 << g.prec) or g.im[0] != 0:
        raise ValueError("constant coefficient must be exactly 1")
    h = _newton_center(g, N, w)
    eta = _inverse_bound(g, h, N)
    if eta is None:
        return None
    h.err = -(-(eta.numerator << w) // eta.denominator)
    return h


def newton_inverse(g: ApproxPoly, n: int, ell: int) -> ApproxPoly:
    """Ball for ``1/g mod x**(n+1)`` with error at most ``2**-ell``.

    Runs the doubling iteration ``h_i = 2 h_{i-1} - g h_{i-1}**2 mod x**(2**i)``
    at a working precision that is doubled until the certified radius fits.
    """
    N = n + 1
    g = g.padded(N) if len(g) < N else g
    w = ell + 2 * _clog(N) + g.tau() + 8
    cap = 16 * (ell + 64 + N * (g.tau() + 2))
    while True:
        h = _newton_ball(g, N, w)
        if h is not None and h.err <= (1 << (w - ell)):
            return h
        if h is not None and g.err:
            # radius contributed by g's own error alone cannot shrink with w
            nh = Fraction(_norm1_units(h.re, h.im), 1 << w)
            qg = Fraction(g.err, 1 << g.prec) * nh
            if qg >= 1 or nh * qg / (1 - qg) > Fraction(1, 1 << ell):
                raise InsufficientPrecision("divisor error too large for the requested precision")
        if w > cap:
            raise InsufficientPrecision("newton inversion did not reach the requested precision")
        w *= 2


def _is_monic(G: ApproxPoly) -> bool:
    return bool(G.re) and G.re[-1] == (1 << G.prec) and G.im[-1] == 0


def _div_rem_ball(F: ApproxPoly, G: ApproxPoly, w: int):
    m, n = F.degree, G.degree
    if m < n:
        return ApproxPoly([], [], w, 0), F.at_prec(max(w, F.prec))
    if n == 0:
        return F, ApproxPoly([], [], w, 0)
    d = m - n
    revF = F.reverse(m).truncate(d + 1)
    h = _newton_ball(G.reverse(n), d + 1, w)
    if h is None:
        return None
    Q = revF.ball_mul(h, w).truncate(d + 1).padded(d + 1).reverse(d)
    R = (F - Q.ball_mul(G, w)).truncate(n)
    return Q, R


def div_rem_approx(F: ApproxPoly, G: ApproxPoly, gamma: int, ell: int):
    """Balls ``(Q, R)`` for division by a monic ``G`` with ``err(R) <= 2**-ell``.

    The remainder is formed as ``F - Q*G`` and its terms of degree ``>= deg G``
    are discarded.  ``gamma`` (``2**gamma`` bounds the roots of ``G``) only seeds
    the working precision, which is doubled until the target is met.
    """
    if not _is_monic(G):
        raise ValueError("divisor must be exactly monic")
    if gamma < 1:
        raise ValueError("gamma must be >= 1")
    n = G.degree
    tau = max(F.tau(), G.tau())
    w = ell + tau + 2 * _clog(F.degree + 2) + 2 * n * gamma + 8
    cap = 16 * (ell + tau + 4 * (F.degree + 1) * (gamma + 2) + 64)
    while True:
        res = _div_rem_ball(F, G, w)
        if res is not None:
            Q, R = res
            if R.err <= (1 << (R.prec - ell)):
                return Q, R
        if w > cap:
            raise InsufficientPrecision(f"remainder error exceeds 2^-{ell}")
        w *= 2


def remainder_norm_bound(nF, n: int, rho) -> tuple:
    """``(2**(2n) rho**n nF, 2**(4n) rho**(4n) nF)``: 1-norm bounds for quotient and remainder."""
    rho = Fraction(rho.to_fraction() if isinstance(rho, Dyadic) else rho)
    nF = Fraction(nF.to_fraction() if isinstance(nF, Dyadic) else nF)
    if rho < 1:
        raise ValueError("rho must be >= 1")
    return (Fraction(4) ** n * rho**n * nF, Fraction(16) ** n * rho ** (4 * n) * nF)


def log2_magnitude(x: DyadicComplex) -> int:
    """``ceil(log2 max(1, |x|))``."""
    a2 = x.abs2()
    if a2 <= 1:
        return 0
    return (ceil_log2(a2) + 1) // 2
