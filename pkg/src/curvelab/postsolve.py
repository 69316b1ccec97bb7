"""Separating linear forms and sign evaluation at the real solutions of a system."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt

from .arith import Disk, Dyadic, DyadicComplex
from .bisolve import SolveResult, polydisk_variation, solve
from .elim import exact_quotient_2, gcd_2
from .poly.exact import IntPoly1, IntPoly2, gcd_1, squarefree_part_1
from .uroots import RootSet, isolate_int, refine_inner

__all__ = [
    "SeparatingForm",
    "SignEntry",
    "SignReport",
    "separating_form",
    "bad_value_estimates",
    "rejects",
    "match_roots",
    "match_common_solutions",
    "sign_at_real_solutions",
    "sign_at_solutions",
]

ZERO_COMMON = "common solution with g = h = 0"
ZERO_FACTOR = "shared-factor vanishing"
NONZERO = "certified-nonzero evaluation"


@dataclass(frozen=True)
class SeparatingForm:
    s: int
    # (s', (i, j)) for every rejected s' < s: s' lies within 1/2 of the estimate of s_ij
    rejections: tuple = ()
    # disjoint enclosures of x_i + s*y_i, one per solution
    certificate: tuple = ()

    def to_json(self) -> dict:
        return {"s": self.s}


@dataclass(frozen=True)
class SignEntry:
    index: int
    x: Disk
    y: Disk
    sign: int
    reason: str

    def to_json(self) -> dict:
        return {"x": self.x.to_json(), "y": self.y.to_json(), "sign": self.sign}


@dataclass
class SignReport:
    entries: list
    solve_result: SolveResult | None = None

    def signs(self) -> list:
        return [e.sign for e in self.entries]

    def to_json(self) -> list:
        return [e.to_json() for e in self.entries]


# ---------------------------------------------------------------------------
# complex rational helpers (pairs of Fractions)
# ---------------------------------------------------------------------------


def _fr(z: DyadicComplex) -> tuple:
    return (z.re.to_fraction(), z.im.to_fraction())


def _abs2(a) -> Fraction:
    return a[0] * a[0] + a[1] * a[1]


def _sqrt_up(q: Fraction) -> Fraction:
    # crude rational upper bound of sqrt(q)
    if q <= 0:
        return Fraction(0)
    sh = 64
    n = (q.numerator << (2 * sh)) // q.denominator + 1
    r = isqrt(n) + 1
    return Fraction(r, 1 << sh)


def _sqrt_low(q: Fraction) -> Fraction:
    if q <= 0:
        return Fraction(0)
    sh = 64
    n = (q.numerator << (2 * sh)) // q.denominator
    return Fraction(isqrt(n), 1 << sh)


def _quotient_disk(nc, nr: Fraction, dc, dr: Fraction):
    """Center and radius enclosing ``N / D`` for ``N`` in ``D(nc, nr)``, ``D`` in ``D(dc, dr)``."""
    d2 = _abs2(dc)
    dabs = _sqrt_low(d2)
    if dabs <= dr:
        return None
    # nc / dc
    cre = (nc[0] * dc[0] + nc[1] * dc[1]) / d2
    cim = (nc[1] * dc[0] - nc[0] * dc[1]) / d2
    nabs = _sqrt_up(_abs2(nc))
    rad = (nr * dabs + nabs * dr) / (dabs * (dabs - dr))
    return (cre, cim), rad


# ---------------------------------------------------------------------------
# separating form
# ---------------------------------------------------------------------------


def _sum_disk(a: Disk, b: Disk, s: int):
    c = (a.center.re.to_fraction() + s * b.center.re.to_fraction(),
         a.center.im.to_fraction() + s * b.center.im.to_fraction())
    return c, a.radius.to_fraction() + abs(s) * b.radius.to_fraction()


def _disks_disjoint(ds: list) -> bool:
    for i in range(len(ds)):
        for j in range(i + 1, len(ds)):
            (ci, ri), (cj, rj) = ds[i], ds[j]
            dd = (ci[0] - cj[0], ci[1] - cj[1])
            if _abs2(dd) <= (ri + rj) ** 2:
                return False
    return True


def _bezout(sr: SolveResult) -> int:
    if sr.f is None or sr.g is None:
        return max(len(sr.solutions), 1)
    return max(sr.f.total_degree, 0) * max(sr.g.total_degree, 0)


def bad_value_estimates(sr: SolveResult) -> dict:
    """``{(i, j): s~_ij}`` with ``|s_ij - s~_ij| < 1/2`` for every pair with distinct y-roots.

    ``s_ij = (x_i - x_j) / (y_j - y_i)`` is the only ``s`` for which
    ``x + s*y`` takes the same value at solutions ``i`` and ``j``.
    """
    return _estimates(sr)[0]


def _estimates(sr: SolveResult):
    sols = sr.solutions
    rsx, rsy = sr.rootsets_x, sr.rootsets_y
    estimates = {}
    pending = [(a, b) for a in range(len(sols)) for b in range(a + 1, len(sols))
               if sols[a].iy != sols[b].iy]
    bits = 8
    while pending:
        rest = []
        for a, b in pending:
            sa, sb = sols[a], sols[b]
            if sa.ix == sb.ix:
                estimates[(a, b)] = (Fraction(0), Fraction(0))
                continue
            xa, xb = rsx.roots[sa.ix].inner, rsx.roots[sb.ix].inner
            ya, yb = rsy.roots[sa.iy].inner, rsy.roots[sb.iy].inner
            num = (_fr(xa.center)[0] - _fr(xb.center)[0], _fr(xa.center)[1] - _fr(xb.center)[1])
            den = (_fr(yb.center)[0] - _fr(ya.center)[0], _fr(yb.center)[1] - _fr(ya.center)[1])
            q = _quotient_disk(num, xa.radius.to_fraction() + xb.radius.to_fraction(),
                               den, ya.radius.to_fraction() + yb.radius.to_fraction())
            if q is not None and q[1] < Fraction(1, 2):
                estimates[(a, b)] = q[0]
            else:
                rest.append((a, b))
        pending = rest
        if pending:
            bits *= 2
            ix = sorted({sols[t].ix for p in pending for t in p})
            iy = sorted({sols[t].iy for p in pending for t in p})
            rsx = refine_inner(rsx, bits, ix)
            rsy = refine_inner(rsy, bits, iy)
    return estimates, rsx, rsy


def rejects(estimate, s: int) -> bool:
    """``s`` lies in the open disk of radius 1/2 around the estimate."""
    er, ei = estimate
    return (s - er) ** 2 + ei * ei < Fraction(1, 4)


def separating_form(sr: SolveResult) -> SeparatingForm:
    """Smallest ``s`` in ``{0, ..., C(mn, 2)}`` such that ``x + s*y`` separates the solutions."""
    sols = sr.solutions
    estimates, rsx, rsy = _estimates(sr)
    limit = comb(_bezout(sr), 2)
    rejections = []
    chosen = None
    if len({t.ix for t in sols}) == len(sols):
        # distinct x-roots are distinct numbers, so s = 0 is decided exactly
        chosen = 0
    else:
        for s in range(limit + 1):
            hit = None
            for key, est in sorted(estimates.items()):
                if rejects(est, s):
                    hit = key
                    break
            if hit is None:
                chosen = s
                break
            rejections.append((s, hit))
    if chosen is None:
        raise RuntimeError("no separating form found in the search range")

    # certificate: disjoint enclosures of x_i + s*y_i
    bits = 8
    while True:
        ds = [_sum_disk(rsx.roots[t.ix].inner, rsy.roots[t.iy].inner, chosen) for t in sols]
        if _disks_disjoint(ds):
            break
        bits *= 2
        rsx = refine_inner(rsx, bits, sorted({t.ix for t in sols}))
        rsy = refine_inner(rsy, bits, sorted({t.iy for t in sols}))
    return SeparatingForm(chosen, tuple(rejections), tuple(ds))


# ---------------------------------------------------------------------------
# common solutions
# ---------------------------------------------------------------------------


def _sqf(p: IntPoly1) -> IntPoly1:
    return squarefree_part_1(p) if p.degree >= 1 else IntPoly1([1])


def match_roots(A: RootSet, B: RootSet) -> list:
    """For each root of ``A`` the index of the equal root of ``B``, or ``None``.

    Equality is decided exactly through ``G = gcd`` of the square-free parts:
    each root of ``G`` is refined until its inclusion disk lies inside, or
    misses, every isolating disk of ``A`` and ``B``.
    """
    out = [None] * len(A.roots)
    if not A.roots or not B.roots:
        return out
    G = gcd_1(_sqf(A.source), _sqf(B.source))
    if G.degree < 1:
        return out
    gs = isolate_int(G)

    def locate(rs: RootSet, gs: RootSet):
        loc = [None] * len(gs.roots)
        bits = 8
        while True:
            pend = []
            for k, gr in enumerate(gs.roots):
                if loc[k] is not None:
                    continue
                inside = [i for i, r in enumerate(rs.roots) if r.disk.contains_disk(gr.inner)]
                if inside:
                    loc[k] = inside[0]
                elif all(r.disk.disjoint(gr.inner) for r in rs.roots):
                    loc[k] = -1
                else:
                    pend.append(k)
            if not pend:
                return loc, gs
            bits *= 2
            gs = refine_inner(gs, bits, pend)

    la, gs = locate(A, gs)
    lb, gs = locate(B, gs)
    for k in range(len(gs.roots)):
        if la[k] >= 0 and lb[k] >= 0:
            out[la[k]] = lb[k]
    return out


def match_common_solutions(sr1: SolveResult, sr2: SolveResult) -> list:
    """For each solution of ``sr1`` the index of the same solution in ``sr2``, or ``None``."""
    mx = match_roots(sr1.rootsets_x, sr2.rootsets_x)
    my = match_roots(sr1.rootsets_y, sr2.rootsets_y)
    where = {(s.ix, s.iy): k for k, s in enumerate(sr2.solutions)}
    out = []
    for s in sr1.solutions:
        a, b = mx[s.ix], my[s.iy]
        out.append(where.get((a, b)) if a is not None and b is not None else None)
    return out


# ---------------------------------------------------------------------------
# signs
# ---------------------------------------------------------------------------


def _eval_sign(h: IntPoly2, sr: SolveResult, idx: list) -> dict:
    """Signs of ``h`` at the real solutions ``idx`` (``h`` known to be nonzero there)."""
    rsx, rsy = sr.rootsets_x, sr.rootsets_y
    out = {}
    todo = list(idx)
    bits = 4
    while todo:
        rest = []
        for k in todo:
            s = sr.solutions[k]
            dx, dy = rsx.roots[s.ix].inner, rsy.roots[s.iy].inner
            v = h.eval(DyadicComplex(dx.center.re), DyadicComplex(dy.center.re)).re.to_fraction()
            var = polydisk_variation(h, Disk(DyadicComplex(dx.center.re), dx.radius),
                                     Disk(DyadicComplex(dy.center.re), dy.radius))
            if abs(v) > var:
                out[k] = 1 if v > 0 else -1
            else:
                rest.append(k)
        todo = rest
        if todo:
            bits *= 2
            rsx = refine_inner(rsx, bits, sorted({sr.solutions[k].ix for k in todo}))
            rsy = refine_inner(rsy, bits, sorted({sr.solutions[k].iy for k in todo}))
    return out


def _signs(f: IntPoly2, g: IntPoly2, h: IntPoly2, sr: SolveResult) -> dict:
    """``{solution index: (sign, reason)}`` for the real solutions of ``sr = solve(f, g)``."""
    real = [k for k, s in enumerate(sr.solutions) if s.real]
    if not real:
        return {}
    if h.is_zero():
        return {k: (0, ZERO_FACTOR) for k in real}
    if h.is_constant():
        c = h.terms[(0, 0)]
        return {k: (1 if c > 0 else -1, NONZERO) for k in real}
    pg = gcd_2(g, h)
    if pg.is_constant():
        sr2 = solve(g, h)
        common = match_common_solutions(sr, sr2)
        zero = [k for k in real if common[k] is not None]
        rest = [k for k in real if common[k] is None]
        out = {k: (0, ZERO_COMMON) for k in zero}
        for k, sg in _eval_sign(h, sr, rest).items():
            out[k] = (sg, NONZERO)
        return out
    # h and g share p: solutions split into f = g* = 0 and f = p = 0
    p = pg
    gs = exact_quotient_2(g, p)
    hs = exact_quotient_2(h, p)
    sr_p = solve(f, p)
    on_p = match_common_solutions(sr, sr_p)
    out = {k: (0, ZERO_FACTOR) for k in real if on_p[k] is not None}
    left = [k for k in real if on_p[k] is None]
    if not left:
        return out
    sr_s = solve(f, gs)
    where = match_common_solutions(sr, sr_s)
    s1 = _signs(f, gs, hs, sr_s)
    s2 = _signs(f, gs, p, sr_s)
    for k in left:
        j = where[k]
        if j is None:
            raise RuntimeError("solution of f = g = 0 is on neither f = g* = 0 nor f = p = 0")
        a, ra = s1[j]
        b, rb = s2[j]
        sign = a * b
        out[k] = (sign, NONZERO if sign else (ra if a == 0 else rb))
    return out


def sign_at_real_solutions(f: IntPoly2, g: IntPoly2, h: IntPoly2) -> SignReport:
    """Sign of ``h`` at every real solution of ``f = g = 0``."""
    return sign_at_solutions(solve(f, g), h)


def sign_at_solutions(sr: SolveResult, h: IntPoly2) -> SignReport:
    """Like :func:`sign_at_real_solutions` for an existing ``sr = solve(f, g)``."""
    res = _signs(sr.f, sr.g, h, sr)
    entries = []
    for k, s in enumerate(sr.solutions):
        if s.real:
            sign, reason = res[k]
            entries.append(SignEntry(k, s.polydisk.dx, s.polydisk.dy, sign, reason))
    return SignReport(entries, sr)
