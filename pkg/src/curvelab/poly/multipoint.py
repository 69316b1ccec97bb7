"""Coefficient oracles, subproduct trees and certified multipoint evaluation."""

from __future__ import annotations

from fractions import Fraction

from ..arith import Disk, Dyadic, DyadicComplex, round_to_precision
from .approx import ApproxPoly, InsufficientPrecision, _clog, _div_rem_ball, log2_magnitude
from .exact import IntPoly1, IntPoly2

__all__ = [
    "CoeffOracle",
    "ExactOracle",
    "FunctionOracle",
    "SubproductTree",
    "build_subproduct_tree",
    "multipoint_eval",
    "eval_coeff_views",
    "view_variation_bound",
]

# below this many points, direct Horner evaluation is used
HORNER_CUTOFF = 8


class CoeffOracle:
    """Source of ever better coefficient approximations of one polynomial.

    ``request(ell)`` returns an :class:`ApproxPoly` with error at most
    ``2**-ell``; ``degree`` is the exact degree and every coefficient is
    below ``2**tau`` in absolute value.
    """

    degree: int = -1
    tau: int = 1

    def request(self, ell: int) -> ApproxPoly:
        raise NotImplementedError


class ExactOracle(CoeffOracle):
    """Oracle for exactly known coefficients (ints, Dyadics or DyadicComplex)."""

    def __init__(self, coeffs):
        if isinstance(coeffs, IntPoly1):
            coeffs = coeffs.coeffs
        self.coeffs = [DyadicComplex.coerce(c) for c in coeffs]
        while self.coeffs and self.coeffs[-1] == DyadicComplex():
            self.coeffs.pop()
        self.degree = len(self.coeffs) - 1
        mx = max((c.abs_upper(16) for c in self.coeffs), default=Dyadic(0))
        self.tau = max(1, (mx.floor_scaled(0) + 1).bit_length())
        self._cache = {}

    def request(self, ell: int) -> ApproxPoly:
        p = ell + _clog(len(self.coeffs) + 1) + 1
        hit = self._cache.get(p)
        if hit is None:
            hit = ApproxPoly.from_exact(self.coeffs, p)
            self._cache[p] = hit
        return hit


class FunctionOracle(CoeffOracle):
    """Wrap a callable ``fn(ell) -> ApproxPoly``."""

    def __init__(self, fn, degree: int, tau: int):
        self.fn = fn
        self.degree = degree
        self.tau = max(1, tau)

    def request(self, ell: int) -> ApproxPoly:
        r = self.fn(ell)
        if r.err > (1 << max(0, r.prec - ell)) or r.prec < ell and r.err:
            raise InsufficientPrecision("oracle answer too coarse")
        return r


class SubproductTree:
    """Levels ``g[i][j]`` of partial products of ``(x - x_j)``; ``g[0]`` are the leaves."""

    def __init__(self, points: list, levels: list, n_real: int, prec: int):
        self.points = points
        self.levels = levels
        self.n_real = n_real
        self.prec = prec

    @property
    def root(self) -> ApproxPoly:
        return self.levels[-1][0]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


def _pad_points(points: list) -> list:
    m = len(points)
    size = 1
    while size < m:
        size *= 2
    return points + [DyadicComplex()] * (size - m)


def build_subproduct_tree(points: list, ell: int) -> SubproductTree:
    """Product tree over the points, padded with the point ``0`` to a power of two."""
    pts = [DyadicComplex.coerce(p) for p in points]
    padded = _pad_points(pts)
    leaves = [ApproxPoly.from_exact([-p, 1], ell) for p in padded]
    levels = [leaves]
    while len(levels[-1]) > 1:
        prev = levels[-1]
        levels.append([prev[2 * j].ball_mul(prev[2 * j + 1], ell) for j in range(len(prev) // 2)])
    return SubproductTree(padded, levels, len(pts), ell)


def _round_out(v: DyadicComplex, L: int) -> DyadicComplex:
    return DyadicComplex(round_to_precision(v.re, L, "nearest"), round_to_precision(v.im, L, "nearest"))


def _horner_eval(F: CoeffOracle, points: list, L: int) -> list:
    gam = max((log2_magnitude(p) for p in points), default=0)
    p = L + 2 + max(F.degree, 0) * (gam + 1)
    target = Fraction(1, 1 << (L + 1))
    while True:
        Fa = F.request(p)
        out = []
        ok = True
        for x in points:
            val, eb = Fa.eval_ball(x)
            if eb > target:
                ok = False
                break
            out.append(_round_out(val, L))
        if ok:
            return out
        p += 16


def _remainder_tree(Fa: ApproxPoly, tree: SubproductTree, w: int):
    """Leaf remainders ``F mod (x - x_j)`` as constant balls, or ``None`` on failure."""
    level = [Fa]
    for i in range(tree.depth, -1, -1):
        nodes = tree.levels[i]
        nxt = []
        for j, g in enumerate(nodes):
            parent = level[j // 2] if i < tree.depth else level[0]
            res = _div_rem_ball(parent, g, w)
            if res is None:
                return None
            nxt.append(res[1])
        level = nxt
    return level


def multipoint_eval(F: CoeffOracle, points: list, L: int) -> list:
    """Values ``y_j`` with ``|y_j - F(x_j)| <= 2**-L`` for every point.

    Uses the remainder tree ``r_{i,j} = F mod g_{i,j}`` over the subproduct
    tree; the working precision is doubled until every leaf ball is tight
    enough.  Few points are handled by direct Horner evaluation.
    """
    if isinstance(F, IntPoly1):
        F = ExactOracle(F)
    pts = [DyadicComplex.coerce(p) for p in points]
    if not pts:
        return []
    if F.degree < 0:
        return [DyadicComplex() for _ in pts]
    if len(pts) <= HORNER_CUTOFF or F.degree <= 1:
        return _horner_eval(F, pts, L)
    gam = max(1, max(log2_magnitude(p) for p in pts))
    n = F.degree
    w = L + F.tau + 4 * _clog(n + 2) + 2 * gam + 16
    cap = 16 * (L + F.tau + 4 * (n + 1) * (gam + 2) + 64)
    while True:
        tree = build_subproduct_tree(pts, w)
        leaves = _remainder_tree(F.request(w), tree, w)
        if leaves is not None:
            lim = 1 << (w - L - 1)
            vals = leaves[:len(pts)]
            if all(r.err <= lim for r in vals):
                out = []
                for r in vals:
                    c = r.coeffs[0] if len(r) else DyadicComplex()
                    out.append(_round_out(c, L))
                return out
        if w > cap:
            raise InsufficientPrecision("multipoint evaluation did not converge")
        w *= 2


def _center(value) -> DyadicComplex:
    if isinstance(value, Disk):
        return value.center
    return DyadicComplex.coerce(value)


def eval_coeff_views(f: IntPoly2, axis: str, value, ell: int) -> ApproxPoly:
    """``f(c, y)`` (axis ``x``) or ``f(x, c)`` (axis ``y``) at the center ``c`` of ``value``.

    Coefficients are computed exactly and rounded so the 1-norm error is at
    most ``2**-ell``.
    """
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    c = _center(value)
    other = "y" if axis == "x" else "x"
    vals = [view.eval(c) if not view.is_zero() else DyadicComplex() for view in f.views(other)]
    return ApproxPoly.from_exact(vals, ell + _clog(len(vals) + 1) + 1)


def view_variation_bound(f: IntPoly2, axis: str, disk: Disk) -> Fraction:
    """Upper bound on ``||f(z, .) - f(c, .)||_1`` over ``z`` in the disk (axis ``x``)."""
    A = disk.center.abs_upper(32).to_fraction()
    r = disk.radius.to_fraction()
    k = 0 if axis == "x" else 1
    tot = Fraction(0)
    for key, c in f.terms.items():
        i = key[k]
        if i:
            tot += abs(c) * ((A + r) ** i - A**i)
    return tot
