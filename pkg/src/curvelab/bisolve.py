"""Certified isolation of all complex solutions of ``f = g = 0``.

The solutions are projected onto both axes with two resultants whose roots
are isolated in well-isolating disks.  Every pair of projected roots is a
candidate.  A candidate is discarded once ``f`` or ``g`` is certified
nonzero on a polydisk around it, and accepted once a point of its polydisk
makes both cofactor inequalities fail, i.e.

    UB(xi) * (|f(x0, y0)| + |g(x0, y0)|) < min(LB(alpha), LB(beta)).

Here ``LB`` lower-bounds the resultant on the boundary of the projected
disk and ``UB`` bounds the resultant cofactors on the polydisk.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .arith import Disk, Dyadic, DyadicComplex, Polydisk, floor_log2
from .elim import cofactor_ub, resultant_modular
from .poly.exact import IntPoly1, IntPoly2
from .poly.multipoint import ExactOracle, multipoint_eval
from .uroots import IsolatedRoot, RootSet, isolate_int, mark_real, refine, refine_inner, well_isolate

__all__ = [
    "CommonFactorError",
    "Projection",
    "Candidate",
    "Solution",
    "SolveResult",
    "project",
    "well_isolated_roots",
    "lower_bound_lb",
    "upper_bound_ub",
    "build_grid",
    "validate",
    "solve",
    "refine_solutions",
    "polydisk_variation",
]

# validation rounds stop with an error beyond this precision
MAX_RHO = 1 << 18


class CommonFactorError(ValueError):
    """The inputs share a nonconstant factor, so the solution set is not finite."""


@dataclass
class Projection:
    Ry: IntPoly1
    Rx: IntPoly1
    rootsets_x: RootSet
    rootsets_y: RootSet


@dataclass(frozen=True)
class Candidate:
    ix: int
    iy: int
    alpha: IsolatedRoot
    beta: IsolatedRoot
    rho_x: int
    rho_y: int
    bucket: str

    @property
    def rho(self) -> int:
        return self.rho_x if self.bucket == "Cx" else self.rho_y


@dataclass(frozen=True)
class Solution:
    ix: int
    iy: int
    polydisk: Polydisk
    realness: str
    witness: tuple
    # certificate: |f(witness)| <= f_abs, |g(witness)| <= g_abs,
    # 2**ub * (f_abs + g_abs) < 2**min(lb_x, lb_y)
    f_abs: Fraction = Fraction(0)
    g_abs: Fraction = Fraction(0)
    ub: int = 0
    lb_x: int = 0
    lb_y: int = 0

    @property
    def real(self) -> bool:
        return self.realness == "real"

    def to_json(self) -> dict:
        return {"x": self.polydisk.dx.to_json(), "y": self.polydisk.dy.to_json(), "real": self.real}


@dataclass
class SolveResult:
    solutions: list
    Ry: IntPoly1
    Rx: IntPoly1
    rootsets_x: RootSet
    rootsets_y: RootSet
    lb_x: dict = field(default_factory=dict)
    lb_y: dict = field(default_factory=dict)
    ub_x: dict = field(default_factory=dict)
    ub_y: dict = field(default_factory=dict)
    candidates: list = field(default_factory=list)
    discarded: list = field(default_factory=list)
    f: IntPoly2 | None = None
    g: IntPoly2 | None = None

    def __len__(self):
        return len(self.solutions)

    def real_solutions(self) -> list:
        return [s for s in self.solutions if s.real]

    def to_json(self) -> dict:
        return {
            "solutions": [s.to_json() for s in self.solutions],
            "resultant_x": str(self.Ry),
            "resultant_y": str(self.Rx).replace("x", "y"),
        }


# ---------------------------------------------------------------------------
# projection and bounds
# ---------------------------------------------------------------------------


def well_isolated_roots(R: IntPoly1) -> RootSet:
    """Well-isolated roots of ``R`` with certified realness (empty for constants)."""
    if R.degree < 1:
        return RootSet((), R, max(R.degree, 0), well_isolated=True, finite_degree=0)
    rs, _ = mark_real(isolate_int(R))
    return well_isolate(rs)


def project(f: IntPoly2, g: IntPoly2) -> Projection:
    """Both resultants and well-isolated root sets of each."""
    if f.is_zero() or g.is_zero():
        raise CommonFactorError("zero polynomial in the system")
    Ry = resultant_modular(f, g, "y")
    Rx = resultant_modular(f, g, "x")
    if Ry.is_zero() or Rx.is_zero():
        raise CommonFactorError("f and g have a common factor")
    return Projection(Ry, Rx, well_isolated_roots(Ry), well_isolated_roots(Rx))


def lower_bound_lb(R: IntPoly1, root: IsolatedRoot) -> int:
    """``floor(log |R(m - r)|) - mult - deg R`` with ``|R(m - r)|`` computed exactly."""
    z = root.center - DyadicComplex(root.radius)
    v = R.eval(z)
    a2 = v.abs2()
    if a2.is_zero():
        raise ValueError("resultant vanishes on the disk boundary; disk is not well isolated")
    return floor_log2(a2) // 2 - root.multiplicity - R.degree


def upper_bound_ub(f: IntPoly2, g: IntPoly2, root: IsolatedRoot) -> int:
    return cofactor_ub(root.disk, max(f.total_degree, 0), max(g.total_degree, 0), f.bitsize(), g.bitsize())


def build_grid(proj: Projection, lb_x: dict, ub_x: dict, lb_y: dict, ub_y: dict) -> list:
    """All pairs of projected roots with their ``rho`` values and bucket."""
    out = []
    for i, a in enumerate(proj.rootsets_x.roots):
        rx = ub_x[i] - lb_x[i]
        for j, b in enumerate(proj.rootsets_y.roots):
            ry = ub_y[j] - lb_y[j]
            out.append(Candidate(i, j, a, b, rx, ry, "Cx" if rx >= ry else "Cy"))
    return out


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def polydisk_variation(f: IntPoly2, dx: Disk, dy: Disk) -> Fraction:
    """Upper bound on ``|f(x, y) - f(cx, cy)|`` over the polydisk ``dx x dy``."""
    A = dx.center.abs_upper(32).to_fraction()
    B = dy.center.abs_upper(32).to_fraction()
    r, s = dx.radius.to_fraction(), dy.radius.to_fraction()
    if r == 0 and s == 0:
        return Fraction(0)
    pa, pb = [Fraction(1)], [Fraction(1)]
    qa, qb = [Fraction(1)], [Fraction(1)]
    tot = Fraction(0)
    for (i, j), c in f.terms.items():
        if i == 0 and j == 0:
            continue
        while len(pa) <= i:
            pa.append(pa[-1] * (A + r))
            qa.append(qa[-1] * A)
        while len(pb) <= j:
            pb.append(pb[-1] * (B + s))
            qb.append(qb[-1] * B)
        tot += abs(c) * (pa[i] * pb[j] - qa[i] * qb[j])
    return tot


def _bits_slack(f: IntPoly2, g: IntPoly2, proj: Projection) -> int:
    # bits lost between an inner-disk radius and the resulting value variation
    def mag(rs):
        return max((r.disk.magnitude_bound().to_fraction() for r in rs.roots), default=Fraction(1))

    M = max(mag(proj.rootsets_x), mag(proj.rootsets_y), Fraction(1))
    d = max(f.total_degree, g.total_degree, 1)
    t = max(f.bitsize(), g.bitsize(), 1)
    return t + 2 * d + d * (floor_log2(M) + 1) + 4


class _Validator:
    def __init__(self, f: IntPoly2, g: IntPoly2, proj: Projection, lb_x, ub_x, lb_y, ub_y):
        self.f, self.g = f, g
        self.rs = {"x": proj.rootsets_x, "y": proj.rootsets_y}
        self.lb = {"x": lb_x, "y": lb_y}
        self.ub = {"x": ub_x, "y": ub_y}
        self.slack = _bits_slack(f, g, proj)
        self.accepted = []
        self.discarded = []

    def _refine(self, axis: str, idx: list, bits: int):
        todo = [i for i in idx if not self.rs[axis].roots[i].inner.radius < Dyadic(1, -bits)]
        if todo:
            self.rs[axis] = refine_inner(self.rs[axis], bits, todo)

    def _fiber_values(self, poly: IntPoly2, axis: str, c: DyadicComplex, pts: list, L: int) -> list:
        # axis is the fixed coordinate; evaluate along the other one in blocks of deg points
        other = "y" if axis == "x" else "x"
        vals = [v.eval(c) if not v.is_zero() else DyadicComplex() for v in poly.views(other)]
        oracle = ExactOracle(vals)
        block = max(1, poly.degree(other))
        out = []
        for k in range(0, len(pts), block):
            out.extend(multipoint_eval(oracle, pts[k:k + block], L))
        return out

    def run_fiber(self, axis: str, k: int, cands: list):
        """Rounds ``rho = 1, 2, 4, ...`` over the candidates sharing root ``k`` on ``axis``."""
        other = "y" if axis == "x" else "x"
        f, g = self.f, self.g
        active = list(cands)
        rho = 1
        while active:
            if rho > MAX_RHO:
                raise RuntimeError("validation did not terminate; precision cap reached")
            bits = rho + self.slack
            self._refine(axis, [k], bits)
            self._refine(other, [c.iy if axis == "x" else c.ix for c in active], bits)
            rk = self.rs[axis].roots[k]
            c0 = rk.inner.center
            others = [self.rs[other].roots[c.iy if axis == "x" else c.ix] for c in active]
            pts = [o.inner.center for o in others]
            L = rho + 2
            fv = self._fiber_values(f, axis, c0, pts, L)
            gv = self._fiber_values(g, axis, c0, pts, L)
            e = Fraction(1, 1 << L)
            nxt = []
            for cand, o, a, b in zip(active, others, fv, gv):
                ia, ib = (k, cand.iy) if axis == "x" else (cand.ix, k)
                dx = self.rs["x"].roots[ia].inner
                dy = self.rs["y"].roots[ib].inner
                fa_hi = a.abs_upper(64).to_fraction() + e
                ga_hi = b.abs_upper(64).to_fraction() + e
                fa_lo = a.abs_lower(64).to_fraction() - e - polydisk_variation(f, dx, dy)
                ga_lo = b.abs_lower(64).to_fraction() - e - polydisk_variation(g, dx, dy)
                if fa_lo > 0 or ga_lo > 0:
                    self.discarded.append((ia, ib))
                    continue
                ub = self.ub["x"][ia] + self.ub["y"][ib]
                lbx, lby = self.lb["x"][ia], self.lb["y"][ib]
                lbmin = min(lbx, lby)
                lhs = (fa_hi + ga_hi) * (Fraction(2) ** ub)
                if lhs < Fraction(2) ** lbmin:
                    wit = (dx.center, dy.center)
                    self.accepted.append((ia, ib, wit, fa_hi, ga_hi, ub, lbx, lby))
                    continue
                nxt.append(cand)
            active = nxt
            rho *= 2


def validate(f: IntPoly2, g: IntPoly2, proj: Projection, candidates: list,
             lb_x: dict, ub_x: dict, lb_y: dict, ub_y: dict):
    """Decide every candidate; returns ``(accepted, discarded, refined projection)``.

    ``accepted`` holds ``(ix, iy, witness, f_abs, g_abs, ub, lb_x, lb_y)``.
    Candidates in ``Cx`` are processed along the vertical fiber of their
    x-root, those in ``Cy`` along the horizontal fiber of their y-root.
    """
    v = _Validator(f, g, proj, lb_x, ub_x, lb_y, ub_y)
    by_x, by_y = {}, {}
    for c in candidates:
        (by_x.setdefault(c.ix, []) if c.bucket == "Cx" else by_y.setdefault(c.iy, [])).append(c)
    for k in sorted(by_x):
        v.run_fiber("x", k, by_x[k])
    for k in sorted(by_y):
        v.run_fiber("y", k, by_y[k])
    out = replace(proj, rootsets_x=v.rs["x"], rootsets_y=v.rs["y"])
    return sorted(v.accepted, key=lambda t: (t[0], t[1])), sorted(v.discarded), out


def _make_solutions(accepted: list, rsx: RootSet, rsy: RootSet) -> list:
    sols = []
    for ia, ib, wit, fa, ga, ub, lbx, lby in accepted:
        a, b = rsx.roots[ia], rsy.roots[ib]
        real = "real" if (a.real and b.real) else "nonreal"
        sols.append(Solution(ia, ib, Polydisk(a.disk, b.disk), real, wit, fa, ga, ub, lbx, lby))
    return sols


def solve(f: IntPoly2, g: IntPoly2) -> SolveResult:
    """Isolating polydisks for all complex solutions of ``f = g = 0``."""
    proj = project(f, g)
    rsx, rsy = proj.rootsets_x, proj.rootsets_y
    lb_x = {i: lower_bound_lb(proj.Ry, r) for i, r in enumerate(rsx.roots)}
    lb_y = {j: lower_bound_lb(proj.Rx, r) for j, r in enumerate(rsy.roots)}
    ub_x = {i: upper_bound_ub(f, g, r) for i, r in enumerate(rsx.roots)}
    ub_y = {j: upper_bound_ub(f, g, r) for j, r in enumerate(rsy.roots)}
    cands = build_grid(proj, lb_x, ub_x, lb_y, ub_y)
    accepted, discarded, proj = validate(f, g, proj, cands, lb_x, ub_x, lb_y, ub_y)
    sols = _make_solutions(accepted, proj.rootsets_x, proj.rootsets_y)
    return SolveResult(sols, proj.Ry, proj.Rx, proj.rootsets_x, proj.rootsets_y,
                       lb_x, lb_y, ub_x, ub_y, cands, discarded, f, g)


def refine_solutions(sr: SolveResult, L: int) -> SolveResult:
    """Shrink every polydisk component below ``2**-L``."""
    if all(s.polydisk.dx.radius < Dyadic(1, -L) and s.polydisk.dy.radius < Dyadic(1, -L) for s in sr.solutions):
        return sr
    used_x = sorted({s.ix for s in sr.solutions})
    used_y = sorted({s.iy for s in sr.solutions})
    rsx = refine(sr.rootsets_x, L) if used_x else sr.rootsets_x
    rsy = refine(sr.rootsets_y, L) if used_y else sr.rootsets_y
    sols = [replace(s, polydisk=Polydisk(rsx.roots[s.ix].disk, rsy.roots[s.iy].disk)) for s in sr.solutions]
    return replace(sr, solutions=sols, rootsets_x=rsx, rootsets_y=rsy)
