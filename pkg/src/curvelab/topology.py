"""Topology of a real plane algebraic curve as a straight-line graph.

The curve is made square-free and sheared so that the leading coefficient in
``y`` is constant and no two strongly critical points share an x-coordinate.
The x-critical points are the real solutions of ``F = F_y = 0``; the sign of
``F_x`` there tells singular points apart.  Fibers over the critical values,
over one separating value per gap and over two outer values are isolated
with the number of distinct roots known in advance, and the points of
neighbouring fibers are connected purely combinatorially.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .arith import Disk, Dyadic, DyadicComplex
from .bisolve import SolveResult, solve, well_isolated_roots
from .elim import exact_quotient_2, gcd_2, resultant_modular, squarefree_part_2
from .poly.approx import ApproxPoly
from .poly.exact import IntPoly1, IntPoly2, cauchy_root_bound, shear, squarefree_part_1
from .poly.multipoint import CoeffOracle, eval_coeff_views, view_variation_bound
from .postsolve import _eval_sign, bad_value_estimates, match_roots, rejects, sign_at_solutions
from .uroots import IsolatedRoot, RootSet, isolate_int, isolate_oracle, mark_real, refine_inner, well_isolate

__all__ = [
    "TopologyError",
    "ShearParams",
    "FiberPoint",
    "Fiber",
    "CriticalData",
    "CurveGraph",
    "FiberOracle",
    "preprocess",
    "strongly_critical_system",
    "admissible_shears",
    "choose_shear",
    "critical_data",
    "fiber_count",
    "intermediate_values",
    "isolate_fiber",
    "classify_local",
    "connect",
    "curve_topology",
    "refine_graph",
]


class TopologyError(RuntimeError):
    """Internal bookkeeping failed; this signals a bug upstream, never a valid answer."""


@dataclass(frozen=True)
class ShearParams:
    s: int


@dataclass
class FiberPoint:
    y: IsolatedRoot
    mu: int
    kind: str = "regular"
    case: int | None = None
    arcs_left: int | None = 1
    arcs_right: int | None = 1
    solution: int | None = None
    fx_sign: int | None = None

    @property
    def y_value(self) -> Dyadic:
        return self.y.inner.center.re


@dataclass
class Fiber:
    kind: str
    x: object
    points: list
    n_distinct: int | None = None
    rootset: RootSet | None = None
    x_value: Dyadic = field(default_factory=lambda: Dyadic(0))
    holder: object = None
    index: int | None = None

    @property
    def singular_index(self):
        idx = [i for i, p in enumerate(self.points) if p.kind == "singular"]
        if len(idx) > 1:
            raise TopologyError("more than one singular point on a fiber")
        return idx[0] if idx else None


@dataclass
class CriticalData:
    F: IntPoly2
    sr: SolveResult
    signs: dict
    R: IntPoly1
    Q: IntPoly1
    q_roots: RootSet

    def real_alphas(self) -> list:
        """Indices of the real roots of ``R``, sorted left to right."""
        rs = self.sr.rootsets_x
        idx = [i for i, r in enumerate(rs.roots) if r.real]
        return sorted(idx, key=lambda i: rs.roots[i].inner.center.re)


@dataclass
class CurveGraph:
    vertices: list
    edges: list
    singular: list
    box: tuple
    shear_s: int
    fibers: list = field(default_factory=list)
    nalpha_checks: list = field(default_factory=list)
    curve: IntPoly2 | None = None

    # graph invariants ----------------------------------------------------------

    def degrees(self) -> list:
        deg = [0] * len(self.vertices)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def components(self) -> int:
        parent = list(range(len(self.vertices)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b in self.edges:
            parent[find(a)] = find(b)
        return len({find(v) for v in range(len(self.vertices))})

    def cycle_rank(self) -> int:
        return len(self.edges) - len(self.vertices) + self.components()

    def singular_degrees(self) -> list:
        deg = self.degrees()
        return sorted(deg[v] for v in self.singular)

    def crossing_edges(self) -> list:
        """Pairs of edges that meet away from a shared endpoint (empty for a planar embedding).

        Every edge joins two consecutive fibers, so two edges can only cross
        when they span the same x-range; then they cross iff their endpoint
        order flips (or touches) on one side without a shared vertex there.
        """
        span = {}
        for k, (a, b) in enumerate(self.edges):
            if self.vertices[a][0] > self.vertices[b][0]:
                a, b = b, a
            span.setdefault((self.vertices[a][0], self.vertices[b][0]), []).append((k, a, b))
        bad = []
        for group in span.values():
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    k1, a1, b1 = group[i]
                    k2, a2, b2 = group[j]
                    if a1 == a2 or b1 == b2:
                        if a1 == a2 and b1 == b2:
                            bad.append((k1, k2))
                        continue
                    da = self.vertices[a1][1] - self.vertices[a2][1]
                    db = self.vertices[b1][1] - self.vertices[b2][1]
                    if da.sign() * db.sign() <= 0:
                        bad.append((k1, k2))
        return bad

    # serialization ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": [[x.to_json(), y.to_json()] for x, y in self.vertices],
            "edges": [list(e) for e in self.edges],
            "singular": list(self.singular),
            "box": [b.to_json() for b in self.box],
            "shear_s": self.shear_s,
        }

    def to_dot(self) -> str:
        lines = ["graph curve {"]
        for i, (x, y) in enumerate(self.vertices):
            shape = ', shape="box"' if i in self.singular else ""
            lines.append(f'  v{i} [label="{i}", pos="{float(x):.6g},{float(y):.6g}!"{shape}];')
        for a, b in self.edges:
            lines.append(f"  v{a} -- v{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# preprocessing and shear
# ---------------------------------------------------------------------------


def preprocess(f: IntPoly2) -> IntPoly2:
    """Square-free part, which has the same zero set."""
    if f.is_zero() or f.is_constant():
        raise ValueError("curve topology needs a nonconstant polynomial")
    g = squarefree_part_2(f)
    # keep a square-free input exactly as given (the normalized part may flip its sign)
    return f if g == f or g == f * -1 else g


def strongly_critical_system(f: IntPoly2):
    """``(f_x*, f_y*, gcd(f_x, f_y))``."""
    fx, fy = f.diff("x"), f.diff("y")
    d = gcd_2(fx, fy)
    return exact_quotient_2(fx, d), exact_quotient_2(fy, d), d


def _nontrivial(p: IntPoly2) -> bool:
    return not p.is_zero() and not p.is_constant()


def _lcf_constant(F: IntPoly2) -> bool:
    lc = F.leading_coeff("y")
    return F.deg_y >= 1 and lc.degree == 0


def _shear_test(f: IntPoly2):
    """Predicate ``s -> bool`` for conditions (a) and (b), plus the search limit."""
    fxs, fys, d = strongly_critical_system(f)
    if _nontrivial(d):
        # a square-free f has no affine zero in common with gcd(f_x, f_y)
        if len(solve(f, d).solutions):
            raise TopologyError("f and gcd(f_x, f_y) have a common zero")
    estimates = {}
    if _nontrivial(fxs) and _nontrivial(fys):
        estimates = bad_value_estimates(solve(fxs, fys))
    n = max(f.total_degree, 1)
    limit = n**4 + comb(n * n, 2) + n + 1

    def ok(s: int) -> bool:
        if any(rejects(e, s) for e in estimates.values()):
            return False
        return _lcf_constant(shear(f, s))

    return ok, limit


def admissible_shears(f: IntPoly2, count: int = 1) -> list:
    """The ``count`` smallest non-negative shears passing both conditions."""
    ok, limit = _shear_test(f)
    out = []
    for s in range(limit + count + 1):
        if ok(s):
            out.append(s)
            if len(out) == count:
                return out
    raise TopologyError("no admissible shear found")


def choose_shear(f: IntPoly2) -> ShearParams:
    """Smallest ``s >= 0`` such that ``x + s*y`` separates the strongly critical points
    and ``f(x + s*y, y)`` has a constant leading coefficient in ``y``."""
    return ShearParams(admissible_shears(f, 1)[0])


# ---------------------------------------------------------------------------
# critical points
# ---------------------------------------------------------------------------


def critical_data(F: IntPoly2) -> CriticalData:
    """x-critical points of ``F``, the sign of ``F_x`` at each, and the resultants ``R``, ``Q``."""
    Fx, Fy = F.diff("x"), F.diff("y")
    sr = solve(F, Fy)
    rep = sign_at_solutions(sr, Fx)
    signs = {e.index: e.sign for e in rep.entries}
    fxs, fys, _ = strongly_critical_system(F)
    if fxs.is_zero() or fys.is_zero():
        Q = IntPoly1([1])
    else:
        Q = resultant_modular(fxs, fys, "y")
    return CriticalData(F, sr, signs, sr.Ry, Q, well_isolated_roots(Q))


def fiber_count(n: int, mult_R: int, mult_Q: int, singular: bool) -> int:
    """Number of distinct complex roots of ``F(alpha, y)``."""
    return n - mult_R + (mult_Q if singular else 0)


# ---------------------------------------------------------------------------
# intermediate fibers
# ---------------------------------------------------------------------------


def _interval(root: IsolatedRoot):
    c = root.inner.center.re.to_fraction()
    r = root.inner.radius.to_fraction()
    return c - r, c + r


def intermediate_values(R: IntPoly1, crit: RootSet, crit_idx: list):
    """One real root of the square-free part of ``(R*)'`` in each gap between the
    critical values ``crit_idx`` (sorted), plus the refined critical root set.

    Returns ``(gamma_roots, gamma_rootset, crit_rootset)`` where
    ``gamma_roots[i]`` is the index of the chosen root in gap ``i``.
    """
    if len(crit_idx) < 2:
        return [], None, crit
    Rs = squarefree_part_1(R)
    D = Rs.derivative()
    Rhat = squarefree_part_1(D) if D.degree >= 1 else IntPoly1([1])
    gs = well_isolated_roots(Rhat)
    real_g = [j for j, r in enumerate(gs.roots) if r.real]
    bits = 8
    while True:
        # every real gamma interval must be disjoint from every critical interval
        bad_g, bad_a = set(), set()
        for j in real_g:
            lo, hi = _interval(gs.roots[j])
            for i in crit_idx:
                a, b = _interval(crit.roots[i])
                if not (hi < a or b < lo):
                    bad_g.add(j)
                    bad_a.add(i)
        if not bad_g:
            break
        bits *= 2
        gs = refine_inner(gs, bits, sorted(bad_g))
        crit = refine_inner(crit, bits, sorted(bad_a))
    chosen = []
    for i0, i1 in zip(crit_idx, crit_idx[1:]):
        left = _interval(crit.roots[i0])[1]
        right = _interval(crit.roots[i1])[0]
        mid = (crit.roots[i0].inner.center.re.to_fraction() + crit.roots[i1].inner.center.re.to_fraction()) / 2
        inside = [j for j in real_g if left < _interval(gs.roots[j])[0] and _interval(gs.roots[j])[1] < right]
        if not inside:
            raise TopologyError("no root of the derivative between two critical values (Rolle)")
        chosen.append(min(inside, key=lambda j: (abs(gs.roots[j].inner.center.re.to_fraction() - mid), j)))
    return chosen, gs, crit


# ---------------------------------------------------------------------------
# fibers
# ---------------------------------------------------------------------------


class _RootHolder:
    """Shared, monotonically refined root set for fiber oracles over algebraic x-values."""

    def __init__(self, rs: RootSet):
        self.rs = rs

    def inner(self, i: int) -> Disk:
        return self.rs.roots[i].inner

    def refine(self, i: int, bits: int):
        self.rs = refine_inner(self.rs, bits, [i])


class FiberOracle(CoeffOracle):
    """Coefficients of ``F(x0, y)`` for an algebraic ``x0`` known through a refinable disk."""

    def __init__(self, F: IntPoly2, holder: _RootHolder, index: int):
        self.F = F
        self.holder = holder
        self.index = index
        self.degree = F.deg_y
        d = holder.inner(index)
        A = d.center.abs_upper(32).to_fraction() + d.radius.to_fraction() + 1
        mx = max(sum(abs(c) * A**i for i, c in enumerate(v.coeffs)) for v in F.views("y"))
        self.tau = max(1, int(mx).bit_length() + 1)

    def request(self, ell: int) -> ApproxPoly:
        bits = ell + 8
        while True:
            inner = self.holder.inner(self.index)
            var = view_variation_bound(self.F, "x", Disk(DyadicComplex(inner.center.re, inner.center.im), inner.radius))
            if var <= Fraction(1, 1 << (ell + 1)):
                break
            self.holder.refine(self.index, bits)
            bits *= 2
        A = eval_coeff_views(self.F, "x", inner, ell + 1)
        extra = -(-var.numerator * (1 << A.prec) // var.denominator) if var else 0
        return ApproxPoly(A.re, A.im, A.prec, A.err + extra)


def _ordered_real(rs: RootSet) -> list:
    idx = [i for i, r in enumerate(rs.roots) if r.real]
    return sorted(idx, key=lambda i: rs.roots[i].disk.center.re)


def isolate_fiber(F: IntPoly2, x, k: int | None = None, holder: _RootHolder | None = None, index: int | None = None):
    """Well-isolated roots of ``F(x, y)``; returns ``(rootset, ordered real indices)``.

    ``x`` is an integer (exact isolation) or ``None`` with ``holder`` and
    ``index`` pointing at an algebraic x-value, in which case ``k`` distinct
    roots are expected.
    """
    if holder is None:
        p = F.subs("x", int(x))
        rs = isolate_int(p)
    else:
        oracle = FiberOracle(F, holder, index)
        rs = isolate_oracle(oracle, k if k is not None else F.deg_y)
    rs, _ = mark_real(rs)
    rs = well_isolate(rs)
    return rs, _ordered_real(rs)


def classify_local(mu: int, fx_sign: int, fymu_sign: int) -> int:
    """Case 1 (passes through), 2 (turns left) or 3 (turns right) at an x-critical, nonsingular point."""
    if fx_sign == 0:
        raise ValueError("classify_local called on a singular point")
    if mu < 2:
        raise ValueError("classify_local called on a regular point")
    if mu % 2 == 1:
        return 1
    return 2 if fx_sign * fymu_sign > 0 else 3


_ARCS = {1: (1, 1), 2: (2, 0), 3: (0, 2)}


def _match_critical_points(fiber_rs: RootSet, real_idx: list, cands: list, sr: SolveResult) -> dict:
    """Map fiber roots of multiplicity >= 2 to critical solutions via containment in y-disks."""
    rsy = sr.rootsets_y
    out = {}
    todo = [i for i in real_idx if fiber_rs.roots[i].multiplicity >= 2]
    bits = 16
    for _ in range(40):
        pend = []
        for i in todo:
            inner = fiber_rs.roots[i].inner
            hits = [k for k in cands if rsy.roots[sr.solutions[k].iy].disk.contains_disk(inner)]
            if len(hits) == 1:
                out[i] = hits[0]
            else:
                pend.append(i)
        if not pend:
            return out
        todo = pend
        bits *= 2
        fiber_rs = refine_inner(fiber_rs, bits, pend)
    raise TopologyError("critical fiber points could not be matched to critical solutions")


def _build_critical_fiber(F: IntPoly2, cd: CriticalData, holder: _RootHolder, ix: int, q_match: list, checks: list) -> Fiber:
    sr = cd.sr
    n = F.deg_y
    cands = [k for k, s in enumerate(sr.solutions) if s.ix == ix and s.real]
    singular = any(cd.signs[k] == 0 for k in cands)
    mult_R = sr.rootsets_x.roots[ix].multiplicity
    qi = q_match[ix]
    mult_Q = cd.q_roots.roots[qi].multiplicity if qi is not None else 0
    k = fiber_count(n, mult_R, mult_Q, singular)
    rs, real_idx = isolate_fiber(F, None, k, holder, ix)
    found = len(rs.roots)
    msum = sum(r.multiplicity for r in rs.roots)
    real_mass = sum(rs.roots[i].multiplicity for i in real_idx)
    checks.append({"alpha": ix, "predicted": k, "found": found, "mult_sum": msum, "n": n,
                   "nonreal_mass_even": (n - real_mass) % 2 == 0})
    if found != k or msum != n or (n - real_mass) % 2:
        raise TopologyError("fiber root count disagrees with the predicted count")
    match = _match_critical_points(rs, real_idx, cands, sr)
    points = []
    for i in real_idx:
        root = rs.roots[i]
        mu = root.multiplicity
        if mu == 1:
            points.append(FiberPoint(root, 1))
            continue
        sol = match[i]
        sg = cd.signs[sol]
        if sg == 0:
            points.append(FiberPoint(root, mu, "singular", None, None, None, sol, 0))
            continue
        H = F.diff("y", mu)
        hs = _eval_sign(H, sr, [sol])[sol]
        case = classify_local(mu, sg, hs)
        al, ar = _ARCS[case]
        points.append(FiberPoint(root, mu, "critical", case, al, ar, sol, sg))
    fib = Fiber("critical", sr.rootsets_x.roots[ix], points, k, rs)
    if sum(1 for p in points if p.kind == "singular") > 1:
        raise TopologyError("more than one singular point above one x-critical value")
    return fib


def _build_regular_fiber(F: IntPoly2, kind: str, x=None, holder=None, index=None) -> Fiber:
    rs, real_idx = isolate_fiber(F, x, F.deg_y, holder, index)
    if holder is None and any(r.multiplicity != 1 for r in rs.roots):
        raise TopologyError("outer fiber is not regular")
    pts = [FiberPoint(rs.roots[i], rs.roots[i].multiplicity) for i in real_idx]
    if any(p.mu != 1 for p in pts):
        raise TopologyError("intermediate fiber has a multiple root")
    return Fiber(kind, x if holder is None else holder.rs.roots[index], pts, len(rs.roots), rs)


# ---------------------------------------------------------------------------
# connecting adjacent fibers
# ---------------------------------------------------------------------------


def _link(crit: Fiber, inter: Fiber, side: str, vid_c: list, vid_i: list, edges: list):
    """Connect a critical fiber to the neighbouring regular fiber on ``side``."""
    arcs = [(p.arcs_right if side == "right" else p.arcs_left) for p in crit.points]
    q = len(inter.points)
    sing = crit.singular_index
    lo = 0
    below = range(len(crit.points)) if sing is None else range(sing)
    for i in below:
        for t in range(arcs[i]):
            edges.append((vid_c[i], vid_i[lo + t]))
        lo += arcs[i]
    if sing is None:
        if lo != q:
            raise TopologyError(f"arc counts do not balance ({lo} arcs, {q} points)")
        return
    hi = q
    for i in range(len(crit.points) - 1, sing, -1):
        for t in range(arcs[i]):
            edges.append((vid_c[i], vid_i[hi - 1 - t]))
        hi -= arcs[i]
    if lo > hi:
        raise TopologyError("arc counts exceed the neighbouring fiber")
    for t in range(lo, hi):
        edges.append((vid_c[sing], vid_i[t]))


def connect(fibers: list, box: tuple, s: int) -> CurveGraph:
    """Straight-line graph over an alternating sequence of regular and critical fibers."""
    vertices, singular, vids = [], [], []
    for fib in fibers:
        ids = []
        for p in fib.points:
            ids.append(len(vertices))
            if p.kind == "singular":
                singular.append(len(vertices))
            vertices.append((fib.x_value, p.y_value))
        vids.append(ids)
    edges = []
    for a in range(len(fibers) - 1):
        A, B = fibers[a], fibers[a + 1]
        if A.kind == "critical" and B.kind == "critical":
            raise TopologyError("two adjacent critical fibers")
        if A.kind == "critical":
            _link(A, B, "right", vids[a], vids[a + 1], edges)
        elif B.kind == "critical":
            _link(B, A, "left", vids[a + 1], vids[a], edges)
        else:
            if len(A.points) != len(B.points):
                raise TopologyError("adjacent regular fibers differ in size")
            edges.extend(zip(vids[a], vids[a + 1]))
    return CurveGraph(vertices, sorted(tuple(sorted(e)) for e in edges), singular, box, s, fibers)


def curve_topology(f: IntPoly2, s: int | None = None, refine: int | None = None) -> CurveGraph:
    """Isotopic straight-line graph of ``{f = 0}`` in sheared coordinates inside a box.

    ``s`` forces a shear, which must itself pass both shear conditions;
    ``refine`` refines every vertex to ``2**-refine`` afterwards.
    """
    fs = preprocess(f)
    if s is None:
        s = choose_shear(fs).s
    else:
        ok, _ = _shear_test(fs)
        if s < 0 or not ok(s):
            raise ValueError(f"shear s={s} is not admissible")
    F = shear(fs, s)
    cd = critical_data(F)
    rsx = cd.sr.rootsets_x
    crit_idx = cd.real_alphas()
    gam, gs, rsx = intermediate_values(cd.R, rsx, crit_idx)
    B = int(cauchy_root_bound(cd.R).to_fraction()) if cd.R.degree >= 1 else 1
    B = max(B, 1)

    q_match = match_roots(rsx, cd.q_roots) if len(cd.q_roots.roots) else [None] * len(rsx.roots)
    holder_a = _RootHolder(rsx)
    checks = []
    fibers = [_build_regular_fiber(F, "outer", -B)]
    fibers[0].x_value = Dyadic(-B)
    if not crit_idx:
        mid = _build_regular_fiber(F, "intermediate", 0)
        mid.x_value = Dyadic(0)
        fibers.append(mid)
    else:
        holder_g = _RootHolder(gs) if gs is not None else None
        crit_fibs = [_build_critical_fiber(F, cd, holder_a, ix, q_match, checks) for ix in crit_idx]
        for t, cf in enumerate(crit_fibs):
            cf.holder, cf.index = holder_a, crit_idx[t]
            cf.x_value = holder_a.rs.roots[crit_idx[t]].inner.center.re
            fibers.append(cf)
            if t < len(gam):
                gf = _build_regular_fiber(F, "intermediate", None, holder_g, gam[t])
                gf.holder, gf.index = holder_g, gam[t]
                gf.x_value = holder_g.rs.roots[gam[t]].inner.center.re
                fibers.append(gf)
        _check_x_order(fibers[1:], B)
    right = _build_regular_fiber(F, "outer", B)
    right.x_value = Dyadic(B)
    fibers.append(right)
    ys = [p.y_value for fib in fibers for p in fib.points]
    lo = min(ys, default=Dyadic(-1)) - Dyadic(1)
    hi = max(ys, default=Dyadic(1)) + Dyadic(1)
    g = connect(fibers, (Dyadic(-B), Dyadic(B), lo, hi), s)
    g.nalpha_checks = checks
    g.curve = F
    if refine is not None:
        g = refine_graph(g, refine)
    return g


def refine_graph(g: CurveGraph, L: int) -> CurveGraph:
    """Same graph with every vertex coordinate taken from enclosures of radius below ``2**-L``."""
    vertices = []
    for fib in g.fibers:
        if fib.holder is not None:
            fib.holder.refine(fib.index, L + 1)
            fib.x_value = fib.holder.inner(fib.index).center.re
        if fib.points:
            pos = [next(i for i, r in enumerate(fib.rootset.roots) if r is p.y) for p in fib.points]
            fib.rootset = refine_inner(fib.rootset, L + 1, sorted(set(pos)))
            for p, i in zip(fib.points, pos):
                p.y = fib.rootset.roots[i]
        vertices.extend((fib.x_value, p.y_value) for p in fib.points)
    if len(vertices) != len(g.vertices):
        raise TopologyError("vertex count changed under refinement")
    out = CurveGraph(vertices, list(g.edges), list(g.singular), g.box, g.shear_s, g.fibers, g.nalpha_checks, g.curve)
    if out.crossing_edges():
        raise TopologyError("refined embedding is not planar")
    return out


def _check_x_order(fibers: list, B: int):
    xs = [f.x_value for f in fibers]
    if any(a >= b for a, b in zip(xs, xs[1:])) or (xs and (xs[0] <= -B or xs[-1] >= B)):
        raise TopologyError("fiber x-coordinates are not strictly increasing")
