"""Certified isolation of the complex roots of univariate polynomials.

Exact integer input goes through a square-free decomposition; every root of
each square-free factor ``Q`` is enclosed in a Newton inclusion disk
``D(c, deg(Q) |Q(c)/Q'(c)|)`` (each such disk holds a root of ``Q``, so
``deg Q`` pairwise disjoint ones isolate all of them).  Coefficient-oracle
input is isolated by clustering numerical approximations and certifying each
cluster with a Pellet dominance test on the exactly recentered polynomial,
doubling the oracle precision until ``k`` disjoint certified disks cover all
finite roots.  Approximations come from Aberth-Ehrlich iterations in mpmath.
"""

from __future__ import annotations

import contextvars
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import isqrt

import mpmath
import numpy as np

from .arith import Disk, Dyadic, DyadicComplex, ceil_log2, floor_log2, round_to_precision
from .poly.approx import ApproxPoly, _clog
from .poly.exact import IntPoly1, sqf_list_1
from .poly.multipoint import CoeffOracle, ExactOracle

__all__ = [
    "IsolationError",
    "IsolatedRoot",
    "RootSet",
    "isolate_int",
    "isolate_oracle",
    "well_isolate",
    "refine",
    "classify_real",
    "mark_real",
    "refine_inner",
    "check_isol",
    "record_rootsets",
]

_ctx = mpmath.MPContext()
MAX_ORACLE_BITS = 1 << 16


class IsolationError(RuntimeError):
    """Root isolation could not be certified (for oracle input: ``k`` is likely wrong)."""


@dataclass(frozen=True)
class IsolatedRoot:
    """One distinct root: an isolating ``disk``, its ``multiplicity`` and a tight ``inner`` disk.

    ``inner`` is a certified enclosure of the root contained in ``disk``;
    ``factor`` is the square-free integer factor the root is a simple root of
    (``None`` for oracle input); ``real`` is set once realness is certified.
    """

    disk: Disk
    multiplicity: int
    inner: Disk
    factor: IntPoly1 | None = None
    real: bool | None = None

    @property
    def center(self) -> DyadicComplex:
        return self.disk.center

    @property
    def radius(self) -> Dyadic:
        return self.disk.radius


@dataclass(frozen=True)
class RootSet:
    roots: tuple
    source: object
    degree: int
    well_isolated: bool = False
    isol3_relaxed: bool = False
    k: int | None = None
    finite_degree: int | None = None

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, i):
        return self.roots[i]

    @property
    def is_exact(self) -> bool:
        return isinstance(self.source, IntPoly1)


# ---------------------------------------------------------------------------
# recorder used by the acceptance checks
# ---------------------------------------------------------------------------

_recorder: contextvars.ContextVar = contextvars.ContextVar("curvelab_rootset_recorder", default=None)


@contextmanager
def record_rootsets():
    """Collect every well-isolated RootSet produced inside the block."""
    box = []
    token = _recorder.set(box)
    try:
        yield box
    finally:
        _recorder.reset(token)


def _record(rs: RootSet) -> RootSet:
    box = _recorder.get()
    if box is not None:
        box.append(rs)
    return rs


# ---------------------------------------------------------------------------
# numeric helpers
# ---------------------------------------------------------------------------


def _to_mpc(z: DyadicComplex):
    return _ctx.mpc(_ctx.mpf((z.re.m, z.re.e)), _ctx.mpf((z.im.m, z.im.e)))


def _raw(x) -> tuple:
    # re-wrapping an mpf in _ctx.mpf would round it to the ambient precision
    if hasattr(x, "_mpf_"):
        return x._mpf_
    with _ctx.workprec(4096):
        return _ctx.mpf(x)._mpf_


def _round_mpf(x, bits: int) -> Dyadic:
    # exact conversion first: rounding through mpmath would use the ambient precision
    sign, m, e, _ = _raw(x)
    return round_to_precision(Dyadic(-int(m) if sign else int(m), int(e)), bits)


def _to_dyadic_complex(z, bits: int) -> DyadicComplex:
    return DyadicComplex(_round_mpf(z.real, bits), _round_mpf(z.imag, bits))


def _initial_guesses(coeffs_hi: list, d: int) -> list:
    """Starting points for Aberth: numpy companion roots, else a circle."""
    try:
        mags = [abs(c) for c in coeffs_hi]
        big = max(mags)
        sc = _ctx.mpf(1) / big
        fl = [complex(c * sc) for c in coeffs_hi]
        if fl[0] != 0 and all(np.isfinite(v.real) and np.isfinite(v.imag) for v in fl):
            r = np.roots(np.array(fl, dtype=complex))
            if len(r) == d and np.all(np.isfinite(r)):
                return [_ctx.mpc(complex(v)) for v in r]
    except (OverflowError, ValueError, ZeroDivisionError, np.linalg.LinAlgError):
        pass
    lead = abs(coeffs_hi[0])
    rad = 1 + max(abs(c) for c in coeffs_hi[1:]) / lead if d else 1
    return [_ctx.mpc(rad * _ctx.cos(2 * _ctx.pi * k / d + 0.4), rad * _ctx.sin(2 * _ctx.pi * k / d + 0.4))
            for k in range(d)]


def _aberth(coeffs_hi: list, prec: int, start: list | None, maxiter: int = 400) -> list:
    """Aberth-Ehrlich iteration on a polynomial given highest coefficient first."""
    d = len(coeffs_hi) - 1
    if d <= 0:
        return []
    if (not start or len(start) != d) and prec > 96 and d > 1:
        # converge cheaply at half precision first
        start = _aberth(coeffs_hi, max(64, prec // 2), None, maxiter)
    with _ctx.workprec(prec):
        cs = [_ctx.mpc(c) for c in coeffs_hi]
        if d == 1:
            return [-cs[1] / cs[0]]
        z = list(start) if start and len(start) == d else _initial_guesses(cs, d)
        z = [_ctx.mpc(v) for v in z]
        # separate coincident starting points
        tol = _ctx.ldexp(1, -prec + 8)
        done = [False] * d
        best, stall = _ctx.inf, 0
        for it in range(maxiter):
            maxstep = 0
            nz = list(z)
            for i in range(d):
                if done[i]:
                    continue
                p, dp = _ctx.polyval(cs, z[i], derivative=True)
                if p == 0:
                    continue
                s = 0
                for j in range(d):
                    if j != i:
                        diff = z[i] - z[j]
                        if diff == 0:
                            diff = tol
                        s += 1 / diff
                if dp == 0:
                    w = p / (tol * (1 + abs(z[i])))
                else:
                    ratio = p / dp
                    den = 1 - ratio * s
                    w = ratio / den if den != 0 else ratio
                nz[i] = z[i] - w
                step = abs(w) / (1 + abs(z[i]))
                if step < tol:
                    done[i] = True
                if step > maxstep:
                    maxstep = step
            z = nz
            if maxstep < tol:
                break
            # stagnation at the noise level of this precision
            if maxstep < best / 2:
                best, stall = maxstep, 0
            else:
                stall += 1
                if stall >= 6 and best < _ctx.ldexp(1, -prec // 4):
                    break
        return z


def _sqrt_ratio_upper(num2: Fraction, den2: Fraction, factor: int = 1) -> Dyadic:
    """Dyadic upper bound of ``factor * sqrt(num2 / den2)``."""
    q = Fraction(factor * factor) * num2 / den2
    if q == 0:
        return Dyadic(0)
    k = floor_log2(q)
    sh = 64 - k
    sh += sh & 1
    if sh >= 0:
        v = -(-(q.numerator << sh) // q.denominator)
    else:
        v = -(-q.numerator // (q.denominator << -sh))
    r = isqrt(v)
    if r * r < v:
        r += 1
    return Dyadic(r, -sh // 2)


def _inclusion_disk(Q: IntPoly1, dQ: IntPoly1, c: DyadicComplex) -> Disk | None:
    """Disk ``D(c, deg Q |Q(c)/Q'(c)|)`` that contains a root of ``Q``."""
    v = Q.eval(c)
    dv = dQ.eval(c)
    den = dv.abs2()
    if den.is_zero():
        return None
    num = v.abs2()
    return Disk(c, _sqrt_ratio_upper(num.to_fraction(), den.to_fraction(), Q.degree))


def _dist_lower_sq(a: Disk, b: Disk) -> Fraction:
    return (a.center - b.center).abs2().to_fraction()


def _center_dist_bounds(a: DyadicComplex, b: DyadicComplex):
    d2 = (a - b).abs2()
    return d2.to_fraction()


def _sqrt_lower(x: Fraction) -> Fraction:
    if x <= 0:
        return Fraction(0)
    s = 2 * 64
    v = (x.numerator << s) // x.denominator
    return Fraction(isqrt(v), 1 << 64)


def _sqrt_upper(x: Fraction) -> Fraction:
    if x <= 0:
        return Fraction(0)
    s = 2 * 64
    v = -(-(x.numerator << s) // x.denominator)
    r = isqrt(v)
    if r * r < v:
        r += 1
    return Fraction(r, 1 << 64)


def _sep_lower(disks: list, i: int) -> Fraction | None:
    """Certified lower bound on the distance from disk i's root to every other root."""
    best = None
    ri = disks[i].radius.to_fraction()
    for j, dj in enumerate(disks):
        if j == i:
            continue
        lo = _sqrt_lower(_center_dist_bounds(disks[i].center, dj.center)) - ri - dj.radius.to_fraction()
        if best is None or lo < best:
            best = lo
    return best


def _sep_upper(disks: list, i: int) -> Fraction | None:
    best = None
    ri = disks[i].radius.to_fraction()
    for j, dj in enumerate(disks):
        if j == i:
            continue
        hi = _sqrt_upper(_center_dist_bounds(disks[i].center, dj.center)) + ri + dj.radius.to_fraction()
        if best is None or hi < best:
            best = hi
    return best


def _pairwise_disjoint(disks: list) -> bool:
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            if not disks[i].disjoint(disks[j]):
                return False
    return True


# ---------------------------------------------------------------------------
# exact integer input
# ---------------------------------------------------------------------------


def _certify_factor_roots(Q: IntPoly1, approx: list, bits: int):
    dQ = Q.derivative()
    out = []
    for z in approx:
        c = _to_dyadic_complex(z, bits)
        D = _inclusion_disk(Q, dQ, c)
        if D is None:
            return None
        out.append(D)
    return out


def _outer_disk(disks: list, i: int) -> Disk:
    # every other root lies at distance >= sep from disks[i], so radius sep/2 still isolates
    D = disks[i]
    sep = _sep_lower(disks, i)
    r0 = D.radius.to_fraction()
    if sep is None:
        rad = Dyadic(1, max(0, ceil_log2(r0) + 1) if r0 else 0)
    else:
        rad = Dyadic(1, floor_log2(sep / 2))
    return Disk(D.center, rad)


def isolate_int(F: IntPoly1) -> RootSet:
    """Isolate all distinct complex roots of an integer polynomial with multiplicities.

    Every returned radius is below ``sep / (64 deg F)`` for a certified lower
    bound ``sep`` on the root separation.
    """
    if F.is_zero() or F.degree < 1:
        raise ValueError("isolate_int needs a polynomial of degree >= 1")
    d = F.degree
    factors = sqf_list_1(F)
    prec = 64 + 4 * max(F.bitsize(), 1)
    starts = [None] * len(factors)
    while True:
        disks, owners = [], []
        ok = True
        for fi, (Q, k) in enumerate(factors):
            coeffs_hi = list(reversed(Q.coeffs))
            z = _aberth(coeffs_hi, prec, starts[fi])
            starts[fi] = z
            ds = _certify_factor_roots(Q, z, prec - 8)
            if ds is None:
                ok = False
                break
            disks.extend(ds)
            owners.extend([(Q, k)] * len(ds))
        if ok and _pairwise_disjoint(disks):
            good = True
            for i, D in enumerate(disks):
                if len(disks) == 1:
                    break
                sep = _sep_lower(disks, i)
                if sep is None or sep <= 0 or D.radius.to_fraction() * 64 * d >= sep:
                    good = False
                    break
            if good:
                roots = tuple(IsolatedRoot(_outer_disk(disks, i), k, D, Q)
                              for i, (D, (Q, k)) in enumerate(zip(disks, owners)))
                return RootSet(roots, F, d, finite_degree=d)
        prec *= 2
        if prec > (1 << 20):
            raise IsolationError("exact isolation did not converge")


def _newton_refine_exact(root: IsolatedRoot, bits: int) -> IsolatedRoot:
    """New inner disk of radius below ``2**-bits`` inside the current inner disk."""
    Q = root.factor
    dQ = Q.derivative()
    old = root.inner
    if old.radius < Dyadic(1, -bits):
        return root
    prec = max(64, 2 * bits + 32 + 2 * Q.bitsize())
    for _ in range(12):
        with _ctx.workprec(prec):
            cs = [_ctx.mpf(c) for c in reversed(Q.coeffs)]
            z0 = _to_mpc(old.center)
            z = z0
            for _ in range(200):
                p, dp = _ctx.polyval(cs, z, derivative=True)
                if dp == 0:
                    break
                step = p / dp
                z = z - step
                if abs(step) < _ctx.ldexp(1, -(bits + 16)):
                    break
            c = _to_dyadic_complex(z, bits + 12)
        D = _inclusion_disk(Q, dQ, c)
        if D is not None and D.radius < Dyadic(1, -bits) and root.disk.contains_disk(D):
            return replace(root, inner=D)
        prec *= 2
    raise IsolationError("newton refinement failed to stay inside the isolating disk")


# ---------------------------------------------------------------------------
# oracle input
# ---------------------------------------------------------------------------


def _cluster(z: list, k: int) -> list:
    """Single-linkage clustering of approximations into ``k`` groups (lists of indices)."""
    n = len(z)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    edges = sorted((abs(z[i] - z[j]), i, j) for i in range(n) for j in range(i + 1, n))
    comps = n
    for _, i, j in edges:
        if comps <= k:
            break
        a, b = find(i), find(j)
        if a != b:
            parent[a] = b
            comps -= 1
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _gauss_abs_bounds(re: int, im: int):
    n = re * re + im * im
    r = isqrt(n)
    return r, (r if r * r == n else r + 1)


def pellet_test(A: ApproxPoly, C: DyadicComplex, R: Dyadic, j: int) -> bool:
    """Certify that every polynomial in the ball has exactly ``j`` roots in the closed disk ``D(C, R)``.

    Coefficients of ``A(C + R z)`` are computed exactly from the centers; the
    ball radius enters through ``err * (D+1) * max(1, |C|+R)**D``.  Strict
    dominance of coefficient ``j`` also rules out roots on the circle.
    """
    D = len(A.re) - 1
    if D < j or D < 0:
        return False
    q = max(0, -min(C.re.e, C.im.e))
    cr = C.re.scaled_int(q)
    ci = C.im.scaled_int(q)
    br = [A.re[i] << (q * (D - i)) for i in range(D + 1)]
    bi = [A.im[i] << (q * (D - i)) for i in range(D + 1)]
    # Taylor shift by c = cr + i ci
    for i in range(D):
        for t in range(D - 1, i - 1, -1):
            xr, xi = br[t + 1], bi[t + 1]
            br[t] += cr * xr - ci * xi
            bi[t] += cr * xi + ci * xr
    g = q + floor_log2(R)
    if g >= 0:
        tr = [br[t] << (g * t) for t in range(D + 1)]
        ti = [bi[t] << (g * t) for t in range(D + 1)]
        extra = 0
    else:
        tr = [br[t] << (-g * (D - t)) for t in range(D + 1)]
        ti = [bi[t] << (-g * (D - t)) for t in range(D + 1)]
        extra = -g * D
    # error of the shifted coefficients in the same units
    Mx = C.abs_upper(40) + R
    if Mx < 1:
        Mx = Dyadic(1)
    scale_exp = q * D + extra
    E = Fraction(A.err * (D + 1)) * Mx.to_fraction() ** D * Fraction(2) ** scale_exp
    lo_j, _ = _gauss_abs_bounds(tr[j], ti[j])
    rest = 0
    for t in range(D + 1):
        if t != j:
            rest += _gauss_abs_bounds(tr[t], ti[t])[1]
    return lo_j > rest + E


def _pow2_at_least(x) -> Dyadic:
    x = Fraction(x)
    if x <= 0:
        return Dyadic(1, -4096)
    return Dyadic(1, ceil_log2(x))


def _truncate_ball(A: ApproxPoly, D: int) -> ApproxPoly:
    if len(A.re) <= D + 1:
        return A
    drop = sum(abs(a) + abs(b) for a, b in zip(A.re[D + 1:], A.im[D + 1:]))
    return ApproxPoly(A.re[:D + 1], A.im[:D + 1], A.prec, A.err + drop)


def _try_certify(A: ApproxPoly, z: list, k: int, D: int, tight: bool, bits: int):
    groups = _cluster(z, k)
    if len(groups) != k:
        return None
    disks, counts = [], []
    for gi, grp in enumerate(groups):
        with _ctx.workprec(bits + 16):
            cen = sum((z[i] for i in grp), _ctx.mpc(0)) / len(grp)
            rho_in = max((abs(z[i] - cen) for i in grp), default=_ctx.mpf(0))
            others = [abs(z[i] - cen) for i in range(len(z)) if i not in grp]
            rho_out = min(others) if others else _ctx.mpf(2) ** 64 * (1 + abs(cen))
        C = _to_dyadic_complex(cen, bits)
        floor_in = _ctx.ldexp(1, -bits + 4)
        rin = max(rho_in, floor_in)
        r_tight = _pow2_at_least(_mpf_to_fraction(rin * 2 * (D + 1)))
        r_mid = _pow2_at_least(_mpf_to_fraction(_ctx.sqrt(rin * rho_out)))
        if tight:
            cand = [r_tight, r_mid]
        else:
            cand = [r_mid, r_tight]
        ok = None
        for R in cand:
            if pellet_test(A, C, R, len(grp)):
                ok = R
                break
        if ok is None:
            return None
        disks.append(Disk(C, ok))
        counts.append(len(grp))
    if sum(counts) != D or not _pairwise_disjoint(disks):
        return None
    return disks, counts


def _mpf_to_fraction(x) -> Fraction:
    sign, m, e, _ = _raw(x)
    return Fraction(-int(m) if sign else int(m)) * Fraction(2) ** int(e)


def _isolate_oracle_disks(oracle: CoeffOracle, k: int, D: int, tight_bits: int | None = None, start_bits: int = 64):
    bits = start_bits
    z = None
    while bits <= MAX_ORACLE_BITS:
        A = _truncate_ball(oracle.request(bits), D)
        wp = max([abs(a).bit_length() for a in A.re] + [abs(b).bit_length() for b in A.im] + [53]) + 8
        with _ctx.workprec(wp):
            coeffs_hi = [_ctx.mpc(_ctx.mpf((a, -A.prec)), _ctx.mpf((b, -A.prec)))
                         for a, b in zip(reversed(A.re), reversed(A.im))]
        if coeffs_hi and coeffs_hi[0] != 0:
            z = _aberth(coeffs_hi, bits + 16, z)
            res = _try_certify(A, z, k, D, tight_bits is not None, bits)
            if res is not None:
                disks, counts = res
                if tight_bits is None or all(d.radius < Dyadic(1, -tight_bits) for d in disks):
                    return disks, counts, bits
        bits *= 2
    raise IsolationError(f"could not certify {k} root clusters; the distinct-root count may be inconsistent")


def isolate_oracle(oracle: CoeffOracle, k: int, finite_degree: int | None = None) -> RootSet:
    """Isolate the ``k`` distinct roots of a polynomial known through a coefficient oracle.

    ``finite_degree`` (default: the oracle's degree) is the number of finite
    roots counted with multiplicity; leading coefficients beyond it are known
    to vanish and are dropped.
    """
    if isinstance(oracle, IntPoly1):
        oracle = ExactOracle(oracle)
    D = oracle.degree if finite_degree is None else finite_degree
    if k < 0 or (D > 0 and k < 1) or k > D:
        raise ValueError(f"inconsistent distinct-root count k={k} for {D} finite roots")
    if D <= 0:
        return RootSet((), oracle, max(D, 0), k=0, finite_degree=max(D, 0))
    disks, counts, _ = _isolate_oracle_disks(oracle, k, D)
    roots = tuple(IsolatedRoot(d, c, d, None) for d, c in zip(disks, counts))
    return RootSet(roots, oracle, oracle.degree, k=k, finite_degree=D)


def _refine_oracle_inner(rs: RootSet, bits: int) -> RootSet:
    D = rs.finite_degree
    disks, counts, _ = _isolate_oracle_disks(rs.source, rs.k, D, tight_bits=bits, start_bits=max(64, 2 * bits))
    new_roots = []
    for root in rs.roots:
        match = [i for i, d in enumerate(disks) if not d.disjoint(root.inner)]
        hits = [i for i in match if not any(not disks[i].disjoint(o.inner) for o in rs.roots if o is not root)]
        if len(hits) != 1:
            raise IsolationError("refined oracle disks could not be matched")
        i = hits[0]
        if counts[i] != root.multiplicity:
            raise IsolationError("multiplicity changed under refinement")
        new_roots.append(replace(root, inner=disks[i]))
    return replace(rs, roots=tuple(new_roots))


def refine_inner(rs: RootSet, bits: int, which=None) -> RootSet:
    """Shrink the certified inner disks below ``2**-bits`` (all roots or the indices in ``which``)."""
    idx = range(len(rs.roots)) if which is None else which
    if all(rs.roots[i].inner.radius < Dyadic(1, -bits) for i in idx):
        return rs
    if rs.is_exact:
        roots = list(rs.roots)
        for i in idx:
            roots[i] = _newton_refine_exact(roots[i], bits)
        return replace(rs, roots=tuple(_snap(r) for r in roots))
    out = _refine_oracle_inner(rs, bits)
    return replace(out, roots=tuple(_snap(r) for r in out.roots))


# ---------------------------------------------------------------------------
# well-isolation, refinement, realness
# ---------------------------------------------------------------------------


def _round_grid(x: Dyadic, b: int) -> Dyadic:
    """Nearest multiple of ``2**-b`` (ties upward)."""
    k = x.e + b
    if k >= 0:
        return x
    return Dyadic((x.m + (1 << (-k - 1))) >> -k, -b)


def _requantize(c: DyadicComplex, r: Dyadic) -> DyadicComplex:
    # center with 1 + ceil(log 1/r) bits after the binary point
    b = 1 - floor_log2(r)
    return DyadicComplex(_round_grid(c.re, b), _round_grid(c.im, b))


def _target_radius(inner: list, i: int) -> Dyadic:
    """Power of two in ``(x/16, x/8]`` with ``x = min(M_lower, sep_lower)``."""
    c = inner[i].center
    r0 = inner[i].radius.to_fraction()
    m_low = max(Fraction(1), _sqrt_lower(c.abs2().to_fraction()) - r0)
    x = m_low
    sep = _sep_lower(inner, i)
    if sep is not None:
        x = min(x, sep)
    if x <= 0:
        return Dyadic(0)
    return Dyadic(1, floor_log2(x) - 3)


def well_isolate(rs: RootSet) -> RootSet:
    """Disks satisfying Isol 1-3: power-of-two radii in ``[sep/32, sep/4]``, requantized centers."""
    n = len(rs.roots)
    if n == 0:
        return _record(replace(rs, well_isolated=True, isol3_relaxed=False))
    cur = rs
    for _ in range(64):
        inner = [r.inner for r in cur.roots]
        need = []
        radii = []
        for i in range(n):
            r = _target_radius(inner, i)
            radii.append(r)
            r0 = inner[i].radius.to_fraction()
            sep = _sep_lower(inner, i)
            if r.is_zero() or r0 * 16 > r.to_fraction() or (sep is not None and r0 * 64 > sep):
                need.append(i)
        if not need:
            break
        bits = 8
        for i in need:
            if not radii[i].is_zero():
                bits = max(bits, 8 - floor_log2(radii[i]))
            elif not inner[i].radius.is_zero():
                bits = max(bits, 4 - floor_log2(inner[i].radius))
        cur = refine_inner(cur, bits, need)
    else:
        raise IsolationError("well-isolation did not converge")
    roots = []
    for i, root in enumerate(cur.roots):
        r = radii[i]
        m = _requantize(root.inner.center, r)
        roots.append(replace(root, disk=Disk(m, r)))
    out = replace(cur, roots=tuple(roots), well_isolated=True, isol3_relaxed=False)
    return _record(out)


def refine(rs: RootSet, L: int) -> RootSet:
    """Shrink all isolating disks below ``2**-L`` keeping Isol 1 and Isol 2."""
    if not rs.well_isolated:
        rs = well_isolate(rs)
    if all(r.disk.radius < Dyadic(1, -L) for r in rs.roots):
        return rs
    target = Dyadic(1, -L - 1)
    cur = refine_inner(rs, L + 6)
    roots = []
    for root in cur.roots:
        if root.disk.radius < Dyadic(1, -L):
            roots.append(root)
            continue
        m = _requantize(root.inner.center, target)
        roots.append(replace(root, disk=Disk(m, target)))
    out = replace(cur, roots=tuple(roots), well_isolated=True, isol3_relaxed=True)
    return _record(out)


def classify_real(rs: RootSet) -> list:
    """``'real'`` or ``'nonreal'`` per root, for real-coefficient sources."""
    return _classify(rs)[1]


def _classify(rs: RootSet):
    flags = [None] * len(rs.roots)
    cur = rs
    bits = 8
    for _ in range(40):
        inner = [r.inner for r in cur.roots]
        pending = []
        for i, D in enumerate(inner):
            if flags[i] is not None:
                continue
            if not D.meets_real_axis():
                flags[i] = "nonreal"
                continue
            cj = D.conj()
            if all(cj.disjoint(inner[j]) for j in range(len(inner)) if j != i):
                flags[i] = "real"
                continue
            pending.append(i)
        if not pending:
            return cur, flags
        cur = refine_inner(cur, bits, pending)
        bits *= 2
    raise IsolationError("realness classification did not converge")


def _snap(root: IsolatedRoot) -> IsolatedRoot:
    # a real root stays inside the disk of the same radius around Re(center)
    c = root.inner.center
    if root.real and not c.im.is_zero():
        return replace(root, inner=Disk(DyadicComplex(c.re, Dyadic(0)), root.inner.radius))
    return root


def mark_real(rs: RootSet):
    """``(rs', flags)``: realness flags stored on the roots and real inner disks centered on the axis."""
    cur, flags = _classify(rs)
    roots = tuple(_snap(replace(r, real=(f == "real"))) for r, f in zip(cur.roots, flags))
    return replace(cur, roots=roots), flags


def check_isol(rs: RootSet) -> list:
    """Violations of Isol 1-3 (empty list when all hold), certified via the inner disks."""
    bad = []
    inner = [r.inner for r in rs.roots]
    disks = [r.disk for r in rs.roots]
    msum = 0
    for i, root in enumerate(rs.roots):
        D, I = disks[i], inner[i]
        msum += root.multiplicity
        r = D.radius
        if r.is_zero() or abs(r.m) != 1:
            bad.append((i, "radius is not a power of two"))
            continue
        half = Disk(D.center, r.shift(-1))
        if not half.contains_disk(I):
            bad.append((i, "Isol 1"))
        b = 1 - floor_log2(r)
        if any(x.e < -b for x in (D.center.re, D.center.im) if not x.is_zero()):
            bad.append((i, "center precision"))
        for j in range(len(disks)):
            if j != i:
                margin = 2 * max(r, disks[j].radius)
                if not D.separated_by(disks[j], margin):
                    bad.append((i, f"Isol 2 with {j}"))
        if not rs.isol3_relaxed:
            c = I.center
            r0 = I.radius.to_fraction()
            cabs2 = c.abs2().to_fraction()
            m_low = max(Fraction(1), _sqrt_lower(cabs2) - r0)
            m_up = max(Fraction(1), _sqrt_upper(cabs2) + r0)
            s_low = _sep_lower(inner, i)
            s_up = _sep_upper(inner, i)
            lo_ref = m_low if s_low is None else min(m_low, s_low)
            hi_ref = m_up if s_up is None else min(m_up, s_up)
            rf = r.to_fraction()
            if not (rf * 4 <= lo_ref and rf * 32 >= hi_ref):
                bad.append((i, "Isol 3"))
    fd = rs.finite_degree if rs.finite_degree is not None else rs.degree
    if msum != fd:
        bad.append((-1, "multiplicities do not sum to the finite degree"))
    return bad
