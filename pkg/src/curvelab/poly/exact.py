"""Exact integer polynomials in one and two variables."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd
from sympy.polys.sqfreetools import dup_sqf_list

from ..arith import Dyadic, DyadicComplex, ceil_log2

__all__ = [
    "IntPoly1",
    "IntPoly2",
    "mul_exact",
    "reverse",
    "shear",
    "squarefree_part_1",
    "sqf_list_1",
    "gcd_1",
    "cauchy_root_bound",
]


def _strip(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _conv(a: list, b: list) -> list:
    if not a or not b:
        return []
    if min(len(a), len(b)) > 32:
        from .approx import kronecker_mul

        return kronecker_mul(a, b)
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


class IntPoly1:
    """Dense univariate integer polynomial, ``coeffs[i]`` is the coefficient of ``x**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _strip([int(c) for c in coeffs])

    @classmethod
    def from_roots(cls, roots) -> "IntPoly1":
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, IntPoly1):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == ([other] if other else [])
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __repr__(self):
        return f"IntPoly1({self.coeffs})"

    def __str__(self):
        from .parse import format_poly

        return format_poly({(i, 0): c for i, c in enumerate(self.coeffs) if c})

    # norms ------------------------------------------------------------------

    def norm1(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    def norm2_sq(self) -> int:
        return sum(c * c for c in self.coeffs)

    def norm_inf(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    def bitsize(self) -> int:
        """Smallest ``tau >= 1`` with all coefficients of absolute value below ``2**tau``."""
        return max(1, self.norm_inf().bit_length())

    # arithmetic -------------------------------------------------------------

    def __add__(self, o):
        o = o if isinstance(o, IntPoly1) else IntPoly1([o])
        n = max(len(self.coeffs), len(o.coeffs))
        return IntPoly1([self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return IntPoly1([-c for c in self.coeffs])

    def __sub__(self, o):
        o = o if isinstance(o, IntPoly1) else IntPoly1([o])
        return self + (-o)

    def __mul__(self, o):
        if isinstance(o, int):
            return IntPoly1([c * o for c in self.coeffs])
        return IntPoly1(_conv(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        r = IntPoly1([1])
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def derivative(self, k: int = 1) -> "IntPoly1":
        c = self.coeffs
        for _ in range(k):
            c = [i * c[i] for i in range(1, len(c))]
        return IntPoly1(c)

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> "IntPoly1":
        """Primitive part with positive leading coefficient."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.coeffs[-1] < 0:
            g = -g
        return IntPoly1([c // g for c in self.coeffs])

    def divmod_exact(self, d: "IntPoly1") -> "IntPoly1":
        """Exact quotient ``self / d``; raises ``ValueError`` if not divisible."""
        if d.is_zero():
            raise ZeroDivisionError
        r = list(self.coeffs)
        dl = d.lc()
        dd = d.degree
        q = [0] * max(0, len(r) - dd)
        for k in range(len(r) - 1, dd - 1, -1):
            c = r[k]
            if c == 0:
                continue
            qk, rem = divmod(c, dl)
            if rem:
                raise ValueError("inexact polynomial division")
            q[k - dd] = qk
            for i, di in enumerate(d.coeffs):
                r[k - dd + i] -= qk * di
        if any(r):
            raise ValueError("inexact polynomial division")
        return IntPoly1(q)

    def __floordiv__(self, d):
        return self.divmod_exact(d)

    # evaluation -------------------------------------------------------------

    def eval(self, x):
        """Exact evaluation at an int, Fraction, Dyadic or DyadicComplex."""
        if isinstance(x, DyadicComplex):
            return _horner_gauss(self.coeffs, x)
        if isinstance(x, Dyadic):
            return _horner_dyadic(self.coeffs, x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    __call__ = eval

    def to_dup(self) -> list:
        return [ZZ(c) for c in reversed(self.coeffs)]

    @classmethod
    def from_dup(cls, f) -> "IntPoly1":
        return cls([int(c) for c in reversed(f)])


def _horner_dyadic(coeffs: list, x: Dyadic) -> Dyadic:
    # integer Horner on the scaled value: x = m 2^e with e < 0 handled by a common scale
    if not coeffs:
        return Dyadic(0)
    m, e = x.m, x.e
    if e >= 0:
        xv = m << e
        acc = 0
        for c in reversed(coeffs):
            acc = acc * xv + c
        return Dyadic(acc)
    k = -e
    n = len(coeffs) - 1
    acc = 0
    # sum c_i m^i 2^{k(n-i)}, then scale 2^{-kn}
    for i in range(n, -1, -1):
        acc = acc * m + (coeffs[i] << (k * (n - i)))
    return Dyadic(acc, -k * n)


def _horner_gauss(coeffs: list, z: DyadicComplex) -> DyadicComplex:
    if not coeffs:
        return DyadicComplex()
    e = min(z.re.e, z.im.e, 0)
    k = -e
    a = z.re.scaled_int(k)
    b = z.im.scaled_int(k)
    n = len(coeffs) - 1
    ar, ai = 0, 0
    for i in range(n, -1, -1):
        ar, ai = ar * a - ai * b + (coeffs[i] << (k * (n - i))), ar * b + ai * a
    return DyadicComplex(Dyadic(ar, -k * n), Dyadic(ai, -k * n))


def mul_exact(a: IntPoly1, b: IntPoly1) -> IntPoly1:
    return a * b


def reverse(F, d: int):
    """``x**d * F(1/x)`` for an IntPoly1, an ApproxPoly, or a plain coefficient list."""
    from .approx import ApproxPoly

    if isinstance(F, IntPoly1):
        if d < F.degree:
            raise ValueError("d must be at least deg F")
        c = F.coeffs + [0] * (d + 1 - len(F.coeffs))
        return IntPoly1(c[::-1])
    if isinstance(F, ApproxPoly):
        return F.reverse(d)
    c = list(F)
    while c and c[-1] == 0:
        c.pop()
    if d < len(c) - 1:
        raise ValueError("d must be at least deg F")
    c += [0] * (d + 1 - len(c))
    return c[::-1]


def gcd_1(a: IntPoly1, b: IntPoly1) -> IntPoly1:
    if a.is_zero():
        return b.primitive()
    if b.is_zero():
        return a.primitive()
    return IntPoly1.from_dup(dup_gcd(a.to_dup(), b.to_dup(), ZZ)).primitive()


def sqf_list_1(F: IntPoly1) -> list:
    """Square-free decomposition ``[(Q_i, i), ...]`` with primitive positive factors."""
    if F.degree < 1:
        return []
    _, facs = dup_sqf_list(F.to_dup(), ZZ)
    out = []
    for f, k in facs:
        p = IntPoly1.from_dup(f).primitive()
        if p.degree >= 1:
            out.append((p, k))
    return out


def squarefree_part_1(F: IntPoly1) -> IntPoly1:
    """Primitive square-free part with positive leading coefficient."""
    if F.is_zero():
        raise ValueError("square-free part of the zero polynomial")
    p = IntPoly1([1])
    for q, _ in sqf_list_1(F):
        p = p * q
    return p.primitive()


def cauchy_root_bound(F) -> Dyadic:
    """Integer ``B`` with every complex root of ``F`` strictly inside ``|z| < B``.

    ``B = 1 + max_i |F_i| / |F_d|`` rounded up.  Accepts IntPoly1 and ApproxPoly.
    """
    from .approx import ApproxPoly

    if isinstance(F, IntPoly1):
        if F.degree < 0:
            raise ValueError("zero polynomial")
        if F.degree == 0:
            return Dyadic(1)
        lc = abs(F.lc())
        mx = max(abs(c) for c in F.coeffs[:-1])
        return Dyadic(1 + -(-mx // lc))
    if isinstance(F, ApproxPoly):
        return F.cauchy_bound()
    raise TypeError(type(F).__name__)


# ---------------------------------------------------------------------------
# bivariate
# ---------------------------------------------------------------------------


class IntPoly2:
    """Sparse bivariate integer polynomial ``sum c * x**i * y**j``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else ((k[:2], k[2]) for k in terms)
            for (i, j), c in items:
                c = int(c)
                if c:
                    key = (int(i), int(j))
                    v = t.get(key, 0) + c
                    if v:
                        t[key] = v
                    else:
                        t.pop(key, None)
        self.terms = t

    @classmethod
    def const(cls, c: int) -> "IntPoly2":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "IntPoly2":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "IntPoly2":
        return cls({(0, 1): 1})

    @classmethod
    def from_univariate(cls, p: IntPoly1, var: str = "x") -> "IntPoly2":
        if var == "x":
            return cls({(i, 0): c for i, c in enumerate(p.coeffs)})
        return cls({(0, j): c for j, c in enumerate(p.coeffs)})

    # basic data -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self.terms)

    @property
    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def degree(self, var: str) -> int:
        k = 0 if var == "x" else 1
        return max((t[k] for t in self.terms), default=-1)

    @property
    def deg_x(self) -> int:
        return self.degree("x")

    @property
    def deg_y(self) -> int:
        return self.degree("y")

    def bitsize(self) -> int:
        return max(1, max((abs(c) for c in self.terms.values()), default=0).bit_length())

    def norm1(self) -> int:
        return sum(abs(c) for c in self.terms.values())

    def coeff_view(self, var: str, k: int) -> IntPoly1:
        """Coefficient of ``var**k`` as a polynomial in the other variable."""
        if var == "y":
            d = {i: c for (i, j), c in self.terms.items() if j == k}
        else:
            d = {j: c for (i, j), c in self.terms.items() if i == k}
        n = max(d, default=-1)
        return IntPoly1([d.get(t, 0) for t in range(n + 1)])

    def views(self, var: str) -> list:
        """``[f_0, ..., f_d]`` with ``f = sum f_k(other) * var**k``."""
        return [self.coeff_view(var, k) for k in range(self.degree(var) + 1)]

    def leading_coeff(self, var: str) -> IntPoly1:
        return self.coeff_view(var, self.degree(var))

    # arithmetic -------------------------------------------------------------

    def __eq__(self, o):
        if isinstance(o, IntPoly2):
            return self.terms == o.terms
        if isinstance(o, int):
            return self.terms == ({(0, 0): o} if o else {})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, o):
        o = o if isinstance(o, IntPoly2) else IntPoly2.const(o)
        t = dict(self.terms)
        for k, c in o.terms.items():
            v = t.get(k, 0) + c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return IntPoly2(t)

    __radd__ = __add__

    def __neg__(self):
        return IntPoly2({k: -c for k, c in self.terms.items()})

    def __sub__(self, o):
        o = o if isinstance(o, IntPoly2) else IntPoly2.const(o)
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, int):
            return IntPoly2({k: c * o for k, c in self.terms.items()})
        t = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in o.terms.items():
                k = (i1 + i2, j1 + j2)
                t[k] = t.get(k, 0) + c1 * c2
        return IntPoly2(t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        r = IntPoly2.const(1)
        for _ in range(k):
            r = r * self
        return r

    def diff(self, var: str, k: int = 1) -> "IntPoly2":
        t = {}
        for (i, j), c in self.terms.items():
            e = i if var == "x" else j
            if e < k:
                continue
            f = 1
            for r in range(k):
                f *= e - r
            key = (i - k, j) if var == "x" else (i, j - k)
            t[key] = c * f
        return IntPoly2(t)

    def swap(self) -> "IntPoly2":
        return IntPoly2({(j, i): c for (i, j), c in self.terms.items()})

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def leading_term(self):
        """Leading monomial under graded-lex order (total degree, then x-degree)."""
        return max(self.terms, key=lambda k: (k[0] + k[1], k[0]))

    def normalized(self) -> "IntPoly2":
        """Primitive, with positive graded-lex leading coefficient."""
        if not self.terms:
            return self
        g = self.content()
        if self.terms[self.leading_term()] < 0:
            g = -g
        return IntPoly2({k: c // g for k, c in self.terms.items()})

    # evaluation -------------------------------------------------------------

    def eval(self, x, y):
        """Exact evaluation; arguments may be int, Fraction, Dyadic or DyadicComplex."""
        if isinstance(x, (Dyadic, DyadicComplex)) or isinstance(y, (Dyadic, DyadicComplex)):
            return self._eval_dyadic(DyadicComplex.coerce(x), DyadicComplex.coerce(y))
        acc = 0
        for (i, j), c in self.terms.items():
            acc += c * x**i * y**j
        return acc

    __call__ = eval

    def _eval_dyadic(self, x: DyadicComplex, y: DyadicComplex) -> DyadicComplex:
        acc = DyadicComplex()
        for j in range(self.deg_y, -1, -1):
            cj = self.coeff_view("y", j)
            acc = acc * y + _horner_gauss(cj.coeffs, x)
        return acc

    def subs(self, var: str, value) -> IntPoly1:
        """Substitute an integer for ``var``; returns a polynomial in the other variable."""
        out = {}
        for (i, j), c in self.terms.items():
            if var == "x":
                out[j] = out.get(j, 0) + c * value**i
            else:
                out[i] = out.get(i, 0) + c * value**j
        n = max(out, default=-1)
        return IntPoly1([out.get(k, 0) for k in range(n + 1)])

    def __repr__(self):
        return f"IntPoly2({sorted(self.terms.items())})"

    def __str__(self):
        from .parse import format_poly

        return format_poly(self.terms)

    def to_json(self) -> list:
        return [[i, j, str(c)] for (i, j), c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, obj) -> "IntPoly2":
        return cls({(int(i), int(j)): int(c) for i, j, c in obj})

    # sympy dense representation: outer variable y, inner x
    def to_dmp(self) -> list:
        dy = self.deg_y
        if dy < 0:
            return [[]]
        rows = []
        for j in range(dy, -1, -1):
            rows.append(self.coeff_view("y", j).to_dup())
        return rows

    @classmethod
    def from_dmp(cls, f) -> "IntPoly2":
        t = {}
        n = len(f) - 1
        for k, row in enumerate(f):
            j = n - k
            m = len(row) - 1
            for l, c in enumerate(row):
                if c:
                    t[(m - l, j)] = int(c)
        return cls(t)


def shear(f: IntPoly2, s: int) -> IntPoly2:
    """Exact substitution ``f(x + s*y, y)``."""
    if s == 0:
        return IntPoly2(dict(f.terms))
    out = {}
    binom_cache = {}
    for (i, j), c in f.terms.items():
        # (x + s y)^i y^j = sum_k C(i,k) x^k s^(i-k) y^(i-k+j)
        row = binom_cache.get(i)
        if row is None:
            row = [1]
            for k in range(i):
                row.append(row[-1] * (i - k) // (k + 1))
            binom_cache[i] = row
        sp = 1
        for k in range(i, -1, -1):
            key = (k, i - k + j)
            out[key] = out.get(key, 0) + c * row[k] * sp
            sp *= s
    return IntPoly2(out)


def lcf_at_shear(f: IntPoly2, s: int) -> int:
    """``sum_{i+j=n} f_ij s**i``: the ``y**n`` coefficient of ``f(x + s*y, y)``."""
    n = f.total_degree
    return sum(c * s**i for (i, j), c in f.terms.items() if i + j == n)


def isqrt_ceil(n: int) -> int:
    r = isqrt(n)
    return r if r * r == n else r + 1


def log2_ceil_int(n: int) -> int:
    return ceil_log2(Fraction(n)) if n > 1 else 0
