"""Exact dyadic scalars, complex dyadics, intervals, disks and polydisks.

A dyadic number is ``m * 2**e`` with an integer mantissa ``m`` and a machine
integer exponent ``e``.  Exact operations (``+``, ``-``, ``*``) never round;
rounding only happens in :func:`round_to_precision` and the explicit
upper/lower bound helpers.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt

__all__ = [
    "Dyadic",
    "DyadicComplex",
    "Interval",
    "Disk",
    "Polydisk",
    "round_to_precision",
    "round_rel",
    "disk_arith",
    "log_bar",
    "ceil_log2",
    "floor_log2",
]

_TEXT_RE = re.compile(r"^\s*(-?\d+)\s*\*\s*2\s*\^\s*(-?\d+)\s*$")


class Dyadic:
    """Value ``m * 2**e`` kept in canonical form (``m`` odd, or zero with ``e == 0``)."""

    __slots__ = ("m", "e")

    def __init__(self, m: int = 0, e: int = 0):
        m = int(m)
        if m == 0:
            e = 0
        else:
            tz = (m & -m).bit_length() - 1
            if tz:
                m >>= tz
                e += tz
        self.m = m
        self.e = e

    # construction -----------------------------------------------------------

    @classmethod
    def coerce(cls, x) -> "Dyadic":
        if isinstance(x, Dyadic):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        if isinstance(x, Fraction):
            return cls.from_fraction(x)
        if isinstance(x, float):
            n, d = x.as_integer_ratio()
            return cls.from_fraction(Fraction(n, d))
        raise TypeError(f"cannot convert {type(x).__name__} to Dyadic")

    @classmethod
    def from_fraction(cls, q: Fraction) -> "Dyadic":
        d = q.denominator
        if d & (d - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return cls(q.numerator, -(d.bit_length() - 1))

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Parse the text form ``m*2^e`` (a bare integer is accepted too)."""
        t = text.strip()
        mt = _TEXT_RE.match(t)
        if mt:
            return cls(int(mt.group(1)), int(mt.group(2)))
        if re.fullmatch(r"-?\d+", t):
            return cls(int(t), 0)
        raise ValueError(f"malformed dyadic {text!r}")

    @classmethod
    def from_json(cls, obj) -> "Dyadic":
        if isinstance(obj, dict):
            return cls(int(obj["m"]), int(obj["e"]))
        if isinstance(obj, str):
            return cls.parse(obj)
        if isinstance(obj, int):
            return cls(obj)
        raise ValueError(f"malformed dyadic JSON {obj!r}")

    def to_json(self) -> dict:
        return {"m": str(self.m), "e": self.e}

    def __str__(self) -> str:
        return f"{self.m}*2^{self.e}"

    def __repr__(self) -> str:
        return f"Dyadic({self.m}, {self.e})"

    # conversions ------------------------------------------------------------

    def to_fraction(self) -> Fraction:
        if self.e >= 0:
            return Fraction(self.m << self.e)
        return Fraction(self.m, 1 << -self.e)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def scaled_int(self, prec: int) -> int:
        """Exact integer ``self * 2**prec``; raises if not integral."""
        k = self.e + prec
        if k >= 0:
            return self.m << k
        if self.m & ((1 << -k) - 1):
            raise ValueError("value not representable at this precision")
        return self.m >> -k

    def floor_scaled(self, prec: int) -> int:
        """``floor(self * 2**prec)``."""
        k = self.e + prec
        return self.m << k if k >= 0 else self.m >> -k

    def ceil_scaled(self, prec: int) -> int:
        k = self.e + prec
        return self.m << k if k >= 0 else -((-self.m) >> -k)

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Dyadic):
            if isinstance(other, int):
                other = Dyadic(other)
            else:
                return NotImplemented
        if self.m == 0:
            return other
        if other.m == 0:
            return self
        if self.e <= other.e:
            return Dyadic(self.m + (other.m << (other.e - self.e)), self.e)
        return Dyadic((self.m << (self.e - other.e)) + other.m, other.e)

    __radd__ = __add__

    def __neg__(self):
        return Dyadic(-self.m, self.e)

    def __sub__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        elif not isinstance(other, Dyadic):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Dyadic(self.m * other, self.e)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return Dyadic(self.m * other.m, self.e + other.e)

    __rmul__ = __mul__

    def __abs__(self):
        return self if self.m >= 0 else Dyadic(-self.m, self.e)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not dyadic in general")
        return Dyadic(self.m**k, self.e * k)

    def shift(self, k: int) -> "Dyadic":
        """Multiply by ``2**k`` exactly."""
        return Dyadic(self.m, self.e + k) if self.m else self

    def sign(self) -> int:
        return (self.m > 0) - (self.m < 0)

    def is_zero(self) -> bool:
        return self.m == 0

    # comparisons ------------------------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, int):
            other = Dyadic(other)
        elif isinstance(other, Fraction):
            a = self.to_fraction()
            return (a > other) - (a < other)
        elif not isinstance(other, Dyadic):
            raise TypeError
        return (self - other).sign()

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.m == other.m and self.e == other.e
        if isinstance(other, (int, Fraction)):
            return self._cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.m, self.e))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return self.m != 0


ZERO = Dyadic(0)
ONE = Dyadic(1)


def floor_log2(x) -> int:
    """``floor(log2 |x|)`` for a nonzero dyadic or positive rational."""
    if isinstance(x, Dyadic):
        if not x.m:
            raise ValueError("log of zero")
        return abs(x.m).bit_length() - 1 + x.e
    x = Fraction(x)
    if x <= 0:
        x = -x
    if x == 0:
        raise ValueError("log of zero")
    n, d = x.numerator, x.denominator
    k = n.bit_length() - d.bit_length()
    # 2^k <= n/d < 2^(k+1) after adjustment
    if k >= 0:
        if n < (d << k):
            k -= 1
    elif (n << -k) < d:
        k -= 1
    return k


def ceil_log2(x) -> int:
    """``ceil(log2 |x|)`` for a nonzero dyadic or positive rational."""
    if isinstance(x, Dyadic):
        k = floor_log2(x)
        return k if abs(x.m) == 1 else k + 1
    x = abs(Fraction(x))
    k = floor_log2(x)
    return k if x == Fraction(2) ** k else k + 1


def round_to_precision(x: Dyadic, bits: int, mode: str = "nearest") -> Dyadic:
    """Round ``x`` onto the grid ``2**-(bits+1)``.

    The result differs from ``x`` by at most ``2**-(bits+1)`` (half that for
    ``nearest``), so the error never exceeds ``2**-bits``.
    """
    if bits < 1:
        raise ValueError("bits must be >= 1")
    if mode not in ("up", "down", "nearest"):
        raise ValueError(f"unknown rounding mode {mode!r}")
    g = -(bits + 1)
    if x.e >= g:
        return x
    k = g - x.e
    if mode == "down":
        q = x.m >> k
    elif mode == "up":
        q = -((-x.m) >> k)
    else:
        q = (x.m + (1 << (k - 1))) >> k
    return Dyadic(q, g)


def round_rel(x: Dyadic, mbits: int, mode: str) -> Dyadic:
    """Round ``x`` to ``mbits`` significant bits, direction ``up`` or ``down``."""
    if x.m == 0:
        return x
    extra = abs(x.m).bit_length() - mbits
    if extra <= 0:
        return x
    if mode == "up":
        q = -((-x.m) >> extra)
    elif mode == "down":
        q = x.m >> extra
    else:
        raise ValueError(mode)
    return Dyadic(q, x.e + extra)


def _sqrt_bound(v: Dyadic, mbits: int, upper: bool) -> Dyadic:
    # sqrt of a nonnegative dyadic, rounded to ~mbits significant bits
    if v.m == 0:
        return ZERO
    m, e = v.m, v.e
    if e & 1:
        m <<= 1
        e -= 1
    s = max(0, mbits - m.bit_length() // 2 + 2)
    mm = m << (2 * s)
    r = isqrt(mm)
    if upper and r * r != mm:
        r += 1
    return Dyadic(r, e // 2 - s)


class DyadicComplex:
    """Complex number with dyadic real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=ZERO, im=ZERO):
        self.re = Dyadic.coerce(re)
        self.im = Dyadic.coerce(im)

    @classmethod
    def coerce(cls, z) -> "DyadicComplex":
        if isinstance(z, DyadicComplex):
            return z
        if isinstance(z, complex):
            return cls(Dyadic.coerce(z.real), Dyadic.coerce(z.imag))
        return cls(Dyadic.coerce(z), ZERO)

    def __add__(self, o):
        o = DyadicComplex.coerce(o)
        return DyadicComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = DyadicComplex.coerce(o)
        return DyadicComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return DyadicComplex.coerce(o) - self

    def __neg__(self):
        return DyadicComplex(-self.re, -self.im)

    def __mul__(self, o):
        o = DyadicComplex.coerce(o)
        return DyadicComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "DyadicComplex":
        return DyadicComplex(self.re, -self.im)

    def abs2(self) -> Dyadic:
        return self.re * self.re + self.im * self.im

    def abs_upper(self, mbits: int = 64) -> Dyadic:
        return _sqrt_bound(self.abs2(), mbits, True)

    def abs_lower(self, mbits: int = 64) -> Dyadic:
        return _sqrt_bound(self.abs2(), mbits, False)

    def magnitude_bound(self) -> Dyadic:
        """Upper bound for ``M(z) = max(1, |z|)``."""
        a = self.abs_upper()
        return a if a > ONE else ONE

    def is_real(self) -> bool:
        return self.im.m == 0

    def __eq__(self, o):
        if not isinstance(o, DyadicComplex):
            try:
                o = DyadicComplex.coerce(o)
            except TypeError:
                return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"DyadicComplex({self.re}, {self.im})"

    def to_json(self) -> dict:
        return {"re": self.re.to_json(), "im": self.im.to_json()}

    @classmethod
    def from_json(cls, obj) -> "DyadicComplex":
        if isinstance(obj, dict):
            return cls(Dyadic.from_json(obj["re"]), Dyadic.from_json(obj.get("im", {"m": "0", "e": 0})))
        if isinstance(obj, (list, tuple)):
            return cls(Dyadic.from_json(obj[0]), Dyadic.from_json(obj[1]))
        return cls(Dyadic.from_json(obj), ZERO)


class Interval:
    """Closed real interval ``[lo, hi]`` with dyadic endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Dyadic.coerce(lo)
        hi = lo if hi is None else Dyadic.coerce(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    def __add__(self, o):
        o = o if isinstance(o, Interval) else Interval(o)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    def __sub__(self, o):
        o = o if isinstance(o, Interval) else Interval(o)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __mul__(self, o):
        o = o if isinstance(o, Interval) else Interval(o)
        ps = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        return Interval(min(ps), max(ps))

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo.sign() <= 0 <= self.hi.sign()

    def overlaps(self, o: "Interval") -> bool:
        return not (self.hi < o.lo or o.hi < self.lo)

    def width(self) -> Dyadic:
        return self.hi - self.lo

    def midpoint(self) -> Dyadic:
        return (self.lo + self.hi).shift(-1)

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"


class Disk:
    """Closed complex disk with dyadic center and radius."""

    __slots__ = ("center", "radius")

    def __init__(self, center, radius=ZERO):
        self.center = DyadicComplex.coerce(center)
        self.radius = Dyadic.coerce(radius)
        if self.radius.sign() < 0:
            raise ValueError("negative radius")

    def contains_point(self, z) -> bool:
        """Membership of a point; also accepts a rational or a ``(re, im)`` pair of rationals."""
        if isinstance(z, (Fraction, tuple)):
            re, im = z if isinstance(z, tuple) else (z, 0)
            dr = Fraction(re) - self.center.re.to_fraction()
            di = Fraction(im) - self.center.im.to_fraction()
            return dr * dr + di * di <= self.radius.to_fraction() ** 2
        z = DyadicComplex.coerce(z)
        return (z - self.center).abs2() <= self.radius * self.radius

    def contains_disk(self, other: "Disk") -> bool:
        # |c' - c| + r' <= r
        slack = self.radius - other.radius
        if slack.sign() < 0:
            return False
        return (other.center - self.center).abs2() <= slack * slack

    def disjoint(self, other: "Disk") -> bool:
        s = self.radius + other.radius
        return (self.center - other.center).abs2() > s * s

    def separated_by(self, other: "Disk", gap) -> bool:
        """True when ``|c - c'| - r - r' >= gap``."""
        s = self.radius + other.radius + Dyadic.coerce(gap)
        return (self.center - other.center).abs2() >= s * s

    def meets_real_axis(self) -> bool:
        return abs(self.center.im) <= self.radius

    def conj(self) -> "Disk":
        return Disk(self.center.conj(), self.radius)

    def real_interval(self) -> Interval:
        """Projection onto the real axis."""
        return Interval(self.center.re - self.radius, self.center.re + self.radius)

    def magnitude_bound(self) -> Dyadic:
        """Upper bound for ``max(1, |z|)`` over the disk."""
        a = self.center.abs_upper() + self.radius
        return a if a > ONE else ONE

    def __eq__(self, o):
        return isinstance(o, Disk) and self.center == o.center and self.radius == o.radius

    def __hash__(self):
        return hash((self.center, self.radius))

    def __repr__(self):
        return f"Disk({self.center!r}, {self.radius})"

    def to_json(self) -> dict:
        return {"center": self.center.to_json(), "radius": self.radius.to_json()}

    @classmethod
    def from_json(cls, obj) -> "Disk":
        return cls(DyadicComplex.from_json(obj["center"]), Dyadic.from_json(obj["radius"]))


class Polydisk:
    __slots__ = ("dx", "dy")

    def __init__(self, dx: Disk, dy: Disk):
        self.dx = dx
        self.dy = dy

    def conj(self) -> "Polydisk":
        return Polydisk(self.dx.conj(), self.dy.conj())

    def disjoint(self, other: "Polydisk") -> bool:
        return self.dx.disjoint(other.dx) or self.dy.disjoint(other.dy)

    def __repr__(self):
        return f"Polydisk({self.dx!r}, {self.dy!r})"

    def to_json(self) -> dict:
        return {"x": self.dx.to_json(), "y": self.dy.to_json()}


def disk_arith(a: Disk, b: Disk, op: str, prec: int | None = None) -> Disk:
    """Ball arithmetic on disks.

    ``add`` adds centers and radii.  ``mul`` uses the center product with
    radius ``|m_a| r_b + |m_b| r_a + r_a r_b``.  With ``prec`` the center is
    rounded to ``prec`` fractional bits and the rounding error is added to the
    radius.
    """
    if op == "add":
        c = a.center + b.center
        r = a.radius + b.radius
    elif op == "mul":
        c = a.center * b.center
        r = a.center.abs_upper() * b.radius + b.center.abs_upper() * a.radius + a.radius * b.radius
    else:
        raise ValueError(f"unknown disk operation {op!r}")
    if prec is not None:
        cr = round_to_precision(c.re, prec, "nearest")
        ci = round_to_precision(c.im, prec, "nearest")
        if cr != c.re or ci != c.im:
            r = r + Dyadic(1, -prec)
        c = DyadicComplex(cr, ci)
    return Disk(c, round_rel(r, 64, "up"))


def log_bar(z) -> int:
    """``ceil(max(1, log2 max(1, |z|)))``: 1 when ``|z| <= 2``, else ``ceil(log2 |z|)``."""
    if isinstance(z, DyadicComplex):
        a2 = z.abs2()
        if a2 <= 4:
            return 1
        c = ceil_log2(a2)
        return (c + 1) // 2
    if isinstance(z, Dyadic):
        z = z.to_fraction()
    z = abs(Fraction(z))
    if z <= 2:
        return 1
    return ceil_log2(z)
