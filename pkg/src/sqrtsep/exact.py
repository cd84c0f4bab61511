"""Exact integer, rational and dyadic-interval arithmetic.

Every real quantity in the package (square roots, sums of square roots,
distances to the nearest integer, lattice norms) is carried as a
:class:`DyadicInterval`: a pair of dyadic rationals ``lo * 2**exp`` and
``hi * 2**exp`` sharing one exponent.  Operations round outward, so the
result of an operation always contains every pointwise result.

Rationals are plain :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .errors import DomainError, PrecisionError

Number = Union[int, Fraction]


def isqrt(n: int) -> int:
    """Return ``floor(sqrt(n))`` for a nonnegative integer ``n``."""
    if n < 0:
        raise DomainError(f"isqrt of negative number {n}")
    return math.isqrt(n)


def iroot(n: int, k: int) -> int:
    """Return ``floor(n ** (1/k))`` for ``n >= 0`` and ``k >= 1``."""
    if n < 0:
        raise DomainError(f"iroot of negative number {n}")
    if k < 1:
        raise DomainError(f"iroot degree must be positive, got {k}")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    # Newton from an overestimate; strictly decreasing until it hits the floor.
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def ceil_log2(m: int) -> int:
    """Smallest ``e >= 0`` with ``2**e >= m`` (``m >= 1``)."""
    return (m - 1).bit_length()


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _floor_scaled(r: Fraction, prec: int) -> int:
    """``floor(r * 2**prec)``; ``prec`` may be negative."""
    if prec >= 0:
        return (r.numerator << prec) // r.denominator
    return r.numerator // (r.denominator << -prec)


def _ceil_scaled(r: Fraction, prec: int) -> int:
    if prec >= 0:
        return _ceil_div(r.numerator << prec, r.denominator)
    return _ceil_div(r.numerator, r.denominator << -prec)


def _dyadic_exponent(r: Fraction) -> int | None:
    """Exponent e with ``r = m * 2**e`` exactly, or None if r is not dyadic."""
    den = r.denominator
    if den & (den - 1):
        return None
    return -(den.bit_length() - 1)


def root_bounds(r: Fraction, k: int, prec: int) -> tuple[int, int]:
    """Mantissas ``(lo, hi)`` at exponent ``-prec`` with lo <= r**(1/k) <= hi.

    ``lo == hi`` exactly when the root is representable at that exponent.
    """
    if r < 0:
        raise DomainError(f"root of negative number {r}")
    scaled_num = r.numerator << (prec * k)
    lo_arg = scaled_num // r.denominator
    lo = iroot(lo_arg, k)
    exact = lo ** k * r.denominator == scaled_num
    return lo, (lo if exact else lo + 1)


@dataclass(frozen=True, slots=True, eq=False)
class DyadicInterval:
    """Closed interval ``[lo_m * 2**exp, hi_m * 2**exp]``."""

    lo_m: int
    hi_m: int
    exp: int = 0

    def __post_init__(self):
        if self.lo_m > self.hi_m:
            raise DomainError(f"empty interval: lo mantissa {self.lo_m} > hi mantissa {self.hi_m}")

    # -- construction ---------------------------------------------------

    @classmethod
    def point(cls, value: Number, prec: int | None = None) -> "DyadicInterval":
        """Enclose a rational value, exactly when it is dyadic."""
        if isinstance(value, int):
            return cls(value, value, 0)
        value = Fraction(value)
        e = _dyadic_exponent(value)
        if e is not None:
            m = value.numerator
            return cls(m, m, e)
        if prec is None:
            raise DomainError(f"{value} is not dyadic; a rounding precision is required")
        return cls(_floor_scaled(value, prec), _ceil_scaled(value, prec), -prec)

    @classmethod
    def from_bounds(cls, lo: Number, hi: Number, prec: int) -> "DyadicInterval":
        """Outward-rounded enclosure of the rational interval ``[lo, hi]``."""
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise DomainError(f"empty interval [{lo}, {hi}]")
        return cls(_floor_scaled(lo, prec), _ceil_scaled(hi, prec), -prec)

    # -- endpoints --------------------------------------------------------

    @staticmethod
    def _value(m: int, e: int) -> Fraction:
        if e >= 0:
            return Fraction(m << e)
        return Fraction(m, 1 << -e)

    @property
    def lo(self) -> Fraction:
        return self._value(self.lo_m, self.exp)

    @property
    def hi(self) -> Fraction:
        return self._value(self.hi_m, self.exp)

    @property
    def width(self) -> Fraction:
        return self._value(self.hi_m - self.lo_m, self.exp)

    @property
    def mid(self) -> Fraction:
        return self._value(self.lo_m + self.hi_m, self.exp - 1)

    def is_exact(self) -> bool:
        return self.lo_m == self.hi_m

    def normalized(self) -> "DyadicInterval":
        """Same interval with the smallest mantissas (unique normal form)."""
        lo, hi, e = self.lo_m, self.hi_m, self.exp
        bits = lo | hi
        if bits == 0:
            return DyadicInterval(0, 0, 0)
        tz = (bits & -bits).bit_length() - 1
        return DyadicInterval(lo >> tz, hi >> tz, e + tz)

    # -- alignment / rounding --------------------------------------------

    def at_exp(self, e: int) -> "DyadicInterval":
        """Re-express at exponent ``e``, rounding outward if ``e`` is coarser."""
        if e <= self.exp:
            s = self.exp - e
            return DyadicInterval(self.lo_m << s, self.hi_m << s, e)
        s = e - self.exp
        return DyadicInterval(self.lo_m >> s, -((-self.hi_m) >> s), e)

    def round(self, prec: int) -> "DyadicInterval":
        """Outward rounding to at most ``prec`` fractional bits."""
        if self.exp >= -prec:
            return self
        return self.at_exp(-prec)

    def _aligned(self, other: "DyadicInterval"):
        e = min(self.exp, other.exp)
        a = self.lo_m << (self.exp - e), self.hi_m << (self.exp - e)
        b = other.lo_m << (other.exp - e), other.hi_m << (other.exp - e)
        return a, b, e

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def coerce(value) -> "DyadicInterval":
        if isinstance(value, DyadicInterval):
            return value
        return DyadicInterval.point(value)

    def __neg__(self) -> "DyadicInterval":
        return DyadicInterval(-self.hi_m, -self.lo_m, self.exp)

    def __add__(self, other) -> "DyadicInterval":
        other = self.coerce(other)
        (a0, a1), (b0, b1), e = self._aligned(other)
        return DyadicInterval(a0 + b0, a1 + b1, e)

    __radd__ = __add__

    def __sub__(self, other) -> "DyadicInterval":
        return self + (-self.coerce(other))

    def __rsub__(self, other) -> "DyadicInterval":
        return self.coerce(other) - self

    def __mul__(self, other) -> "DyadicInterval":
        if isinstance(other, int):
            if other >= 0:
                return DyadicInterval(self.lo_m * other, self.hi_m * other, self.exp)
            return DyadicInterval(self.hi_m * other, self.lo_m * other, self.exp)
        other = self.coerce(other)
        products = (self.lo_m * other.lo_m, self.lo_m * other.hi_m,
                    self.hi_m * other.lo_m, self.hi_m * other.hi_m)
        return DyadicInterval(min(products), max(products), self.exp + other.exp)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "DyadicInterval":
        if not isinstance(k, int) or k < 0:
            raise DomainError(f"only nonnegative integer powers supported, got {k!r}")
        if k == 0:
            return DyadicInterval(1, 1, 0)
        lo, hi = self.lo_m, self.hi_m
        if k % 2 == 1 or lo >= 0:
            return DyadicInterval(lo ** k, hi ** k, self.exp * k)
        if hi <= 0:
            return DyadicInterval(hi ** k, lo ** k, self.exp * k)
        return DyadicInterval(0, max(-lo, hi) ** k, self.exp * k)

    def __abs__(self) -> "DyadicInterval":
        if self.lo_m >= 0:
            return self
        if self.hi_m <= 0:
            return -self
        return DyadicInterval(0, max(-self.lo_m, self.hi_m), self.exp)

    def reciprocal(self, prec: int) -> "DyadicInterval":
        """Enclosure of ``1/self`` rounded outward to ``prec`` fractional bits."""
        if self.lo_m <= 0 <= self.hi_m:
            raise PrecisionError("reciprocal of an interval containing zero")
        return DyadicInterval.from_bounds(1 / self.hi, 1 / self.lo, prec)

    def div(self, other, prec: int) -> "DyadicInterval":
        """Enclosure of ``self / other`` rounded outward to ``prec`` fractional bits."""
        other = self.coerce(other)
        if other.lo_m <= 0 <= other.hi_m:
            raise PrecisionError("division by an interval containing zero")
        a, b = self.lo, self.hi
        c, d = other.lo, other.hi
        quotients = (a / c, a / d, b / c, b / d)
        return DyadicInterval.from_bounds(min(quotients), max(quotients), prec)

    def sqrt(self, prec: int) -> "DyadicInterval":
        """Enclosure of the square root of a nonnegative interval."""
        return self.root(2, prec)

    def root(self, k: int, prec: int) -> "DyadicInterval":
        """Enclosure of ``self ** (1/k)`` for a nonnegative interval."""
        if self.lo_m < 0:
            raise DomainError("root of an interval with negative part")
        lo, _ = root_bounds(self.lo, k, prec)
        _, hi = root_bounds(self.hi, k, prec)
        return DyadicInterval(lo, hi, -prec)

    def pow_fraction(self, power: Fraction, prec: int) -> "DyadicInterval":
        """Enclosure of ``self ** power`` for nonnegative ``self`` and rational ``power >= 0``."""
        power = Fraction(power)
        if power < 0:
            raise DomainError("negative rational powers are not supported")
        return (self ** power.numerator).root(power.denominator, prec)

    # -- predicates --------------------------------------------------------

    def contains(self, value) -> bool:
        if isinstance(value, DyadicInterval):
            return self.lo <= value.lo and value.hi <= self.hi
        value = Fraction(value)
        return self.lo <= value <= self.hi

    def __contains__(self, value) -> bool:
        return self.contains(value)

    def intersects(self, other: "DyadicInterval") -> bool:
        (a0, a1), (b0, b1), _ = self._aligned(other)
        return a0 <= b1 and b0 <= a1

    def excludes_zero(self) -> bool:
        return self.lo_m > 0 or self.hi_m < 0

    def sign(self) -> int | None:
        """Common sign of all members, or None when the interval straddles zero."""
        if self.lo_m > 0:
            return 1
        if self.hi_m < 0:
            return -1
        if self.lo_m == 0 == self.hi_m:
            return 0
        return None

    def contains_integer(self) -> bool:
        if self.exp >= 0:
            return True
        s = 1 << -self.exp
        return _ceil_div(self.lo_m, s) <= self.hi_m // s

    def __eq__(self, other) -> bool:
        if not isinstance(other, DyadicInterval):
            return NotImplemented
        (a0, a1), (b0, b1), _ = self._aligned(other)
        return a0 == b0 and a1 == b1

    def __hash__(self):
        n = self.normalized()
        return hash((n.lo_m, n.hi_m, n.exp))

    # -- formatting ----------------------------------------------------

    def exact_str(self) -> str:
        """Lossless text form ``lo_m``p``exp``/``hi_m``p``exp`` after normalization."""
        n = self.normalized()
        return f"[{n.lo_m}p{n.exp}, {n.hi_m}p{n.exp}]"

    def decimal_bounds(self, digits: int = 20) -> tuple[str, str]:
        """Outward-rounded scientific-notation strings for the two endpoints."""
        return format_decimal(self.lo, digits, "down"), format_decimal(self.hi, digits, "up")

    def __repr__(self) -> str:
        lo, hi = self.decimal_bounds(12)
        return f"DyadicInterval([{lo}, {hi}])"


def format_decimal(value: Fraction, digits: int, direction: str) -> str:
    """Scientific notation with ``digits`` significant digits, rounded down or up."""
    if value == 0:
        return "0"
    neg = value < 0
    mag = -value if neg else value
    e10 = len(str(mag.numerator)) - len(str(mag.denominator))
    # find e10 with 10**(digits-1) <= mag * 10**(digits-1-e10) < 10**digits
    while True:
        shift = digits - 1 - e10
        scaled = mag * (Fraction(10) ** shift)
        if scaled < 10 ** (digits - 1):
            e10 -= 1
        elif scaled >= 10 ** digits:
            e10 += 1
        else:
            break
    up = (direction == "up") != neg
    m = math.ceil(scaled) if up else math.floor(scaled)
    if m >= 10 ** digits:
        m //= 10
        e10 += 1
    s = str(m)
    body = s[0] + ("." + s[1:].rstrip("0") if s[1:].rstrip("0") else "")
    return f"{'-' if neg else ''}{body}e{e10}"


@lru_cache(maxsize=4096)
def sqrt_enclosure(a: int, p: int) -> DyadicInterval:
    """Enclosure of ``sqrt(a)`` of width at most ``2**-p``.

    Computed as ``isqrt(a * 4**p)``; collapses to a point when exact.
    """
    if a < 1:
        raise DomainError(f"radicand must be positive, got {a}")
    if p < 1:
        raise DomainError(f"precision must be positive, got {p}")
    scaled = a << (2 * p)
    r = math.isqrt(scaled)
    if r * r == scaled:
        return DyadicInterval(r, r, -p).normalized()
    return DyadicInterval(r, r + 1, -p)


def working_precision(x: Sequence[int], a: Sequence[int], p: int) -> int:
    """Per-term precision used by :func:`eval_sum` to meet a ``2**-p`` width."""
    n = max(len(x), 1)
    big = max((abs(xi) * (1 + ai) for xi, ai in zip(x, a)), default=0)
    return p + ceil_log2(n) + ceil_log2(1 + big)


def eval_sum(inst, p: int) -> DyadicInterval:
    """Enclosure of ``sum x_i sqrt(a_i)`` with width at most ``2**-p``.

    ``inst`` is anything with integer sequences ``x`` and ``a``.
    """
    x, a = inst.x, inst.a
    w = working_precision(x, a, p)
    lo = hi = 0
    for xi, ai in zip(x, a):
        if xi == 0:
            continue
        s = sqrt_enclosure(ai, w).at_exp(-w)
        if xi > 0:
            lo += xi * s.lo_m
            hi += xi * s.hi_m
        else:
            lo += xi * s.hi_m
            hi += xi * s.lo_m
    return DyadicInterval(lo, hi, -w)


def dist_to_int(v: DyadicInterval) -> DyadicInterval:
    """Enclosure of the distance from the enclosed real to the nearest integer."""
    if v.width >= Fraction(1, 2):
        raise PrecisionError(f"interval too wide to locate nearest integer (width {float(v.width)})")
    if v.exp >= 0:
        return DyadicInterval(0, 0, 0)
    s = 1 << -v.exp
    half = s >> 1

    def d(t):
        r = t % s
        return min(r, s - r)

    lo_m, hi_m = v.lo_m, v.hi_m
    d_lo, d_hi = d(lo_m), d(hi_m)
    lower = 0 if _ceil_div(lo_m, s) <= hi_m // s else min(d_lo, d_hi)
    first_half = lo_m + (half - lo_m) % s
    upper = half if first_half <= hi_m else max(d_lo, d_hi)
    return DyadicInterval(lower, upper, v.exp)
