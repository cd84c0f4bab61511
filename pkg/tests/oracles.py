"""Independent reference computations for the test suite.

Nothing here touches the package's interval type or normalizer.  Roots come
from ``math.isqrt`` on scaled integers, squarefree parts from plain trial
division, and everything else is integer or ``Fraction`` arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def root_floor(a: int, p: int) -> int:
    """floor(sqrt(a) * 2^p)."""
    return math.isqrt(a << (2 * p))


def root_ceil(a: int, p: int) -> int:
    r = root_floor(a, p)
    return r if r * r == a << (2 * p) else r + 1


def sum_bounds(x, a, p: int) -> tuple[int, int]:
    """Integer bounds lo <= E * 2^p <= hi for E = sum x_i sqrt(a_i)."""
    lo = hi = 0
    for xi, ai in zip(x, a):
        f, c = root_floor(ai, p), root_ceil(ai, p)
        if xi >= 0:
            lo += xi * f
            hi += xi * c
        else:
            lo += xi * c
            hi += xi * f
    return lo, hi


@lru_cache(maxsize=None)
def squarefree(v: int) -> tuple[int, int]:
    """(s, y) with v = s * y^2 and s squarefree, by trial division."""
    s, y, d = 1, 1, 2
    while d * d <= v:
        e = 0
        while v % d == 0:
            v //= d
            e += 1
        y *= d ** (e // 2)
        if e % 2:
            s *= d
        d += 1
    return s * v, y


def is_zero(x, a) -> bool:
    """E == 0 iff the coefficients cancel inside every squarefree class."""
    classes: dict[int, int] = {}
    for xi, ai in zip(x, a):
        s, y = squarefree(ai)
        classes[s] = classes.get(s, 0) + xi * y
    return all(v == 0 for v in classes.values())


def sign(x, a, p: int = 256, p_max: int = 1 << 14) -> int:
    """Sign of E: zero by the class test, otherwise refine from p bits."""
    if is_zero(x, a):
        return 0
    while p <= p_max:
        lo, hi = sum_bounds(x, a, p)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        p *= 2
    raise AssertionError(f"oracle could not separate {x}, {a} from zero")


def abs_enclosure(x, a, p: int = 256) -> tuple[Fraction, Fraction]:
    """Bounds on |E| (valid whatever the sign)."""
    lo, hi = sum_bounds(x, a, p)
    if lo >= 0:
        return Fraction(lo, 1 << p), Fraction(hi, 1 << p)
    if hi <= 0:
        return Fraction(-hi, 1 << p), Fraction(-lo, 1 << p)
    return Fraction(0), Fraction(max(-lo, hi), 1 << p)


def abs_compare(x, a, threshold: Fraction, p: int = 256, p_max: int = 1 << 14) -> int:
    """Sign of |E| - threshold for nonzero E, refining as needed."""
    while p <= p_max:
        lo, hi = abs_enclosure(x, a, p)
        if lo > threshold:
            return 1
        if hi < threshold:
            return -1
        if lo == hi == threshold:
            return 0
        p *= 2
    raise AssertionError(f"could not compare |E| with {threshold}")


def value(x, a, p: int = 256) -> Fraction:
    """E rounded to within 2^-p times sum |x_i|."""
    return Fraction(sum(xi * root_floor(ai, p) for xi, ai in zip(x, a)), 1 << p)


def det(rows) -> Fraction:
    m = [[Fraction(v) for v in row] for row in rows]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= f * m[c][k]
    return out


def gram_schmidt(cols):
    """Exact Gram-Schmidt of column vectors: (orthogonal vectors, mu)."""
    stars: list[list[Fraction]] = []
    norms: list[Fraction] = []
    d = len(cols)
    mu = [[Fraction(0)] * d for _ in range(d)]
    for i, b in enumerate(cols):
        v = [Fraction(t) for t in b]
        for j in range(i):
            mu[i][j] = sum((Fraction(t) * s for t, s in zip(b, stars[j])), Fraction(0)) / norms[j]
            v = [t - mu[i][j] * s for t, s in zip(v, stars[j])]
        stars.append(v)
        norms.append(sum((t * t for t in v), Fraction(0)))
    return norms, mu


def dual_coordinate_cmp(c, a, Q, i, threshold: Fraction) -> int:
    """Sign of |coordinate i of B c| - threshold for the dual basis, exactly."""
    n = len(a)
    if i == 0:
        v = abs(Fraction(c[0], Q ** (n + 1)))
        return (v > threshold) - (v < threshold)
    x = (c[0], c[i])
    rads = (a[i - 1], 1)
    if is_zero(x, rads):
        return -1 if threshold > 0 else 0
    return abs_compare(x, rads, threshold)
