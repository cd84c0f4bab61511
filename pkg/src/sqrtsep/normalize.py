"""Canonical forms for sums of square roots.

A sum ``E = sum x_i sqrt(a_i)`` is normalized by pulling square factors out of
each radicand, merging equal radicands and dropping zero coefficients.  The
square roots of distinct squarefree positive integers are linearly
independent over the rationals, so the normalized form is empty exactly when
``E = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .errors import DomainError, UnfactoredRadicandError

TRIAL_LIMIT = 10 ** 6
RHO_BUDGET = 200_000

# Miller-Rabin with these bases is deterministic below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981


@dataclass(frozen=True, slots=True)
class SqrtSumInstance:
    """Raw input ``(x, a)`` of ``E = sum x_i sqrt(a_i)``."""

    x: tuple[int, ...]
    a: tuple[int, ...]

    def __init__(self, x: Iterable[int], a: Iterable[int]):
        x, a = tuple(int(v) for v in x), tuple(int(v) for v in a)
        if len(x) != len(a):
            raise DomainError(f"x and a differ in length ({len(x)} vs {len(a)})")
        if not x:
            raise DomainError("an instance needs at least one term")
        if any(v < 1 for v in a):
            raise DomainError(f"radicands must be positive integers, got {a}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return len(self.x)


@dataclass(frozen=True, slots=True)
class NormalizedInstance:
    """Distinct squarefree radicands in increasing order, nonzero coefficients.

    The empty instance stands for ``E = 0``.
    """

    x: tuple[int, ...]
    a: tuple[int, ...]

    def __init__(self, x: Iterable[int] = (), a: Iterable[int] = ()):
        x, a = tuple(int(v) for v in x), tuple(int(v) for v in a)
        if len(x) != len(a):
            raise DomainError("x and a differ in length")
        if any(v == 0 for v in x):
            raise DomainError("normalized coefficients must be nonzero")
        if any(v < 1 for v in a) or any(u >= v for u, v in zip(a, a[1:])):
            raise DomainError(f"normalized radicands must be positive and strictly increasing, got {a}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return len(self.x)

    def is_empty(self) -> bool:
        return not self.x

    def as_instance(self) -> SqrtSumInstance:
        if self.is_empty():
            return SqrtSumInstance((0,), (1,))
        return SqrtSumInstance(self.x, self.a)


# -- factoring ---------------------------------------------------------------

@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    sieve = bytearray([1]) * (TRIAL_LIMIT + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(TRIAL_LIMIT) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, TRIAL_LIMIT + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin over fixed bases; deterministic below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if n < _MR_DETERMINISTIC_LIMIT else _MR_BASES + (43, 47, 53, 59, 61, 67, 71, 73)
    for b in bases:
        y = pow(b, d, n)
        if y in (1, n - 1):
            continue
        for _ in range(s - 1):
            y = y * y % n
            if y == n - 1:
                break
        else:
            return False
    return True


def pollard_brent(n: int, budget: int = RHO_BUDGET) -> int | None:
    """A nontrivial factor of composite odd ``n``, or None when the budget runs out."""
    steps = 0
    for c in range(1, 64):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        m = 128
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            steps += r
            if steps > budget:
                return None
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    return None


def _factor_large(m: int, budget: int, radicand: int, out: dict[int, int]) -> None:
    """Factor ``m`` whose prime factors all exceed the trial-division limit."""
    if m == 1:
        return
    r = math.isqrt(m)
    if r * r == m:
        sub: dict[int, int] = {}
        _factor_large(r, budget, radicand, sub)
        for p, e in sub.items():
            out[p] = out.get(p, 0) + 2 * e
        return
    if is_probable_prime(m):
        out[m] = out.get(m, 0) + 1
        return
    if m < TRIAL_LIMIT ** 3:
        # not a square, not prime, no factor below the limit: product of two distinct primes
        out[m] = out.get(m, 0) + 1
        return
    f = pollard_brent(m, budget)
    if f is None:
        raise UnfactoredRadicandError(radicand, m)
    _factor_large(f, budget, radicand, out)
    _factor_large(m // f, budget, radicand, out)


def _coprime_base(factors: dict[int, int]) -> dict[int, int]:
    """Split overlapping squarefree factors until they are pairwise coprime.

    Pollard's rho may return a composite factor that shares a prime with a
    later one (``p*q`` next to ``p``); gcd splitting repairs the exponents.
    """
    out = dict(factors)
    while True:
        keys = sorted(out)
        pair = next(((u, v) for i, u in enumerate(keys) for v in keys[i + 1:] if math.gcd(u, v) > 1), None)
        if pair is None:
            return out
        u, v = pair
        g = math.gcd(u, v)
        e, f = out.pop(u), out.pop(v)
        for w, k in ((g, e + f), (u // g, e), (v // g, f)):
            if w > 1:
                out[w] = out.get(w, 0) + k


def factorize(n: int, budget: int = RHO_BUDGET) -> dict[int, int]:
    """``{factor: exponent}`` with every factor squarefree and pairwise coprime.

    Factors are primes except possibly a product of two distinct large primes,
    which is enough to decide squarefreeness exactly.
    """
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out: dict[int, int] = {}
    m = n
    for p in _small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out[p] = e
    else:
        large: dict[int, int] = {}
        _factor_large(m, budget, n, large)
        out.update(_coprime_base(large))
        return out
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


@lru_cache(maxsize=65536)
def squarefree_decompose(a: int, budget: int = RHO_BUDGET) -> tuple[int, int]:
    """Split ``a = s * y**2`` with ``s`` squarefree.

    >>> squarefree_decompose(45)
    (5, 3)
    """
    if a < 1:
        raise DomainError(f"radicand must be positive, got {a}")
    s = y = 1
    for p, e in factorize(a, budget).items():
        y *= p ** (e // 2)
        if e % 2:
            s *= p
    return s, y


# -- instance transforms ------------------------------------------------------

def normalize(inst: SqrtSumInstance | NormalizedInstance) -> NormalizedInstance:
    """Rewrite each term as ``(x_i y_i) sqrt(s_i)``, merge equal radicands, drop zeros."""
    merged: dict[int, int] = {}
    for xi, ai in zip(inst.x, inst.a):
        if xi == 0:
            continue
        s, y = squarefree_decompose(ai)
        merged[s] = merged.get(s, 0) + xi * y
    keys = sorted(k for k, v in merged.items() if v != 0)
    return NormalizedInstance([merged[k] for k in keys], keys)


def is_zero(inst: SqrtSumInstance) -> bool:
    """Exact test for ``E = 0``."""
    return normalize(inst).is_empty()


def to_problem33_format(inst: SqrtSumInstance) -> SqrtSumInstance:
    """Equivalent instance with coefficients +-1, even length and as many +1 as -1.

    Each term becomes ``sign(x_i) sqrt(x_i**2 a_i)``.  A surplus on one side is
    removed by splitting terms of that side as ``sqrt(b) = sqrt(4b) - sqrt(b)``
    (and ``-sqrt(b) = -sqrt(4b) + sqrt(b)``), each split shrinking the surplus
    by one.  An all-zero input becomes ``sqrt(1) - sqrt(1)``.
    """
    terms = [(1 if xi > 0 else -1, xi * xi * ai) for xi, ai in zip(inst.x, inst.a) if xi != 0]
    if not terms:
        return SqrtSumInstance((1, -1), (1, 1))
    surplus = sum(sign for sign, _ in terms)
    side = 1 if surplus > 0 else -1
    to_split = abs(surplus)
    x_out: list[int] = []
    a_out: list[int] = []
    for sign, b in terms:
        if to_split and sign == side:
            x_out += [sign, -sign]
            a_out += [4 * b, b]
            to_split -= 1
        else:
            x_out.append(sign)
            a_out.append(b)
    return SqrtSumInstance(x_out, a_out)
