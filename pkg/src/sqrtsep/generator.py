"""Hard instances: coefficient vectors with tiny nonzero sums.

``pigeonhole_instance`` enumerates every ``y`` in the box ``|y|_inf <= L//2``,
sorts the values ``y . beta`` and returns the difference of the closest pair.
Because the differences of box points are exactly the vectors with
``|x|_inf <= 2 (L//2)``, the result is the global minimum of ``|x . beta|``
over that box, and it never exceeds ``n max sqrt(a_i) / L^(n-1)``.

``lll_instance`` reads a small value off a short vector of the primal
lattice instead.  It is a heuristic with no optimality claim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from itertools import product
from typing import Sequence

from .decide import decide_sign
from .errors import BudgetError, DomainError
from .exact import DyadicInterval, sqrt_enclosure
from .lattice import L2, build_primal_basis, successive_minima
from .normalize import SqrtSumInstance, squarefree_decompose

GRID_BUDGET = 10 ** 7


@dataclass(frozen=True)
class GeneratedInstance:
    """A nonzero coefficient vector with certified ``0 < |E| <= bound``.

    ``proof_bound`` is the cruder gap bound from the pigeonhole count,
    ``n L max sqrt(a_i) / (L^n - 1)``, or None when ``L^n = 1``.
    """

    x: tuple[int, ...]
    a: tuple[int, ...]
    L: int
    bound: DyadicInterval
    achieved: DyadicInterval
    proof_bound: DyadicInterval | None
    certified: bool
    method: str


def _check_radicands(a: Sequence[int]) -> None:
    if not a:
        raise DomainError("at least one radicand is required")
    if any(squarefree_decompose(v)[0] != v for v in a) or len(set(a)) != len(a):
        raise DomainError(f"radicands must be distinct and squarefree, got {tuple(a)}")


def _bounds(a: Sequence[int], L: int, p: int) -> tuple[DyadicInterval, DyadicInterval | None]:
    n = len(a)
    top = sqrt_enclosure(max(a), p) * n
    bound = top.div(L ** (n - 1), p)
    proof = (top * L).div(L ** n - 1, p) if L ** n > 1 else None
    return bound, proof


def _within_statement_bound(x: Sequence[int], a: Sequence[int], L: int, sign: int) -> bool:
    """Exact test of ``L^(n-1) |x . beta| <= n sqrt(max a)``."""
    n = len(a)
    scale = L ** (n - 1)
    coeffs = [-sign * scale * xi for xi in x] + [n]
    rads = list(a) + [max(a)]
    return decide_sign(SqrtSumInstance(coeffs, rads)).sign >= 0


def _finish(x, a, L, p, method) -> GeneratedInstance:
    cert = decide_sign(SqrtSumInstance(x, a))
    bound, proof = _bounds(a, L, p)
    if cert.sign == 0:
        achieved = DyadicInterval(0, 0, 0)
        ok = False
    else:
        achieved = abs(cert.final_enclosure)
        ok = _within_statement_bound(x, a, L, cert.sign)
    return GeneratedInstance(tuple(x), tuple(a), L, bound, achieved, proof, ok, method)


def _lex_canonical(x: tuple[int, ...]) -> tuple[int, ...]:
    neg = tuple(-v for v in x)
    return min(x, neg)


def _compare_abs(a: Sequence[int]):
    """Exact comparison of ``|x . beta|`` between two coefficient vectors."""
    def cmp(x, y):
        sx = decide_sign(SqrtSumInstance(x, a)).sign
        sy = decide_sign(SqrtSumInstance(y, a)).sign
        diff = [sx * u - sy * v for u, v in zip(x, y)]
        s = decide_sign(SqrtSumInstance(diff, a)).sign if any(diff) else 0
        if s == 0:
            return (x > y) - (x < y)
        return s
    return cmp


def closest_pair_candidates(a: Sequence[int], h: int, p: int) -> list[tuple[int, ...]]:
    """Difference vectors containing the closest pair of ``{y . beta : |y|_inf <= h}``.

    Values are approximated by ``sum y_i floor(sqrt(a_i) 2^p)``, off by less
    than ``e = n h`` units each; every pair whose approximate gap is within
    ``4e`` of the smallest adjacent approximate gap is kept.
    """
    n = len(a)
    roots = [math.isqrt(v << (2 * p)) for v in a]
    pts = sorted((sum(yi * ri for yi, ri in zip(y, roots)), y)
                 for y in product(range(-h, h + 1), repeat=n))
    e = n * h
    gap = min(pts[i + 1][0] - pts[i][0] for i in range(len(pts) - 1))
    limit = gap + 4 * e
    cands = set()
    for i in range(len(pts)):
        vi, yi = pts[i]
        j = i + 1
        while j < len(pts) and pts[j][0] - vi <= limit:
            x = tuple(u - w for u, w in zip(pts[j][1], yi))
            cands.add(_lex_canonical(x))
            j += 1
    cands.discard((0,) * n)
    return sorted(cands)


def pigeonhole_instance(a: Sequence[int], L: int, p: int = 64, budget: int = GRID_BUDGET) -> GeneratedInstance:
    """Closest-pair difference over the box ``|y|_inf <= L // 2``.

    Ties cannot occur between distinct ``+-x`` (the roots are independent);
    the sign of ``x`` is the lexicographically smaller of ``x`` and ``-x``.
    """
    a = tuple(a)
    _check_radicands(a)
    if L < 2:
        raise DomainError(f"L must be at least 2, got {L}")
    h = L // 2
    size = (2 * h + 1) ** len(a)
    if size > budget:
        raise BudgetError(f"{size} grid points exceed the budget {budget}; try lll_instance instead")
    cands = closest_pair_candidates(a, h, p)
    best = min(cands, key=cmp_to_key(_compare_abs(a)))
    return _finish(best, a, L, p, "pigeonhole")


def lll_instance(a: Sequence[int], N: int, p: int = 64) -> GeneratedInstance:
    """Small value ``y0 - x . beta`` read off a short vector ``(y0, x)`` of the primal lattice.

    The returned instance is over radicands ``(1,) + a`` with coefficients
    ``(y0, -x_1, ..., -x_n)``; ``L`` is its infinity norm.  Successive minima
    vectors are tried in order, skipping those with ``x = 0`` or ``E = 0``.
    """
    a = tuple(a)
    basis = build_primal_basis(a, N, p)
    for _, coef in successive_minima(basis, L2):
        y0, xs = coef[0], coef[1:]
        if not any(xs):
            continue
        x = (y0,) + tuple(-v for v in xs)
        rads = (1,) + a
        if decide_sign(SqrtSumInstance(x, rads)).sign == 0:
            continue
        L = max(abs(v) for v in x)
        return _finish(x, rads, L, p, "lll")
    raise BudgetError("no short lattice vector yields a nonzero instance")
