"""Certified lattices built from square roots.

Basis vectors are the *columns* of the matrix, so ``Lambda(A) = {A c}``.
Irrational entries are stored as an exact rational midpoint plus an error
radius; all reduction and enumeration happens exactly on the midpoint
lattice, and reported norms are inflated afterwards so they enclose the
corresponding values of the true lattice.

Two constructions are provided: the primal basis with first row
``(N, -N sqrt(a_1), ..., -N sqrt(a_n))`` above an identity block, and its
dual, lower triangular with ``1/Q**(n+1)`` in the corner and
``sqrt(a_1), ..., sqrt(a_n)`` below it.  With ``N = Q**(n+1)`` the two are
exactly dual to each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .errors import BudgetError, DimensionError, DomainError, PrecisionError
from .exact import DyadicInterval, root_bounds, sqrt_enclosure

LINF = "linf"
L2 = "l2"
NORMS = (LINF, L2)

ENUM_CAP = 12
DEFAULT_DELTA = Fraction(3, 4)
ENUM_BUDGET = 2_000_000
# relative slack on float pruning radii; candidates are re-checked exactly
_SLACK = 1e-6

Matrix = tuple[tuple[Fraction, ...], ...]


def _matrix(rows) -> Matrix:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


def _det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def _inverse(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(rows)
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [v - f * w for v, w in zip(m[r], m[col])]
    return [row[n:] for row in m]


@dataclass(frozen=True)
class LatticeBasis:
    """Square basis (columns are basis vectors) with per-entry error radii.

    ``kind`` is ``"primal"``, ``"dual"`` or ``"generic"``; ``param`` holds N
    for primal and Q for dual bases.
    """

    mid: Matrix
    rad: Matrix
    kind: str = "generic"
    param: int | None = None
    a: tuple[int, ...] = ()
    precision: int | None = None
    reduced_variant: bool = False

    def __post_init__(self):
        d = len(self.mid)
        if d == 0 or any(len(r) != d for r in self.mid):
            raise DomainError("basis must be a nonempty square matrix")
        if len(self.rad) != d or any(len(r) != d for r in self.rad):
            raise DomainError("radius matrix must match the basis shape")
        if any(v < 0 for r in self.rad for v in r):
            raise DomainError("entry radii must be nonnegative")
        if _det(self.mid) == 0:
            raise DomainError("basis midpoints are singular")

    @classmethod
    def generic(cls, rows, rad=None) -> "LatticeBasis":
        mid = _matrix(rows)
        d = len(mid)
        r = _matrix(rad) if rad is not None else tuple((Fraction(0),) * d for _ in range(d))
        return cls(mid, r)

    @property
    def dim(self) -> int:
        return len(self.mid)

    @property
    def entry_radius(self) -> Fraction:
        return max(v for r in self.rad for v in r)

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.mid)

    def det_mid(self) -> Fraction:
        return _det(self.mid)

    def entry_bounds(self, i: int, j: int) -> tuple[Fraction, Fraction]:
        m, r = self.mid[i][j], self.rad[i][j]
        return m - r, m + r

    def times(self, transform: Sequence[Sequence[int]]) -> "LatticeBasis":
        """Basis ``B T`` for an integer matrix ``T``; radii propagate as ``rad |T|``."""
        d = self.dim
        mid = tuple(tuple(sum((self.mid[i][k] * transform[k][j] for k in range(d)), Fraction(0))
                          for j in range(d)) for i in range(d))
        rad = tuple(tuple(sum((self.rad[i][k] * abs(transform[k][j]) for k in range(d)), Fraction(0))
                          for j in range(d)) for i in range(d))
        return LatticeBasis(mid, rad, self.kind, self.param, self.a, self.precision, self.reduced_variant)


def _beta(a: int, p: int) -> tuple[Fraction, Fraction]:
    """Midpoint and radius of sqrt(a) at precision p."""
    s = sqrt_enclosure(a, p)
    return s.mid, s.width / 2


def build_primal_basis(a: Sequence[int], N: int, p: int = 64) -> LatticeBasis:
    """Basis ``[[N, -N sqrt(a_1), ...], [0, I]]``."""
    a = tuple(a)
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    d = len(a) + 1
    mid = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    rad = [[Fraction(0)] * d for _ in range(d)]
    mid[0][0] = Fraction(N)
    for j, aj in enumerate(a, start=1):
        m, r = _beta(aj, p)
        mid[0][j] = -N * m
        rad[0][j] = N * r
    return LatticeBasis(_matrix(mid), _matrix(rad), "primal", N, a, p)


def build_dual_basis(a: Sequence[int], Q: int, p: int = 64, reduced: bool = False) -> LatticeBasis:
    """Lower-triangular basis with corner ``1/Q**(n+1)`` and first column below it ``sqrt(a_i)``.

    ``reduced=True`` (only when ``a[0] == 1``) deletes the row and column of
    the rational root; the corner keeps the exponent of the full instance.
    """
    a = tuple(a)
    if Q < 2:
        raise DomainError(f"Q must be at least 2, got {Q}")
    n = len(a)
    corner = Fraction(1, Q ** (n + 1))
    kept = a
    if reduced:
        if not a or a[0] != 1:
            raise DomainError("the reduced variant needs a leading radicand 1")
        kept = a[1:]
    d = len(kept) + 1
    mid = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    rad = [[Fraction(0)] * d for _ in range(d)]
    mid[0][0] = corner
    for i, ai in enumerate(kept, start=1):
        mid[i][0], rad[i][0] = _beta(ai, p)
    return LatticeBasis(_matrix(mid), _matrix(rad), "dual", Q, a, p, reduced)


# -- integral LLL -----------------------------------------------------------

@dataclass
class _Reduction:
    """Exact LLL state on the integer-scaled midpoint lattice."""

    scale: int
    vectors: list[list[int]]        # reduced basis vectors, scaled to integers
    coeffs: list[list[int]]         # coeffs[j] = input-basis coordinates of vectors[j]
    D: list[int]                    # Gram determinants, D[0] = 1
    lam: list[list[int]]            # lam[k][j] = D[j] * mu_kj, 1-indexed
    input_columns: list[list[int]] = field(default_factory=list)


def _dot(u, v) -> int:
    return sum(x * y for x, y in zip(u, v))


def _lll_integral(vecs: list[list[int]], delta: Fraction):
    """Fraction-free LLL on linearly independent integer vectors.

    Returns ``(vectors, coeffs, D, lam)`` with 1-indexed Gram-Schmidt data.
    """
    n = len(vecs)
    b = [None] + [list(v) for v in vecs]
    H = [None] + [[int(i == j) for i in range(n)] for j in range(n)]
    D = [1] + [0] * n
    lam = [[0] * (n + 1) for _ in range(n + 1)]
    num, den = delta.numerator, delta.denominator
    D[1] = _dot(b[1], b[1])

    def red(k, l):
        if 2 * abs(lam[k][l]) > D[l]:
            q = (2 * lam[k][l] + D[l]) // (2 * D[l])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            H[k] = [x - q * y for x, y in zip(H[k], H[l])]
            lam[k][l] -= q * D[l]
            for i in range(1, l):
                lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        H[k], H[k - 1] = H[k - 1], H[k]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        L = lam[k][k - 1]
        B = (D[k - 2] * D[k] + L * L) // D[k - 1]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (D[k] * lam[i][k - 1] - L * t) // D[k - 1]
            lam[i][k - 1] = (B * t + L * lam[i][k]) // D[k]
        D[k - 1] = B

    k, kmax = 2, 1
    while k <= n:
        if k > kmax:
            kmax = k
            for j in range(1, k + 1):
                u = _dot(b[k], b[j])
                for i in range(1, j):
                    u = (D[i] * u - lam[k][i] * lam[j][i]) // D[i - 1]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise DomainError("basis vectors are linearly dependent")
                    D[k] = u
        red(k, k - 1)
        if den * D[k] * D[k - 2] < num * D[k - 1] ** 2 - den * lam[k][k - 1] ** 2:
            swap(k, kmax)
            k = max(2, k - 1)
        else:
            for l in range(k - 2, 0, -1):
                red(k, l)
            k += 1
    return b[1:], H[1:], D, lam


def _scaled_columns(basis: LatticeBasis) -> tuple[int, list[list[int]]]:
    scale = 1
    for row in basis.mid:
        for v in row:
            scale = math.lcm(scale, v.denominator)
    cols = [[int(basis.mid[i][j] * scale) for i in range(basis.dim)] for j in range(basis.dim)]
    return scale, cols


@lru_cache(maxsize=256)
def _reduce(basis: LatticeBasis, delta: Fraction = DEFAULT_DELTA) -> _Reduction:
    if not (Fraction(1, 4) < delta < 1):
        raise DomainError(f"LLL parameter must lie in (1/4, 1), got {delta}")
    scale, cols = _scaled_columns(basis)
    vecs, H, D, lam = _lll_integral(cols, delta)
    return _Reduction(scale, vecs, H, D, lam, cols)


def lll_reduce(basis: LatticeBasis, delta: Fraction = DEFAULT_DELTA):
    """LLL-reduce the midpoint lattice exactly.

    Returns ``(reduced_basis, T)`` where ``reduced_basis = basis * T`` and
    ``T`` (rows of ints) is unimodular.  Raises :class:`PrecisionError` when
    the entry radii are too large for the reduced midpoints to describe the
    true lattice (relative perturbation bound of at least 1/2).
    """
    delta = Fraction(delta)
    red = _reduce(basis, delta)
    d = basis.dim
    T = tuple(tuple(red.coeffs[j][i] for j in range(d)) for i in range(d))
    if perturbation_bound(basis) >= Fraction(1, 2):
        raise PrecisionError("entry radii too large to certify the reduced basis; raise the precision")
    return basis.times(T), T


@lru_cache(maxsize=256)
def perturbation_bound(basis: LatticeBasis) -> Fraction:
    """``K`` with ``|norm_inf(B_true c) - norm_inf(B_mid c)| <= K norm_inf(B_mid c)`` for all c."""
    r = basis.entry_radius
    if r == 0:
        return Fraction(0)
    inv = _inverse(basis.mid)
    return r * sum(abs(v) for row in inv for v in row)


def _inflation(basis: LatticeBasis, coeffs: Sequence[int]) -> list[Fraction]:
    """Per-coordinate bound on ``|B_true c - B_mid c|``."""
    d = basis.dim
    return [sum((basis.rad[i][k] * abs(coeffs[k]) for k in range(d)), Fraction(0)) for i in range(d)]


# -- enumeration ------------------------------------------------------------

def _enumerate(red: _Reduction, bound2: Callable[[], float], visit: Callable[[tuple[int, ...]], None],
               budget: int = ENUM_BUDGET) -> None:
    """Visit every nonzero coefficient vector (reduced coordinates, one per +-pair)
    whose squared l2 norm is at most ``bound2()`` (up to float slack)."""
    d = len(red.vectors)
    D, lam = red.D, red.lam
    s2 = red.scale * red.scale
    bstar = [D[i + 1] / (D[i] * s2) for i in range(d)]
    mu = [[(lam[k + 1][j + 1] / D[j + 1]) if j < k else 0.0 for j in range(d)] for k in range(d)]
    c = [0] * d
    count = 0

    def rec(i, partial, top_zero):
        nonlocal count
        center = -sum(mu[j][i] * c[j] for j in range(i + 1, d))
        limit = bound2() * (1 + _SLACK)
        rem = limit - partial
        if rem < 0:
            return
        radius = math.sqrt(rem / bstar[i])
        lo = math.ceil(center - radius)
        hi = math.floor(center + radius)
        if top_zero:
            lo = max(lo, 0)
        for v in range(lo, hi + 1):
            count += 1
            if count > budget:
                raise BudgetError(f"enumeration exceeded {budget} nodes")
            c[i] = v
            part = partial + (v - center) ** 2 * bstar[i]
            if part > bound2() * (1 + _SLACK):
                continue
            if i == 0:
                if not (top_zero and v == 0):
                    visit(tuple(c))
            else:
                rec(i - 1, part, top_zero and v == 0)
        c[i] = 0

    rec(d - 1, 0.0, True)


def _combine(red: _Reduction, c: Sequence[int]) -> tuple[list[int], list[int]]:
    """Scaled integer lattice vector and input-basis coefficients of reduced coords ``c``."""
    d = len(c)
    vec = [0] * d
    coef = [0] * d
    for j, cj in enumerate(c):
        if cj:
            for i in range(d):
                vec[i] += cj * red.vectors[j][i]
                coef[i] += cj * red.coeffs[j][i]
    return vec, coef


def _norm_int(vec: Sequence[int], norm_kind: str) -> int:
    """Scaled exact norm: max |v_i| for l-infinity, sum v_i**2 for l2."""
    if norm_kind == LINF:
        return max(abs(v) for v in vec)
    return sum(v * v for v in vec)


def _canonical_sign(coef: list[int], vec: list[int]):
    for v in coef:
        if v:
            if v < 0:
                return [-x for x in coef], [-x for x in vec]
            break
    return coef, vec


def _l2_bound(norm_kind: str, value: int, d: int, scale: int) -> float:
    """Unscaled squared l2 radius covering the ball of the given scaled norm value."""
    if norm_kind == L2:
        return value / (scale * scale)
    return d * (value / scale) ** 2


@dataclass(frozen=True)
class SVPResult:
    """A lattice vector with a certified enclosure of its norm.

    ``vector`` holds integer coordinates in the *input* basis.  ``value``
    encloses both the true norm of that vector and the true minimum it
    realizes; ``certified`` is False when entry radii are too large (or
    enumeration was skipped) to give a positive rigorous lower bound.
    """

    vector: tuple[int, ...]
    value: DyadicInterval
    norm_kind: str
    certified: bool
    point: tuple[Fraction, ...] = ()


def _check_norm(norm_kind: str) -> None:
    if norm_kind not in NORMS:
        raise DomainError(f"unknown norm {norm_kind!r}; expected one of {NORMS}")


def _output_precision(basis: LatticeBasis, red: _Reduction) -> int:
    return 64 + 2 * red.scale.bit_length() + (basis.precision or 0)


def _enclose(basis: LatticeBasis, red: _Reduction, coef: Sequence[int], norm_value: int,
             norm_kind: str) -> tuple[DyadicInterval, bool]:
    """Certified enclosure of the true norm / successive minimum behind a midpoint norm."""
    prec = _output_precision(basis, red)
    S = red.scale
    d = basis.dim
    K = perturbation_bound(basis)
    e = _inflation(basis, coef)
    if norm_kind == LINF:
        m_lo = m_hi = Fraction(norm_value, S)
        e_tot = max(e)
        K_norm = K
    else:
        lo_m, hi_m = root_bounds(Fraction(norm_value, S * S), 2, prec)
        m_lo, m_hi = Fraction(lo_m, 1 << prec), Fraction(hi_m, 1 << prec)
        _, et = root_bounds(sum((v * v for v in e), Fraction(0)), 2, prec)
        e_tot = Fraction(et, 1 << prec)
        sd_lo, sd_hi = root_bounds(Fraction(d), 2, 0)
        K_norm = K * sd_hi
    upper = m_hi + e_tot
    certified = K_norm < 1
    lower = (1 - K_norm) * m_lo if certified else Fraction(0)
    return DyadicInterval.from_bounds(lower, upper, prec), certified


def _point(red: _Reduction, vec: Sequence[int]) -> tuple[Fraction, ...]:
    return tuple(Fraction(v, red.scale) for v in vec)


def _check_cap(basis: LatticeBasis, cap: int) -> None:
    if basis.dim > cap:
        raise DimensionError(f"dimension {basis.dim} exceeds the enumeration cap {cap}")


def shortest_vector(basis: LatticeBasis, norm_kind: str = L2, cap: int = ENUM_CAP,
                    budget: int = ENUM_BUDGET, estimate: bool = False) -> SVPResult:
    """Exact shortest nonzero vector of the midpoint lattice, with certified norm.

    Above the enumeration cap, ``estimate=True`` returns the best LLL basis
    vector flagged ``certified=False`` instead of raising.
    """
    _check_norm(norm_kind)
    red = _reduce(basis)
    d = basis.dim
    best = None
    for j in range(d):
        c = [0] * d
        c[j] = 1
        vec, coef = _combine(red, c)
        key = (_norm_int(vec, norm_kind),)
        coef, vec = _canonical_sign(coef, vec)
        if best is None or key[0] < best[0]:
            best = (key[0], tuple(coef), vec)
    if d > cap:
        if not estimate:
            _check_cap(basis, cap)
        value, _ = _enclose(basis, red, best[1], best[0], norm_kind)
        return SVPResult(best[1], DyadicInterval.from_bounds(0, value.hi, -value.exp), norm_kind, False,
                         _point(red, best[2]))

    state = {"best": best}

    def bound2():
        return _l2_bound(norm_kind, state["best"][0], d, red.scale)

    def visit(c):
        vec, coef = _combine(red, c)
        val = _norm_int(vec, norm_kind)
        cur = state["best"]
        if val > cur[0]:
            return
        coef, vec = _canonical_sign(coef, vec)
        cand = (val, tuple(coef), vec)
        if val < cur[0] or cand[1] < cur[1]:
            state["best"] = cand

    _enumerate(red, bound2, visit, budget)
    val, coef, vec = state["best"]
    value, certified = _enclose(basis, red, coef, val, norm_kind)
    return SVPResult(coef, value, norm_kind, certified, _point(red, vec))


class _Span:
    """Incremental rank test over the rationals."""

    def __init__(self, d: int):
        self.rows: list[tuple[int, list[Fraction]]] = []
        self.d = d

    def add(self, v: Sequence[int]) -> bool:
        w = [Fraction(x) for x in v]
        for piv, row in self.rows:
            if w[piv]:
                f = w[piv] / row[piv]
                w = [a - f * b for a, b in zip(w, row)]
        piv = next((i for i, x in enumerate(w) if x), None)
        if piv is None:
            return False
        self.rows.append((piv, w))
        return True


def successive_minima(basis: LatticeBasis, norm_kind: str = LINF, cap: int = ENUM_CAP,
                      budget: int = ENUM_BUDGET) -> list[tuple[DyadicInterval, tuple[int, ...]]]:
    """All ``d`` successive minima with attaining, linearly independent vectors.

    Enumerates balls of growing radius and greedily collects independent
    vectors in order of (exact midpoint norm, coefficient vector).
    """
    _check_norm(norm_kind)
    _check_cap(basis, cap)
    red = _reduce(basis)
    d = basis.dim
    basis_norms = []
    for j in range(d):
        c = [0] * d
        c[j] = 1
        vec, _ = _combine(red, c)
        basis_norms.append(_norm_int(vec, norm_kind))
    r_max = max(basis_norms)
    radius = min(basis_norms)
    while True:
        found: list[tuple[int, tuple[int, ...]]] = []

        def visit(c):
            vec, coef = _combine(red, c)
            val = _norm_int(vec, norm_kind)
            if val <= radius:
                coef, _ = _canonical_sign(coef, vec)
                found.append((val, tuple(coef)))

        _enumerate(red, lambda: _l2_bound(norm_kind, radius, d, red.scale), visit, budget)
        found.sort()
        span = _Span(d)
        picked = [(val, coef) for val, coef in found if span.add(coef)]
        if len(picked) == d:
            break
        if radius >= r_max:
            raise PrecisionError("enumeration missed basis vectors; float pruning is inconsistent")
        radius = min(2 * radius if norm_kind == LINF else 4 * radius, r_max)
    out = []
    for val, coef in picked:
        value, _ = _enclose(basis, red, coef, val, norm_kind)
        out.append((value, coef))
    return out


# -- duality -----------------------------------------------------------------

def _interval_product_entry(A: LatticeBasis, B: LatticeBasis, i: int, j: int) -> tuple[Fraction, Fraction]:
    """Enclosure of entry (i, j) of ``A^T B``."""
    lo = hi = Fraction(0)
    for k in range(A.dim):
        a0, a1 = A.entry_bounds(k, i)
        b0, b1 = B.entry_bounds(k, j)
        prods = (a0 * b0, a0 * b1, a1 * b0, a1 * b1)
        lo += min(prods)
        hi += max(prods)
    return lo, hi


def dual_check(primal: LatticeBasis, dual: LatticeBasis) -> bool:
    """True iff every entry of ``primal^T dual`` encloses an integer.

    This certifies that ``dual`` generates a sublattice of the dual lattice
    of ``primal``, up to the recorded entry radii.
    """
    if primal.dim != dual.dim:
        raise DomainError(f"dimension mismatch: {primal.dim} vs {dual.dim}")
    d = primal.dim
    for i in range(d):
        for j in range(d):
            lo, hi = _interval_product_entry(primal, dual, i, j)
            if math.ceil(lo) > math.floor(hi):
                return False
    return True
