import math
import random
from fractions import Fraction
from itertools import product

import pytest

import oracles
from sqrtsep import DimensionError, DomainError
from sqrtsep.lattice import (L2, LINF, LatticeBasis, build_dual_basis, build_primal_basis, dual_check,
                             lll_reduce, perturbation_bound, shortest_vector, successive_minima)


def _brute_minimum(rows, norm, box=6):
    """Shortest nonzero vector of an exact integer/rational basis over a coefficient box."""
    d = len(rows)
    best = None
    for c in product(range(-box, box + 1), repeat=d):
        if not any(c):
            continue
        v = [sum(rows[i][j] * c[j] for j in range(d)) for i in range(d)]
        val = max(abs(t) for t in v) if norm == LINF else sum(t * t for t in v)
        best = val if best is None else min(best, val)
    return best


def test_primal_structure():
    b = build_primal_basis((), 7)
    assert b.mid == ((Fraction(7),),)
    b = build_primal_basis((2,), 1)
    assert b.mid[1] == (0, 1) and b.mid[0][0] == 1
    assert b.entry_bounds(0, 1)[0] <= -Fraction(14142135, 10 ** 7) - Fraction(1, 10 ** 8)
    b = build_primal_basis((2, 3), 100, 64)
    for j, aj in ((1, 2), (2, 3)):
        lo, hi = b.entry_bounds(0, j)
        assert hi - lo <= Fraction(200, 2 ** 64)
        assert lo < 0 and lo * lo >= 10 ** 4 * aj >= hi * hi


def test_dual_structure():
    b = build_dual_basis((2,), 2)
    assert b.mid[0] == (Fraction(1, 4), 0)
    assert b.det_mid() == Fraction(1, 4)
    assert build_dual_basis((2, 3), 5).det_mid() == Fraction(1, 125)
    r = build_dual_basis((1, 2), 3, reduced=True)
    assert r.dim == 2 and r.mid[0][0] == Fraction(1, 27)
    lo, hi = r.entry_bounds(1, 0)
    assert lo * lo <= 2 <= hi * hi
    with pytest.raises(DomainError):
        build_dual_basis((2, 3), 3, reduced=True)
    with pytest.raises(DomainError):
        build_dual_basis((2,), 1)


def test_generic_basis_validation():
    with pytest.raises(DomainError):
        LatticeBasis.generic([[1, 2], [2, 4]])
    with pytest.raises(DomainError):
        LatticeBasis.generic([[1, 2, 3], [4, 5, 6]])


def test_lll_examples():
    ident = LatticeBasis.generic([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    red, T = lll_reduce(ident)
    assert red.mid == ident.mid and T == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    red, T = lll_reduce(LatticeBasis.generic([[1, 10], [0, 1]]))
    assert T == ((1, -10), (0, 1))
    assert abs(oracles.det(T)) == 1
    first = [red.mid[i][0] for i in range(2)]
    assert sum(t * t for t in first) <= 2


def test_lll_dual_first_vector_is_short():
    red, _ = lll_reduce(build_dual_basis((2, 3), 4))
    first = [red.mid[i][0] for i in range(3)]
    # LLL slack on top of the Minkowski bound 1/Q
    assert max(abs(t) for t in first) <= Fraction(1, 4) * 2 ** 3


def test_lll_random_invariants():
    rng = random.Random(7)
    for _ in range(100):
        d = rng.randint(2, 6)
        rows = [[rng.randint(-100, 100) for _ in range(d)] for _ in range(d)]
        if oracles.det(rows) == 0:
            continue
        red, T = lll_reduce(LatticeBasis.generic(rows), Fraction(99, 100))
        assert abs(oracles.det(T)) == 1
        cols = [[red.mid[i][j] for i in range(d)] for j in range(d)]
        norms, mu = oracles.gram_schmidt(cols)
        assert all(abs(mu[i][j]) <= Fraction(1, 2) for i in range(d) for j in range(i))
        assert all(norms[k] >= (Fraction(99, 100) - mu[k][k - 1] ** 2) * norms[k - 1] for k in range(1, d))


def test_svp_examples():
    r = shortest_vector(LatticeBasis.generic([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), LINF)
    assert r.certified and r.value == r.value.point(1)
    assert sum(abs(c) for c in r.vector) == 1
    r = shortest_vector(LatticeBasis.generic([[2, 0], [0, 3]]), L2)
    assert r.vector in ((1, 0), (-1, 0)) and r.value.lo == r.value.hi == 2
    r = shortest_vector(build_dual_basis((2, 3), 3), LINF)
    assert r.certified and r.value.hi <= Fraction(1, 3)


@pytest.mark.parametrize("norm", [LINF, L2])
def test_svp_matches_brute_force_on_integer_bases(norm):
    rng = random.Random(11)
    for _ in range(30):
        d = rng.randint(2, 4)
        rows = [[rng.randint(-9, 9) for _ in range(d)] for _ in range(d)]
        if oracles.det(rows) == 0:
            continue
        r = shortest_vector(LatticeBasis.generic(rows), norm)
        box = 4 if d > 3 else 8
        want = _brute_minimum(rows, norm, box)
        got = max(abs(t) for t in r.point) if norm == LINF else sum(t * t for t in r.point)
        assert got <= want
        if max(abs(c) for c in r.vector) <= box:
            assert got == want
        if norm == LINF:
            assert r.value.contains(got)
        else:
            assert r.value.lo ** 2 <= got <= r.value.hi ** 2


def test_dual_svp_matches_small_q_search():
    # for the (2,3) dual lattice the l-infinity minimum is a small-q simultaneous approximation
    for Q in (2, 3, 5, 8):
        r = shortest_vector(build_dual_basis((2, 3), Q), LINF)
        q, p1, p2 = r.vector[0], -r.vector[1], -r.vector[2]
        best = None
        for qq in range(1, Q ** 3 + 1):
            errs = [abs(qq * math.sqrt(ai) - round(qq * math.sqrt(ai))) for ai in (2, 3)]
            val = max(qq / Q ** 3, *errs)
            best = val if best is None else min(best, val)
        assert abs(float(r.value.mid) - best) < 1e-12, Q
        assert q != 0 and (p1, p2) != (0, 0)


def test_successive_minima_examples():
    m = successive_minima(LatticeBasis.generic([[1, 0], [0, 1]]), LINF)
    assert [v.lo for v, _ in m] == [1, 1]
    m = successive_minima(LatticeBasis.generic([[1, 0], [0, 5]]), LINF)
    assert [(v.lo, v.hi) for v, _ in m] == [(1, 1), (5, 5)]
    m = successive_minima(build_dual_basis((2, 3), 2), LINF)
    prod = Fraction(1)
    for v, _ in m:
        prod *= v.hi
    assert prod <= Fraction(1, 8)
    assert [round(float(v.mid), 4) for v, _ in m] == [0.375, 0.4142, 0.5]
    assert m[0][1] == (3, -4, -5)


def test_minima_are_nondecreasing_and_independent():
    for a, Q in (((2,), 7), ((2, 3), 6), ((2, 3, 5), 4), ((3, 7), 9)):
        for norm in (LINF, L2):
            m = successive_minima(build_dual_basis(a, Q), norm)
            mids = [v.mid for v, _ in m]
            assert mids == sorted(mids)
            vecs = [c for _, c in m]
            assert oracles.det([[v[j] for v in vecs] for j in range(len(a) + 1)]) != 0


def test_perturbation_bound_is_small_for_precise_entries():
    assert perturbation_bound(build_dual_basis((2, 3), 5, 128)) < Fraction(1, 2 ** 60)
    assert perturbation_bound(LatticeBasis.generic([[1, 2], [3, 4]])) == 0


def test_dimension_cap():
    with pytest.raises(DimensionError):
        successive_minima(LatticeBasis.generic([[int(i == j) for j in range(13)] for i in range(13)]))


def test_dual_check_examples():
    assert dual_check(build_primal_basis((2,), 4), build_dual_basis((2,), 2))
    ident = LatticeBasis.generic([[1, 0], [0, 1]])
    assert dual_check(ident, ident)
    assert not dual_check(build_primal_basis((2,), 4, 128), build_dual_basis((3,), 2, 128))
    with pytest.raises(DomainError):
        dual_check(build_primal_basis((2, 3), 27), build_dual_basis((2,), 3))
