from fractions import Fraction
from itertools import product

import pytest

import oracles
from sqrtsep import BudgetError, DomainError
from sqrtsep.generator import closest_pair_candidates, lll_instance, pigeonhole_instance


def _brute(a, h):
    best = None
    for x in product(range(-2 * h, 2 * h + 1), repeat=len(a)):
        if any(x) and min(x, tuple(-v for v in x)) == x:
            lo, hi = oracles.abs_enclosure(x, a)
            best = (hi, x) if best is None or hi < best[0] else best
    return best[1]


def test_pigeonhole_examples():
    g = pigeonhole_instance((2,), 2)
    assert g.x == (-1,) and g.certified
    assert g.achieved.intersects(g.bound)  # edge case: achieved equals the bound
    g = pigeonhole_instance((2, 3), 10)
    assert g.x == (-5, 4) == _brute((2, 3), 5)
    assert g.achieved.hi <= Fraction(3464, 10 ** 4)
    g = pigeonhole_instance((2, 3, 5), 4)
    assert g.x == (-4, 2, 1) == _brute((2, 3, 5), 2)
    assert g.achieved.hi <= Fraction(419, 1000)


@pytest.mark.parametrize("a", [(2, 7), (3, 5, 11), (2, 3, 5, 7)])
def test_pigeonhole_matches_brute_force(a):
    for L in range(2, 7 if len(a) < 4 else 4):
        g = pigeonhole_instance(a, L)
        assert g.certified
        assert g.x == _brute(a, L // 2)
        assert g.proof_bound.lo >= g.bound.lo or len(a) == 1


def test_pigeonhole_input_checks():
    with pytest.raises(DomainError):
        pigeonhole_instance((2, 8), 4)
    with pytest.raises(DomainError):
        pigeonhole_instance((2, 3), 1)
    with pytest.raises(BudgetError):
        pigeonhole_instance((2, 3, 5), 400, budget=1000)


def test_candidates_contain_optimum():
    cands = closest_pair_candidates((2, 3), 5, 64)
    assert (-5, 4) in cands
    assert (0, 0) not in cands


def test_lll_examples():
    g = lll_instance((2,), 10)
    assert g.a == (1, 2) and g.certified
    # 3 - 2 sqrt 2, the square of the Pell unit
    assert g.x == (3, -2)
    g = lll_instance((2, 3), 1000)
    assert g.certified and g.achieved.hi < Fraction(1, 1000)
    # with only a rational root every short vector cancels
    with pytest.raises(BudgetError):
        lll_instance((1,), 1)


def test_lll_instance_is_exactly_nonzero():
    for a, N in (((3,), 50), ((2, 5), 400), ((2, 3, 5), 3000)):
        g = lll_instance(a, N)
        assert oracles.sign(g.x, g.a) != 0
        lo, hi = oracles.abs_enclosure(g.x, g.a)
        assert g.achieved.lo <= hi and lo <= g.achieved.hi
