from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from sqrtsep import DyadicInterval, DomainError, PrecisionError, dist_to_int, iroot, isqrt, sqrt_enclosure
from sqrtsep.exact import ceil_log2, eval_sum, format_decimal, working_precision
from sqrtsep.normalize import SqrtSumInstance


@st.composite
def intervals(draw):
    lo = draw(st.integers(-10 ** 9, 10 ** 9))
    return DyadicInterval(lo, lo + draw(st.integers(0, 10 ** 5)), draw(st.integers(-60, 20)))


@st.composite
def interval_and_point(draw):
    iv = draw(intervals())
    t = Fraction(draw(st.integers(0, 1000)), 1000)
    return iv, iv.lo + (iv.hi - iv.lo) * t


def test_isqrt_and_iroot():
    assert isqrt(0) == 0
    assert isqrt(10 ** 40) == 10 ** 20
    assert iroot(10 ** 30 + 1, 3) == 10 ** 10
    assert iroot(2 ** 100 - 1, 5) == 2 ** 20 - 1
    with pytest.raises(DomainError):
        isqrt(-1)


@given(st.integers(1, 10 ** 60), st.integers(1, 7))
def test_iroot_brackets(n, k):
    r = iroot(n, k)
    assert r ** k <= n < (r + 1) ** k


def test_ceil_log2():
    assert [ceil_log2(v) for v in (1, 2, 3, 4, 5, 1024, 1025)] == [0, 1, 2, 2, 3, 10, 11]


def test_sqrt_enclosure_values():
    s = sqrt_enclosure(2, 10)
    assert (s.lo_m, s.hi_m, s.exp) == (1448, 1449, -10)
    assert sqrt_enclosure(9, 30).is_exact()
    assert sqrt_enclosure(9, 30).lo == 3


@given(st.integers(1, 10 ** 12), st.integers(1, 300))
def test_sqrt_enclosure_brackets(a, p):
    s = sqrt_enclosure(a, p)
    assert s.lo >= 0 and s.lo ** 2 <= a <= s.hi ** 2
    assert s.width <= Fraction(1, 2 ** p)


@given(interval_and_point(), interval_and_point())
def test_arithmetic_encloses(u, v):
    (iu, s), (iv, t) = u, v
    assert (iu + iv).contains(s + t)
    assert (iu - iv).contains(s - t)
    assert (iu * iv).contains(s * t)
    assert (iu * 7).contains(7 * s)
    assert (iu * -3).contains(-3 * s)
    if not iv.contains(0):
        assert iu.div(iv, 50).contains(s / t)


@given(interval_and_point(), st.integers(0, 6))
def test_power_encloses(u, k):
    iv, s = u
    assert (iv ** k).contains(s ** k)


@given(interval_and_point(), st.integers(1, 200))
def test_rounding_is_outward(u, prec):
    iv, s = u
    assert iv.round(prec).contains(s)
    # the rounded interval is at least as wide
    assert iv.round(prec).width >= iv.width


def test_exact_point_and_from_bounds():
    assert DyadicInterval.point(Fraction(3, 8)).is_exact()
    with pytest.raises(DomainError):
        DyadicInterval.point(Fraction(1, 3))
    third = DyadicInterval.point(Fraction(1, 3), 20)
    assert third.contains(Fraction(1, 3)) and not third.is_exact()
    with pytest.raises(DomainError):
        DyadicInterval(2, 1, 0)


def test_equality_is_by_value():
    assert DyadicInterval(2, 4, 0) == DyadicInterval(1, 2, 1)
    assert hash(DyadicInterval(2, 4, 0)) == hash(DyadicInterval(1, 2, 1))
    assert DyadicInterval(1, 1, 0) != 1


def test_sign_and_predicates():
    assert DyadicInterval(1, 2, -3).sign() == 1
    assert DyadicInterval(-2, -1, 0).sign() == -1
    assert DyadicInterval(0, 0, 0).sign() == 0
    assert DyadicInterval(-1, 1, 0).sign() is None
    assert DyadicInterval(5, 7, -1).contains_integer()
    assert not DyadicInterval(5, 5, -1).contains_integer()
    with pytest.raises(PrecisionError):
        DyadicInterval(-1, 1, 0).reciprocal(10)


def test_decimal_rendering_is_outward():
    third = DyadicInterval.point(Fraction(1, 3), 80)
    lo, hi = third.decimal_bounds(10)
    assert Fraction(lo) <= Fraction(1, 3) <= Fraction(hi)
    assert format_decimal(Fraction(-1, 3), 3, "down") == "-3.34e-1"
    assert format_decimal(Fraction(0), 3, "up") == "0"
    assert DyadicInterval(3, 5, -2).exact_str() == "[3p-2, 5p-2]"


def test_eval_sum_matches_oracle():
    for x, a in [((1, -1), (2, 3)), ((3, -2), (2, 5)), ((10, -7, -1), (2, 3, 50))]:
        inst = SqrtSumInstance(x, a)
        e = eval_sum(inst, 100)
        assert e.width <= Fraction(1, 2 ** 100)
        lo, hi = oracles.sum_bounds(x, a, 400)
        assert e.lo <= Fraction(hi, 2 ** 400) and Fraction(lo, 2 ** 400) <= e.hi


def test_working_precision_grows_with_terms():
    assert working_precision((1,), (2,), 64) < working_precision((1,) * 16, (2,) * 16, 64)


def test_dist_to_int():
    d = dist_to_int(sqrt_enclosure(2, 64))
    assert Fraction(414213562373095, 10 ** 15) < d.lo <= d.hi < Fraction(414213562373096, 10 ** 15)
    assert dist_to_int(DyadicInterval.point(3)) == DyadicInterval(0, 0)
    assert dist_to_int(DyadicInterval.point(Fraction(5, 2))) == DyadicInterval(1, 1, -1)
    with pytest.raises(PrecisionError):
        dist_to_int(DyadicInterval(0, 1, 0))


@settings(max_examples=200)
@given(st.integers(1, 10 ** 6), st.integers(1, 10 ** 4))
def test_dist_to_int_encloses(a, q):
    v = sqrt_enclosure(a, 80) * q
    d = dist_to_int(v)
    r = oracles.root_floor(a, 200) * q
    frac = Fraction(r, 2 ** 200)
    true = abs(frac - round(frac))
    assert d.lo - Fraction(q, 2 ** 199) <= true <= d.hi + Fraction(q, 2 ** 199)
