"""Empirical probes of simultaneous approximation to square roots.

For rationally independent ``1, beta_1, ..., beta_n`` only finitely many
``q`` satisfy ``q^(1+delta) * prod dist(q beta_i) < 1`` (the exceptions).  No
bound on the largest exception is known, so this module scans for them,
finds Dirichlet witnesses ``q <= Q^n`` with every ``|q beta_i - p_i| <= 1/Q``,
and turns the largest observed exception into an empirical threshold
``Q0``.  The threshold is conditional on there being no exceptions past the
scanned range.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import BudgetError, DomainError
from .exact import DyadicInterval, dist_to_int, sqrt_enclosure
from .lattice import LINF, build_dual_basis, shortest_vector
from .normalize import squarefree_decompose

EXCEPTION = "exception"
NON_EXCEPTION = "non_exception"
UNDECIDED = "undecided"

START_BITS = 64
MAX_BITS = 1024
SCAN_LIMIT = 10 ** 6


@dataclass(frozen=True)
class ProbeRecord:
    """Certified classification of one ``q``; ``bits`` is the precision that settled it."""

    q: int
    distances: tuple[DyadicInterval, ...]
    product: DyadicInterval
    status: str
    bits: int


@dataclass(frozen=True)
class DirichletWitness:
    q: int
    p_vec: tuple[int, ...]
    max_err: DyadicInterval
    method: str


class Q0Estimate(NamedTuple):
    q_last: int
    estimate: DyadicInterval


def _check_scan_radicands(a: Sequence[int]) -> tuple[int, ...]:
    a = tuple(a)
    if not a:
        raise DomainError("at least one radicand is required")
    if len(set(a)) != len(a) or any(v <= 1 or squarefree_decompose(v)[0] != v for v in a):
        raise DomainError(f"radicands must be distinct squarefree integers > 1, got {a}")
    return a


def _distances(a: Sequence[int], q: int, bits: int) -> tuple[DyadicInterval, ...]:
    w = bits + q.bit_length()
    return tuple(dist_to_int(sqrt_enclosure(ai, w) * q) for ai in a)


def _prod(values: Sequence[DyadicInterval]) -> DyadicInterval:
    out = DyadicInterval(1, 1, 0)
    for v in values:
        out = out * v
    return out


def classify(a: Sequence[int], q: int, delta: Fraction, start: int = START_BITS,
             max_bits: int = MAX_BITS) -> ProbeRecord:
    """Classify one ``q``, refining precision until the status is certified."""
    num, den = delta.numerator, delta.denominator
    qpow = q ** (num + den)
    bits = start
    while True:
        dists = _distances(a, q, bits)
        P = _prod(dists)
        # q^(1+delta) P < 1  <=>  q^(num+den) P^den < 1
        test = (P ** den) * qpow
        product = (DyadicInterval.point(q).pow_fraction(1 + delta, bits + 8) * P).round(bits + 8)
        if test.hi < 1 and product.hi < 1:
            return ProbeRecord(q, dists, product, EXCEPTION, bits)
        if test.lo >= 1 and product.lo >= 1:
            return ProbeRecord(q, dists, product, NON_EXCEPTION, bits)
        if bits >= max_bits:
            return ProbeRecord(q, dists, product, UNDECIDED, bits)
        bits *= 2


def subspace_scan(a: Sequence[int], delta, q_max: int, start: int = START_BITS,
                  max_bits: int = MAX_BITS) -> list[ProbeRecord]:
    """One certified record per ``q`` in ``1..q_max``."""
    a = _check_scan_radicands(a)
    delta = Fraction(delta)
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    if q_max < 1:
        raise DomainError(f"q_max must be at least 1, got {q_max}")
    return [classify(a, q, delta, start, max_bits) for q in range(1, q_max + 1)]


def _witness_from_q(a, q, Q, bits) -> DirichletWitness | None:
    w = bits + q.bit_length()
    p_vec = []
    errs = []
    for ai in a:
        v = sqrt_enclosure(ai, w) * q
        d = dist_to_int(v)
        p_vec.append(round(v.mid))
        errs.append(d)
    worst = errs[0]
    for e in errs[1:]:
        (a0, a1), (b0, b1), ex = worst._aligned(e)
        worst = DyadicInterval(max(a0, b0), max(a1, b1), ex)
    if worst.hi <= Fraction(1, Q):
        return DirichletWitness(q, tuple(p_vec), worst, "")
    return None


def dirichlet_witness(a: Sequence[int], Q: int, scan_limit: int = SCAN_LIMIT,
                      max_bits: int = MAX_BITS) -> DirichletWitness:
    """Certified ``q <= Q^n`` with ``|q sqrt(a_i) - p_i| <= 1/Q`` for every ``i``.

    Scans ``q`` directly when ``Q^n <= scan_limit``; otherwise takes the
    l-infinity shortest vector of the dual lattice, which by Minkowski's
    bound has length at most ``1/Q``.
    """
    a = tuple(a)
    if not a:
        raise DomainError("at least one radicand is required")
    if Q < 2:
        raise DomainError(f"Q must be at least 2, got {Q}")
    n = len(a)
    q_cap = Q ** n
    bits = START_BITS + q_cap.bit_length()
    if q_cap <= scan_limit:
        while bits <= max_bits:
            for q in range(1, q_cap + 1):
                wit = _witness_from_q(a, q, Q, bits)
                if wit is not None:
                    return DirichletWitness(wit.q, wit.p_vec, wit.max_err, "scan")
            bits *= 2
        raise BudgetError(f"no certified witness for Q={Q} up to {max_bits} bits")
    tightest = None
    while bits <= max_bits:
        svp = shortest_vector(build_dual_basis(a, Q, bits), LINF)
        q = svp.vector[0]
        if q < 0:
            q = -q
        if 1 <= q <= q_cap:
            wit = _witness_from_q(a, q, Q, bits)
            if wit is not None:
                return DirichletWitness(wit.q, wit.p_vec, wit.max_err, "lattice")
            tightest = q
        bits *= 2
    raise BudgetError(f"no certified witness for Q={Q}; tightest candidate q={tightest}")


def empirical_Q0(a: Sequence[int], delta, q_max: int, records: Sequence[ProbeRecord] | None = None,
                 start: int = START_BITS, max_bits: int = MAX_BITS) -> Q0Estimate:
    """Largest exceptional (or undecided) ``q`` and the induced threshold.

    An exception at ``q`` can only spoil the dual-lattice minimum for ``Q``
    with ``Q^(1+delta) <= (2 beta + 1) q`` (for any root ``beta``), so the
    estimate is ``((2 min beta + 1) q_last)^(1/(1+delta))``.  A leading
    radicand 1 is dropped first, matching the deletion of its lattice row.
    """
    delta = Fraction(delta)
    a = tuple(v for v in a if v != 1)
    if records is None:
        records = subspace_scan(a, delta, q_max, start, max_bits)
    else:
        _check_scan_radicands(a)
        if q_max < 1:
            raise DomainError(f"q_max must be at least 1, got {q_max}")
    flagged = [r.q for r in records if r.status in (EXCEPTION, UNDECIDED)]
    if not flagged:
        return Q0Estimate(0, DyadicInterval(1, 1, 0))
    q_last = max(flagged)
    prec = 64 + q_last.bit_length()
    base = (sqrt_enclosure(min(a), prec) * 2 + 1) * q_last
    exponent = Fraction(delta.denominator, delta.numerator + delta.denominator)
    return Q0Estimate(q_last, base.pow_fraction(exponent, prec))
