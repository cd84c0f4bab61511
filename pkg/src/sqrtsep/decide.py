"""Exact sign decision for sums of square roots.

Zero is decided symbolically through normalization.  A nonzero sum is
evaluated at doubling precision until its enclosure excludes zero; the
conjugate-product separation bound ``(n max|x_i| sqrt(a_i)) ** -(2**n - 1)``
caps the precision needed, so the loop provably terminates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, InvariantError
from .exact import DyadicInterval, ceil_log2, eval_sum, sqrt_enclosure
from .normalize import NormalizedInstance, SqrtSumInstance, normalize

START_PRECISION = 64


@dataclass(frozen=True)
class SignCertificate:
    """Replayable record of a sign decision.

    ``separation_bound`` and ``final_enclosure`` are None for a symbolic zero,
    in which case ``bits_used`` is 0.
    """

    sign: int
    bits_used: int
    separation_bound: DyadicInterval | None
    final_enclosure: DyadicInterval | None
    normalized: NormalizedInstance


def _max_term(inst: NormalizedInstance, prec: int) -> DyadicInterval:
    """Enclosure of ``n * max_i |x_i| sqrt(a_i)`` at exponent ``-prec``."""
    lo = hi = 0
    for xi, ai in zip(inst.x, inst.a):
        s = sqrt_enclosure(ai, prec).at_exp(-prec)
        m = abs(xi)
        lo = max(lo, m * s.lo_m)
        hi = max(hi, m * s.hi_m)
    return DyadicInterval(inst.n * lo, inst.n * hi, -prec)


def burnikel_bound(inst: NormalizedInstance, prec: int = 64) -> DyadicInterval:
    """Enclosure of ``(n max_i |x_i| sqrt(a_i)) ** -(2**n - 1)``.

    The lower endpoint is a valid lower bound on ``|E|`` whenever ``E != 0``.
    """
    if inst.n == 0:
        raise DomainError("separation bound of the empty instance is undefined")
    k = (1 << inst.n) - 1
    m = _max_term(inst, prec)
    # value of 1/M^k is 2^(prec*k) / mantissa^k; keep prec significant bits
    bits = prec + max(k * m.hi_m.bit_length() - prec * k, 0)
    shift = bits + prec * k
    den_hi = m.hi_m ** k
    den_lo = m.lo_m ** k
    lo = (1 << shift) // den_hi
    hi = -((-(1 << shift)) // den_lo)
    return DyadicInterval(lo, hi, -bits)


def precision_cap(bound: DyadicInterval) -> int:
    """Smallest ``p >= 0`` with ``2**-p`` strictly below the bound's lower endpoint."""
    m, e = bound.lo_m, bound.exp
    if m <= 0:
        raise DomainError("separation bound must have a positive lower endpoint")
    f = m.bit_length() - 1
    # need 2^(-p) < m 2^e, i.e. -p - e < log2(m)
    p = -e - f + (1 if m == 1 << f else 0)
    return max(p, 0)


def decide_sign(inst: SqrtSumInstance | NormalizedInstance, start: int = START_PRECISION) -> SignCertificate:
    """Exact sign of ``E`` with a certificate."""
    norm = normalize(inst)
    if norm.is_empty():
        return SignCertificate(0, 0, None, None, norm)
    bound = burnikel_bound(norm)
    cap = precision_cap(bound)
    p = start
    while True:
        enc = eval_sum(norm, p)
        s = enc.sign()
        if s in (1, -1):
            return SignCertificate(s, p, bound, enc, norm)
        if p >= cap:
            raise InvariantError(
                f"enclosure of width <= 2^-{p} still contains zero below the separation bound")
        p *= 2
