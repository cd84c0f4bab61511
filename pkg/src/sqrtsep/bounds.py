"""Separation bounds certified through lattice minima.

Two checks live here.  The shortest-vector bound on the primal lattice: if
every nonzero vector of the lattice with first row ``N, -N sqrt(a_i)`` is
longer than ``sqrt(n+1)`` in l2, then ``|sum x_i sqrt(a_i)| > 1/N`` for every
nonzero ``x`` in ``{-1, 0, 1}^n``.  And the dual-lattice implication: if
``Q >= (2 n |x|_inf)^(3/2)`` and the l-infinity minimum of the dual lattice is
at least ``Q^-(1 + 1/(3n))``, then ``|E| >= Q^-(n+1)``.

All fractional powers are compared after raising both sides to integer
powers, so hypothesis checks involve no rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .decide import decide_sign
from .errors import DomainError
from .exact import DyadicInterval
from .lattice import L2, LINF, SVPResult, build_dual_basis, build_primal_basis, shortest_vector
from .normalize import NormalizedInstance, SqrtSumInstance

CHENG = "cheng"
THEOREM1 = "theorem1"


@dataclass(frozen=True)
class BoundReport:
    """Outcome of a bound check; advisory only unless ``hypothesis_certified``."""

    kind: str
    Q_or_N: int
    hypothesis_certified: bool
    bound_value: DyadicInterval
    witness: SVPResult | None = None
    precision: int = 64
    hypothesis_i: bool | None = None
    hypothesis_ii: bool | None = None
    conclusion_held: bool | None = None
    probes: tuple[int, ...] = ()


def _reciprocal(m: int, prec: int) -> DyadicInterval:
    return DyadicInterval.from_bounds(Fraction(1, m), Fraction(1, m), prec)


def _bits_for(m: int, prec: int) -> int:
    return prec + m.bit_length()


def cheng_lower_bound(a: Sequence[int], N: int, p: int = 64) -> BoundReport:
    """Certify ``|E| > 1/N`` for all nonzero ``x`` in ``{-1,0,1}^n`` via the primal lattice."""
    a = tuple(a)
    basis = build_primal_basis(a, N, p)
    svp = shortest_vector(basis, L2)
    lo = svp.value.lo
    ok = svp.certified and lo * lo > len(a) + 1
    return BoundReport(CHENG, N, ok, _reciprocal(N, _bits_for(N, p)), svp, p)


def find_best_cheng_N(a: Sequence[int], N_max: int, p: int = 64) -> BoundReport:
    """Smallest certified ``N <= N_max`` (the strongest bound ``1/N``).

    Doubling locates a certified ``N``, bisection then narrows towards the
    smallest one.  Every probe is verified on its own; no monotonicity in
    ``N`` is assumed, the best verified probe wins.
    """
    a = tuple(a)
    probes: list[int] = []
    reports: dict[int, BoundReport] = {}

    def probe(N):
        if N not in reports:
            probes.append(N)
            reports[N] = cheng_lower_bound(a, N, p)
        return reports[N].hypothesis_certified

    lo_fail = 0
    hi_ok = None
    N = 1
    while N <= N_max:
        if probe(N):
            hi_ok = N
            break
        lo_fail = N
        N *= 2
    if hi_ok is None and N_max >= 1 and N_max not in reports:
        if probe(N_max):
            hi_ok = N_max
    if hi_ok is None:
        base = reports.get(1) or cheng_lower_bound(a, 1, p)
        return BoundReport(CHENG, 1, False, base.bound_value, base.witness, p, probes=tuple(probes))
    while hi_ok - lo_fail > 1:
        mid = (lo_fail + hi_ok) // 2
        if probe(mid):
            hi_ok = mid
        else:
            lo_fail = mid
    best = min(n for n, r in reports.items() if r.hypothesis_certified)
    r = reports[best]
    return BoundReport(CHENG, best, True, r.bound_value, r.witness, p, probes=tuple(probes))


def _abs_at_least(inst: NormalizedInstance, sign: int, denom: int) -> bool:
    """Exact test of ``|E| >= 1/denom`` given the sign of ``E``."""
    x = [sign * denom * xi for xi in inst.x] + [-1]
    a = list(inst.a) + [1]
    return decide_sign(SqrtSumInstance(x, a)).sign >= 0


def theorem1_check(inst: NormalizedInstance, Q: int, p: int | None = None) -> BoundReport:
    """Check both lattice hypotheses for ``(inst, Q)`` and, exactly, the conclusion.

    ``conclusion_held`` reports whether ``|E| >= 1/Q^(n+1)`` actually holds,
    decided with exact sign arithmetic whatever the hypotheses say.
    """
    if inst.n == 0:
        raise DomainError("theorem1_check needs a nonempty instance")
    if Q < 1:
        raise DomainError(f"Q must be positive, got {Q}")
    n = inst.n
    xinf = max(abs(v) for v in inst.x)
    if p is None:
        p = 64 + 2 * (n + 1) * Q.bit_length()
    hyp_i = Q * Q >= (2 * n * xinf) ** 3
    witness = None
    hyp_ii = False
    if Q >= 2:
        witness = shortest_vector(build_dual_basis(inst.a, Q, p), LINF)
        lam_lo = witness.value.lo
        # lambda_1 >= Q^-(1 + 1/(3n))  <=>  lambda_1^(3n) * Q^(3n+1) >= 1
        hyp_ii = witness.certified and lam_lo ** (3 * n) * Q ** (3 * n + 1) >= 1
    denom = Q ** (n + 1)
    s = decide_sign(inst).sign
    held = s != 0 and _abs_at_least(inst, s, denom)
    return BoundReport(THEOREM1, Q, hyp_i and hyp_ii, _reciprocal(denom, _bits_for(denom, 64)),
                       witness, p, hyp_i, hyp_ii, held)
