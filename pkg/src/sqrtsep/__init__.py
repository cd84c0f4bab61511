"""Certified arithmetic and lattice tools for sums of square roots."""

from .errors import (
    BudgetError,
    DimensionError,
    DomainError,
    InvariantError,
    PrecisionError,
    ResourceError,
    SqrtSepError,
    UnfactoredRadicandError,
)
from .exact import DyadicInterval, dist_to_int, eval_sum, iroot, isqrt, sqrt_enclosure
from .normalize import (
    NormalizedInstance,
    SqrtSumInstance,
    is_zero,
    normalize,
    squarefree_decompose,
    to_problem33_format,
)
from .decide import SignCertificate, burnikel_bound, decide_sign

__version__ = "0.1.0"
