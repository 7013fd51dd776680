"""Critical constants of the quadrilateral family.

The dividing value k_crit between the two solution families comes from
the condition K(kappa') = 2 E(kappa') on the complementary modulus; the
same modulus generates the one-ninth constant Lambda and its companion
b1.  Everything downstream (family selection, sweep layout, forbidden
zones in the CLI) keys off the record computed here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .elliptic import ellip_E, ellip_K
from .errors import DomainError
from .modulus import modulus_of_k

__all__ = [
    "CriticalConstants",
    "critical_constants",
    "kappa_prime_crit",
    "derive_k_crit",
    "one_ninth_lambda",
    "b1",
    "halphen_series",
    "halphen_series_alternating",
]


@dataclass(frozen=True)
class CriticalConstants:
    """Frozen record of the family-splitting constants.

    kappa_prime_crit solves K = 2E; kappa_crit is its complement;
    k_crit = (1 + kappa_crit)/(1 - kappa_crit); K_crit is the conformal
    modulus at k_crit; lambda_ is the one-ninth constant and b1 the
    period ratio K(kappa'_crit)/K(kappa_crit).
    """

    kappa_prime_crit: float
    kappa_crit: float
    k_crit: float
    K_crit: float
    lambda_: float
    b1: float


def _k_minus_2e(x: float) -> float:
    return ellip_K(x) - 2.0 * ellip_E(x)


def kappa_prime_crit(tol: float = 1e-12) -> float:
    """Unique root of K(x) - 2E(x) on (0, 1), by bisection.

    K - 2E is strictly increasing (K' > 0, E' < 0), negative at 0.5 and
    positive at 0.99, so the bracket below always contains the root.
    """
    lo, hi = 0.1, 0.999
    if not (_k_minus_2e(lo) < 0.0 < _k_minus_2e(hi)):
        raise DomainError("bisection bracket for K = 2E lost its sign change")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _k_minus_2e(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def derive_k_crit(tol: float = 1e-12) -> float:
    """Critical corner parameter from kappa'_crit via k = (1+kappa)/(1-kappa)."""
    kp = kappa_prime_crit(tol)
    kappa = math.sqrt((1.0 - kp) * (1.0 + kp))
    return (1.0 + kappa) / (1.0 - kappa)


def one_ninth_lambda(tol: float = 1e-12) -> float:
    """The one-ninth constant exp(-pi K(kappa_crit)/K(kappa'_crit))."""
    kp = kappa_prime_crit(tol)
    kappa = math.sqrt((1.0 - kp) * (1.0 + kp))
    return math.exp(-math.pi * ellip_K(kappa) / ellip_K(kp))


def b1(tol: float = 1e-12) -> float:
    """Companion period ratio K(kappa'_crit)/K(kappa_crit)."""
    kp = kappa_prime_crit(tol)
    kappa = math.sqrt((1.0 - kp) * (1.0 + kp))
    return ellip_K(kp) / ellip_K(kappa)


@lru_cache(maxsize=1)
def critical_constants() -> CriticalConstants:
    """All critical constants in one immutable, cached record."""
    kp = kappa_prime_crit()
    kappa = math.sqrt((1.0 - kp) * (1.0 + kp))
    k_crit = (1.0 + kappa) / (1.0 - kappa)
    return CriticalConstants(
        kappa_prime_crit=kp,
        kappa_crit=kappa,
        k_crit=k_crit,
        K_crit=modulus_of_k(k_crit),
        lambda_=math.exp(-math.pi * ellip_K(kappa) / ellip_K(kp)),
        b1=ellip_K(kp) / ellip_K(kappa),
    )


def _check_series_args(x: float, terms: int) -> None:
    if not 0.0 < x < 1.0:
        raise DomainError(f"series argument must lie in (0, 1), got {x!r}")
    if terms < 1:
        raise DomainError(f"need at least one term, got {terms!r}")


def halphen_series(x: float, terms: int) -> float:
    """Partial sum of sum_n (2n+1)^2 (-x)^(n(n+1)).

    The exponent n(n+1) is always even, so every term is positive and
    the sum cannot vanish on (0, 1); this is an exploratory evaluator,
    not a root-finding target.
    """
    _check_series_args(x, terms)
    total = 0.0
    for n in range(terms):
        total += (2 * n + 1) ** 2 * (-x) ** (n * (n + 1))
    return total


def halphen_series_alternating(x: float, terms: int) -> float:
    """Partial sum of the variant sum_n (-1)^n (2n+1)^2 x^(n(n+1))."""
    _check_series_args(x, terms)
    total = 0.0
    for n in range(terms):
        total += (-1) ** n * (2 * n + 1) ** 2 * x ** (n * (n + 1))
    return total
