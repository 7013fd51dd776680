"""Conformal modulus of the four-branch-point configuration.

For k > 1 the branch points -k, -1, 1, k cut out a ring domain whose
modulus is expressible through complete elliptic integrals; the same
quantity is also a ratio of two period integrals, kept here as an
independent cross-check.  The modulus is strictly increasing in k and
maps (1, inf) onto (0, inf), so inversion is a plain bisection.
"""
from __future__ import annotations

import math

from .elliptic import ellip_K
from .errors import AccuracyError, DomainError
from .quadrature import integrate_singular

__all__ = ["modulus_of_k", "modulus_oracle", "k_of_modulus"]


def _check_k(k: float) -> float:
    k = float(k)
    if not k > 1.0:
        raise DomainError(f"need k > 1, got {k!r}")
    return k


def modulus_of_k(k: float) -> float:
    """Conformal modulus as K(sqrt(1 - 1/k^2)) / (2 K(1/k))."""
    k = _check_k(k)
    kappa = 1.0 / k
    comp = math.sqrt((k - 1.0) * (k + 1.0)) / k
    return ellip_K(comp) / (2.0 * ellip_K(kappa))


def modulus_oracle(k: float, tol: float = 1e-10) -> float:
    """Modulus as the period ratio H / W computed by direct quadrature.

    W = 2 int_0^1 dt / sqrt((1 - t^2)(k^2 - t^2)),
    H =   int_1^k dt / sqrt((t^2 - 1)(k^2 - t^2)).
    Slower than the closed form; used to validate it.
    """
    k = _check_k(k)

    def fw(t):
        return 1.0 / math.sqrt((1.0 + t) * (k * k - t * t))

    def fh(t):
        return 1.0 / math.sqrt((t + 1.0) * (t + k))

    w_val, _ = integrate_singular(fw, 0.0, 1.0, (0.0, -0.5), tol=tol)
    h_val, _ = integrate_singular(fh, 1.0, k, (-0.5, -0.5), tol=tol)
    return h_val / (2.0 * w_val)


def k_of_modulus(target: float, tol: float = 1e-12) -> float:
    """Inverse of modulus_of_k by bisection.

    Mathematically any target in (0, inf) is attainable, but in double
    precision k cannot sit closer to 1 than one ulp, which floors the
    reachable moduli near 0.041; targets below that raise AccuracyError.
    """
    target = float(target)
    if not target > 0.0:
        raise DomainError(f"modulus must be positive, got {target!r}")
    lo = 1.0 + 1e-15
    hi = 2.0
    while modulus_of_k(hi) < target:
        hi *= 4.0
        if hi > 1e300:  # unreachable for any float target
            raise AccuracyError(f"modulus target {target} out of float range")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if modulus_of_k(mid) < target:
            lo = mid
        else:
            hi = mid
        if abs(modulus_of_k(0.5 * (lo + hi)) - target) <= tol:
            break
    k = 0.5 * (lo + hi)
    if abs(modulus_of_k(k) - target) > max(tol, 1e-9):
        raise AccuracyError(
            f"k_of_modulus({target}) unattainable in double precision "
            f"(nearest modulus {modulus_of_k(k)})",
            best=k, err_est=abs(modulus_of_k(k) - target))
    return k
