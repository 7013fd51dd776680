"""Adaptive Gauss-Kronrod quadrature with endpoint substitutions.

The engine is a global-adaptive G7/K15 scheme: the panel with the worst
error estimate is split until the summed estimate meets the tolerance or
the panel budget runs out.  Integrable endpoint singularities are removed
analytically by the substitution x = a + (b - a) u^2 (and its mirror), so
the engine itself only ever sees smooth integrands.

Complex line integrals run over a polyline in the closed upper half
plane; real singularities on a segment are avoided by semicircular
detours of a configurable radius.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import AccuracyError, DomainError, PathError

__all__ = [
    "EndpointExponents",
    "ComplexPath",
    "integrate_singular",
    "integrate_sqrt_endpoints",
    "integrate_segment",
    "integrate_arc",
    "integrate_path",
]

DEFAULT_TOL = 1e-10
DEFAULT_BUDGET = 2000

# 15-point Kronrod extension of 7-point Gauss (positive abscissae).
_XGK_HALF = np.array([
    0.9914553711208126392068547,
    0.9491079123427585245261897,
    0.8648644233597690727897128,
    0.7415311855993944398638648,
    0.5860872354676911302941448,
    0.4058451513773971669066064,
    0.2077849550078984676006894,
    0.0,
])
_WGK_HALF = np.array([
    0.0229353220105292249637320,
    0.0630920926299785532907007,
    0.1047900103222501838398763,
    0.1406532597155259187451896,
    0.1690047266392679028265834,
    0.1903505780647854099132564,
    0.2044329400752988924141620,
    0.2094821410847278280129992,
])
_WG_HALF = np.array([
    0.1294849661688696932706114,
    0.2797053914892766679014678,
    0.3818300505051189449503698,
    0.4179591836734693877551020,
])

# full symmetric node/weight arrays; Gauss nodes sit at Kronrod odd indices
_NODES = np.concatenate([-_XGK_HALF[:-1], _XGK_HALF[::-1]])
_WK = np.concatenate([_WGK_HALF[:-1], _WGK_HALF[::-1]])
_WG = np.zeros(15)
_WG[1:14:2] = np.concatenate([_WG_HALF[:-1], _WG_HALF[::-1]])

_EPS = np.finfo(float).eps


def _vectorized(f: Callable) -> Callable:
    """Wrap f so it always maps a node array to a value array.

    Tries the vectorized call first; falls back to an elementwise loop
    for integrands written against scalars.
    """
    state = {"scalar": False}

    def call(x: np.ndarray) -> np.ndarray:
        if not state["scalar"]:
            try:
                y = np.asarray(f(x))
                if y.shape == x.shape:
                    return y
            except (TypeError, ValueError):
                pass
            state["scalar"] = True
        return np.asarray([f(v) for v in x])

    return call


def _panel(fv: Callable, a: float, b: float) -> tuple[complex, float]:
    """One G7/K15 panel on [a, b]: (kronrod value, error estimate)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = fv(mid + half * _NODES)
    resk = half * np.sum(_WK * fx)
    resg = half * np.sum(_WG * fx)
    mean = resk / (b - a)
    # |half|: panels may run right-to-left (reversed arcs), but the
    # error magnitudes must stay nonnegative
    resabs = abs(half) * float(np.sum(_WK * np.abs(fx)))
    resasc = abs(half) * float(np.sum(_WK * np.abs(fx - mean)))
    err = abs(resk - resg)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    err = max(err, 50.0 * _EPS * resabs)  # round-off floor
    return complex(resk), err


class _Budget:
    """Shared panel counter across the pieces of one integral."""

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def take(self, n: int = 1) -> bool:
        if self.used + n > self.limit:
            return False
        self.used += n
        return True


def _adaptive(f: Callable, a: float, b: float, tol: float,
              budget: _Budget) -> tuple[complex, float]:
    """Globally adaptive integration of f over the real interval [a, b].

    Returns (value, error_estimate); raises AccuracyError (carrying the
    best estimate) if the budget is exhausted first.
    """
    fv = _vectorized(f)
    budget.take()
    val, err = _panel(fv, a, b)
    # heap of splittable panels, worst error first
    seq = 0
    heap = [(-err, seq, a, b, val, err)]
    total, total_err = val, err
    frozen_err = 0.0
    while total_err > tol and heap:
        _, _, pa, pb, pval, perr = heapq.heappop(heap)
        width = pb - pa
        if width <= 64.0 * math.ulp(max(abs(pa), abs(pb), 1.0)):
            frozen_err += perr  # cannot split further at this precision
            continue
        if not budget.take(2):
            raise AccuracyError(
                f"quadrature budget exhausted (err ~ {total_err:.3e}, tol {tol:.3e})",
                best=total, err_est=total_err)
        pm = 0.5 * (pa + pb)
        v1, e1 = _panel(fv, pa, pm)
        v2, e2 = _panel(fv, pm, pb)
        total += (v1 + v2) - pval
        total_err += (e1 + e2) - perr
        for item in ((pa, pm, v1, e1), (pm, pb, v2, e2)):
            seq += 1
            heapq.heappush(heap, (-item[3], seq, *item))
    if total_err > tol and not heap:
        raise AccuracyError(
            f"quadrature stalled at machine resolution (err ~ {frozen_err:.3e})",
            best=total, err_est=total_err)
    return total, total_err


def _run_pieces(pieces: Sequence[tuple[Callable, float, float]], tol: float,
                budget_limit: int) -> tuple[complex, float]:
    """Integrate a list of (f, a, b) pieces under one budget.

    Tolerance is split evenly.  If a piece fails, its best estimate still
    enters the total and the failure is re-raised with the combined sum.
    """
    budget = _Budget(budget_limit)
    per_tol = tol / len(pieces)
    total = 0.0 + 0.0j
    total_err = 0.0
    failed = None
    for f, a, b in pieces:
        try:
            val, err = _adaptive(f, a, b, per_tol, budget)
        except AccuracyError as exc:
            val = exc.best if exc.best is not None else 0.0
            err = exc.err_est if exc.err_est is not None else math.inf
            failed = exc
        total += val
        total_err += err
    if failed is not None:
        raise AccuracyError(str(failed), best=total, err_est=total_err)
    return total, total_err


def _maybe_real(value: complex) -> float | complex:
    return value.real if value.imag == 0.0 else value


@dataclass(frozen=True)
class EndpointExponents:
    """Powers (p, q) of the weight (x - a)^p (b - x)^q; both must be > -1."""

    p: float
    q: float

    def __post_init__(self) -> None:
        if not (self.p > -1.0 and self.q > -1.0):
            raise DomainError(
                f"endpoint exponents must exceed -1, got ({self.p}, {self.q})")


def integrate_singular(f: Callable, a: float, b: float,
                       exponents: EndpointExponents | tuple[float, float],
                       tol: float = DEFAULT_TOL,
                       budget: int = DEFAULT_BUDGET) -> tuple[float, float]:
    """Integral of f(x) (x-a)^p (b-x)^q over (a, b) for smooth f.

    The weight is folded analytically through the substitutions
    x = a + (b-a) u^2 and x = b - (b-a) v^2, one per half, so the engine
    sees a smooth integrand even for p, q down to -1 (exclusive).
    Returns (value, error_estimate).
    """
    if not a < b:
        raise DomainError(f"need a < b, got a={a!r}, b={b!r}")
    if not isinstance(exponents, EndpointExponents):
        exponents = EndpointExponents(*exponents)
    p, q = exponents.p, exponents.q
    mid = 0.5 * (a + b)
    fv = _vectorized(f)
    hl = mid - a
    hr = b - mid

    def left(u: np.ndarray) -> np.ndarray:
        x = a + hl * u * u
        return 2.0 * hl ** (p + 1.0) * u ** (2.0 * p + 1.0) * fv(x) * (b - x) ** q

    def right(v: np.ndarray) -> np.ndarray:
        x = b - hr * v * v
        return 2.0 * hr ** (q + 1.0) * v ** (2.0 * q + 1.0) * fv(x) * (x - a) ** p

    val, err = _run_pieces([(left, 0.0, 1.0), (right, 0.0, 1.0)], tol, budget)
    return _maybe_real(val), err


def integrate_sqrt_endpoints(f: Callable, a: float, b: float,
                             tol: float = DEFAULT_TOL,
                             left: bool = True, right: bool = True,
                             budget: int = DEFAULT_BUDGET) -> tuple[float | complex, float]:
    """Integral over (a, b) of an f carrying its own endpoint behaviour.

    Unlike integrate_singular the weight stays inside f; the u^2
    substitutions merely regularize inverse-square-root blowup (or a
    square-root derivative kink) at the flagged endpoints.  Returns
    (value, error_estimate).
    """
    if not a < b:
        raise DomainError(f"need a < b, got a={a!r}, b={b!r}")
    fv = _vectorized(f)
    mid = 0.5 * (a + b)
    pieces: list[tuple[Callable, float, float]] = []
    if left:
        hl = mid - a
        pieces.append((lambda u: 2.0 * hl * u * fv(a + hl * u * u), 0.0, 1.0))
    else:
        pieces.append((fv, a, mid))
    if right:
        hr = b - mid
        pieces.append((lambda v: 2.0 * hr * v * fv(b - hr * v * v), 0.0, 1.0))
    else:
        pieces.append((fv, mid, b))
    val, err = _run_pieces(pieces, tol, budget)
    return _maybe_real(val), err


def integrate_segment(f: Callable, z0: complex, z1: complex,
                      tol: float = DEFAULT_TOL,
                      sqrt_start: bool = False, sqrt_end: bool = False,
                      budget: int = DEFAULT_BUDGET) -> complex:
    """Line integral of f along the straight segment from z0 to z1.

    sqrt_start / sqrt_end apply the u^2 endpoint substitution, for
    integrands with inverse-square-root behaviour at a segment end
    (e.g. a branch point sitting exactly on the endpoint).
    """
    z0, z1 = complex(z0), complex(z1)
    dz = z1 - z0
    if dz == 0:
        return 0.0 + 0.0j
    fv = _vectorized(lambda t: f(z0 + t * dz) * dz)
    pieces: list[tuple[Callable, float, float]] = []
    if sqrt_start:
        pieces.append((lambda u: u * fv(0.5 * u * u), 0.0, 1.0))
    else:
        pieces.append((fv, 0.0, 0.5))
    if sqrt_end:
        pieces.append((lambda v: v * fv(1.0 - 0.5 * v * v), 0.0, 1.0))
    else:
        pieces.append((fv, 0.5, 1.0))
    val, _ = _run_pieces(pieces, tol, budget)
    return complex(val)


def integrate_arc(f: Callable, center: complex, radius: float,
                  theta0: float, theta1: float,
                  tol: float = DEFAULT_TOL,
                  budget: int = DEFAULT_BUDGET) -> complex:
    """Integral of f along the circular arc center + radius e^{i theta}."""
    if radius <= 0.0:
        raise DomainError(f"arc radius must be positive, got {radius!r}")
    center = complex(center)

    def g(theta: np.ndarray) -> np.ndarray:
        z = center + radius * np.exp(1j * theta)
        return f(z) * 1j * radius * np.exp(1j * theta)

    val, _ = _run_pieces([(g, theta0, theta1)], tol, budget)
    return complex(val)


@dataclass(frozen=True)
class ComplexPath:
    """A polyline in the closed upper half plane with marked real
    singularities that straight runs along the real axis must detour
    around (counterclockwise semicircles when travelling rightward,
    clockwise when travelling leftward, always through the upper half
    plane)."""

    vertices: tuple[complex, ...]
    singularities: tuple[float, ...] = ()
    detour_radius: float | None = None

    def __post_init__(self) -> None:
        verts = tuple(complex(v) for v in self.vertices)
        if len(verts) < 2:
            raise PathError("a path needs at least two vertices")
        for v in verts:
            if v.imag < 0.0:
                raise PathError(f"vertex {v} lies below the real axis")
        # normalize -0.0 imaginary parts so branch evaluation stays on
        # the upper side of the cuts
        verts = tuple(complex(v.real, 0.0) if v.imag == 0.0 else v for v in verts)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "singularities",
                           tuple(float(s) for s in self.singularities))
        if self.detour_radius is not None and not self.detour_radius > 0.0:
            raise PathError(f"detour radius must be positive, got {self.detour_radius!r}")

    def effective_radius(self) -> float:
        """The detour radius in force: explicit, or min(0.05, half the
        smallest gap between marked singularities)."""
        if self.detour_radius is not None:
            return self.detour_radius
        pts = sorted(self.singularities)
        if len(pts) < 2:
            return 0.05
        gap = min(b - a for a, b in zip(pts, pts[1:]))
        if gap == 0.0:
            raise PathError("duplicate singularities on path")
        return min(0.05, 0.5 * gap)


def _point_segment_distance(z0: complex, z1: complex, w: complex) -> float:
    dz = z1 - z0
    denom = abs(dz) ** 2
    if denom == 0.0:
        return abs(w - z0)
    t = ((w - z0).real * dz.real + (w - z0).imag * dz.imag) / denom
    t = min(1.0, max(0.0, t))
    return abs(z0 + t * dz - w)


def _realize(path: ComplexPath) -> list[tuple]:
    """Expand a ComplexPath into ('seg', z0, z1) and
    ('arc', center, radius, th0, th1) elements."""
    radius = path.effective_radius()
    elems: list[tuple] = []
    for z0, z1 in zip(path.vertices, path.vertices[1:]):
        if z0 == z1:
            continue
        near = [s for s in path.singularities
                if _point_segment_distance(z0, z1, complex(s, 0.0)) < radius]
        if not near:
            elems.append(("seg", z0, z1))
            continue
        if z0.imag != 0.0 or z1.imag != 0.0:
            raise PathError(
                f"segment {z0} -> {z1} passes within {radius} of singularities "
                f"{near} but is not a real-axis run; reroute or shrink the radius")
        x0, x1 = z0.real, z1.real
        sgn = 1.0 if x1 > x0 else -1.0
        lo, hi = min(x0, x1), max(x0, x1)
        inner = sorted((s for s in near if lo < s < hi), reverse=(sgn < 0))
        outer = [s for s in near if not lo < s < hi]
        if outer:
            raise PathError(
                f"singularities {outer} lie within {radius} of an endpoint of "
                f"the real run [{lo}, {hi}]")
        for s_prev, s_next in zip(inner, inner[1:]):
            if abs(s_next - s_prev) < 2.0 * radius:
                raise PathError(
                    f"detour arcs around {s_prev} and {s_next} overlap; "
                    f"shrink detour_radius below {abs(s_next - s_prev) / 2}")
        cur = x0
        for s in inner:
            if abs(s - cur) < radius:
                raise PathError(f"detour around {s} does not fit inside the run")
            elems.append(("seg", complex(cur, 0.0), complex(s - sgn * radius, 0.0)))
            if sgn > 0:
                elems.append(("arc", complex(s, 0.0), radius, math.pi, 0.0))
            else:
                elems.append(("arc", complex(s, 0.0), radius, 0.0, math.pi))
            cur = s + sgn * radius
        elems.append(("seg", complex(cur, 0.0), z1))
    return [e for e in elems if not (e[0] == "seg" and e[1] == e[2])]


def integrate_path(f: Callable, path: ComplexPath,
                   tol: float = DEFAULT_TOL,
                   budget: int = DEFAULT_BUDGET) -> complex:
    """Contour integral of f along the realized path (complex result)."""
    elems = _realize(path)
    if not elems:
        return 0.0 + 0.0j
    per_tol = tol / len(elems)
    per_budget = max(64, budget // len(elems))
    total = 0.0 + 0.0j
    for e in elems:
        if e[0] == "seg":
            total += integrate_segment(f, e[1], e[2], per_tol, budget=per_budget)
        else:
            total += integrate_arc(f, e[1], e[2], e[3], e[4], per_tol,
                                   budget=per_budget)
    return total
