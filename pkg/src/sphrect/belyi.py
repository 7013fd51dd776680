"""Dihedral invariants and the three algebraic developing-map examples.

The examples are rational Belyi functions of degrees 4, 6, 6 whose
coefficients live in Q(2^(1/3), sqrt(8*2^(2/3)+10*2^(1/3)+13)) or
Q(sqrt(3)).  They are carried as 40-digit floats with provenance
strings; verification computes every critical point, asserts the
critical values are in {0, 1, inf}, and assembles the full ramification
portrait from the three special fibers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np

from .errors import BelyiViolationError, DomainError

__all__ = [
    "RationalMap",
    "PortraitPoint",
    "RamificationPortrait",
    "ExampleReport",
    "dihedral_invariant",
    "example_map",
    "verify_belyi",
    "example_consistency",
]

DPS = 40


# ---------------------------------------------------------------- polynomials
# coefficients descending, entries mpf/mpc

def _trim(p: list) -> list:
    if not p:
        return [mp.mpf(0)]
    top = max(abs(c) for c in p)
    if top == 0:
        return [mp.mpf(0)]
    i = 0
    while i < len(p) - 1 and abs(p[i]) <= 1e-35 * top:
        i += 1
    return p[i:]


def _polymul(p: list, q: list) -> list:
    out = [mp.mpf(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _polysub(p: list, q: list) -> list:
    n = max(len(p), len(q))
    pp = [mp.mpf(0)] * (n - len(p)) + list(p)
    qq = [mp.mpf(0)] * (n - len(q)) + list(q)
    return [a - b for a, b in zip(pp, qq)]


def _polyder(p: list) -> list:
    n = len(p) - 1
    if n == 0:
        return [mp.mpf(0)]
    return [c * (n - i) for i, c in enumerate(p[:-1])]


def _polyval(p: list, z):
    acc = mp.mpf(0)
    for c in p:
        acc = acc * z + c
    return acc


def _from_roots(roots: list) -> list:
    p = [mp.mpf(1)]
    for r in roots:
        p = _polymul(p, [mp.mpf(1), -r])
    return p


def _resultant(p: list, q: list):
    """Sylvester-matrix resultant of two polynomials."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    mat = mp.zeros(size, size)
    for row in range(n):
        for j, c in enumerate(p):
            mat[row, row + j] = c
    for row in range(m):
        for j, c in enumerate(q):
            mat[n + row, row + j] = c
    return mp.det(mat)


# ---------------------------------------------------------------- public types

@dataclass(frozen=True)
class RationalMap:
    """Rational function num/den with high-precision coefficients.

    Coefficients are descending-order mpmath reals; provenance records
    the exact radical expressions they were built from.
    """

    num: tuple
    den: tuple
    degree: int
    provenance: str
    label: str
    variant: str = "standard"

    def __post_init__(self) -> None:
        if abs(self.num[0]) == 0 or abs(self.den[0]) == 0:
            raise DomainError("leading coefficients must be nonzero")
        want = max(len(self.num), len(self.den)) - 1
        if self.degree != want:
            raise DomainError(f"degree {self.degree} != max(deg num, deg den) = {want}")
        with mp.workdps(DPS):
            pn = [c / max(abs(x) for x in self.num) for c in self.num]
            pd = [c / max(abs(x) for x in self.den) for c in self.den]
            res = _resultant(pn, pd)
            if abs(res) <= 1e-12:
                raise DomainError(
                    f"numerator and denominator share a factor (resultant {res})")

    def __call__(self, z):
        with mp.workdps(DPS):
            return _polyval(list(self.num), z) / _polyval(list(self.den), z)


@dataclass(frozen=True)
class PortraitPoint:
    """One point of a ramification portrait; point None means infinity."""

    point: complex | None
    local_degree: int
    critical_value: float  # 0.0, 1.0, or math.inf

    def __post_init__(self) -> None:
        if self.local_degree < 1:
            raise DomainError("local degree must be positive")
        if self.critical_value not in (0.0, 1.0, math.inf):
            raise DomainError(f"critical value must be 0, 1 or inf, "
                              f"got {self.critical_value!r}")


@dataclass(frozen=True)
class RamificationPortrait:
    """All points of the fibers over 0, 1, infinity with local degrees."""

    degree: int
    points: tuple[PortraitPoint, ...]

    def __post_init__(self) -> None:
        rh = sum(p.local_degree - 1 for p in self.points)
        if rh != 2 * self.degree - 2:
            raise BelyiViolationError(
                f"Riemann-Hurwitz sum {rh} != 2*{self.degree} - 2")
        for v in (0.0, 1.0, math.inf):
            total = sum(p.local_degree for p in self.points
                        if p.critical_value == v)
            if total != self.degree:
                raise BelyiViolationError(
                    f"fiber over {v} has total degree {total} != {self.degree}")

    def fiber(self, value: float) -> tuple[PortraitPoint, ...]:
        return tuple(p for p in self.points if p.critical_value == value)

    def critical_points(self) -> tuple[PortraitPoint, ...]:
        return tuple(p for p in self.points if p.local_degree >= 2)


@dataclass(frozen=True)
class ExampleReport:
    """Consistency of one algebraic example with the numeric solver."""

    example: int
    stated_modulus: float
    k: float
    c: float
    alpha: float
    orbit_value: float
    expected_alpha: float
    expected_orbit: float
    orbit_error: float


# ---------------------------------------------------------------- operations

def dihedral_invariant(q: int, z: complex) -> complex:
    """Fundamental dihedral invariant -(1/4)(z^q + z^{-q} - 2).

    Real on the real line, the unit circle, and the line at angle pi/q;
    vanishes exactly at z = 1.
    """
    if not (isinstance(q, int) and q >= 1):
        raise DomainError(f"q must be a positive integer, got {q!r}")
    z = complex(z)
    if z == 0:
        raise DomainError("z = 0 is a pole of the invariant")
    zq = z ** q
    return -0.25 * (zq + 1.0 / zq - 2.0)


def _example1() -> RationalMap:
    with mp.workdps(DPS):
        num = [-c for c in _from_roots([mp.mpf(-2), mp.mpf(2), mp.mpf(2), mp.mpf(2)])]
        quad = [mp.mpf(1), mp.mpf(2), mp.mpf(-2)]
        den = [3 * c for c in _polymul(quad, quad)]
    return RationalMap(
        num=tuple(num), den=tuple(den), degree=4,
        provenance="h(z) = -(z+2)(z-2)^3 / (3 (z^2+2z-2)^2), integer coefficients",
        label="example-1 (alpha = 1/2, q = 2)")


def _example2(variant: str) -> RationalMap:
    with mp.workdps(DPS):
        eps = mp.mpf(2) ** (mp.mpf(1) / 3)
        a = mp.mpf(5) / 4 * eps ** 2 + mp.mpf(3) / 2 * eps + 3
        x = -mp.mpf(1) / 10 * eps ** 2 - mp.mpf(3) / 10 * eps + mp.mpf(3) / 5
        disc = 8 * eps ** 2 + 10 * eps + 13
        half_trace = (eps ** 2 + eps + 3) / 2
        y = half_trace - mp.sqrt(disc) / 2
        if variant == "corrected":
            t = half_trace + mp.sqrt(disc) / 2
        elif variant == "printed":
            t = half_trace + mp.sqrt(disc)
        else:
            raise DomainError(f"variant must be 'corrected' or 'printed', got {variant!r}")
        s = mp.mpf(33) / 4 * eps ** 2 + mp.mpf(21) / 2 * eps + 13
        num = [s * c for c in _from_roots([x, x, a])]
        den = _from_roots([y, y, y, t, t, t])
    return RationalMap(
        num=tuple(num), den=tuple(den), degree=6,
        provenance=(
            "h(z) = s (z-x)^2 (z-a) / ((z-y)^3 (z-t)^3) with eps = 2^(1/3), "
            "a = 5/4 eps^2 + 3/2 eps + 3, x = -1/10 eps^2 - 3/10 eps + 3/5, "
            "s = 33/4 eps^2 + 21/2 eps + 13, y = (eps^2+eps+3)/2 - sqrt(8 eps^2 + "
            "10 eps + 13)/2, t = (eps^2+eps+3)/2 "
            + ("+ sqrt(8 eps^2 + 10 eps + 13)/2 (corrected root pairing)"
               if variant == "corrected" else
               "+ sqrt(8 eps^2 + 10 eps + 13) (printed form; fails h(0)=1)")),
        label="example-2 (alpha = 1/3, q = 3)", variant=variant)


def _example3() -> RationalMap:
    with mp.workdps(DPS):
        s3 = mp.sqrt(3)
        lead = 64 * (135 + 78 * s3)
        num = [lead * c for c in _from_roots([mp.mpf(1)] * 3)]
        den = [27 * c for c in _from_roots([4 + 2 * s3] * 3 + [-2 * s3 / 3] * 3)]
    return RationalMap(
        num=tuple(num), den=tuple(den), degree=6,
        provenance=("h(z) = 64 (135 + 78 sqrt(3)) (z-1)^3 / "
                    "((z - 4 - 2 sqrt(3))^3 (3 z + 2 sqrt(3))^3)"),
        label="example-3 (alpha = 2/3, q = 3)")


@lru_cache(maxsize=8)
def example_map(n: int, variant: str = "corrected") -> RationalMap:
    """Algebraic example n in {1, 2, 3}.

    Example 2 exists in two variants: 'corrected' (ships by default;
    satisfies all six defining conditions to working precision) and
    'printed' (the t-coefficient as printed, which measurably violates
    h(0) = 1 and is kept for comparison).
    """
    if n == 1:
        return _example1()
    if n == 2:
        return _example2(variant)
    if n == 3:
        return _example3()
    raise DomainError(f"example index must be 1, 2 or 3, got {n!r}")


def _cluster(seeds: np.ndarray, radius: float = 1e-4) -> list[tuple[complex, int]]:
    """Greedy clustering of root seeds; returns (centroid, multiplicity).

    The radius is relative to the cluster's own scale: a multiple root
    at |z| ~ s splits under coefficient rounding by ~ s * eps^(1/m),
    so an absolute radius would undercount large roots.
    """
    remaining = list(seeds)
    clusters = []
    while remaining:
        z0 = remaining.pop()
        group = [z0]
        changed = True
        while changed:
            changed = False
            for w in remaining[:]:
                if any(abs(w - g) <= radius * max(1.0, abs(g)) for g in group):
                    group.append(w)
                    remaining.remove(w)
                    changed = True
        clusters.append((sum(group) / len(group), len(group)))
    return clusters


def _refine_root(poly: list, seed: complex, multiplicity: int):
    """Newton-polish a root of poly with known multiplicity.

    Applies Newton to the (m-1)-th derivative, where the root is simple.
    """
    target = list(poly)
    for _ in range(multiplicity - 1):
        target = _polyder(target)
    dtarget = _polyder(target)
    z = mp.mpc(seed)
    for _ in range(100):
        fz = _polyval(target, z)
        dz = _polyval(dtarget, z)
        if abs(dz) == 0:
            break
        step = fz / dz
        z -= step
        if abs(step) < mp.mpf(10) ** (-DPS + 5):
            break
    return z


def _roots_with_multiplicity(poly: list) -> list[tuple[mp.mpc, int]]:
    """All roots of an mp-coefficient polynomial with multiplicities.

    Double-precision companion-matrix eigenvalues seed the clusters;
    each cluster is polished in extended precision.
    """
    poly = _trim(poly)
    if len(poly) == 1:
        return []
    seeds = np.roots(np.array([complex(c) for c in poly], dtype=complex))
    polished = [(_refine_root(poly, centroid, m), m)
                for centroid, m in _cluster(seeds)]
    # a cluster that was split by seed noise polishes its parts onto the
    # same point (plain Newton near a multiple root stalls within
    # ~1e-12 of it); merge such coincidences and re-polish with the
    # multiplicity they jointly witness
    merged: list[tuple[mp.mpc, int]] = []
    for root, mult in polished:
        for i, (r0, m0) in enumerate(merged):
            if abs(root - r0) < 1e-6 * max(1.0, abs(r0)):
                merged[i] = (r0, m0 + mult)
                break
        else:
            merged.append((root, mult))
    return [(_refine_root(poly, root, mult), mult) for root, mult in merged]


def verify_belyi(rmap: RationalMap, tol: float = 1e-10) -> RamificationPortrait:
    """Check ramification only over {0, 1, inf} and build the portrait.

    Every root of W = num' den - num den' is a critical point (for
    poles of local degree e, W vanishes to order e - 1 as well, so the
    multiplicity m always means local degree m + 1).  The portrait
    itself is assembled from the three fiber polynomials so that
    regular fiber points appear too.
    """
    with mp.workdps(DPS):
        num, den = list(rmap.num), list(rmap.den)
        wronsk = _trim(_polysub(_polymul(_polyder(num), den),
                                _polymul(num, _polyder(den))))
        crit = _roots_with_multiplicity(wronsk)
        for root, mult in crit:
            nv = _polyval(num, root)
            dv = _polyval(den, root)
            d0 = abs(nv) / abs(dv) if abs(dv) != 0 else math.inf
            dinf = abs(dv) / abs(nv) if abs(nv) != 0 else math.inf
            d1 = abs(nv - dv) / abs(dv) if abs(dv) != 0 else math.inf
            if min(d0, d1, dinf) > tol:
                raise BelyiViolationError(
                    f"critical point {complex(root)} of {rmap.label} "
                    f"({rmap.variant}) has critical value {complex(nv / dv)} "
                    f"not in {{0, 1, inf}} (tol {tol})")

        dn, dd = len(num) - 1, len(den) - 1
        entries: list[PortraitPoint] = []
        fibers = [(num, 0.0), (_trim(_polysub(num, den)), 1.0), (den, math.inf)]
        for poly, value in fibers:
            for root, mult in _roots_with_multiplicity(poly):
                entries.append(PortraitPoint(point=complex(root),
                                             local_degree=mult,
                                             critical_value=value))
        if dn < dd:
            entries.append(PortraitPoint(point=None, local_degree=dd - dn,
                                         critical_value=0.0))
        elif dn > dd:
            entries.append(PortraitPoint(point=None, local_degree=dn - dd,
                                         critical_value=math.inf))
        else:
            lam = num[0] / den[0]
            if abs(lam - 1) <= math.sqrt(tol):
                diff = _trim(_polysub(num, den))
                entries.append(PortraitPoint(point=None,
                                             local_degree=dd - (len(diff) - 1),
                                             critical_value=1.0))
        # cross-check: every W-root matches some fiber point with the
        # local degree its W-multiplicity promises
        for root, mult in crit:
            match = [p for p in entries if p.point is not None
                     and abs(p.point - complex(root)) < 1e-6]
            if len(match) != 1 or match[0].local_degree != mult + 1:
                raise BelyiViolationError(
                    f"critical point {complex(root)} (W-multiplicity {mult}) "
                    f"does not match the fiber structure {match}")
    return RamificationPortrait(degree=rmap.degree, points=tuple(entries))


def _deflate(poly: list, root) -> list:
    """Synthetic division of a descending-coefficient poly by (z - root)."""
    out = [poly[0]]
    for c in poly[1:-1]:
        out.append(c + out[-1] * root)
    return out


def example2_conditions(variant: str = "corrected") -> dict[str, float]:
    """Residuals of the defining conditions of the degree-6 example.

    Reports |h(0)-1|, |h(1)-1|, |h(w)-1|, |h'(1)|, |h''(1)|, |h'(w)|
    where w is the double point over 1 of the corrected map.  The
    printed variant is evaluated at the same test points, which is what
    exposes its failure.
    """
    rmap = example_map(2, variant)
    ref = example_map(2, "corrected")
    with mp.workdps(DPS):
        # num - den of the genuine map factors as s (z-1)^3 z (z-w)^2;
        # deflating the known roots leaves a quadratic with double root w
        diff = _trim(_polysub(list(ref.num), list(ref.den)))
        for _ in range(3):
            diff = _deflate(diff, mp.mpf(1))
        quad = _deflate(diff, mp.mpf(0))
        w = -quad[1] / (2 * quad[0])

        num, den = list(rmap.num), list(rmap.den)
        wronsk = _trim(_polysub(_polymul(_polyder(num), den),
                                _polymul(num, _polyder(den))))
        # h'' = (W' den - 2 W den') / den^3
        curv = _polysub(_polymul(_polyder(wronsk), den),
                        [2 * c for c in _polymul(wronsk, _polyder(den))])

        def h(z):
            return _polyval(num, z) / _polyval(den, z)

        def dh(z):
            return _polyval(wronsk, z) / _polyval(den, z) ** 2

        def d2h(z):
            return _polyval(curv, z) / _polyval(den, z) ** 3

        out = {
            "w": float(w),
            "h_at_0_minus_1": float(abs(h(mp.mpf(0)) - 1)),
            "h_at_1_minus_1": float(abs(h(mp.mpf(1)) - 1)),
            "h_at_w_minus_1": float(abs(h(w) - 1)),
            "dh_at_1": float(abs(dh(mp.mpf(1)))),
            "d2h_at_1": float(abs(d2h(mp.mpf(1)))),
            "dh_at_w": float(abs(dh(w))),
        }
    return out


_EXAMPLE_DATA = {1: (0.63963, 0.5), 2: (0.67957, 1.0 / 3.0), 3: (0.57735, 2.0 / 3.0)}


def example_consistency(n: int) -> ExampleReport:
    """Numeric solver run at the example's stated modulus.

    Recovers k from the printed 5-digit modulus, solves the accessory
    problem there, and compares the angle orbit min{alpha, 1 - alpha}
    with the example's alpha.
    """
    if n not in _EXAMPLE_DATA:
        raise DomainError(f"example index must be 1, 2 or 3, got {n!r}")
    from .accessory import solve_family1
    from .modulus import k_of_modulus
    stated_k, expected_alpha = _EXAMPLE_DATA[n]
    k = k_of_modulus(stated_k)
    sol = solve_family1(k)
    orbit = min(sol.alpha, 1.0 - sol.alpha)
    expected_orbit = min(expected_alpha, 1.0 - expected_alpha)
    return ExampleReport(
        example=n, stated_modulus=stated_k, k=k, c=sol.c, alpha=sol.alpha,
        orbit_value=orbit, expected_alpha=expected_alpha,
        expected_orbit=expected_orbit,
        orbit_error=abs(orbit - expected_orbit))
