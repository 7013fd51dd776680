"""Accessory-parameter machinery: weights, functionals, both solvers."""
import math

import pytest

from sphrect import (AccessorySolution, Family, QuadParam, amp_A, bethe_h,
                     bigF, family2_integral, g_weight, modulus_of_k,
                     solve_family1, solve_family2)
from sphrect.accessory import _scan_bracket
from sphrect.errors import BracketError, DomainError


def test_bethe_h_values():
    assert bethe_h(2.0, 0.0) == 1.0
    assert bethe_h(2.0, 0.5) == pytest.approx(1.8, abs=1e-15)
    # pairing partner of c = 0.5 is -k/c = -4
    assert bethe_h(2.0, -4.0) == pytest.approx(1.8, abs=1e-15)
    with pytest.raises(DomainError):
        bethe_h(2.0, 1.0)
    with pytest.raises(DomainError):
        bethe_h(2.0, -2.0)


def test_g_weight_values():
    assert g_weight(2.0, 0.5, 0.5) == pytest.approx(1.0, abs=1e-14)
    assert g_weight(2.0, 0.5, 0.0) == pytest.approx(
        1.125 * math.sqrt(2.5 / 4.5), abs=1e-15)
    assert g_weight(2.0, 0.5, 0.0) == pytest.approx(0.8385254915624212, abs=1e-14)
    assert g_weight(2.0, 0.5, -1.0) == 0.0


def test_g_weight_normalization(rng):
    for _ in range(25):
        k = float(rng.uniform(1.05, 10.0))
        c = float(rng.uniform(0.05, 0.95))
        assert g_weight(k, c, c) == pytest.approx(1.0, abs=1e-12)


def test_g_weight_domain():
    with pytest.raises(DomainError):
        g_weight(2.0, 0.5, 1.0)
    with pytest.raises(DomainError):
        g_weight(2.0, 1.5, 0.0)
    with pytest.raises(DomainError):
        g_weight(0.9, 0.5, 0.0)
    with pytest.raises(DomainError):
        g_weight(2.0, 0.5, 1.2)


def test_bigF_frozen_values():
    assert bigF(2.0, 0.05) == pytest.approx(1.5232721775746416, abs=1e-9)
    assert bigF(2.0, 0.5) == pytest.approx(0.3844126108001811, abs=1e-9)
    assert bigF(2.0, 0.95) == pytest.approx(-0.1310219316233705, abs=1e-9)


def test_bigF_sign_change():
    assert bigF(2.0, 0.05) > 0.0 > bigF(2.0, 0.95)


def test_bigF_exact_root():
    # the k = 2 accessory parameter is sqrt(3) - 1; F vanishes there
    assert abs(bigF(2.0, math.sqrt(3.0) - 1.0)) < 1e-10


def test_bigF_endpoint_behaviour():
    # c -> 1-: decays to zero from below like a square root, no blowup
    assert -1e-3 < bigF(2.0, 1.0 - 1e-6) < 0.0
    # c -> 0+: finite positive limit
    assert bigF(2.0, 1e-6) > 1.5


def test_bigF_domain():
    with pytest.raises(DomainError):
        bigF(2.0, 0.0)
    with pytest.raises(DomainError):
        bigF(2.0, 1.0)
    with pytest.raises(DomainError):
        bigF(1.0, 0.5)


def test_amp_A_values():
    assert amp_A(2.0, 0.5) == pytest.approx(4.5 * math.sqrt(1.25 / 2.25), abs=1e-15)
    assert amp_A(2.0, 0.5) == pytest.approx(3.3541019662496847, abs=1e-14)
    assert amp_A(2.0, 0.9) > 0.0
    assert amp_A(2.0, 0.99) > 0.0
    with pytest.raises(DomainError):
        amp_A(2.0, 1.0)
    with pytest.raises(DomainError):
        amp_A(2.0, -0.1)


def test_amp_A_positive(rng):
    for _ in range(50):
        k = float(rng.uniform(1.05, 10.0))
        c = float(rng.uniform(0.02, 0.98))
        assert amp_A(k, c) > 0.0


def test_quad_param_validation(consts):
    QuadParam(k=2.0, family=Family.FIRST)
    QuadParam(k=3.0, family=Family.SECOND)
    with pytest.raises(DomainError):
        QuadParam(k=0.8, family=Family.FIRST)
    with pytest.raises(DomainError):
        QuadParam(k=3.0, family=Family.FIRST)
    with pytest.raises(DomainError):
        QuadParam(k=2.0, family=Family.SECOND)
    assert Family.FIRST.value == "first"
    assert Family.SECOND.value == "second"


def test_solve_family1_k2(sol_k2):
    # root and amplitude have closed forms at k = 2: c = sqrt(3) - 1 and
    # A = 2 sqrt(3) sqrt(1/3) = 2 (the inner ratio collapses to 1/3)
    assert sol_k2.c == pytest.approx(math.sqrt(3.0) - 1.0, abs=1e-11)
    assert sol_k2.A == pytest.approx(2.0, abs=1e-9)
    assert sol_k2.alpha == pytest.approx(0.5, abs=1e-6)
    assert sol_k2.modulus == modulus_of_k(2.0)
    assert abs(sol_k2.residual) <= 1e-9
    assert sol_k2.param.family is Family.FIRST
    assert sol_k2.k == 2.0
    assert sol_k2.d == pytest.approx(-2.0 / sol_k2.c, abs=1e-15)


def test_solve_family1_pairing_invariant(sol_k2):
    k = sol_k2.k
    assert bethe_h(k, sol_k2.c) == pytest.approx(
        bethe_h(k, -k / sol_k2.c), abs=1e-12)


def test_solve_family1_near_one():
    sol = solve_family1(1.0001)
    assert 0.0 < sol.c < 0.05
    assert sol.c == pytest.approx(0.0002822458309587091, abs=1e-10)


def test_solve_family1_domain(consts):
    with pytest.raises(DomainError):
        solve_family1(1.0)
    with pytest.raises(DomainError):
        solve_family1(consts.k_crit)
    with pytest.raises(DomainError):
        solve_family1(3.0)


def test_family2_integral_negative(consts):
    for k in (2.5, 3.0, 4.0):
        for frac in (0.2, 0.5, 0.8):
            c = 1.0 + frac * (k - 1.0)
            assert family2_integral(k, c) < 0.0


def test_family2_integral_continuity():
    a = family2_integral(3.0, 1.5)
    b = family2_integral(3.0, 1.5 + 1e-6)
    assert abs(a - b) < 1e-4


def test_family2_integral_domain(consts):
    with pytest.raises(DomainError):
        family2_integral(2.0, 1.5)  # below critical
    with pytest.raises(DomainError):
        family2_integral(3.0, 0.5)
    with pytest.raises(DomainError):
        family2_integral(3.0, 3.0)


def test_solve_family2_roots():
    for k, want in ((2.5, 1.0428457682690357),
                    (3.0, 1.3491606530150624),
                    (4.0, 1.9562442380535503)):
        sol = solve_family2(k)
        assert 1.0 < sol.c < k
        assert sol.c == pytest.approx(want, abs=1e-9)
        assert family2_integral(k, sol.c) == pytest.approx(-math.pi, abs=1e-9)
        assert sol.A > 0.0
        assert abs(sol.residual) <= 1e-9
        assert sol.param.family is Family.SECOND


def test_solve_family2_approaches_one(consts):
    cs = [solve_family2(consts.k_crit + dk).c for dk in (1e-2, 1e-3, 1e-4)]
    assert cs[0] > cs[1] > cs[2] > 1.0
    assert cs[2] - 1.0 < 1e-3


def test_solve_family2_domain():
    with pytest.raises(DomainError):
        solve_family2(2.0)


def test_solution_validation(sol_k2):
    param = sol_k2.param
    with pytest.raises(DomainError):
        AccessorySolution(param=param, c=1.5, A=sol_k2.A, alpha=0.5,
                          modulus=0.6, residual=0.0)
    with pytest.raises(DomainError):
        AccessorySolution(param=param, c=sol_k2.c, A=-1.0, alpha=0.5,
                          modulus=0.6, residual=0.0)
    with pytest.raises(DomainError):
        AccessorySolution(param=param, c=sol_k2.c, A=sol_k2.A, alpha=1.5,
                          modulus=0.6, residual=0.0)
    with pytest.raises(DomainError):
        AccessorySolution(param=param, c=sol_k2.c, A=sol_k2.A, alpha=0.5,
                          modulus=-0.6, residual=0.0)


def test_scan_bracket_contract():
    grid = [0.1, 0.3, 0.5, 0.7, 0.9]
    lo, hi = _scan_bracket(lambda c: c - 0.4, grid, "probe")
    assert (lo, hi) == (0.3, 0.5)
    with pytest.raises(BracketError, match="no sign change"):
        _scan_bracket(lambda c: 1.0, grid, "probe")
    with pytest.raises(BracketError, match="multiple"):
        _scan_bracket(lambda c: math.sin(8.0 * c), grid, "probe")


def test_solver_caches():
    assert solve_family1(2.0) is solve_family1(2.0)
    assert solve_family2(3.0) is solve_family2(3.0)
