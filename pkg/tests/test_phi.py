import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, optimize, special

from nelson_lab.errors import DomainError
from nelson_lab.phi import (derived_constants, f_theta_integral, phi, phi_norms, phi_zeros,
                            theta_constants, weighted_sup)

GRID = np.linspace(1e-9, 50.0, 1_000_001)


def _direct(x):
    return (np.sin(x) - x * np.cos(x)) / x ** 2


def test_phi_examples():
    assert phi(0.0) == 0.0
    assert phi(math.pi) == pytest.approx(1 / math.pi, rel=1e-14)
    assert phi(1e-4) == pytest.approx(1e-4 / 3, abs=1e-13)


@given(st.floats(0.05, 500.0))
def test_phi_matches_closed_form(x):
    assert phi(x) == pytest.approx(_direct(x), rel=1e-12, abs=1e-15)


def test_phi_series_branch_is_continuous():
    x = np.linspace(1e-6, 0.2, 2001)
    # series x/3 - x^3/30 + x^5/840 checked where the direct form is still accurate
    series = x / 3 - x ** 3 / 30 + x ** 5 / 840 - x ** 7 / 45360
    assert np.max(np.abs(phi(x) - series)) < 1e-12


def test_zeros_solve_tan_x_equals_x():
    z = np.array(phi_zeros(20))
    assert np.all(np.abs(np.tan(z) - z) < 1e-8 * z)
    ref = [optimize.brentq(lambda t: math.sin(t) - t * math.cos(t), k * math.pi, (k + 0.5) * math.pi,
                         xtol=1e-14)
           for k in range(1, 21)]
    assert np.allclose(z, ref, atol=1e-12)


def test_sup_norm_against_dense_grid():
    norms = phi_norms()
    oracle = np.max(np.abs(_direct(GRID)))
    assert norms.sup_norm == pytest.approx(oracle, abs=1e-10)
    assert norms.sup_norm == pytest.approx(0.43618, abs=1e-5)
    assert norms.weighted_sup(0.0) == norms.sup_norm


@pytest.mark.parametrize("a", [0.25, 0.5, 0.75, 1.0])
def test_weighted_sup_against_dense_grid(a):
    oracle = np.max(np.abs(_direct(GRID)) * GRID ** a)
    assert weighted_sup(a) >= oracle - 1e-12
    assert weighted_sup(a) == pytest.approx(oracle, rel=1e-9)


def test_weighted_sup_negative_exponent_uses_origin_limit():
    assert weighted_sup(-1.0) == pytest.approx(1 / 3, rel=1e-12)


@pytest.mark.parametrize("a", [1.1, -1.1, math.nan])
def test_weighted_sup_domain(a):
    with pytest.raises(DomainError):
        weighted_sup(a)


def test_unbounded_beyond_one():
    vals = [abs(phi(x)) * x ** 1.5 for x in (10.0, 100.0, 1000.0)]
    env = [math.sqrt(x) for x in (10.0, 100.0, 1000.0)]   # |phi(x)| x ~ |cos x|
    assert env[1] / env[0] > 3 and env[2] / env[1] > 3
    assert max(vals) > 10


def test_one_norm_against_scipy():
    zeros = (0.0,) + phi_zeros(60)
    half = sum(integrate.quad(lambda u: abs(_direct(u)) / u if u > 0 else 1 / 3, lo, hi,
                              epsabs=1e-14, epsrel=1e-13)[0]
               for lo, hi in zip(zeros[:-1], zeros[1:]))
    # tail beyond the last zero: |phi(u)|/u ~ |cos u|/u with mean 2/pi
    zeros_far = (zeros[-1],) + tuple(z for z in phi_zeros(1600) if z > zeros[-1])
    half += sum(integrate.quad(lambda u: abs(_direct(u)) / u, lo, hi)[0]
                for lo, hi in zip(zeros_far[:-1], zeros_far[1:]))
    half += 2 / math.pi / zeros_far[-1]
    assert phi_norms().one_norm_over_x == pytest.approx(2 * half, abs=2e-5)
    assert phi_norms().one_norm_over_x == pytest.approx(1.936071, abs=1e-6)


def test_polaron_consistency():
    k = 2 / math.pi ** 2 * phi_norms().one_norm_over_x ** 2
    assert 0.74 <= k <= 0.76
    assert round(k, 2) == 0.76


def _a_theta_oracle(t):
    q = 2 - t
    return 2 ** ((3 * t - 2) / q) * t ** (t / q) * q / (3 - t) ** (2 * t / q)


def test_theta_constants_examples():
    a, b = theta_constants(1.5)
    assert a == pytest.approx(32 * 3.375 * 0.5 / 1.5 ** 6, rel=1e-14)
    assert a == pytest.approx(4.74074, abs=1e-5)
    assert b == pytest.approx(1.5 * special.gamma(0.75) / (2 ** 0.75 * special.gamma(1.5)), rel=1e-12)
    b_limit = theta_constants(1 + 1e-9)[1]
    assert b_limit == pytest.approx(1 / (math.sqrt(2) * special.gamma(1.5)), rel=1e-8)


@pytest.mark.parametrize("theta", np.round(np.append(1.01, np.arange(1.1, 1.99, 0.1)).tolist() + [1.99], 2))
def test_theta_constants_positive(theta):
    a, b = theta_constants(theta)
    assert a > 0 and b > 0
    assert a == pytest.approx(_a_theta_oracle(theta), rel=1e-12)


@pytest.mark.parametrize("theta", [1.0, 2.0, 0.5, math.nan])
def test_theta_domain(theta):
    with pytest.raises(DomainError) as info:
        theta_constants(theta)
    assert info.value.parameter == "theta"


@given(st.floats(1.001, 1.999))
def test_f_theta_integral_closed_form(theta):
    s = (theta - 1) / 2
    assert f_theta_integral(theta) == pytest.approx(2 ** (1 - s) * math.pi / math.sin(math.pi * s),
                                                    rel=1e-9)


def test_derived_constants_examples():
    norms = phi_norms()
    c = derived_constants(1.5, 0.0, 1.0)
    assert c.c_const == norms.one_norm_over_x / 2
    assert c.c_const == pytest.approx(0.968, abs=1e-3)
    assert c.d_eps == pytest.approx(norms.sup_norm, rel=1e-13)
    assert c.f_theta == pytest.approx(2 ** -0.5 * weighted_sup(0.75) * f_theta_integral(1.5))
    for value in (c.a_theta, c.b_theta, c.c_const, c.d_eps, c.f_theta):
        assert value > 0


@given(st.floats(0.0, 0.99), st.floats(1e-4, 1e3))
def test_d_eps_power_law(phi_param, eps):
    d1 = derived_constants(1.5, phi_param, eps).d_eps
    d4 = derived_constants(1.5, phi_param, 4 * eps).d_eps
    assert d4 / d1 == pytest.approx(4.0 ** -(1 - phi_param), rel=1e-12)
    assert d4 < d1


def test_d_eps_blows_up_as_phi_to_one():
    vals = [derived_constants(1.5, p, 0.5).d_eps for p in (0.9, 0.99, 0.999, 0.9999)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 1e3


@pytest.mark.parametrize("args,name", [((2.0, 0.0, 1.0), "theta"), ((1.5, 1.0, 1.0), "phi_param"),
                                       ((1.5, -0.1, 1.0), "phi_param"), ((1.5, 0.0, 0.0), "epsilon"),
                                       ((1.5, 0.0, math.inf), "epsilon")])
def test_derived_constants_domain(args, name):
    with pytest.raises(DomainError) as info:
        derived_constants(*args)
    assert info.value.parameter == name
