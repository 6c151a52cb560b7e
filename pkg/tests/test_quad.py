import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from nelson_lab.errors import DomainError, ToleranceNotReached
from nelson_lab.quad import gamma_fn, integrate_adaptive, integrate_semi_infinite, sine_integral


def test_polynomial_exact():
    res = integrate_adaptive(lambda x: 3 * x ** 2, 0.0, 2.0)
    assert res.value == pytest.approx(8.0, abs=1e-13)
    assert res.abs_error_estimate < 1e-10


def test_oscillatory_against_scipy():
    f = lambda x: np.sin(20 * x) * np.exp(-x)
    ref, _ = integrate.quad(f, 0, 5, limit=200, epsabs=1e-13)
    assert integrate_adaptive(f, 0.0, 5.0, 1e-12).value == pytest.approx(ref, abs=1e-11)


def test_endpoint_singularity():
    # int_0^1 x^(-1/2) dx = 2 and int_0^1 (1 - x)^(-0.7) dx = 1/0.3
    left = integrate_adaptive(lambda x: x ** -0.5, 0.0, 1.0, 1e-8, left_exponent=0.5)
    right = integrate_adaptive(lambda x: (1 - x) ** -0.7, 0.0, 1.0, 1e-9, right_exponent=0.7)
    assert left.value == pytest.approx(2.0, abs=1e-8)
    assert left.abs_error_estimate <= 1e-8
    assert right.value == pytest.approx(1 / 0.3, rel=1e-9)


def test_both_endpoints_singular():
    # Beta(1/2, 1/2) = pi
    res = integrate_adaptive(lambda x: (x * (1 - x)) ** -0.5, 0.0, 1.0, 1e-9,
                             left_exponent=0.5, right_exponent=0.5)
    assert res.value == pytest.approx(math.pi, abs=1e-8)


def test_sine_over_half_period():
    assert integrate_adaptive(np.sin, 0.0, math.pi, 1e-10).value == pytest.approx(2.0, abs=1e-10)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=6), st.floats(-10, 10),
       st.floats(0.05, 0.95))
def test_linearity_and_additivity(coeffs, c, frac):
    poly = np.polynomial.Polynomial(coeffs)
    tol = 1e-10
    a, b = -1.0, 2.0
    base = integrate_adaptive(poly, a, b, tol).value
    scaled = integrate_adaptive(lambda x: c * poly(x), a, b, tol).value
    assert scaled == pytest.approx(c * base, abs=2 * tol * max(1.0, abs(c)))
    m = a + frac * (b - a)
    split = integrate_adaptive(poly, a, m, tol).value + integrate_adaptive(poly, m, b, tol).value
    assert split == pytest.approx(base, abs=2 * tol)


def test_semi_infinite():
    assert integrate_semi_infinite(lambda x: np.exp(-x)).value == pytest.approx(1.0, abs=1e-10)
    gauss = integrate_semi_infinite(lambda x: np.exp(-x * x)).value
    assert gauss == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-10)
    assert integrate_semi_infinite(lambda x: (1 + x) ** -2.0).value == pytest.approx(1.0, abs=1e-10)
    val = integrate_semi_infinite(lambda x: 1 / (1 + x * x), tail_power=2.0).value
    assert val == pytest.approx(math.pi / 2, abs=1e-9)


def test_scalar_integrand_accepted():
    assert integrate_adaptive(math.cos, 0.0, math.pi / 2).value == pytest.approx(1.0, abs=1e-12)


def test_budget_exhaustion_raises_with_partial_result():
    with pytest.raises(ToleranceNotReached) as info:
        integrate_adaptive(lambda x: np.sin(1 / x), 1e-6, 1.0, 1e-14, max_evaluations=300)
    assert info.value.result is not None


@given(st.floats(0.1, 40.0))
def test_gamma_matches_scipy(x):
    assert gamma_fn(x) == pytest.approx(special.gamma(x), rel=1e-13)


def test_gamma_special_values():
    assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-14)
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert gamma_fn(1.5) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-13)


@pytest.mark.parametrize("x", np.arange(0.3, 2.95, 0.2))
def test_gamma_recurrence(x):
    assert gamma_fn(x + 1) == pytest.approx(x * gamma_fn(x), rel=1e-9)


@pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
def test_gamma_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        gamma_fn(x)


@given(st.floats(0.0, 200.0))
def test_sine_integral_matches_scipy(x):
    assert abs(sine_integral(x) - special.sici(x)[0]) < 1e-10


def _si_power_series(x, terms=60):
    return math.fsum((-1) ** k * x ** (2 * k + 1) / ((2 * k + 1) * math.factorial(2 * k + 1))
                     for k in range(terms))


def test_sine_integral_examples():
    assert sine_integral(0.0) == 0.0
    assert sine_integral(math.pi) == pytest.approx(_si_power_series(math.pi), abs=1e-12)
    assert sine_integral(math.pi) == pytest.approx(1.8519370, abs=1e-7)
    x = 1e4
    assert abs(sine_integral(x) - (math.pi / 2 - math.cos(x) / x)) < 2e-4
    assert sine_integral(math.inf) == math.pi / 2


def test_sine_integral_shape_properties():
    grid = np.linspace(0.0, math.pi, 500)
    vals = sine_integral(grid)
    assert vals.shape == grid.shape
    assert np.all(np.diff(vals) > 0)
    wide = sine_integral(np.linspace(0.0, 300.0, 3001))
    assert wide.max() <= 1.8520


def test_sine_integral_rejects_negative_and_nan():
    for bad in (-3.0, math.nan):
        with pytest.raises(DomainError):
            sine_integral(bad)
