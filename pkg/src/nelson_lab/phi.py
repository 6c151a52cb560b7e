"""The radial form factor ``phi(x) = (sin x - x cos x) / x**2`` and the constants built from it.

``phi`` is what remains of ``sin(k . y) k`` after integrating over the directions
of ``k``; its norms feed every constant of the Nelson lower bound.
"""

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quad import gamma_fn, integrate_adaptive, integrate_semi_infinite

__all__ = [
    "phi",
    "PhiNormTable",
    "DerivedConstants",
    "phi_norms",
    "weighted_sup",
    "theta_constants",
    "f_theta_integral",
    "derived_constants",
    "phi_zeros",
]

_SERIES_CUTOFF = 0.1
# phi(x) = sum_k (-1)**(k+1) 2k x**(2k-1) / (2k+1)!
_SERIES = [(-1) ** (k + 1) * 2 * k / math.factorial(2 * k + 1) for k in range(1, 8)]

SCAN_MAX = 50.0
_ONE_NORM_PANELS = 400


def phi(x):
    """Evaluate ``(sin x - x cos x) / x**2`` for ``x >= 0`` (scalar or array)."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_CUTOFF
    xs = np.where(small, 1.0, x)
    with np.errstate(all="ignore"):
        direct = (np.sin(xs) - xs * np.cos(xs)) / (xs * xs)
    x2 = x * x
    series = np.zeros_like(x)
    for c in reversed(_SERIES):
        series = series * x2 + c
    series = series * x
    out = np.where(small, series, direct)
    return float(out) if out.ndim == 0 else out


def _key(value):
    return float(f"{float(value):.12g}")


@functools.lru_cache(maxsize=None)
def phi_zeros(count):
    """Positive zeros of ``phi`` (roots of ``tan x = x``), in increasing order."""
    return tuple(_bisect_zero(k * math.pi, k * math.pi + 0.5 * math.pi)
                 for k in range(1, count + 1))


def _bisect_zero(lo, hi):
    h = lambda x: math.sin(x) - x * math.cos(x)
    h_lo = h(lo)
    while True:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            return mid
        h_mid = h(mid)
        if (h_mid > 0) == (h_lo > 0):
            lo, h_lo = mid, h_mid
        else:
            hi = mid


def _lobe_brackets(limit):
    zeros = [0.0]
    k = 1
    while zeros[-1] < limit:
        zeros = [0.0] + list(phi_zeros(k))
        k *= 2
    zeros = [z for z in zeros if z < limit] + [limit]
    return np.array(zeros[:-1]), np.array(zeros[1:])


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _phi_scalar(x):
    if x < _SERIES_CUTOFF:
        x2 = x * x
        acc = 0.0
        for c in reversed(_SERIES):
            acc = acc * x2 + c
        return acc * x
    return (math.sin(x) - x * math.cos(x)) / (x * x)


def _golden_max(g, lo, hi):
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    gc, gd = g(c), g(d)
    while hi - lo > 1e-15 * max(1.0, hi):
        if gc > gd:
            hi, d, gd = d, c, gc
            c = hi - _GOLDEN * (hi - lo)
            gc = g(c)
        else:
            lo, c, gc = c, d, gd
            d = lo + _GOLDEN * (hi - lo)
            gd = g(d)
    return max(gc, gd)


@functools.lru_cache(maxsize=4096)
def _weighted_sup_cached(a):
    # |phi(x)| x**a has one bump per lobe between consecutive zeros of phi.
    # Since |phi(x)| <= sqrt(1 + x^2) / x^2, a lobe starting at z > 1 cannot
    # beat sqrt(1 + z^2) z**(a - 2), which decreases in z for a <= 1; lobes are
    # skipped once that bound drops below the best bump found.
    g = lambda x: abs(_phi_scalar(x)) * x ** a
    best = 1.0 / 3.0 if a == -1.0 else 0.0
    lo, hi = _lobe_brackets(SCAN_MAX)
    for z0, z1 in zip(lo, hi):
        if z0 > 1.0 and math.sqrt(1.0 + z0 * z0) * z0 ** (a - 2.0) <= best:
            break
        best = max(best, _golden_max(g, float(z0), float(z1)))
    return best


def weighted_sup(a):
    """``sup_x |phi(x)| x**a``; finite exactly for ``a`` in ``[-1, 1]``."""
    a = float(a)
    if not -1.0 <= a <= 1.0:
        raise DomainError(f"|phi(x)| x**a is unbounded for a = {a}; need a in [-1, 1]", "a")
    return _weighted_sup_cached(_key(a))


def _tail_mean_abs(x0):
    # Beyond a zero x0 of phi, sin u - u cos u = sqrt(1 + u^2) sin(u - atan u);
    # averaging |sin| over each half period leaves (2/pi) sqrt(1+u^2)/u^3.
    res = integrate_semi_infinite(lambda v: np.sqrt(1.0 + (x0 + v) ** 2) / (x0 + v) ** 3,
                                  tol=1e-13)
    return 2.0 / math.pi * res.value


@functools.lru_cache(maxsize=None)
def _one_norm_over_x():
    zeros = (0.0,) + phi_zeros(_ONE_NORM_PANELS)
    integrand = lambda u: np.abs(phi(u)) / np.where(u > 0, u, 1.0) + np.where(u > 0, 0.0, 1.0 / 3.0)
    total = math.fsum(integrate_adaptive(integrand, lo, hi, 1e-13, rel_tol=1e-13).value
                      for lo, hi in zip(zeros[:-1], zeros[1:]))
    return 2.0 * (total + _tail_mean_abs(zeros[-1]))


@dataclass(frozen=True)
class PhiNormTable:
    """Norms of ``phi`` entering the bound constants.

    ``one_norm_over_x`` is the full-line L1 norm of ``phi(x)/x``, i.e. twice the
    half-line integral, the convention under which the polaron constant is 0.76.
    """

    sup_norm: float
    one_norm_over_x: float

    def weighted_sup(self, a):
        return weighted_sup(a)


def phi_norms():
    return PhiNormTable(sup_norm=weighted_sup(0.0), one_norm_over_x=_one_norm_over_x())


def _check_theta(theta):
    theta = float(theta)
    if not 1.0 < theta < 2.0:
        raise DomainError(f"theta must lie in (1, 2), got {theta}", "theta")
    return theta


def theta_constants(theta):
    """Return ``(A_theta, B_theta)`` for the exponential-moment rates."""
    t = _check_theta(theta)
    q = 2.0 - t
    a_theta = (2.0 ** ((3.0 * t - 2.0) / q) * t ** (t / q) * q
               / (3.0 - t) ** (2.0 * t / q))
    b_theta = t * gamma_fn(0.5 * (3.0 - t)) / (2.0 ** (0.5 * t) * gamma_fn(1.5))
    return a_theta, b_theta


@functools.lru_cache(maxsize=4096)
def _f_integral_cached(theta):
    s = 0.5 * (theta - 1.0)
    return integrate_semi_infinite(lambda r: r ** (-s) / (1.0 + 0.5 * r), tol=1e-12,
                                   rel_tol=1e-13,
                                   zero_exponent=s, tail_power=1.0 + s).value


def f_theta_integral(theta):
    """``int_0^inf r**(-(theta-1)/2) / (1 + r/2) dr`` by quadrature."""
    return _f_integral_cached(_key(_check_theta(theta)))


@dataclass(frozen=True)
class DerivedConstants:
    a_theta: float
    b_theta: float
    c_const: float
    d_eps: float
    f_theta: float


def derived_constants(theta, phi_param, epsilon):
    """Assemble ``A_theta, B_theta, C, D_eps, F_theta`` for one parameter choice.

    Raises
    ------
    DomainError
        Names the offending parameter when ``theta`` is outside (1, 2),
        ``phi_param`` outside [0, 1) or ``epsilon`` not positive.
    """
    theta = _check_theta(theta)
    phi_param = float(phi_param)
    if not 0.0 <= phi_param < 1.0:
        raise DomainError(f"phi_param must lie in [0, 1), got {phi_param}", "phi_param")
    epsilon = float(epsilon)
    if not (epsilon > 0.0 and math.isfinite(epsilon)):
        raise DomainError(f"epsilon must be positive and finite, got {epsilon}", "epsilon")

    norms = phi_norms()
    a_theta, b_theta = theta_constants(theta)
    c_const = 0.5 * norms.one_norm_over_x
    gap = 1.0 - phi_param
    d_eps = (2.0 ** phi_param * norms.sup_norm * gamma_fn(2.0 - phi_param)
             / (gap * epsilon ** gap))
    f_theta = 2.0 ** -0.5 * weighted_sup(0.5 * theta) * f_theta_integral(theta)
    return DerivedConstants(a_theta, b_theta, c_const, d_eps, f_theta)
