"""One-dimensional adaptive quadrature and the special functions built on it.

The integrator is a globally adaptive 15-point Gauss-Kronrod scheme.  Integrands
are called with numpy arrays of nodes; scalar-only callables are detected and
evaluated node by node.
"""

import cmath
import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ToleranceNotReached

__all__ = [
    "QuadResult",
    "integrate_adaptive",
    "integrate_semi_infinite",
    "gamma_fn",
    "sine_integral",
]

MAX_EVALUATIONS = 1_000_000

# Kronrod 15-point abscissae on [-1, 1] (non-negative half); odd indices are
# the embedded 7-point Gauss nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[1:7:2] = _WG[:3]
_GWEIGHTS[7] = _WG[3]
_GWEIGHTS[9:15:2] = _WG[2::-1]

_EPS = np.finfo(float).eps
_SINGULAR_CUTOFF = 1e-280


@dataclass(frozen=True)
class QuadResult:
    """Value of a definite integral with its error estimate."""

    value: float
    abs_error_estimate: float
    evaluations: int

    def __float__(self):
        return self.value


def _as_array_integrand(f):
    probe = np.array([0.25, 0.5])
    try:
        with np.errstate(all="ignore"):
            out = np.asarray(f(probe), dtype=float)
        if out.shape == probe.shape:
            return f
    except (TypeError, ValueError):
        pass

    def looped(x):
        return np.array([float(f(xi)) for xi in x])

    return looped


def _gk15(f, a, b):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    with np.errstate(all="ignore"):
        fx = np.asarray(f(center + half * _NODES), dtype=float)
    if not np.all(np.isfinite(fx)):
        raise FloatingPointError(f"integrand not finite on [{a!r}, {b!r}]")
    kronrod = half * np.dot(_KWEIGHTS, fx)
    gauss = half * np.dot(_GWEIGHTS, fx)
    resabs = abs(half) * np.dot(_KWEIGHTS, np.abs(fx))
    err = max(abs(kronrod - gauss), 50.0 * _EPS * resabs)
    return kronrod, err


def _adaptive(f, a, b, tol, rel_tol, max_evaluations):
    value, err = _gk15(f, a, b)
    evaluations = 15
    heap = [(-err, a, b, value)]
    total, total_err = value, err
    while total_err > max(tol, rel_tol * abs(total)):
        if evaluations + 30 > max_evaluations:
            best = QuadResult(float(total), float(total_err), evaluations)
            raise ToleranceNotReached(
                f"tolerance {tol:g} not reached after {evaluations} evaluations "
                f"(error estimate {total_err:.3g})", best)
        neg_err, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            best = QuadResult(float(total), float(total_err), evaluations)
            raise ToleranceNotReached(
                f"interval [{lo!r}, {hi!r}] cannot be bisected further", best)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        evaluations += 30
        total += v1 + v2 - v
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        if len(heap) % 64 == 0:
            # resum to keep the running totals free of drift
            total = math.fsum(item[3] for item in heap)
            total_err = math.fsum(-item[0] for item in heap)
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(-item[0] for item in heap)
    return QuadResult(float(total), float(total_err), evaluations)


def _check_exponent(s, name):
    if not s < 1.0:
        raise DomainError(f"{name} must be < 1 for an integrable singularity, got {s}", name)


def integrate_adaptive(f, a, b, tol=1e-10, *, rel_tol=0.0, left_exponent=0.0,
                       right_exponent=0.0, max_evaluations=MAX_EVALUATIONS):
    """Integrate ``f`` over the finite interval ``[a, b]``.

    Parameters
    ----------
    f : callable
        Integrand.  Called with a numpy array of abscissae when it supports it.
    a, b : float
        Finite limits with ``a < b``.
    tol : float
        Absolute error target.
    rel_tol : float, optional
        Relative error target; the looser of the two targets is used.
    left_exponent, right_exponent : float, optional
        Declared power-law blow-up ``|x - endpoint|**(-s)`` at an endpoint,
        ``s < 1``.  The integrator then substitutes ``u = |x - endpoint|**(1 - s)``
        so the transformed integrand is bounded.

    Returns
    -------
    QuadResult

    Raises
    ------
    ToleranceNotReached
        If the evaluation budget runs out; the best estimate is attached.
    """
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise DomainError(f"need finite a < b, got [{a}, {b}]", "interval")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}", "tol")
    _check_exponent(left_exponent, "left_exponent")
    _check_exponent(right_exponent, "right_exponent")
    g = _as_array_integrand(f)

    if left_exponent and right_exponent:
        m = 0.5 * (a + b)
        half_tol = 0.5 * tol
        left = integrate_adaptive(g, a, m, half_tol, rel_tol=rel_tol, left_exponent=left_exponent,
                                  max_evaluations=max_evaluations // 2)
        right = integrate_adaptive(g, m, b, half_tol, rel_tol=rel_tol,
                                   right_exponent=right_exponent,
                                   max_evaluations=max_evaluations // 2)
        return QuadResult(left.value + right.value,
                          left.abs_error_estimate + right.abs_error_estimate,
                          left.evaluations + right.evaluations)

    if left_exponent or right_exponent:
        s = left_exponent or right_exponent
        power = 1.0 / (1.0 - s)
        jac_power = s / (1.0 - s)
        sign = 1.0 if left_exponent else -1.0
        origin = a if left_exponent else b
        width = b - a

        def transformed(u):
            return g(origin + sign * u ** power) * (power * u ** jac_power)

        # Closer to the endpoint than ``cut`` the abscissa is not resolvable
        # (underflow of u**power, or rounding against a nonzero endpoint); that
        # sliver is integrated analytically from the declared power law.
        cut = min(max(_SINGULAR_CUTOFF, 1e3 * _EPS * abs(origin)), 0.5 * width)
        u_lo = cut ** (1.0 - s)
        with np.errstate(all="ignore"):
            f_cut = float(np.asarray(g(np.array([origin + sign * cut])), dtype=float)[0])
        sliver = f_cut * cut / (1.0 - s)
        body = _adaptive(transformed, u_lo, width ** (1.0 - s), tol, rel_tol, max_evaluations)
        return QuadResult(float(body.value + sliver), body.abs_error_estimate, body.evaluations + 1)

    return _adaptive(g, a, b, tol, rel_tol, max_evaluations)


def integrate_semi_infinite(f, tol=1e-10, *, rel_tol=0.0, zero_exponent=0.0, tail_power=None,
                            max_evaluations=MAX_EVALUATIONS):
    """Integrate ``f`` over ``[0, inf)`` through the map ``r = t / (1 - t)``.

    ``zero_exponent`` declares a blow-up ``r**(-s)`` at the origin.  ``tail_power``
    declares a slow decay ``r**(-q)`` with ``1 < q < 2``; after the change of
    variables that decay becomes an endpoint singularity of order ``2 - q``
    at ``t = 1``, which is then handled like any other declared exponent.
    """
    g = _as_array_integrand(f)
    tail_exponent = 0.0
    if tail_power is not None:
        if not tail_power > 1.0:
            raise DomainError(f"tail_power must exceed 1, got {tail_power}", "tail_power")
        tail_exponent = max(0.0, 2.0 - tail_power)

    def head(t):
        one_minus = 1.0 - t
        return g(t / one_minus) / one_minus / one_minus

    def tail(w):
        # w = 1 - t is kept exact so large r stays finite
        return g((1.0 - w) / w) / w / w

    budget = max_evaluations // 2
    near = integrate_adaptive(head, 0.0, 0.5, 0.5 * tol, rel_tol=rel_tol,
                              left_exponent=zero_exponent, max_evaluations=budget)
    far = integrate_adaptive(tail, 0.0, 0.5, 0.5 * tol, rel_tol=rel_tol,
                             left_exponent=tail_exponent, max_evaluations=budget)
    return QuadResult(near.value + far.value,
                      near.abs_error_estimate + far.abs_error_estimate,
                      near.evaluations + far.evaluations)


# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos(x):
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * _lanczos(1.0 - x))
    x -= 1.0
    acc = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def gamma_fn(x):
    """Gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"gamma_fn needs a finite x > 0, got {x}", "x")
    return _lanczos(x)


_SI_SERIES_MAX = 16.0


def _si_series(x):
    x2 = x * x
    term = x
    total = x
    k = 0
    while True:
        k += 1
        term *= -x2 / ((2 * k) * (2 * k + 1))
        contrib = term / (2 * k + 1)
        total += contrib
        if abs(contrib) < 1e-17 * max(1.0, abs(total)):
            return total


def _si_continued_fraction(x):
    # Lentz evaluation of E1(ix); Si(x) = pi/2 + Im[e^{-ix} h].
    tiny = 1e-300
    b = complex(1.0, x)
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(2, 10_000):
        a = -float((i - 1) * (i - 1))
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    h *= cmath.exp(complex(0.0, -x))
    return 0.5 * math.pi + h.imag


def _si_scalar(x):
    if not math.isfinite(x):
        if x == math.inf:
            return 0.5 * math.pi
        raise DomainError(f"sine_integral needs a finite x >= 0, got {x}", "x")
    if x < 0:
        raise DomainError(f"sine_integral needs x >= 0, got {x}", "x")
    if x == 0.0:
        return 0.0
    if x <= _SI_SERIES_MAX:
        return _si_series(x)
    return _si_continued_fraction(x)


def sine_integral(x):
    """Sine integral ``Si(x)`` for ``x >= 0``; accepts scalars or arrays."""
    if np.ndim(x) == 0:
        return _si_scalar(float(x))
    arr = np.asarray(x, dtype=float)
    return np.array([_si_scalar(v) for v in arr.ravel()]).reshape(arr.shape)
