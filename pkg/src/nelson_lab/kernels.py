"""Angularly reduced pair kernels of the Nelson and polaron path actions.

Both actions have the form ``coeff * sum_{m,n} int_0^T int_0^t K(t - s, |y|) ds dt``
with ``y = X_t^m - X_s^n + x^m - x^n`` and a radial kernel

    K(tau, d) = 4 pi int_0^Lambda w(r) exp(-nu(r) tau) sinc(r d) dr.

For the Nelson model ``w = r**2 / nu`` with ``nu = sqrt(r**2 + mu**2)`` and
``coeff = alpha``; for the polaron ``w = 1``, ``nu = 1`` and
``coeff = alpha / (2**1.5 pi**2)``.  Everything that needs ``w`` and ``nu``
(tables, expectations, the Clark-Ocone integrand) goes through
:class:`RadialModel`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import gammainc

from .counterterm import ModelParams
from .errors import DomainError
from .phi import phi
from .quad import integrate_adaptive, sine_integral

__all__ = [
    "nelson_kernel",
    "polaron_kernel",
    "RadialModel",
    "KernelTable",
    "j_integral",
    "POLARON_COEFF",
]

#: action prefactor of the polaron per unit coupling
POLARON_COEFF = 1.0 / (2.0 ** 1.5 * math.pi ** 2)
_FOUR_PI = 4.0 * math.pi


def _sinc(x):
    return np.sinc(np.asarray(x, dtype=float) / np.pi)


def _require_finite_cutoff(lambda_uv):
    if not (lambda_uv > 0 and math.isfinite(lambda_uv)):
        raise DomainError(f"the pair kernel needs a finite cutoff, got {lambda_uv}", "lambda_uv")


def nelson_kernel(tau, d, mu, lambda_uv, tol=1e-10):
    """``4 pi int_0^Lambda exp(-nu tau) sinc(r d) r**2 / nu dr`` by adaptive quadrature.

    Raises
    ------
    DomainError
        For an infinite cutoff (the kernel diverges at ``tau = 0``) or negative
        ``tau``, ``d``.
    """
    _require_finite_cutoff(lambda_uv)
    tau, d = float(tau), float(d)
    if tau < 0 or d < 0:
        raise DomainError("tau and d must be >= 0", "tau" if tau < 0 else "d")

    def f(r):
        nu = np.hypot(r, mu)
        with np.errstate(invalid="ignore"):
            w = np.where(r > 0, r * (r / nu), 0.0)
        return _FOUR_PI * w * np.exp(-nu * tau) * _sinc(r * d)

    return integrate_adaptive(f, 0.0, lambda_uv, tol, rel_tol=1e-13).value


def polaron_kernel(tau, d, lambda_uv):
    """``4 pi exp(-tau) Si(Lambda d) / d``, equal to ``4 pi exp(-tau) Lambda`` at ``d = 0``.

    Examples
    --------
    >>> round(polaron_kernel(0.0, 0.0, 2.0) / (4 * math.pi), 12)
    2.0
    """
    _require_finite_cutoff(lambda_uv)
    tau = float(tau)
    d = np.asarray(d, dtype=float)
    if tau < 0 or np.any(d < 0):
        raise DomainError("tau and d must be >= 0", "tau" if tau < 0 else "d")
    safe = np.where(d > 0, d, 1.0)
    radial = np.where(d > 0, sine_integral(lambda_uv * safe) / safe, lambda_uv)
    out = _FOUR_PI * math.exp(-tau) * radial
    return float(out) if out.ndim == 0 else out


def _g(z):
    # (1 - exp(-z)) / z, equal to 1 at z = 0
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-8
    zs = np.where(small, 1.0, z)
    return np.where(small, 1.0 - 0.5 * z, -np.expm1(-zs) / zs)


def j_integral(a, lam, b):
    """``int_0^b exp(-a v) v g(c v) dv`` with ``c = lam - a`` and ``g(z) = (1 - e^{-z})/z``.

    Equivalently ``int_0^b int_0^w exp(-lam (w - s) - a s) ... `` collapses to
    ``(b g(a b) - b g(lam b)) / c``; that difference cancels badly when
    ``|c| b`` is small, where a power series in ``c`` with incomplete-gamma
    moments is used instead.  Arrays broadcast.
    """
    a, lam = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(lam, dtype=float))
    b = float(b)
    c = lam - a
    use_series = np.abs(c) * b <= 0.05
    with np.errstate(all="ignore"):
        direct = b * (_g(a * b) - _g(lam * b)) / c
    # series: sum_k (-c)^k / (k+1)! * int_0^b e^{-a v} v^{k+1} dv
    z = a * b
    zs = np.where(z > 1e-8, z, 1.0)
    series = np.zeros_like(a)
    for k in range(9):
        j = k + 1
        with np.errstate(all="ignore"):
            moment = np.where(z > 1e-8,
                              gammainc(j + 1, zs) * math.factorial(j) / zs ** (j + 1),
                              1.0 / (j + 1))
        series = series + (-c * b) ** k / math.factorial(k + 1) * moment * b ** 2
    return np.where(use_series, series, direct)


def _gauss_legendre_panels(upper, panels, order=16):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, upper, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


@dataclass(frozen=True)
class RadialModel:
    """Radial data ``(w, nu, coeff)`` of one of the two actions.

    Parameters
    ----------
    which : {"nelson", "polaron"}
    model : ModelParams
        Needs a finite ``lambda_uv``.
    """

    which: str
    model: ModelParams

    def __post_init__(self):
        if self.which not in ("nelson", "polaron"):
            raise DomainError(f"unknown model {self.which!r}", "which")
        _require_finite_cutoff(self.model.lambda_uv)

    @property
    def coeff(self):
        if self.which == "nelson":
            return self.model.alpha
        return self.model.alpha * POLARON_COEFF

    @property
    def lambda_uv(self):
        return self.model.lambda_uv

    def nu(self, r):
        r = np.asarray(r, dtype=float)
        if self.which == "nelson":
            return np.hypot(r, self.model.mu)
        return np.ones_like(r)

    def weight(self, r):
        r = np.asarray(r, dtype=float)
        if self.which == "nelson":
            nu = np.hypot(r, self.model.mu)
            with np.errstate(invalid="ignore"):
                return np.where(r > 0, r * (r / nu), 0.0)
        return np.ones_like(r)

    def kernel(self, tau, d, tol=1e-10):
        """Exact kernel at one point (quadrature or closed form)."""
        if self.which == "nelson":
            return nelson_kernel(tau, d, self.model.mu, self.lambda_uv, tol)
        return polaron_kernel(tau, d, self.lambda_uv)

    def nodes(self, d_max):
        """Composite Gauss-Legendre rule on ``[0, Lambda]`` resolving ``sinc(r d)`` up to ``d_max``."""
        panels = max(16, int(math.ceil(self.lambda_uv * max(d_max, 1.0) / math.pi)) + 1)
        return _gauss_legendre_panels(self.lambda_uv, panels)

    # -- expectations -----------------------------------------------------

    def _radial_integral(self, f, tol):
        return integrate_adaptive(f, 0.0, self.lambda_uv, tol, rel_tol=1e-13).value

    def expected_diagonal_rate(self, tol=1e-10):
        """Per-particle slope ``4 pi int w / (nu + r**2/2) dr``; equals ``Q/(alpha N)`` for Nelson."""
        return _FOUR_PI * self._radial_integral(
            lambda r: self.weight(r) / (self.nu(r) + 0.5 * r * r), tol)

    def expected_action(self, t_final, offsets=None, tol=1e-10):
        """Exact ``E(A_T)`` of the continuous-time action, by radial quadrature.

        The diagonal pairs contribute ``T * rate - 4 pi int w (1 - e^{-lam T}) / lam**2``
        per particle, ``lam = nu + r**2/2``; each ordered pair of distinct
        particles at separation ``d`` contributes
        ``4 pi int w sinc(r d) J(r, T) dr`` with ``J`` from :func:`j_integral`.

        Returns
        -------
        dict
            ``total``, ``diagonal``, ``cross`` and the linear part ``rate * T``
            (all including the coupling prefactor).
        """
        n = self.model.n
        offsets = _offsets(offsets, n)
        T = float(t_final)

        def lam(r):
            return self.nu(r) + 0.5 * r * r

        rate = self.expected_diagonal_rate(tol)
        second = _FOUR_PI * self._radial_integral(
            lambda r: self.weight(r) * -np.expm1(-lam(r) * T) / lam(r) ** 2, tol)
        diagonal = n * (rate * T - second)
        cross = 0.0
        for m in range(n):
            for k in range(n):
                if m == k:
                    continue
                dist = float(np.linalg.norm(offsets[m] - offsets[k]))
                cross += _FOUR_PI * self._radial_integral(
                    lambda r: self.weight(r) * _sinc(r * dist) * j_integral(r * r, lam(r), T),
                    tol)
        c = self.coeff
        return {"total": c * (diagonal + cross), "diagonal": c * diagonal,
                "cross": c * cross, "linear": c * n * rate * T}

    def discrete_expected_action(self, time_weights, t_grid, offsets=None):
        """Exact expectation of the trapezoid-discretized action on ``t_grid``.

        ``time_weights`` is the lower-triangular matrix of simplex weights.
        """
        n = self.model.n
        offsets = _offsets(offsets, n)
        t = np.asarray(t_grid, dtype=float)
        r, wr = self.nodes(_max_offset(offsets))
        base = _FOUR_PI * wr * self.weight(r)
        nu = self.nu(r)
        lam = nu + 0.5 * r * r
        # diagonal: weights collapse onto lags
        lags = np.arange(len(t))
        lag_w = np.array([np.trace(time_weights, -k) for k in lags])
        kappa = np.exp(-np.outer(lags * (t[1] - t[0] if len(t) > 1 else 0.0), lam)) @ base
        total = n * float(lag_w @ kappa)
        if n > 1:
            # cross: exp(-lam t_i + (nu - r^2/2) t_j) factorizes over (i, j)
            left = np.exp(-np.outer(t, lam))
            right = np.exp(np.outer(t, nu - 0.5 * r * r))
            per_r = np.einsum("ir,ij,jr->r", left, time_weights, right)
            for m in range(n):
                for k in range(n):
                    if m != k:
                        dist = float(np.linalg.norm(offsets[m] - offsets[k]))
                        total += float(per_r @ (base * _sinc(r * dist)))
        return self.coeff * total


def _offsets(offsets, n):
    if offsets is None:
        return np.zeros((n, 3))
    arr = np.asarray(offsets, dtype=float).reshape(-1, 3)
    if arr.shape[0] != n:
        raise DomainError(f"need {n} offsets, got {arr.shape[0]}", "offsets")
    return arr


def _max_offset(offsets):
    if len(offsets) < 2:
        return 0.0
    diff = offsets[:, None, :] - offsets[None, :, :]
    return float(np.sqrt((diff ** 2).sum(-1)).max())


class KernelTable:
    """Kernel values on a ``(tau, d)`` grid with bilinear interpolation.

    The ``d`` axis is uniform on ``[0, d_max]``; the ``tau`` axis is any
    increasing grid.  :meth:`lookup` reads exact ``tau`` nodes by index and
    interpolates only in ``d``, which is how the path action uses the table.
    """

    def __init__(self, radial: RadialModel, tau_nodes, d_max, n_d):
        tau = np.asarray(tau_nodes, dtype=float)
        if tau.ndim != 1 or len(tau) < 2 or np.any(np.diff(tau) <= 0) or tau[0] < 0:
            raise DomainError("tau_nodes must be increasing, >= 0, at least two", "tau_nodes")
        if int(n_d) < 2 or not d_max > 0:
            raise DomainError("need n_d >= 2 and d_max > 0", "kernel_grid")
        self.radial = radial
        self.tau = tau
        self.d_max = float(d_max)
        self.n_d = int(n_d)
        self.d = np.linspace(0.0, self.d_max, self.n_d)
        self.h = self.d[1] - self.d[0]
        self.values = self._build()
        self._flat = self.values.ravel()

    def _build(self):
        rad = self.radial
        if rad.which == "polaron":
            return np.outer(np.exp(-self.tau), polaron_kernel(0.0, self.d, rad.lambda_uv))
        r, wr = rad.nodes(self.d_max)
        decay = np.exp(-np.outer(self.tau, rad.nu(r))) * (_FOUR_PI * wr * rad.weight(r))
        out = np.empty((len(self.tau), self.n_d))
        step = max(1, int(2e7 // (len(r) * len(self.tau))))
        for k in range(0, self.n_d, step):
            out[:, k:k + step] = decay @ _sinc(np.outer(r, self.d[k:k + step]))
        return out

    def lookup(self, tau_index, d):
        """Kernel at exact node ``tau[tau_index]`` and distances ``d <= d_max``."""
        pos = np.asarray(d, dtype=float) / self.h
        k = np.minimum(pos.astype(np.intp), self.n_d - 2)
        frac = pos - k
        base = np.asarray(tau_index, dtype=np.intp) * self.n_d + k
        lo = self._flat[base]
        return lo + frac * (self._flat[base + 1] - lo)

    def __call__(self, tau, d):
        """Bilinear interpolation at arbitrary ``(tau, d)`` inside the grid."""
        tau, d = np.broadcast_arrays(np.asarray(tau, dtype=float), np.asarray(d, dtype=float))
        if np.any(tau < self.tau[0]) or np.any(tau > self.tau[-1]) or np.any(d > self.d_max):
            raise DomainError("point outside the kernel table", "kernel_grid")
        i = np.clip(np.searchsorted(self.tau, tau, side="right") - 1, 0, len(self.tau) - 2)
        ft = (tau - self.tau[i]) / (self.tau[i + 1] - self.tau[i])
        return (1.0 - ft) * self.lookup(i, d) + ft * self.lookup(i + 1, d)
