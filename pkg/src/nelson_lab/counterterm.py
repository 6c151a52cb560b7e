"""Physical model parameters and the renormalization counterterm ``Q``."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergentCounterterm, DomainError
from .quad import integrate_adaptive

__all__ = ["ModelParams", "q_counterterm", "q_log_asymptote", "q_integrand"]


@dataclass(frozen=True)
class ModelParams:
    """Coupling ``alpha``, meson mass ``mu``, UV cutoff ``lambda_uv`` and particle count ``n``.

    ``lambda_uv`` may be ``math.inf``; operations that are not uniform in the
    cutoff reject it.
    """

    alpha: float
    mu: float = 1.0
    lambda_uv: float = math.inf
    n: int = 1

    def __post_init__(self):
        if not (self.alpha >= 0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be finite and >= 0, got {self.alpha}", "alpha")
        if not (self.mu >= 0 and math.isfinite(self.mu)):
            raise DomainError(f"mu must be finite and >= 0, got {self.mu}", "mu")
        if not self.lambda_uv > 0:
            raise DomainError(f"lambda_uv must be > 0, got {self.lambda_uv}", "lambda_uv")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n}", "n")
        object.__setattr__(self, "n", int(self.n))

    def omega(self, k):
        """Meson dispersion ``sqrt(k**2 + mu**2)``."""
        return np.sqrt(np.asarray(k, dtype=float) ** 2 + self.mu ** 2)


def q_integrand(r, mu):
    """Radial integrand ``4 pi r^2 / (nu (r^2/2 + nu))`` with ``nu = sqrt(r^2 + mu^2)``."""
    r = np.asarray(r, dtype=float)
    nu = np.hypot(r, mu)
    with np.errstate(invalid="ignore", divide="ignore"):
        val = 4.0 * np.pi * (r / nu) * (r / (0.5 * r * r + nu))
    if mu == 0.0:
        # r^2 / (r (r^2/2 + r)) -> 1 at the origin
        val = np.where(r == 0.0, 4.0 * np.pi, val)
    return val


def q_counterterm(params, tol=1e-10):
    """Counterterm ``Q = alpha N int_{|k|<=Lambda} dk / (omega (k^2/2 + omega))``.

    Computed as ``alpha * n`` times the radial integral, so it is exactly linear
    in ``alpha * n``.

    Raises
    ------
    DivergentCounterterm
        For an infinite cutoff.
    """
    if math.isinf(params.lambda_uv):
        raise DivergentCounterterm("Q grows like 8 pi alpha N log(Lambda); no finite value at Lambda = inf")
    unit = integrate_adaptive(lambda r: q_integrand(r, params.mu), 0.0, params.lambda_uv, tol,
                              rel_tol=1e-14).value
    return (params.alpha * params.n) * unit


def q_log_asymptote(params):
    """Leading large-cutoff behaviour ``8 pi alpha N log(Lambda)``.

    Only meaningful for ``lambda_uv`` well above ``e``; the exact ``Q`` differs
    from it by a cutoff-independent constant that vanishes only relative to
    ``log(Lambda)``.
    """
    return 8.0 * math.pi * params.alpha * params.n * math.log(params.lambda_uv)
