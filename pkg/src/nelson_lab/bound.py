"""Explicit lower bound on the renormalized Nelson ground-state energy.

The bound is a sum of four negative terms that depend on the physical
coupling ``alpha`` and particle number ``N`` and on four free estimate
parameters ``(theta, phi, epsilon, p)``.  It is uniform in the meson mass and
the UV cutoff, so ``mu`` and ``lambda_uv`` of a :class:`ModelParams` are never
read here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit, logit

from .counterterm import ModelParams
from .errors import DomainError, PreconditionError, ToleranceNotReached
from .phi import derived_constants, gamma_fn, phi_norms, theta_constants

__all__ = [
    "BoundParams",
    "BoundBreakdown",
    "LargeAlphaResult",
    "SmallAlphaResult",
    "OptimizeResult",
    "gamma_beta",
    "exp_moment_rate",
    "evaluate_bound",
    "large_alpha_bound",
    "small_alpha_bound",
    "optimize_bound",
    "DEFAULT_P",
]

DEFAULT_P = 2.0
_PI2 = math.pi ** 2


@dataclass(frozen=True)
class BoundParams:
    """Free parameters of the estimate.

    Parameters
    ----------
    theta : float
        Hölder-type exponent in (1, 2) of the exponential-moment lemma.
    phi_param : float
        Exponent in [0, 1) trading short-time against long-time decay.
    epsilon : float
        Time scale separating the near-diagonal part of the action, > 0.
    p : float
        Hölder exponent of the supermartingale estimate, > 1.
    """

    theta: float = 1.5
    phi_param: float = 0.0
    epsilon: float = 1.0
    p: float = DEFAULT_P

    def __post_init__(self):
        for name in ("theta", "phi_param", "epsilon", "p"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not 1.0 < self.theta < 2.0:
            raise DomainError(f"theta must lie in (1, 2), got {self.theta}", "theta")
        if not 0.0 <= self.phi_param < 1.0:
            raise DomainError(f"phi_param must lie in [0, 1), got {self.phi_param}", "phi_param")
        if not (self.epsilon > 0.0 and math.isfinite(self.epsilon)):
            raise DomainError(f"epsilon must be positive and finite, got {self.epsilon}", "epsilon")
        if not (self.p > 1.0 and math.isfinite(self.p)):
            raise DomainError(f"p must be finite and > 1, got {self.p}", "p")


@dataclass(frozen=True)
class BoundBreakdown:
    """The four additive terms of the lower bound and their negated sum."""

    term_cross: float
    term_diag: float
    term_cluster: float
    term_short_range: float
    total: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "total",
            0.0 - (self.term_cross + self.term_diag + self.term_cluster + self.term_short_range))

    def as_dict(self):
        return {
            "term_cross": self.term_cross,
            "term_diag": self.term_diag,
            "term_cluster": self.term_cluster,
            "term_short_range": self.term_short_range,
            "total": self.total,
        }


def gamma_beta(model: ModelParams, bp: BoundParams) -> tuple[float, float]:
    """Rates ``(gamma, beta)`` of the two exponential moments in the estimate.

    ``gamma`` collects the pair terms that are controlled by sup norms alone,
    ``beta`` the coefficient in front of the near-diagonal functional.
    """
    const = derived_constants(bp.theta, bp.phi_param, bp.epsilon)
    a2, n, p = model.alpha ** 2, model.n, bp.p
    c, d = const.c_const, const.d_eps
    gamma = 256.0 * _PI2 * a2 * n * n * p * ((n - 1) * (c * c + 2.0 * c * d) + n * d * d)
    beta = 256.0 * _PI2 * a2 * n * const.f_theta ** 2 * p * p / (p - 1.0)
    return gamma, beta


def exp_moment_rate(lambda_coeff, theta, epsilon, cross=False):
    """Growth rate per unit time of the exponential moment at coupling ``lambda_coeff``.

    The diagonal rate (one particle paired with itself) is
    ``A lambda**(2/(2-theta)) eps**(2/(2-theta)) + B eps**(1-theta/2) lambda / (1-theta/2)``;
    the cross rate for two independent particles keeps only the first piece,
    reduced by ``2**(-theta/(2-theta))``.
    """
    lam = float(lambda_coeff)
    if not lam >= 0.0:
        raise DomainError(f"lambda_coeff must be >= 0, got {lam}", "lambda_coeff")
    bp = BoundParams(theta=theta, epsilon=epsilon)
    a_theta, b_theta = theta_constants(bp.theta)
    q = 2.0 - bp.theta
    cluster = a_theta * lam ** (2.0 / q) * bp.epsilon ** (2.0 / q)
    if cross:
        return 2.0 ** (-bp.theta / q) * cluster
    return cluster + b_theta * bp.epsilon ** (0.5 * q) * lam / (0.5 * q)


def evaluate_bound(model: ModelParams, bp: BoundParams) -> BoundBreakdown:
    """Evaluate the four terms of the lower bound on ``E + Q``.

    Examples
    --------
    >>> evaluate_bound(ModelParams(alpha=0.0), BoundParams()).total
    0.0
    """
    const = derived_constants(bp.theta, bp.phi_param, bp.epsilon)
    alpha, n, p, th, eps = model.alpha, model.n, bp.p, bp.theta, bp.epsilon
    c, d, f = const.c_const, const.d_eps, const.f_theta
    q = 2.0 - th
    pref = 2.0 ** 8 * _PI2 * p * alpha ** 2

    term_cross = pref * n * n * (n - 1) * (c * c + 2.0 * c * d)
    term_diag = pref * n ** 3 * d * d
    term_cluster = (2.0 ** (16.0 / q) * math.pi ** (4.0 / q) * const.a_theta
                    * n ** ((6.0 - th) / q) * alpha ** (4.0 / q) * f ** (4.0 / q)
                    * p ** ((2.0 + th) / q) * (p - 1.0) ** (-th / q) * eps ** (2.0 / q))
    term_short_range = pref * const.b_theta * eps ** (0.5 * q) * n * n * f * f / (0.5 * q)
    return BoundBreakdown(term_cross, term_diag, term_cluster, term_short_range)


@dataclass(frozen=True)
class LargeAlphaResult:
    value: float
    breakdown: BoundBreakdown
    d_constant: float
    params: BoundParams


@dataclass(frozen=True)
class SmallAlphaResult:
    value: float
    breakdown: BoundBreakdown
    params: BoundParams


def large_alpha_params(model: ModelParams, p=DEFAULT_P) -> BoundParams:
    """Parameters ``theta = 3/2, epsilon = (N alpha)**-2, 1 - phi = 1/log(N**2 alpha**2)``."""
    x = (model.n * model.alpha) ** 2
    if not x >= math.e:
        raise PreconditionError(f"large-alpha choice needs N^2 alpha^2 >= e, got {x:.6g}")
    return BoundParams(theta=1.5, phi_param=1.0 - 1.0 / math.log(x), epsilon=1.0 / x, p=p)


def large_alpha_bound(model: ModelParams, p=DEFAULT_P) -> LargeAlphaResult:
    """Bound of order ``-alpha**2 N**3 log(alpha N)**2`` for strong coupling.

    Returns the evaluated breakdown together with ``d_constant``, the
    coefficient for which ``value = -d_constant alpha**2 N**3 log(alpha N)**2``.

    Raises
    ------
    PreconditionError
        When ``N**2 alpha**2 < e``.
    """
    bp = large_alpha_params(model, p)
    br = evaluate_bound(model, bp)
    scale = model.alpha ** 2 * model.n ** 3 * math.log(model.alpha * model.n) ** 2
    return LargeAlphaResult(br.total, br, -br.total / scale, bp)


def large_alpha_u(bp: BoundParams) -> float:
    """``U = 2**8 pi**2 p (2**phi ||phi||_inf Gamma(2 - phi))**2`` for the diagonal term."""
    s = 2.0 ** bp.phi_param * phi_norms().sup_norm * gamma_fn(2.0 - bp.phi_param)
    return 2.0 ** 8 * _PI2 * bp.p * s * s


def small_alpha_params(model: ModelParams, p=DEFAULT_P) -> BoundParams:
    if model.n == 1:
        return BoundParams(theta=1.5, phi_param=0.0, epsilon=1.0, p=p)
    n2 = float(model.n) ** 2
    return BoundParams(theta=1.5, phi_param=1.0 - 1.0 / math.log(n2), epsilon=1.0 / n2, p=p)


def small_alpha_bound(model: ModelParams, p=DEFAULT_P, alpha_max=1.0) -> SmallAlphaResult:
    """Weak-coupling choice with ``alpha``-independent parameters.

    For ``N >= 2`` this uses ``epsilon = N**-2`` and ``1 - phi = 1/log(N**2)``,
    for a single particle ``epsilon = 1`` and ``phi = 0``; ``theta = 3/2`` in
    both cases.

    Raises
    ------
    PreconditionError
        When ``alpha`` exceeds ``alpha_max``.
    """
    if model.alpha > alpha_max:
        raise PreconditionError(f"small-alpha choice configured for alpha <= {alpha_max}, "
                                f"got {model.alpha}")
    bp = small_alpha_params(model, p)
    br = evaluate_bound(model, bp)
    return SmallAlphaResult(br.total, br, bp)


# ---------------------------------------------------------------------------
# optimizer

@dataclass(frozen=True)
class OptimizeResult:
    best: BoundParams
    breakdown: BoundBreakdown
    converged: bool
    n_local_searches: int
    evaluations: int


def _to_params(u):
    return BoundParams(theta=1.0 + float(expit(u[0])), phi_param=float(expit(u[1])),
                       epsilon=math.exp(u[2]), p=1.0 + math.exp(u[3]))


def _to_coords(bp):
    # phi = 0 sits on the boundary of the logit chart; nudge it inside
    ph = min(max(bp.phi_param, 1e-12), 1.0 - 1e-12)
    th = min(max(bp.theta - 1.0, 1e-12), 1.0 - 1e-12)
    return np.array([logit(th), logit(ph), math.log(bp.epsilon), math.log(bp.p - 1.0)])


def optimize_bound(model: ModelParams, starts=4, tol=1e-8, refine=6, seeds=(),
                   max_iter=2000) -> OptimizeResult:
    """Search ``(theta, phi, epsilon, p)`` for the least negative bound.

    A ``starts**4`` grid in the unconstrained chart ``logit(theta - 1)``,
    ``logit(phi)``, ``log(epsilon)``, ``log(p - 1)`` is screened, and
    Nelder-Mead is run from the ``refine`` best grid points and from every seed.
    The seeds always include the weak-coupling parameters and, when
    applicable, the strong-coupling ones.  The returned point is the best
    exactly evaluated candidate, so it dominates every seed and grid point.

    Parameters
    ----------
    model : ModelParams
    starts : int
        Grid points per coordinate.
    tol : float
        Relative simplex size and objective change at convergence.
    refine : int
        Number of grid points used as local-search starts.
    seeds : iterable of BoundParams
        Extra feasible points that the result must dominate.

    Returns
    -------
    OptimizeResult
        ``converged`` is False when the local search that produced the best
        point hit its iteration cap.
    """
    starts = int(starts)
    if starts < 1:
        raise DomainError(f"starts must be >= 1, got {starts}", "starts")

    seed_list = [small_alpha_params(model), BoundParams()]
    try:
        seed_list.append(large_alpha_params(model))
    except PreconditionError:
        pass
    seed_list.extend(seeds)

    if model.alpha == 0.0:
        bp = seed_list[0]
        return OptimizeResult(bp, evaluate_bound(model, bp), True, 0, 1)

    evaluations = 0

    def objective(u):
        nonlocal evaluations
        evaluations += 1
        try:
            with np.errstate(all="ignore"):
                total = evaluate_bound(model, _to_params(u)).total
        except (DomainError, OverflowError, ZeroDivisionError, ToleranceNotReached):
            return math.inf
        if not (math.isfinite(total) and total < 0.0):
            return math.inf
        return math.log(-total)

    frac = (np.arange(starts) + 0.5) / starts
    scale = max(1.0, (model.n * model.alpha) ** 2)
    axes = [
        logit(frac),
        logit(frac),
        np.log(1.0 / scale) + np.linspace(-6.0, 2.0, starts) if starts > 1 else [-math.log(scale)],
        np.log(np.geomspace(0.25, 3.0, starts)),
    ]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 4)
    scores = np.array([objective(u) for u in grid])
    order = np.argsort(scores, kind="stable")[:max(0, int(refine))]

    candidates = [(objective(_to_coords(bp)), bp, True) for bp in seed_list]
    candidates += [(scores[i], _to_params(grid[i]), True) for i in order]
    local_starts = [_to_coords(bp) for bp in seed_list] + [grid[i] for i in order]
    for u0 in local_starts:
        res = minimize(objective, u0, method="Nelder-Mead",
                       options={"xatol": tol, "fatol": tol, "maxiter": max_iter,
                                "maxfev": 2 * max_iter, "adaptive": True})
        if math.isfinite(res.fun):
            candidates.append((res.fun, _to_params(res.x), bool(res.success)))

    # exact re-evaluation; the original seed objects are kept as-is so that
    # chart round-off can never make the result worse than a seed
    best_total, best_bp, best_ok = -math.inf, None, False
    for _, bp, ok in candidates:
        total = evaluate_bound(model, bp).total
        if total > best_total:
            best_total, best_bp, best_ok = total, bp, ok
    return OptimizeResult(best_bp, evaluate_bound(model, best_bp), best_ok,
                          len(local_starts), evaluations)
