"""Monte Carlo evaluation of the Feynman-Kac path functionals.

The workflow is::

    cfg = SimConfig(t_final=8.0, dt=0.01, n_paths=2000, seed=1)
    ens = sample_paths(cfg)
    stats = action(ens, model, cfg, "nelson")
    expectation_check(stats, model, cfg, "nelson")

Paths start at the origin; particle offsets ``x^m`` enter only through the
pair distances, so one ensemble serves every choice of offsets.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .bound import optimize_bound
from .counterterm import ModelParams
from .errors import DomainError, SizingError
from .kernels import KernelTable, RadialModel, _offsets, j_integral
from .phi import phi
from .polaron import ROUNDED_COEFFICIENT

__all__ = [
    "KernelGrid",
    "SimConfig",
    "PathEnsemble",
    "ActionStats",
    "ClarkOconeSample",
    "HeavyTailWarning",
    "sample_paths",
    "simplex_weights",
    "action",
    "expectation_check",
    "energy_estimate",
    "clark_ocone_rho",
    "supermartingale_check",
    "bootstrap_se",
]

DEFAULT_MEMORY_BUDGET = 2 * 1024 ** 3
_BOOTSTRAP_SEED = 20240917
_BOOTSTRAP_RESAMPLES = 400


class HeavyTailWarning(RuntimeWarning):
    """A handful of samples dominate an exponential-moment estimate."""


@dataclass(frozen=True)
class KernelGrid:
    """Interpolation grid for the pair kernel.

    ``d_max`` and ``n_d`` default to values derived from the sampled paths
    (spacing ``0.02 / Lambda``).  ``on_overflow`` decides what happens when a
    path exceeds an explicit ``d_max``: ``"extend"`` rebuilds a larger table,
    ``"exact"`` evaluates the exact kernel at the offending points.
    ``n_tau`` sizes the ``tau`` axis of stand-alone tables; the action itself
    tabulates exactly the time lags of its grid.
    """

    n_tau: int = 256
    n_d: int | None = None
    d_max: float | None = None
    on_overflow: str = "extend"

    def __post_init__(self):
        if self.n_tau < 2 or (self.n_d is not None and self.n_d < 2):
            raise DomainError("kernel grid needs at least two nodes per axis", "kernel_grid")
        if self.d_max is not None and not self.d_max > 0:
            raise DomainError("d_max must be > 0", "d_max")
        if self.on_overflow not in ("extend", "exact"):
            raise DomainError(f"on_overflow must be 'extend' or 'exact', got {self.on_overflow!r}",
                              "on_overflow")


@dataclass(frozen=True)
class SimConfig:
    """Time grid, ensemble size and seeding of a simulation."""

    t_final: float
    dt: float
    n_paths: int
    seed: int = 0
    n_particles: int = 1
    offsets: tuple | None = None
    kernel_grid: KernelGrid = field(default_factory=KernelGrid)
    memory_budget: int = DEFAULT_MEMORY_BUDGET

    def __post_init__(self):
        if not (self.t_final > 0 and math.isfinite(self.t_final)):
            raise DomainError(f"t_final must be positive, got {self.t_final}", "t_final")
        if not self.dt > 0:
            raise DomainError(f"dt must be positive, got {self.dt}", "dt")
        steps = round(self.t_final / self.dt)
        if steps < 1 or abs(steps * self.dt - self.t_final) > 1e-9 * self.t_final:
            raise DomainError(f"dt = {self.dt} does not divide t_final = {self.t_final}", "dt")
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise DomainError(f"n_paths must be an integer >= 1, got {self.n_paths}", "n_paths")
        if int(self.n_particles) != self.n_particles or self.n_particles < 1:
            raise DomainError("n_particles must be an integer >= 1", "n_particles")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError("seed must fit in 64 unsigned bits", "seed")
        off = _offsets(self.offsets, int(self.n_particles))
        object.__setattr__(self, "offsets", tuple(map(tuple, off)))

    @property
    def steps(self):
        return round(self.t_final / self.dt)

    @property
    def offset_array(self):
        return np.array(self.offsets, dtype=float)


@dataclass(frozen=True)
class PathEnsemble:
    """Brownian positions of shape ``(n_paths, steps + 1, N, 3)`` starting at 0."""

    positions: np.ndarray
    dt: float
    seed: int

    @property
    def n_paths(self):
        return self.positions.shape[0]

    @property
    def steps(self):
        return self.positions.shape[1] - 1

    @property
    def n_particles(self):
        return self.positions.shape[2]

    @property
    def t_grid(self):
        return np.arange(self.steps + 1) * self.dt

    @property
    def increments(self):
        return np.diff(self.positions, axis=1)

    def coarsen(self, factor):
        """Every ``factor``-th time point: the same paths on a grid with step ``factor * dt``."""
        factor = int(factor)
        if factor < 1 or self.steps % factor:
            raise DomainError(f"factor {factor} does not divide {self.steps} steps", "factor")
        return PathEnsemble(self.positions[:, ::factor].copy(), self.dt * factor, self.seed)

    def truncate(self, steps):
        """The paths up to time index ``steps`` (inclusive)."""
        return PathEnsemble(self.positions[:, :int(steps) + 1].copy(), self.dt, self.seed)


def _check_memory(cfg, n_particles):
    m = cfg.steps + 1
    need = (cfg.n_paths * m * n_particles * 3 * 8    # positions
            + m * m * 8 + m * (m + 1) // 2 * 48)    # weights and pair work arrays
    if need > cfg.memory_budget:
        raise SizingError(f"simulation needs about {need / 2 ** 20:.0f} MiB, budget is "
                          f"{cfg.memory_budget / 2 ** 20:.0f} MiB; reduce paths or steps")


def path_generator(seed, index):
    """Generator of path ``index``; depends only on ``(seed, index)``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(index),)))


def sample_paths(cfg: SimConfig) -> PathEnsemble:
    """Draw ``cfg.n_paths`` independent 3N-dimensional Brownian paths.

    Raises
    ------
    SizingError
        Before allocating when the ensemble and work arrays exceed the budget.
    """
    n = int(cfg.n_particles)
    _check_memory(cfg, n)
    steps = cfg.steps
    sd = math.sqrt(cfg.dt)
    pos = np.zeros((cfg.n_paths, steps + 1, n, 3))
    for k in range(cfg.n_paths):
        inc = path_generator(cfg.seed, k).standard_normal((steps, n, 3)) * sd
        np.cumsum(inc, axis=0, out=pos[k, 1:])
    return PathEnsemble(pos, cfg.dt, int(cfg.seed))


def simplex_weights(steps, dt):
    """Trapezoid weights ``w[i, j]``, ``j <= i``, for ``int_0^T int_0^t f(t, s) ds dt``.

    The outer rule halves the end points ``t = 0`` and ``t = T``, the inner rule
    halves ``s = 0`` and ``s = t``; the row ``t = 0`` has zero inner length.
    """
    m = int(steps) + 1
    inner = np.tril(np.full((m, m), dt))
    idx = np.arange(m)
    inner[idx, 0] *= 0.5
    inner[idx, idx] *= 0.5
    inner[0, 0] = 0.0
    outer = np.full(m, dt)
    outer[[0, -1]] *= 0.5
    return outer[:, None] * inner


# ---------------------------------------------------------------------------
# action

@dataclass(frozen=True)
class ActionStats:
    """Per-path action values and their summary statistics."""

    samples: np.ndarray
    mean: float
    variance: float
    log_mean_exp: float

    @classmethod
    def from_samples(cls, samples):
        s = np.asarray(samples, dtype=float)
        top = s.max()
        lme = float(top + math.log(np.mean(np.exp(s - top))))
        var = float(s.var(ddof=1)) if len(s) > 1 else 0.0
        return cls(s, float(s.mean()), var, lme)

    @property
    def standard_error(self):
        return math.sqrt(self.variance / len(self.samples))


def _pair_indices(steps):
    i, j = np.tril_indices(steps + 1)
    return i.astype(np.intp), j.astype(np.intp)


def _distance_bound(ens, offsets):
    radius = np.sqrt((ens.positions ** 2).sum(-1)).max(axis=(0, 1))  # per particle
    n = len(radius)
    best = 0.0
    for m in range(n):
        for k in range(n):
            best = max(best, radius[m] + radius[k] + float(np.linalg.norm(offsets[m] - offsets[k])))
    return best


def _kernel_table(radial, ens, cfg, tau_nodes):
    grid = cfg.kernel_grid
    needed = _distance_bound(ens, cfg.offset_array) * 1.001 + 1e-9
    d_max = grid.d_max if grid.d_max is not None else needed
    if needed > d_max and grid.on_overflow == "extend":
        d_max = needed
    n_d = grid.n_d if grid.n_d is not None else int(math.ceil(d_max * radial.lambda_uv / 0.02)) + 2
    return KernelTable(radial, tau_nodes, d_max, n_d)


def action(ensemble: PathEnsemble, model: ModelParams, cfg: SimConfig, which="nelson",
           table: KernelTable | None = None) -> ActionStats:
    """Evaluate ``A_T`` on every path of the ensemble.

    The double time integral uses :func:`simplex_weights`; kernel values come
    from a table on the exact time lags of the grid, interpolated linearly in
    the pair distance.
    """
    radial = RadialModel(which, model)
    offsets = cfg.offset_array
    if offsets.shape[0] != ensemble.n_particles:
        raise DomainError("offsets and ensemble disagree on the particle number", "offsets")
    steps, dt = ensemble.steps, ensemble.dt
    if model.alpha == 0.0:
        return ActionStats.from_samples(np.zeros(ensemble.n_paths))
    if table is None:
        table = _kernel_table(radial, ensemble, cfg, np.arange(steps + 1) * dt)
    i_idx, j_idx = _pair_indices(steps)
    w = simplex_weights(steps, dt)[i_idx, j_idx]
    lag = i_idx - j_idx
    exact_overflow = cfg.kernel_grid.on_overflow == "exact"
    n = ensemble.n_particles
    out = np.empty(ensemble.n_paths)
    for p in range(ensemble.n_paths):
        x = ensemble.positions[p]
        total = 0.0
        for m in range(n):
            xi = x[i_idx, m]
            for k in range(n):
                diff = xi - x[j_idx, k]
                if m != k:
                    diff += offsets[m] - offsets[k]
                d = np.sqrt(np.einsum("ij,ij->i", diff, diff))
                over = d > table.d_max
                if over.any():
                    if not exact_overflow:
                        raise DomainError("distance beyond kernel table", "kernel_grid")
                    vals = table.lookup(lag, np.minimum(d, table.d_max))
                    vals[over] = [radial.kernel(lag[q] * dt, d[q]) for q in np.flatnonzero(over)]
                else:
                    vals = table.lookup(lag, d)
                total += float(w @ vals)
        out[p] = radial.coeff * total
    return ActionStats.from_samples(out)


# ---------------------------------------------------------------------------
# estimators

def bootstrap_se(samples, statistic, resamples=_BOOTSTRAP_RESAMPLES, seed=_BOOTSTRAP_SEED):
    """Bootstrap standard error of ``statistic(samples)`` with a fixed resampling seed."""
    s = np.asarray(samples, dtype=float)
    if len(s) < 2:
        return 0.0
    rng = np.random.default_rng(seed)
    vals = [statistic(s[rng.integers(0, len(s), len(s))]) for _ in range(resamples)]
    return float(np.std(vals, ddof=1))


def _log_mean_exp(s):
    top = np.max(s)
    return float(top + math.log(np.mean(np.exp(s - top))))


def _top_share(s, fraction=0.01):
    s = np.asarray(s, dtype=float)
    weights = np.exp(s - s.max())
    k = max(1, int(math.ceil(fraction * len(s))))
    return float(np.sort(weights)[-k:].sum() / weights.sum())


def expectation_check(stats: ActionStats, model: ModelParams, cfg: SimConfig, which="nelson"):
    """Compare ``mean(A_T)/T`` with its large-``T`` slope.

    For the Nelson action the slope is ``Q`` and the check passes when
    ``mean/(T Q)`` lies in ``[0.8, 1 + 3 SE_rel]``; finite-``T`` corrections
    are negative.  For the polaron the slope is at most ``alpha N`` and the
    check passes when ``mean/T <= alpha N + 3 SE``.
    """
    T = cfg.t_final
    se = stats.standard_error / T
    radial = RadialModel(which, model)
    exact = radial.expected_action(T, cfg.offset_array)
    report = {"model": which, "t_final": T, "n_paths": len(stats.samples),
              "mean_over_t": stats.mean / T, "standard_error": se,
              "exact_expectation_over_t": exact["total"] / T}
    if which == "nelson":
        q = radial.expected_diagonal_rate() * model.alpha * model.n
        ratio = 1.0 if q == 0.0 else stats.mean / (T * q)
        rel_se = 0.0 if q == 0.0 else se / q
        report.update(q=q, ratio=ratio, relative_standard_error=rel_se,
                      passed=bool(model.alpha == 0.0 or 0.8 <= ratio <= 1.0 + 3.0 * rel_se))
    else:
        rate = model.alpha * model.n
        report.update(rate=rate, ratio=1.0 if rate == 0 else stats.mean / (T * rate),
                      passed=bool(stats.mean / T <= rate + 3.0 * se))
    return report


def energy_estimate(stats: ActionStats, model: ModelParams, cfg: SimConfig, which="nelson",
                    bound_total=None):
    """Feynman-Kac energy rate ``log mean exp(A_T) / T`` and the dominance flag.

    The analytic lower bound must not be violated by the simulation:
    Nelson: ``fk_rate - Q <= |bound| + 3 SE`` where ``bound`` defaults to the
    optimized lower bound; polaron: ``fk_rate <= alpha N + 0.76 alpha**2 N (4N - 3)**2 + 3 SE``.

    Warns
    -----
    HeavyTailWarning
        When the top 1% of samples carry more than half of the exponential mass.
    """
    T = cfg.t_final
    fk_rate = stats.log_mean_exp / T
    se = bootstrap_se(stats.samples, _log_mean_exp) / T
    share = _top_share(stats.samples)
    heavy = share > 0.5
    if heavy:
        warnings.warn(f"top 1% of samples carry {share:.0%} of the exponential mass; "
                      "the exponential-moment estimate is unreliable", HeavyTailWarning,
                      stacklevel=2)
    report = {"model": which, "fk_rate": fk_rate, "standard_error": se,
              "top_share": share, "heavy_tail": heavy}
    a, n = model.alpha, model.n
    if which == "nelson":
        q = RadialModel(which, model).expected_diagonal_rate() * a * n
        if bound_total is None:
            bound_total = optimize_bound(model).breakdown.total if a > 0 else 0.0
        report.update(q=q, bound_total=bound_total,
                      dominance=bool(fk_rate - q <= abs(bound_total) + 3.0 * se))
    else:
        limit = a * n + ROUNDED_COEFFICIENT * a * a * n * (4 * n - 3) ** 2
        report.update(limit=limit, dominance=bool(fk_rate <= limit + 3.0 * se))
    return report


# ---------------------------------------------------------------------------
# Clark-Ocone integrand

@dataclass(frozen=True)
class ClarkOconeSample:
    """Adapted integrand and the residual of the discretized expansion.

    ``rho`` has shape ``(n_paths, steps + 1, N, 3)``.  ``residuals`` is
    ``A_T - E(A_T) - I`` per path, where ``I`` approximates the Itô integral
    of ``rho`` by the left-point sum plus the second-order term
    ``(dX^T S dX - dt tr S) / 2`` with ``S`` the Jacobian of ``rho`` in the
    current position.  ``left_point_residuals`` keep the plain sum
    ``sum_k rho_k . (X_{k+1} - X_k)``, whose error variance is only ``O(dt)``.
    """

    rho: np.ndarray
    residuals: np.ndarray
    stochastic_integral: np.ndarray
    left_point_residuals: np.ndarray
    action_samples: np.ndarray
    expected_action: float
    dt: float

    @property
    def residual_variance(self):
        return float(np.var(self.residuals, ddof=1)) if len(self.residuals) > 1 else 0.0

    @property
    def left_point_residual_variance(self):
        r = self.left_point_residuals
        return float(np.var(r, ddof=1)) if len(r) > 1 else 0.0

    @property
    def rho_square_integral(self):
        """``int_0^T |rho_t|^2 dt`` per path (left-point rule)."""
        sq = (self.rho[:, :-1] ** 2).sum(axis=(2, 3))
        return sq.sum(axis=1) * self.dt


def _phi_prime(x):
    """Derivative of ``phi``: ``sin(x)/x - 2 phi(x)/x``, by series near 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 0.1
    xs = np.where(small, 1.0, x)
    direct = np.sin(xs) / xs - 2.0 * phi(xs) / xs
    x2 = x * x
    # phi' = 1/3 - x^2/10 + x^4/168 - x^6/6480 + ...
    series = 1.0 / 3.0 + x2 * (-0.1 + x2 * (1.0 / 168.0 + x2 * (-1.0 / 6480.0)))
    return np.where(small, series, direct)


class _RhoTables:
    """``G(a, b, d)`` on remaining times x lags x distances, ``H(b, d)``, and their ``d``-derivatives."""

    def __init__(self, radial, steps, dt, d_max, n_d):
        self.steps, self.n_d = steps, n_d
        self.d = np.linspace(0.0, d_max, n_d)
        self.h = self.d[1] - self.d[0]
        r, wr = radial.nodes(d_max)
        nu = radial.nu(r)
        lam = nu + 0.5 * r * r
        base = wr * radial.weight(r) * r
        rd = np.outer(r, self.d)
        phimat = phi(rd)
        dphimat = r[:, None] * _phi_prime(rd)
        t = np.arange(steps + 1) * dt
        remaining = t[-1] - t
        # G[k, l, :] with a = l dt, b = T - t_k
        grow = -np.expm1(-np.outer(remaining, lam)) / lam           # (k, r)
        decay = np.exp(-np.outer(t, nu))                              # (l, r)
        coef = (grow[:, None, :] * decay[None, :, :] * base).reshape(-1, len(r))
        self.g = (coef @ phimat).ravel()
        self.gd = (coef @ dphimat).ravel()
        hcoef = np.stack([base * j_integral(r * r, lam, b) for b in remaining])
        self.hvals = (hcoef @ phimat).ravel()
        self.hd = (hcoef @ dphimat).ravel()

    def _interp(self, flat, row, d):
        pos = d / self.h
        k = np.minimum(pos.astype(np.intp), self.n_d - 2)
        frac = pos - k
        base = row * self.n_d + k
        lo = flat[base]
        return lo + frac * (flat[base + 1] - lo)

    def g_at(self, k, lag, d, derivative=False):
        return self._interp(self.gd if derivative else self.g, k * (self.steps + 1) + lag, d)

    def h_at(self, k, d, derivative=False):
        return self._interp(self.hd if derivative else self.hvals, k, d)


def _unit(diff, d):
    safe = np.where(d > 0, d, 1.0)
    return np.where((d > 0)[:, None], diff / safe[:, None], 0.0)


def _radial_jacobian(unit, d, value, slope):
    # Jacobian of y -> yhat f(|y|): f' yhat yhat^T + f/|y| (I - yhat yhat^T)
    safe = np.where(d > 1e-12, d, 1.0)
    over_d = np.where(d > 1e-12, value / safe, slope)
    outer = unit[:, :, None] * unit[:, None, :]
    return slope[:, None, None] * outer + over_d[:, None, None] * (np.eye(3) - outer)


def _accumulate(index, values, length):
    flat = values.reshape(len(index), -1)
    out = np.stack([np.bincount(index, flat[:, c], minlength=length)
                    for c in range(flat.shape[1])], axis=-1)
    return out.reshape((length,) + values.shape[1:])


def _rho_path(x, offsets, tables, k_idx, j_idx, beta, steps):
    """``rho`` (up to the prefactor) and its Jacobian in the current positions.

    Returns arrays of shape ``(steps + 1, N, 3)`` and ``(steps + 1, N, 3, N, 3)``.
    """
    n = x.shape[1]
    m_len = steps + 1
    rho = np.zeros((m_len, n, 3))
    jac = np.zeros((m_len, n, 3, n, 3))
    lag = k_idx - j_idx
    times = np.arange(m_len)
    same = lag == 0
    for a in range(n):
        for b in range(n):
            shift = offsets[a] - offsets[b]
            diff = x[k_idx, a] - x[j_idx, b] + shift
            d = np.sqrt(np.einsum("ij,ij->i", diff, diff))
            unit = _unit(diff, d)
            val = beta * tables.g_at(k_idx, lag, d)
            slope = beta * tables.g_at(k_idx, lag, d, derivative=True)
            rho[:, a] += _accumulate(k_idx, unit * val[:, None], m_len)
            jg = _radial_jacobian(unit, d, val, slope)
            # y moves with X_t^a for every s, and against X_t^b when s = t
            jac[:, a, :, a, :] += _accumulate(k_idx, jg, m_len)
            jac[:, a, :, b, :] -= _accumulate(k_idx[same], jg[same], m_len)
            if a != b:
                diag = x[:, a] - x[:, b] + shift
                dd = np.sqrt(np.einsum("ij,ij->i", diag, diag))
                unit_h = _unit(diag, dd)
                hv = 2.0 * tables.h_at(times, dd)
                hs = 2.0 * tables.h_at(times, dd, derivative=True)
                rho[:, a] += unit_h * hv[:, None]
                jh = _radial_jacobian(unit_h, dd, hv, hs)
                jac[:, a, :, a, :] += jh
                jac[:, a, :, b, :] -= jh
    return rho, jac


def clark_ocone_rho(ensemble: PathEnsemble, model: ModelParams, cfg: SimConfig,
                    which="nelson", action_stats: ActionStats | None = None,
                    expected=None) -> ClarkOconeSample:
    """Adapted integrand ``rho_u = E(D_u A_T | F_u)`` on the time grid.

    With ``y = X_u^l - X_s^n + x^l - x^n`` and ``c = 4 pi coeff``,

        rho_u^l = -c [ sum_n int_0^u yhat G(u - s, T - u, |y_s|) ds
                       + 2 sum_{n != l} yhat H(T - u, |y_u|) ],

        G(a, b, d) = int w r phi(r d) e^{-nu a} (1 - e^{-lam b}) / lam dr,
        H(b, d)    = int w r phi(r d) J(r, b) dr,      lam = nu + r^2/2.

    The first sum is the part of each pair integral with ``s <= u <= t``,
    the second the part with ``u <= s`` for distinct particles (a pair of
    equal particles has no such part since ``X_t - X_s`` does not depend on
    ``X_u`` then).  The ``s`` integral uses the trapezoid rule on ``[0, u]``.

    ``expected`` defaults to the exact continuous-time ``E(A_T)``.
    """
    radial = RadialModel(which, model)
    steps, dt = ensemble.steps, ensemble.dt
    T = steps * dt
    offsets = cfg.offset_array
    if expected is None:
        expected = radial.expected_action(T, offsets)["total"]
    if action_stats is None:
        action_stats = action(ensemble, model, cfg, which)
    inc = ensemble.increments
    if model.alpha == 0.0:
        rho = np.zeros_like(ensemble.positions)
        second = np.zeros(ensemble.n_paths)
    else:
        d_max = _distance_bound(ensemble, offsets) * 1.001 + 1e-9
        n_d = int(math.ceil(d_max * radial.lambda_uv / 0.02)) + 2
        tables = _RhoTables(radial, steps, dt, d_max, n_d)
        k_idx, j_idx = _pair_indices(steps)
        inner = np.tril(np.full((steps + 1, steps + 1), dt))
        inner[:, 0] *= 0.5
        inner[np.arange(steps + 1), np.arange(steps + 1)] *= 0.5
        inner[0, 0] = 0.0
        beta = inner[k_idx, j_idx]
        scale = -4.0 * math.pi * radial.coeff
        rho = np.empty_like(ensemble.positions)
        second = np.empty(ensemble.n_paths)
        for p, x in enumerate(ensemble.positions):
            r_p, jac = _rho_path(x, offsets, tables, k_idx, j_idx, beta, steps)
            rho[p] = scale * r_p
            jac = scale * jac[:-1]
            quad = np.einsum("kac,kacbe,kbe->", inc[p], jac, inc[p])
            trace = np.einsum("kacac->", jac)
            second[p] = 0.5 * (quad - dt * trace)
    left_point = np.einsum("pknc,pknc->p", rho[:, :-1], inc)
    ito = left_point + second
    base = action_stats.samples - expected
    return ClarkOconeSample(rho, base - ito, ito, base - left_point,
                            action_stats.samples, float(expected), dt)


def supermartingale_check(stats: ActionStats, rho_sample: ClarkOconeSample, p, expected=None):
    """Compare both sides of ``E e^{A_T} <= e^{E A_T} E[exp(p^2/(2(p-1)) int rho^2)]^{1-1/p}``.

    ``stats`` and ``rho_sample`` should come from independent ensembles.
    ``expected`` defaults to the expectation stored on ``rho_sample``.
    Passes when ``left <= right + 3 sqrt(SE_left^2 + SE_right^2)``.
    """
    p = float(p)
    if not p > 1.0:
        raise DomainError(f"p must be > 1, got {p}", "p")
    ea = rho_sample.expected_action if expected is None else float(expected)
    power = 1.0 - 1.0 / p
    y = p * p / (2.0 * (p - 1.0)) * rho_sample.rho_square_integral

    def right_of(s):
        return math.exp(ea + power * _log_mean_exp(s))

    left = math.exp(stats.log_mean_exp)
    right = right_of(y)
    se_left = bootstrap_se(stats.samples, lambda s: math.exp(_log_mean_exp(s)))
    se_right = bootstrap_se(y, right_of)
    margin = 3.0 * math.hypot(se_left, se_right)
    return {"p": p, "left": left, "right": right, "se_left": se_left, "se_right": se_right,
            "expected_action": ea, "passed": bool(left <= right + margin)}
