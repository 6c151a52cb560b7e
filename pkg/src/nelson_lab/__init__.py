"""Numerics for explicit ground-state energy lower bounds of the renormalized
Nelson model and the Fröhlich polaron.

The subpackages follow the computation: one-dimensional quadrature and
special functions (:mod:`.quad`), the form factor ``phi`` and its norms
(:mod:`.phi`), the counterterm (:mod:`.counterterm`), the analytic bounds
(:mod:`.bound`, :mod:`.polaron`), Monte Carlo path functionals
(:mod:`.kernels`, :mod:`.pathmc`) and pair partitions (:mod:`.partitions`).
"""

__version__ = "0.1.0"

from .bound import (BoundBreakdown, BoundParams, evaluate_bound, exp_moment_rate, gamma_beta,
                    large_alpha_bound, optimize_bound, small_alpha_bound)
from .counterterm import ModelParams, q_counterterm, q_log_asymptote
from .errors import (DivergentCounterterm, DomainError, PreconditionError, SizingError,
                     ToleranceNotReached)
from .kernels import nelson_kernel, polaron_kernel
from .partitions import (cyclic_latin_square, holder_inequality_check, holder_split,
                         is_admissible, min_admissible_size, partition_from_square)
from .cli import load_schema, run
from .pathmc import (ActionStats, PathEnsemble, SimConfig, action, clark_ocone_rho,
                     energy_estimate, expectation_check, sample_paths, supermartingale_check)
from .phi import derived_constants, phi, phi_norms, theta_constants
from .polaron import polaron_bounds
from .quad import gamma_fn, integrate_adaptive, integrate_semi_infinite, sine_integral
