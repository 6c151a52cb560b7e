"""Ground-state energy bounds for the Fröhlich polaron with N electrons.

The lower bounds ignore electron-electron repulsion, so they bound the
energy of the attractive-only system and hold a fortiori with repulsion.
"""

import math
from dataclasses import dataclass

from .errors import DomainError
from .phi import phi_norms

__all__ = ["PolaronBounds", "polaron_bounds", "polaron_alpha2_coefficient",
           "PEKAR_COEFFICIENT", "ROUNDED_COEFFICIENT"]

#: literature value of the product-state variational energy per alpha**2 N**3
PEKAR_COEFFICIENT = 0.109
#: the cutoff-uniform alpha**2 coefficient as usually quoted, two digits
ROUNDED_COEFFICIENT = 0.76


def polaron_alpha2_coefficient():
    """``(2/pi**2) ||phi(x)/x||_1**2``, about 0.7596."""
    return 2.0 / math.pi ** 2 * phi_norms().one_norm_over_x ** 2


@dataclass(frozen=True)
class PolaronBounds:
    """Lower and upper bounds on the N-polaron ground-state energy.

    Attributes
    ----------
    lower_cutoff : float
        ``-alpha N - k alpha**2 N (4N - 3)**2`` with the computed ``k``
        (not its two-digit rounding); uniform in the UV cutoff.
    lower_no_cutoff : float
        ``-alpha N - alpha**2 N**3 / 4``, valid without any cutoff.
    pekar_upper : float
        ``-0.109 alpha**2 N**3`` from a product trial state.
    expectation_rate : float
        ``alpha N``, the asymptotic slope of ``E(A_T)`` in ``T``.
    coefficient : float
        The computed ``k`` itself.
    """

    lower_cutoff: float
    lower_no_cutoff: float
    pekar_upper: float
    expectation_rate: float
    coefficient: float

    def as_dict(self):
        return {
            "lower_cutoff": self.lower_cutoff,
            "lower_no_cutoff": self.lower_no_cutoff,
            "pekar_upper": self.pekar_upper,
            "expectation_rate": self.expectation_rate,
            "coefficient": self.coefficient,
            "coefficient_rounded": ROUNDED_COEFFICIENT,
        }


def polaron_bounds(alpha, n=1):
    """Evaluate the polaron bounds for coupling ``alpha`` and ``n`` electrons.

    Examples
    --------
    >>> b = polaron_bounds(1.0, 2)
    >>> b.lower_no_cutoff, round(b.pekar_upper, 12)
    (-4.0, -0.872)
    """
    alpha = float(alpha)
    if not (alpha >= 0.0 and math.isfinite(alpha)):
        raise DomainError(f"alpha must be finite and >= 0, got {alpha}", "alpha")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n}", "n")
    n = int(n)
    k = polaron_alpha2_coefficient()
    a2 = alpha * alpha
    return PolaronBounds(
        lower_cutoff=-alpha * n - k * a2 * n * (4 * n - 3) ** 2,
        lower_no_cutoff=-alpha * n - a2 * n ** 3 / 4.0,
        pekar_upper=-PEKAR_COEFFICIENT * a2 * n ** 3,
        expectation_rate=alpha * n,
        coefficient=k,
    )
