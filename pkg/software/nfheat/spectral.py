"""Bose-Einstein weighting and frequency integrals.

The net transfer between bodies at temperatures T1 and T2 is

    H = int_0^inf d omega [n(omega, T1) - n(omega, T2)] h(omega)

and the small-distance coefficients are aggregated the same way:

    lambda = int d omega [n(T1) - n(T2)] lambda_omega
    beta   = lambda^-1 int d omega [n(T1) - n(T2)] beta_omega lambda_omega
"""

import logging
import math
from collections import namedtuple

import numpy as np

from nfheat.constants import C, HBAR, K_B, SIGMA
from nfheat.errors import CoverageError, DataFormatError, DomainError, RangeError
from nfheat.file_utils import load_csv
from nfheat.math_extras import integrate, integrate_vector

log = logging.getLogger(__name__)

## hbar omega_max / (k_B max(T1, T2)); the Bose-Einstein weight is below 1e-17 beyond it
CUTOFF_RATIO = 40.0

## Largest share of lambda a table may leave to its tails
COVERAGE_TOLERANCE = 1e-4

AggregateCoefficients = namedtuple("AggregateCoefficients", "lambda_ beta T1 T2")
"""Thermally aggregated coefficients.

    :param lambda_: aggregated lambda [W]; has the sign of T1 - T2
    :param beta: aggregated beta; NaN when lambda_ is zero
"""


def bose_einstein(omega, T):
    """n(omega, T) = 1 / (exp(hbar omega / k_B T) - 1); 0 at T = 0."""
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if T < 0:
        raise DomainError(f"temperature must be >= 0, got {T}")
    if T == 0:
        return 0.0
    x = HBAR * omega / (K_B * T)
    if x > 700.0:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def frequency_cutoff(T1, T2):
    """Upper frequency limit of thermal integrals [rad/s]."""
    return CUTOFF_RATIO * K_B * max(T1, T2) / HBAR


def thermal_wavelength(T):
    """hbar c / (k_B T) [m]."""
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}")
    return HBAR * C / (K_B * T)


def blackbody_flux(T1, T2):
    """Net flux between black bodies, sigma (T1^4 - T2^4) [W m^-2]."""
    return SIGMA * (T1**4 - T2**4)


def _weight(T1, T2):
    def weight(omega):
        return bose_einstein(omega, T1) - bose_einstein(omega, T2)

    return weight


class SpectralTable:
    """A frequency-resolved quantity sampled at increasing frequencies, interpolated linearly.

    Instances are callable; evaluating outside the samples raises `RangeError`.
    """

    def __init__(self, omega, values, name=""):
        omega = np.asarray(omega, dtype=float)
        values = np.asarray(values, dtype=float)
        if omega.ndim != 1 or len(omega) < 2 or omega.shape != values.shape:
            raise DomainError("a spectral table needs at least 2 (omega, value) samples")
        if omega[0] <= 0 or np.any(np.diff(omega) <= 0):
            raise DomainError("table frequencies must be positive and strictly increasing")
        self.omega = omega
        self.values = values
        self.name = name

    def __call__(self, omega):
        if not self.omega[0] <= omega <= self.omega[-1]:
            raise RangeError(f"omega={omega:.6g} rad/s is outside table {self.name!r}")
        return float(np.interp(omega, self.omega, self.values))

    def frequency_range(self):
        return (float(self.omega[0]), float(self.omega[-1]))


def load_spectral_table(filename, column=None) -> SpectralTable:
    """Load ``omega_rad_per_s,<column>`` from a CSV file with a header row.

    Without `column`, the "value" column is used if present, else the first other column.
    """
    columns = load_csv(filename, required=("omega_rad_per_s",) + ((column,) if column else ()))
    if column is None:
        others = [name for name in columns if name != "omega_rad_per_s"]
        if not others:
            raise DataFormatError(filename, None, "no value column")
        column = "value" if "value" in others else others[0]
    omega = columns["omega_rad_per_s"]
    if np.any(np.diff(omega) <= 0):
        raise DataFormatError(filename, None, "omega_rad_per_s is not strictly increasing")
    return SpectralTable(omega, columns[column], name=filename)


def total_transfer(h_spectral, T1, T2, epsrel=1e-8, points=None, omega_max=None):
    """int d omega [n(T1) - n(T2)] h(omega) over [0, omega_max].

    @param h_spectral  Callable omega -> spectral transfer
    @param omega_max   Upper limit; defaults to `frequency_cutoff`
    @return  The integral; exactly antisymmetric under T1 <-> T2
    """
    if T1 == T2:
        return 0.0
    if T1 < T2:
        return -total_transfer(h_spectral, T2, T1, epsrel, points, omega_max)
    weight = _weight(T1, T2)
    upper = frequency_cutoff(T1, T2) if omega_max is None else omega_max
    value, error = integrate(
        lambda omega: weight(omega) * h_spectral(omega) if omega > 0 else 0.0,
        0.0,
        upper,
        epsrel=epsrel,
        points=points,
    )
    log.debug("total transfer: %.6g (error estimate %.3g)", value, error)
    return value


def _tail(weight, edge_value, lo, hi, omega_max, epsrel):
    # edge values continued outside the table: proportional to omega below, constant above
    below = 0.0
    above = 0.0
    if lo > 0:
        below, _ = integrate(lambda w: weight(w) * edge_value[0] * w / lo, 0.0, lo, epsrel=epsrel)
    if hi < omega_max:
        above, _ = integrate(lambda w: weight(w) * edge_value[1], hi, omega_max, epsrel=epsrel)
    return below + above


def aggregate_coefficients(lambda_w, beta_w, T1, T2, epsrel=1e-8, support=None, points=None):
    """Aggregate (lambda_omega, beta_omega) into (lambda, beta) with Bose-Einstein weights.

    @param lambda_w  Callable or `SpectralTable` giving lambda_omega [W s/rad]
    @param beta_w    Callable or `SpectralTable` giving beta_omega
    @param support   Optional (lo, hi) outside which the callables cannot be evaluated; treated
                     like the range of a table
    @param points    Extra breakpoints (resonances) for the quadrature
    @return  `AggregateCoefficients`
    @exception DomainError if T1 == T2 (beta is undefined)
    @exception CoverageError if a table leaves more than 1e-4 of lambda to its tails
    """
    if T1 == T2:
        raise DomainError("beta undefined at equal temperatures")
    if T1 < T2:
        swapped = aggregate_coefficients(lambda_w, beta_w, T2, T1, epsrel, support, points)
        return AggregateCoefficients(-swapped.lambda_, swapped.beta, T1, T2)

    weight = _weight(T1, T2)
    omega_max = frequency_cutoff(T1, T2)
    lo, hi = 0.0, omega_max
    if support is not None:
        lo, hi = max(lo, support[0]), min(hi, support[1])
    points = list(points or ())
    for table in (lambda_w, beta_w):
        if isinstance(table, SpectralTable):
            lo = max(lo, table.omega[0])
            hi = min(hi, table.omega[-1])
            points.extend(table.omega)
    if not lo < hi:
        raise CoverageError("tables do not overlap the thermal frequency window")
    points = sorted({p for p in points if lo < p < hi})

    def integrand(omega):
        if omega <= 0:
            return np.zeros(2)
        weighted = weight(omega) * lambda_w(omega)
        return np.array([weighted, weighted * beta_w(omega)])

    (lam, numerator), error = integrate_vector(
        integrand, lo, hi, epsrel=epsrel, points=points or None
    )

    if lo > 0 or hi < omega_max:
        tail = _tail(weight, (lambda_w(lo), lambda_w(hi)), lo, hi, omega_max, epsrel)
        share = abs(tail) / abs(lam) if lam != 0 else math.inf
        if share > COVERAGE_TOLERANCE:
            raise CoverageError(
                f"tables cover [{lo:.4g}, {hi:.4g}] rad/s; the tails would carry "
                f"{share:.2g} of lambda (limit {COVERAGE_TOLERANCE:g})"
            )
        log.info("table tails carry %.2g of lambda", share)

    beta = numerator / lam if lam != 0 else math.nan
    log.debug("aggregate: lambda=%.6g beta=%.6g (error estimate %.3g)", lam, beta, error)
    return AggregateCoefficients(lambda_=float(lam), beta=float(beta), T1=T1, T2=T2)
