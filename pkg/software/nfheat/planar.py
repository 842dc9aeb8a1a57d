"""Heat transfer between two parallel half-spaces.

The spectral transfer per unit area is split into four channels: propagating and evanescent
waves, each for electric (TM, p-polarised) and magnetic (TE, s-polarised) modes. The
near-field divergence lives in the evanescent electric channel, whose S^2-weighted small-gap
limit defines the coefficient lambda_omega.

Integrals over the in-plane wavevector k are done in two pieces:

* propagating waves (k < omega/c) in the variable kz = sqrt(q0^2 - k^2) on [0, q0]
* evanescent waves in u = S * Im(kz) on [0, U_MAX], where the integrand decays as exp(-2u)
"""

import cmath
import logging
import math
from collections import namedtuple

import numpy as np

from nfheat.constants import C, HBAR, SPECTRAL_PREFACTOR
from nfheat.errors import DomainError, ExtrapolationError
from nfheat.materials import permittivity, quasistatic_reflection, reflection
from nfheat.math_extras import integrate, integrate_panels, integrate_vector, richardson
from nfheat.spectral import bose_einstein, frequency_cutoff
from nfheat.thread import parallel_map

log = logging.getLogger(__name__)

## Upper limit of the evanescent u-integral; exp(-2 U_MAX) is far below double precision
U_MAX = 50.0

## Column order of spectrum CSV files
SPECTRUM_COLUMNS = ["omega_rad_per_s", "S_m", "prop_E", "prop_M", "evan_E", "evan_M", "total"]

## Number of halvings used by `lambda_extract`
LAMBDA_LADDER_COUNT = 5

## Largest relative spread of S^2 evan_E over the probe ladder accepted without a warning
PLATEAU_TOLERANCE = 1e-2

STATUS_OK = "ok"
STATUS_PLATEAU = "plateau spread above 1%"


class SpectralDecomposition(namedtuple("SpectralDecomposition", "prop_E prop_M evan_E evan_M")):
    """Four-channel decomposition of the transfer between two plates.

    Spectral values are in W m^-2 (rad/s)^-1; frequency-integrated ones in W m^-2.
    """

    __slots__ = ()

    @property
    def total(self):
        return self.prop_E + self.prop_M + self.evan_E + self.evan_M

    @property
    def propagating(self):
        return self.prop_E + self.prop_M

    @property
    def evanescent(self):
        return self.evan_E + self.evan_M

    def scaled(self, factor):
        return SpectralDecomposition(*(factor * channel for channel in self))


LambdaOmega = namedtuple(
    "LambdaOmega",
    "value omega plateau_estimate_error quasistatic plateau_spread status",
)
"""Small-gap coefficient lambda_omega = lim S^2 evan_E(S) [W s/rad].

    :param plateau_estimate_error: relative difference of the two highest Richardson orders
    :param quasistatic: the same coefficient from the constant-r_M (quasi-static) integral
    :param plateau_spread: relative spread of the raw S^2 evan_E values over the ladder
"""


def blackbody_spectral(omega):
    """Spectral transfer per unit area between two black bodies: hbar omega^3 / (4 pi^2 c^2)."""
    return HBAR * omega**3 / (4 * math.pi**2 * C**2)


def _propagating_integrand(eps1, eps2, q0, S, te):
    def integrand(kz):
        r1 = reflection(eps1, q0, complex(kz))[0 if te else 1]
        r2 = reflection(eps2, q0, complex(kz))[0 if te else 1]
        numerator = (1 - abs(r1) ** 2) * (1 - abs(r2) ** 2)
        return kz * numerator / abs(1 - r1 * r2 * cmath.exp(2j * kz * S)) ** 2

    return integrand


def _evanescent_integrand(eps1, eps2, q0, S, te):
    def integrand(u):
        kz = 1j * u / S
        r1 = reflection(eps1, q0, kz)[0 if te else 1]
        r2 = reflection(eps2, q0, kz)[0 if te else 1]
        decay = math.exp(-2 * u)
        return 4 * u * r1.imag * r2.imag * decay / abs(1 - r1 * r2 * decay) ** 2

    return integrand


def _pole_position(r1, r2):
    # u where |r1 r2| exp(-2u) = 1, i.e. where the coupled surface modes sit
    product = abs(r1 * r2)
    return 0.5 * math.log(product) if product > 1 else None


def _evanescent_edges(eps1, eps2, q0, S, te):
    # Panel edges at kappa = q0 and where kz_m = 0 in either body (the end of the frustrated
    # total internal reflection band). TM adds the coupled surface mode.
    inner = q0 * S
    edges = {0.0, inner, U_MAX, inner * math.sqrt(max(eps1.real, eps2.real, 1.0))}
    for eps in (eps1, eps2):
        if eps.real > 1:
            edges.add(inner * math.sqrt(eps.real - 1))
    if not te:
        edges.add(_pole_position(quasistatic_reflection(eps1), quasistatic_reflection(eps2)))
    return sorted(u for u in edges if u is not None and 0 <= u <= U_MAX)


def _evanescent(eps1, eps2, q0, S, te, epsrel, epsabs=0.0):
    """The evanescent k-integral [m^-2]; `epsabs` is in the same units."""
    value, _ = integrate_panels(
        _evanescent_integrand(eps1, eps2, q0, S, te),
        _evanescent_edges(eps1, eps2, q0, S, te),
        epsrel=epsrel,
        epsabs=epsabs * S**2,
    )
    return value / S**2


def _propagating(eps1, eps2, q0, S, te, epsrel, epsabs=0.0):
    # kz_m = 0 inside [0, q0] for 0 < Re eps < 1
    points = [q0 * math.sqrt(1 - eps.real) for eps in (eps1, eps2) if 0 < eps.real < 1]
    value, _ = integrate(
        _propagating_integrand(eps1, eps2, q0, S, te),
        0.0,
        q0,
        epsrel=epsrel,
        epsabs=epsabs,
        points=points or None,
    )
    return value


def spectral_transfer(mat1, mat2, omega, S, epsrel=1e-8, unit_transmission=False):
    """Spectral heat transfer per unit area between two plates at gap S.

    @param mat1, mat2         Permittivity models of the two half-spaces
    @param omega              Angular frequency [rad/s]
    @param S                  Gap [m]
    @param epsrel             Relative tolerance of each k-integral
    @param unit_transmission  Replace all reflection coefficients by 0 (blackbody reference);
                              the materials are then ignored

    @return  `SpectralDecomposition` in W m^-2 (rad/s)^-1
    @exception DomainError for S <= 0 or omega <= 0
    @exception QuadratureError if a k-integral does not converge
    """
    if not S > 0:
        raise DomainError(f"separation must be positive, got {S}")
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    q0 = omega / C
    prefactor = SPECTRAL_PREFACTOR * omega

    if unit_transmission:
        # the propagating disc integrates to q0^2 / 2 per polarisation
        half = prefactor * q0 * q0 / 2
        return SpectralDecomposition(prop_E=half, prop_M=half, evan_E=0.0, evan_M=0.0)

    eps1 = permittivity(mat1, omega)
    eps2 = permittivity(mat2, omega)
    # electric channels use the TM coefficient r_M, magnetic channels the TE coefficient r_E.
    # Absolute targets scale with the blackbody disc q0^2; TE ones also with the TM result.
    floor = epsrel * q0 * q0
    prop_E = _propagating(eps1, eps2, q0, S, te=False, epsrel=epsrel, epsabs=floor)
    evan_E = _evanescent(eps1, eps2, q0, S, te=False, epsrel=epsrel, epsabs=floor)
    floor = max(floor, epsrel * (abs(prop_E) + abs(evan_E)))
    prop_M = _propagating(eps1, eps2, q0, S, te=True, epsrel=epsrel, epsabs=floor)
    evan_M = _evanescent(eps1, eps2, q0, S, te=True, epsrel=epsrel, epsabs=floor)
    return SpectralDecomposition(prop_E, prop_M, evan_E, evan_M).scaled(prefactor)


def quasistatic_lambda(mat1, mat2, omega, epsrel=1e-10):
    """lambda_omega from the quasi-static reflection coefficient r = (eps-1)/(eps+1).

    (hbar omega / 4 pi^2) int_0^inf u du 4 Im r1 Im r2 exp(-2u) / |1 - r1 r2 exp(-2u)|^2
    """
    r1 = quasistatic_reflection(permittivity(mat1, omega))
    r2 = quasistatic_reflection(permittivity(mat2, omega))

    def integrand(u):
        decay = math.exp(-2 * u)
        return 4 * u * r1.imag * r2.imag * decay / abs(1 - r1 * r2 * decay) ** 2

    pole = _pole_position(r1, r2)
    value, _ = integrate(
        integrand, 0.0, U_MAX, epsrel=epsrel, points=[pole] if pole is not None else None
    )
    return SPECTRAL_PREFACTOR * omega * value


def lambda_ladder(omega, count=LAMBDA_LADDER_COUNT):
    """Probe gaps for `lambda_extract`: halvings from min(10 nm, 0.01 c/omega)."""
    start = min(10e-9, 0.01 * C / omega)
    return start / 2.0 ** np.arange(count)


def lambda_extract(mat1, mat2, omega, epsrel=1e-10, separations=None, threads=1):
    """Extract lambda_omega = lim_{S->0} S^2 evan_E(S) by Richardson extrapolation.

    @param separations  Probe gaps, each half the previous one; defaults to `lambda_ladder`
    @return  `LambdaOmega`
    @exception ExtrapolationError if the extrapolated value is negative
    """
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    ladder = lambda_ladder(omega) if separations is None else np.asarray(separations, float)
    if len(ladder) < 2:
        raise DomainError("lambda_extract needs at least two probe separations")
    eps1 = permittivity(mat1, omega)
    eps2 = permittivity(mat2, omega)
    q0 = omega / C
    prefactor = SPECTRAL_PREFACTOR * omega

    floor = epsrel * q0 * q0

    def plateau_value(S):
        evanescent = _evanescent(eps1, eps2, q0, S, te=False, epsrel=epsrel, epsabs=floor)
        return S**2 * prefactor * evanescent

    values = parallel_map(plateau_value, ladder, threads)
    value, table = richardson(values, ratio=ladder[0] / ladder[1], exponent=2)
    if value < 0:
        raise ExtrapolationError(f"negative lambda_omega {value:.6g} at omega={omega:.6g}")

    scale = abs(value) or 1.0
    spread = (max(values) - min(values)) / scale
    estimate = abs(table[-1][-1] - table[-1][-2]) / scale if len(table) > 1 else math.inf
    status = STATUS_OK
    if spread > PLATEAU_TOLERANCE:
        status = STATUS_PLATEAU
        log.warning(
            "omega=%.6g rad/s: S^2 evan_E varies by %.2g%% over the probe ladder",
            omega,
            100 * spread,
        )
    return LambdaOmega(
        value=value,
        omega=omega,
        plateau_estimate_error=estimate,
        quasistatic=quasistatic_lambda(mat1, mat2, omega),
        plateau_spread=spread,
        status=status,
    )


def _frequency_support(mat1, mat2, omega_max, unit_transmission):
    if unit_transmission:
        return 0.0, omega_max, ()
    lo = max(mat1.frequency_range()[0], mat2.frequency_range()[0])
    hi = min(mat1.frequency_range()[1], mat2.frequency_range()[1], omega_max)
    if lo > 0 or hi < omega_max:
        log.warning(
            "optical data covers [%.4g, %.4g] rad/s of the thermal window [0, %.4g]; "
            "the rest is left out",
            lo,
            hi,
            omega_max,
        )
    breakpoints = sorted(set(mat1.resonances()) | set(mat2.resonances()))
    return lo, hi, [w for w in breakpoints if lo < w < hi]


def integrate_plate_channels(mat1, mat2, T1, T2, S, epsrel=1e-6, unit_transmission=False):
    """Frequency-integrated transfer per unit area, channel by channel.

    The integral runs up to hbar omega = 40 k_B max(T1, T2). For tabulated materials it is
    restricted to the frequencies covered by both tables.

    @return  `SpectralDecomposition` in W m^-2; positive when T1 > T2
    """
    if T1 < 0 or T2 < 0:
        raise DomainError(f"temperatures must be >= 0, got {T1}, {T2}")
    if not S > 0:
        raise DomainError(f"separation must be positive, got {S}")
    if T1 == T2:
        return SpectralDecomposition(0.0, 0.0, 0.0, 0.0)
    if T1 < T2:
        return integrate_plate_channels(
            mat1, mat2, T2, T1, S, epsrel=epsrel, unit_transmission=unit_transmission
        ).scaled(-1.0)

    omega_max = frequency_cutoff(T1, T2)
    lo, hi, breakpoints = _frequency_support(mat1, mat2, omega_max, unit_transmission)
    inner = min(epsrel * 1e-2, 1e-8)

    def integrand(omega):
        if omega <= 0:
            return np.zeros(4)
        weight = bose_einstein(omega, T1) - bose_einstein(omega, T2)
        channels = spectral_transfer(
            mat1, mat2, omega, S, epsrel=inner, unit_transmission=unit_transmission
        )
        return weight * np.array(channels)

    values, error = integrate_vector(integrand, lo, hi, epsrel=epsrel, points=breakpoints)
    log.debug("plate integral T1=%g T2=%g S=%g: error estimate %.3g", T1, T2, S, error)
    return SpectralDecomposition(*(float(v) for v in values))


def integrate_plate(mat1, mat2, T1, T2, S, epsrel=1e-6, unit_transmission=False):
    """Net heat flux per unit area from plate 1 at T1 to plate 2 at T2 [W m^-2]."""
    return integrate_plate_channels(
        mat1, mat2, T1, T2, S, epsrel=epsrel, unit_transmission=unit_transmission
    ).total


def spectrum_rows(mat1, mat2, omegas, separations, epsrel=1e-8, threads=1):
    """Rows of `SPECTRUM_COLUMNS` for every (omega, S) pair, omega varying slowest."""
    grid = [(omega, S) for omega in omegas for S in separations]

    def row(point):
        omega, S = point
        channels = spectral_transfer(mat1, mat2, omega, S, epsrel=epsrel)
        return [omega, S, *channels, channels.total]

    return parallel_map(row, grid, threads)
