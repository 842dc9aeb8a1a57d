"""Physical constants used throughout nfheat.

All values are the CODATA values shipped with ``scipy.constants`` so that runs are
bit-reproducible for a given scipy release.
"""

import math

from scipy.constants import Boltzmann, c, hbar

## Reduced Planck constant [J s]
HBAR = hbar

## Boltzmann constant [J/K]
K_B = Boltzmann

## Speed of light in vacuum [m/s]
C = c

## Stefan-Boltzmann constant written in the form used for plate-plate normalisation [W m^-2 K^-4]
SIGMA = math.pi**2 * K_B**4 / (60 * HBAR**3 * C**2)

## Prefactor of the plane-wave sum per unit area: hbar * omega / (4 pi^2) without the omega
SPECTRAL_PREFACTOR = HBAR / (4 * math.pi**2)

## Conversion factor for frequencies given as omega/c in rad/um
RAD_PER_UM = C * 1e6
