"""Dielectric permittivities, Fresnel reflection coefficients and the quasi-static validity check.

Three kinds of permittivity model are supported:

* ``LorentzOscillator``: a single polar-phonon oscillator, e.g. the SiC preset
* ``Tabulated``: measured (or stand-in) optical data, interpolated linearly in omega
* ``Constant``: a frequency independent permittivity

All models are immutable after construction and safe to share between threads.
"""

import cmath
import logging
import math
import os
from collections import namedtuple

import numpy as np

from nfheat.constants import C
from nfheat.errors import ConfigError, DataFormatError, DomainError, RangeError
from nfheat.file_utils import load_json_file, load_table
from nfheat.run_config import data_dir

log = logging.getLogger(__name__)

## Name of the preset file inside the data directory
PRESET_FILE = "presets.json"

## Preset file versions this release understands
SUPPORTED_PRESET_VERSIONS = (1,)

FresnelPair = namedtuple("FresnelPair", "r_E r_M omega k")
"""Reflection coefficients of a half-space at one (omega, k).

    :param r_E: transverse-electric (s) coefficient
    :param r_M: transverse-magnetic (p) coefficient
"""

Validity = namedtuple("Validity", "ratio status")
"""Result of `quasistatic_validity`. `ratio` is None when the status is not "ok"."""

STATUS_OK = "ok"
STATUS_LOSSLESS = "degenerate (lossless)"


class PermittivityModel:
    """Base class for permittivity models."""

    name = ""

    def permittivity(self, omega) -> complex:
        raise NotImplementedError

    def frequency_range(self):
        """The (lowest, highest) frequency at which the model may be evaluated, in rad/s."""
        return (0.0, math.inf)

    def resonances(self):
        """Frequencies where the permittivity changes quickly; used as quadrature breakpoints."""
        return ()

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class LorentzOscillator(PermittivityModel):
    """eps(w) = eps_inf (w_L^2 - w^2 - i g w) / (w_T^2 - w^2 - i g w)

    @param eps_inf  High-frequency permittivity, >= 1
    @param omega_L  Longitudinal optical phonon frequency [rad/s]
    @param omega_T  Transverse optical phonon frequency [rad/s], 0 < omega_T < omega_L
    @param gamma    Damping [rad/s], >= 0
    """

    def __init__(self, eps_inf, omega_L, omega_T, gamma, name="", source=""):
        if not eps_inf >= 1:
            raise DomainError(f"eps_inf must be >= 1, got {eps_inf}")
        if not omega_L > omega_T > 0:
            raise DomainError(f"need omega_L > omega_T > 0, got {omega_L}, {omega_T}")
        if not gamma >= 0:
            raise DomainError(f"gamma must be >= 0, got {gamma}")
        self.eps_inf = float(eps_inf)
        self.omega_L = float(omega_L)
        self.omega_T = float(omega_T)
        self.gamma = float(gamma)
        self.name = name
        self.source = source

    def permittivity(self, omega) -> complex:
        w2 = omega * omega
        damping = 1j * self.gamma * omega
        return self.eps_inf * (self.omega_L**2 - w2 - damping) / (self.omega_T**2 - w2 - damping)

    def static_permittivity(self):
        return self.eps_inf * self.omega_L**2 / self.omega_T**2

    def resonances(self):
        return (self.omega_T, surface_frequency(self), self.omega_L)


class Tabulated(PermittivityModel):
    """Optical data sampled at strictly increasing frequencies.

    Re and Im are interpolated linearly in omega, separately. There is no extrapolation.

    @param omega   Sample frequencies [rad/s]
    @param eps_re  Real parts
    @param eps_im  Imaginary parts, all >= 0
    """

    def __init__(self, omega, eps_re, eps_im, name="", source=""):
        omega = np.asarray(omega, dtype=float)
        eps_re = np.asarray(eps_re, dtype=float)
        eps_im = np.asarray(eps_im, dtype=float)
        if omega.ndim != 1 or len(omega) < 2:
            raise DomainError("a tabulated permittivity needs at least 2 samples")
        if not (omega.shape == eps_re.shape == eps_im.shape):
            raise DomainError("omega, eps_re and eps_im must have the same length")
        if omega[0] <= 0 or np.any(np.diff(omega) <= 0):
            raise DomainError("sample frequencies must be positive and strictly increasing")
        if np.any(eps_im < 0):
            raise DomainError("Im eps < 0 in tabulated data violates passivity")
        self.omega = omega
        self.eps_re = eps_re
        self.eps_im = eps_im
        self.name = name
        self.source = source
        for array in (self.omega, self.eps_re, self.eps_im):
            array.flags.writeable = False

    def permittivity(self, omega) -> complex:
        if not self.omega[0] <= omega <= self.omega[-1]:
            raise RangeError(
                f"omega={omega:.6g} rad/s is outside the table "
                f"[{self.omega[0]:.6g}, {self.omega[-1]:.6g}] of {self.name or 'tabulated data'}"
            )
        return complex(
            np.interp(omega, self.omega, self.eps_re), np.interp(omega, self.omega, self.eps_im)
        )

    def frequency_range(self):
        return (float(self.omega[0]), float(self.omega[-1]))

    def resonances(self):
        # local maxima of the loss
        im = self.eps_im
        peaks = np.flatnonzero((im[1:-1] > im[:-2]) & (im[1:-1] >= im[2:])) + 1
        return tuple(float(w) for w in self.omega[peaks])


class Constant(PermittivityModel):
    """A frequency independent permittivity."""

    def __init__(self, eps, name=""):
        eps = complex(eps)
        if eps.imag < 0:
            raise DomainError("Im eps < 0 violates passivity")
        self.eps = eps
        self.name = name or f"constant {eps}"

    def permittivity(self, omega) -> complex:
        return self.eps


def permittivity(model: PermittivityModel, omega) -> complex:
    """Evaluate eps(omega) for any model.

    @exception DomainError for omega <= 0 or a non-finite result
    @exception RangeError for a tabulated model evaluated outside its samples
    """
    if not omega > 0 or not math.isfinite(omega):
        raise DomainError(f"omega must be positive and finite, got {omega}")
    eps = complex(model.permittivity(omega))
    if not cmath.isfinite(eps):
        raise DomainError(f"permittivity of {model!r} is not finite at omega={omega:.6g}")
    return eps


def surface_frequency(model: LorentzOscillator):
    """Frequency where Re eps = -1 for the undamped oscillator (surface phonon polariton)."""
    e = model.eps_inf
    return math.sqrt((e * model.omega_L**2 + model.omega_T**2) / (e + 1))


def _branch_sqrt(z):
    root = cmath.sqrt(z)
    return -root if root.imag < 0 else root


def reflection(eps, q0, kz) -> tuple:
    """Fresnel coefficients written in terms of the vacuum normal wavevector.

    kz_m is computed as sqrt(kz^2 + (eps - 1) q0^2), which avoids forming k^2 - q0^2 near the
    light cone; r_E uses the cancellation-free form (1 - eps) q0^2 / (kz + kz_m)^2.

    @param eps  Permittivity of the half-space
    @param q0   omega / c
    @param kz   Vacuum normal wavevector, Im kz >= 0
    @return  (r_E, r_M)
    """
    if eps == 1:
        return 0j, 0j
    kzm = _branch_sqrt(kz * kz + (eps - 1) * q0 * q0)
    denominator_E = (kz + kzm) ** 2
    denominator_M = eps * kz + kzm
    if denominator_E == 0 or denominator_M == 0:
        raise DomainError(f"Fresnel coefficient has a pole at eps={eps}, kz={kz}")
    return (1 - eps) * q0 * q0 / denominator_E, (eps * kz - kzm) / denominator_M


def fresnel(eps, omega, k) -> FresnelPair:
    """Fresnel reflection coefficients of a half-space for an in-plane wavevector k.

    @param eps    Permittivity
    @param omega  Angular frequency [rad/s], > 0
    @param k      In-plane wavevector [rad/m], >= 0
    @return  A `FresnelPair`
    """
    eps = complex(eps)
    if not (cmath.isfinite(eps) and math.isfinite(omega) and math.isfinite(k)):
        raise DomainError("non-finite input to fresnel")
    if not omega > 0 or k < 0:
        raise DomainError(f"fresnel needs omega > 0 and k >= 0, got {omega}, {k}")
    q0 = omega / C
    kz = _branch_sqrt(complex(q0 * q0 - k * k))
    r_E, r_M = reflection(eps, q0, kz)
    return FresnelPair(r_E=r_E, r_M=r_M, omega=omega, k=k)


def quasistatic_reflection(eps) -> complex:
    """The k >> omega/c limit of r_M."""
    return (eps - 1) / (eps + 1)


def quasistatic_validity(eps, omega, d) -> Validity:
    """Ratio of the near-field (evanescent TM) loss term to the leading retarded one.

    Im[(eps-1)/(eps+1)] / (Im[eps-1] (omega d / 2c)^2); values much larger than one mean the
    transfer follows the 1/d^2 law.
    """
    if not omega > 0 or not d > 0:
        raise DomainError(f"quasistatic_validity needs omega > 0 and d > 0, got {omega}, {d}")
    eps = complex(eps)
    loss = (eps - 1).imag
    if loss == 0:
        return Validity(ratio=None, status=STATUS_LOSSLESS)
    x = omega * d / (2 * C)
    return Validity(ratio=quasistatic_reflection(eps).imag / (loss * x * x), status=STATUS_OK)


def _preset_path(data_directory):
    return os.path.join(data_directory or data_dir(), PRESET_FILE)


def load_presets(data_directory=None) -> dict:
    """Read the preset file and return its "materials" mapping."""
    filename = _preset_path(data_directory)
    document = load_json_file(filename)
    version = document.get("version")
    if version not in SUPPORTED_PRESET_VERSIONS:
        raise DataFormatError(filename, None, f"unsupported preset file version {version!r}")
    return document.get("materials", {})


def load_optical_data(filename, name="") -> Tabulated:
    """Load an optical data file with lines ``omega_rad_per_s eps_re eps_im``.

    @exception DataFormatError if the file is malformed or its frequencies are not sorted
    """
    table = load_table(filename, columns=3)
    steps = np.diff(table[:, 0])
    if np.any(steps <= 0):
        row = int(np.flatnonzero(steps <= 0)[0]) + 2
        raise DataFormatError(filename, None, f"frequencies not strictly increasing at row {row}")
    if table[0, 0] <= 0:
        raise DataFormatError(filename, None, "frequencies must be positive")
    if np.any(table[:, 2] < 0):
        raise DataFormatError(filename, None, "negative Im eps (not a passive medium)")
    log.debug("loaded %d optical samples from %s", len(table), filename)
    return Tabulated(
        table[:, 0], table[:, 1], table[:, 2], name=name or os.path.basename(filename),
        source=filename,
    )


def load_preset(name, data_directory=None) -> PermittivityModel:
    """Build the named preset material.

    @exception ConfigError if there is no preset with this name
    """
    presets = load_presets(data_directory)
    if name not in presets:
        raise ConfigError(f"unknown material '{name}'; presets are: {', '.join(sorted(presets))}")
    entry = presets[name]
    kind = entry.get("kind")
    source = entry.get("source", "")
    try:
        if kind == "lorentz":
            return LorentzOscillator(
                entry["eps_inf"], entry["omega_L"], entry["omega_T"], entry["gamma"],
                name=name, source=source,
            )
        if kind == "table":
            directory = data_directory or data_dir()
            model = load_optical_data(os.path.join(directory, entry["file"]), name=name)
            model.source = source
            return model
        if kind == "constant":
            return Constant(complex(entry["eps_re"], entry.get("eps_im", 0.0)), name=name)
    except KeyError as e:
        raise DataFormatError(_preset_path(data_directory), None, f"preset {name}: missing {e}")
    raise DataFormatError(
        _preset_path(data_directory), None, f"preset {name}: unknown kind {kind!r}"
    )


def resolve_material(name_or_path, data_directory=None) -> PermittivityModel:
    """A preset name, or the path of an optical data file."""
    if os.path.isfile(name_or_path):
        return load_optical_data(name_or_path)
    return load_preset(name_or_path, data_directory)
