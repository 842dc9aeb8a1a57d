"""Closed-form small-distance expansions and near-field adjusted curves.

For a sphere of radius R at closest distance d from a plate,

    h(d) = (2 pi R lambda / d) [1 - (2 beta - 1) (d/R) log(d/d0)] + O(d^0)

where d0 is an unknown constant of integration. Quantities that do not depend on d0 (the
derivative h', differences H(d) - H(d_ref)) are available without it; absolute values need it.
The same formulas serve spectral (lambda_omega, beta_omega) and aggregated (lambda, beta)
coefficients.
"""

import math
from collections import namedtuple

import numpy as np

from nfheat.errors import DomainError, MissingIntegrationConstant

## Largest d_ref / R accepted by the model form of `near_field_adjusted`
D_REF_LIMIT = 0.1

GEOMETRIES = ("sphere", "two_spheres", "cylinder")

QUANTITIES = ("h", "h_prime", "H", "H_prime", "H_adjusted")

ExpansionCoefficients = namedtuple("ExpansionCoefficients", "lambda_ beta d0", defaults=(None,))
"""(lambda, beta, d0); d0 is None when the integration constant is unknown."""


def _d0(c: ExpansionCoefficients):
    if c.d0 is None:
        raise MissingIntegrationConstant("d0 required for absolute h")
    if not c.d0 > 0:
        raise DomainError(f"d0 must be positive, got {c.d0}")
    return c.d0


def _positive(**values):
    for name, value in values.items():
        if not np.all(np.asarray(value) > 0):
            raise DomainError(f"{name} must be positive")


def sphere_plate_h(d, R, c: ExpansionCoefficients):
    """(2 pi R lambda / d) [1 - (2 beta - 1) (d/R) log(d/d0)]"""
    _positive(d=d, R=R)
    d0 = _d0(c)
    return 2 * math.pi * R * c.lambda_ / d * (1 - (2 * c.beta - 1) * (d / R) * np.log(d / d0))


def sphere_plate_h_prime(d, R, c: ExpansionCoefficients):
    """-(2 pi R lambda / d^2) [1 + (2 beta - 1) d/R]

    This is the signed derivative dh/dd; it is negative for lambda > 0. d0 is not needed.
    """
    _positive(d=d, R=R)
    return -2 * math.pi * R * c.lambda_ / d**2 * (1 + (2 * c.beta - 1) * d / R)


def sphere_plate_H(d, R, agg: ExpansionCoefficients):
    """Frequency-integrated sphere-plate transfer with aggregated coefficients [W]."""
    return sphere_plate_h(d, R, agg)


def two_spheres_H(d, R1, R2, agg: ExpansionCoefficients):
    """Two spheres with aggregated coefficients [W]:

    (2 pi lambda / d) R1 R2/(R1+R2) [1 + d/(R1+R2) log(d/d0) - (2 beta-1)(d/R1 + d/R2) log(d/d0)]
    """
    _positive(d=d, R1=R1, R2=R2)
    d0 = _d0(agg)
    log_term = np.log(d / d0)
    bracket = 1 + d / (R1 + R2) * log_term - (2 * agg.beta - 1) * (d / R1 + d / R2) * log_term
    return 2 * math.pi * agg.lambda_ / d * (R1 * R2 / (R1 + R2)) * bracket


def cylinder_plate_H_per_length(d, R, agg: ExpansionCoefficients):
    """(pi sqrt(R) lambda / (sqrt(2) d^(3/2))) [1 + (2 beta - 3/4) d/R] [W/m]"""
    _positive(d=d, R=R)
    leading = math.pi * math.sqrt(R) * agg.lambda_ / (math.sqrt(2) * d**1.5)
    return leading * (1 + (2 * agg.beta - 0.75) * d / R)


def pta_deviation(d, d_ref, agg: ExpansionCoefficients):
    """4 pi beta lambda log(d / d_ref): adjusted PTA minus adjusted exact sphere-plate transfer."""
    _positive(d=d, d_ref=d_ref)
    return 4 * math.pi * agg.beta * agg.lambda_ * np.log(d / d_ref)


class TransferCurve:
    """A quantity sampled at strictly increasing separations.

    @param quantity  One of `QUANTITIES`
    @param d         Separations [m]
    @param values    Sampled values
    @param metadata  Free-form strings (geometry, units, reference separation, ...)
    """

    def __init__(self, quantity, d, values, metadata=None):
        if quantity not in QUANTITIES:
            raise DomainError(f"unknown quantity {quantity!r}")
        d = np.asarray(d, dtype=float)
        values = np.asarray(values, dtype=float)
        if d.ndim != 1 or d.shape != values.shape or len(d) == 0:
            raise DomainError("d and values must be 1-D arrays of the same length")
        if np.any(d <= 0) or np.any(np.diff(d) <= 0):
            raise DomainError("separations must be positive and strictly increasing")
        if not np.all(np.isfinite(values)):
            raise DomainError("curve values must be finite")
        self.quantity = quantity
        self.d = d
        self.values = values
        self.metadata = dict(metadata or {})

    def __len__(self):
        return len(self.d)

    def value_at(self, d):
        """Linear interpolation in log d; d must lie within the sampled range."""
        if not self.d[0] <= d <= self.d[-1]:
            raise DomainError(f"d={d:g} is outside the curve range [{self.d[0]:g}, {self.d[-1]:g}]")
        return float(np.interp(math.log(d), np.log(self.d), self.values))


class ClosedForm:
    """One of the closed-form expansions with fixed coefficients.

    @param geometry      "sphere", "two_spheres" or "cylinder"
    @param R             Radius of the (first) curved body [m]
    @param coefficients  `ExpansionCoefficients`
    @param R2            Radius of the second sphere (two_spheres only)
    """

    def __init__(self, geometry, R, coefficients: ExpansionCoefficients, R2=None):
        if geometry not in GEOMETRIES:
            raise DomainError(f"no closed form for geometry {geometry!r}")
        if geometry == "two_spheres" and R2 is None:
            raise DomainError("two_spheres needs R2")
        _positive(R=R)
        self.geometry = geometry
        self.R = float(R)
        self.R2 = None if R2 is None else float(R2)
        self.coefficients = coefficients

    @property
    def smallest_radius(self):
        return self.R if self.R2 is None else min(self.R, self.R2)

    def H(self, d):
        if self.geometry == "sphere":
            return sphere_plate_H(d, self.R, self.coefficients)
        if self.geometry == "two_spheres":
            return two_spheres_H(d, self.R, self.R2, self.coefficients)
        return cylinder_plate_H_per_length(d, self.R, self.coefficients)

    def H_pta(self, d):
        """The same expansion with beta = 0."""
        return self.with_beta(0.0).H(d)

    def with_beta(self, beta):
        return ClosedForm(self.geometry, self.R, self.coefficients._replace(beta=beta), self.R2)

    def adjusted(self, d, d_ref):
        """H(d) - H(d_ref), written so that d0 never enters."""
        _positive(d=d, d_ref=d_ref)
        lam, beta = self.coefficients.lambda_, self.coefficients.beta
        if self.geometry == "sphere":
            return 2 * math.pi * self.R * lam * (1 / d - 1 / d_ref) - 2 * math.pi * lam * (
                2 * beta - 1
            ) * np.log(d / d_ref)
        if self.geometry == "two_spheres":
            R1, R2 = self.R, self.R2
            x = R1 * R2 / (R1 + R2) ** 2
            r_eff = R1 * R2 / (R1 + R2)
            return 2 * math.pi * lam * r_eff * (1 / d - 1 / d_ref) + 2 * math.pi * lam * (
                x - (2 * beta - 1)
            ) * np.log(d / d_ref)
        return self.H(d) - self.H(d_ref)


def near_field_adjusted(source, d_ref, d=None):
    """Subtract the value at a reference separation.

    @param source  A `TransferCurve`, or a `ClosedForm` together with the separations `d`
    @param d_ref   Reference separation [m]
    @return  `TransferCurve` of quantity "H_adjusted"
    @exception DomainError if d_ref lies outside the curve, or outside (0, 0.1 R] for a model
    """
    if isinstance(source, TransferCurve):
        reference = source.value_at(d_ref)
        metadata = dict(source.metadata, d_ref=repr(d_ref))
        return TransferCurve("H_adjusted", source.d, source.values - reference, metadata)

    if d is None:
        raise DomainError("a closed-form model needs separations d")
    if not 0 < d_ref <= D_REF_LIMIT * source.smallest_radius:
        raise DomainError(
            f"d_ref={d_ref:g} is outside the expansion's range (0, {D_REF_LIMIT} R]"
        )
    d = np.asarray(d, dtype=float)
    metadata = {"geometry": source.geometry, "d_ref": repr(d_ref)}
    return TransferCurve("H_adjusted", d, source.adjusted(d, d_ref), metadata)
