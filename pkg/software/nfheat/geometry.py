"""Gap profiles and the brute-force quadratures of the proximity and gradient terms.

A profile describes the vacuum gap S(x) between a plate and a smooth body whose closest point
sits at distance d above the origin. Axisymmetric profiles are integrated in t = rho^2
(d^2x = pi dt), the cylinder in its transverse coordinate x, per unit length.

Sagittas R(1 - sqrt(1 - t/R^2)) are evaluated as t / (R (1 + sqrt(1 - t/R^2))), which keeps
full relative precision near the contact point.
"""

import logging
import math
from collections import namedtuple

import numpy as np

from nfheat.errors import DomainError
from nfheat.math_extras import integrate_panels
from nfheat.thread import parallel_map

log = logging.getLogger(__name__)

GradientCorrection = namedtuple("GradientCorrection", "value log_slope cutoff_sensitivity")
"""Result of `gradient_correction`.

    :param value: the correction itself, in the units of `pta`
    :param log_slope: d value / d ln d; its small-d limit is the logarithmic coefficient
    :param cutoff_sensitivity: relative change of `log_slope` when the rim cutoff is halved
"""

LadderPoint = namedtuple("LadderPoint", "d pta correction total")


def _sagitta(t, R):
    return t / (R * (1.0 + math.sqrt(max(0.0, 1.0 - t / (R * R)))))


def _slope_squared(t, R):
    # |d sag / d rho|^2 for a sphere, as a function of t = rho^2
    return t / (R * R - t)


class HeightProfile:
    """Base class of gap profiles.

    Subclasses define the integration variable v (t = rho^2 or x), the measure that turns a
    v-integral into a surface integral, and the gap and gradient terms as functions of v.
    """

    kind = ""
    axisymmetric = True
    ## True if the gradient diverges at the edge of the projected surface
    singular_rim = False

    def __init__(self, d):
        if not d > 0:
            raise DomainError(f"gap must be positive, got {d}")
        self.d = float(d)

    def with_gap(self, d):
        raise NotImplementedError

    @property
    def measure(self):
        return math.pi if self.axisymmetric else 2.0

    @property
    def effective_radius(self):
        raise NotImplementedError

    @property
    def rim(self):
        """Largest |x| of the projected surface."""
        raise NotImplementedError

    def _v(self, r):
        return r * r if self.axisymmetric else r

    def _v_end(self, r):
        return self._v(r)

    def sag(self, v):
        raise NotImplementedError

    def gradient_terms(self, v):
        """(sum of |grad s_i|^2, grad s_1 . grad s_2) for the surfaces' sagittas."""
        raise NotImplementedError

    def gap(self, v):
        return self.d + self.sag(v)

    def height(self, r):
        """S at distance r = |x| from the closest point."""
        if abs(r) > self.rim:
            raise DomainError(f"|x|={r} lies outside the projected surface")
        return self.gap(self._v(abs(r)))

    def slope_squared(self, r):
        """|grad S|^2 at distance r = |x| from the closest point."""
        own, cross = self.gradient_terms(self._v(abs(r)))
        return own + 2 * cross

    def panel_edges(self, v_end):
        """Panels growing geometrically away from the contact region."""
        if self.axisymmetric:
            first, ratio = 2.0 * self.effective_radius * self.d, 4.0
        else:
            first, ratio = math.sqrt(2.0 * self.effective_radius * self.d), 2.0
        edges = [0.0]
        edge = first
        while edge < v_end:
            edges.append(edge)
            edge *= ratio
        edges.append(v_end)
        return edges

    def __repr__(self):
        return f"{type(self).__name__}(d={self.d:g})"


class Flat(HeightProfile):
    """A plate of the given area parallel to the other plate."""

    kind = "flat"

    def __init__(self, area, d):
        super().__init__(d)
        if not area > 0:
            raise DomainError(f"area must be positive, got {area}")
        self.area = float(area)

    def with_gap(self, d):
        return Flat(self.area, d)

    @property
    def rim(self):
        return math.sqrt(self.area / math.pi)

    @property
    def effective_radius(self):
        return math.inf

    def sag(self, v):
        return 0.0

    def gradient_terms(self, v):
        return 0.0, 0.0


class Sphere(HeightProfile):
    """S = d + R (1 - sqrt(1 - |x|^2 / R^2)) for |x| <= R."""

    kind = "sphere"
    singular_rim = True

    def __init__(self, R, d):
        super().__init__(d)
        if not R > 0:
            raise DomainError(f"radius must be positive, got {R}")
        self.R = float(R)

    def with_gap(self, d):
        return Sphere(self.R, d)

    @property
    def rim(self):
        return self.R

    @property
    def effective_radius(self):
        return self.R

    def sag(self, t):
        return _sagitta(t, self.R)

    def gradient_terms(self, t):
        return _slope_squared(t, self.R), 0.0


class TwoSpheresEffective(HeightProfile):
    """Two spheres facing each other; the gap is d plus both sagittas.

    The projected surface ends at the equator of the smaller sphere.
    """

    kind = "two_spheres"
    singular_rim = True

    def __init__(self, R1, R2, d):
        super().__init__(d)
        if not (R1 > 0 and R2 > 0):
            raise DomainError(f"radii must be positive, got {R1}, {R2}")
        self.R1 = float(R1)
        self.R2 = float(R2)

    def with_gap(self, d):
        return TwoSpheresEffective(self.R1, self.R2, d)

    @property
    def rim(self):
        return min(self.R1, self.R2)

    @property
    def effective_radius(self):
        return self.R1 * self.R2 / (self.R1 + self.R2)

    def sag(self, t):
        return _sagitta(t, self.R1) + _sagitta(t, self.R2)

    def gradient_terms(self, t):
        own = _slope_squared(t, self.R1) + _slope_squared(t, self.R2)
        cross = t / math.sqrt((self.R1**2 - t) * (self.R2**2 - t))
        return own, cross


class Cylinder(HeightProfile):
    """A cylinder of radius R and length L parallel to the plate; quantities are per length."""

    kind = "cylinder"
    axisymmetric = False
    singular_rim = True

    def __init__(self, R, L, d):
        super().__init__(d)
        if not (R > 0 and L > 0):
            raise DomainError(f"radius and length must be positive, got {R}, {L}")
        self.R = float(R)
        self.L = float(L)

    def with_gap(self, d):
        return Cylinder(self.R, self.L, d)

    @property
    def rim(self):
        return self.R

    @property
    def effective_radius(self):
        return self.R

    def sag(self, x):
        return _sagitta(x * x, self.R)

    def gradient_terms(self, x):
        return _slope_squared(x * x, self.R), 0.0


class Paraboloid(HeightProfile):
    """S = d + |x|^2 / (2 R_curv) for |x| <= R_curv."""

    kind = "paraboloid"

    def __init__(self, R_curv, d):
        super().__init__(d)
        if not R_curv > 0:
            raise DomainError(f"radius of curvature must be positive, got {R_curv}")
        self.R_curv = float(R_curv)

    def with_gap(self, d):
        return Paraboloid(self.R_curv, d)

    @property
    def rim(self):
        return self.R_curv

    @property
    def effective_radius(self):
        return self.R_curv

    def sag(self, t):
        return t / (2.0 * self.R_curv)

    def gradient_terms(self, t):
        return t / self.R_curv**2, 0.0


def pta(profile: HeightProfile, h_model, epsrel=1e-10):
    """Proximity transfer approximation: the plate result h_model(S) integrated over the surface.

    @param profile  The gap profile
    @param h_model  Callable S -> plate transfer per unit area
    @return  The integral; per unit length for a `Cylinder`
    """
    if isinstance(profile, Flat):
        return profile.area * h_model(profile.d)
    edges = profile.panel_edges(profile._v_end(profile.rim))
    value, error = integrate_panels(
        lambda v: profile.measure * h_model(profile.gap(v)), edges, epsrel=epsrel
    )
    log.debug("%r: PTA %.12g (error estimate %.3g)", profile, value, error)
    return value


def default_beta_cross(beta_w):
    """Coefficient of grad H_1 . grad H_2 for two curved surfaces."""
    return 2.0 - 2.0 * beta_w


def _gradient_integrals(profile, lambda_w, beta_w, beta_cross, cutoff, epsrel):
    r_end = profile.rim * (1.0 - cutoff) if profile.singular_rim else profile.rim
    edges = profile.panel_edges(profile._v_end(r_end))
    d = profile.d

    def weight(v):
        own, cross = profile.gradient_terms(v)
        # grad H_1 . grad H_2 = -grad s_1 . grad s_2 for surfaces facing each other
        return profile.measure * lambda_w * (beta_w * own - beta_cross * cross)

    value, _ = integrate_panels(lambda v: weight(v) / profile.gap(v) ** 2, edges, epsrel=epsrel)
    slope, _ = integrate_panels(
        lambda v: -2.0 * d * weight(v) / profile.gap(v) ** 3, edges, epsrel=epsrel
    )
    return value, slope


def gradient_correction(profile, lambda_w, beta_w, cutoff=1e-3, epsrel=1e-10, beta_cross=None):
    """First gradient correction beyond the PTA for the plate law h(S) = lambda_w / S^2.

    Computes the integral of lambda_w (beta_w |grad H_1|^2 + beta_w |grad H_2|^2
    + beta_cross grad H_1 . grad H_2) / S^2 over the projected surface; for a single curved
    surface this is beta_w lambda_w |grad S|^2 / S^2. Profiles whose gradient diverges at the
    rim are integrated up to |x| = rim (1 - cutoff).

    @param beta_cross  Mixed coefficient for two curved surfaces; defaults to 2 - 2 beta_w
    @return  `GradientCorrection`
    @exception DomainError if the cutoff is not in (0, 1)
    """
    if not 0.0 < cutoff < 1.0:
        raise DomainError(f"cutoff must lie in (0, 1), got {cutoff}")
    if isinstance(profile, Flat):
        return GradientCorrection(0.0, 0.0, 0.0)
    if beta_cross is None:
        beta_cross = default_beta_cross(beta_w) if isinstance(profile, TwoSpheresEffective) else 0.0
    if beta_w == 0 and (beta_cross == 0 or not isinstance(profile, TwoSpheresEffective)):
        return GradientCorrection(0.0, 0.0, 0.0)

    value, slope = _gradient_integrals(profile, lambda_w, beta_w, beta_cross, cutoff, epsrel)
    sensitivity = 0.0
    if profile.singular_rim and slope != 0:
        _, halved = _gradient_integrals(profile, lambda_w, beta_w, beta_cross, cutoff / 2, epsrel)
        sensitivity = abs(halved - slope) / abs(slope)
    return GradientCorrection(value=value, log_slope=slope, cutoff_sensitivity=sensitivity)


def ladder(profile, separations, lambda_w, beta_w, cutoff=1e-3, epsrel=1e-10, threads=1):
    """PTA, gradient correction and their sum for h(S) = lambda_w / S^2 on a ladder of gaps.

    @param profile      Template profile; its gap is replaced by each ladder value
    @param separations  Gaps d [m]
    @return  list of `LadderPoint` in input order
    """

    def evaluate(d):
        at_d = profile.with_gap(d)
        plate = pta(at_d, lambda S: lambda_w / S**2, epsrel=epsrel)
        correction = gradient_correction(at_d, lambda_w, beta_w, cutoff=cutoff, epsrel=epsrel)
        return LadderPoint(d, plate, correction.value, plate + correction.value)

    return parallel_map(evaluate, np.asarray(separations, dtype=float), threads)


def sphere_pta_exact(R, d, lambda_w):
    """Closed form of `pta` for a sphere and h = lambda_w / S^2: 2 pi lambda [R/d - ln(1 + R/d)]."""
    return 2.0 * math.pi * lambda_w * (R / d - math.log1p(R / d))
