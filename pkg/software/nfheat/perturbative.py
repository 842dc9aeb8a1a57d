"""Matching the gradient expansion to second-order perturbation theory.

For a plate facing a gently deformed plate at mean gap d + s(x), the transfer per unit area is

    alpha_0(d) + alpha_1(d) s(k=0) + int d^2k / (2 pi)^2 alpha_2(k; d) |s(k)|^2

The k^2 coefficient of alpha_2 fixes beta_omega through beta_omega h_pp(d) = alpha_2^(2)(d).
This module does not compute the kernels themselves; it takes any kernel honouring the form
above (as callables or as tabulated values) and performs the matching.
"""

import logging
from collections import namedtuple

import numpy as np

from nfheat.errors import (
    ContractViolation,
    DomainError,
    KernelNotQuadraticError,
    ScalingRegimeError,
)
from nfheat.file_utils import load_csv
from nfheat.fitting import fit_linear
from nfheat.math_extras import central_difference, geometric_ladder

log = logging.getLogger(__name__)

## Relative RMS residual of the {1, k^2, k^4} fit above which a kernel is rejected
RESIDUAL_TOLERANCE = 1e-6

## Relative disagreement of beta between two separations tolerated in the scaling regime
SCALING_TOLERANCE = 1e-2

## Finite-difference step of `consistency_alpha1`, relative to d
ALPHA1_STEP = 1e-4

PerturbativeKernel = namedtuple("PerturbativeKernel", "alpha0 alpha1 alpha2")
"""The three coefficient functions: alpha0(d), alpha1(d) and alpha2(k, d)."""

KernelSamples = namedtuple("KernelSamples", "k values")
"""alpha_2 sampled at in-plane wavevectors k [rad/m] for one separation."""

K2Coefficient = namedtuple("K2Coefficient", "value error residual")
"""alpha_2^(2)(d) with its standard error and the relative RMS residual of the fit."""


def default_k_ladder(d, count=8):
    """`count` wavevectors geometric in [1e-3, 1e-1] / d."""
    return geometric_ladder(1e-3 / d, 1e-1 / d, count)


def _fit_k2(k, values, d, tolerance):
    q = np.asarray(k, dtype=float) * d
    values = np.asarray(values, dtype=float)
    fit = fit_linear(np.column_stack([np.ones_like(q), q**2, q**4]), values)
    scale = np.max(np.abs(values)) or 1.0
    residual = float(np.sqrt(np.mean(fit.residuals**2)) / scale)
    if residual > tolerance:
        raise KernelNotQuadraticError(
            f"kernel not quadratic at probed k (relative residual {residual:.3g})"
        )
    return K2Coefficient(
        value=float(fit.coefficients[1] * d**2),
        error=float(fit.stderr[1] * d**2),
        residual=residual,
    )


def extract_k2(kernel, d, k_probe=None, tolerance=RESIDUAL_TOLERANCE):
    """k^2 coefficient of alpha_2(k; d) from a least-squares fit against {1, k^2, k^4}.

    @param kernel     `PerturbativeKernel`, or `KernelSamples` tabulated at this d
    @param d          Separation [m]
    @param k_probe    Wavevectors to probe; defaults to `default_k_ladder(d)`
    @param tolerance  Largest accepted relative RMS residual
    @return  `K2Coefficient`
    @exception ContractViolation if alpha_2(k) and alpha_2(-k) differ
    @exception KernelNotQuadraticError if the fit residual exceeds the tolerance
    """
    if not d > 0:
        raise DomainError(f"separation must be positive, got {d}")
    if isinstance(kernel, KernelSamples):
        return extract_k2_samples(kernel.k, kernel.values, d, tolerance)

    k = default_k_ladder(d) if k_probe is None else np.asarray(k_probe, dtype=float)
    values = np.array([kernel.alpha2(kk, d) for kk in k], dtype=float)
    mirrored = np.array([kernel.alpha2(-kk, d) for kk in k], dtype=float)
    scale = np.max(np.abs(values)) or 1.0
    if np.max(np.abs(values - mirrored)) > tolerance * scale:
        raise ContractViolation("alpha_2(k; d) is not even in k")
    return _fit_k2(k, values, d, tolerance)


def extract_k2_samples(k, values, d, tolerance=RESIDUAL_TOLERANCE):
    """`extract_k2` for tabulated values.

    Samples at negative k are folded onto |k| after checking they match their mirror images.
    """
    k = np.asarray(k, dtype=float)
    values = np.asarray(values, dtype=float)
    if k.shape != values.shape:
        raise DomainError("k and values must have the same length")
    scale = np.max(np.abs(values)) or 1.0
    for kk, value in zip(k[k < 0], values[k < 0]):
        partner = np.flatnonzero(k == -kk)
        if len(partner) and abs(values[partner[0]] - value) > tolerance * scale:
            raise ContractViolation(f"alpha_2 differs at k = +-{-kk:g}")
    return _fit_k2(np.abs(k), values, d, tolerance)


def load_kernel_csv(filename) -> KernelSamples:
    """Read ``k_rad_per_m,alpha2`` samples of an externally computed kernel."""
    columns = load_csv(filename, required=("k_rad_per_m", "alpha2"))
    return KernelSamples(k=columns["k_rad_per_m"], values=columns["alpha2"])


def _beta_at(kernel, d, h_pp, k_probe, tolerance):
    if not h_pp > 0:
        raise DomainError(f"h_pp must be positive, got {h_pp}")
    return extract_k2(kernel, d, k_probe, tolerance).value / h_pp


def beta_from_kernel(
    kernel,
    d,
    h_pp_at_d,
    check_separation=None,
    k_probe=None,
    tolerance=RESIDUAL_TOLERANCE,
    scaling_tolerance=SCALING_TOLERANCE,
):
    """beta_omega = alpha_2^(2)(d) / h_pp(d).

    @param h_pp_at_d         Plate transfer at d, or a callable of the separation. With a
                             callable, beta is also computed at `check_separation` (default 2d)
                             and both values must agree.
    @return  beta_omega
    @exception ScalingRegimeError if the two separations give different beta
    """
    if callable(h_pp_at_d):
        beta = _beta_at(kernel, d, h_pp_at_d(d), k_probe, tolerance)
        other = 2 * d if check_separation is None else check_separation
        beta_other = _beta_at(kernel, other, h_pp_at_d(other), None, tolerance)
        scale = max(abs(beta), abs(beta_other))
        if scale > 0 and abs(beta - beta_other) > scaling_tolerance * scale:
            raise ScalingRegimeError(
                f"beta={beta:.6g} at d={d:g} but {beta_other:.6g} at d={other:g}; "
                "outside scaling regime"
            )
        return beta
    return _beta_at(kernel, d, h_pp_at_d, k_probe, tolerance)


def consistency_alpha1(kernel, d, step=None, tolerance=1e-6):
    """Relative mismatch |alpha_1(d) - d alpha_0/dd| / |d alpha_0/dd|.

    A uniform shift of the surface changes the gap, so alpha_1 must be the derivative of
    alpha_0. The derivative is taken by central differences with `step` (default 1e-4 d).
    """
    if not d > 0:
        raise DomainError(f"separation must be positive, got {d}")
    h = ALPHA1_STEP * d if step is None else step
    derivative = central_difference(kernel.alpha0, d, h)
    if derivative == 0:
        raise DomainError("alpha_0 has zero slope; the relative residual is undefined")
    residual = abs(kernel.alpha1(d) - derivative) / abs(derivative)
    if residual > tolerance:
        log.warning("alpha_1 is inconsistent with alpha_0 at d=%g (residual %.3g)", d, residual)
    return residual
