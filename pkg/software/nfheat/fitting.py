"""Least-squares extraction of expansion coefficients.

`fit_beta` recovers beta from sphere-plate derivative data h'(d). Dividing the data by the
leading term -2 pi R lambda / d^2 leaves the bracket

    y(x) = 1 + (2 beta - 1) x + gamma x^2 log x,    x = d / R

which is linear in (beta, gamma), so the fit is an ordinary linear least-squares problem.
"""

import logging
import math
from collections import namedtuple

import numpy as np

from nfheat.errors import FitError
from nfheat.thread import parallel_map

log = logging.getLogger(__name__)

## Largest condition number of the column-scaled design matrix
MAX_CONDITION = 1e12

FIT_COLUMNS = [
    "omega_rad_per_s",
    "beta",
    "gamma",
    "residual_rms",
    "stderr_beta",
    "stderr_gamma",
]

LinearFit = namedtuple("LinearFit", "coefficients stderr residuals rank covariance")

FitResult = namedtuple(
    "FitResult", "beta gamma residual_rms parameter_stderr n_points warnings", defaults=((),)
)
"""Result of `fit_beta`.

    :param gamma: None unless the gamma term was fitted
    :param residual_rms: RMS of the residuals of the normalised bracket
    :param parameter_stderr: dict of standard errors, keyed "beta" (and "gamma")
    :param warnings: non-fatal remarks about the data
"""

## Basis functions of the small-d expansions checked by the geometry oracles
Basis = namedtuple("Basis", "functions transform")
"""Functions of the scaled separation x = d / s, and the matrix (a function of s) taking the
coefficients fitted in x to the coefficients of the same functions of d."""


def _sphere_transform(s):
    log_s = math.log(s)
    return np.array(
        [
            [s, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
            [0, -log_s, 1, 0, 0],
            [0, 0, 0, 1 / s, 0],
            [0, 0, 0, -log_s / s, 1 / s],
        ]
    )


BASES = {
    "sphere": Basis(
        functions=(
            lambda x: 1 / x,
            np.log,
            np.ones_like,
            lambda x: x * np.log(x),
            lambda x: x,
        ),
        transform=_sphere_transform,
    ),
    "cylinder": Basis(
        functions=(
            lambda x: x**-1.5,
            lambda x: x**-0.5,
            np.ones_like,
            lambda x: x**0.5,
        ),
        transform=lambda s: np.diag([s**1.5, s**0.5, 1.0, s**-0.5]),
    ),
}
BASES["two_spheres"] = BASES["sphere"]


def fit_linear(design, y):
    """Least squares with column scaling, a rank check and standard errors.

    @param design  (n, p) design matrix
    @param y       n observations
    @return  `LinearFit`
    @exception FitError if there are fewer observations than parameters or the problem is
               rank deficient / badly conditioned
    """
    design = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = design.shape
    if n < p:
        raise FitError(f"{n} points cannot determine {p} parameters")
    norms = np.linalg.norm(design, axis=0)
    if np.any(norms == 0):
        raise FitError("design matrix has an all-zero column")
    scaled = design / norms
    coefficients, _, rank, singular = np.linalg.lstsq(scaled, y, rcond=None)
    if rank < p or singular[0] / singular[-1] > MAX_CONDITION:
        raise FitError(
            f"rank-deficient fit (rank {rank} of {p}); widen the separation range or add points"
        )
    residuals = y - scaled @ coefficients
    dof = n - p
    variance = residuals @ residuals / dof if dof > 0 else 0.0
    covariance = variance * np.linalg.inv(scaled.T @ scaled) / np.outer(norms, norms)
    stderr = np.sqrt(np.clip(np.diag(covariance), 0.0, None))
    return LinearFit(coefficients / norms, stderr, residuals, rank, covariance)


def fit_expansion(d, values, basis):
    """Fit values(d) to a linear combination of basis functions.

    Named bases are fitted in d divided by its geometric mean and the coefficients mapped
    back to functions of d.

    @param basis  A name from `BASES` or a sequence of callables of d
    @return  `LinearFit`; coefficients in the order of the basis, for functions of d
    """
    d = np.asarray(d, dtype=float)
    if not isinstance(basis, str):
        return fit_linear(np.column_stack([f(d) for f in basis]), values)
    functions, transform = BASES[basis]
    s = float(np.exp(np.mean(np.log(d))))
    fit = fit_linear(np.column_stack([f(d / s) for f in functions]), values)
    matrix = transform(s)
    covariance = matrix @ fit.covariance @ matrix.T
    return LinearFit(
        matrix @ fit.coefficients,
        np.sqrt(np.clip(np.diag(covariance), 0.0, None)),
        fit.residuals,
        fit.rank,
        covariance,
    )


def fit_beta(curve, R, lambda_w, include_gamma=False, d=None):
    """Fit beta (and optionally gamma) to sphere-plate derivative data.

    @param curve          `TransferCurve` of h'(d), or an array of h' values together with `d`
    @param R              Sphere radius [m]
    @param lambda_w       Known lambda_omega (or aggregated lambda)
    @param include_gamma  Also fit the gamma (d/R)^2 log(d/R) term
    @return  `FitResult`
    @exception FitError for too few points or a rank-deficient design
    """
    if d is None:
        d, values = curve.d, curve.values
    else:
        values = curve
    d = np.asarray(d, dtype=float)
    values = np.asarray(values, dtype=float)
    needed = 6 if include_gamma else 4
    if len(d) < needed:
        raise FitError(f"fit needs at least {needed} points, got {len(d)}")
    if np.any(d <= 0):
        raise FitError("separations must be positive")

    warnings = []
    y = values / (-2 * math.pi * R * lambda_w / d**2)
    if np.any(y < 0):
        message = f"{int(np.sum(y < 0))} normalised data point(s) are negative"
        log.warning(message)
        warnings.append(message)

    x = d / R
    columns = [x]
    if include_gamma:
        columns.append(x**2 * np.log(x))
    fit = fit_linear(np.column_stack(columns), y - 1)

    stderr = {"beta": fit.stderr[0] / 2}
    gamma = None
    if include_gamma:
        gamma = float(fit.coefficients[1])
        stderr["gamma"] = float(fit.stderr[1])
    return FitResult(
        beta=float((fit.coefficients[0] + 1) / 2),
        gamma=gamma,
        residual_rms=float(np.sqrt(np.mean(fit.residuals**2))),
        parameter_stderr=stderr,
        n_points=len(d),
        warnings=tuple(warnings),
    )


def fit_beta_batch(datasets, R, include_gamma=False, threads=1):
    """`fit_beta` for several frequencies.

    @param datasets  Sequence of (d, h_prime, lambda_w) tuples
    @return  list of `FitResult` in input order
    """

    def fit(dataset):
        d, values, lambda_w = dataset
        return fit_beta(values, R, lambda_w, include_gamma=include_gamma, d=d)

    return parallel_map(fit, datasets, threads)


def fit_row(omega, result: FitResult):
    """One row of `FIT_COLUMNS`; gamma columns are NaN when gamma was not fitted."""
    gamma = math.nan if result.gamma is None else result.gamma
    return [
        omega,
        result.beta,
        gamma,
        result.residual_rms,
        result.parameter_stderr["beta"],
        result.parameter_stderr.get("gamma", math.nan),
    ]
