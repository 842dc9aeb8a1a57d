"""Numerical helpers shared by the physics modules.

Thin wrappers around ``scipy.integrate`` that turn QUADPACK failures into exceptions,
plus the small pieces of numerical analysis (Richardson tables, finite differences, ladders)
that several modules need.
"""

import logging

import numpy as np
from scipy.integrate import quad, quad_vec

from nfheat.errors import DomainError, QuadratureError

log = logging.getLogger(__name__)

## Default subinterval limit handed to QUADPACK
QUAD_LIMIT = 200


def integrate(func, a, b, epsrel=1e-8, epsabs=0.0, points=None, limit=QUAD_LIMIT):
    """Adaptive Gauss-Kronrod quadrature of a real scalar function on [a, b].

    QUADPACK sometimes flags round-off although the error estimate already satisfies the
    requested tolerance; such results are accepted.

    @param func    Integrand f(x) -> float
    @param a       Lower limit
    @param b       Upper limit (finite)
    @param epsrel  Requested relative accuracy
    @param epsabs  Requested absolute accuracy
    @param points  Optional breakpoints inside (a, b)
    @param limit   Maximum number of subintervals

    @return  (value, abserr)
    @exception QuadratureError if the requested accuracy was not reached
    """
    if points is not None:
        points = [p for p in points if a < p < b] or None
    result = quad(
        func, a, b, epsabs=epsabs, epsrel=epsrel, points=points, limit=limit, full_output=1
    )
    value, abserr = result[0], result[1]
    if len(result) > 3:
        target = max(epsabs, epsrel * abs(value))
        if not np.isfinite(value) or abserr > 10 * target:
            raise QuadratureError(f"quadrature on [{a:.6g}, {b:.6g}] failed: {result[3]}", abserr)
        log.debug("accepting flagged quadrature on [%g, %g]: %s", a, b, result[3])
    return value, abserr


def integrate_panels(func, edges, epsrel=1e-8, epsabs=0.0):
    """Integrate over consecutive panels [edges[i], edges[i + 1]] and sum the results.

    Used where the integrand varies on very different scales across the domain.

    @return  (value, abserr) summed over the panels
    """
    total = 0.0
    error = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        value, abserr = integrate(func, a, b, epsrel=epsrel, epsabs=epsabs)
        total += value
        error += abserr
    return total, error


def integrate_vector(func, a, b, epsrel=1e-8, epsabs=0.0, points=None, limit=QUAD_LIMIT):
    """Adaptive quadrature of a vector-valued function, all components sharing one subdivision.

    @return  (values, abserr) with `values` a numpy array
    @exception QuadratureError if the requested accuracy was not reached
    """
    if points is not None:
        points = [p for p in points if a < p < b] or None
    values, abserr, info = quad_vec(
        func, a, b, epsabs=epsabs, epsrel=epsrel, points=points, limit=limit, full_output=True
    )
    if info.status != 0 or not np.all(np.isfinite(values)):
        raise QuadratureError(
            f"vector quadrature on [{a:.6g}, {b:.6g}] failed: {info.message}", abserr
        )
    return np.asarray(values), abserr


def richardson(values, ratio=2.0, exponent=2):
    """Richardson extrapolation of a sequence computed on a geometric step ladder.

    ``values[i]`` is assumed to be F(h0 / ratio**i) with F(h) = F(0) + c1 h^p + c2 h^(2p) + ...
    where p = `exponent`.

    @param values    Sequence of estimates, coarsest first
    @param ratio     Step ratio between consecutive estimates
    @param exponent  Power of the leading error term
    @return  (extrapolated value, the Neville-style table as a list of rows)
    """
    table = []
    for n, value in enumerate(values):
        row = [float(value)]
        for j in range(1, n + 1):
            factor = ratio ** (exponent * j)
            row.append(row[j - 1] + (row[j - 1] - table[n - 1][j - 1]) / (factor - 1))
        table.append(row)
    return table[-1][-1], table


def geometric_ladder(start, stop, count):
    """`count` points from `start` to `stop` with a constant ratio, both ends included."""
    if not 0 < start < stop:
        raise DomainError(f"ladder needs 0 < start < stop, got {start}, {stop}")
    if count < 2:
        raise DomainError("ladder needs at least two points")
    return np.geomspace(start, stop, count)


def central_difference(func, x, step):
    """Second-order central difference approximation of func'(x)."""
    return (func(x + step) - func(x - step)) / (2 * step)
