import math

import numpy as np
import pytest

from nfheat.errors import DomainError, QuadratureError
from nfheat.math_extras import (
    central_difference,
    geometric_ladder,
    integrate,
    integrate_panels,
    integrate_vector,
    richardson,
)
from nfheat.thread import parallel_map


def test_integrate_polynomial():
    value, error = integrate(lambda x: 3 * x**2, 0.0, 2.0)

    assert value == pytest.approx(8.0, rel=1e-14)
    assert error < 1e-10


def test_integrate_ignores_points_outside_interval():
    value, _ = integrate(math.exp, 0.0, 1.0, points=[-1.0, 0.5, 2.0])

    assert value == pytest.approx(math.e - 1, rel=1e-12)


def test_integrate_failure_raises():
    with pytest.raises(QuadratureError) as e:
        integrate(lambda x: math.sin(1 / x) / x, 1e-12, 1.0, epsrel=1e-12, limit=5)
    assert e.value.achieved is not None


def test_integrate_panels_sums():
    value, _ = integrate_panels(lambda x: 1 / (1e-6 + x) ** 2, [0.0, 1e-5, 1e-3, 1.0])

    assert value == pytest.approx(1 / 1e-6 - 1 / (1 + 1e-6), rel=1e-10)


def test_integrate_vector():
    values, _ = integrate_vector(lambda x: np.array([1.0, x, x**2]), 0.0, 3.0)

    np.testing.assert_allclose(values, [3.0, 4.5, 9.0], rtol=1e-12)


def test_richardson_removes_quadratic_error():
    h = 0.1 / 2.0 ** np.arange(4)

    value, table = richardson(5.0 + 2.0 * h**2 - 3.0 * h**4)

    assert value == pytest.approx(5.0, rel=1e-12)
    assert len(table) == 4
    assert len(table[-1]) == 4


def test_geometric_ladder():
    ladder = geometric_ladder(1e-9, 1e-5, 5)

    np.testing.assert_allclose(ladder, [1e-9, 1e-8, 1e-7, 1e-6, 1e-5])


@pytest.mark.parametrize("start, stop, count", [(1e-5, 1e-9, 5), (0.0, 1.0, 5), (1.0, 2.0, 1)])
def test_geometric_ladder_rejects(start, stop, count):
    with pytest.raises(DomainError):
        geometric_ladder(start, stop, count)


def test_central_difference():
    assert central_difference(math.sin, 0.3, 1e-4) == pytest.approx(math.cos(0.3), rel=1e-8)


def test_parallel_map_keeps_order():
    def square(x):
        return x * x

    assert parallel_map(square, range(20), threads=4) == [x * x for x in range(20)]
    assert parallel_map(square, [3]) == [9]


def test_parallel_map_propagates_errors():
    def fail(x):
        if x == 3:
            raise DomainError("three")
        return x

    with pytest.raises(DomainError):
        parallel_map(fail, range(6), threads=2)
