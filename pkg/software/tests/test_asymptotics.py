import math

import numpy as np
import pytest

from nfheat.asymptotics import (
    ClosedForm,
    ExpansionCoefficients,
    TransferCurve,
    cylinder_plate_H_per_length,
    near_field_adjusted,
    pta_deviation,
    sphere_plate_h,
    sphere_plate_h_prime,
    sphere_plate_H,
    two_spheres_H,
)
from nfheat.errors import DomainError, MissingIntegrationConstant
from nfheat.math_extras import central_difference

R = 20e-6
D0 = 1e-9


def coefficients(beta, d0=D0, lam=1.0):
    return ExpansionCoefficients(lam, beta, d0)


def test_half_beta_removes_logarithm():
    d = 1e-3 * R

    assert sphere_plate_h(d, R, coefficients(0.5)) == pytest.approx(2 * math.pi * R / d)
    assert sphere_plate_h_prime(d, R, coefficients(0.5)) == pytest.approx(-2 * math.pi * R / d**2)


def test_log_vanishes_at_d0():
    d0 = 1e-3 * R

    assert sphere_plate_H(d0, R, coefficients(0.774, d0)) == pytest.approx(2 * math.pi * R / d0)


def test_sic_beta_correction_is_small():
    d = 1e-2 * R
    c = coefficients(0.5119)

    relative = sphere_plate_h(d, R, c) / (2 * math.pi * R / d) - 1

    assert abs(relative) <= 0.0238 * (d / R) * abs(math.log(d / D0)) * (1 + 1e-12)


def test_missing_d0():
    with pytest.raises(MissingIntegrationConstant, match="d0 required for absolute h"):
        sphere_plate_h(1e-8, R, ExpansionCoefficients(1.0, 0.5))


def test_h_prime_needs_no_d0():
    assert sphere_plate_h_prime(1e-8, R, ExpansionCoefficients(1.0, 0.2)) < 0


def test_h_prime_is_derivative_of_h():
    c = coefficients(-0.086)
    d = 1e-3 * R

    numeric = central_difference(lambda x: sphere_plate_h(x, R, c), d, 1e-4 * d)

    assert numeric == pytest.approx(sphere_plate_h_prime(d, R, c), rel=1e-6)


def test_h_prime_leading_power_law():
    c = coefficients(0.206)
    d = 1e-6 * R

    ratio = sphere_plate_h_prime(2 * d, R, c) / sphere_plate_h_prime(d, R, c)

    assert ratio == pytest.approx(0.25, rel=1e-5)


def test_two_spheres_reduce_to_sphere_plate():
    c = coefficients(0.5119, lam=2.0)
    d = np.geomspace(1e-4, 1e-1, 9) * R

    np.testing.assert_allclose(
        two_spheres_H(d, R, 1e8 * R, c), sphere_plate_H(d, R, c), rtol=1e-6
    )


def test_two_spheres_log_survives_at_half_beta():
    c = coefficients(0.5)
    d = 1e-2 * R

    bracket = two_spheres_H(d, R, R, c) / (2 * math.pi / d * R / 2)

    assert bracket == pytest.approx(1 + d / (2 * R) * math.log(d / D0))


def test_cylinder_brackets():
    d = 1e-2 * R
    leading = math.pi * math.sqrt(R) / (math.sqrt(2) * d**1.5)

    assert cylinder_plate_H_per_length(d, R, coefficients(0.375)) == pytest.approx(leading)
    assert cylinder_plate_H_per_length(d, R, coefficients(0.0)) == pytest.approx(
        leading * (1 - 0.75 * d / R)
    )


def test_negative_separation_rejected():
    with pytest.raises(DomainError):
        sphere_plate_h_prime(-1e-9, R, coefficients(0.5))


def test_pta_deviation():
    c = coefficients(0.5119)
    d_ref = 0.004 * R

    assert pta_deviation(d_ref, d_ref, c) == 0.0
    assert pta_deviation(0.05 * R, d_ref, c._replace(beta=0.0)) == 0.0
    assert pta_deviation(0.05 * R, d_ref, c) == pytest.approx(
        4 * math.pi * 0.5119 * math.log(12.5)
    )


@pytest.mark.parametrize("geometry", ["sphere", "two_spheres"])
def test_pta_deviation_is_adjusted_difference(geometry):
    c = coefficients(0.5119, lam=3.0)
    model = ClosedForm(geometry, R, c, R2=2 * R)
    d_ref = 0.004 * R
    d = np.geomspace(1e-4, 1e-1, 7) * R

    difference = model.with_beta(0.0).adjusted(d, d_ref) - model.adjusted(d, d_ref)

    np.testing.assert_allclose(difference, pta_deviation(d, d_ref, c), rtol=1e-9, atol=1e-9)


@pytest.mark.parametrize("geometry", ["sphere", "two_spheres", "cylinder"])
def test_adjusted_model_independent_of_d0(geometry):
    d = np.geomspace(1e-3, 1e-1, 5) * R
    d_ref = 0.004 * R

    first = ClosedForm(geometry, R, coefficients(0.774, D0), R2=3 * R).adjusted(d, d_ref)
    second = ClosedForm(geometry, R, coefficients(0.774, 10 * D0), R2=3 * R).adjusted(d, d_ref)
    unset = ClosedForm(geometry, R, coefficients(0.774, None), R2=3 * R)

    np.testing.assert_allclose(first, second, rtol=1e-9)
    np.testing.assert_allclose(unset.adjusted(d, d_ref), first, rtol=1e-9)


@pytest.mark.parametrize("geometry", ["sphere", "two_spheres", "cylinder"])
def test_adjusted_matches_absolute_difference(geometry):
    model = ClosedForm(geometry, R, coefficients(0.206), R2=2 * R)
    d = np.geomspace(1e-3, 1e-1, 5) * R
    d_ref = 0.004 * R

    expected = model.H(d) - model.H(d_ref)

    np.testing.assert_allclose(
        model.adjusted(d, d_ref), expected, rtol=1e-8, atol=1e-12 * model.H(d_ref)
    )


def test_near_field_adjusted_model():
    model = ClosedForm("sphere", R, coefficients(0.5119))
    d_ref = 0.004 * R
    d = np.array([d_ref, 0.01 * R, 0.1 * R])

    curve = near_field_adjusted(model, d_ref, d)

    assert curve.quantity == "H_adjusted"
    assert curve.values[0] == 0.0
    assert curve.metadata["geometry"] == "sphere"


def test_near_field_adjusted_reference_out_of_range():
    model = ClosedForm("sphere", R, coefficients(0.5119))

    with pytest.raises(DomainError):
        near_field_adjusted(model, 0.2 * R, np.array([0.01 * R, 0.1 * R]))


def test_near_field_adjusted_data():
    curve = TransferCurve("H", [1.0, 2.0, 4.0], [10.0, 6.0, 2.0], {"geometry": "sphere"})

    adjusted = near_field_adjusted(curve, 2.0)

    np.testing.assert_array_equal(adjusted.values, [4.0, 0.0, -4.0])
    assert adjusted.metadata["geometry"] == "sphere"
    with pytest.raises(DomainError):
        near_field_adjusted(curve, 8.0)


def test_transfer_curve_requires_increasing_separations():
    with pytest.raises(DomainError):
        TransferCurve("H", [2.0, 1.0], [1.0, 1.0])
    with pytest.raises(DomainError):
        TransferCurve("X", [1.0, 2.0], [1.0, 1.0])
    with pytest.raises(DomainError):
        TransferCurve("H", [1.0, 2.0], [1.0, math.inf])


def test_unknown_geometry():
    with pytest.raises(DomainError):
        ClosedForm("cube", R, coefficients(0.5))
