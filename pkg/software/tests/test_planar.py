import math

import numpy as np
import pytest

from nfheat.constants import RAD_PER_UM, SIGMA
from nfheat.errors import DomainError
from nfheat.materials import load_preset, permittivity, quasistatic_validity, surface_frequency
from nfheat.planar import (
    STATUS_OK,
    SpectralDecomposition,
    blackbody_spectral,
    integrate_plate,
    integrate_plate_channels,
    lambda_extract,
    lambda_ladder,
    quasistatic_lambda,
    spectral_transfer,
    spectrum_rows,
)

RESONANCE = 0.597 * RAD_PER_UM


def test_decomposition_total():
    channels = SpectralDecomposition(1.0, 2.0, 3.0, 4.0)

    assert channels.total == 10.0
    assert channels.propagating == 3.0
    assert channels.evanescent == 7.0
    assert channels.scaled(-1.0).total == -10.0


def test_unit_transmission_is_blackbody(sic):
    omega = 1.0e14

    channels = spectral_transfer(sic, sic, omega, 1e-6, unit_transmission=True)

    assert channels.propagating == pytest.approx(blackbody_spectral(omega), rel=1e-12)
    assert channels.evanescent == 0.0


def test_resonance_is_near_surface_mode(sic):
    assert RESONANCE == pytest.approx(surface_frequency(sic), rel=1e-3)


def test_small_gap_dominated_by_evanescent_tm(sic):
    channels = spectral_transfer(sic, sic, RESONANCE, 10e-9)

    assert channels.evan_E >= 0.9 * channels.total


@pytest.mark.parametrize("omega", [1.2e14, 1.6e14, RESONANCE, 2.2e14])
@pytest.mark.parametrize("S", [1e-8, 1e-7, 1e-6])
def test_channels_positive_and_below_blackbody(sic, omega, S):
    channels = spectral_transfer(sic, sic, omega, S)

    assert all(channel >= 0 for channel in channels)
    assert channels.propagating <= blackbody_spectral(omega) * (1 + 1e-9)


def test_total_decreases_with_gap(sic):
    totals = [spectral_transfer(sic, sic, RESONANCE, S).total for S in (1e-8, 3e-8, 1e-7, 3e-7)]

    assert totals == sorted(totals, reverse=True)


def test_evanescent_shrinks_at_large_gaps(sic):
    near = spectral_transfer(sic, sic, 1.6e14, 1e-7)
    far = spectral_transfer(sic, sic, 1.6e14, 1e-4)

    assert far.evanescent < 1e-3 * near.evanescent


def test_spectral_transfer_rejects_bad_gap(sic):
    with pytest.raises(DomainError):
        spectral_transfer(sic, sic, 1e14, 0.0)


def test_inverse_square_plateau(sic):
    lambda_w = lambda_extract(sic, sic, RESONANCE).value
    eps = permittivity(sic, RESONANCE)

    for S in np.geomspace(1e-9, 1e-8, 6):
        evan_E = spectral_transfer(sic, sic, RESONANCE, S, epsrel=1e-10).evan_E
        assert S**2 * evan_E == pytest.approx(lambda_w, rel=1e-2)
    for S in (1e-9, 1e-8):
        assert quasistatic_validity(eps, RESONANCE, S).ratio > 1e2


def test_lambda_matches_quasistatic_integral(sic):
    result = lambda_extract(sic, sic, RESONANCE)

    assert result.value > 0
    assert result.status == STATUS_OK
    assert result.value == pytest.approx(result.quasistatic, rel=5e-3)
    assert result.quasistatic == pytest.approx(quasistatic_lambda(sic, sic, RESONANCE))


@pytest.mark.parametrize("value", [0.55, 0.575, 0.6, 0.625, 0.65])
def test_lambda_over_sic_band(sic, value):
    result = lambda_extract(sic, sic, value * RAD_PER_UM)

    assert result.value == pytest.approx(result.quasistatic, rel=5e-3)


def test_lambda_symmetric_in_bodies(sic, sio2):
    omega = 1.6e14

    forward = lambda_extract(sic, sio2, omega)
    backward = lambda_extract(sio2, sic, omega)

    assert forward.value == pytest.approx(backward.value, rel=1e-9)


def test_lambda_ladder_halves():
    ladder = lambda_ladder(RESONANCE)

    assert len(ladder) == 5
    assert ladder[0] == pytest.approx(10e-9)
    assert ladder[1] / ladder[0] == 0.5


def test_lambda_needs_two_separations(sic):
    with pytest.raises(DomainError):
        lambda_extract(sic, sic, RESONANCE, separations=[1e-9])


def test_equal_temperatures_give_zero(sic):
    assert integrate_plate(sic, sic, 300.0, 300.0, 1e-8) == 0.0


def test_stefan_boltzmann(sic):
    T = 300.0

    H = integrate_plate(sic, sic, T, 0.0, 1e-6, unit_transmission=True)

    assert H == pytest.approx(SIGMA * T**4, rel=1e-4)


def test_plate_transfer_antisymmetric(sic):
    forward = integrate_plate(sic, sic, 300.0, 200.0, 1e-6, unit_transmission=True)
    backward = integrate_plate(sic, sic, 200.0, 300.0, 1e-6, unit_transmission=True)

    assert forward > 0
    assert backward == -forward


@pytest.mark.slow
def test_sic_plate_transfer_exceeds_blackbody_at_small_gaps(sic):
    channels = integrate_plate_channels(sic, sic, 300.0, 0.0, 1e-8)

    assert channels.total > 100 * SIGMA * 300.0**4
    assert channels.evan_E > 0.5 * channels.total


def test_spectrum_rows_keep_grid_order(sic):
    omegas = [1.6e14, RESONANCE]
    separations = [1e-8, 1e-7]

    serial = spectrum_rows(sic, sic, omegas, separations)
    threaded = spectrum_rows(sic, sic, omegas, separations, threads=3)

    assert [row[:2] for row in serial] == [[w, S] for w in omegas for S in separations]
    assert threaded == serial


@pytest.mark.parametrize("omega", np.linspace(1e14, 2.5e14, 7))
@pytest.mark.parametrize("S", [1e-9, 1e-8, 1e-6])
def test_sic_channels_across_reststrahlen_band(sic, omega, S):
    channels = spectral_transfer(sic, sic, omega, S)

    assert all(math.isfinite(channel) and channel >= 0 for channel in channels)
    assert channels.propagating <= blackbody_spectral(omega) * (1 + 1e-9)


@pytest.mark.parametrize("omega", [2e13, 9e13, 1.5e14, 2.2e14, 5e14])
@pytest.mark.parametrize("S", [1e-9, 1e-8, 1e-6])
def test_sio2_channels(sio2, omega, S):
    channels = spectral_transfer(sio2, sio2, omega, S)

    assert all(math.isfinite(channel) and channel >= 0 for channel in channels)
    assert channels.propagating <= blackbody_spectral(omega) * (1 + 1e-9)


@pytest.mark.slow
@pytest.mark.parametrize("material", ["SiC", "SiO2"])
@pytest.mark.parametrize("S", [1e-9, 1e-7, 1e-6])
def test_plate_channels_integrate(material, S):
    model = load_preset(material)

    channels = integrate_plate_channels(model, model, 300.0, 0.0, S)

    assert all(math.isfinite(channel) and channel >= 0 for channel in channels)
    assert channels.total > 0.5 * SIGMA * 300.0**4
