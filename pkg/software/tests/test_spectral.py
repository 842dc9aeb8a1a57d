import math

import pytest

from nfheat.constants import C, HBAR, K_B, SIGMA
from nfheat.errors import CoverageError, DataFormatError, DomainError, RangeError
from nfheat.planar import blackbody_spectral
from nfheat.spectral import (
    SpectralTable,
    aggregate_coefficients,
    blackbody_flux,
    bose_einstein,
    frequency_cutoff,
    load_spectral_table,
    thermal_wavelength,
    total_transfer,
)

T = 300.0
THERMAL = K_B * T / HBAR


def test_bose_einstein_zero_temperature():
    assert bose_einstein(1e14, 0.0) == 0.0


def test_bose_einstein_at_unit_ratio():
    assert bose_einstein(THERMAL, T) == pytest.approx(1 / (math.e - 1), rel=1e-12)
    assert bose_einstein(THERMAL, T) == pytest.approx(0.581977, abs=1e-6)


def test_bose_einstein_rayleigh_jeans():
    omega = 1e-3 * THERMAL

    assert bose_einstein(omega, T) == pytest.approx(THERMAL / omega, rel=1e-3)


def test_bose_einstein_deep_wien_tail():
    assert bose_einstein(1000 * THERMAL, T) == pytest.approx(math.exp(-1000), rel=1e-12)


@pytest.mark.parametrize("omega, temperature", [(0.0, T), (-1.0, T), (1e14, -1.0)])
def test_bose_einstein_domain(omega, temperature):
    with pytest.raises(DomainError):
        bose_einstein(omega, temperature)


def test_thermal_wavelength():
    assert thermal_wavelength(T) == pytest.approx(7.63e-6, rel=1e-3)


def test_frequency_cutoff():
    assert frequency_cutoff(T, 100.0) == pytest.approx(40 * THERMAL)


def test_total_transfer_stefan_boltzmann():
    H = total_transfer(blackbody_spectral, T, 0.0)

    assert H == pytest.approx(SIGMA * T**4, rel=1e-6)
    assert blackbody_flux(T, 0.0) == SIGMA * T**4


def test_total_transfer_equal_temperatures():
    assert total_transfer(blackbody_spectral, T, T) == 0.0


def test_total_transfer_antisymmetric():
    forward = total_transfer(blackbody_spectral, 400.0, T)

    assert total_transfer(blackbody_spectral, T, 400.0) == -forward


def test_thermal_weight_peaks_near_thermal_frequency():
    # the weight n(omega) omega^3 of the blackbody integrand peaks at hbar omega ~ 2.82 k_B T
    samples = [x * THERMAL for x in (1.0, 2.0, 2.82, 4.0, 6.0)]
    weighted = [bose_einstein(w, T) * w**3 for w in samples]

    assert max(weighted) == weighted[2]
    assert C / samples[2] == pytest.approx(thermal_wavelength(T) / 2.82, rel=1e-12)


def test_aggregate_constant_beta():
    result = aggregate_coefficients(lambda w: 1e-30 * w, lambda w: 0.37, T, 0.0)

    assert result.beta == pytest.approx(0.37, rel=1e-12)


def test_aggregate_linear_lambda_closed_form():
    c = 1e-30

    result = aggregate_coefficients(lambda w: c * w, lambda w: 0.5, T, 0.0)

    assert result.lambda_ == pytest.approx(c * THERMAL**2 * math.pi**2 / 6, rel=1e-7)
    assert result.T1 == T
    assert result.T2 == 0.0


def test_aggregate_sign_follows_temperatures():
    lam = lambda w: 1e-30 * w
    beta = lambda w: 0.5 + 1e-15 * w

    hot = aggregate_coefficients(lam, beta, 400.0, T)
    cold = aggregate_coefficients(lam, beta, T, 400.0)

    assert hot.lambda_ > 0
    assert cold.lambda_ == -hot.lambda_
    assert cold.beta == hot.beta


def test_aggregate_beta_within_bounds():
    lo, hi = 0.2, 0.8

    def beta(w):
        return lo + (hi - lo) * w / (w + THERMAL)

    result = aggregate_coefficients(lambda w: 1e-30 * w, beta, T, 0.0)

    assert lo <= result.beta <= hi


def test_aggregate_equal_temperatures_raises():
    with pytest.raises(DomainError, match="beta undefined at equal temperatures"):
        aggregate_coefficients(lambda w: 1.0, lambda w: 0.5, T, T)


def test_aggregate_table_with_insufficient_coverage():
    # covers only a narrow band around the thermal peak
    omegas = [2.0 * THERMAL, 3.0 * THERMAL, 4.0 * THERMAL]
    table = SpectralTable(omegas, [1.0, 1.0, 1.0], name="narrow")

    with pytest.raises(CoverageError):
        aggregate_coefficients(table, lambda w: 0.5, T, 0.0)


def test_aggregate_table_with_full_coverage():
    omegas = [1e-6 * THERMAL, 100 * THERMAL]
    table = SpectralTable(omegas, [1e-36 * w for w in omegas], name="linear")

    result = aggregate_coefficients(table, lambda w: 0.5, T, 0.0)

    assert result.lambda_ == pytest.approx(1e-36 * THERMAL**2 * math.pi**2 / 6, rel=2e-6)


def test_spectral_table_range():
    table = SpectralTable([1.0, 2.0], [10.0, 20.0])

    assert table(1.5) == 15.0
    assert table.frequency_range() == (1.0, 2.0)
    with pytest.raises(RangeError):
        table(3.0)


def test_load_spectral_table(write_file):
    filename = write_file(
        "lambda.csv", "# units=W s/rad\nomega_rad_per_s,value\n1e14,2\n2e14,4\n"
    )

    table = load_spectral_table(filename)

    assert table(1.5e14) == pytest.approx(3.0)


def test_load_spectral_table_picks_named_column(write_file):
    filename = write_file(
        "lambda.csv", "omega_rad_per_s,lambda_w,quasistatic\n1e14,2,5\n2e14,4,5\n"
    )

    assert load_spectral_table(filename)(2e14) == 4.0
    assert load_spectral_table(filename, "quasistatic")(2e14) == 5.0


def test_load_spectral_table_unsorted(write_file):
    filename = write_file("lambda.csv", "omega_rad_per_s,value\n2e14,2\n1e14,4\n")

    with pytest.raises(DataFormatError):
        load_spectral_table(filename)


def test_load_spectral_table_missing_column(write_file):
    filename = write_file("lambda.csv", "omega,value\n1e14,2\n2e14,4\n")

    with pytest.raises(DataFormatError):
        load_spectral_table(filename)
