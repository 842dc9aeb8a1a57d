import math
import os

import numpy as np
import pytest

from nfheat.cli import SPHERE_LIMIT_TOLERANCE, main
from nfheat.constants import RAD_PER_UM
from nfheat.file_utils import load_csv
from nfheat.spectral import bose_einstein

R = 20e-6


@pytest.fixture
def run(tmp_path, write_file):
    """Run the command line with a TOML configuration; returns (exit code, output path)."""

    def run(config, *args, out="out.csv"):
        filename = write_file("run.toml", config)
        output = str(tmp_path / out)
        return main(["--config", filename, "--out", output, *args]), output

    return run


def metadata(filename):
    with open(filename) as f:
        return dict(line[2:].strip().split("=", 1) for line in f if line.startswith("# "))


H_PRIME_CONFIG = """
[expansion]
beta = -3.026
quantity = "h_prime"

[ladder]
min = 8e-8
max = 2e-6
count = 20
spacing = "linear"
"""


def test_expand_then_fit_recovers_beta(run, tmp_path):
    code, curve = run(H_PRIME_CONFIG, "expand")
    assert code == 0
    assert metadata(curve)["sign_convention"].startswith("signed")
    assert np.all(load_csv(curve)["h_prime"] < 0)

    fitted = str(tmp_path / "fit.csv")
    code = main(["--config", str(tmp_path / "run.toml"), "--out", fitted, "fit", curve])

    assert code == 0
    columns = load_csv(fitted)
    assert list(columns) == ["omega_rad_per_s", "beta", "residual_rms", "stderr_beta"]
    assert columns["beta"][0] == pytest.approx(-3.026, abs=1e-6)


def test_fit_with_gamma_column(run, tmp_path):
    _, curve = run(H_PRIME_CONFIG, "expand", out="curve.csv")

    code, fitted = run(H_PRIME_CONFIG + "\n[fit]\ninclude_gamma = true\n", "fit", curve)

    assert code == 0
    columns = load_csv(fitted)
    assert "gamma" in columns
    assert "stderr_gamma" in columns
    assert columns["gamma"][0] == pytest.approx(0.0, abs=1e-6)


def test_fit_groups_by_frequency(run, write_file):
    d = np.linspace(0.004, 0.1, 10) * R
    lines = ["omega_rad_per_s,d_m,h_prime,lambda_w"]
    for omega, beta, lam in ((1.7e14, 0.774, 2.0), (1.8e14, 0.206, 3.0)):
        h_prime = -2 * math.pi * R * lam / d**2 * (1 + (2 * beta - 1) * d / R)
        lines += [f"{omega!r},{float(x)!r},{float(y)!r},{lam!r}" for x, y in zip(d, h_prime)]
    data = write_file("bundle.csv", "\n".join(lines) + "\n")

    code, fitted = run("", "fit", data)

    assert code == 0
    columns = load_csv(fitted)
    np.testing.assert_allclose(columns["omega_rad_per_s"], [1.7e14, 1.8e14])
    np.testing.assert_allclose(columns["beta"], [0.774, 0.206], atol=1e-6)


def test_fit_malformed_csv(run, write_file, capsys):
    data = write_file("bad.csv", "d_m,h_prime\n1e-8,-2\n2e-8\n")

    code, fitted = run("", "fit", data)

    assert code == 4
    assert "bad.csv:3" in capsys.readouterr().err
    assert not os.path.exists(fitted)


def test_invalid_ladder_writes_nothing(run, capsys):
    code, output = run("[ladder]\nmin = 1e-6\nmax = 1e-8\n", "spectrum")

    assert code == 2
    assert not os.path.exists(output)
    assert "ladder" in capsys.readouterr().err


def test_malformed_config_is_a_config_error(run, capsys):
    code, output = run("[ladder\nmin = 1e-8\n", "validity")

    assert code == 2
    assert "run.toml" in capsys.readouterr().err
    assert not os.path.exists(output)


def test_unknown_material(run):
    code, _ = run('[materials]\nbody1 = "unobtainium"\n', "validity")

    assert code == 2


def test_tolerance_flag_validated(tmp_path):
    assert main(["--tol", "0.5", "--out", str(tmp_path / "x.csv"), "validity"]) == 2


def test_h_prime_needs_sphere(run):
    code, _ = run('[geometry]\nkind = "cylinder"\n[expansion]\nquantity = "h_prime"\n', "expand")

    assert code == 2


def test_expand_sphere_near_field_adjusted(run):
    beta = 0.5119
    config = f"[expansion]\nbeta = {beta}\n[ladder]\nmin = 8e-8\nmax = 2e-6\ncount = 6\n"

    code, output = run(config, "expand")

    assert code == 0
    columns = load_csv(output)
    assert "H_W" not in columns
    d = columns["d_m"]
    np.testing.assert_allclose(
        columns["pta_deviation_W"], 4 * math.pi * beta * np.log(d / (0.004 * R)), atol=1e-12
    )
    np.testing.assert_allclose(
        columns["H_pta_adjusted_W"] - columns["H_adjusted_W"],
        columns["pta_deviation_W"],
        rtol=1e-9,
        atol=1e-9,
    )
    assert float(metadata(output)["d_ref"]) == pytest.approx(0.004 * R)


def test_expand_cylinder_per_length(run):
    config = (
        '[geometry]\nkind = "cylinder"\n[expansion]\nd0 = 1e-9\n[ladder]\ncount = 4\nmax = 1e-6\n'
    )

    code, output = run(config, "expand")

    assert code == 0
    columns = load_csv(output)
    assert "H_per_L_W_per_m" in columns
    assert "H_per_L_adjusted_W_per_m" in columns


def test_expand_flat_has_no_closed_form(run):
    code, _ = run('[geometry]\nkind = "flat"\n', "expand")

    assert code == 2


def test_validity_table(run):
    code, output = run("[ladder]\ncount = 5\n", "validity")

    assert code == 0
    columns = load_csv(output)
    assert list(columns) == ["d_m", "ratio"]
    assert np.all(np.diff(columns["ratio"]) < 0)
    assert metadata(output)["status"] == "ok"


def test_lambda_table(run):
    code, output = run("[frequency]\nmin = 0.59\nmax = 0.61\ncount = 2\n", "lambda")

    assert code == 0
    columns = load_csv(output)
    assert len(columns["omega_rad_per_s"]) == 2
    np.testing.assert_allclose(columns["lambda_w"], columns["quasistatic"], rtol=5e-3)


def test_aggregate_from_tables(run, write_file):
    thermal = 1.380649e-23 * 300 / 1.054571817e-34
    omegas = [1e-6 * thermal, 100 * thermal]
    table = write_file(
        "lambda.csv", "omega_rad_per_s,value\n" + "".join(f"{w!r},{1e-36 * w!r}\n" for w in omegas)
    )
    config = f'[aggregate]\nlambda_table = "{table}"\n[expansion]\nbeta = 0.5119\n'

    code, output = run(config, "aggregate")

    assert code == 0
    columns = load_csv(output)
    assert columns["beta"][0] == pytest.approx(0.5119, rel=1e-12)
    assert columns["lambda_W"][0] == pytest.approx(1e-36 * thermal**2 * math.pi**2 / 6, rel=1e-5)


def test_aggregate_equal_temperatures(run, write_file):
    table = write_file("lambda.csv", "omega_rad_per_s,value\n1e12,1\n1e15,1\n")
    config = f'[aggregate]\nlambda_table = "{table}"\n[temperatures]\nT1 = 300.0\nT2 = 300.0\n'

    code, _ = run(config, "aggregate")

    assert code == 3


def test_spectrum_is_deterministic(run, tmp_path):
    config = "[ladder]\nmin = 1e-8\nmax = 1e-6\ncount = 3\n[frequency]\nmin = 0.597\ncount = 1\n"

    first = run(config, "spectrum", out="a.csv")
    second = run(config, "--threads", "2", "spectrum", out="b.csv")

    assert first[0] == second[0] == 0
    with open(first[1], "rb") as a, open(second[1], "rb") as b:
        assert a.read() == b.read()
    columns = load_csv(first[1])
    assert "total_over_blackbody" in columns
    assert np.all(columns["evan_E_fraction"] > 0.5)


def test_spectrum_to_stdout(write_file, capsys):
    filename = write_file("run.toml", "[ladder]\nmin = 1e-8\nmax = 1e-7\ncount = 2\n")

    assert main(["--config", filename, "spectrum"]) == 0
    out = capsys.readouterr().out
    assert "omega_rad_per_s,S_m,prop_E,prop_M,evan_E,evan_M,total" in out


def test_spectrum_sweeps_frequencies(run):
    config = "[ladder]\nmin = 1e-8\nmax = 1e-7\ncount = 2\n[frequency]\ncount = 3\n"

    code, output = run(config, "spectrum")

    assert code == 0
    columns = load_csv(output)
    np.testing.assert_allclose(
        np.unique(columns["omega_rad_per_s"]), np.array([0.55, 0.6, 0.65]) * RAD_PER_UM
    )
    assert len(columns["S_m"]) == 6
    expected = [
        total * bose_einstein(omega, 300.0)
        for omega, total in zip(columns["omega_rad_per_s"], columns["total"])
    ]
    np.testing.assert_allclose(columns["total_times_n_T1"], expected, rtol=1e-12)


def crossover(columns):
    """First gap at which evan_E carries less than half of the integrated transfer."""
    fraction = columns["evan_E_fraction"]
    assert np.all(np.diff(fraction)[fraction[:-1] > 0.1] < 1e-4)
    return columns["S_m"][np.argmax(fraction < 0.5)]


INTEGRATED = """
[spectrum]
integrated = true

[ladder]
min = 1e-9
max = 1e-5
count = 17

[numerics]
threads = 4
"""


@pytest.mark.slow
def test_sic_evanescent_crossover(run):
    code, output = run(INTEGRATED, "spectrum")

    assert code == 0
    assert 1e-8 <= crossover(load_csv(output)) <= 1e-7


@pytest.mark.slow
def test_sio2_evanescent_crossover(run):
    config = INTEGRATED + '\n[materials]\nbody1 = "SiO2"\nbody2 = "SiO2"\n'

    code, output = run(config, "spectrum")

    assert code == 0
    assert 5e-8 <= crossover(load_csv(output)) <= 3e-6


def test_oracle_flat(run, capsys):
    code, _ = run('[geometry]\nkind = "flat"\n', "oracle")

    assert code == 0
    assert "[ok]" in capsys.readouterr().out


def test_oracle_sphere(run, capsys):
    code, ladder = run("[expansion]\nbeta = 0.774\n", "oracle")

    assert code == 0
    out = capsys.readouterr().out
    assert out.count("[ok]") == 2
    assert len(load_csv(ladder)["d_m"]) == 16


def test_oracle_two_spheres(run, capsys):
    code, _ = run('[geometry]\nkind = "two_spheres"\nR2 = 6e-5\n', "oracle")

    assert code == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    (limit,) = [line for line in out.splitlines() if line.startswith("sphere limit")]
    assert float(limit.split("relative difference=")[1].split()[0]) <= SPHERE_LIMIT_TOLERANCE
