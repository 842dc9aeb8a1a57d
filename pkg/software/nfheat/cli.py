"""Command-line interface.

    $ nfheat [--config run.toml] [--out result.csv] <command>

Every command reads a run configuration (see `nfheat.run_config`), computes one kind of table
and writes it as CSV with ``# key=value`` metadata lines. Without ``--out`` (or
``output_path``) the table goes to stdout. Exit codes: 0 success, 2 configuration error,
3 numerical failure, 4 I/O or data format error.
"""

import argparse
import logging
import math
import sys

import numpy as np

from nfheat import asymptotics, fitting, geometry, planar, spectral
from nfheat.errors import ConfigError, NfheatError
from nfheat.file_utils import load_csv, write_table
from nfheat.materials import permittivity, quasistatic_validity, resolve_material
from nfheat.math_extras import geometric_ladder
from nfheat.run_config import (
    GEOMETRY_CYLINDER,
    GEOMETRY_FLAT,
    GEOMETRY_PARABOLOID,
    GEOMETRY_SPHERE,
    GEOMETRY_TWO_SPHERES,
    QUANTITY_H_PRIME,
    load_run_config,
    to_rad_per_s,
)
from nfheat.thread import parallel_map
from nfheat.version import __version__

log = logging.getLogger(__name__)

LOG_FORMAT = "[%(levelname).4s] %(name)s: %(message)s"

## Largest relative disagreement between a brute-force fit coefficient and its closed form
ORACLE_TOLERANCE = 0.02

## Quadrature accuracy of the oracle ladders; the five-term fits need it
ORACLE_EPSREL = 1e-11

## Radius ratio standing in for "a plate" in the two-sphere limit check
SPHERE_LIMIT_RATIO = 1e6

## Largest relative disagreement between the two-sphere limit and the single sphere
SPHERE_LIMIT_TOLERANCE = 1e-3

VALIDITY_COLUMNS = ["d_m", "ratio"]
LAMBDA_COLUMNS = [
    "omega_rad_per_s",
    "lambda_w",
    "quasistatic",
    "plateau_estimate_error",
    "plateau_spread",
]
AGGREGATE_COLUMNS = ["T1_K", "T2_K", "lambda_W", "beta"]
ORACLE_COLUMNS = ["d_m", "pta", "correction", "total"]


def _configure_logging(verbosity):
    level = {-1: logging.ERROR, 0: logging.WARNING, 1: logging.INFO}.get(
        verbosity, logging.DEBUG
    )
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)
    logging.captureWarnings(True)


def _separations(config):
    if config.ladder_spacing == "linear":
        return np.linspace(config.ladder_min, config.ladder_max, config.ladder_count)
    return geometric_ladder(config.ladder_min, config.ladder_max, config.ladder_count)


def _frequencies(config):
    values = np.linspace(config.frequency_min, config.frequency_max, config.frequency_count)
    return [to_rad_per_s(value, config.frequency_unit) for value in values]


def _materials(config):
    return resolve_material(config.materials_body1), resolve_material(config.materials_body2)


def _base_metadata(config, command):
    return {
        "nfheat": __version__,
        "command": command,
        "body1": config.materials_body1,
        "body2": config.materials_body2,
    }


# ---------------------------------------------------------------------------------------------
# spectrum


def spectrum(config):
    mat1, mat2 = _materials(config)
    separations = _separations(config)
    metadata = _base_metadata(config, "spectrum")
    if config.spectrum_integrated:
        return _spectrum_integrated(config, mat1, mat2, separations, metadata)

    T1 = config.temperatures_T1
    rows = planar.spectrum_rows(
        mat1,
        mat2,
        _frequencies(config),
        separations,
        epsrel=config.numerics_tolerance,
        threads=config.numerics_threads,
    )
    # total weighted by the occupation number of body 1
    header = list(planar.SPECTRUM_COLUMNS) + ["total_times_n_T1"]
    rows = [row + [row[-1] * spectral.bose_einstein(row[0], T1)] for row in rows]
    if config.spectrum_normalize:
        header += ["total_over_blackbody", "evan_E_fraction"]
        rows = [
            row + [row[6] / planar.blackbody_spectral(row[0]), row[4] / row[6]] for row in rows
        ]
    metadata.update(T1=T1, units="W m^-2 (rad/s)^-1")
    write_table(config.output_path, header, rows, metadata)


def _spectrum_integrated(config, mat1, mat2, separations, metadata):
    T1, T2 = config.temperatures_T1, config.temperatures_T2
    epsrel = max(config.numerics_tolerance, 1e-6)

    def row(S):
        channels = planar.integrate_plate_channels(mat1, mat2, T1, T2, S, epsrel=epsrel)
        return [S, *channels, channels.total]

    rows = parallel_map(row, separations, config.numerics_threads)
    header = ["S_m", "prop_E", "prop_M", "evan_E", "evan_M", "total"]
    if config.spectrum_normalize:
        if T1 == T2:
            raise ConfigError("blackbody normalisation needs T1 != T2")
        reference = spectral.blackbody_flux(T1, T2)
        header += ["total_over_blackbody", "evan_E_fraction"]
        rows = [row + [row[-1] / reference, row[3] / row[-1]] for row in rows]
    metadata.update(T1=T1, T2=T2, units="W m^-2")
    write_table(config.output_path, header, rows, metadata)


# ---------------------------------------------------------------------------------------------
# lambda


def lambda_table(config):
    mat1, mat2 = _materials(config)

    def row(omega):
        epsrel = min(config.numerics_tolerance, 1e-10)
        result = planar.lambda_extract(mat1, mat2, omega, epsrel=epsrel)
        if result.status != planar.STATUS_OK:
            log.warning("omega=%.6g rad/s: %s", omega, result.status)
        return [
            omega,
            result.value,
            result.quasistatic,
            result.plateau_estimate_error,
            result.plateau_spread,
        ]

    rows = parallel_map(row, _frequencies(config), config.numerics_threads)
    metadata = _base_metadata(config, "lambda")
    metadata["units"] = "W s/rad"
    write_table(config.output_path, LAMBDA_COLUMNS, rows, metadata)


# ---------------------------------------------------------------------------------------------
# expand


def _closed_form(config, coefficients):
    kind = config.geometry_kind
    if kind in (GEOMETRY_FLAT, GEOMETRY_PARABOLOID):
        raise ConfigError(f"no closed-form expansion for geometry {kind!r}")
    R2 = config.geometry_R2 if kind == GEOMETRY_TWO_SPHERES else None
    return asymptotics.ClosedForm(kind, config.geometry_R, coefficients, R2=R2)


def expand(config):
    d0 = config.expansion_d0 if config.expansion_d0 > 0 else None
    coefficients = asymptotics.ExpansionCoefficients(
        config.expansion_lambda, config.expansion_beta, d0
    )
    model = _closed_form(config, coefficients)
    d = _separations(config)
    metadata = _base_metadata(config, "expand")
    metadata.update(
        geometry=model.geometry,
        quantity=config.expansion_quantity,
        R=model.R,
        lambda_w=coefficients.lambda_,
        beta=coefficients.beta,
    )
    if model.R2 is not None:
        metadata["R2"] = model.R2

    if config.expansion_quantity == QUANTITY_H_PRIME:
        if model.geometry != GEOMETRY_SPHERE:
            raise ConfigError("h_prime is only available for the sphere")
        values = asymptotics.sphere_plate_h_prime(d, model.R, coefficients)
        metadata["sign_convention"] = "signed dh/dd (negative for lambda > 0)"
        write_table(config.output_path, ["d_m", "h_prime"], np.column_stack([d, values]), metadata)
        return

    d_ref = config.expansion_d_ref_ratio * model.smallest_radius
    name, unit = ("H_per_L", "W_per_m") if model.geometry == GEOMETRY_CYLINDER else ("H", "W")
    adjusted = asymptotics.near_field_adjusted(model, d_ref, d).values
    adjusted_pta = asymptotics.near_field_adjusted(model.with_beta(0.0), d_ref, d).values
    if model.geometry == GEOMETRY_CYLINDER:
        deviation = adjusted_pta - adjusted
    else:
        deviation = asymptotics.pta_deviation(d, d_ref, coefficients)

    header = ["d_m"]
    columns = [d]
    if d0 is not None:
        header += [f"{name}_{unit}", f"{name}_pta_{unit}"]
        columns += [model.H(d), model.H_pta(d)]
    else:
        log.info("expansion_d0 not set; writing only near-field adjusted columns")
    header += [f"{name}_adjusted_{unit}", f"{name}_pta_adjusted_{unit}", f"pta_deviation_{unit}"]
    columns += [adjusted, adjusted_pta, deviation]
    metadata["d_ref"] = d_ref
    if d0 is not None:
        metadata["d0"] = d0
    write_table(config.output_path, header, np.column_stack(columns), metadata)


# ---------------------------------------------------------------------------------------------
# fit


def _fit_datasets(columns, config):
    d, values = columns["d_m"], columns["h_prime"]
    if "omega_rad_per_s" not in columns:
        omega = to_rad_per_s(config.frequency_value, config.frequency_unit)
        lam = columns["lambda_w"][0] if "lambda_w" in columns else config.fit_lambda_w
        return [(omega, d, values, lam)]

    omegas = columns["omega_rad_per_s"]
    datasets = []
    for omega in dict.fromkeys(omegas):
        mask = omegas == omega
        lam = columns["lambda_w"][mask][0] if "lambda_w" in columns else config.fit_lambda_w
        datasets.append((omega, d[mask], values[mask], lam))
    return datasets


def fit(config, input_file):
    columns = load_csv(input_file, required=("d_m", "h_prime"))
    datasets = []
    for omega, d, values, lam in _fit_datasets(columns, config):
        order = np.argsort(d)
        datasets.append((omega, (d[order], values[order], lam)))

    results = fitting.fit_beta_batch(
        [dataset for _, dataset in datasets],
        config.geometry_R,
        include_gamma=config.fit_include_gamma,
        threads=config.numerics_threads,
    )
    rows = [fitting.fit_row(omega, result) for (omega, _), result in zip(datasets, results)]
    header = list(fitting.FIT_COLUMNS)
    if not config.fit_include_gamma:
        keep = [i for i, name in enumerate(header) if "gamma" not in name]
        header = [header[i] for i in keep]
        rows = [[row[i] for i in keep] for row in rows]
    metadata = {
        "nfheat": __version__,
        "command": "fit",
        "input": input_file,
        "R": config.geometry_R,
    }
    write_table(config.output_path, header, rows, metadata)


# ---------------------------------------------------------------------------------------------
# aggregate


def _computed_lambda(config):
    mat1, mat2 = _materials(config)
    lo = max(mat1.frequency_range()[0], mat2.frequency_range()[0])
    hi = min(mat1.frequency_range()[1], mat2.frequency_range()[1])
    points = sorted(set(mat1.resonances()) | set(mat2.resonances()))
    epsrel = min(config.numerics_tolerance, 1e-8)

    def lambda_w(omega):
        return planar.lambda_extract(mat1, mat2, omega, epsrel=epsrel).value

    return lambda_w, (lo, hi), points


def aggregate(config):
    support, points = None, None
    if config.aggregate_lambda_table:
        lambda_w = spectral.load_spectral_table(config.aggregate_lambda_table)
    else:
        log.info("no lambda table configured; computing lambda_omega from the materials")
        lambda_w, support, points = _computed_lambda(config)
    if config.aggregate_beta_table:
        beta_w = spectral.load_spectral_table(config.aggregate_beta_table)
    else:
        beta_value = config.expansion_beta

        def beta_w(omega):
            return beta_value

    T1, T2 = config.temperatures_T1, config.temperatures_T2
    result = spectral.aggregate_coefficients(
        lambda_w,
        beta_w,
        T1,
        T2,
        epsrel=max(config.numerics_tolerance, 1e-8),
        support=support,
        points=points,
    )
    metadata = _base_metadata(config, "aggregate")
    metadata["thermal_wavelength_m"] = spectral.thermal_wavelength(max(T1, T2))
    write_table(
        config.output_path, AGGREGATE_COLUMNS, [[T1, T2, result.lambda_, result.beta]], metadata
    )


# ---------------------------------------------------------------------------------------------
# oracle


def _profile(config):
    kind, R = config.geometry_kind, config.geometry_R
    d = config.oracle_ratio_min * R
    if kind == GEOMETRY_SPHERE:
        return geometry.Sphere(R, d)
    if kind == GEOMETRY_TWO_SPHERES:
        return geometry.TwoSpheresEffective(R, config.geometry_R2, d)
    if kind == GEOMETRY_CYLINDER:
        return geometry.Cylinder(R, config.geometry_L, d)
    if kind == GEOMETRY_PARABOLOID:
        return geometry.Paraboloid(R, d)
    return geometry.Flat(config.geometry_area, d)


def expected_coefficients(profile, lambda_w, beta_w):
    """Closed-form (leading, subleading) small-d coefficients of PTA plus gradient correction.

    The subleading one multiplies log d for axisymmetric bodies and d^(-1/2) for the cylinder.
    """
    lam, beta = lambda_w, beta_w
    if isinstance(profile, geometry.Sphere):
        return 2 * math.pi * profile.R * lam, -2 * math.pi * lam * (2 * beta - 1)
    if isinstance(profile, geometry.TwoSpheresEffective):
        R1, R2 = profile.R1, profile.R2
        x = R1 * R2 / (R1 + R2) ** 2
        leading = 2 * math.pi * lam * profile.effective_radius
        return leading, 2 * math.pi * lam * (x - (2 * beta - 1))
    if isinstance(profile, geometry.Cylinder):
        leading = math.pi * lam * math.sqrt(profile.R) / math.sqrt(2)
        return leading, leading * (2 * beta - 0.75) / profile.R
    if isinstance(profile, geometry.Paraboloid):
        return 2 * math.pi * profile.R_curv * lam, -4 * math.pi * beta * lam
    raise ConfigError(f"no expansion for {profile!r}")


def _oracle_line(label, numeric, expected, scale, tolerance=ORACLE_TOLERANCE):
    difference = abs(numeric - expected) / scale
    verdict = "ok" if difference <= tolerance else "FAIL"
    print(
        f"{label:<12} numeric={numeric:.10g} closed-form={expected:.10g} "
        f"relative difference={difference:.3g} [{verdict}]"
    )
    return difference <= tolerance


def oracle(config):
    """Compare brute-force quadratures against the closed-form expansions; prints a report."""
    lam, beta = config.expansion_lambda, config.expansion_beta
    profile = _profile(config)
    print(f"oracle: {profile!r} lambda={lam:g} beta={beta:g} cutoff={config.numerics_cutoff:g}")

    if isinstance(profile, geometry.Flat):
        numeric = geometry.pta(profile, lambda S: lam / S**2)
        exact = profile.area * lam / profile.d**2
        return _oracle_line("pta", numeric, exact, abs(exact))

    radius = profile.rim
    ratios = geometric_ladder(config.oracle_ratio_min, config.oracle_ratio_max, config.oracle_count)
    points = geometry.ladder(
        profile,
        ratios * radius,
        lam,
        beta,
        cutoff=config.numerics_cutoff,
        epsrel=ORACLE_EPSREL,
        threads=config.numerics_threads,
    )
    if config.output_path is not None:
        metadata = {"geometry": profile.kind, "lambda_w": lam, "beta": beta}
        write_table(config.output_path, ORACLE_COLUMNS, [list(p) for p in points], metadata)

    basis = "cylinder" if isinstance(profile, geometry.Cylinder) else "sphere"
    result = fitting.fit_expansion([p.d for p in points], [p.total for p in points], basis)
    leading, subleading = expected_coefficients(profile, lam, beta)
    natural = leading / radius if basis == "cylinder" else 2 * math.pi * abs(lam)
    passed = _oracle_line("leading", result.coefficients[0], leading, abs(leading))
    passed &= _oracle_line(
        "subleading", result.coefficients[1], subleading, max(abs(subleading), natural)
    )

    if isinstance(profile, geometry.TwoSpheresEffective):
        d = math.sqrt(config.oracle_ratio_min * config.oracle_ratio_max) * profile.R1
        limit = geometry.TwoSpheresEffective(profile.R1, SPHERE_LIMIT_RATIO * profile.R1, d)
        big, single = (
            geometry.ladder(p, [d], lam, beta, config.numerics_cutoff, ORACLE_EPSREL)[0]
            for p in (limit, geometry.Sphere(profile.R1, d))
        )
        passed &= _oracle_line(
            "sphere limit", big.total, single.total, abs(single.total), SPHERE_LIMIT_TOLERANCE
        )
    return passed


# ---------------------------------------------------------------------------------------------
# validity


def validity(config):
    mat1, mat2 = _materials(config)
    if config.materials_body2 != config.materials_body1:
        log.warning("validity uses body1 (%s) only", config.materials_body1)
    omega = to_rad_per_s(config.frequency_value, config.frequency_unit)
    eps = permittivity(mat1, omega)
    rows = []
    status = None
    for d in _separations(config):
        result = quasistatic_validity(eps, omega, d)
        status = result.status
        rows.append([d, math.nan if result.ratio is None else result.ratio])
    metadata = _base_metadata(config, "validity")
    metadata.update(omega_rad_per_s=omega, status=status)
    write_table(config.output_path, VALIDITY_COLUMNS, rows, metadata)


# ---------------------------------------------------------------------------------------------


COMMANDS = {
    "spectrum": "spectral transfer channels per unit area on a ladder of gaps",
    "lambda": "small-distance coefficient lambda_omega over a frequency grid",
    "expand": "closed-form sphere, two-sphere or cylinder curves",
    "fit": "fit beta (and gamma) to sphere-plate h' data",
    "aggregate": "Bose-Einstein aggregated lambda and beta",
    "oracle": "brute-force PTA and gradient quadratures against the closed forms",
    "validity": "quasi-static validity ratio over a ladder of gaps",
}


def build_parser():
    parser = argparse.ArgumentParser(prog="nfheat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"nfheat {__version__}")
    parser.add_argument("--config", help="TOML or JSON run configuration")
    parser.add_argument("--out", help="output CSV path (default: stdout)")
    parser.add_argument("--tol", type=float, help="relative quadrature tolerance")
    parser.add_argument("--threads", type=int, help="worker threads")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="count", default=0)
    verbosity.add_argument("-q", "--quiet", action="store_true")

    commands = parser.add_subparsers(dest="command", required=True)
    for name, help_text in COMMANDS.items():
        command = commands.add_parser(name, help=help_text)
        if name == "fit":
            command.add_argument("input", help="CSV with d_m,h_prime columns")
    return parser


def _overrides(args):
    overrides = {}
    if args.out is not None:
        overrides["output_path"] = args.out
    if args.tol is not None:
        overrides["numerics_tolerance"] = args.tol
    if args.threads is not None:
        overrides["numerics_threads"] = args.threads
    return overrides


def run(args):
    """Execute a parsed command line; returns the process exit code."""
    config = load_run_config(args.config, _overrides(args))
    log.debug("configuration: %s", config.as_dict())
    if args.command == "spectrum":
        spectrum(config)
    elif args.command == "lambda":
        lambda_table(config)
    elif args.command == "expand":
        expand(config)
    elif args.command == "fit":
        fit(config, args.input)
    elif args.command == "aggregate":
        aggregate(config)
    elif args.command == "oracle":
        return 0 if oracle(config) else 3
    elif args.command == "validity":
        validity(config)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    _configure_logging(-1 if args.quiet else args.verbose)
    try:
        return run(args)
    except NfheatError as e:
        log.error("%s", e)
        return e.exit_code
    except OSError as e:
        log.error("%s", e)
        return 4


if __name__ == "__main__":
    sys.exit(main())
