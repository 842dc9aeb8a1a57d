"""Settings for one ``nfheat`` run.

Every setting is named ``section_key``; in a TOML file the same setting is written as ``key``
under a ``[section]`` header. For example, to compute a SiC spectrum down to 1 nm:

    [materials]
    body1 = "SiC"
    body2 = "SiC"

    [ladder]
    min = 1e-9
    max = 1e-5
    count = 41
"""

import os

from nfheat import configuration
from nfheat.configuration import ConfigFile, ConfigSpec
from nfheat.constants import RAD_PER_UM
from nfheat.errors import ConfigError

# Geometry kinds
GEOMETRY_SPHERE = "sphere"
GEOMETRY_TWO_SPHERES = "two_spheres"
GEOMETRY_CYLINDER = "cylinder"
GEOMETRY_PARABOLOID = "paraboloid"
GEOMETRY_FLAT = "flat"

# Frequency units accepted in configuration files
UNIT_RAD_PER_UM = "rad/um"
UNIT_RAD_PER_S = "rad/s"

# Quantities written by `expand`
QUANTITY_H = "H"
QUANTITY_H_PRIME = "h_prime"

DATA_DIR_VARIABLE = "NFHEAT_DATA_DIR"


class RunConfig:
    """The run settings recognised by the command line.

    Any setting missing from the configuration file keeps the default listed here.
    """

    @classmethod
    def config_points(cls):
        # fmt: off
        return [
            # Materials: a preset name or the path of an optical data file
            configuration.string(
                name="materials_body1",
                default="SiC",
                description="preset name or optical data file of the plate",
            ),
            configuration.string(
                name="materials_body2",
                default="SiC",
                description="preset name or optical data file of the curved body",
            ),

            # Temperatures [K]
            configuration.floatingPoint(
                name="temperatures_T1",
                minimum=0.0,
                maximum=1.0e4,
                default=300.0,
            ),
            configuration.floatingPoint(
                name="temperatures_T2",
                minimum=0.0,
                maximum=1.0e4,
                default=0.0,
            ),

            # Geometry [m]
            configuration.choice(
                name="geometry_kind",
                choices=[
                    GEOMETRY_SPHERE,
                    GEOMETRY_TWO_SPHERES,
                    GEOMETRY_CYLINDER,
                    GEOMETRY_PARABOLOID,
                    GEOMETRY_FLAT,
                ],
                default=GEOMETRY_SPHERE,
            ),
            configuration.floatingPoint(
                name="geometry_R",
                minimum=1.0e-9,
                maximum=1.0,
                default=20.0e-6,
            ),
            configuration.floatingPoint(
                name="geometry_R2",
                minimum=1.0e-9,
                maximum=1.0e6,
                default=20.0e-6,
                description="radius of the second sphere (two_spheres only)",
            ),
            configuration.floatingPoint(
                name="geometry_L",
                minimum=1.0e-9,
                maximum=1.0e3,
                default=1.0,
                description="cylinder length",
            ),
            configuration.floatingPoint(
                name="geometry_area",
                minimum=1.0e-18,
                maximum=1.0e6,
                default=1.0e-12,
                description="plate area (flat only)",
            ),

            # Separation ladder [m]
            configuration.floatingPoint(
                name="ladder_min",
                minimum=1.0e-12,
                maximum=1.0,
                default=1.0e-9,
            ),
            configuration.floatingPoint(
                name="ladder_max",
                minimum=1.0e-12,
                maximum=1.0,
                default=1.0e-5,
            ),
            configuration.integer(
                name="ladder_count",
                minimum=2,
                maximum=100000,
                default=41,
            ),
            configuration.choice(
                name="ladder_spacing",
                choices=["geometric", "linear"],
                default="geometric",
            ),

            # Frequencies, in frequency_unit
            configuration.choice(
                name="frequency_unit",
                choices=[UNIT_RAD_PER_UM, UNIT_RAD_PER_S],
                default=UNIT_RAD_PER_UM,
            ),
            configuration.floatingPoint(
                name="frequency_value",
                minimum=1.0e-12,
                maximum=1.0e18,
                default=0.597,
            ),
            configuration.floatingPoint(
                name="frequency_min",
                minimum=1.0e-12,
                maximum=1.0e18,
                default=0.55,
            ),
            configuration.floatingPoint(
                name="frequency_max",
                minimum=1.0e-12,
                maximum=1.0e18,
                default=0.65,
            ),
            configuration.integer(
                name="frequency_count",
                minimum=1,
                maximum=100000,
                default=5,
            ),

            # Closed-form expansion coefficients
            configuration.floatingPoint(
                name="expansion_lambda",
                minimum=-1.0e12,
                maximum=1.0e12,
                default=1.0,
                description="lambda (W, or W s/rad per frequency)",
            ),
            configuration.floatingPoint(
                name="expansion_beta",
                minimum=-100.0,
                maximum=100.0,
                default=0.5119,
            ),
            configuration.floatingPoint(
                name="expansion_d0",
                minimum=0.0,
                maximum=1.0,
                default=0.0,
                description="integration constant d0 [m]; 0 leaves it unset",
            ),
            configuration.floatingPoint(
                name="expansion_d_ref_ratio",
                minimum=1.0e-12,
                maximum=0.1,
                default=0.004,
                description="reference separation of the near-field adjusted curve, in units of R",
            ),
            configuration.choice(
                name="expansion_quantity",
                choices=[QUANTITY_H, QUANTITY_H_PRIME],
                default=QUANTITY_H,
            ),

            # Fitting
            configuration.boolean(
                name="fit_include_gamma",
                default=False,
            ),
            configuration.floatingPoint(
                name="fit_lambda_w",
                minimum=-1.0e12,
                maximum=1.0e12,
                default=1.0,
                description="known lambda_omega used to normalise h_prime",
            ),

            # Aggregation tables (omega_rad_per_s,value); an unset beta table uses expansion_beta
            configuration.string(
                name="aggregate_lambda_table",
                default=None,
            ),
            configuration.string(
                name="aggregate_beta_table",
                default=None,
            ),

            # Geometry oracle ladder, in units of R
            configuration.floatingPoint(
                name="oracle_ratio_min",
                minimum=1.0e-8,
                maximum=0.1,
                default=1.0e-4,
            ),
            configuration.floatingPoint(
                name="oracle_ratio_max",
                minimum=1.0e-8,
                maximum=0.1,
                default=1.0e-2,
            ),
            configuration.integer(
                name="oracle_count",
                minimum=6,
                maximum=1000,
                default=16,
            ),

            # Numerics
            configuration.floatingPoint(
                name="numerics_tolerance",
                minimum=1.0e-15,
                maximum=1.0e-2,
                default=1.0e-8,
            ),
            configuration.floatingPoint(
                name="numerics_cutoff",
                minimum=1.0e-9,
                maximum=0.999,
                default=1.0e-3,
                description="rim cutoff of the gradient correction, as a fraction of R",
            ),
            configuration.integer(
                name="numerics_threads",
                minimum=1,
                maximum=256,
                default=1,
            ),

            # Spectrum output
            configuration.boolean(
                name="spectrum_integrated",
                default=False,
                description="integrate each channel over frequency instead of one frequency",
            ),
            configuration.boolean(
                name="spectrum_normalize",
                default=True,
                description="add blackbody-normalised columns",
            ),

            # Output
            configuration.string(
                name="output_path",
                default=None,
            ),
        ]
        # fmt: on


RUN_CONFIG_SPEC = ConfigSpec(RunConfig.config_points())


def validate_run_config(config):
    """Check the rules that involve more than one setting.

    @param config  A `ConfigSettings` object
    @exception ConfigError describing the first violated rule
    """
    if not config.ladder_min < config.ladder_max:
        raise ConfigError(
            f"ladder: min ({config.ladder_min}) must be smaller than max ({config.ladder_max})"
        )
    if not config.frequency_min < config.frequency_max and config.frequency_count > 1:
        raise ConfigError(
            f"frequency: min ({config.frequency_min}) must be smaller than max "
            f"({config.frequency_max})"
        )
    if not config.oracle_ratio_min < config.oracle_ratio_max:
        raise ConfigError("oracle: ratio_min must be smaller than ratio_max")
    if not 0.0 < config.numerics_tolerance <= 1.0e-2:
        raise ConfigError("numerics: tolerance must lie in (0, 1e-2]")
    return config


def load_run_config(filename=None, overrides=None):
    """Load and validate a run configuration.

    @param filename   TOML or JSON file, or None for the defaults
    @param overrides  Settings taken from the command line, applied last
    @return  A validated `ConfigSettings`
    """
    return validate_run_config(ConfigFile.load_config(filename, RUN_CONFIG_SPEC, overrides))


def to_rad_per_s(value, unit):
    """Convert a frequency from a configuration unit to rad/s. ``rad/um`` is read as omega/c."""
    if unit == UNIT_RAD_PER_UM:
        return value * RAD_PER_UM
    return value


def data_dir():
    """The directory presets and optical tables are read from."""
    return os.environ.get(DATA_DIR_VARIABLE) or os.path.join(os.path.dirname(__file__), "data")
