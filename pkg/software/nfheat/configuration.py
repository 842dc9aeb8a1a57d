"""Typed configuration points and configuration files.

A configuration is a ``dict`` mapping a setting's name to its value. What values are allowed is
described by a ``ConfigSpec``: a collection of ``ConfigPoint`` objects, each knowing its name,
its default and how to validate a candidate value.

Configuration files come in two flavours:

* TOML, with ``[section]`` headers and ``key = value`` lines. Keys are flattened to
  ``section_key``, so ``[ladder] min = 1e-9`` sets the point ``ladder_min``.
* flat JSON objects whose keys are the point names directly.
"""

import json
import os
from collections import namedtuple

from nfheat.errors import ConfigError, DataFormatError
from nfheat.file_utils import load_json_file

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

Validation = namedtuple("Validation", "is_valid message")
"""Result of validating a value or a whole configuration.

    :param is_valid: True if the validation was successful, False otherwise.
    :param message: If `is_valid` is false this field explains why.
"""

VALID = Validation(is_valid=True, message="Valid.")
"""The default successful validation."""


class ConfigPoint:
    """Base class for `ConfigPoint` types.

    :param name: The setting's name, used as the attribute name on `ConfigSettings`
    :param type: The name (or Python type) of the accepted values
    :param default: The default value
    :param description: One line shown by the default-config generator
    """

    def __init__(self, name: str, type, default, description: str = ""):
        self.name = name
        self.type = type
        self.default = default
        self.description = description

    def validate(self, value) -> Validation:
        raise NotImplementedError

    def coerce(self, value):
        """Return the value in its canonical Python type. Only called on validated values."""
        return value


class FloatConfigPoint(ConfigPoint):
    """A float in the closed range [minimum, maximum]. Integers are accepted and converted."""

    def __init__(self, name, minimum, maximum, default, description=""):
        super().__init__(name=name, type=float, default=default, description=description)
        self.minimum = minimum
        self.maximum = maximum

        if not minimum <= default <= maximum:
            raise ValueError(f"{name}: default {default} is out of range")

    def validate(self, value) -> Validation:
        if type(value) is int:
            value = float(value)
        if type(value) is not float:
            return Validation(is_valid=False, message=f"{self.name}: {value!r} is not a number")
        if not self.minimum <= value <= self.maximum:
            return Validation(
                is_valid=False,
                message=f"{self.name}: {value} is outside [{self.minimum}, {self.maximum}]",
            )
        return VALID

    def coerce(self, value):
        return float(value)


class IntegerConfigPoint(ConfigPoint):
    """An integer in the closed range [minimum, maximum]."""

    def __init__(self, name, minimum, maximum, default, description=""):
        super().__init__(name=name, type=int, default=default, description=description)
        self.minimum = minimum
        self.maximum = maximum

        if not minimum <= default <= maximum:
            raise ValueError(f"{name}: default {default} is out of range")

    def validate(self, value) -> Validation:
        if type(value) is not int:
            return Validation(is_valid=False, message=f"{self.name}: {value!r} is not an integer")
        if not self.minimum <= value <= self.maximum:
            return Validation(
                is_valid=False,
                message=f"{self.name}: {value} is outside [{self.minimum}, {self.maximum}]",
            )
        return VALID


class ChoiceConfigPoint(ConfigPoint):
    """One of a fixed list of choices. The default must be one of them."""

    def __init__(self, name, choices, default, description=""):
        if default not in choices:
            raise ValueError(f"{name}: default value must be available in given choices")
        super().__init__(name=name, type="choice", default=default, description=description)
        self.choices = choices

    def validate(self, value) -> Validation:
        if value not in self.choices:
            choices = ", ".join(str(c) for c in self.choices)
            return Validation(
                is_valid=False, message=f"{self.name}: '{value}' is not one of [{choices}]"
            )
        return VALID


class BooleanConfigPoint(ChoiceConfigPoint):
    """True or False."""

    def __init__(self, name, default, description=""):
        super().__init__(name=name, choices=[False, True], default=default, description=description)

    def validate(self, value) -> Validation:
        if type(value) is not bool:
            return Validation(is_valid=False, message=f"{self.name}: {value!r} is not a boolean")
        return VALID


class StringConfigPoint(ConfigPoint):
    """Free text, e.g. a preset name or a file path.

    `None` is allowed when the default is `None`.
    """

    def __init__(self, name, default, description=""):
        super().__init__(name=name, type=str, default=default, description=description)

    def validate(self, value) -> Validation:
        if value is None and self.default is None:
            return VALID
        if type(value) is not str:
            return Validation(is_valid=False, message=f"{self.name}: {value!r} is not a string")
        return VALID


def boolean(name: str, default: bool, description: str = "") -> BooleanConfigPoint:
    return BooleanConfigPoint(name=name, default=default, description=description)


def choice(name: str, choices, default, description: str = "") -> ChoiceConfigPoint:
    return ChoiceConfigPoint(name=name, choices=choices, default=default, description=description)


def floatingPoint(name, minimum, maximum, default, description="") -> FloatConfigPoint:
    return FloatConfigPoint(
        name=name, minimum=minimum, maximum=maximum, default=default, description=description
    )


def integer(name, minimum, maximum, default, description="") -> IntegerConfigPoint:
    return IntegerConfigPoint(
        name=name, minimum=minimum, maximum=maximum, default=default, description=description
    )


def string(name: str, default=None, description: str = "") -> StringConfigPoint:
    return StringConfigPoint(name=name, default=default, description=description)


class ConfigSpec:
    """The set of `ConfigPoints` a configuration may contain."""

    def __init__(self, config_points) -> None:
        self.points = {}
        for point in config_points:
            if point.name in self.points:
                raise ValueError(f"config point {point.name} is already defined")
            self.points[point.name] = point

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points.values())

    def default_config(self) -> dict:
        """Returns the default configuration for this spec."""
        return {point.name: point.default for point in self.points.values()}

    def validate(self, configuration) -> Validation:
        """Validates the given configuration, stopping at the first problem."""
        for name, value in configuration.items():
            if name not in self.points:
                return Validation(is_valid=False, message=f"ConfigPoint '{name}' is not defined.")

            validation = self.points[name].validate(value)
            if not validation.is_valid:
                return validation

        return VALID

    def coerce(self, configuration) -> dict:
        return {name: self.points[name].coerce(value) for name, value in configuration.items()}


def flatten_sections(document: dict) -> dict:
    """Turn ``{"ladder": {"min": 1}}`` into ``{"ladder_min": 1}``.

    Top-level scalars pass through.
    """
    flat = {}
    for key, value in document.items():
        if isinstance(value, dict):
            for subkey, subvalue in value.items():
                if isinstance(subvalue, dict):
                    raise ConfigError(f"[{key}.{subkey}]: nested sections are not supported")
                flat[f"{key}_{subkey}"] = subvalue
        else:
            flat[key] = value
    return flat


class ConfigFile:
    """Functions for reading and writing configuration files."""

    @staticmethod
    def read(filename) -> dict:
        """Read a TOML or JSON configuration file into a flat dict, without validation.

        :raises ConfigError: if the file is not valid TOML or JSON
        """
        if filename.endswith(".json"):
            try:
                return flatten_sections(load_json_file(filename))
            except DataFormatError as e:
                raise ConfigError(str(e)) from e
        with open(filename, "rb") as file:
            try:
                document = tomllib.load(file)
            except tomllib.TOMLDecodeError as e:
                raise ConfigError(f"{filename}: {e}") from e
        return flatten_sections(document)

    @staticmethod
    def save_config(filename, data: dict):
        """Save a flat configuration as JSON."""
        directory = os.path.dirname(os.path.abspath(filename))
        os.makedirs(directory, exist_ok=True)
        with open(filename, "w") as file:
            json.dump(data, file, indent=4, sort_keys=True)
            file.write("\n")

    @staticmethod
    def load_config(filename, config_spec: ConfigSpec, overrides=None):
        """Load, validate and merge a configuration over the spec's defaults.

        :param filename: The file to read, or None to use the defaults only
        :param config_spec: The spec to validate against
        :param overrides: Optional dict applied after the file (e.g. command line flags)
        :return: A `ConfigSettings` object
        :raises ConfigError: if any value fails validation
        """
        config = config_spec.default_config()
        for layer in (ConfigFile.read(filename) if filename else {}, overrides or {}):
            validation = config_spec.validate(layer)
            if not validation.is_valid:
                raise ConfigError(validation.message)
            config.update(config_spec.coerce(layer))
        return ConfigSettings(config)


class ConfigSettings:
    """Validated configuration values as attributes, one per setting name."""

    def __init__(self, d):
        self.__dict__.update(d)

    def as_dict(self) -> dict:
        return dict(self.__dict__)
