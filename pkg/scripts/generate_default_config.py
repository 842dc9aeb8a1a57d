#!/usr/bin/env python3
"""
This script writes the default run configuration of the nfheat command line as JSON, listing
every setting with its description. Execute it from the root of the project directory.

   $ python3 scripts/generate_default_config.py [config/defaults.json]

Edit the generated file and pass it to any command with `nfheat --config <file> ...`.
"""
import os
import sys

DEFAULT_FILENAME = "config/defaults.json"


def describe(spec):
    for point in spec:
        print(f"  {point.name:<28} {point.default!r:<14} {point.description}")


def generate_default_config(filename):
    print(f"Generating: {filename}")
    ConfigFile.save_config(filename, RUN_CONFIG_SPEC.default_config())
    describe(RUN_CONFIG_SPEC)


if __name__ == "__main__":
    sys.path.insert(0, os.path.abspath("software"))

    from nfheat.configuration import ConfigFile
    from nfheat.run_config import RUN_CONFIG_SPEC

    generate_default_config(sys.argv[1] if len(sys.argv) > 1 else DEFAULT_FILENAME)
