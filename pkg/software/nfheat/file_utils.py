"""Reading and writing the small text files nfheat deals with.

Three kinds of files pass through here:

* JSON documents (material presets, flat configuration files)
* whitespace or comma separated numeric tables with ``#`` comments (optical data, CSV input)
* CSV output with ``# key=value`` metadata lines, a mandatory header row and fixed
  17-significant-digit formatting so that identical runs produce identical bytes
"""

import json
import logging
import os
import sys

import numpy as np

from nfheat.errors import DataFormatError

log = logging.getLogger(__name__)

## printf-style format giving round-trippable doubles
FLOAT_FORMAT = "%.17g"


def load_json_file(filename) -> dict:
    """Load a JSON file and return its contents

    @exception DataFormatError if the file is not valid JSON
    @exception OSError if the file cannot be opened
    """
    try:
        with open(filename, "r") as file:
            return json.load(file)
    except ValueError as e:
        raise DataFormatError(filename, getattr(e, "lineno", None), f"invalid JSON: {e}")


def _split(line):
    if "," in line:
        return [field.strip() for field in line.split(",")]
    return line.split()


def load_table(filename, columns):
    """Load a numeric table, one sample per line.

    Blank lines and everything after a ``#`` are ignored. Fields are separated by commas or
    whitespace.

    @param filename  The file to read
    @param columns   Number of numeric columns every row must have

    @return  A float array of shape (rows, columns)

    @exception DataFormatError naming the file and line of the first malformed row
    """
    rows = []
    with open(filename, "r") as file:
        for lineno, raw in enumerate(file, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = _split(line)
            if len(fields) != columns:
                raise DataFormatError(
                    filename, lineno, f"expected {columns} columns, found {len(fields)}"
                )
            try:
                values = [float(field) for field in fields]
            except ValueError as e:
                raise DataFormatError(filename, lineno, str(e))
            if not all(np.isfinite(values)):
                raise DataFormatError(filename, lineno, "non-finite value")
            rows.append(values)

    if not rows:
        raise DataFormatError(filename, None, "no data rows")
    return np.asarray(rows, dtype=float)


def load_csv(filename, required=()) -> dict:
    """Load a CSV file whose first non-comment line names the columns.

    @param filename  The file to read
    @param required  Column names that must be present

    @return  A dict mapping each column name to a float array

    @exception DataFormatError naming the file and line of the first problem
    """
    names = None
    rows = []
    with open(filename, "r") as file:
        for lineno, raw in enumerate(file, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = _split(line)
            if names is None:
                missing = [name for name in required if name not in fields]
                if missing:
                    raise DataFormatError(
                        filename, lineno, f"missing column(s) {', '.join(missing)} in header"
                    )
                names = fields
                continue
            if len(fields) != len(names):
                raise DataFormatError(
                    filename, lineno, f"expected {len(names)} columns, found {len(fields)}"
                )
            try:
                values = [float(field) for field in fields]
            except ValueError as e:
                raise DataFormatError(filename, lineno, str(e))
            if not all(np.isfinite(values)):
                raise DataFormatError(filename, lineno, "non-finite value")
            rows.append(values)

    if names is None:
        raise DataFormatError(filename, None, "missing header row")
    if not rows:
        raise DataFormatError(filename, None, "no data rows")
    data = np.asarray(rows, dtype=float)
    return {name: data[:, i] for i, name in enumerate(names)}


def write_table(filename, header, rows, metadata=None):
    """Write a CSV table with deterministic float formatting.

    @param filename  Destination path, parent directories are created; None or "-" for stdout
    @param header    Column names, written as the first non-comment line
    @param rows      Anything ``numpy.asarray`` turns into a (n, len(header)) float array
    @param metadata  Optional mapping written as ``# key=value`` lines before the header
    """
    data = np.asarray(rows, dtype=float).reshape(-1, len(header))
    if filename in (None, "-"):
        _write_rows(sys.stdout, header, data, metadata)
        return
    directory = os.path.dirname(os.path.abspath(filename))
    os.makedirs(directory, exist_ok=True)
    with open(filename, "w", newline="\n") as file:
        _write_rows(file, header, data, metadata)
    log.info("wrote %d rows to %s", len(data), filename)


def _write_rows(file, header, data, metadata):
    for key, value in (metadata or {}).items():
        file.write(f"# {key}={value}\n")
    np.savetxt(file, data, fmt=FLOAT_FORMAT, delimiter=",", header=",".join(header), comments="")
