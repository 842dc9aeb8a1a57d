"""Exception hierarchy for nfheat.

Every error raised on purpose by the library derives from ``NfheatError``. The command line
maps the three families below onto its exit codes:

* ``ConfigError``     -> 2
* ``NumericalError``  -> 3
* ``DataFormatError`` -> 4 (as does any ``OSError``)
"""


class NfheatError(Exception):
    """Base class for all nfheat errors."""

    exit_code = 1


class ConfigError(NfheatError):
    """An invalid run configuration."""

    exit_code = 2


class NumericalError(NfheatError):
    """A computation could not produce a trustworthy number."""

    exit_code = 3


class DomainError(NumericalError, ValueError):
    """An argument lies outside the domain of the operation (e.g. a negative separation)."""


class RangeError(NumericalError, ValueError):
    """A frequency lies outside the support of a tabulated quantity."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not reach the requested tolerance.

    @param message   Description of the failure, usually QUADPACK's own message
    @param achieved  The absolute error estimate that was reached
    """

    def __init__(self, message, achieved=None):
        super().__init__(message if achieved is None else f"{message} (achieved {achieved:.3g})")
        self.achieved = achieved


class ExtrapolationError(NumericalError):
    """Extrapolation to zero separation produced an unphysical value."""


class FitError(NumericalError):
    """A least-squares problem is rank deficient or under-determined."""


class ContractViolation(NumericalError):
    """A user-supplied callable breaks the contract it promised (e.g. odd-in-k content)."""


class KernelNotQuadraticError(NumericalError):
    """The perturbative kernel is not described by {1, k^2, k^4} at the probed k."""


class ScalingRegimeError(NumericalError):
    """A coefficient that must be separation independent is not."""


class CoverageError(NumericalError):
    """A table does not cover the thermally weighted frequency support."""


class MissingIntegrationConstant(NumericalError):
    """An absolute transfer was requested without the integration constant d0."""


class DataFormatError(NfheatError):
    """A data file could not be parsed.

    @param filename  The offending file
    @param line      1-based line number, or None if the problem is not tied to a line
    @param message   What is wrong
    """

    exit_code = 4

    def __init__(self, filename, line, message):
        where = f"{filename}:{line}" if line is not None else f"{filename}"
        super().__init__(f"{where}: {message}")
        self.filename = filename
        self.line = line
