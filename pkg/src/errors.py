"""
Exception hierarchy for the QRLC / noise-guessing toolkit.
The CLI maps these onto exit codes (see src/cli.py).
"""


class QGrandError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(QGrandError, ValueError):
    """A parameter violates the precondition of an operation."""


class DimensionError(ValidationError):
    """Operands have incompatible qubit counts or lengths."""


class NoiseModelError(ValidationError):
    """Noise statistics are malformed or a requested entropy is unattainable."""


class ConfigError(ValidationError):
    """Bad run configuration (flags or config file)."""


class CodeFormatError(QGrandError):
    """A code file could not be parsed."""


class FormatVersionError(CodeFormatError):
    """Missing or unsupported code-file header."""


class ChecksumError(CodeFormatError):
    """Code-file checksum or internal consistency check failed."""


class RankError(QGrandError):
    """Extracted stabilizers are not independent over GF(2)."""


class SingularFitError(QGrandError):
    """Least-squares design matrix is singular."""
