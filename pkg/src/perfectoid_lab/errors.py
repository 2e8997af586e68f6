"""Exception hierarchy for perfectoid-lab.

Every failure mode that the kernel can certify gets its own class so that
callers (and the CLI) can map failures to exit codes without string matching.
"""


class PerfectoidError(Exception):
    """Base class for all library errors."""


class ParameterError(PerfectoidError):
    """Mismatched field parameters (p, f, modulus, scale, denominator bound)."""


class PrecisionError(PerfectoidError):
    """An operation would need exponents or windows beyond the tracked bounds."""


class DivisionByZeroError(PerfectoidError):
    """Inversion of zero (or of something indistinguishable from zero)."""


class NonUnitError(PerfectoidError):
    """Inversion of a non-unit where a unit is required."""


class NotPrimitiveError(PerfectoidError):
    """A Witt vector failed one of the primitivity conditions."""

    def __init__(self, condition, message=None):
        self.condition = condition
        super().__init__(message or f"not primitive: {condition}")


class NonConvergenceError(PerfectoidError):
    """An iteration exceeded its certified pass bound (bug indicator)."""


class UnsupportedResidueRootError(PerfectoidError):
    """The residue polynomial has no root in the available finite field."""

    def __init__(self, residue_poly, message=None):
        self.residue_poly = residue_poly
        super().__init__(message or "residue polynomial has no root in F_q")


class DegenerateRootError(PerfectoidError):
    """The residue polynomial has only non-simple roots."""


class OracleTooLargeError(PerfectoidError):
    """Symbolic oracle term count exceeded the configured limit."""


class InternalConsistencyError(PerfectoidError):
    """An exactness assertion failed (inexact division by p etc.); a bug."""


class SchemaError(PerfectoidError):
    """Malformed serialized element; message carries a path-level diagnostic."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class ConfigError(PerfectoidError):
    """Invalid configuration value."""
