"""Exception types shared across the package."""


class FzkError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(FzkError, ValueError):
    """A scalar parameter is outside its admissible range."""


class ResolutionMismatchError(FzkError, ValueError):
    """A physical grid is too coarse to represent the requested modes."""


class WorkspaceMismatchError(FzkError, ValueError):
    """A workspace was built for a different discretization."""


class OracleSizeError(FzkError, ValueError):
    """The brute-force convolution oracle was asked for a size it refuses."""


class ZeroFieldError(FzkError, ValueError):
    """An operation that needs a nonzero field received an identically zero one."""


class GridMismatchError(FzkError, ValueError):
    """Two real fields live on different grids."""


class NonDoublingSequenceError(FzkError, ValueError):
    """A resolution or step-size sequence does not double/halve as required."""


class BlowUpError(FzkError, ArithmeticError):
    """Non-finite coefficients appeared during time stepping.

    Attributes:
        t: simulation time of the failing step.
        step_index: global index of the failing step, when known.
    """

    def __init__(self, message, t=None, step_index=None):
        super().__init__(message)
        self.t = t
        self.step_index = step_index


class ConfigParseError(FzkError, ValueError):
    """A config file is syntactically malformed; carries the line number."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ConfigValidationError(FzkError, ValueError):
    """A config value is out of range or a key is unknown; carries the key."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class SnapshotFormatError(FzkError, ValueError):
    """A snapshot file is corrupt: bad magic, bad header, or wrong length."""
