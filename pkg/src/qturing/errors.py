"""Exception types shared across the package."""


class QTuringError(Exception):
    """Base class for all package errors."""


class DimensionError(QTuringError, ValueError):
    """State or operator has the wrong size for the requested network."""


class InvalidBitError(QTuringError, ValueError):
    pass


class SubsystemError(QTuringError, IndexError):
    """Subsystem id outside 0..M, or not allowed for the operation."""


class ImpossibleOutcomeError(QTuringError, ValueError):
    """Projection onto a branch of (numerically) zero probability."""


class UnsupportedError(QTuringError):
    """Operation not defined for this machine (e.g. per-cycle angles)."""


class ConfigError(QTuringError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
