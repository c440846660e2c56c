"""Exception types shared across the package.

Every error carries a stable machine-parsable ``category`` string; the CLI
prints it as the single-line error code.
"""


class FecamError(Exception):
    category = "error"


class InvalidPulseError(FecamError):
    category = "invalid-pulse"


class OutOfRangeError(FecamError):
    category = "out-of-range"


class InvalidParameterError(FecamError):
    category = "invalid-parameter"


class EmptyWindowError(FecamError):
    category = "empty-window"


class DisturbViolationError(FecamError):
    category = "disturb-violation"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DimensionMismatchError(FecamError):
    category = "dimension-mismatch"


class InconsistentInputError(FecamError):
    category = "inconsistent-input"


class ParseError(FecamError):
    category = "parse-error"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
