"""Exception types shared across the package."""


class StylewarpError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(StylewarpError):
    """Bad arguments, configuration values, or input data."""


class ParseError(StylewarpError):
    """A file could not be parsed; carries the offending location."""

    def __init__(self, path, line: int, message: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{self.path}:{line}: {message}")


class InfeasibleWindowError(StylewarpError):
    """A constrained alignment window admits no valid warping path."""


class ConvergenceError(StylewarpError):
    """An iterative solver exhausted its iteration budget."""


class StageError(StylewarpError):
    """A pipeline stage failed; wraps the underlying cause."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")
