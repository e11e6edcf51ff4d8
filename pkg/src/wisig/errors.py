"""Exception hierarchy shared across the package."""


class WisigError(Exception):
    """Base class for all package errors."""


class InputError(WisigError):
    """Rejected input: bad dimensions, non-finite values, empty collections."""


class ProtocolError(WisigError):
    """Dataset does not satisfy the requested experimental protocol."""


class TrainingError(WisigError):
    """Solver failed to converge; carries iteration diagnostics."""

    def __init__(self, message, iterations=None, gap=None):
        super().__init__(message)
        self.iterations = iterations
        self.gap = gap


class ParseError(WisigError):
    """Malformed input file. `line` is 1-based; `offset` is a byte offset."""

    def __init__(self, message, line=None, offset=None):
        super().__init__(message)
        self.line = line
        self.offset = offset


class ModelVersionError(WisigError):
    """Model container carries an unsupported version tag."""
