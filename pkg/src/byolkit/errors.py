"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: ContractViolation -> 1,
PipelineIOError / BackendError -> 2.
"""


class ByolkitError(Exception):
    """Base class for all toolkit errors."""


class ContractViolation(ByolkitError):
    """An operation was called with inputs that violate its contract."""


class InputFormatError(ContractViolation):
    """A structured input file is malformed.

    Carries enough position information to point at the offending line.
    """

    def __init__(self, message, *, line_number=None, byte_offset=None):
        self.line_number = line_number
        self.byte_offset = byte_offset
        prefix = ""
        if line_number is not None:
            prefix = f"line {line_number}"
            if byte_offset is not None:
                prefix += f" (byte offset {byte_offset})"
            prefix += ": "
        super().__init__(prefix + message)


class PipelineIOError(ByolkitError):
    """Filesystem or network failure outside the caller's control."""


class BackendError(PipelineIOError):
    """A translation backend call failed; retryable per harness policy."""
