"""Exception types shared across the package.

The CLI maps these onto exit codes: parameter/input/capacity problems are
usage errors (exit 2), a search that ends without a detection is exit 1,
and anything else is an internal failure (exit 3).
"""


class ParameterError(ValueError):
    """An argument is outside its documented domain."""


class InputError(ValueError):
    """Malformed input data (non-finite entries, bad file contents, ...)."""


class ContractError(RuntimeError):
    """A subroutine precondition (encoding error budget, etc.) is violated."""


class CapacityError(RuntimeError):
    """The request exceeds a hard numeric limit of the emulation."""


class GapNotFound(RuntimeError):
    """The coarse search hit its minimum grid width without a detection."""

    def __init__(self, message, ledger=None, diagnostics=None):
        super().__init__(message)
        self.ledger = ledger
        self.diagnostics = diagnostics or {}


class DetectionFailed(RuntimeError):
    """The refinement grid produced no point with the expected count."""

    def __init__(self, message, ledger=None, diagnostics=None):
        super().__init__(message)
        self.ledger = ledger
        self.diagnostics = diagnostics or {}
