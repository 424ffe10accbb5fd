"""Exception hierarchy shared by all modules.

The CLI maps each family onto an exit code, so every error raised by the
library must derive from one of these.
"""


class FusionkitError(Exception):
    """Base class for all toolkit errors."""


class InputError(FusionkitError, ValueError):
    """Malformed input: wrong shapes, negative entries, bad permutations, bad JSON."""


class CapacityError(FusionkitError):
    """A configured size or node cap was exceeded."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}


class NumericalError(FusionkitError):
    """An iterative numerical routine failed to converge or lift."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class VerificationError(FusionkitError):
    """Data is well formed but violates a required mathematical property.

    Examples: Verlinde coefficients that are not nonnegative integers, a
    cochain that does not twist a ring into a valid ring, an unsatisfiable
    search specification.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsatisfiableError(VerificationError):
    """Constraint propagation derived a contradiction."""
