"""Exception hierarchy shared by all modules."""


class SynapticError(Exception):
    """Base class for library errors."""


class InputError(SynapticError, ValueError):
    """Malformed input: dimension/space mismatch, asymmetry, parse failure."""


class DomainError(SynapticError, ValueError):
    """An operation was applied outside its mathematical domain."""


class NotInvertibleError(DomainError):
    """Raised by :func:`synaptic.matrix_model.invert`.

    ``min_abs_spec`` carries the smallest absolute eigenvalue found.
    """

    def __init__(self, min_abs_spec, threshold):
        self.min_abs_spec = min_abs_spec
        self.threshold = threshold
        super().__init__(
            f"element is not invertible: min|spec| = {min_abs_spec:.3e} "
            f"< epsilon = {threshold:.3e}"
        )


class DiagnosticError(SynapticError, RuntimeError):
    """Two criteria that must agree mathematically disagreed numerically."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)
