"""Typed error hierarchy shared by all modules.

Three families matter for the CLI exit-code contract: input errors
(malformed or inadmissible data, exit 2), unsupported-input conditions
(exact answers exist but lie outside the declared scalar field or the
closure cap, exit 3), and plain falsehood of a checked property, which
is reported, not raised (exit 1).
"""


class WdrepError(Exception):
    """Base class for all library errors."""


class InputError(WdrepError):
    """Malformed or inadmissible input (CLI exit code 2)."""


class UnsupportedError(WdrepError):
    """Exact computation cannot proceed within the declared field/caps (exit 3)."""


class ZeroScalar(InputError):
    pass


class PoleAtPoint(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class NotSquare(InputError):
    pass


class Singular(InputError):
    pass


class NotNilpotent(InputError):
    pass


class ParamsMismatch(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class SingularFrobeniusAtPoint(InputError):
    pass


class VanishingCharacterAtPoint(InputError):
    pass


class NotIrreducible(InputError):
    pass


class NotPure(InputError):
    pass


class TraceMismatch(InputError):
    pass


class CapExceeded(UnsupportedError):
    """Group closure exceeded its cap; inertia image not verifiably finite."""


class EigenvaluesOutsideSupportedField(UnsupportedError):
    """A required spectral quantity is not a q-monomial at the working level."""


class WdSyntaxError(InputError):
    """Position-annotated parse failure of a document or scalar string."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class HeaderMismatch(InputError):
    pass


class InvariantViolation(InputError):
    """Document parsed but the object fails validation; carries the report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
