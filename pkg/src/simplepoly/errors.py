"""Exception types shared across the package."""


class SimplePolyError(Exception):
    """Base class for all package errors."""


class InvalidInput(SimplePolyError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class UnknownExample(SimplePolyError, KeyError):
    pass


class Incompatible(SimplePolyError):
    """The Y-bundle monodromy of some loop is a transposition."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ChartUnsupported(SimplePolyError):
    pass


class NotALoop(SimplePolyError):
    pass


class NotAComplex(SimplePolyError):
    pass


class Disconnected(SimplePolyError):
    pass


class SNFOverflow(SimplePolyError, OverflowError):
    pass


class TorsionAnomaly(SimplePolyError):
    pass


class VerificationFailure(SimplePolyError):
    """A constructed object failed its post-hoc checks (a bug certificate)."""
