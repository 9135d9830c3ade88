"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``InvalidInput`` -> 1,
``InvariantViolation`` -> 2, ``ReplayMismatch`` -> 3.
"""


class FillcertError(Exception):
    pass


class InvalidInput(FillcertError, ValueError):
    pass


class CensusUncertified(InvalidInput):
    """Action bound at or above k+1, where the orbit census is not certified."""


class InvariantViolation(FillcertError, AssertionError):
    pass


class Refusal(FillcertError):
    """A derivation step was asked for without its prerequisites."""

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence


class ReplayMismatch(FillcertError):
    pass
