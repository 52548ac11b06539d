"""Exception types raised across the package."""


class CharSumError(Exception):
    """Base class for all package errors."""


class DomainError(CharSumError, ValueError):
    pass


class NotInvertible(CharSumError, ValueError):
    pass


class NonResidue(CharSumError, ValueError):
    pass


class NotPrimitive(CharSumError, ValueError):
    pass


class VerificationFailed(CharSumError):
    """An identity that must hold exactly did not."""


class ToleranceNotMet(CharSumError):
    pass


class PrecisionLoss(CharSumError):
    pass


class BadForm(CharSumError, ValueError):
    pass


class DegenerateDenominator(CharSumError, ValueError):
    pass


class DenominatorVanishes(CharSumError, ValueError):
    pass


class HypothesisViolated(CharSumError):
    """Inputs fall outside the range where an estimate is claimed."""


class ParamViolation(CharSumError, ValueError):
    pass


class ClaimViolated(CharSumError):
    """A multiplicity/order claim failed; carries the offending parameters."""

    def __init__(self, message, params=None):
        super().__init__(message)
        self.params = params


class Infeasible(CharSumError):
    pass
