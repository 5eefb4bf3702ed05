"""Exception hierarchy.  Every domain error carries a JSON-friendly payload."""


class TSGreenError(Exception):
    """Base class for domain errors raised by the library."""

    code = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def to_json(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        out.update({k: v for k, v in self.details.items() if v is not None})
        return out


class FieldError(TSGreenError):
    code = "FieldError"


class GroupSpecError(TSGreenError):
    code = "GroupSpecError"


class GroupTooLarge(TSGreenError):
    code = "GroupTooLarge"


class DegreeTooLarge(TSGreenError):
    code = "DegreeTooLarge"


class BadAction(TSGreenError):
    code = "BadAction"


class NotNormal(TSGreenError):
    code = "NotNormal"


class CharacteristicDividesM(TSGreenError):
    code = "CharacteristicDividesM"


class NotMinimalCounterexample(TSGreenError):
    code = "NotMinimalCounterexample"


class DimensionMismatch(TSGreenError):
    code = "DimensionMismatch"


class DimensionCapExceeded(TSGreenError):
    code = "DimensionCapExceeded"


class DecompositionFailed(TSGreenError):
    code = "DecompositionFailed"


class NotIndecomposable(TSGreenError):
    code = "NotIndecomposable"


class NotTrivialSource(TSGreenError):
    code = "NotTrivialSource"


class UnknownSummand(TSGreenError):
    code = "UnknownSummand"


class InconsistentIdealCheck(TSGreenError):
    code = "InconsistentIdealCheck"


class HypothesisViolation(TSGreenError):
    code = "HypothesisViolation"


class CertificateFailed(TSGreenError):
    code = "CertificateFailed"


class TheoremViolation(TSGreenError):
    code = "TheoremViolation"


class CatalogError(TSGreenError):
    code = "CatalogError"
