"""Exception types shared across the package."""


class PrefoptError(Exception):
    """Base class for all package errors."""


class CurveValidationError(PrefoptError):
    """Malformed preference curve (non-monotone abscissae, bad anchors, ...)."""


class DegenerateIntervalError(PrefoptError):
    """Performance interval with f_min >= f_max."""


class InsufficientCandidatesError(PrefoptError):
    """Fewer than two candidates: z-normalization is undefined."""


class WeightSchemaError(PrefoptError):
    """Weight matrix refers to unknown columns or fails basic validity."""


class DomainError(PrefoptError):
    """Decision vector outside its declared domain bounds."""


class CapabilityError(PrefoptError):
    """Capability evaluator cannot produce a performance vector."""


class InstanceError(PrefoptError):
    """Inconsistent or invalid instance data."""


class ConstructionError(PrefoptError):
    """Decoder could not construct a feasible solution for this instance."""


class BudgetError(PrefoptError):
    """Enumeration or search budget exceeded."""


class InfeasibilityExhaustedError(PrefoptError):
    """Search exhausted its budget without finding a feasible-acceptable candidate."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ProblemFileError(PrefoptError):
    """Problem/override file failed to parse or validate."""

    def __init__(self, message: str, *, path: str | None = None, location: str | None = None):
        super().__init__(message)
        self.path = path
        self.location = location  # json path or line:col anchor
