"""Exception hierarchy shared by all modules."""


class HNError(Exception):
    """Base class for every error raised by this package."""


class BackendMismatchError(HNError, TypeError):
    """Rational and floating values were combined in one computation."""


class DimensionMismatchError(HNError, ValueError):
    pass


class FrameMismatchError(HNError, ValueError):
    """Two tensors live on different Lie frames."""


class SingularMatrixError(HNError, ValueError):
    pass


class DegenerateMetricError(HNError, ValueError):
    pass


class NotALieAlgebraError(HNError, ValueError):
    """Structure constants violate antisymmetry or the Jacobi identity."""

    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class StructureError(HNError, ValueError):
    """An almost hypercomplex HN-metric structure failed validation.

    ``violations`` holds every :class:`~hnstruct.structure.Violation` found,
    the first of which is summarised in the message.
    """

    kind = "structure-violation"

    def __init__(self, violations):
        self.violations = list(violations)
        first = self.violations[0]
        more = len(self.violations) - 1
        suffix = f" (+{more} more)" if more else ""
        super().__init__(f"{first}{suffix}")


class QuaternionicViolation(StructureError):
    kind = "quaternionic-violation"


class CompatibilityViolation(StructureError):
    kind = "compatibility-violation"


class SignatureViolation(StructureError):
    kind = "signature-violation"


class Theorem36Inconsistency(HNError, AssertionError):
    """Some but not all associated Nijenhuis tensors vanish while two or more do."""


class G1PredicateDisagreement(HNError, AssertionError):
    """The two characterisations of the cocalibrated class disagree."""


class GeneratorFailure(HNError, RuntimeError):
    pass


class InstanceFormatError(HNError, ValueError):
    """An instance file could not be parsed."""
