"""Shared exception types."""


class SegalcheckError(Exception):
    """Base class for all errors raised by this package."""


class CompositionError(SegalcheckError):
    """Morphisms are not composable (rank mismatch or different categories)."""


class InvalidMorphismError(SegalcheckError):
    """Morphism data violates a structural invariant."""


class EmptyFamilyError(SegalcheckError):
    """A projection family was requested at n = 0."""


class RankError(SegalcheckError):
    """An operation needs a rank beyond the truncation of a diagram."""


class ReductionError(SegalcheckError):
    """Reduction is undefined (empty level zero)."""


class InvalidSpineError(SegalcheckError):
    """Spine requested at a rank where it is not defined."""


class PreconditionError(SegalcheckError):
    """A documented operation precondition does not hold."""


class InputError(SegalcheckError):
    """Malformed user-supplied structure data."""


class CapabilityError(SegalcheckError):
    """Requested bounds exceed what the implementation supports."""


class WordBoundError(SegalcheckError):
    """A free-word computation left the configured length budget."""

    def __init__(self, message, morphism=None, element=None):
        super().__init__(message)
        self.morphism = morphism
        self.element = element


class StrictnessError(SegalcheckError):
    """A strictness precondition failed; carries the offending report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ExtractionRefused(SegalcheckError):
    """Structure extraction refused; carries the failing condition report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
