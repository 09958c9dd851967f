"""Exception hierarchy shared by all modules."""


class SmtkitError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(SmtkitError, ValueError):
    pass


class InvalidEncoding(ValidationError):
    pass


class EmptyCorpus(ValidationError):
    pass


class EmptyInput(ValidationError):
    pass


class MalformedPair(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class OverlappingSpans(ValidationError):
    pass


class DegenerateCounts(ValidationError):
    pass


class WeightError(ValidationError):
    pass


class EmptyReference(ValidationError):
    pass


class RangeError(ValidationError):
    pass


class TooFewPairs(ValidationError):
    pass


class TooFewValues(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class IncompleteMatrix(ValidationError):
    pass


class DegenerateMatrix(IncompleteMatrix):
    """Variance components vanish, so the coefficient is undefined."""
