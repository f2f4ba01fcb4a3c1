"""Exception types shared across the toolkit."""


class FrameweaveError(Exception):
    """Base class for every error raised by this package."""


class NotFinite(FrameweaveError):
    """Input contains NaN or infinite entries."""


class NonSymmetric(FrameweaveError):
    """Matrix fails the relative symmetry check."""


class NonSquare(FrameweaveError):
    """Operation requires a square matrix."""


class DimensionMismatch(FrameweaveError):
    """Objects live in different ambient dimensions."""


class ShapeMismatch(FrameweaveError):
    """Paired families disagree in vector count or ambient dimension."""


class NotAFrame(FrameweaveError):
    """Family does not span the required space."""


class TooFewVectors(FrameweaveError):
    """Family is too small for the requested test."""


class ZeroCoefficient(FrameweaveError):
    """A combination coefficient that must be nonzero is zero."""


class ZeroFamily(FrameweaveError):
    """Every vector of the family is zero."""


class EmptyList(FrameweaveError):
    """A nonempty list of values is required."""


class EnumerationLimitExceeded(FrameweaveError):
    """Subset enumeration would exceed the configured size limit."""


class NotWovenPremise(FrameweaveError):
    """A check requires a woven pair as its premise and the pair is not woven."""


class BadDimensions(FrameweaveError):
    """Requested dimensions are outside the supported desk-scale range."""


class TrivialSubset(FrameweaveError):
    """The empty or full index subset is not allowed here."""
