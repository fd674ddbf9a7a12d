"""Shared exception types.

Every named failure mode of the library lives here so callers can catch one
base class. Anything raised as plain ValueError is a programming error
(violated pre-condition), not a mathematical outcome.
"""


class CartierError(Exception):
    """Base class for all library-specific failures."""


class NegativeValuation(CartierError):
    """Element is not integral, so it has no residue at the requested level."""


class NotAUnit(CartierError):
    """Series (or matrix) has no inverse because its constant term vanishes."""


class LeadingNotUnit(CartierError):
    """Raw operator cannot be made monic: leading coefficient vanishes at 0."""


class NotMOM(CartierError):
    """Operator coefficients do not all vanish at 0."""


class NotNilpotent(CartierError):
    """Constant term of the system matrix is not nilpotent."""


class OrderExhausted(CartierError):
    """Truncation order too short to support the requested computation."""


class VerificationFailed(CartierError):
    """A defining identity failed re-verification.

    Carries the first offending z-order when known.
    """

    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order


class ReconstructionFailed(CartierError):
    """No rational certificate found within the degree bound."""

    def __init__(self, message, deg_bound=None):
        super().__init__(message)
        self.deg_bound = deg_bound


class NotInK0(CartierError):
    """Candidate denominator vanishes somewhere in the open unit disc."""


class IntegralityFailure(CartierError):
    """A coefficient that should be integral has negative valuation.

    Carries the first offending index when known.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BadContext(CartierError):
    """Operation requires a different coefficient ring (ramification or prime)."""


class BadParameters(CartierError):
    """Series parameters outside the supported range."""
