"""Exception types shared across the package."""


class ZigzagError(Exception):
    """Base class for all package-specific errors."""


class PrecisionExhausted(ZigzagError):
    """A computation cancelled all stored digits and a finite valuation was required."""


class InvalidWeight(ZigzagError):
    """Weight k is out of range (k >= 2 required)."""


class SlopeOutOfRange(ZigzagError):
    """Slope is not half-integral in (0, (p-1)/2], or otherwise unusable."""


class ZeroAp(ZigzagError):
    """a_p vanishes; the positive-slope machinery does not apply."""


class NonPositiveSlope(ZigzagError):
    """v(a_p) <= 0; only positive slopes are handled."""


class DegenerateT(ZigzagError):
    """Both chotomy parameters are infinite (r = b with a_p^2 = p^b)."""


class NotInTable(ZigzagError):
    """(k, slope) pair is not one of the tabulated small-weight cases."""


class MalformedLabel(ZigzagError):
    """An induced-representation label with (p+1) | c is not irreducible."""


class NotInImage(ZigzagError):
    """Multiset of smooth labels is not in the image of the dictionary."""


class WrongDegree(ZigzagError):
    """Functional applied to a tree function of the wrong symmetric degree."""


class SingularMatrix(ZigzagError):
    """Matrix is not invertible."""


class IndexOutOfRange(ZigzagError):
    """Filtration or factor index outside the valid range."""


class ParseError(ZigzagError):
    """a_p expression syntax error; carries the offending position."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position
