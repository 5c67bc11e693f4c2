"""Exception hierarchy shared by every gtomo module."""


class GtomoError(Exception):
    """Base class; ``code`` is the machine-readable tag used in CLI reports."""

    code = "GtomoError"


class GeometryError(GtomoError):
    code = "GeometryError"


class UnboundedPolytope(GeometryError):
    code = "UnboundedPolytope"


class EmptyPolytope(GeometryError):
    code = "EmptyPolytope"


class DegeneratePolytope(GeometryError):
    code = "DegeneratePolytope"


class PieceCountTooLarge(GeometryError):
    code = "PieceCountTooLarge"


class DimensionError(GtomoError):
    code = "DimensionError"


class NonMonotoneInterval(GtomoError):
    code = "NonMonotoneInterval"


class DiscontinuousSamplePoint(GtomoError):
    code = "DiscontinuousSamplePoint"

    def __init__(self, message, position=None, left=None, right=None, value=None):
        super().__init__(message)
        self.position = position
        self.left = left
        self.right = right
        self.value = value


class SuperadditivityViolation(GtomoError):
    code = "SuperadditivityViolation"

    def __init__(self, message, direction=None, marginal=None, body=None):
        super().__init__(message)
        self.direction = direction
        self.marginal = marginal
        self.body = body


class NonConvergence(GtomoError):
    code = "NonConvergence"


class DegenerateWeights(GtomoError):
    code = "DegenerateWeights"


class TooManyDirections(GtomoError):
    code = "TooManyDirections"


class EpsilonTooLarge(GtomoError):
    code = "EpsilonTooLarge"


class ParseError(GtomoError):
    code = "ParseError"


class InvariantViolation(GtomoError):
    code = "InvariantViolation"
