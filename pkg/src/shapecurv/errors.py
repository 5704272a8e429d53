"""Exception types shared across the package."""


class ShapeCurvError(ValueError):
    """Base class for domain errors (bad geometry, degenerate input)."""


class CollisionError(ShapeCurvError):
    """Two bodies are closer than the collision tolerance.

    ``pair`` holds the 1-based indices of the closest colliding pair.
    """

    def __init__(self, message, pair=None, distance=None):
        super().__init__(message)
        self.pair = pair
        self.distance = distance


class ZeroPointError(ShapeCurvError):
    """A reduced point with zero norm has no shape."""


class FrameError(ShapeCurvError):
    """Tangent vectors are not orthonormal and horizontal."""


class IllConditionedError(ShapeCurvError):
    """The requested two-plane is numerically degenerate."""
