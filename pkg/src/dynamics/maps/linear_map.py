import numpy as np

from src.dynamics.maps.circle_map import ArrayLike, CircleMap, _restore_shape
from src.exceptions import ValidationError


class LinearMap(CircleMap):
    """The doubling map x -> 2x mod 1, whose partitions are dyadic."""

    def __init__(self):
        super().__init__("linear")

    def lift(self, x: np.ndarray) -> np.ndarray:
        return 2.0 * x

    def lift_derivative(self, x: np.ndarray) -> np.ndarray:
        return np.full_like(np.asarray(x, dtype=float), 2.0)

    def inverse_branch(self, branch: int, y: ArrayLike) -> ArrayLike:
        if branch not in (0, 1):
            raise ValidationError(f"branch must be 0 or 1, got {branch!r}")
        scalar = np.ndim(y) == 0
        return _restore_shape(0.5 * (np.atleast_1d(np.asarray(y, dtype=float)) + branch), scalar)
