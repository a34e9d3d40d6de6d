from typing import Callable

import numpy as np

from src.dynamics.maps.circle_map import CircleMap

LiftRule = Callable[[np.ndarray], np.ndarray]


class CustomLiftMap(CircleMap):
    """
    A degree-2 map given by a user supplied lift and its derivative.

    The lift must be strictly increasing on [0, 1] with L(0) = 0 and
    L(1) = 2; this is checked at construction together with expansion.
    """

    def __init__(self, lift: LiftRule, derivative: LiftRule, label: str = "custom_lift"):
        self._lift = lift
        self._derivative = derivative
        self._label = label
        super().__init__("custom_lift")

    def lift(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self._lift(x), dtype=float)

    def lift_derivative(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self._derivative(x), dtype=float)

    def describe(self) -> dict:
        return {**super().describe(), "label": self._label}
