import numpy as np

from src.dynamics.maps.circle_map import CircleMap
from src.exceptions import ValidationError

MAX_EPSILON = 0.155


class PerturbedDoublingMap(CircleMap):
    """
    The perturbed doubling map with lift L(x) = 2x + epsilon*sin(2*pi*x).

    Expansion holds for |epsilon| < 1/pi; the constructor keeps a margin and
    rejects |epsilon| >= 0.155, so lambda_min >= 2 - 2*pi*|epsilon| > 1.02.
    """

    def __init__(self, epsilon: float):
        if not abs(epsilon) < MAX_EPSILON:
            raise ValidationError(f"epsilon must satisfy |epsilon| < {MAX_EPSILON}, got {epsilon!r}")
        self._epsilon = float(epsilon)
        super().__init__("perturbed_doubling")

    @property
    def epsilon(self) -> float:
        return self._epsilon

    def lift(self, x: np.ndarray) -> np.ndarray:
        return 2.0 * x + self._epsilon * np.sin(2.0 * np.pi * x)

    def lift_derivative(self, x: np.ndarray) -> np.ndarray:
        return 2.0 + 2.0 * np.pi * self._epsilon * np.cos(2.0 * np.pi * x)

    def describe(self) -> dict:
        return {**super().describe(), "epsilon": self._epsilon}
