import numpy as np

from src.haar.inputs.function_input import FunctionInput


class CoboundaryInput(FunctionInput):
    """
    The twisted coboundary v = alpha o F - g^beta * alpha of a known alpha.

    Solving the twisted equation with this right-hand side must return
    alpha itself, which makes it the round-trip input.
    """

    def __init__(self, alpha: FunctionInput, circle_map, beta: float):
        super().__init__("coboundary")
        self._alpha = alpha
        self._circle_map = circle_map
        self._beta = beta

    @property
    def alpha(self) -> FunctionInput:
        return self._alpha

    @property
    def beta(self) -> float:
        return self._beta

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        weight = np.asarray(self._circle_map.deriv(x)) ** self._beta
        return self._alpha.evaluate(self._circle_map.eval(x)) - weight * self._alpha.evaluate(x)

    def describe(self) -> dict:
        return {"variant": self.variant, "alpha": self._alpha.describe(), "beta": self._beta}
