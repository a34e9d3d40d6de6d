from typing import Callable

import numpy as np

from src.haar.inputs.function_input import FunctionInput


class PointwiseInput(FunctionInput):
    """An input given by a vectorized evaluation rule, bounded on [0, 1)."""

    def __init__(self, rule: Callable[[np.ndarray], np.ndarray], label: str = "pointwise"):
        super().__init__("pointwise")
        self._rule = rule
        self._label = label

    def evaluate(self, x) -> np.ndarray:
        return np.asarray(self._rule(np.asarray(x, dtype=float)))

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.evaluate(np.array([0.0, 0.5])))

    def describe(self) -> dict:
        return {**super().describe(), "label": self._label}
