import numpy as np

from src.exceptions import ValidationError
from src.haar.haar_series import HaarSeries
from src.haar.inputs.function_input import FunctionInput


class HaarCoefficientInput(FunctionInput):
    """
    An input given by an explicit HaarSeries, possibly discontinuous.

    Cell averages are the exact projection of the series and never use
    quadrature.
    """

    def __init__(self, series: HaarSeries):
        super().__init__("haar_coeffs")
        self._series = series

    @property
    def series(self) -> HaarSeries:
        return self._series

    @property
    def is_real(self) -> bool:
        return self._series.is_real

    def evaluate(self, x) -> np.ndarray:
        return self._series.point_eval(x)

    def cell_averages(self, tree, level: int) -> np.ndarray:
        if tree is not self._series.tree:
            raise ValidationError("haar_coeffs input was analyzed on a different partition tree")
        source = min(level, self._series.depth)
        return tree.project(self._series.averages(source), source, level)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self._series.averages(self._series.depth))))

    def describe(self) -> dict:
        return {"variant": self.variant, "depth": self._series.depth}
