from abc import ABC, abstractmethod

import numpy as np

SUP_NORM_GRID_POINTS = 2**16


class FunctionInput(ABC):
    """
    Abstract base class for right-hand sides v and observables.

    Every input can be evaluated pointwise and averaged over the cells of a
    partition level. The default averages use Gauss-Legendre quadrature of
    order 5 in every cell; variants with a closed form override them.

    Attributes:
        _variant (str): Variant tag used in reports
    """

    def __init__(self, variant: str):
        self._variant = variant

    @property
    def variant(self) -> str:
        return self._variant

    @property
    def is_real(self) -> bool:
        return True

    @abstractmethod
    def evaluate(self, x) -> np.ndarray:
        """
        Evaluate the input at circle points.

        Args:
            x: Point(s) in [0, 1)

        Returns:
            np.ndarray: Values with the shape of x
        """
        pass

    def cell_averages(self, tree, level: int) -> np.ndarray:
        """
        Average the input over every cell of a partition level.

        Args:
            tree: PartitionTree providing the cells
            level: Partition level

        Returns:
            np.ndarray: 2^level averages m(v, P)
        """
        return tree.cell_means(self.evaluate, level)

    def sup_norm(self) -> float:
        """Bound for sup |v|; sampled on a dense grid unless a variant knows better."""
        grid = np.arange(SUP_NORM_GRID_POINTS, dtype=float) / SUP_NORM_GRID_POINTS
        return float(np.max(np.abs(self.evaluate(grid))))

    def describe(self) -> dict:
        return {"variant": self._variant}
