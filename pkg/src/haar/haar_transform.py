import numpy as np

from src.dynamics.partition.cell import Cell
from src.exceptions import ValidationError
from src.haar.haar_series import HaarSeries
from src.logging.method_logger import log_method_call


class HaarTransform:
    """
    Analysis and synthesis in the unbalanced Haar basis of a partition tree.

    Attributes:
        _tree (PartitionTree): The partitions defining the basis
    """

    def __init__(self, tree):
        self._tree = tree

    @property
    def tree(self):
        return self._tree

    def cell_averages(self, function_input, level: int) -> np.ndarray:
        return function_input.cell_averages(self._tree, level)

    @log_method_call
    def analyze(self, averages: np.ndarray) -> HaarSeries:
        """
        Build the Haar series of level-n cell averages.

        Climbing the pyramid, m(P) = (|Q1| m(Q1) + |Q2| m(Q2))/|P| and
        d_P = |Q1| (m(Q1) - m(P)).

        Args:
            averages: 2^n cell averages at level n

        Returns:
            HaarSeries: Mean m(psi, I) and n levels of coefficients
        """
        averages = np.asarray(averages)
        level = int(averages.size).bit_length() - 1
        if averages.ndim != 1 or averages.size != 1 << level:
            raise ValidationError(f"averages must have a power-of-two length, got {averages.shape}")
        if level > self._tree.depth:
            raise ValidationError(f"level {level} exceeds the tree depth {self._tree.depth}")
        details = []
        current = averages
        while level > 0:
            parent = self._tree.coarsen(current, level)
            details.append(self._tree.lengths(level)[0::2] * (current[0::2] - parent))
            current = parent
            level -= 1
        return HaarSeries(self._tree, current[0], details[::-1])

    def synthesize(self, series: HaarSeries, level: int = None) -> np.ndarray:
        return series.averages(level)

    def analyze_input(self, function_input, level: int) -> HaarSeries:
        return self.analyze(self.cell_averages(function_input, level))

    def dirac_expand(self, cell: Cell) -> HaarSeries:
        """
        Expand 1_P/|P| exactly: mean 1 and one coefficient per ancestor of P.

        Args:
            cell: The cell P

        Returns:
            HaarSeries of depth level(P)
        """
        averages = np.zeros(1 << cell.level)
        averages[cell.index] = 1.0 / self._tree.lengths(cell.level)[cell.index]
        return self.analyze(averages)
