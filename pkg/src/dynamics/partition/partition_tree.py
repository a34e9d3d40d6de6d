from dataclasses import dataclass
from typing import Callable, Iterator, List, Tuple

import numpy as np

from src.dynamics.maps.circle_map import CircleMap
from src.dynamics.partition.cell import Cell
from src.exceptions import ValidationError
from src.logging.method_logger import log_method_call

MAX_DEPTH = 26
QUADRATURE_ORDER = 5

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(QUADRATURE_ORDER)


@dataclass(frozen=True)
class GridDistance:
    """
    Value of the grid metric between two points.

    Attributes:
        value (float): Length of the smallest partition cell containing both
        level (int): Level of that cell
        depth_limited (bool): True when the cell sits at the deepest level,
            so the true distance may be smaller
    """
    value: float
    level: int
    depth_limited: bool


class PartitionTree:
    """
    Nested Markov partitions P^0, ..., P^N generated by preimages of 0.

    Level k is stored as a sorted endpoint array of length 2^k + 1 whose
    last entry is 1. Level k+1 keeps every level-k endpoint at even
    positions and adds one preimage point per cell at odd positions.

    Attributes:
        _circle_map (CircleMap): The map generating the partitions
        _endpoints (List[np.ndarray]): Endpoint arrays, one per level
        _lengths (List[np.ndarray]): Cell lengths, one array per level
    """

    def __init__(self, circle_map: CircleMap, endpoints: List[np.ndarray]):
        self._circle_map = circle_map
        self._endpoints = endpoints
        self._lengths = [np.diff(level) for level in endpoints]

    @classmethod
    @log_method_call
    def build(cls, circle_map: CircleMap, depth: int) -> "PartitionTree":
        """
        Refine the trivial partition depth times by pulling endpoints back.

        Args:
            circle_map: The expanding map
            depth: Deepest level N, between 1 and 26

        Returns:
            PartitionTree: The partitions P^0 ... P^N

        Raises:
            ValidationError: If depth is out of range
            NonConvergence: If a branch inversion fails
        """
        if not 1 <= depth <= MAX_DEPTH:
            raise ValidationError(f"depth must be between 1 and {MAX_DEPTH}, got {depth}")
        endpoints = [np.array([0.0, 1.0])]
        for level in range(depth):
            coarse = endpoints[-1]
            half = 1 << level
            fine = np.empty(2 * half + 1)
            fine[0::2] = coarse
            odd = np.arange(1, 2 * half, 2)
            first = odd[odd < half]
            second = odd[odd >= half]
            if first.size:
                fine[first] = circle_map.inverse_branch(0, coarse[first])
            fine[second] = circle_map.inverse_branch(1, coarse[second - half])
            endpoints.append(fine)
        return cls(circle_map, endpoints)

    @property
    def circle_map(self) -> CircleMap:
        return self._circle_map

    @property
    def depth(self) -> int:
        return len(self._endpoints) - 1

    def _check_level(self, level: int) -> None:
        if not 0 <= level <= self.depth:
            raise ValidationError(f"level must be between 0 and {self.depth}, got {level}")

    def endpoints(self, level: int) -> np.ndarray:
        self._check_level(level)
        return self._endpoints[level]

    def lengths(self, level: int) -> np.ndarray:
        self._check_level(level)
        return self._lengths[level]

    def cell(self, level: int, index: int) -> Cell:
        self._check_level(level)
        if not 0 <= index < (1 << level):
            raise ValidationError(f"cell index {index} out of range at level {level}")
        ends = self._endpoints[level]
        return Cell(level, index, float(ends[index]), float(ends[index + 1]))

    def cells(self, level: int) -> Iterator[Cell]:
        for index in range(1 << level):
            yield self.cell(level, index)

    def children(self, cell: Cell) -> Tuple[Cell, Cell]:
        first, second = cell.child_indices
        return self.cell(cell.level + 1, first), self.cell(cell.level + 1, second)

    def parent(self, cell: Cell) -> Cell:
        if cell.level == 0:
            raise ValidationError("the whole circle has no parent")
        return self.cell(cell.level - 1, cell.parent_index)

    def image(self, cell: Cell) -> Cell:
        """Return F(cell), a cell one level up."""
        if cell.level == 0:
            raise ValidationError("the whole circle has no image cell")
        return self.cell(cell.level - 1, cell.image_index)

    def cell_indices(self, x, level: int) -> np.ndarray:
        """
        Locate points in the half-open cells [a, b) of a level.

        Args:
            x: Point(s) in [0, 1)
            level: Partition level

        Returns:
            np.ndarray: Integer cell indices with the shape of x
        """
        self._check_level(level)
        indices = np.searchsorted(self._endpoints[level], np.asarray(x, dtype=float), side="right") - 1
        return np.clip(indices, 0, (1 << level) - 1)

    def cell_of(self, x: float, level: int) -> Cell:
        return self.cell(level, int(self.cell_indices(x, level)))

    def grid_metrics(self, x, y) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Vectorized grid metric d(x, y) = min |P| over cells containing x and y.

        The common ancestor of two deepest cells is found from the highest
        differing bit of their indices.

        Returns:
            Tuple of (values, levels, depth_limited flags)
        """
        depth = self.depth
        ix = self.cell_indices(x, depth)
        iy = self.cell_indices(y, depth)
        differing_bits = np.frexp(np.bitwise_xor(ix, iy).astype(float))[1]
        levels = depth - differing_bits
        ancestors = ix >> differing_bits
        values = np.empty(np.shape(levels))
        flat_levels = np.ravel(levels)
        flat_ancestors = np.ravel(ancestors)
        flat_values = values.reshape(-1)
        for level in np.unique(flat_levels):
            mask = flat_levels == level
            flat_values[mask] = self._lengths[level][flat_ancestors[mask]]
        return values, levels, levels == depth

    def grid_metric(self, x: float, y: float) -> GridDistance:
        values, levels, limited = self.grid_metrics(x, y)
        return GridDistance(float(values), int(levels), bool(limited))

    def quadrature(self, level: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Gauss-Legendre nodes of order 5 in every cell of a level.

        Returns:
            Tuple of nodes with shape (2^level, 5) and weights summing to 1
        """
        ends = self.endpoints(level)
        centers = 0.5 * (ends[:-1] + ends[1:])
        half_widths = 0.5 * np.diff(ends)
        nodes = centers[:, None] + half_widths[:, None] * _NODES[None, :]
        return nodes, 0.5 * _WEIGHTS

    def cell_means(self, func: Callable[[np.ndarray], np.ndarray], level: int) -> np.ndarray:
        """Approximate the average of func over every cell of a level."""
        nodes, weights = self.quadrature(level)
        values = np.asarray(func(nodes.ravel())).reshape(nodes.shape)
        return values @ weights

    def coarsen(self, values: np.ndarray, level: int) -> np.ndarray:
        """Turn level averages into averages one level up."""
        lengths = self.lengths(level)
        return (lengths[0::2] * values[0::2] + lengths[1::2] * values[1::2]) / self.lengths(level - 1)

    def project(self, values: np.ndarray, level: int, target: int) -> np.ndarray:
        """Move piecewise constant level data to another level by averaging or repeating."""
        while level > target:
            values = self.coarsen(values, level)
            level -= 1
        if target > level:
            values = np.repeat(values, 1 << (target - level))
        return values

    def shift(self, values: np.ndarray, level: int) -> np.ndarray:
        """
        Markov-shift composition on averages.

        Level averages of a function theta become level averages of theta o F
        by reading theta one level up at the image cell.
        """
        return np.tile(self.coarsen(values, level), 2)

    def distortion(self, level: int = None) -> Tuple[float, float]:
        """
        Get the spread of normalized cell lengths |P|*2^level.

        Returns:
            Tuple of (minimum, maximum)
        """
        level = self.depth if level is None else level
        scaled = self.lengths(level) * float(1 << level)
        return float(scaled.min()), float(scaled.max())

    def rows(self, max_level: int = None) -> Iterator[Tuple[int, str, float, float, float]]:
        """Yield (level, address, a, b, length) for every cell up to max_level."""
        max_level = self.depth if max_level is None else min(max_level, self.depth)
        for level in range(max_level + 1):
            for cell in self.cells(level):
                yield cell.level, cell.address, cell.a, cell.b, cell.length
