from functools import cached_property
from typing import Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from src.dynamics.partition.cell import Cell
from src.exceptions import ValidationError

MEAN_ROW_LEVEL = -1


class HaarSeries:
    """
    A function or distribution in the unbalanced Haar basis of a tree.

    psi = mean * 1_I + sum_P d_P * phi_P with phi_P = 1_{Q1}/|Q1| - 1_{Q2}/|Q2|
    over the children Q1, Q2 of P. The stored d_P are synthesis
    coefficients; the averages of psi follow from the exact pyramid
    m(Q1) = m(P) + d_P/|Q1| and m(Q2) = m(P) - d_P/|Q2|.

    Attributes:
        _tree (PartitionTree): The partitions the basis lives on
        _mean (complex): Coefficient of 1_I
        _details (Tuple[np.ndarray, ...]): details[k] holds the 2^k
            coefficients of the level-k cells
    """

    def __init__(self, tree, mean, details: Sequence[np.ndarray]):
        if len(details) > tree.depth:
            raise ValidationError(
                f"series with {len(details)} detail levels needs a tree deeper than {tree.depth}"
            )
        details = tuple(np.asarray(level_details) for level_details in details)
        for level, level_details in enumerate(details):
            if level_details.shape != (1 << level,):
                raise ValidationError(f"level {level} needs {1 << level} coefficients, got {level_details.shape}")
        complex_valued = np.iscomplexobj(mean) or any(np.iscomplexobj(d) for d in details)
        dtype = complex if complex_valued else float
        self._tree = tree
        self._mean = dtype(mean)
        self._details = tuple(d.astype(dtype) for d in details)

    @property
    def tree(self):
        return self._tree

    @property
    def mean(self):
        return self._mean

    @property
    def details(self) -> Tuple[np.ndarray, ...]:
        return self._details

    @property
    def depth(self) -> int:
        return len(self._details)

    @property
    def is_real(self) -> bool:
        return not isinstance(self._mean, complex)

    def coefficient(self, cell: Cell):
        if cell.level >= self.depth:
            return 0.0
        return self._details[cell.level][cell.index]

    @cached_property
    def _pyramid(self) -> List[np.ndarray]:
        dtype = complex if not self.is_real else float
        levels = [np.array([self._mean], dtype=dtype)]
        for level, level_details in enumerate(self._details):
            lengths = self._tree.lengths(level + 1)
            parent = np.repeat(levels[-1], 2)
            signs = np.tile([1.0, -1.0], 1 << level)
            levels.append(parent + signs * np.repeat(level_details, 2) / lengths)
        return levels

    def averages(self, level: int = None) -> np.ndarray:
        """
        Get the averages of the series over the cells of a level.

        Args:
            level: Target level, defaults to the series depth

        Returns:
            np.ndarray: 2^level cell averages
        """
        level = self.depth if level is None else level
        if level <= self.depth:
            return self._pyramid[level]
        return np.repeat(self._pyramid[-1], 1 << (level - self.depth))

    def point_eval(self, x, level: int = None):
        """Read the level-n cell average at the cell containing x."""
        level = self.depth if level is None else level
        values = self.averages(level)[self._tree.cell_indices(x, level)]
        return values.item() if np.ndim(values) == 0 else values

    def wavelet_norms_squared(self, level: int) -> np.ndarray:
        """Return ||phi_P||^2 = 1/|Q1| + 1/|Q2| for the cells of a level."""
        children = self._tree.lengths(level + 1)
        return 1.0 / children[0::2] + 1.0 / children[1::2]

    def pairing_coeffs(self, level: int, s: float = 0.0) -> np.ndarray:
        """
        Compute c_s(psi, P) = |P|^-s (m(psi, Q1) - m(psi, Q2)) on a level.

        Args:
            level: Level of the cells P, below the series depth
            s: Weight exponent

        Returns:
            np.ndarray: One pairing per level cell
        """
        if not 0 <= level < self.depth:
            raise ValidationError(f"pairing needs a level below {self.depth}, got {level}")
        weights = np.exp(-complex(s) * np.log(self._tree.lengths(level)))
        if complex(s).imag == 0.0:
            weights = weights.real
        return weights * self._details[level] * self.wavelet_norms_squared(level)

    def pairing_coeff(self, cell: Cell, s: float = 0.0):
        return self.pairing_coeffs(cell.level, s)[cell.index]

    def detail_sup(self) -> float:
        return max((float(np.max(np.abs(d))) for d in self._details), default=0.0)

    def with_details(self, mean, details: Iterable[np.ndarray]) -> "HaarSeries":
        return HaarSeries(self._tree, mean, list(details))

    def _check_compatible(self, other: "HaarSeries") -> None:
        if other.tree is not self._tree or other.depth != self.depth:
            raise ValidationError("series must share tree and depth to be combined")

    def __add__(self, other: "HaarSeries") -> "HaarSeries":
        self._check_compatible(other)
        return self.with_details(self._mean + other.mean, (a + b for a, b in zip(self._details, other.details)))

    def __sub__(self, other: "HaarSeries") -> "HaarSeries":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "HaarSeries":
        return self.with_details(scalar * self._mean, (scalar * d for d in self._details))

    __rmul__ = __mul__

    def __neg__(self) -> "HaarSeries":
        return (-1.0) * self

    def rows(self) -> Iterator[Tuple[int, str, float, float]]:
        """
        Yield (level, address, re, im) rows; the mean uses level -1.
        """
        mean = complex(self._mean)
        yield MEAN_ROW_LEVEL, "", mean.real, mean.imag
        for level, level_details in enumerate(self._details):
            for index, value in enumerate(level_details):
                value = complex(value)
                address = format(index, f"0{level}b") if level else ""
                yield level, address, value.real, value.imag

    @classmethod
    def from_rows(cls, tree, rows: Iterable[Tuple[int, str, float, float]]) -> "HaarSeries":
        """
        Rebuild a series from coefficient rows; missing coefficients are zero.

        Raises:
            ValidationError: If a row has a bad level, address or value
        """
        mean = 0.0
        entries = []
        for row in rows:
            level, index, value = _parse_row(*row)
            if level == MEAN_ROW_LEVEL:
                mean = value
            else:
                entries.append((level, index, value))
        depth = 1 + max((level for level, _, _ in entries), default=-1)
        details = [np.zeros(1 << level, dtype=complex) for level in range(depth)]
        for level, index, value in entries:
            details[level][index] = value
        if complex(mean).imag == 0.0 and all(np.all(d.imag == 0.0) for d in details):
            return cls(tree, complex(mean).real, [d.real for d in details])
        return cls(tree, mean, details)


def _parse_row(level, address, real, imag) -> Tuple[int, int, complex]:
    try:
        level = int(level)
        value = complex(float(real), float(imag))
    except (TypeError, ValueError) as error:
        raise ValidationError(f"malformed coefficient row {(level, address, real, imag)!r}: {error}") from error
    if level == MEAN_ROW_LEVEL:
        return level, 0, value
    address = address or ""
    if level < 0 or len(address) != level or set(address) - {"0", "1"}:
        raise ValidationError(f"address {address!r} does not name a level-{level} cell")
    return level, int(address, 2) if address else 0, value
