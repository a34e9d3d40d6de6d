from dataclasses import dataclass


@dataclass(frozen=True)
class Cell:
    """
    A cell of the Markov partition P^level.

    The index written in binary with `level` digits, most significant
    first, is the cylinder address. Children append a digit and the map F
    drops the leading digit.

    Attributes:
        level (int): Partition level, 0 for the whole circle
        index (int): Position among the 2^level cells, left to right
        a (float): Left endpoint, included
        b (float): Right endpoint, excluded
    """
    level: int
    index: int
    a: float
    b: float

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def address(self) -> str:
        return format(self.index, f"0{self.level}b") if self.level else ""

    @property
    def child_indices(self) -> tuple:
        return 2 * self.index, 2 * self.index + 1

    @property
    def parent_index(self) -> int:
        return self.index >> 1

    @property
    def image_index(self) -> int:
        """Index of F(cell) at level - 1."""
        return self.index % (1 << (self.level - 1)) if self.level else 0

    def contains(self, x: float) -> bool:
        return self.a <= x < self.b
