from typing import Sequence

import numpy as np

from src.exceptions import ValidationError
from src.haar.inputs.function_input import FunctionInput


def _harmonic_means(frequencies: np.ndarray, coefficients: np.ndarray, ends: np.ndarray, kind: str) -> np.ndarray:
    """Exact averages of sum_k c_k cos/sin(2*pi*f_k*x) over the cells [ends[i], ends[i+1])."""
    centers = 0.5 * (ends[:-1] + ends[1:])
    widths = np.diff(ends)
    wave = np.cos if kind == "cos" else np.sin
    total = np.zeros_like(centers)
    for frequency, coefficient in zip(frequencies, coefficients):
        if coefficient == 0.0:
            continue
        phase = 2.0 * np.pi * np.mod(frequency * centers, 1.0)
        total += coefficient * wave(phase) * np.sinc(frequency * widths)
    return total


class FourierInput(FunctionInput):
    """
    A trigonometric polynomial c_0 + sum_k a_k cos(2*pi*k*x) + b_k sin(2*pi*k*x).

    cosine[k] multiplies cos(2*pi*k*x), so cosine[0] is the constant term;
    sine[k] multiplies sin(2*pi*k*x) and sine[0] is ignored. Cell averages
    are computed in closed form.
    """

    def __init__(self, cosine: Sequence[float] = (), sine: Sequence[float] = (), variant: str = "fourier"):
        super().__init__(variant)
        self._cosine = np.asarray(cosine, dtype=float)
        self._sine = np.asarray(sine, dtype=float)
        if self._cosine.ndim != 1 or self._sine.ndim != 1:
            raise ValidationError("fourier coefficient lists must be flat")
        if not (np.all(np.isfinite(self._cosine)) and np.all(np.isfinite(self._sine))):
            raise ValidationError("fourier coefficients must be finite")

    @property
    def cosine(self) -> np.ndarray:
        return self._cosine

    @property
    def sine(self) -> np.ndarray:
        return self._sine

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        total = np.zeros_like(x)
        for k, coefficient in enumerate(self._cosine):
            if coefficient != 0.0:
                total += coefficient * np.cos(2.0 * np.pi * np.mod(k * x, 1.0))
        for k, coefficient in enumerate(self._sine):
            if k and coefficient != 0.0:
                total += coefficient * np.sin(2.0 * np.pi * np.mod(k * x, 1.0))
        return total

    def derivative(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        total = np.zeros_like(x)
        for k, coefficient in enumerate(self._cosine):
            total -= 2.0 * np.pi * k * coefficient * np.sin(2.0 * np.pi * np.mod(k * x, 1.0))
        for k, coefficient in enumerate(self._sine):
            total += 2.0 * np.pi * k * coefficient * np.cos(2.0 * np.pi * np.mod(k * x, 1.0))
        return total

    def cell_averages(self, tree, level: int) -> np.ndarray:
        ends = tree.endpoints(level)
        frequencies_c = np.arange(self._cosine.size, dtype=float)
        frequencies_s = np.arange(self._sine.size, dtype=float)
        sine = self._sine.copy()
        if sine.size:
            sine[0] = 0.0
        return _harmonic_means(frequencies_c, self._cosine, ends, "cos") + _harmonic_means(
            frequencies_s, sine, ends, "sin"
        )

    def sup_norm(self) -> float:
        return float(np.sum(np.abs(self._cosine)) + np.sum(np.abs(self._sine[1:])))

    def describe(self) -> dict:
        return {**super().describe(), "cosine": self._cosine.tolist(), "sine": self._sine.tolist()}
