import numpy as np

from src.exceptions import ValidationError
from src.haar.inputs.fourier_input import FourierInput, _harmonic_means
from src.haar.inputs.function_input import FunctionInput
from src.haar.series_oracles import takagi_series, tent, weierstrass_series


def _check_amplitude(a: float) -> float:
    if not 0.0 < a < 1.0:
        raise ValidationError(f"amplitude a must lie in (0, 1), got {a!r}")
    return float(a)


class TakagiTentInput(FunctionInput):
    """
    The tent x -> scale * inf_m |x - m|.

    With scale -2 it is the right-hand side whose twisted solution over the
    doubling map with beta = 1 is the Takagi function.
    """

    def __init__(self, scale: float = 1.0):
        super().__init__("takagi_tent")
        self._scale = float(scale)

    @property
    def scale(self) -> float:
        return self._scale

    def evaluate(self, x) -> np.ndarray:
        return self._scale * tent(x)

    def sup_norm(self) -> float:
        return 0.5 * abs(self._scale)

    def describe(self) -> dict:
        return {"variant": self.variant, "scale": self._scale}


class WeierstrassRhsInput(FourierInput):
    """
    The right-hand side x -> -cos(2*pi*x)/a whose twisted solution over the
    doubling map with a = 2^-beta is the Weierstrass function.
    """

    def __init__(self, a: float):
        self._a = _check_amplitude(a)
        super().__init__(cosine=[0.0, -1.0 / self._a], variant="weierstrass_rhs")

    @property
    def a(self) -> float:
        return self._a

    def describe(self) -> dict:
        return {"variant": self.variant, "a": self._a}


class WeierstrassInput(FunctionInput):
    """The Weierstrass function sum_k a^k cos(2*pi*2^k*x) with exact cell averages."""

    def __init__(self, a: float, terms: int = 60):
        super().__init__("weierstrass")
        self._a = _check_amplitude(a)
        self._terms = int(terms)

    @property
    def a(self) -> float:
        return self._a

    @property
    def holder_exponent(self) -> float:
        return float(-np.log2(self._a))

    def evaluate(self, x) -> np.ndarray:
        return weierstrass_series(x, self._a, self._terms)

    def cell_averages(self, tree, level: int) -> np.ndarray:
        frequencies = np.ldexp(1.0, np.arange(self._terms))
        amplitudes = self._a ** np.arange(self._terms)
        return _harmonic_means(frequencies, amplitudes, tree.endpoints(level), "cos")

    def sup_norm(self) -> float:
        return float((1.0 - self._a**self._terms) / (1.0 - self._a))

    def describe(self) -> dict:
        return {"variant": self.variant, "a": self._a, "terms": self._terms}


class TakagiInput(FunctionInput):
    """The Takagi function sum_k 2^-k tent(2^k x)."""

    def __init__(self, terms: int = 60):
        super().__init__("takagi")
        self._terms = int(terms)

    def evaluate(self, x) -> np.ndarray:
        return takagi_series(x, self._terms)

    def sup_norm(self) -> float:
        return 2.0 / 3.0
