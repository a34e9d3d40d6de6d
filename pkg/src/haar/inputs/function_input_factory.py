from typing import Callable, Optional, Sequence

import numpy as np

from src.exceptions import ValidationError
from src.haar.haar_series import HaarSeries
from src.haar.inputs.coboundary_input import CoboundaryInput
from src.haar.inputs.fourier_input import FourierInput
from src.haar.inputs.function_input import FunctionInput
from src.haar.inputs.haar_coefficient_input import HaarCoefficientInput
from src.haar.inputs.pointwise_input import PointwiseInput
from src.haar.inputs.special_inputs import TakagiInput, TakagiTentInput, WeierstrassInput, WeierstrassRhsInput


class FunctionInputFactory:

    @staticmethod
    def create_input(variant: str,
                     cosine: Sequence[float] = (),
                     sine: Sequence[float] = (),
                     a: Optional[float] = None,
                     terms: int = 60,
                     scale: float = 1.0,
                     rule: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                     series: Optional[HaarSeries] = None,
                     circle_map=None,
                     beta: Optional[float] = None) -> FunctionInput:
        """
        Build a right-hand side or observable from its variant tag.

        Args:
            variant: One of pointwise, fourier, haar_coeffs, takagi_tent,
                weierstrass_rhs, weierstrass, takagi, coboundary
            cosine: Cosine coefficients (fourier, coboundary)
            sine: Sine coefficients (fourier, coboundary)
            a: Amplitude (weierstrass_rhs, weierstrass)
            terms: Series length (weierstrass, takagi)
            scale: Tent multiplier (takagi_tent)
            rule: Vectorized evaluation rule (pointwise)
            series: Haar series (haar_coeffs)
            circle_map: The map (coboundary)
            beta: Twist exponent (coboundary)

        Returns:
            FunctionInput: The requested input
        """
        builders = {
            "pointwise": lambda: PointwiseInput(FunctionInputFactory._require(rule, "rule", variant)),
            "fourier": lambda: FourierInput(cosine, sine),
            "haar_coeffs": lambda: HaarCoefficientInput(FunctionInputFactory._require(series, "series", variant)),
            "takagi_tent": lambda: TakagiTentInput(scale),
            "weierstrass_rhs": lambda: WeierstrassRhsInput(FunctionInputFactory._require(a, "a", variant)),
            "weierstrass": lambda: WeierstrassInput(FunctionInputFactory._require(a, "a", variant), terms),
            "takagi": lambda: TakagiInput(terms),
            "coboundary": lambda: CoboundaryInput(
                FourierInput(cosine, sine),
                FunctionInputFactory._require(circle_map, "circle_map", variant),
                FunctionInputFactory._require(beta, "beta", variant),
            ),
        }
        key = variant.lower()
        if key not in builders:
            raise ValidationError(f"unknown function input variant {variant!r}")
        return builders[key]()

    @staticmethod
    def _require(value, name: str, variant: str):
        if value is None:
            raise ValidationError(f"variant {variant!r} needs {name!r}")
        return value
