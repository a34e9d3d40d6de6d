from typing import Sequence

import numpy as np

from src.dynamics.maps.circle_map import CircleMap
from src.dynamics.maps.custom_lift_map import CustomLiftMap
from src.dynamics.maps.linear_map import LinearMap
from src.dynamics.maps.perturbed_doubling_map import PerturbedDoublingMap
from src.exceptions import ValidationError


class CircleMapFactory:

    @staticmethod
    def create_map(family: str,
                   epsilon: float = 0.0,
                   sine: Sequence[float] = (),
                   cosine: Sequence[float] = ()) -> CircleMap:
        """
        Build a circle map from its family tag.

        A custom lift is specified by trigonometric perturbation coefficients:
        L(x) = 2x + sum_k sine[k-1]*sin(2*pi*k*x) + cosine[k-1]*(1 - cos(2*pi*k*x)),
        which keeps L(0) = 0 and L(1) = 2 for any coefficients.

        Args:
            family: "linear", "perturbed_doubling" or "custom_lift"
            epsilon: Perturbation amplitude for perturbed_doubling
            sine: Sine coefficients for custom_lift, frequency 1 first
            cosine: Cosine coefficients for custom_lift, frequency 1 first

        Returns:
            CircleMap: The requested map
        """
        builders = {
            "linear": lambda: LinearMap(),
            "perturbed_doubling": lambda: PerturbedDoublingMap(epsilon),
            "custom_lift": lambda: CircleMapFactory._trigonometric_lift(sine, cosine),
        }
        key = family.lower()
        if key not in builders:
            raise ValidationError(f"unknown map family {family!r}")
        return builders[key]()

    @staticmethod
    def _trigonometric_lift(sine: Sequence[float], cosine: Sequence[float]) -> CircleMap:
        sine = np.asarray(sine, dtype=float)
        cosine = np.asarray(cosine, dtype=float)
        frequencies_s = 2.0 * np.pi * np.arange(1, sine.size + 1)
        frequencies_c = 2.0 * np.pi * np.arange(1, cosine.size + 1)

        def lift(x):
            x = np.asarray(x, dtype=float)
            phase_s = np.multiply.outer(x, frequencies_s)
            phase_c = np.multiply.outer(x, frequencies_c)
            return 2.0 * x + np.sin(phase_s) @ sine + (1.0 - np.cos(phase_c)) @ cosine

        def derivative(x):
            x = np.asarray(x, dtype=float)
            phase_s = np.multiply.outer(x, frequencies_s)
            phase_c = np.multiply.outer(x, frequencies_c)
            return 2.0 + np.cos(phase_s) @ (sine * frequencies_s) + np.sin(phase_c) @ (cosine * frequencies_c)

        label = f"trigonometric(sine={sine.tolist()}, cosine={cosine.tolist()})"
        return CustomLiftMap(lift, derivative, label)
