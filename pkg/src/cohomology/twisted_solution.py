from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from src.haar.fractional import frac_deriv
from src.haar.haar_series import HaarSeries
from src.haar.inputs.function_input import FunctionInput

MAX_POINTWISE_TERMS = 4000


@dataclass
class TwistedSolution:
    """
    Solution of the twisted cohomological equation v = alpha o F - g^beta * alpha.

    Attributes:
        beta (complex): Twist exponent, stored as float when real
        depth (int): Level n of the stored averages
        averages (np.ndarray): Level-n cell averages of alpha
        series (HaarSeries): Haar series of alpha
        residual_sup (float): max over cells of |v - (alpha o F - g^beta alpha)|
        series_terms (int): Number of sweeps or Neumann terms used
        tail_bound (float): Bound on the distance to the exact discrete solution
        method (str): "iteration" or "series"
        tol (float): Requested tolerance
        contraction (float): max over cells of |m(g^beta)|^-1
        v (FunctionInput): The right-hand side
        circle_map (CircleMap): The dynamics
    """
    beta: complex
    depth: int
    averages: np.ndarray
    series: HaarSeries
    residual_sup: float
    series_terms: int
    tail_bound: float
    method: str
    tol: float
    contraction: float
    v: FunctionInput = field(repr=False)
    circle_map: object = field(repr=False)

    @property
    def tree(self):
        return self.series.tree

    @property
    def is_real(self) -> bool:
        return isinstance(self.beta, float)

    @cached_property
    def fractional_series(self) -> HaarSeries:
        """The distribution psi = D^beta alpha."""
        return frac_deriv(self.series, self.beta)

    def evaluate(self, x, tol: float = None) -> np.ndarray:
        """
        Evaluate alpha(x) = -sum_k v(F^k x) / g_{k+1}(x)^beta pointwise.

        The number of terms K makes ||v|| r^{K+2}/(1 - r) smaller than tol,
        with r = lambda_min^-Re(beta).

        Args:
            x: Point(s) on the circle
            tol: Truncation tolerance, defaults to the solve tolerance

        Returns:
            Values of alpha with the shape of x
        """
        tol = self.tol if tol is None else tol
        rate = self.circle_map.lambda_min ** (-complex(self.beta).real)
        norm = self.v.sup_norm()
        terms = 1
        if norm > 0.0:
            terms = max(1, int(np.ceil(np.log(tol * (1.0 - rate) / norm) / np.log(rate))) - 1)
        terms = min(terms, MAX_POINTWISE_TERMS)
        points = np.asarray(x, dtype=float)
        log_weight = np.zeros_like(points)
        total = np.zeros_like(points, dtype=complex if not self.is_real else float)
        for _ in range(terms):
            log_weight = log_weight + np.log(np.asarray(self.circle_map.deriv(points)))
            total = total - self.v.evaluate(points) * np.exp(-self.beta * log_weight)
            points = np.asarray(self.circle_map.eval(points))
        return total
