from abc import ABC, abstractmethod
from typing import Union

import numpy as np

from src.exceptions import NonConvergence, ValidationError

ArrayLike = Union[float, np.ndarray]

EXPANSION_GRID_POINTS = 2**16
BISECTION_STEPS = 60
NEWTON_TOLERANCE = 1e-14
NEWTON_MAX_ITERATIONS = 100
INVERSE_RESIDUAL_TOLERANCE = 1e-13
DIRECT_PRODUCT_LIMIT = 64


def _wrap(values: np.ndarray) -> np.ndarray:
    wrapped = np.mod(values, 1.0)
    wrapped[wrapped >= 1.0] = 0.0
    return wrapped


def _restore_shape(values: np.ndarray, scalar: bool) -> ArrayLike:
    return values.item() if scalar else values


class CircleMap(ABC):
    """
    Abstract base class for degree-2 expanding maps of the circle [0, 1).

    A map is given by its lift L: [0, 1] -> [0, 2], strictly increasing with
    L(0) = 0 and L(1) = 2, so the fixed point of F(x) = L(x) mod 1 sits at 0
    and the Markov branches are I_0 = [0, c) and I_1 = [c, 1) with L(c) = 1.
    The reference measure is Lebesgue, hence the Jacobian g equals DF.

    Attributes:
        _family (str): Family tag used in reports and configuration
        _lambda_min (float): Minimum of DF over a dense grid, certified > 1
    """

    def __init__(self, family: str):
        """
        Validate the lift and certify expansion.

        Args:
            family: Family tag ("linear", "perturbed_doubling", "custom_lift")

        Raises:
            ValidationError: If the lift is not degree 2, does not fix 0 or
                is not uniformly expanding on the sampling grid
        """
        self._family = family
        ends = np.asarray(self.lift(np.array([0.0, 1.0])), dtype=float)
        if abs(ends[0]) > 1e-12 or abs(ends[1] - 2.0) > 1e-12:
            raise ValidationError(
                f"{family}: lift must satisfy L(0)=0 and L(1)=2, got L(0)={ends[0]!r}, L(1)={ends[1]!r}"
            )
        grid = np.arange(EXPANSION_GRID_POINTS, dtype=float) / EXPANSION_GRID_POINTS
        self._lambda_min = float(np.min(self.lift_derivative(grid)))
        if not self._lambda_min > 1.0:
            raise ValidationError(
                f"{family}: derivative must exceed 1 everywhere, sampled minimum is {self._lambda_min!r}"
            )

    @abstractmethod
    def lift(self, x: np.ndarray) -> np.ndarray:
        """Evaluate the lift L on points of [0, 1]."""
        pass

    @abstractmethod
    def lift_derivative(self, x: np.ndarray) -> np.ndarray:
        """Evaluate DL on points of [0, 1]."""
        pass

    @property
    def family(self) -> str:
        return self._family

    @property
    def lambda_min(self) -> float:
        """
        Get the certified lower bound for the derivative.

        Returns:
            float: Minimum of DF over 2^16 equispaced points
        """
        return self._lambda_min

    @property
    def fixed_point(self) -> float:
        return 0.0

    def describe(self) -> dict:
        """Return the map parameters as a plain dictionary for reports."""
        return {"family": self._family, "lambda_min": self._lambda_min}

    def eval(self, x: ArrayLike) -> ArrayLike:
        """
        Apply F(x) = L(x) mod 1.

        Args:
            x: Circle point(s) in [0, 1)

        Returns:
            Image point(s) in [0, 1)
        """
        scalar = np.ndim(x) == 0
        values = _wrap(np.atleast_1d(np.asarray(self.lift(np.atleast_1d(np.asarray(x, dtype=float))), dtype=float)))
        return _restore_shape(values, scalar)

    def deriv(self, x: ArrayLike) -> ArrayLike:
        """
        Evaluate the derivative DF, which is also the Jacobian g.

        Args:
            x: Circle point(s) in [0, 1)

        Returns:
            DF(x), at least lambda_min
        """
        scalar = np.ndim(x) == 0
        values = np.atleast_1d(np.asarray(self.lift_derivative(np.atleast_1d(np.asarray(x, dtype=float))), dtype=float))
        return _restore_shape(values, scalar)

    def inverse_branch(self, branch: int, y: ArrayLike) -> ArrayLike:
        """
        Invert one Markov branch: find x in I_branch with F(x) = y.

        The root of L(x) = y + branch is bracketed by bisection and polished
        by Newton's method. Monotonicity of the lift makes it unique.

        Args:
            branch: 0 or 1
            y: Target point(s) in [0, 1)

        Returns:
            Preimage point(s) in I_branch

        Raises:
            ValidationError: If branch is not 0 or 1
            NonConvergence: If the residual stays above 1e-13
        """
        if branch not in (0, 1):
            raise ValidationError(f"branch must be 0 or 1, got {branch!r}")
        scalar = np.ndim(y) == 0
        target = np.atleast_1d(np.asarray(y, dtype=float)) + branch
        low = np.zeros_like(target)
        high = np.ones_like(target)
        for _ in range(BISECTION_STEPS):
            middle = 0.5 * (low + high)
            below = self.lift(middle) < target
            low = np.where(below, middle, low)
            high = np.where(below, high, middle)
        x = 0.5 * (low + high)
        for _ in range(NEWTON_MAX_ITERATIONS):
            step = (self.lift(x) - target) / self.lift_derivative(x)
            x = np.clip(x - step, 0.0, 1.0)
            if np.max(np.abs(step), initial=0.0) <= NEWTON_TOLERANCE:
                break
        residual = np.max(np.abs(self.lift(x) - target), initial=0.0)
        if residual > INVERSE_RESIDUAL_TOLERANCE:
            raise NonConvergence(
                f"{self._family}: inverse branch {branch} residual {residual:.3e} exceeds tolerance"
            )
        return _restore_shape(x, scalar)

    def orbit(self, x: ArrayLike, n: int) -> np.ndarray:
        """
        Compute [x, F x, ..., F^{n-1} x].

        Args:
            x: Starting point(s)
            n: Orbit length, at least 1

        Returns:
            np.ndarray: Shape (n,) for a scalar start, (n, m) for m starts
        """
        if n < 1:
            raise ValidationError(f"orbit length must be at least 1, got {n}")
        current = np.asarray(x, dtype=float)
        points = [current]
        for _ in range(n - 1):
            current = np.asarray(self.eval(current), dtype=float)
            points.append(current)
        return np.stack(points)

    def weight_product(self, x: ArrayLike, n: int, beta: complex = 1.0) -> ArrayLike:
        """
        Compute g_n(x)^beta with g_n(x) = prod_{k<n} g(F^k x).

        Products of more than 64 factors are accumulated in log space.

        Args:
            x: Point(s) on the circle
            n: Number of factors, g_0 = 1
            beta: Real or complex exponent

        Returns:
            g_n(x)^beta, complex when beta has an imaginary part
        """
        if n < 0:
            raise ValidationError(f"number of factors must be non-negative, got {n}")
        scalar = np.ndim(x) == 0
        points = np.atleast_1d(np.asarray(x, dtype=float))
        beta = complex(beta)
        exponent = beta.real if beta.imag == 0.0 else beta
        if n == 0:
            result = np.ones_like(points) if beta.imag == 0.0 else np.ones_like(points, dtype=complex)
            return _restore_shape(result, scalar)
        derivatives = np.asarray(self.deriv(self.orbit(points, n)), dtype=float)
        if n <= DIRECT_PRODUCT_LIMIT:
            result = np.prod(derivatives, axis=0) ** exponent
        else:
            result = np.exp(exponent * np.sum(np.log(derivatives), axis=0))
        return _restore_shape(np.asarray(result), scalar)
