"""
Livsic-side objects built from a twisted solution.

psi = D^beta alpha is a distribution; its pairing with 1_{P_k(x)}/|P_k(x)|
is the level-k pyramid value of the fractional series at x, which is
psi_k(x) = sum_{j<k} d_{P_j(x)} |P_j(x)|^-beta phi_{P_j(x)}(x).
"""

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from src.cohomology.twisted_solution import TwistedSolution
from src.exceptions import ComplexBetaError, ValidationError
from src.haar.haar_series import HaarSeries
from src.haar.haar_transform import HaarTransform
from src.haar.inputs.function_input import FunctionInput
from src.haar.inputs.haar_coefficient_input import HaarCoefficientInput

NOT_CONVERGED_FACTOR = 10.0


@dataclass
class MartingaleSample:
    """
    Attributes:
        x (float): The sampled point
        values (np.ndarray): psi_k(x) for k = 0 ... n
    """
    x: float
    values: np.ndarray


@dataclass
class PhiValue:
    """
    Value of phi_v = psi_k o F - psi_{k+1} at the largest computed level.

    Attributes:
        value: phi_v at the requested points
        increment: |value at level k - value at level k-1|, the error proxy
        level (int): The level k used
        converged (bool): False when the increment exceeds 10 tol
    """
    value: np.ndarray
    increment: np.ndarray
    level: int
    converged: bool


def _check_level(solution: TwistedSolution, k: int, top: int) -> None:
    if not 0 <= k <= top:
        raise ValidationError(f"level must be between 0 and {top}, got {k}")


def martingale_psi(solution: TwistedSolution, x, k: int):
    """
    Evaluate psi_k(x), the pairing of D^beta alpha with 1_{P_k(x)}/|P_k(x)|.

    Args:
        solution: The twisted solution
        x: Point(s) on the circle
        k: Level, at most the solution depth

    Returns:
        psi_k(x), complex when beta is complex
    """
    _check_level(solution, k, solution.depth)
    return solution.fractional_series.point_eval(x, level=k)


def martingale_trace(solution: TwistedSolution, x: float, n: int = None) -> MartingaleSample:
    n = solution.depth if n is None else n
    _check_level(solution, n, solution.depth)
    values = np.array([martingale_psi(solution, x, k) for k in range(n + 1)])
    return MartingaleSample(float(x), values)


def phi_v_levels(solution: TwistedSolution, k: int) -> np.ndarray:
    """
    Level-(k+1) values of phi_v = psi_k o F - psi_{k+1}.

    F maps the level-(k+1) cell j onto the level-k cell j mod 2^k, so
    psi_k o F is constant on level-(k+1) cells.
    """
    _check_level(solution, k, solution.depth - 1)
    fractional = solution.fractional_series
    coarse = fractional.averages(k)
    return np.tile(coarse, 2) - fractional.averages(k + 1)


def phi_v(solution: TwistedSolution, x, k: int = None) -> PhiValue:
    """
    Evaluate the Livsic observable phi_v = (D^beta alpha) o F - D^beta alpha.

    Args:
        solution: A solution with real beta
        x: Point(s) on the circle
        k: Level, at most depth - 1; defaults to depth - 1

    Returns:
        PhiValue with the value at level k and the last increment

    Raises:
        ComplexBetaError: If beta is not real
    """
    if not solution.is_real:
        raise ComplexBetaError(f"phi_v needs a real beta, got {solution.beta!r}")
    k = solution.depth - 1 if k is None else k
    _check_level(solution, k, solution.depth - 1)
    tree = solution.tree
    value = phi_v_levels(solution, k)[tree.cell_indices(x, k + 1)]
    if k > 0:
        previous = phi_v_levels(solution, k - 1)[tree.cell_indices(x, k)]
        increment = np.abs(value - previous)
    else:
        increment = np.abs(value)
    converged = bool(np.max(increment, initial=0.0) <= NOT_CONVERGED_FACTOR * solution.tol)
    return PhiValue(value, increment, k, converged)


def phi_v_input(solution: TwistedSolution, k: int = None) -> HaarCoefficientInput:
    """phi_v at level k + 1 as an exactly averaged observable."""
    if not solution.is_real:
        raise ComplexBetaError(f"phi_v needs a real beta, got {solution.beta!r}")
    k = solution.depth - 1 if k is None else k
    series = HaarTransform(solution.tree).analyze(phi_v_levels(solution, k))
    return HaarCoefficientInput(series)


def birkhoff_sum(circle_map, phi: Union[FunctionInput, Callable], x, k: int):
    """
    Compute sum_{j<k} phi(F^j x).

    Args:
        circle_map: The dynamics
        phi: Observable, a FunctionInput or a vectorized callable
        x: Point(s) on the circle
        k: Number of terms

    Returns:
        The Birkhoff sums with the shape of x
    """
    evaluate = phi.evaluate if isinstance(phi, FunctionInput) else phi
    points = np.asarray(x, dtype=float)
    total = np.zeros_like(points)
    for _ in range(k):
        total = total + evaluate(points)
        points = np.asarray(circle_map.eval(points))
    return total.item() if total.ndim == 0 else total


def coboundary_oscillation_ratio(solution: TwistedSolution, n: int = None, level: int = 6) -> float:
    """
    Compare local oscillations of H o F - H and H for H = psi_n.

    Returns the largest oscillation of H o F - H over level cells divided by
    the largest oscillation of H; small ratios mean H o F - H is far more
    regular than H.
    """
    n = solution.depth - 1 if n is None else n
    _check_level(solution, n, solution.depth - 1)
    if not 0 <= level <= n:
        raise ValidationError(f"oscillation level must be between 0 and {n}, got {level}")
    fractional: HaarSeries = solution.fractional_series
    h = fractional.averages(n)
    difference = np.tile(h, 2) - np.repeat(h, 2)
    oscillation_h = np.ptp(h.reshape(1 << level, -1).real, axis=1).max()
    oscillation_d = np.ptp(difference.reshape(1 << level, -1).real, axis=1).max()
    return float(oscillation_d / oscillation_h) if oscillation_h > 0.0 else 0.0
