"""
Asymptotic variance of phi_v along a grid of twist exponents or along a
one-parameter family of right-hand sides.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple, Union

import numpy as np

from src.cohomology.martingale import phi_v_input
from src.exceptions import TailNotDecaying, ValidationError
from src.haar.inputs.function_input import FunctionInput
from src.logging.method_logger import log_method_call
from src.statistics.dichotomy import DichotomyClassifier, DichotomyThresholds, Verdict
from src.statistics.variance import sigma2_green_kubo

logger = logging.getLogger(__name__)

MAX_SWEEP_BETA = 0.95

InputFamily = Callable[[float], FunctionInput]


@dataclass
class SweepResult:
    """
    Attributes:
        parameter (str): Name of the swept parameter, "beta" or "t"
        grid (np.ndarray): Parameter values
        sigma2 (np.ndarray): Green-Kubo variance per grid point, nan where the tail did not decay
        stderr (np.ndarray): Standard error per grid point
        raw (np.ndarray): Unclipped Green-Kubo sums
        near_zero (List[Tuple[float, float]]): Maximal grid runs where sigma2 counts as zero
        sign_changes (List[Tuple[float, float]]): Neighbouring grid points where the raw sum changes sign
        max_second_difference (float): Largest |second difference| of sigma2
        verdict (Optional[Verdict]): Classification when the grid is a single point
    """
    parameter: str
    grid: np.ndarray
    sigma2: np.ndarray
    stderr: np.ndarray
    raw: np.ndarray
    near_zero: List[Tuple[float, float]] = field(default_factory=list)
    sign_changes: List[Tuple[float, float]] = field(default_factory=list)
    max_second_difference: float = 0.0
    verdict: Optional[Verdict] = None

    def rows(self):
        for value, sigma2, stderr in zip(self.grid, self.sigma2, self.stderr):
            yield float(value), float(sigma2), float(stderr)

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "grid": self.grid.tolist(),
            "sigma2": self.sigma2.tolist(),
            "stderr": self.stderr.tolist(),
            "near_zero": [list(interval) for interval in self.near_zero],
            "sign_changes": [list(interval) for interval in self.sign_changes],
            "max_second_difference": self.max_second_difference,
            "verdict": self.verdict.value if self.verdict is not None else None,
        }


def near_zero_intervals(grid: np.ndarray, sigma2: np.ndarray, stderr: np.ndarray,
                        thresholds: DichotomyThresholds) -> List[Tuple[float, float]]:
    """Maximal runs of consecutive grid points with sigma2 below the zero threshold."""
    zero = sigma2 < np.maximum(thresholds.zero_variance, thresholds.stderr_factor * stderr)
    intervals = []
    start = None
    for index, flag in enumerate(zero):
        if flag and start is None:
            start = index
        if not flag and start is not None:
            intervals.append((float(grid[start]), float(grid[index - 1])))
            start = None
    if start is not None:
        intervals.append((float(grid[start]), float(grid[-1])))
    return intervals


def sign_change_intervals(grid: np.ndarray, raw: np.ndarray) -> List[Tuple[float, float]]:
    signs = np.sign(raw)
    changes = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    return [(float(grid[i]), float(grid[i + 1])) for i in changes]


def max_second_difference(values: np.ndarray) -> float:
    finite = values[np.isfinite(values)]
    if finite.size < 3:
        return 0.0
    return float(np.max(np.abs(np.diff(finite, 2))))


class VarianceSweep:
    """
    Sweep of sigma^2(phi_v) over a parameter grid.

    Every grid point is solved and estimated independently; grid points are
    spread over worker threads and collected in grid order.

    Attributes:
        _classifier (DichotomyClassifier): Provides the solver, the transfer
            operator and the thresholds
        _threads (int): Worker threads
    """

    def __init__(self, classifier: DichotomyClassifier, threads: int = 1):
        if threads < 1:
            raise ValidationError(f"threads must be at least 1, got {threads}")
        self._classifier = classifier
        self._threads = threads

    def _estimate(self, v: FunctionInput, beta: float):
        solution = self._classifier.solver.solve(v, beta)
        try:
            estimate = sigma2_green_kubo(self._classifier.transfer, phi_v_input(solution), self._classifier.kmax)
        except TailNotDecaying as error:
            logger.warning("beta=%.4f: %s", beta, error)
            return np.nan, np.nan, np.nan
        return estimate.value, estimate.stderr, estimate.diagnostics.get("raw", estimate.value)

    def _run(self, parameter: str, grid: np.ndarray, point: Callable[[float], Tuple[FunctionInput, float]]):
        def evaluate(value: float):
            return self._estimate(*point(value))

        # fill the density cache before threads share the operator
        self._classifier.transfer.invariant_density()
        if self._threads == 1 or grid.size == 1:
            results = [evaluate(value) for value in grid]
        else:
            with ThreadPoolExecutor(max_workers=self._threads) as pool:
                results = list(pool.map(evaluate, grid))
        sigma2, stderr, raw = (np.array(column, dtype=float) for column in zip(*results))
        thresholds = self._classifier.thresholds
        result = SweepResult(
            parameter=parameter,
            grid=grid,
            sigma2=sigma2,
            stderr=stderr,
            raw=raw,
            near_zero=near_zero_intervals(grid, sigma2, stderr, thresholds),
            sign_changes=sign_change_intervals(grid, raw),
            max_second_difference=max_second_difference(sigma2),
        )
        if grid.size == 1:
            v, beta = point(float(grid[0]))
            result.verdict = self._classifier.classify(v, beta).verdict
        logger.info("%s sweep over %d points: %d near-zero intervals", parameter, grid.size, len(result.near_zero))
        return result

    @log_method_call
    def beta_sweep(self, v: Union[FunctionInput, InputFamily], beta_grid) -> SweepResult:
        """
        sigma^2(phi_v) as a function of beta.

        Args:
            v: Fixed right-hand side, or a callable beta -> right-hand side
            beta_grid: Real exponents in (0, 0.95)

        Returns:
            SweepResult over beta
        """
        grid = _check_grid(beta_grid)
        if np.any(grid <= 0.0) or np.any(grid >= MAX_SWEEP_BETA):
            raise ValidationError(f"beta grid must lie in (0, {MAX_SWEEP_BETA})")
        family = v if callable(v) and not isinstance(v, FunctionInput) else (lambda _: v)
        return self._run("beta", grid, lambda beta: (family(beta), beta))

    @log_method_call
    def family_sweep(self, family: InputFamily, t_grid, beta: float) -> SweepResult:
        """
        sigma^2(phi_{v_t}) along a family t -> v_t at fixed beta.

        Args:
            family: Callable building the right-hand side for a parameter value
            t_grid: Parameter values
            beta: Real exponent in (0, 1)

        Returns:
            SweepResult over t
        """
        beta = DichotomyClassifier.check_beta(beta)
        grid = _check_grid(t_grid)
        return self._run("t", grid, lambda t: (family(t), beta))


def _check_grid(values) -> np.ndarray:
    grid = np.atleast_1d(np.asarray(values))
    if grid.size == 0:
        raise ValidationError("sweep grid is empty")
    if np.iscomplexobj(grid):
        if np.any(grid.imag != 0.0):
            raise ValidationError("sweep grid must be real")
        grid = grid.real
    return grid.astype(float)


def beta_sweep(tree, v, beta_grid, stats_level: int = 12, threads: int = 1) -> SweepResult:
    return VarianceSweep(DichotomyClassifier(tree, stats_level), threads).beta_sweep(v, beta_grid)


def family_sweep(tree, family: InputFamily, t_grid, beta: float, stats_level: int = 12,
                 threads: int = 1) -> SweepResult:
    return VarianceSweep(DichotomyClassifier(tree, stats_level), threads).family_sweep(family, t_grid, beta)
