import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from src.cohomology.martingale import martingale_psi, phi_v_input
from src.cohomology.twisted_equation_solver import TwistedEquationSolver
from src.cohomology.twisted_solution import TwistedSolution
from src.exceptions import ComplexBetaError, ValidationError
from src.haar.inputs.function_input import FunctionInput
from src.logging.method_logger import log_method_call
from src.statistics.clt import sample_uniform
from src.statistics.variance import VarianceEstimate, sigma2_green_kubo, sigma2_martingale
from src.transfer.transfer_operator import TransferOperator

logger = logging.getLogger(__name__)

FIRST_LEVEL = 6
OSCILLATION_MARGIN = 6
TRACE_SAMPLES = 4096
TRACE_SEED = 7


class Verdict(Enum):
    REGULAR = "regular"
    IRREGULAR = "irregular"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class DichotomyThresholds:
    """
    Calibration constants of the finite-depth classifier.

    Attributes:
        zero_variance (float): Variances below max(this, stderr_factor*stderr) count as zero
        stderr_factor (float): Multiple of the standard error tolerated as zero
        irregular_factor (float): Variances above this multiple of zero_variance count as positive
        decay_factor (float): Required decay of coefficient minima for a regular verdict
        band_factor (float): Allowed spread of oscillation minima for an irregular verdict
        gamma (float): Hoelder exponent of the Jacobian; beta >= gamma is out of range
    """
    zero_variance: float = 1e-3
    stderr_factor: float = 3.0
    irregular_factor: float = 10.0
    decay_factor: float = 4.0
    band_factor: float = 2.0
    gamma: float = 1.0


@dataclass
class DichotomyReport:
    """
    Outcome of the regular / irregular classification.

    Attributes:
        beta (float): Twist exponent
        depth (int): Solution depth n
        stats_level (int): Level of the transfer operator
        variances (List[VarianceEstimate]): Green-Kubo and martingale estimates of sigma^2(phi_v)
        coefficient_levels (np.ndarray): Levels of the coefficient test
        coefficient_minima (np.ndarray): min_P |c_beta(alpha, P)| per level
        oscillation_levels (np.ndarray): Levels of the oscillation test
        oscillation_minima (np.ndarray): min_P osc_P(alpha)/|P|^beta per level
        verdict (Verdict): Classification
        in_theorem_range (bool): Whether beta < gamma
        thresholds (DichotomyThresholds): Constants used
        clt_trace (np.ndarray): Sample variance of psi_k/sqrt(k) for k = 1..n
        residual_sup (float): Residual of the solve
    """
    beta: float
    depth: int
    stats_level: int
    variances: List[VarianceEstimate]
    coefficient_levels: np.ndarray
    coefficient_minima: np.ndarray
    oscillation_levels: np.ndarray
    oscillation_minima: np.ndarray
    verdict: Verdict
    in_theorem_range: bool
    thresholds: DichotomyThresholds
    clt_trace: np.ndarray = field(repr=False)
    residual_sup: float = 0.0

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "depth": self.depth,
            "stats_level": self.stats_level,
            "verdict": self.verdict.value,
            "in_theorem_range": self.in_theorem_range,
            "residual_sup": self.residual_sup,
            "variances": [
                {"method": estimate.method, "value": estimate.value, "stderr": estimate.stderr}
                for estimate in self.variances
            ],
            "coefficient_minima": dict(zip(self.coefficient_levels.tolist(), self.coefficient_minima.tolist())),
            "oscillation_minima": dict(zip(self.oscillation_levels.tolist(), self.oscillation_minima.tolist())),
            "clt_trace": self.clt_trace.tolist(),
            "thresholds": vars(self.thresholds),
        }


def coefficient_minima(solution: TwistedSolution, levels) -> np.ndarray:
    """min over level-k cells of |c_beta(alpha, P)| = |P|^-beta |m(Q1) - m(Q2)|."""
    beta = float(np.real(solution.beta))
    return np.array([np.min(np.abs(solution.series.pairing_coeffs(k, beta))) for k in levels])


def anti_holder_check(solution: TwistedSolution, beta: float, levels) -> np.ndarray:
    """
    Per-level minima of osc_P(alpha)/|P|^beta.

    The oscillation over a level-k cell is the spread of the level-n
    averages of alpha inside it.

    Args:
        solution: The twisted solution
        beta: Exponent of the anti-Hoelder test
        levels: Levels k below the solution depth

    Returns:
        np.ndarray: One minimum per level
    """
    averages = np.real(solution.averages)
    depth = solution.depth
    minima = []
    for k in levels:
        if not 0 <= k < depth:
            raise ValidationError(f"oscillation level must lie below {depth}, got {k}")
        spread = np.ptp(averages.reshape(1 << k, 1 << (depth - k)), axis=1)
        minima.append(np.min(spread * solution.tree.lengths(k) ** (-beta)))
    return np.asarray(minima)


def clt_trace(solution: TwistedSolution, seed: int = TRACE_SEED, samples: int = TRACE_SAMPLES) -> np.ndarray:
    """Sample variance of psi_k/sqrt(k) for k = 1..n on a fixed small sample."""
    points = sample_uniform(samples, seed)
    return np.array([
        np.var(np.real(martingale_psi(solution, points, k))) / k for k in range(1, solution.depth + 1)
    ])


def _is_zero(estimate: VarianceEstimate, thresholds: DichotomyThresholds) -> bool:
    return estimate.value < max(thresholds.zero_variance, thresholds.stderr_factor * estimate.stderr)


def _is_positive(estimate: VarianceEstimate, thresholds: DichotomyThresholds) -> bool:
    return estimate.value > thresholds.irregular_factor * thresholds.zero_variance


def decide(variances: List[VarianceEstimate], coefficient: np.ndarray, oscillation: np.ndarray,
           thresholds: DichotomyThresholds) -> Verdict:
    """Apply the verdict rules to computed estimates and minima."""
    decays = coefficient.size >= 2 and coefficient[0] >= thresholds.decay_factor * coefficient[-1]
    banded = (
        oscillation.size >= 1
        and np.min(oscillation) > 0.0
        and np.max(oscillation) <= thresholds.band_factor * np.min(oscillation)
    )
    if all(_is_zero(estimate, thresholds) for estimate in variances) and decays:
        return Verdict.REGULAR
    if all(_is_positive(estimate, thresholds) for estimate in variances) and banded:
        return Verdict.IRREGULAR
    return Verdict.INCONCLUSIVE


class DichotomyClassifier:
    """
    Classifier deciding whether the twisted solution is regular or anti-Hoelder.

    Attributes:
        _tree (PartitionTree): The partitions
        _transfer (TransferOperator): Transfer operator at the statistics level
        _solver (TwistedEquationSolver): Solver used for the twisted equation
        _thresholds (DichotomyThresholds): Calibration constants
    """

    def __init__(self, tree, stats_level: int = 12, tol: float = 1e-9, max_terms: int = 2000,
                 kmax: int = 40, neumann_terms: int = 60,
                 thresholds: Optional[DichotomyThresholds] = None, transfer: Optional[TransferOperator] = None):
        self._tree = tree
        self._transfer = transfer if transfer is not None else TransferOperator(tree, stats_level)
        self._solver = TwistedEquationSolver(tree, tol, max_terms)
        self._kmax = kmax
        self._neumann_terms = neumann_terms
        self._thresholds = thresholds if thresholds is not None else DichotomyThresholds()

    @property
    def transfer(self) -> TransferOperator:
        return self._transfer

    @property
    def solver(self) -> TwistedEquationSolver:
        return self._solver

    @property
    def kmax(self) -> int:
        return self._kmax

    @property
    def thresholds(self) -> DichotomyThresholds:
        return self._thresholds

    @staticmethod
    def check_beta(beta) -> float:
        beta = complex(beta)
        if beta.imag != 0.0:
            raise ComplexBetaError(f"classification needs a real beta, got {beta!r}")
        if not 0.0 < beta.real < 1.0:
            raise ValidationError(f"classification needs 0 < beta < 1, got {beta.real!r}")
        return beta.real

    def phi_v_variances(self, solution: TwistedSolution) -> List[VarianceEstimate]:
        observable = phi_v_input(solution)
        return [
            sigma2_green_kubo(self._transfer, observable, self._kmax),
            sigma2_martingale(self._transfer, observable, self._neumann_terms),
        ]

    @log_method_call
    def classify(self, v: FunctionInput, beta, solution: Optional[TwistedSolution] = None) -> DichotomyReport:
        """
        Classify the twisted solution of v at beta.

        Args:
            v: Right-hand side
            beta: Real exponent in (0, 1)
            solution: Precomputed solution to reuse

        Returns:
            DichotomyReport
        """
        beta = self.check_beta(beta)
        solution = solution if solution is not None else self._solver.solve(v, beta)
        depth = solution.depth
        variances = self.phi_v_variances(solution)
        coefficient_levels = np.arange(FIRST_LEVEL, depth)
        oscillation_levels = np.arange(FIRST_LEVEL, max(FIRST_LEVEL, depth - OSCILLATION_MARGIN + 1))
        coefficient = coefficient_minima(solution, coefficient_levels)
        oscillation = anti_holder_check(solution, beta, oscillation_levels)
        verdict = decide(variances, coefficient, oscillation, self._thresholds)
        logger.info("beta=%.4f verdict=%s sigma2=%s", beta, verdict.value, [e.value for e in variances])
        return DichotomyReport(
            beta=beta,
            depth=depth,
            stats_level=self._transfer.level,
            variances=variances,
            coefficient_levels=coefficient_levels,
            coefficient_minima=coefficient,
            oscillation_levels=oscillation_levels,
            oscillation_minima=oscillation,
            verdict=verdict,
            in_theorem_range=beta < self._thresholds.gamma,
            thresholds=self._thresholds,
            clt_trace=clt_trace(solution),
            residual_sup=solution.residual_sup,
        )


def dichotomy_classify(tree, v: FunctionInput, beta, stats_level: int = 12,
                       thresholds: Optional[DichotomyThresholds] = None) -> DichotomyReport:
    return DichotomyClassifier(tree, stats_level, thresholds=thresholds).classify(v, beta)
