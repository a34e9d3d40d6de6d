import logging
import threading
import warnings
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import ArpackError, eigs

from src.exceptions import GapTooSmall, SlowMixingWarning, ValidationError
from src.haar.inputs.function_input import FunctionInput
from src.haar.inputs.haar_coefficient_input import HaarCoefficientInput
from src.logging.method_logger import log_method_call

logger = logging.getLogger(__name__)

POWER_TOLERANCE = 1e-12
POWER_MAX_ITERATIONS = 100000
SLOW_MIXING_ITERATIONS = 10000
GAP_WARNING_RATIO = 0.9
GAP_FAILURE_RATIO = 0.95
DEFLATION_ITERATIONS = 2000
DENSE_EIGEN_SIZE = 16
ARNOLDI_TOLERANCE = 1e-10
DEFLATION_SEED = 2024


@dataclass(frozen=True)
class OperatorMatrix:
    """
    Ulam discretization of L_s psi(x) = sum_{F y = x} psi(y) g(y)^-s.

    Row i holds the two preimage contributions of cell i: the level-n cell
    containing the branch-b preimage of P_i, weighted by the average of
    g(y_b(x))^-s over x in P_i.

    Attributes:
        level (int): Partition level n
        s (complex): Weight exponent
        matrix (sparse.csr_matrix): 2^n x 2^n matrix with two entries per row
    """
    level: int
    s: complex
    matrix: sparse.csr_matrix

    def apply(self, values: np.ndarray) -> np.ndarray:
        return self.matrix @ values


@dataclass
class SpectralReport:
    """
    Attributes:
        betas (np.ndarray): Grid of beta values
        eigenvalues (np.ndarray): Leading eigenvalue of L_{1+beta} per beta
        gap_estimates (np.ndarray): Second eigenvalue modulus per beta
        eigenvectors (list): Leading eigenvector per beta, normalized to mean 1
        derivative_check (float): Pressure derivative check at beta = 0
    """
    betas: np.ndarray
    eigenvalues: np.ndarray
    gap_estimates: np.ndarray
    eigenvectors: list
    derivative_check: float


class TransferOperator:
    """
    Transfer and Koopman operators on the piecewise constants of a level.

    Attributes:
        _tree (PartitionTree): The partitions; level + 1 must exist for the
            Koopman operator
        _level (int): Level n of the discretization
        _matrices (Dict[complex, OperatorMatrix]): Cache of Ulam matrices
        _lock (threading.RLock): Guards the matrix, eigenpair and density caches
    """

    def __init__(self, tree, level: int):
        if not 1 <= level < tree.depth:
            raise ValidationError(f"transfer level must be between 1 and {tree.depth - 1}, got {level}")
        self._tree = tree
        self._level = level
        self._lengths = tree.lengths(level)
        self._matrices: Dict[complex, OperatorMatrix] = {}
        self._eigenpairs: Dict[complex, Tuple[complex, np.ndarray, float]] = {}
        self._density = None
        self._lock = threading.RLock()

    @property
    def tree(self):
        return self._tree

    @property
    def level(self) -> int:
        return self._level

    @property
    def lengths(self) -> np.ndarray:
        return self._lengths

    def integrate(self, values: np.ndarray) -> complex:
        """Integral of a piecewise constant function against Lebesgue measure."""
        return np.sum(self._lengths * values)

    @log_method_call
    def ulam_matrix(self, s=1.0) -> OperatorMatrix:
        """
        Build (or fetch) the Ulam matrix of L_s.

        Args:
            s: Real or complex weight exponent

        Returns:
            OperatorMatrix
        """
        s = complex(s)
        with self._lock:
            if s not in self._matrices:
                self._matrices[s] = self._build_matrix(s)
            return self._matrices[s]

    def _build_matrix(self, s: complex) -> OperatorMatrix:
        exponent = s.real if s.imag == 0.0 else s
        level = self._level
        size = 1 << level
        nodes, weights = self._tree.quadrature(level)
        circle_map = self._tree.circle_map
        rows, columns, entries = [], [], []
        cells = np.arange(size)
        for branch in (0, 1):
            preimages = np.asarray(circle_map.inverse_branch(branch, nodes.ravel())).reshape(nodes.shape)
            derivative = np.asarray(circle_map.deriv(preimages))
            rows.append(cells)
            columns.append(branch * (size >> 1) + (cells >> 1))
            entries.append((derivative ** (-exponent)) @ weights)
        matrix = sparse.csr_matrix(
            (np.concatenate(entries), (np.concatenate(rows), np.concatenate(columns))), shape=(size, size)
        )
        return OperatorMatrix(level, exponent, matrix)

    def koopman(self, values: np.ndarray) -> np.ndarray:
        """
        Composition with F, exact on level-n piecewise constants.

        The level-n cell j is the union of the level-(n+1) cells 2j and 2j+1,
        which F maps onto the level-n cells 2j mod 2^n and (2j+1) mod 2^n.
        """
        size = 1 << self._level
        fine = self._tree.lengths(self._level + 1)
        images = np.arange(2 * size) % size
        contributions = fine * values[images]
        return (contributions[0::2] + contributions[1::2]) / self._lengths

    def compose_fine(self, values: np.ndarray) -> np.ndarray:
        """Values of w o F on level-(n+1) cells for level-n data w."""
        return np.tile(values, 2)

    def _power_iteration(self, operator, start: np.ndarray, normalize) -> Tuple[complex, np.ndarray, int]:
        vector = normalize(start)
        eigenvalue = 0.0
        for iteration in range(1, POWER_MAX_ITERATIONS + 1):
            image = operator(vector)
            eigenvalue_new = np.vdot(vector * self._lengths, image) / np.vdot(vector * self._lengths, vector)
            updated = normalize(image)
            change = float(np.max(np.abs(updated - vector)))
            vector = updated
            settled = abs(eigenvalue_new - eigenvalue) <= POWER_TOLERANCE * max(1.0, abs(eigenvalue_new))
            eigenvalue = eigenvalue_new
            if change <= POWER_TOLERANCE and settled:
                if iteration > SLOW_MIXING_ITERATIONS:
                    warnings.warn(f"power iteration needed {iteration} steps", SlowMixingWarning)
                return eigenvalue, vector, iteration
        warnings.warn(f"power iteration stopped after {POWER_MAX_ITERATIONS} steps", SlowMixingWarning)
        return eigenvalue, vector, POWER_MAX_ITERATIONS

    def _normalize_mass(self, values: np.ndarray) -> np.ndarray:
        mass = self.integrate(values)
        return values / mass

    @log_method_call
    def invariant_density(self) -> np.ndarray:
        """
        Density of the absolutely continuous invariant measure.

        Power iteration of L_1 from the constant function, normalized so that
        sum rho |P| = 1.

        Returns:
            np.ndarray: Positive level-n density values
        """
        with self._lock:
            if self._density is None:
                operator = self.ulam_matrix(1.0)
                _, density, iterations = self._power_iteration(
                    operator.apply, np.ones(1 << self._level), self._normalize_mass
                )
                logger.info("invariant density converged in %d iterations", iterations)
                self._density = density.real
            return self._density

    def _left_vector(self, operator: OperatorMatrix) -> np.ndarray:
        transpose = operator.matrix.T.tocsr()
        _, left, _ = self._power_iteration(lambda values: transpose @ values, np.ones(1 << self._level),
                                           lambda values: values / np.max(np.abs(values)))
        return left

    @log_method_call
    def leading_eig(self, s=1.0) -> Tuple[complex, np.ndarray, float]:
        """
        Leading eigenpair of L_s with the second eigenvalue modulus.

        Args:
            s: Weight exponent

        Returns:
            Tuple of (eigenvalue, eigenvector with sum rho |P| = 1,
            second eigenvalue modulus estimate)

        Raises:
            GapTooSmall: If the second eigenvalue modulus reaches 0.95 |lambda|
        """
        key = complex(s)
        with self._lock:
            if key not in self._eigenpairs:
                self._eigenpairs[key] = self._solve_eigenpair(key)
            return self._eigenpairs[key]

    def _solve_eigenpair(self, key: complex) -> Tuple[complex, np.ndarray, float]:
        operator = self.ulam_matrix(key)
        start = np.ones(1 << self._level, dtype=complex if key.imag else float)
        eigenvalue, vector, _ = self._power_iteration(operator.apply, start, self._normalize_mass)
        if key.imag == 0.0:
            eigenvalue = float(np.real(eigenvalue))
            vector = vector.real
        gap = self._second_modulus(operator, eigenvalue, vector)
        ratio = gap / abs(eigenvalue)
        if ratio >= GAP_FAILURE_RATIO:
            raise GapTooSmall(f"second eigenvalue estimate {gap:.6f} is within 5% of {abs(eigenvalue):.6f}")
        if ratio >= GAP_WARNING_RATIO:
            logger.warning("weak spectral gap at s=%s: ratio %.3f", key, ratio)
        return eigenvalue, vector, gap

    def _second_modulus(self, operator: OperatorMatrix, eigenvalue, vector: np.ndarray) -> float:
        """
        Modulus of the second eigenvalue of the Ulam matrix.

        ARPACK's restarted Arnoldi iteration for the two eigenvalues of
        largest modulus, started from a seeded vector; tiny matrices are
        solved densely. If ARPACK does not converge, the growth rate
        ||B^k x||^(1/k) of the deflated operator B is used instead.
        """
        size = 1 << self._level
        if size <= DENSE_EIGEN_SIZE:
            moduli = np.sort(np.abs(np.linalg.eigvals(operator.matrix.toarray())))
            return float(moduli[-2])
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(DEFLATION_SEED)))
        start = rng.standard_normal(size).astype(operator.matrix.dtype)
        try:
            values = eigs(operator.matrix, k=2, which="LM", v0=start, tol=ARNOLDI_TOLERANCE,
                          return_eigenvectors=False)
        except ArpackError:
            logger.warning("Arnoldi iteration did not converge at s=%s, using the deflated growth rate", operator.s)
            return self._deflated_rate(operator, eigenvalue, vector, start)
        return float(np.min(np.abs(values)))

    def _deflated_rate(self, operator: OperatorMatrix, eigenvalue, vector: np.ndarray, start: np.ndarray) -> float:
        left = self._left_vector(operator)
        scale = np.dot(left, vector)
        values = start / np.linalg.norm(start)
        log_growth = 0.0
        for _ in range(DEFLATION_ITERATIONS):
            values = operator.apply(values) - eigenvalue * vector * (np.dot(left, values) / scale)
            norm = float(np.linalg.norm(values))
            if norm == 0.0:
                return 0.0
            log_growth += np.log(norm)
            values = values / norm
        return float(np.exp(log_growth / DEFLATION_ITERATIONS))

    def cell_means(self, function_input: FunctionInput) -> np.ndarray:
        return function_input.cell_averages(self._tree, self._level)

    def product_means(self, first: FunctionInput, second: FunctionInput) -> np.ndarray:
        """
        Level-n cell averages of the product of two inputs.

        Haar inputs are multiplied on their own finest level and averaged
        down; other inputs use Gauss-Legendre quadrature of the product.
        """
        if isinstance(first, HaarCoefficientInput) or isinstance(second, HaarCoefficientInput):
            depth = max(
                item.series.depth if isinstance(item, HaarCoefficientInput) else self._level
                for item in (first, second)
            )
            depth = min(depth, self._tree.depth)
            product = first.cell_averages(self._tree, depth) * second.cell_averages(self._tree, depth)
            return self._tree.project(product, depth, self._level)
        return self._tree.cell_means(lambda x: first.evaluate(x) * second.evaluate(x), self._level)

    def weighted_means(self, function_input: FunctionInput, beta) -> np.ndarray:
        """Level-n averages of v / g^beta."""
        circle_map = self._tree.circle_map
        if isinstance(function_input, HaarCoefficientInput):
            twist = self._tree.cell_means(lambda x: np.asarray(circle_map.deriv(x)) ** (-beta), self._level)
            return self.cell_means(function_input) * twist
        return self._tree.cell_means(
            lambda x: function_input.evaluate(x) * np.asarray(circle_map.deriv(x)) ** (-beta), self._level
        )

    def pressure_derivative_check(self, h: float = 1e-3) -> float:
        """
        Compare -d/ds ln lambda(s) at s = 1 with the integral of ln g against rho.

        Args:
            h: Central difference step in [1e-4, 1e-2]

        Returns:
            float: Absolute difference of both sides
        """
        if not 1e-4 <= h <= 1e-2:
            raise ValidationError(f"difference step must lie in [1e-4, 1e-2], got {h!r}")
        upper, _, _ = self.leading_eig(1.0 + h)
        lower, _, _ = self.leading_eig(1.0 - h)
        derivative = (np.log(abs(upper)) - np.log(abs(lower))) / (2.0 * h)
        circle_map = self._tree.circle_map
        log_jacobian = self._tree.cell_means(lambda x: np.log(np.asarray(circle_map.deriv(x))), self._level)
        integral = float(self.integrate(self.invariant_density() * log_jacobian))
        return float(abs(-derivative - integral))

    def obstruction(self, v: FunctionInput, beta) -> complex:
        """
        The pairing of v / g^beta with the leading eigenvector of L_{1+beta}.

        The eigenvector is normalized to integrate to 1.
        """
        beta = complex(beta)
        beta = beta.real if beta.imag == 0.0 else beta
        _, vector, _ = self.leading_eig(1.0 + beta)
        value = self.integrate(vector * self.weighted_means(v, beta))
        return complex(value) if isinstance(beta, complex) else float(np.real(value))

    def correlations(self, phi: FunctionInput, psi: FunctionInput, kmax: int) -> np.ndarray:
        """
        C_k = int phi (psi o F^k) rho dm - int phi rho dm int psi rho dm for k <= kmax.

        Args:
            phi: First observable
            psi: Second observable
            kmax: Largest lag

        Returns:
            np.ndarray: kmax + 1 correlations
        """
        if kmax < 0:
            raise ValidationError(f"kmax must be non-negative, got {kmax}")
        density = self.invariant_density()
        phi_means = self.cell_means(phi)
        psi_means = self.cell_means(psi)
        mean_product = self.integrate(density * phi_means) * self.integrate(density * psi_means)
        result = np.empty(kmax + 1, dtype=np.result_type(phi_means, psi_means))
        result[0] = self.integrate(density * self.product_means(phi, psi)) - mean_product
        weighted = density * phi_means
        pushed = psi_means
        for k in range(1, kmax + 1):
            pushed = self.koopman(pushed)
            result[k] = self.integrate(weighted * pushed) - mean_product
        return result

    @log_method_call
    def spectral_report(self, betas, h: float = 1e-3) -> SpectralReport:
        eigenvalues, gaps, vectors = [], [], []
        for beta in betas:
            eigenvalue, vector, gap = self.leading_eig(1.0 + beta)
            eigenvalues.append(eigenvalue)
            gaps.append(gap)
            vectors.append(vector)
        return SpectralReport(
            np.asarray(betas, dtype=float),
            np.asarray(eigenvalues),
            np.asarray(gaps),
            vectors,
            self.pressure_derivative_check(h),
        )
