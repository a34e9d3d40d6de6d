import logging
from typing import Literal

import numpy as np

from src.cohomology.twisted_solution import TwistedSolution
from src.exceptions import Divergence, ToleranceNotReached, ValidationError
from src.haar.haar_transform import HaarTransform
from src.haar.inputs.function_input import FunctionInput
from src.logging.method_logger import log_method_call

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_TERMS = 2000
MAX_SWEEPS = 100000

Method = Literal["iteration", "series"]


def _normalize_beta(beta):
    beta = complex(beta)
    return beta.real if beta.imag == 0.0 else beta


class TwistedEquationSolver:
    """
    Solver for v = alpha o F - g^beta * alpha on level-n cell averages.

    Composition with F uses the Markov shift: the average of theta o F over
    a level-n cell is the level-(n-1) average of theta over its image cell.
    The discrete fixed point A = (S A - m(v)) / m(g^beta) is reached either
    by iteration or by summing its Neumann series; both contract at rate
    r = max |m(g^beta)|^-1 <= lambda_min^-Re(beta).

    Attributes:
        _tree (PartitionTree): The partitions
        _tol (float): Target distance to the discrete fixed point
        _max_terms (int): Cap on Neumann terms for the series method
    """

    def __init__(self, tree, tol: float = DEFAULT_TOLERANCE, max_terms: int = DEFAULT_MAX_TERMS):
        if tol <= 0.0:
            raise ValidationError(f"tolerance must be positive, got {tol!r}")
        self._tree = tree
        self._tol = tol
        self._max_terms = max_terms
        self._transform = HaarTransform(tree)

    @property
    def tree(self):
        return self._tree

    def twist_averages(self, beta, level: int) -> np.ndarray:
        """Cell averages of g^beta on a level."""
        circle_map = self._tree.circle_map
        return self._tree.cell_means(lambda x: np.asarray(circle_map.deriv(x)) ** beta, level)

    @log_method_call
    def solve(self, v: FunctionInput, beta, method: Method = "iteration", depth: int = None) -> TwistedSolution:
        """
        Solve the twisted equation.

        Args:
            v: Right-hand side
            beta: Twist exponent with positive real part
            method: "iteration" or "series"
            depth: Level n of the solution, defaults to the tree depth

        Returns:
            TwistedSolution with residual certificate

        Raises:
            Divergence: If Re(beta) <= 0
            ToleranceNotReached: If the cap on terms or sweeps is too small
        """
        beta = _normalize_beta(beta)
        if complex(beta).real <= 0.0:
            raise Divergence(f"twisted iteration needs Re(beta) > 0, got {beta!r}")
        if method not in ("iteration", "series"):
            raise ValidationError(f"unknown solve method {method!r}")
        depth = self._tree.depth if depth is None else depth
        if not 1 <= depth <= self._tree.depth:
            raise ValidationError(f"solution depth must be between 1 and {self._tree.depth}, got {depth}")

        source = v.cell_averages(self._tree, depth)
        weights = self.twist_averages(beta, depth)
        if np.iscomplexobj(weights) or np.iscomplexobj(source):
            source = source.astype(complex)
        rate = float(np.max(1.0 / np.abs(weights)))
        if not rate < 1.0:
            raise Divergence(f"twisted operator does not contract: rate {rate:.6f}")

        if method == "iteration":
            averages, terms, tail = self._iterate(source, weights, rate, depth)
        else:
            averages, terms, tail = self._sum_series(source, weights, rate, depth)

        residual = float(np.max(np.abs(source - (self._tree.shift(averages, depth) - weights * averages))))
        logger.info(
            "solved twisted equation: beta=%s depth=%d method=%s terms=%d residual=%.3e",
            beta, depth, method, terms, residual,
        )
        return TwistedSolution(
            beta=beta,
            depth=depth,
            averages=averages,
            series=self._transform.analyze(averages),
            residual_sup=residual,
            series_terms=terms,
            tail_bound=tail,
            method=method,
            tol=self._tol,
            contraction=rate,
            v=v,
            circle_map=self._tree.circle_map,
        )

    def _iterate(self, source, weights, rate, depth):
        threshold = self._tol * (1.0 - rate) / rate
        averages = np.zeros_like(source)
        change = np.inf
        for sweep in range(1, MAX_SWEEPS + 1):
            updated = (self._tree.shift(averages, depth) - source) / weights
            change = float(np.max(np.abs(updated - averages)))
            averages = updated
            if change <= threshold:
                return averages, sweep, change * rate / (1.0 - rate)
        achievable = change * rate / (1.0 - rate)
        raise ToleranceNotReached(f"iteration stopped after {MAX_SWEEPS} sweeps at {achievable:.3e}", achievable)

    def _sum_series(self, source, weights, rate, depth):
        norm = float(np.max(np.abs(source)))
        if norm == 0.0:
            return np.zeros_like(source), 0, 0.0
        terms = max(0, int(np.ceil(np.log(self._tol * (1.0 - rate) / norm) / np.log(rate))) - 2)
        while norm * rate ** (terms + 2) / (1.0 - rate) >= self._tol:
            terms += 1
        if terms > self._max_terms:
            achievable = norm * rate ** (self._max_terms + 2) / (1.0 - rate)
            raise ToleranceNotReached(
                f"series needs {terms} terms, cap is {self._max_terms}; achievable tail {achievable:.3e}", achievable
            )
        term = -source / weights
        averages = term.copy()
        for _ in range(terms):
            term = self._tree.shift(term, depth) / weights
            averages += term
        return averages, terms, norm * rate ** (terms + 2) / (1.0 - rate)


def solve_twisted(tree, v: FunctionInput, beta, method: Method = "iteration",
                  tol: float = DEFAULT_TOLERANCE, depth: int = None) -> TwistedSolution:
    return TwistedEquationSolver(tree, tol).solve(v, beta, method, depth)
