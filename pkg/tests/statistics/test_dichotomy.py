import os
import sys
import unittest

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from src.cohomology.twisted_equation_solver import solve_twisted
from src.dynamics.maps.linear_map import LinearMap
from src.dynamics.maps.perturbed_doubling_map import PerturbedDoublingMap
from src.dynamics.partition.partition_tree import PartitionTree
from src.exceptions import ComplexBetaError, ValidationError
from src.haar.inputs.coboundary_input import CoboundaryInput
from src.haar.inputs.fourier_input import FourierInput
from src.haar.inputs.special_inputs import WeierstrassRhsInput
from src.statistics.dichotomy import (
    DichotomyClassifier,
    DichotomyThresholds,
    Verdict,
    anti_holder_check,
    coefficient_minima,
    decide,
)
from src.statistics.variance import VarianceEstimate


def estimates(*values, stderr=0.0):
    return [VarianceEstimate("green_kubo", value, stderr) for value in values]


class TestDecide(unittest.TestCase):

    def setUp(self):
        self.thresholds = DichotomyThresholds()
        self.decaying = np.array([1.0, 0.5, 0.1])
        self.banded = np.array([1.0, 1.5, 1.2])

    def test_regular(self):
        verdict = decide(estimates(1e-5, 2e-4), self.decaying, self.banded, self.thresholds)
        self.assertEqual(verdict, Verdict.REGULAR)

    def test_regular_needs_decay(self):
        verdict = decide(estimates(1e-5, 2e-4), np.array([1.0, 0.5, 0.3]), self.banded, self.thresholds)
        self.assertEqual(verdict, Verdict.INCONCLUSIVE)

    def test_stderr_widens_zero(self):
        verdict = decide(estimates(5e-3, 5e-3, stderr=2e-3), self.decaying, self.banded, self.thresholds)
        self.assertEqual(verdict, Verdict.REGULAR)

    def test_irregular(self):
        verdict = decide(estimates(0.2, 0.25), self.decaying, self.banded, self.thresholds)
        self.assertEqual(verdict, Verdict.IRREGULAR)

    def test_irregular_needs_band(self):
        verdict = decide(estimates(0.2, 0.25), self.decaying, np.array([1.0, 2.5]), self.thresholds)
        self.assertEqual(verdict, Verdict.INCONCLUSIVE)
        verdict = decide(estimates(0.2, 0.25), self.decaying, np.array([0.0, 1.0]), self.thresholds)
        self.assertEqual(verdict, Verdict.INCONCLUSIVE)

    def test_estimators_must_agree(self):
        verdict = decide(estimates(1e-5, 0.2), self.decaying, self.banded, self.thresholds)
        self.assertEqual(verdict, Verdict.INCONCLUSIVE)

    def test_gray_zone(self):
        verdict = decide(estimates(5e-3, 5e-3), self.decaying, self.banded, self.thresholds)
        self.assertEqual(verdict, Verdict.INCONCLUSIVE)


class TestSolutionChecks(unittest.TestCase):

    def test_constant_solution_has_no_oscillation(self):
        tree = PartitionTree.build(LinearMap(), 10)
        solution = solve_twisted(tree, FourierInput(cosine=[1.0]), 0.5)
        np.testing.assert_allclose(anti_holder_check(solution, 0.5, [2, 5, 8]), 0.0, atol=1e-9)
        np.testing.assert_allclose(coefficient_minima(solution, [2, 5, 8]), 0.0, atol=1e-9)
        with self.assertRaises(ValidationError):
            anti_holder_check(solution, 0.5, [10])

    def test_check_beta(self):
        self.assertEqual(DichotomyClassifier.check_beta(0.39), 0.39)
        with self.assertRaises(ComplexBetaError):
            DichotomyClassifier.check_beta(0.39 + 0.1j)
        for beta in (0.0, 1.0, 1.3):
            with self.assertRaises(ValidationError):
                DichotomyClassifier.check_beta(beta)


class TestDichotomyClassifier(unittest.TestCase):

    def test_smooth_coboundary_is_regular(self):
        circle_map = PerturbedDoublingMap(0.1)
        tree = PartitionTree.build(circle_map, 14)
        v = CoboundaryInput(FourierInput(cosine=[0.0, 1.0]), circle_map, 0.39)
        report = DichotomyClassifier(tree, stats_level=12).classify(v, 0.39)
        self.assertEqual(report.verdict, Verdict.REGULAR)
        self.assertTrue(report.in_theorem_range)
        self.assertEqual(report.stats_level, 12)
        self.assertEqual(report.clt_trace.shape, (14,))
        for estimate in report.variances:
            self.assertLessEqual(estimate.value, 1e-3)

    def test_weierstrass_is_irregular(self):
        a = 0.7
        tree = PartitionTree.build(LinearMap(), 14)
        report = DichotomyClassifier(tree, stats_level=12).classify(WeierstrassRhsInput(a), -np.log2(a))
        self.assertEqual(report.verdict, Verdict.IRREGULAR)
        np.testing.assert_array_equal(report.oscillation_levels, [6, 7, 8])
        np.testing.assert_array_equal(report.coefficient_levels, np.arange(6, 14))
        payload = report.to_dict()
        self.assertEqual(payload["verdict"], "irregular")
        self.assertEqual(sorted(payload["oscillation_minima"]), [6, 7, 8])


if __name__ == '__main__':
    unittest.main()
