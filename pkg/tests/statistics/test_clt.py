import os
import sys
import unittest

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from src.cohomology.twisted_equation_solver import solve_twisted
from src.dynamics.maps.perturbed_doubling_map import PerturbedDoublingMap
from src.dynamics.partition.partition_tree import PartitionTree
from src.exceptions import ComplexBetaError, EmptySampleError, ValidationError
from src.haar.inputs.coboundary_input import CoboundaryInput
from src.haar.inputs.fourier_input import FourierInput
from src.statistics.clt import CHUNK_SIZE, clt_histogram, ks_test, sample_uniform
from src.statistics.dichotomy import DichotomyClassifier, Verdict


class TestSampling(unittest.TestCase):

    def test_independent_of_threads(self):
        single = sample_uniform(3 * CHUNK_SIZE + 17, seed=42, threads=1)
        pooled = sample_uniform(3 * CHUNK_SIZE + 17, seed=42, threads=4)
        np.testing.assert_array_equal(single, pooled)
        self.assertEqual(single.size, 3 * CHUNK_SIZE + 17)

    def test_seed_changes_sample(self):
        self.assertFalse(np.array_equal(sample_uniform(100, seed=1), sample_uniform(100, seed=2)))

    def test_transform_is_applied_per_chunk(self):
        doubled = sample_uniform(CHUNK_SIZE + 5, seed=3, transform=lambda points: 2.0 * points)
        np.testing.assert_array_equal(doubled, 2.0 * sample_uniform(CHUNK_SIZE + 5, seed=3))

    def test_invalid_arguments(self):
        with self.assertRaises(EmptySampleError):
            sample_uniform(0, seed=1)
        with self.assertRaises(ValidationError):
            sample_uniform(10, seed=1, threads=0)


class TestKolmogorovSmirnov(unittest.TestCase):

    def test_point_mass_at_zero(self):
        self.assertAlmostEqual(ks_test(np.zeros(100), 1.0), 0.5)

    def test_normal_sample(self):
        sample = np.random.default_rng(8).normal(0.0, 2.0, 20000)
        self.assertLess(ks_test(sample, 4.0), 0.02)

    def test_invalid_arguments(self):
        with self.assertRaises(EmptySampleError):
            ks_test(np.array([]), 1.0)
        with self.assertRaises(ValidationError):
            ks_test(np.ones(3), 0.0)


class TestCltHistogram(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        circle_map = PerturbedDoublingMap(0.1)
        cls.tree = PartitionTree.build(circle_map, 13)
        cls.solution = solve_twisted(cls.tree, FourierInput(sine=[0.0, 1.0]), 0.39)
        alpha = FourierInput(cosine=[0.0, 1.0])
        cls.regular = solve_twisted(cls.tree, CoboundaryInput(alpha, circle_map, 0.39), 0.39)

    def test_histogram(self):
        result = clt_histogram(self.solution, 12, samples=20000, seed=42, bins=30)
        self.assertEqual(result.counts.sum(), 20000)
        self.assertEqual(len(list(result.histogram_rows())), 30)
        self.assertGreater(result.variance, 0.0)
        self.assertLess(abs(result.mean), 5.0 * np.sqrt(result.variance / 20000))
        self.assertGreaterEqual(result.ks_statistic, 0.0)
        self.assertLessEqual(result.ks_statistic, 1.0)

    def test_deterministic_across_threads(self):
        single = clt_histogram(self.solution, 10, samples=20000, seed=5, threads=1)
        pooled = clt_histogram(self.solution, 10, samples=20000, seed=5, threads=3)
        np.testing.assert_array_equal(single.counts, pooled.counts)
        self.assertEqual(single.ks_statistic, pooled.ks_statistic)

    def test_regular_solution_variance_decays(self):
        early = clt_histogram(self.regular, 4, samples=20000, seed=9).variance
        late = clt_histogram(self.regular, 12, samples=20000, seed=9).variance
        self.assertLess(late, 0.6 * early)

    def test_invalid_arguments(self):
        with self.assertRaises(ValidationError):
            clt_histogram(self.solution, 14, samples=100, seed=1)
        complex_solution = solve_twisted(self.tree, FourierInput(sine=[0.0, 1.0]), 0.39 + 0.1j, depth=6)
        with self.assertRaises(ComplexBetaError):
            clt_histogram(complex_solution, 4, samples=100, seed=1)


class TestPerturbedSineExperiment(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.tree = PartitionTree.build(PerturbedDoublingMap(0.1), 17)
        cls.v = FourierInput(sine=[0.0, 1.0])
        cls.solution = solve_twisted(cls.tree, cls.v, 0.39)

    def test_normal_limit(self):
        results = [clt_histogram(self.solution, n, samples=100000, seed=42) for n in range(12, 18)]
        variances = np.array([result.variance for result in results])
        self.assertLessEqual(results[-1].ks_statistic, 0.05)
        self.assertLessEqual(variances.max(), 1.15 * variances.min())
        self.assertGreater(variances.min(), 1e-3)

    def test_irregular_verdict(self):
        report = DichotomyClassifier(self.tree, 12).classify(self.v, 0.39, solution=self.solution)
        self.assertEqual(report.verdict, Verdict.IRREGULAR)


if __name__ == '__main__':
    unittest.main()
