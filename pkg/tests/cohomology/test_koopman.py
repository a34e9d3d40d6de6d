import os
import sys
import unittest

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from src.cohomology.koopman import chain_remainder, koopman_coeffs, koopman_coeffs_by_cells
from src.dynamics.maps.linear_map import LinearMap
from src.dynamics.maps.perturbed_doubling_map import PerturbedDoublingMap
from src.dynamics.partition.partition_tree import PartitionTree
from src.exceptions import ValidationError
from src.haar.haar_series import HaarSeries
from src.haar.haar_transform import HaarTransform
from src.haar.inputs.fourier_input import FourierInput


def random_series(tree, depth, rng):
    return HaarSeries(tree, rng.standard_normal(), [rng.standard_normal(1 << k) for k in range(depth)])


class TestKoopmanCoefficients(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(17)
        self.linear_tree = PartitionTree.build(LinearMap(), 10)
        self.perturbed_tree = PartitionTree.build(PerturbedDoublingMap(0.1), 10)

    def test_routes_agree(self):
        for tree in (self.linear_tree, self.perturbed_tree):
            series = random_series(tree, 8, self.rng)
            direct = koopman_coeffs(series)
            by_cells = koopman_coeffs_by_cells(series)
            self.assertEqual(direct.depth, 9)
            self.assertAlmostEqual(direct.mean, by_cells.mean, places=10)
            for first, second in zip(direct.details, by_cells.details):
                np.testing.assert_allclose(first, second, atol=1e-9)

    def test_composition_of_cosine_doubles_frequency(self):
        transform = HaarTransform(self.linear_tree)
        composed = koopman_coeffs(transform.analyze_input(FourierInput(cosine=[0.0, 1.0]), 8))
        expected = transform.analyze_input(FourierInput(cosine=[0.0, 0.0, 1.0]), 9)
        for first, second in zip(composed.details, expected.details):
            np.testing.assert_allclose(first, second, atol=1e-13)

    def test_linear_map_has_no_indicator_part(self):
        series = random_series(self.linear_tree, 6, self.rng)
        composed = koopman_coeffs(series)
        np.testing.assert_allclose(composed.details[0], [0.0], atol=1e-14)
        self.assertAlmostEqual(composed.mean, series.mean, places=12)

    def test_depth_guard(self):
        with self.assertRaises(ValidationError):
            koopman_coeffs(random_series(self.perturbed_tree, 10, self.rng))


class TestChainRemainder(unittest.TestCase):

    def test_vanishes_on_linear_map(self):
        tree = PartitionTree.build(LinearMap(), 10)
        rng = np.random.default_rng(2)
        for _ in range(5):
            series = random_series(tree, 8, rng)
            for beta in (0.25, 0.39, 0.5):
                chain = chain_remainder(series, beta)
                self.assertLessEqual(chain.max_coefficient, 1e-10)
                self.assertEqual(chain.remainder.depth, 9)

    def test_nonzero_on_perturbed_map(self):
        tree = PartitionTree.build(PerturbedDoublingMap(0.1), 12)
        series = HaarTransform(tree).analyze_input(FourierInput(sine=[0.0, 1.0]), 10)
        chain = chain_remainder(series, 0.39)
        self.assertGreater(chain.max_coefficient, 1e-8)
        self.assertEqual(chain.remainder.depth, 11)
        self.assertIsNotNone(chain.regularity)
        self.assertGreaterEqual(chain.regularity.exponent, 0.5)

    def test_constant_input_has_no_remainder(self):
        tree = PartitionTree.build(PerturbedDoublingMap(0.1), 10)
        series = HaarTransform(tree).analyze_input(FourierInput(cosine=[1.5]), 8)
        chain = chain_remainder(series, 0.39)
        self.assertLessEqual(chain.max_coefficient, 1e-10)


if __name__ == '__main__':
    unittest.main()
