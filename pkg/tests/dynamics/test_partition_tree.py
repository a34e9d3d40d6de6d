import os
import sys
import unittest

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from src.dynamics.maps.linear_map import LinearMap
from src.dynamics.maps.perturbed_doubling_map import PerturbedDoublingMap
from src.dynamics.partition.partition_tree import PartitionTree
from src.exceptions import ValidationError


class TestPartitionTree(unittest.TestCase):

    def setUp(self):
        self.perturbed_map = PerturbedDoublingMap(0.1)
        self.linear_tree = PartitionTree.build(LinearMap(), 10)
        self.perturbed_tree = PartitionTree.build(self.perturbed_map, 12)

    def test_linear_endpoints_are_dyadic(self):
        np.testing.assert_allclose(self.linear_tree.endpoints(2), [0.0, 0.25, 0.5, 0.75, 1.0])
        np.testing.assert_allclose(self.linear_tree.endpoints(10), np.arange(1025) / 1024.0)

    def test_perturbed_low_levels(self):
        np.testing.assert_allclose(self.perturbed_tree.endpoints(1), [0.0, 0.5, 1.0], atol=1e-14)
        x1, x2 = self.perturbed_tree.endpoints(2)[[1, 3]]
        self.assertTrue(0.0 < x1 < 0.5 < x2 < 1.0)
        self.assertAlmostEqual(self.perturbed_map.eval(x1), 0.5, places=13)
        self.assertAlmostEqual(self.perturbed_map.eval(x2), 0.5, places=13)

    def test_levels_refine(self):
        for level in range(1, self.perturbed_tree.depth + 1):
            fine = self.perturbed_tree.endpoints(level)
            self.assertEqual(fine.size, (1 << level) + 1)
            np.testing.assert_array_equal(fine[0::2], self.perturbed_tree.endpoints(level - 1))
            self.assertTrue(np.all(np.diff(fine) > 0.0))
            self.assertAlmostEqual(self.perturbed_tree.lengths(level).sum(), 1.0, places=12)

    def test_children_partition_parent(self):
        cell = self.perturbed_tree.cell(5, 13)
        first, second = self.perturbed_tree.children(cell)
        self.assertEqual(first.a, cell.a)
        self.assertEqual(first.b, second.a)
        self.assertEqual(second.b, cell.b)
        self.assertEqual(self.perturbed_tree.parent(first), cell)
        self.assertEqual(first.address, cell.address + "0")
        self.assertEqual(second.address, cell.address + "1")

    def test_markov_property(self):
        rng = np.random.default_rng(3)
        level = 9
        for index in rng.integers(0, 1 << (level + 1), 1000):
            cell = self.perturbed_tree.cell(level + 1, int(index))
            image = self.perturbed_tree.image(cell)
            self.assertEqual(image.address, cell.address[1:])
            start = self.perturbed_map.eval(cell.a)
            end = self.perturbed_map.lift(np.array([cell.b]))[0] % 1.0
            self.assertLess(min(abs(start - image.a), 1.0 - abs(start - image.a)), 1e-10)
            end_gap = abs(end - image.b % 1.0)
            self.assertLess(min(end_gap, 1.0 - end_gap), 1e-10)

    def test_cell_of(self):
        cell = self.linear_tree.cell_of(0.3, 2)
        self.assertEqual((cell.a, cell.b), (0.25, 0.5))
        self.assertEqual(cell.address, "01")
        self.assertEqual(self.linear_tree.cell_of(0.25, 2).a, 0.25)
        whole = self.perturbed_tree.cell_of(0.77, 0)
        self.assertEqual((whole.a, whole.b), (0.0, 1.0))

    def test_cell_indices_vectorized(self):
        points = np.array([0.0, 0.1, 0.5, 0.99])
        np.testing.assert_array_equal(self.linear_tree.cell_indices(points, 1), [0, 0, 1, 1])

    def test_grid_metric(self):
        self.assertEqual(self.linear_tree.grid_metric(0.1, 0.2).value, 0.25)
        self.assertEqual(self.linear_tree.grid_metric(0.49, 0.51).value, 1.0)
        diagonal = self.linear_tree.grid_metric(0.3, 0.3)
        self.assertEqual(diagonal.value, 2.0**-10)
        self.assertTrue(diagonal.depth_limited)
        self.assertFalse(self.linear_tree.grid_metric(0.1, 0.2).depth_limited)

    def test_grid_metric_is_ultrametric(self):
        rng = np.random.default_rng(5)
        x, y, z = rng.random((3, 500))
        dxz, _, _ = self.perturbed_tree.grid_metrics(x, z)
        dxy, _, _ = self.perturbed_tree.grid_metrics(x, y)
        dyz, _, _ = self.perturbed_tree.grid_metrics(y, z)
        self.assertTrue(np.all(dxz <= np.maximum(dxy, dyz)))

    def test_bounded_distortion(self):
        """Children split their parent in uniformly bounded proportions at every level."""
        for level in (5, 11):
            ratios = self.perturbed_tree.lengths(level + 1)[0::2] / self.perturbed_tree.lengths(level)
            self.assertTrue(np.all((ratios > 0.2) & (ratios < 0.8)))
        low, high = self.perturbed_tree.distortion()
        self.assertLess(low, 1.0)
        self.assertGreater(high, 1.0)

    def test_quadrature_integrates_polynomials(self):
        averages = self.perturbed_tree.cell_means(lambda x: x**3, 4)
        ends = self.perturbed_tree.endpoints(4)
        exact = (ends[1:] ** 4 - ends[:-1] ** 4) / (4.0 * np.diff(ends))
        np.testing.assert_allclose(averages, exact, rtol=1e-13)

    def test_shift_is_exact_on_piecewise_constants(self):
        values = np.random.default_rng(9).random(1 << 7)
        fine = self.perturbed_tree.project(values, 7, 8)
        np.testing.assert_allclose(self.perturbed_tree.shift(fine, 8), np.tile(values, 2))

    def test_depth_guard(self):
        with self.assertRaises(ValidationError):
            PartitionTree.build(LinearMap(), 0)
        with self.assertRaises(ValidationError):
            PartitionTree.build(LinearMap(), 27)


if __name__ == '__main__':
    unittest.main()
