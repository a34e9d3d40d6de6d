import os
import sys
import unittest

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from src.dynamics.maps.circle_map_factory import CircleMapFactory
from src.dynamics.maps.custom_lift_map import CustomLiftMap
from src.dynamics.maps.linear_map import LinearMap
from src.dynamics.maps.perturbed_doubling_map import PerturbedDoublingMap
from src.exceptions import ValidationError


def bisect_root(func, target, low, high, steps=200):
    for _ in range(steps):
        middle = 0.5 * (low + high)
        if func(middle) < target:
            low = middle
        else:
            high = middle
    return 0.5 * (low + high)


class TestCircleMap(unittest.TestCase):

    def setUp(self):
        self.linear = LinearMap()
        self.perturbed = PerturbedDoublingMap(0.1)
        self.rng = np.random.default_rng(11)

    def test_eval(self):
        self.assertAlmostEqual(self.linear.eval(0.3), 0.6, places=15)
        self.assertAlmostEqual(self.perturbed.eval(0.25), 0.6, places=14)
        self.assertAlmostEqual(self.perturbed.eval(0.5), 0.0, places=14)

    def test_eval_stays_on_circle(self):
        points = self.rng.random(1000)
        images = self.perturbed.eval(points)
        self.assertTrue(np.all(images >= 0.0) and np.all(images < 1.0))

    def test_deriv(self):
        self.assertEqual(self.linear.deriv(0.77), 2.0)
        self.assertAlmostEqual(self.perturbed.deriv(0.25), 2.0, places=14)
        self.assertAlmostEqual(self.perturbed.deriv(0.0), 2.0 + 0.2 * np.pi, places=14)
        self.assertAlmostEqual(self.perturbed.lambda_min, 2.0 - 0.2 * np.pi, places=8)

    def test_deriv_matches_finite_difference(self):
        points = self.rng.uniform(0.01, 0.99, 1000)
        step = 1e-6
        difference = (self.perturbed.lift(points + step) - self.perturbed.lift(points - step)) / (2 * step)
        relative = np.abs(difference - self.perturbed.deriv(points)) / self.perturbed.deriv(points)
        self.assertLess(np.max(relative), 1e-6)

    def test_inverse_branch_examples(self):
        self.assertEqual(self.linear.inverse_branch(1, 0.5), 0.75)
        self.assertAlmostEqual(self.perturbed.inverse_branch(0, 0.0), 0.0, places=14)
        expected = bisect_root(lambda x: 2 * x + 0.1 * np.sin(2 * np.pi * x), 0.5, 0.0, 0.5)
        found = self.perturbed.inverse_branch(0, 0.5)
        self.assertAlmostEqual(found, expected, places=12)
        self.assertTrue(0.0 < found < 0.5)

    def test_inverse_branches_are_sections(self):
        targets = self.rng.random(10000)
        for branch in (0, 1):
            preimages = self.perturbed.inverse_branch(branch, targets)
            distance = np.abs(self.perturbed.eval(preimages) - targets)
            distance = np.minimum(distance, 1.0 - distance)
            self.assertLess(np.max(distance), 1e-12)

    def test_inverse_branches_are_ordered(self):
        targets = self.rng.random(1000)
        self.assertTrue(np.all(self.perturbed.inverse_branch(0, targets) < self.perturbed.inverse_branch(1, targets)))

    def test_invalid_branch(self):
        with self.assertRaises(ValidationError):
            self.perturbed.inverse_branch(2, 0.5)

    def test_orbit(self):
        np.testing.assert_allclose(self.linear.orbit(0.1, 3), [0.1, 0.2, 0.4], atol=1e-15)
        np.testing.assert_array_equal(self.linear.orbit(0.0, 5), np.zeros(5))
        np.testing.assert_allclose(self.perturbed.orbit(0.25, 2), [0.25, 0.6], atol=1e-14)
        self.assertEqual(self.linear.orbit(np.array([0.1, 0.2]), 4).shape, (4, 2))

    def test_weight_product(self):
        self.assertAlmostEqual(self.linear.weight_product(0.3, 5, 1.0), 32.0, places=12)
        self.assertAlmostEqual(self.linear.weight_product(0.3, 3, 0.5), 2.0**1.5, places=12)
        self.assertEqual(self.perturbed.weight_product(0.3, 0, 0.7), 1.0)

    def test_weight_product_log_space(self):
        self.assertAlmostEqual(self.linear.weight_product(0.3, 100, 0.01), 2.0, places=10)

    def test_weight_product_cocycle(self):
        points = self.rng.random(200)
        whole = self.perturbed.weight_product(points, 12, 0.39)
        head = self.perturbed.weight_product(points, 5, 0.39)
        tail = self.perturbed.weight_product(self.perturbed.orbit(points, 6)[-1], 7, 0.39)
        np.testing.assert_allclose(whole, head * tail, rtol=1e-12)

    def test_complex_weight_product(self):
        value = self.linear.weight_product(0.3, 2, 1j)
        self.assertAlmostEqual(abs(value), 1.0, places=12)

    def test_epsilon_guard(self):
        with self.assertRaises(ValidationError):
            PerturbedDoublingMap(0.2)

    def test_custom_lift_must_have_degree_two(self):
        with self.assertRaises(ValidationError):
            CustomLiftMap(lambda x: 3.0 * x, lambda x: np.full_like(x, 3.0))

    def test_custom_lift_must_expand(self):
        with self.assertRaises(ValidationError):
            CircleMapFactory.create_map("custom_lift", sine=[0.3])


class TestCircleMapFactory(unittest.TestCase):

    def test_create_maps(self):
        self.assertIsInstance(CircleMapFactory.create_map("linear"), LinearMap)
        perturbed = CircleMapFactory.create_map("perturbed_doubling", epsilon=0.05)
        self.assertEqual(perturbed.epsilon, 0.05)

    def test_trigonometric_lift(self):
        circle_map = CircleMapFactory.create_map("custom_lift", sine=[0.05], cosine=[0.0, 0.01])
        self.assertEqual(circle_map.family, "custom_lift")
        self.assertAlmostEqual(circle_map.eval(0.25), 0.57, places=12)
        self.assertGreater(circle_map.lambda_min, 1.0)

    def test_custom_lift_matches_perturbed_doubling(self):
        custom = CircleMapFactory.create_map("custom_lift", sine=[0.1])
        perturbed = PerturbedDoublingMap(0.1)
        points = np.linspace(0.0, 0.999, 101)
        np.testing.assert_allclose(custom.eval(points), perturbed.eval(points), atol=1e-14)
        np.testing.assert_allclose(custom.inverse_branch(1, points), perturbed.inverse_branch(1, points), atol=1e-13)

    def test_unknown_family(self):
        with self.assertRaises(ValidationError):
            CircleMapFactory.create_map("gauss")


if __name__ == '__main__':
    unittest.main()
