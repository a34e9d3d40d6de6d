import os
import sys
import unittest

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from src.dynamics.maps.linear_map import LinearMap
from src.dynamics.maps.perturbed_doubling_map import PerturbedDoublingMap
from src.dynamics.partition.partition_tree import PartitionTree
from src.exceptions import ValidationError
from src.haar.haar_series import HaarSeries
from src.haar.inputs.coboundary_input import CoboundaryInput
from src.haar.inputs.fourier_input import FourierInput
from src.haar.inputs.function_input_factory import FunctionInputFactory
from src.haar.inputs.haar_coefficient_input import HaarCoefficientInput
from src.haar.inputs.pointwise_input import PointwiseInput
from src.haar.inputs.special_inputs import TakagiInput, TakagiTentInput, WeierstrassInput, WeierstrassRhsInput
from src.haar.series_oracles import takagi_series, tent, terms_for_tolerance, weierstrass_series


class TestFourierInput(unittest.TestCase):

    def setUp(self):
        self.tree = PartitionTree.build(PerturbedDoublingMap(0.1), 9)

    def test_closed_form_matches_quadrature(self):
        fourier = FourierInput(cosine=[0.3, 0.0, -1.2], sine=[9.0, 1.0, 0.0, 0.5])
        exact = fourier.cell_averages(self.tree, 8)
        quadrature = self.tree.cell_means(fourier.evaluate, 8)
        np.testing.assert_allclose(exact, quadrature, atol=1e-12)

    def test_sine_zero_is_ignored(self):
        fourier = FourierInput(sine=[5.0, 1.0])
        self.assertAlmostEqual(float(fourier.evaluate(0.0)), 0.0, places=14)
        self.assertEqual(fourier.sup_norm(), 1.0)

    def test_derivative(self):
        fourier = FourierInput(cosine=[0.0, 1.0], sine=[0.0, 0.0, 2.0])
        x = np.linspace(0.0, 1.0, 7, endpoint=False)
        expected = -2.0 * np.pi * np.sin(2.0 * np.pi * x) + 8.0 * np.pi * np.cos(4.0 * np.pi * x)
        np.testing.assert_allclose(fourier.derivative(x), expected, atol=1e-12)

    def test_rejects_nonfinite_coefficients(self):
        with self.assertRaises(ValidationError):
            FourierInput(cosine=[0.0, np.inf])


class TestSpecialInputs(unittest.TestCase):

    def setUp(self):
        self.linear_tree = PartitionTree.build(LinearMap(), 12)

    def test_tent_averages_on_halves(self):
        np.testing.assert_allclose(TakagiTentInput().cell_averages(self.linear_tree, 1), [0.25, 0.25], atol=1e-15)

    def test_scaled_tent(self):
        scaled = TakagiTentInput(-2.0)
        self.assertAlmostEqual(float(scaled.evaluate(0.25)), -0.5)
        self.assertEqual(scaled.sup_norm(), 1.0)
        self.assertEqual(scaled.describe()["scale"], -2.0)

    def test_weierstrass_rhs(self):
        rhs = WeierstrassRhsInput(0.5)
        self.assertAlmostEqual(float(rhs.evaluate(0.0)), -2.0)
        self.assertEqual(rhs.a, 0.5)
        with self.assertRaises(ValidationError):
            WeierstrassRhsInput(1.0)

    def test_weierstrass_averages(self):
        weierstrass = WeierstrassInput(0.6, terms=8)
        exact = weierstrass.cell_averages(self.linear_tree, 6)
        fine = self.linear_tree.project(self.linear_tree.cell_means(weierstrass.evaluate, 12), 12, 6)
        np.testing.assert_allclose(exact, fine, atol=1e-12)
        self.assertAlmostEqual(weierstrass.holder_exponent, -np.log2(0.6))

    def test_takagi_averages_on_halves(self):
        # T is symmetric with mean 1/2 over the circle
        fine = TakagiInput().cell_averages(self.linear_tree, 12)
        np.testing.assert_allclose(self.linear_tree.project(fine, 12, 1), [0.5, 0.5], atol=1e-4)


class TestSeriesOracles(unittest.TestCase):

    def test_tent(self):
        np.testing.assert_allclose(tent([0.0, 0.25, 0.5, 0.75, 1.3]), [0.0, 0.25, 0.5, 0.25, 0.3], atol=1e-15)

    def test_takagi_values(self):
        np.testing.assert_allclose(takagi_series([0.0, 0.25, 0.5, 1.0 / 3.0]), [0.0, 0.5, 0.5, 2.0 / 3.0], atol=1e-12)

    def test_takagi_functional_equation(self):
        x = np.random.default_rng(3).random(200)
        left = takagi_series(np.mod(2.0 * x, 1.0)) - 2.0 * takagi_series(x)
        np.testing.assert_allclose(left, -2.0 * tent(x), atol=1e-12)

    def test_weierstrass_functional_equation(self):
        a = 0.7
        terms = terms_for_tolerance(a, 1e-13)
        x = np.random.default_rng(4).random(200)
        left = weierstrass_series(np.mod(2.0 * x, 1.0), a, terms) - weierstrass_series(x, a, terms) / a
        np.testing.assert_allclose(left, -np.cos(2.0 * np.pi * x) / a, atol=1e-11)

    def test_terms_for_tolerance(self):
        self.assertEqual(terms_for_tolerance(0.5, 1e-12), 41)
        a, terms = 0.7, terms_for_tolerance(0.7, 1e-10)
        self.assertLess(a**terms / (1.0 - a), 1e-10)
        self.assertGreater(a ** (terms - 1) / (1.0 - a), 1e-10)


class TestHaarCoefficientInput(unittest.TestCase):

    def setUp(self):
        self.tree = PartitionTree.build(PerturbedDoublingMap(0.1), 8)
        details = [np.zeros(1 << k) for k in range(4)]
        details[2][1] = 0.1
        self.series = HaarSeries(self.tree, 1.0, details)

    def test_projection_is_exact(self):
        haar_input = HaarCoefficientInput(self.series)
        np.testing.assert_allclose(haar_input.cell_averages(self.tree, 4), self.series.averages(4))
        np.testing.assert_allclose(haar_input.cell_averages(self.tree, 6), np.repeat(self.series.averages(4), 4))
        np.testing.assert_allclose(haar_input.cell_averages(self.tree, 2), self.series.averages(2))

    def test_other_tree_is_rejected(self):
        other = PartitionTree.build(LinearMap(), 8)
        with self.assertRaises(ValidationError):
            HaarCoefficientInput(self.series).cell_averages(other, 3)


class TestCoboundaryInput(unittest.TestCase):

    def test_evaluation(self):
        circle_map = PerturbedDoublingMap(0.1)
        alpha = FourierInput(cosine=[0.0, 1.0])
        coboundary = CoboundaryInput(alpha, circle_map, 0.39)
        x = np.linspace(0.0, 1.0, 9, endpoint=False)
        expected = alpha.evaluate(circle_map.eval(x)) - circle_map.deriv(x) ** 0.39 * alpha.evaluate(x)
        np.testing.assert_allclose(coboundary.evaluate(x), expected, atol=1e-14)
        self.assertEqual(coboundary.describe()["beta"], 0.39)


class TestFunctionInputFactory(unittest.TestCase):

    def test_create_variants(self):
        self.assertIsInstance(FunctionInputFactory.create_input("fourier", sine=[0.0, 1.0]), FourierInput)
        self.assertIsInstance(FunctionInputFactory.create_input("takagi_tent", scale=-2.0), TakagiTentInput)
        self.assertIsInstance(FunctionInputFactory.create_input("Weierstrass", a=0.5), WeierstrassInput)
        self.assertIsInstance(FunctionInputFactory.create_input("pointwise", rule=np.sin), PointwiseInput)
        coboundary = FunctionInputFactory.create_input(
            "coboundary", cosine=[0.0, 1.0], circle_map=LinearMap(), beta=0.5
        )
        self.assertIsInstance(coboundary, CoboundaryInput)

    def test_missing_parameter(self):
        with self.assertRaises(ValidationError):
            FunctionInputFactory.create_input("weierstrass_rhs")
        with self.assertRaises(ValidationError):
            FunctionInputFactory.create_input("coboundary", cosine=[1.0])

    def test_unknown_variant(self):
        with self.assertRaises(ValidationError):
            FunctionInputFactory.create_input("gaussian")


if __name__ == '__main__':
    unittest.main()
