from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.exceptions import DegenerateInput, ValidationError
from src.haar.fractional import frac_deriv
from src.haar.haar_series import HaarSeries
from src.haar.haar_transform import HaarTransform
from src.haar.regularity import RegularityEstimate, regularity_estimate
from src.logging.method_logger import log_method_call


def _check_depth(series: HaarSeries) -> None:
    if series.depth + 1 > series.tree.depth:
        raise ValidationError(
            f"composition of a depth-{series.depth} series needs a tree of depth {series.depth + 1}"
        )


def koopman_coeffs(series: HaarSeries) -> HaarSeries:
    """
    Haar series of psi o F, one level deeper than psi.

    A series of depth m is constant on level-m cells and F maps the
    level-(m+1) cell j onto the level-m cell j mod 2^m, so the level-(m+1)
    averages of psi o F are read off directly.
    """
    _check_depth(series)
    averages = np.tile(series.averages(series.depth), 2)
    return HaarTransform(series.tree).analyze(averages)


def koopman_coeffs_by_cells(series: HaarSeries) -> HaarSeries:
    """
    Haar series of psi o F assembled cell by cell.

    Each wavelet is pushed through the two preimages P^j of its cell:
    phi_P o F = sum_j C_P^j phi_{P^j} + E_P^j 1_{P^j}/|P^j| with
    C_P^j = |P||Q1^j||Q2^j| / (|Q1||Q2||P^j|) and
    E_P^j = |Q1^j|/|Q1| - |Q2^j|/|Q2|. The indicator parts are collected as
    averages and re-expanded.
    """
    _check_depth(series)
    tree = series.tree
    depth = series.depth
    dtype = float if series.is_real else complex
    details = [np.zeros(1 << level, dtype=dtype) for level in range(depth + 1)]
    indicator = np.zeros(1 << (depth + 1), dtype=dtype)
    for level, level_details in enumerate(series.details):
        parent = tree.lengths(level)
        children = tree.lengths(level + 1)
        grandchildren = tree.lengths(level + 2)
        first, second = children[0::2], children[1::2]
        for branch in (0, 1):
            preimages = branch * (1 << level) + np.arange(1 << level)
            pre_lengths = children[preimages]
            pre_first = grandchildren[2 * preimages]
            pre_second = grandchildren[2 * preimages + 1]
            scale = parent * pre_first * pre_second / (first * second * pre_lengths)
            excess = pre_first / first - pre_second / second
            details[level + 1][preimages] += level_details * scale
            masses = np.zeros(1 << (level + 1), dtype=dtype)
            masses[preimages] = level_details * excess / pre_lengths
            indicator += np.repeat(masses, 1 << (depth - level))
    wavelet_part = HaarSeries(tree, series.mean, details)
    return wavelet_part + HaarTransform(tree).analyze(indicator)


@dataclass
class ChainRemainder:
    """
    Attributes:
        remainder (HaarSeries): D^beta(psi o F) - (D^beta psi) o F * g^beta
        max_coefficient (float): Largest |coefficient| of the remainder
        regularity (Optional[RegularityEstimate]): None for a vanishing remainder
    """
    remainder: HaarSeries
    max_coefficient: float
    regularity: Optional[RegularityEstimate]


@log_method_call
def chain_remainder(series: HaarSeries, beta, min_level: int = 4) -> ChainRemainder:
    """
    Remainder of the chain rule for D^beta, computed as a difference.

    The product with g^beta is taken on level-(m+1) averages, where m is the
    series depth.

    Args:
        series: Haar series of psi
        beta: Order of the derivative
        min_level: First level of the regularity fit

    Returns:
        ChainRemainder with the remainder series and its regularity
    """
    tree = series.tree
    level = series.depth + 1
    circle_map = tree.circle_map
    left = frac_deriv(koopman_coeffs(series), beta)
    composed = koopman_coeffs(frac_deriv(series, beta)).averages(level)
    weights = tree.cell_means(lambda x: np.asarray(circle_map.deriv(x)) ** beta, level)
    right = HaarTransform(tree).analyze(composed * weights)
    remainder = left - right
    max_coefficient = max(remainder.detail_sup(), abs(remainder.mean))
    regularity = None
    if complex(beta).imag == 0.0 and remainder.depth >= 8:
        try:
            regularity = regularity_estimate(remainder, min_level=min_level)
        except DegenerateInput:
            regularity = None
    return ChainRemainder(remainder, max_coefficient, regularity)
