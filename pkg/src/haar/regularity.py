from dataclasses import dataclass

import numpy as np
from scipy import stats

from src.exceptions import DegenerateInput, ValidationError
from src.haar.haar_series import HaarSeries

ZERO_COEFFICIENT = 1e-14
MIN_DEPTH = 8


@dataclass
class RegularityEstimate:
    """
    Least-squares Hoelder exponent read off the decay of Haar coefficients.

    Attributes:
        exponent (float): Slope of log sup|d_P|/|P| against log 2^-k
        stderr (float): Standard error of the slope, used as the band
        levels (np.ndarray): Levels entering the fit
        log_sup (np.ndarray): log sup_P |d_P|/|P| per fitted level
    """
    exponent: float
    stderr: float
    levels: np.ndarray
    log_sup: np.ndarray


def regularity_estimate(series: HaarSeries, min_level: int = 4, max_level: int = None) -> RegularityEstimate:
    """
    Estimate the Hoelder exponent of a function from its coefficient decay.

    Args:
        series: The Haar series, of depth at least 8
        min_level: First fitted level
        max_level: Last fitted level, defaults to depth - 1

    Returns:
        RegularityEstimate

    Raises:
        DegenerateInput: If every coefficient is below 1e-14
    """
    if series.depth < MIN_DEPTH:
        raise ValidationError(f"regularity estimate needs depth >= {MIN_DEPTH}, got {series.depth}")
    max_level = series.depth - 1 if max_level is None else max_level
    if not 0 <= min_level < max_level < series.depth:
        raise ValidationError(f"invalid fitting levels [{min_level}, {max_level}]")
    if series.detail_sup() < ZERO_COEFFICIENT:
        raise DegenerateInput("all Haar coefficients vanish; the regularity of a constant is undefined")
    levels = np.arange(min_level, max_level + 1)
    sups = np.array([np.max(np.abs(series.details[k]) / series.tree.lengths(k)) for k in levels])
    sups = np.maximum(sups, np.finfo(float).tiny)
    fit = stats.linregress(-levels * np.log(2.0), np.log(sups))
    return RegularityEstimate(float(fit.slope), float(fit.stderr), levels, np.log(sups))
