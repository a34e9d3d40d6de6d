import numpy as np

from src.haar.haar_series import HaarSeries


def _normalize_beta(beta):
    beta = complex(beta)
    return beta.real if beta.imag == 0.0 else beta


def frac_deriv(series: HaarSeries, beta) -> HaarSeries:
    """
    Grid-adapted fractional derivative D^beta.

    Every coefficient d_P is multiplied by |P|^-beta and the constant
    component is dropped, constants being the kernel.

    Args:
        series: The Haar series of psi
        beta: Real or complex order

    Returns:
        HaarSeries of D^beta psi with zero mean
    """
    beta = _normalize_beta(beta)
    details = []
    for level, level_details in enumerate(series.details):
        details.append(level_details * np.exp(-beta * np.log(series.tree.lengths(level))))
    return series.with_details(0.0, details)


def frac_integ(series: HaarSeries, beta) -> HaarSeries:
    """Inverse of frac_deriv on mean-zero series: D^-beta."""
    return frac_deriv(series, -_normalize_beta(beta))
