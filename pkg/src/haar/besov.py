from dataclasses import dataclass
from typing import Literal

import numpy as np

from src.exceptions import ValidationError
from src.haar.haar_series import HaarSeries

Flavor = Literal["inf_inf", "one_one"]


@dataclass
class BesovNorm:
    """
    A truncated Besov norm and its per-level profile.

    Attributes:
        value (float): |c0| plus the sup (inf_inf) or sum (one_one) of the profile
        flavor (str): "inf_inf" or "one_one"
        s (float): Smoothness index
        profile (np.ndarray): Per-level sup of |d_P||P|^-(s+1) or sum of |d_P||P|^-s
    """
    value: float
    flavor: str
    s: float
    profile: np.ndarray

    def growth_ratio(self) -> float:
        """Ratio of the last to the first nonzero profile entry."""
        nonzero = self.profile[self.profile > 0.0]
        return float(nonzero[-1] / nonzero[0]) if nonzero.size else 0.0


def besov_norm(series: HaarSeries, s: float, flavor: Flavor = "inf_inf") -> BesovNorm:
    """
    Compute the B^s_{inf,inf} or B^s_{1,1} norm of a series truncated at its depth.

    The sequence-space coefficients are d_P |P|^-(s+1) for (inf, inf) and
    d_P |P|^-s for (1, 1), where d_P are the stored synthesis coefficients.

    Args:
        series: The Haar series
        s: Smoothness index, negative for distributional norms
        flavor: "inf_inf" or "one_one"

    Returns:
        BesovNorm with value and per-level profile
    """
    if flavor not in ("inf_inf", "one_one"):
        raise ValidationError(f"unknown Besov flavor {flavor!r}")
    profile = np.zeros(series.depth)
    for level, details in enumerate(series.details):
        log_lengths = np.log(series.tree.lengths(level))
        if flavor == "inf_inf":
            profile[level] = np.max(np.abs(details) * np.exp(-(s + 1.0) * log_lengths))
        else:
            profile[level] = np.sum(np.abs(details) * np.exp(-s * log_lengths))
    partial = np.max(profile, initial=0.0) if flavor == "inf_inf" else np.sum(profile)
    return BesovNorm(abs(series.mean) + float(partial), flavor, s, profile)
