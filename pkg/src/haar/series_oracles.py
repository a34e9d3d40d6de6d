"""
Direct series evaluation of the Weierstrass and Takagi functions.

Both series are summed with the dyadic phase reduced first, frac(2^k x),
so every term is evaluated on [0, 1) without losing digits.
"""

import numpy as np


def tent(x):
    """Distance from x to the nearest integer."""
    fractional = np.mod(np.asarray(x, dtype=float), 1.0)
    return np.minimum(fractional, 1.0 - fractional)


def weierstrass_series(x, a: float, terms: int = 60):
    """
    Sum W(x) = sum_{k<terms} a^k cos(2*pi*2^k*x).

    Args:
        x: Point(s) on the circle
        a: Amplitude ratio in (0, 1)
        terms: Number of terms

    Returns:
        W(x) with the shape of x
    """
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    for k in range(terms):
        total += a**k * np.cos(2.0 * np.pi * np.mod(np.ldexp(x, k), 1.0))
    return total


def takagi_series(x, terms: int = 60):
    """Sum T(x) = sum_{k<terms} 2^{-k} tent(2^k x)."""
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    for k in range(terms):
        total += np.ldexp(tent(np.ldexp(x, k)), -k)
    return total


def terms_for_tolerance(a: float, tol: float) -> int:
    """Smallest number of Weierstrass terms whose tail sum a^K/(1-a) is below tol."""
    return int(np.ceil(np.log(tol * (1.0 - a)) / np.log(a)))
