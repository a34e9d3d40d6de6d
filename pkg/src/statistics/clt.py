"""
Central limit experiment for the martingale approximations psi_n / sqrt(n).

Samples are drawn in fixed-size chunks, each from its own counter-based
generator keyed by (seed, chunk index), so the draws do not depend on how
many worker threads evaluate the chunks.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats

from src.cohomology.martingale import martingale_psi
from src.cohomology.twisted_solution import TwistedSolution
from src.exceptions import ComplexBetaError, EmptySampleError, ValidationError
from src.logging.method_logger import log_method_call

CHUNK_SIZE = 8192


@dataclass
class CltResult:
    """
    Attributes:
        level (int): n in psi_n / sqrt(n)
        samples (int): Number of sampled points
        seed (int): Generator seed
        mean (float): Sample mean
        variance (float): Sample variance
        counts (np.ndarray): Histogram counts
        bin_edges (np.ndarray): Histogram edges
        ks_statistic (float): KS distance to N(0, variance)
    """
    level: int
    samples: int
    seed: int
    mean: float
    variance: float
    counts: np.ndarray
    bin_edges: np.ndarray
    ks_statistic: float

    def histogram_rows(self):
        for left, right, count in zip(self.bin_edges[:-1], self.bin_edges[1:], self.counts):
            yield float(left), float(right), int(count)


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk])))


def sample_uniform(samples: int, seed: int, threads: int = 1,
                   transform: Callable[[np.ndarray], np.ndarray] = None) -> np.ndarray:
    """
    Draw uniform points of [0, 1), optionally mapped through transform per chunk.

    Args:
        samples: Number of points
        seed: Seed of the experiment
        threads: Worker threads evaluating chunks
        transform: Vectorized function applied to each chunk of points

    Returns:
        np.ndarray: The (transformed) sample in chunk order
    """
    if samples <= 0:
        raise EmptySampleError(f"number of samples must be positive, got {samples}")
    if threads < 1:
        raise ValidationError(f"threads must be at least 1, got {threads}")
    chunks = range((samples + CHUNK_SIZE - 1) // CHUNK_SIZE)

    def draw(chunk: int) -> np.ndarray:
        size = min(CHUNK_SIZE, samples - chunk * CHUNK_SIZE)
        points = chunk_generator(seed, chunk).random(size)
        return transform(points) if transform is not None else points

    if threads == 1:
        parts = [draw(chunk) for chunk in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(draw, chunks))
    return np.concatenate(parts)


def ks_test(sample: np.ndarray, variance: float) -> float:
    """
    Two-sided Kolmogorov-Smirnov distance between a sample and N(0, variance).

    Raises:
        EmptySampleError: If the sample is empty
        ValidationError: If variance is not positive
    """
    sample = np.asarray(sample, dtype=float)
    if sample.size == 0:
        raise EmptySampleError("KS test of an empty sample")
    if not variance > 0.0:
        raise ValidationError(f"reference variance must be positive, got {variance!r}")
    return float(stats.kstest(sample, stats.norm(loc=0.0, scale=np.sqrt(variance)).cdf).statistic)


@log_method_call
def clt_histogram(solution: TwistedSolution, n: int, samples: int, seed: int,
                  bins: int = 60, threads: int = 1) -> CltResult:
    """
    Histogram and KS distance of psi_n(x)/sqrt(n) for Lebesgue-uniform x.

    Args:
        solution: Twisted solution with real beta
        n: Level, at most the solution depth
        samples: Number of points
        seed: Seed of the experiment
        bins: Number of histogram bins
        threads: Worker threads

    Returns:
        CltResult
    """
    if not solution.is_real:
        raise ComplexBetaError(f"CLT experiment needs a real beta, got {solution.beta!r}")
    if not 1 <= n <= solution.depth:
        raise ValidationError(f"level must be between 1 and {solution.depth}, got {n}")
    scale = 1.0 / np.sqrt(n)
    values = sample_uniform(samples, seed, threads, lambda points: martingale_psi(solution, points, n) * scale)
    mean = float(np.mean(values))
    variance = float(np.var(values))
    counts, edges = np.histogram(values, bins=bins)
    ks = ks_test(values, variance) if variance > 0.0 else 1.0
    return CltResult(n, int(values.size), seed, mean, variance, counts, edges, ks)
