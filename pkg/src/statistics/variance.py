import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from src.exceptions import ComplexBetaError, TailNotDecaying, ValidationError
from src.haar.inputs.function_input import FunctionInput
from src.logging.method_logger import log_method_call
from src.transfer.transfer_operator import TransferOperator

logger = logging.getLogger(__name__)

DEFAULT_KMAX = 40
DEFAULT_NEUMANN_TERMS = 60
TAIL_RATIO = 1e-3
MAX_TAIL_QUOTIENT = 0.99


@dataclass
class VarianceEstimate:
    """
    An asymptotic variance estimate.

    Attributes:
        method (str): "green_kubo" or "martingale_mc"
        value (float): Estimate of sigma^2, clipped at 0
        stderr (float): Truncation error estimate
        diagnostics (Dict[str, np.ndarray]): Correlation sequence or
            martingale data for inspection
    """
    method: str
    value: float
    stderr: float
    diagnostics: Dict[str, object] = field(default_factory=dict, repr=False)


def _geometric_tail(last: float, previous: float) -> float:
    if last == 0.0:
        return 0.0
    quotient = min(abs(last / previous), MAX_TAIL_QUOTIENT) if previous != 0.0 else MAX_TAIL_QUOTIENT
    return abs(last) * quotient / (1.0 - quotient)


def _check_real(phi: FunctionInput) -> None:
    if not phi.is_real:
        raise ComplexBetaError("variance estimators need real observables")


@log_method_call
def sigma2_green_kubo(transfer: TransferOperator, phi: FunctionInput, kmax: int = DEFAULT_KMAX) -> VarianceEstimate:
    """
    Green-Kubo estimate sigma^2 = C_0 + 2 sum_{k=1}^{kmax} C_k.

    Args:
        transfer: Transfer operator at the statistics level
        phi: Real observable, centered internally against rho
        kmax: Largest lag

    Returns:
        VarianceEstimate with the correlation sequence in diagnostics

    Raises:
        TailNotDecaying: If |C_kmax| >= 1e-3 C_0
    """
    _check_real(phi)
    if kmax < 1:
        raise ValidationError(f"kmax must be at least 1, got {kmax}")
    correlations = np.real(transfer.correlations(phi, phi, kmax))
    head = correlations[0]
    if head <= 0.0:
        return VarianceEstimate("green_kubo", 0.0, 0.0, {"correlations": correlations})
    if abs(correlations[-1]) >= TAIL_RATIO * head:
        raise TailNotDecaying(f"|C_{kmax}| = {abs(correlations[-1]):.3e} has not dropped below {TAIL_RATIO} C_0")
    raw = float(head + 2.0 * np.sum(correlations[1:]))
    stderr = 2.0 * _geometric_tail(correlations[-1], correlations[-2])
    logger.info("green-kubo sigma^2=%.6e stderr=%.3e", raw, stderr)
    return VarianceEstimate("green_kubo", max(raw, 0.0), stderr, {"correlations": correlations, "raw": raw})


@log_method_call
def sigma2_martingale(transfer: TransferOperator, phi: FunctionInput,
                      terms: int = DEFAULT_NEUMANN_TERMS) -> VarianceEstimate:
    """
    Martingale estimate sigma^2 = ||h||^2 in L^2(rho m).

    With T psi = L(rho psi)/rho, w = sum_{k=1}^K T^k psi and
    h = psi - (w o F - w). The composition w o F is exact on level-(n+1)
    cells, where h is assembled.

    Args:
        transfer: Transfer operator at the statistics level
        phi: Real observable, centered internally against rho
        terms: Number K of Neumann terms

    Returns:
        VarianceEstimate with h, w and the term norms in diagnostics

    Raises:
        TailNotDecaying: If ||T^K psi|| >= 1e-3 ||psi||
    """
    _check_real(phi)
    if terms < 1:
        raise ValidationError(f"number of Neumann terms must be at least 1, got {terms}")
    density = transfer.invariant_density()
    operator = transfer.ulam_matrix(1.0)
    means = np.real(transfer.cell_means(phi))
    centered = means - float(transfer.integrate(density * means))
    norms = [float(np.max(np.abs(centered)))]
    current = centered
    accumulated = np.zeros_like(centered)
    for _ in range(terms):
        current = operator.apply(density * current) / density
        accumulated += current
        norms.append(float(np.max(np.abs(current))))
    if norms[0] > 0.0 and norms[-1] >= TAIL_RATIO * norms[0]:
        raise TailNotDecaying(f"||T^{terms} psi|| = {norms[-1]:.3e} has not decayed")
    fine_lengths = transfer.tree.lengths(transfer.level + 1)
    fine_density = np.repeat(density, 2)
    martingale_part = np.repeat(centered, 2) - (transfer.compose_fine(accumulated) - np.repeat(accumulated, 2))
    value = float(np.sum(fine_lengths * fine_density * martingale_part**2))
    tail = _geometric_tail(norms[-1], norms[-2])
    h_norm = float(np.sqrt(value))
    stderr = 4.0 * h_norm * tail + 4.0 * tail**2
    logger.info("martingale sigma^2=%.6e stderr=%.3e", value, stderr)
    return VarianceEstimate(
        "martingale_mc",
        value,
        stderr,
        {"h": martingale_part, "w": accumulated, "term_norms": np.asarray(norms), "h_norm": h_norm},
    )
