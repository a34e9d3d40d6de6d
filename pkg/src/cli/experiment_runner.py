import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional

import numpy as np

from src.cli.report_writer import ReportWriter
from src.cli.version import version_string
from src.cohomology.koopman import chain_remainder
from src.cohomology.martingale import coboundary_oscillation_ratio, phi_v_input
from src.cohomology.twisted_equation_solver import TwistedEquationSolver
from src.configuration.experiment_configuration_service import ExperimentConfigurationService
from src.dynamics.maps.linear_map import LinearMap
from src.dynamics.partition.partition_tree import PartitionTree
from src.exceptions import ConfigurationError, DegenerateInput, LaboratoryError, ValidationError
from src.haar.besov import besov_norm
from src.haar.fractional import frac_deriv
from src.haar.haar_series import HaarSeries
from src.haar.haar_transform import HaarTransform
from src.haar.inputs.coboundary_input import CoboundaryInput
from src.haar.inputs.fourier_input import FourierInput
from src.haar.inputs.special_inputs import TakagiTentInput, WeierstrassRhsInput
from src.haar.regularity import MIN_DEPTH, regularity_estimate
from src.haar.series_oracles import takagi_series, terms_for_tolerance, weierstrass_series
from src.logging.action_logger import log_action_method_call
from src.logging.start_up_logger import configure_logging, log_start_up
from src.statistics.clt import clt_histogram, sample_uniform
from src.statistics.dichotomy import DichotomyClassifier
from src.statistics.sweeps import VarianceSweep
from src.statistics.variance import sigma2_green_kubo, sigma2_martingale
from src.transfer.transfer_operator import TransferOperator

logger = logging.getLogger(__name__)

SUBCOMMANDS = (
    "partition", "solve", "analyze", "fracderiv", "clt", "variance",
    "classify", "sweep-beta", "spectrum", "oracle-check",
)
ORACLE_SOLVE_TOLERANCE = 1e-10
ORACLE_SERIES_TOLERANCE = 1e-12
TAKAGI_SCALE = -2.0
PARTITION_CSV_MAX_LEVEL = 12


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twisted-lab",
        description="Twisted cohomological equations over expanding circle maps.",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("oracle", nargs="?", choices=("weierstrass", "takagi"),
                        help="oracle for the oracle-check subcommand")
    parser.add_argument("--config", help="JSON experiment configuration")
    parser.add_argument("--seed", type=int, help="override the configured seed")
    parser.add_argument("--threads", type=int, help="override the configured worker threads")
    parser.add_argument("--out", help="override the configured output directory")
    parser.add_argument("--a", type=float, default=0.7, help="Weierstrass amplitude for oracle-check")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


class ExperimentRunner:
    """
    Runs one subcommand of an experiment configuration.

    Every handler computes its results, registers its CSV and JSON artifacts
    with the report writer and returns; files are written only after the
    handler succeeded.

    Attributes:
        _service (ExperimentConfigurationService): Configuration and domain objects
        _writer (ReportWriter): Collected artifacts
    """

    def __init__(self, service: ExperimentConfigurationService, version: str):
        self._service = service
        self._config = service.config
        self._writer = ReportWriter(self._config.output_dir, version, service.resolved())
        self._handlers: Dict[str, Callable[[argparse.Namespace], None]] = {
            "partition": self.partition,
            "solve": self.solve,
            "analyze": self.analyze,
            "fracderiv": self.fracderiv,
            "clt": self.clt,
            "variance": self.variance,
            "classify": self.classify,
            "sweep-beta": self.sweep_beta,
            "spectrum": self.spectrum,
            "oracle-check": self.oracle_check,
        }

    @property
    def writer(self) -> ReportWriter:
        return self._writer

    def run(self, arguments: argparse.Namespace) -> None:
        self._handlers[arguments.subcommand](arguments)
        self._writer.commit()

    def _solver(self, tree=None, tol: float = None) -> TwistedEquationSolver:
        tree = self._service.tree() if tree is None else tree
        return TwistedEquationSolver(tree, self._config.tol if tol is None else tol, self._config.max_terms)

    def _solve(self):
        return self._solver().solve(self._service.right_hand_side(), self._config.beta_value, self._config.method)

    def _real_beta(self) -> float:
        if self._config.beta_imag:
            raise ValidationError("this subcommand needs a real beta")
        return self._config.beta

    def _transfer(self) -> TransferOperator:
        return TransferOperator(self._service.tree(), self._config.transfer_level)

    def _classifier(self) -> DichotomyClassifier:
        config = self._config
        return DichotomyClassifier(
            self._service.tree(),
            config.transfer_level,
            config.tol,
            config.max_terms,
            config.kmax,
            config.neumann_terms,
            config.thresholds.to_thresholds(),
        )

    @log_action_method_call
    def partition(self, arguments: argparse.Namespace) -> None:
        tree = self._service.tree()
        low, high = tree.distortion()
        self._writer.add_csv("partition.csv", ("level", "address", "a", "b", "length"),
                             tree.rows(PARTITION_CSV_MAX_LEVEL))
        self._writer.add_report("partition.json", "partition", {
            "depth": tree.depth,
            "map": tree.circle_map.describe(),
            "distortion": {"min": low, "max": high},
        })

    @log_action_method_call
    def solve(self, arguments: argparse.Namespace) -> None:
        solution = self._solve()
        tree = solution.tree
        rows = (
            (index, left, right, complex(value).real, complex(value).imag)
            for index, (left, right, value) in enumerate(
                zip(tree.endpoints(solution.depth)[:-1], tree.endpoints(solution.depth)[1:], solution.averages)
            )
        )
        self._writer.add_csv("solution.csv", ("index", "a", "b", "re", "im"), rows)
        self._writer.add_csv("solution_haar.csv", ("level", "address", "re", "im"), solution.series.rows())
        results = {
            "beta": solution.beta,
            "depth": solution.depth,
            "method": solution.method,
            "residual_sup": solution.residual_sup,
            "series_terms": solution.series_terms,
            "tail_bound": solution.tail_bound,
            "contraction": solution.contraction,
        }
        if solution.depth > self._config.transfer_level:
            results["obstruction"] = self._transfer().obstruction(solution.v, solution.beta)
        self._writer.add_report("solve.json", "solve", results)

    @log_action_method_call
    def analyze(self, arguments: argparse.Namespace) -> None:
        tree = self._service.tree()
        series = HaarTransform(tree).analyze_input(self._service.right_hand_side(), tree.depth)
        sup_norm = besov_norm(series, self._config.beta, "inf_inf")
        results = {
            "besov_inf_inf": sup_norm.value,
            "besov_one_one": besov_norm(series, self._config.beta, "one_one").value,
            "besov_growth": sup_norm.growth_ratio(),
        }
        if tree.depth >= MIN_DEPTH:
            try:
                estimate = regularity_estimate(series)
                results["regularity"] = {"exponent": estimate.exponent, "stderr": estimate.stderr}
            except DegenerateInput:
                results["regularity"] = None
        self._writer.add_csv("haar.csv", ("level", "address", "re", "im"), series.rows())
        self._writer.add_report("analyze.json", "analyze", results)

    @log_action_method_call
    def fracderiv(self, arguments: argparse.Namespace) -> None:
        solution = self._solve()
        derivative = frac_deriv(solution.series, solution.beta)
        results = {"beta": solution.beta, "residual_sup": solution.residual_sup}
        if solution.depth > MIN_DEPTH:
            # composition with F needs one spare tree level
            truncated = HaarSeries(solution.tree, solution.series.mean, solution.series.details[:-1])
            remainder = chain_remainder(truncated, solution.beta)
            results["chain_remainder"] = {
                "max_coefficient": remainder.max_coefficient,
                "regularity": remainder.regularity.exponent if remainder.regularity is not None else None,
            }
        self._writer.add_csv("fracderiv.csv", ("level", "address", "re", "im"), derivative.rows())
        self._writer.add_report("fracderiv.json", "fracderiv", results)

    @log_action_method_call
    def clt(self, arguments: argparse.Namespace) -> None:
        self._real_beta()
        solution = self._solve()
        level = self._config.clt_level or solution.depth
        result = clt_histogram(solution, level, self._config.samples, self._config.seed,
                               self._config.bins, self._config.threads)
        self._writer.add_csv("histogram.csv", ("bin_left", "bin_right", "count"), result.histogram_rows())
        self._writer.add_report("clt.json", "clt", {
            "level": result.level,
            "samples": result.samples,
            "seed": result.seed,
            "mean": result.mean,
            "variance": result.variance,
            "ks_statistic": result.ks_statistic,
            "coboundary_oscillation_ratio": coboundary_oscillation_ratio(solution),
        })

    @log_action_method_call
    def variance(self, arguments: argparse.Namespace) -> None:
        transfer = self._transfer()
        observable = self._service.observable()
        if observable is None:
            self._real_beta()
            observable = phi_v_input(self._solve())
        estimates = [
            sigma2_green_kubo(transfer, observable, self._config.kmax),
            sigma2_martingale(transfer, observable, self._config.neumann_terms),
        ]
        correlations = estimates[0].diagnostics["correlations"]
        self._writer.add_csv("correlations.csv", ("k", "correlation"), enumerate(correlations))
        self._writer.add_report("variance.json", "variance", {
            "estimates": [
                {"method": estimate.method, "value": estimate.value, "stderr": estimate.stderr}
                for estimate in estimates
            ],
            "h_norm": estimates[1].diagnostics["h_norm"],
        })

    @log_action_method_call
    def classify(self, arguments: argparse.Namespace) -> None:
        report = self._classifier().classify(self._service.right_hand_side(), self._real_beta())
        self._writer.add_csv("clt_trace.csv", ("level", "variance"), enumerate(report.clt_trace, start=1))
        self._writer.add_report("classify.json", "classify", report.to_dict())

    @log_action_method_call
    def sweep_beta(self, arguments: argparse.Namespace) -> None:
        grid = self._config.beta_grid
        if not grid:
            raise ValidationError("sweep-beta needs a non-empty beta_grid")
        spec = self._config.v
        if spec.kind == "coboundary":
            alpha = FourierInput(spec.cosine, spec.sine)
            circle_map = self._service.circle_map()
            v = lambda beta: CoboundaryInput(alpha, circle_map, beta)
        else:
            v = self._service.right_hand_side()
        result = VarianceSweep(self._classifier(), self._config.threads).beta_sweep(v, grid)
        self._writer.add_csv("sweep.csv", ("beta", "sigma2", "stderr"), result.rows())
        self._writer.add_report("sweep.json", "sweep-beta", result.to_dict())

    @log_action_method_call
    def spectrum(self, arguments: argparse.Namespace) -> None:
        betas = self._config.beta_grid or [self._real_beta()]
        report = self._transfer().spectral_report(betas, self._config.pressure_step)
        self._writer.add_csv("spectrum.csv", ("beta", "eigenvalue", "second_modulus"),
                             zip(report.betas, np.real(report.eigenvalues), report.gap_estimates))
        self._writer.add_report("spectrum.json", "spectrum", {
            "betas": report.betas,
            "eigenvalues": np.real(report.eigenvalues),
            "second_modulus": report.gap_estimates,
            "pressure_derivative_check": report.derivative_check,
        })

    @log_action_method_call
    def oracle_check(self, arguments: argparse.Namespace) -> None:
        """Solve on the linear map and compare with the direct Weierstrass or Takagi series."""
        if arguments.oracle is None:
            raise ValidationError("oracle-check needs 'weierstrass' or 'takagi'")
        tree = PartitionTree.build(LinearMap(), self._config.depth)
        if arguments.oracle == "weierstrass":
            a = arguments.a
            if not 0.0 < a < 1.0:
                raise ValidationError(f"Weierstrass amplitude must lie in (0, 1), got {a!r}")
            v, beta = WeierstrassRhsInput(a), -np.log2(a)
            terms = terms_for_tolerance(a, ORACLE_SERIES_TOLERANCE)
            oracle = lambda x: weierstrass_series(x, a, terms)
        else:
            a = 0.5
            v, beta = TakagiTentInput(TAKAGI_SCALE), 1.0
            oracle = lambda x: takagi_series(x, terms_for_tolerance(a, ORACLE_SERIES_TOLERANCE))
        solution = self._solver(tree, ORACLE_SOLVE_TOLERANCE).solve(v, beta)
        points = sample_uniform(self._config.oracle_points, self._config.seed)
        errors = np.abs(solution.evaluate(points) - oracle(points))
        sup_error = float(np.max(errors))
        print(f"{arguments.oracle} sup-error {sup_error:.3e}")
        self._writer.add_report("oracle.json", "oracle-check", {
            "oracle": arguments.oracle,
            "a": a,
            "beta": beta,
            "points": int(points.size),
            "sup_error": sup_error,
            "residual_sup": solution.residual_sup,
        })


def _report_error(error: LaboratoryError) -> int:
    payload = {"error": type(error).__name__, "message": str(error), "exit_code": error.exit_code}
    print(json.dumps(payload), file=sys.stderr)
    return error.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse the command line, run the subcommand and map errors to exit codes.

    Returns:
        int: 0 on success, 2 on invalid input, 3 on numerical failure
    """
    arguments = build_parser().parse_args(argv)
    configure_logging(arguments.verbose)
    version = version_string()
    log_start_up(version, arguments.subcommand)
    try:
        if arguments.threads is not None and arguments.threads < 1:
            raise ConfigurationError(f"threads must be at least 1, got {arguments.threads}")
        service = ExperimentConfigurationService.from_file(
            arguments.config, seed=arguments.seed, threads=arguments.threads, output_dir=arguments.out
        )
        ExperimentRunner(service, version).run(arguments)
    except LaboratoryError as error:
        logger.error("%s failed: %s", arguments.subcommand, error)
        return _report_error(error)
    return 0
