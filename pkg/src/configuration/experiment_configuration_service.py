import csv
import json
import logging
from pathlib import Path
from typing import Optional

import pydantic

from src.configuration.experiment_configuration import ExperimentConfig, FunctionSpec
from src.dynamics.maps.circle_map import CircleMap
from src.dynamics.maps.circle_map_factory import CircleMapFactory
from src.dynamics.partition.partition_tree import PartitionTree
from src.exceptions import ConfigurationError, ValidationError
from src.haar.haar_series import HaarSeries
from src.haar.inputs.function_input import FunctionInput
from src.haar.inputs.function_input_factory import FunctionInputFactory

logger = logging.getLogger(__name__)


class ExperimentConfigurationService:
    """
    Loads experiment configurations and builds the domain objects they describe.

    Attributes:
        _config (ExperimentConfig): The resolved configuration
        _map (CircleMap): Built on first use
        _tree (PartitionTree): Built on first use
    """

    def __init__(self, config: ExperimentConfig):
        self._config = config
        self._map: Optional[CircleMap] = None
        self._tree: Optional[PartitionTree] = None

    @property
    def config(self) -> ExperimentConfig:
        return self._config

    @classmethod
    def from_file(cls, path: Optional[str], **overrides) -> "ExperimentConfigurationService":
        """
        Read a JSON configuration and apply command-line overrides.

        Args:
            path: JSON file, or None for the defaults
            overrides: seed, threads and output_dir values; None leaves the field as configured

        Raises:
            ConfigurationError: If the file is unreadable or fails validation
        """
        raw = {}
        if path is not None:
            try:
                raw = json.loads(Path(path).read_text())
            except (OSError, json.JSONDecodeError) as error:
                raise ConfigurationError(f"cannot read configuration {path}: {error}") from error
            if not isinstance(raw, dict):
                raise ConfigurationError(f"configuration {path} must hold a JSON object")
        raw.update({key: value for key, value in overrides.items() if value is not None})
        return cls(cls.validate(raw))

    @staticmethod
    def validate(raw: dict) -> ExperimentConfig:
        try:
            return ExperimentConfig.model_validate(raw)
        except pydantic.ValidationError as error:
            raise ConfigurationError(f"invalid configuration: {error}") from error

    def resolved(self) -> dict:
        return self._config.model_dump(mode="json")

    def circle_map(self) -> CircleMap:
        if self._map is None:
            spec = self._config.map
            try:
                self._map = CircleMapFactory.create_map(spec.family, spec.epsilon, spec.sine, spec.cosine)
            except ValidationError as error:
                raise ConfigurationError(f"invalid map: {error}") from error
        return self._map

    def tree(self) -> PartitionTree:
        if self._tree is None:
            self._tree = PartitionTree.build(self.circle_map(), self._config.depth)
        return self._tree

    def right_hand_side(self) -> FunctionInput:
        return self.function_input(self._config.v)

    def observable(self) -> Optional[FunctionInput]:
        spec = self._config.observable
        return self.function_input(spec) if spec is not None else None

    def function_input(self, spec: FunctionSpec) -> FunctionInput:
        """Build the input a FunctionSpec describes, reading coefficient dumps when needed."""
        if spec.kind == "haar_csv":
            return FunctionInputFactory.create_input("haar_coeffs", series=self.read_series(spec.path))
        try:
            return FunctionInputFactory.create_input(
                spec.kind,
                cosine=spec.cosine,
                sine=spec.sine,
                a=spec.a,
                terms=spec.terms,
                scale=spec.scale,
                circle_map=self.circle_map(),
                beta=self._config.beta,
            )
        except ValidationError as error:
            raise ConfigurationError(f"invalid function input: {error}") from error

    def read_series(self, path: str) -> HaarSeries:
        """Read a level,address,re,im coefficient dump onto the configured tree."""
        try:
            with open(path, newline="") as handle:
                rows = [(row["level"], row["address"], row["re"], row["im"]) for row in csv.DictReader(handle)]
        except (OSError, KeyError, csv.Error) as error:
            raise ConfigurationError(f"cannot read Haar coefficients from {path}: {error}") from error
        logger.info("read %d Haar coefficients from %s", len(rows), path)
        try:
            return HaarSeries.from_rows(self.tree(), rows)
        except ValidationError as error:
            raise ConfigurationError(f"invalid Haar coefficients in {path}: {error}") from error
