from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.statistics.dichotomy import DichotomyThresholds


class MapSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: Literal["linear", "perturbed_doubling", "custom_lift"] = "perturbed_doubling"
    epsilon: float = 0.1
    sine: List[float] = Field(default_factory=list)
    cosine: List[float] = Field(default_factory=list)


class FunctionSpec(BaseModel):
    """
    A right-hand side or observable.

    fourier and coboundary read the cosine/sine coefficients (index k is
    frequency k); weierstrass_rhs and weierstrass read a; takagi_tent reads
    scale; haar_csv reads a coefficient dump written by the analyze subcommand.
    """
    model_config = ConfigDict(extra="forbid")

    kind: Literal["fourier", "takagi_tent", "weierstrass_rhs", "weierstrass", "takagi", "coboundary", "haar_csv"]
    cosine: List[float] = Field(default_factory=list)
    sine: List[float] = Field(default_factory=list)
    a: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    terms: int = Field(default=60, ge=1, le=1000)
    scale: float = 1.0
    path: Optional[str] = None

    @model_validator(mode="after")
    def _check_parameters(self) -> "FunctionSpec":
        if self.kind in ("weierstrass_rhs", "weierstrass") and self.a is None:
            raise ValueError(f"{self.kind} needs the amplitude 'a'")
        if self.kind == "haar_csv" and not self.path:
            raise ValueError("haar_csv needs 'path'")
        return self


class ClassifierThresholds(BaseModel):
    model_config = ConfigDict(extra="forbid")

    zero_variance: float = Field(default=1e-3, gt=0.0)
    stderr_factor: float = Field(default=3.0, gt=0.0)
    irregular_factor: float = Field(default=10.0, gt=1.0)
    decay_factor: float = Field(default=4.0, gt=1.0)
    band_factor: float = Field(default=2.0, gt=1.0)
    gamma: float = Field(default=1.0, gt=0.0, le=1.0)

    def to_thresholds(self) -> DichotomyThresholds:
        return DichotomyThresholds(**self.model_dump())


class ExperimentConfig(BaseModel):
    """
    One experiment; every field has a default so that the resolved
    configuration can be written back into reports.
    """
    model_config = ConfigDict(extra="forbid")

    map: MapSpec = Field(default_factory=MapSpec)
    v: FunctionSpec = Field(default_factory=lambda: FunctionSpec(kind="fourier", sine=[0.0, 1.0]))
    observable: Optional[FunctionSpec] = None
    beta: float = 0.39
    beta_imag: float = 0.0
    beta_grid: List[float] = Field(default_factory=list)
    depth: int = Field(default=17, ge=1, le=26)
    transfer_level: int = Field(default=12, ge=1, le=25)
    method: Literal["iteration", "series"] = "iteration"
    tol: float = Field(default=1e-9, gt=0.0)
    max_terms: int = Field(default=2000, ge=1)
    kmax: int = Field(default=40, ge=1)
    neumann_terms: int = Field(default=60, ge=1)
    clt_level: Optional[int] = Field(default=None, ge=1)
    samples: int = Field(default=100000, ge=1)
    seed: int = Field(default=42, ge=0)
    bins: int = Field(default=60, ge=1)
    threads: int = Field(default=1, ge=1)
    pressure_step: float = Field(default=1e-3, ge=1e-4, le=1e-2)
    oracle_points: int = Field(default=10000, ge=1)
    thresholds: ClassifierThresholds = Field(default_factory=ClassifierThresholds)
    output_dir: str = "out"

    @model_validator(mode="after")
    def _check_levels(self) -> "ExperimentConfig":
        if self.transfer_level >= self.depth:
            raise ValueError(f"transfer_level {self.transfer_level} must be below depth {self.depth}")
        if self.clt_level is not None and self.clt_level > self.depth:
            raise ValueError(f"clt_level {self.clt_level} exceeds depth {self.depth}")
        return self

    @property
    def beta_value(self):
        return complex(self.beta, self.beta_imag) if self.beta_imag else self.beta
