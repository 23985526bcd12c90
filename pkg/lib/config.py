from pathlib import Path
from typing import Literal

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from lib.exceptions import ConfigError
from lib.operators import DiagonalOperator, SectorialOperator, SineSpectralOperator, make_laplacian1d
from lib.solver import SolverConfig, StepMode
from lib.weights import WeightFunction

NAMED_PROFILES = ("poly_x2_1mx",)
LIST_KEYS = ("t", "x", "eigenvalues")
KEY_ALIASES = {"m": "modes"}


def parse_weight(spec: str) -> WeightFunction:
    """Turn ``cos``, ``cos_square``, ``zero``, ``const:c`` or ``poly:a0,a1,...`` into a WeightFunction."""
    spec = spec.strip()
    if spec == "cos":
        return WeightFunction.cos()
    if spec == "cos_square":
        return WeightFunction.cos_square()
    if spec == "zero":
        return WeightFunction.zero()
    kind, _, arguments = spec.partition(":")
    try:
        if kind == "const" and arguments:
            return WeightFunction.constant(float(arguments))
        if kind == "poly" and arguments:
            return WeightFunction.polynomial([float(a) for a in arguments.split(",")])
    except ValueError as e:
        raise ValueError(f"malformed weight '{spec}': {e}") from e
    raise ValueError(f"unknown weight '{spec}'; expected cos, cos_square, zero, const:c or poly:a0,a1,...")


class RunConfig(BaseModel):
    """A fully validated ``solve`` run.

    Attributes:
        operator (str): ``sine`` (spectral Dirichlet Laplacian), ``laplacian`` (finite differences) or ``diagonal``.
        modes (int | None): Number of sine modes or interior grid points; key ``m`` is an alias.
        eigenvalues (tuple | None): Spectrum of the diagonal operator.
        T (float): Horizon of the nonlocal condition.
        weight (str): Weight spec, see ``parse_weight``.
        u0 (str): ``sine:k``, ``poly_x2_1mx`` or the path of a CSV file with a ``value`` column.
        t (tuple): Evaluation times.
        x (tuple | None): Evaluation points; component indices for the diagonal operator.
        out (str | None): CSV destination, stdout when unset.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    operator: Literal["sine", "laplacian", "diagonal"] = "sine"
    modes: int | None = Field(default=None, ge=1)
    eigenvalues: tuple[float, ...] | None = None
    T: float = Field(gt=0.0)
    weight: str = "zero"
    u0: str
    n: int = Field(default=16, ge=0)
    N: int = Field(default=32, ge=0)
    alpha: float = Field(default=0.5, gt=0.0, lt=1.0)
    rho1: float = Field(default=0.0, ge=0.0)
    t: tuple[float, ...] = (1.0,)
    x: tuple[float, ...] | None = None
    step_mode: StepMode = StepMode.UNIFORM
    c1: float = Field(default=1.0, gt=0.0)
    c0: float = Field(default=1.0, gt=0.0)
    workers: int = Field(default=1, ge=1)
    symmetry: bool = True
    out: str | None = None

    @field_validator("weight")
    @classmethod
    def _check_weight(cls, value: str) -> str:
        parse_weight(value)
        return value

    @field_validator("t")
    @classmethod
    def _check_times(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if not value or any(not t >= 0 for t in value):
            raise ValueError("t must be a non-empty list of nonnegative times")
        return value

    @field_validator("u0")
    @classmethod
    def _check_u0(cls, value: str) -> str:
        value = value.strip()
        if value in NAMED_PROFILES:
            return value
        kind, _, index = value.partition(":")
        if kind == "sine":
            if not index.isdigit() or int(index) < 1:
                raise ValueError(f"sine profile needs a positive mode number, got '{value}'")
            return value
        if not Path(value).is_file():
            raise ValueError(f"u0 is neither a named profile nor an existing file: '{value}'")
        return value

    @model_validator(mode="after")
    def _check_operator(self) -> "RunConfig":
        if self.operator == "diagonal":
            if not self.eigenvalues:
                raise ValueError("the diagonal operator needs eigenvalues")
        elif self.modes is None:
            raise ValueError(f"the {self.operator} operator needs modes (or m)")
        elif self.operator == "laplacian" and self.modes < 2:
            raise ValueError("the laplacian operator needs m >= 2")
        if self.step_mode is StepMode.LARGE_T and self.N < 2:
            raise ValueError(f"the large_t step needs N >= 2, got N={self.N}")
        return self

    def weight_function(self) -> WeightFunction:  # noqa: D102
        return parse_weight(self.weight)

    def build_operator(self) -> SectorialOperator:
        """Instantiate the configured operator."""
        if self.operator == "diagonal":
            return DiagonalOperator(self.eigenvalues)
        if self.operator == "laplacian":
            return make_laplacian1d(self.modes)
        return SineSpectralOperator(self.modes)

    def solver_config(self) -> SolverConfig:  # noqa: D102
        return SolverConfig(
            n=self.n,
            N=self.N,
            rho1=self.rho1,
            step_mode=self.step_mode,
            c1=self.c1,
            c0=self.c0,
            use_symmetry=self.symmetry,
            workers=self.workers,
        )


def parse_config(text: str) -> RunConfig:
    """Parse line-oriented ``key = value`` text into a RunConfig.

    ``#`` starts a comment, blank lines are skipped, ``t``, ``x`` and ``eigenvalues`` take
    comma-separated lists. Unknown and repeated keys are rejected.

    Args:
        text (str): Contents of the config file.

    Returns:
        RunConfig: The validated configuration.

    Raises:
        ConfigError: Naming the line and key of the first offending entry.
    """
    values: dict[str, str | list[str]] = {}
    lines: dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError("expected 'key = value'", line=number)
        key = KEY_ALIASES.get(key, key)
        if key not in RunConfig.model_fields:
            raise ConfigError("unknown key", line=number, key=key)
        if key in values:
            raise ConfigError(f"duplicate key, first set on line {lines[key]}", line=number, key=key)
        if not value:
            raise ConfigError("empty value", line=number, key=key)
        values[key] = [v.strip() for v in value.split(",")] if key in LIST_KEYS else value
        lines[key] = number

    try:
        config = RunConfig(**values)
    except ValidationError as e:
        error = e.errors()[0]
        key = str(error["loc"][0]) if error["loc"] else None
        logger.error(f"Invalid configuration: {e}")
        raise ConfigError(error["msg"], line=lines.get(key), key=key) from e
    logger.info("Successfully parsed configuration.")
    return config


def read_config(path: str) -> RunConfig:
    """Read and parse a config file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"Cannot read config file {path}.")
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    return parse_config(text)
