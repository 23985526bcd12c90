import os
import sys

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), "../"))

import math

from lib.config import parse_config, parse_weight, read_config
from lib.exceptions import ConfigError
from lib.operators import DiagonalOperator, Laplacian1D, SineSpectralOperator
from lib.solver import StepMode
from lib.weights import WeightKind

BASE = "operator = sine\nmodes = 1\nu0 = sine:1\n"


def test_parse_full_config() -> None:  # noqa: D103
    text = (
        "# example 1\n"
        "operator = sine\n"
        "m = 4\n"
        "T = 1.5707963267948966\n"
        "weight = cos   # w(s) = cos s\n"
        "u0 = sine:1\n"
        "\n"
        "n = 8\n"
        "N = 32\n"
        "alpha = 0.25\n"
        "t = 0.5, 1.0\n"
        "x = 0.5\n"
        "step_mode = scaled\n"
        "c0 = 1.0\n"
        "workers = 2\n"
        "symmetry = false\n"
        "out = result.csv\n"
    )
    config = parse_config(text)
    assert config.T == math.pi / 2
    assert config.modes == 4
    assert config.weight_function().kind is WeightKind.COS
    assert config.t == (0.5, 1.0)
    assert config.x == (0.5,)
    assert config.step_mode is StepMode.SCALED
    assert config.out == "result.csv"
    solver_config = config.solver_config()
    assert (solver_config.n, solver_config.N, solver_config.workers) == (8, 32, 2)
    assert not solver_config.use_symmetry
    assert solver_config.alpha is None


def test_weight_cos_square() -> None:  # noqa: D103
    config = parse_config(BASE + "T = 1\nweight = cos_square\n")
    assert config.weight_function().kind is WeightKind.COS_SQUARE


@pytest.mark.parametrize(
    "spec, kind, coefficients",
    [
        ("zero", WeightKind.CONSTANT, (0.0,)),
        ("const:0.25", WeightKind.CONSTANT, (0.25,)),
        ("poly:1, 0, -0.5", WeightKind.POLYNOMIAL, (1.0, 0.0, -0.5)),
    ],
)
def test_parse_weight(spec: str, kind: WeightKind, coefficients: tuple) -> None:  # noqa: D103
    w = parse_weight(spec)
    assert w.kind is kind
    assert w.coefficients == coefficients


@pytest.mark.parametrize("spec", ["sin", "const:", "poly:a,b", "const:x"])
def test_parse_weight_rejects(spec: str) -> None:  # noqa: D103
    with pytest.raises(ValueError):
        parse_weight(spec)


def test_negative_N_names_key() -> None:  # noqa: D103
    with pytest.raises(ConfigError) as excinfo:
        parse_config(BASE + "T = 1\nN = -1\n")
    assert excinfo.value.key == "N"
    assert excinfo.value.line == 5
    assert "greater than or equal to 0" in str(excinfo.value)


@pytest.mark.parametrize(
    "text, line, key",
    [
        (BASE + "T = 1\ncolour = red\n", 5, "colour"),
        (BASE + "T = 1\nT = 2\n", 5, "T"),
        (BASE + "T = 1\nm = 3\n", 5, "modes"),
        (BASE + "T = 1\njust text\n", 5, None),
        (BASE + "T =\n", 4, "T"),
        (BASE + "T = 1\nweight = sin\n", 5, "weight"),
        (BASE + "T = 1\nt = 1, -2\n", 5, "t"),
        (BASE + "T = 0\n", 4, "T"),
    ],
)
def test_malformed_entries(text: str, line: int, key: str | None) -> None:  # noqa: D103
    with pytest.raises(ConfigError) as excinfo:
        parse_config(text)
    assert excinfo.value.line == line
    assert excinfo.value.key == key


def test_missing_required_key() -> None:  # noqa: D103
    with pytest.raises(ConfigError, match="T"):
        parse_config(BASE)


def test_u0_file_must_exist(tmp_path) -> None:  # noqa: D103, ANN001
    with pytest.raises(ConfigError, match="u0"):
        parse_config(f"operator = laplacian\nm = 4\nT = 1\nu0 = {tmp_path / 'missing.csv'}\n")
    path = tmp_path / "u0.csv"
    path.write_text("value\n1\n2\n3\n4\n")
    assert parse_config(f"operator = laplacian\nm = 4\nT = 1\nu0 = {path}\n").u0 == str(path)


@pytest.mark.parametrize(
    "text",
    [
        "operator = diagonal\nT = 1\nu0 = sine:1\n",
        "operator = sine\nT = 1\nu0 = sine:1\n",
        "operator = laplacian\nm = 1\nT = 1\nu0 = sine:1\n",
        "operator = sine\nm = 2\nT = 1\nu0 = sine:0\n",
        "operator = sine\nm = 2\nT = 1\nu0 = sine:1\nstep_mode = large_t\nN = 1\n",
    ],
)
def test_inconsistent_configs(text: str) -> None:  # noqa: D103
    with pytest.raises(ConfigError):
        parse_config(text)


@pytest.mark.parametrize(
    "text, op_type, dim",
    [
        ("operator = diagonal\neigenvalues = 1, 4, 9\nT = 1\nu0 = sine:2\n", DiagonalOperator, 3),
        ("operator = laplacian\nm = 16\nT = 1\nu0 = sine:1\n", Laplacian1D, 16),
        ("operator = sine\nmodes = 8\nT = 1\nu0 = poly_x2_1mx\n", SineSpectralOperator, 8),
    ],
)
def test_build_operator(text: str, op_type: type, dim: int) -> None:  # noqa: D103
    op = parse_config(text).build_operator()
    assert isinstance(op, op_type)
    assert op.dim == dim


def test_read_config(tmp_path) -> None:  # noqa: D103, ANN001
    path = tmp_path / "run.cfg"
    path.write_text(BASE + "T = 2\n", encoding="utf-8")
    assert read_config(str(path)).T == 2.0
    with pytest.raises(ConfigError, match="cannot read"):
        read_config(str(tmp_path / "absent.cfg"))
