import os
import sys

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), "../"))

import ast
import math

import numpy as np

import lib.oracle
from lib.data_loading import sine_coefficients_poly_x2_1mx
from lib.exceptions import NumericalFailureError
from lib.operators import DiagonalOperator, Laplacian1D, SineSpectralOperator
from lib.oracle import (
    ModeProblem,
    _base_mesh,
    _composite_gauss,
    cosine_transform,
    mode_reference,
    nonlocal_transform,
    reference_solution,
)
from lib.weights import WeightFunction

EXAMPLE_1_C0 = 1.0 + cosine_transform(math.pi**2, math.pi / 2)


@pytest.mark.parametrize("lam, t", [(1.0, 0.0), (3.0, 0.7), (50.0, 2.0)])
def test_local_mode(lam: float, t: float) -> None:  # noqa: D103
    p = ModeProblem(lam=lam, w=WeightFunction.zero(), T=1.0, c0=2.0)
    assert mode_reference(p, t) == pytest.approx(2.0 * math.exp(-lam * t), rel=1e-15)


def test_example_1_mode() -> None:  # noqa: D103
    p = ModeProblem(lam=math.pi**2, w=WeightFunction.cos(), T=math.pi / 2, c0=EXAMPLE_1_C0)
    assert mode_reference(p, 1.0) == pytest.approx(math.exp(-math.pi**2), rel=1e-14)


def test_example_1_coefficient_closed_form() -> None:  # noqa: D103
    pi = math.pi
    expected = (pi**4 + pi**2 + 1.0 + math.exp(-(pi**3) / 2)) / (pi**4 + 1.0)
    assert EXAMPLE_1_C0 == pytest.approx(expected, rel=1e-15)


def test_mode_at_time_zero() -> None:  # noqa: D103
    p = ModeProblem(lam=4.0, w=WeightFunction.cos(), T=1.0, c0=1.5)
    J = cosine_transform(4.0, 1.0)
    assert mode_reference(p, 0.0) == pytest.approx(1.5 / (1.0 + J), rel=1e-14)


@pytest.mark.parametrize("lam", [1.0, math.pi**2, 100.0])
def test_adaptive_transform_matches_closed_form(lam: float) -> None:  # noqa: D103
    J, level = nonlocal_transform(WeightFunction.cos(), math.pi / 2, lam)
    assert level >= 1
    assert J == pytest.approx(cosine_transform(lam, math.pi / 2), rel=1e-14)


@pytest.mark.parametrize("lam", [0.5, 20.0, 4.0e5])
def test_adaptive_transform_of_constant(lam: float) -> None:  # noqa: D103
    J, _ = nonlocal_transform(WeightFunction.constant(0.3), 2.0, lam)
    assert J == pytest.approx(0.3 * (-math.expm1(-2.0 * lam)) / lam, rel=1e-13)


def test_adaptive_transform_is_self_consistent() -> None:  # noqa: D103
    w = WeightFunction.cos_square()
    J, level = nonlocal_transform(w, math.pi / 2, 7.0)
    mesh = _base_mesh(math.pi / 2, 7.0)
    for _ in range(level + 1):
        mesh = np.sort(np.concatenate((mesh, (mesh[:-1] + mesh[1:]) / 2)))
    finer = _composite_gauss(w, 7.0, mesh)
    assert abs(finer - J) <= 1e-13 * abs(J)


def test_refinement_budget_exhausted() -> None:  # noqa: D103
    step = WeightFunction.from_callable(lambda s: np.where(s < 1.0 / 3.0, 1.0, 0.0), sup_norm_hint=1.0)
    with pytest.raises(NumericalFailureError, match="converge"):
        nonlocal_transform(step, 1.0, 1.0, max_halvings=2)


def test_invalid_mode_problem() -> None:  # noqa: D103
    with pytest.raises(ValueError):
        ModeProblem(lam=0.0, w=WeightFunction.zero(), T=1.0, c0=1.0)
    with pytest.raises(ValueError):
        mode_reference(ModeProblem(lam=1.0, w=WeightFunction.zero(), T=1.0, c0=1.0), -1.0)


def test_single_mode_embedding() -> None:  # noqa: D103
    op = DiagonalOperator([1.0, 2.0, 3.0])
    w = WeightFunction.constant(0.2)
    values = reference_solution(op, w, 1.0, np.array([0.0, 1.5, 0.0]), 0.4)
    expected = mode_reference(ModeProblem(lam=2.0, w=w, T=1.0, c0=1.5), 0.4)
    np.testing.assert_array_equal(values, [0.0, expected, 0.0])


def test_example_1_solution() -> None:  # noqa: D103
    op = SineSpectralOperator(1)
    coefficients = reference_solution(op, WeightFunction.cos(), math.pi / 2, np.array([EXAMPLE_1_C0]), 1.0)
    exact = math.exp(-math.pi**2) * math.sin(math.pi * 0.5)
    assert abs(op.evaluate(coefficients, 0.5) - exact) <= 1e-14


def test_example_2_truncation_is_stable() -> None:  # noqa: D103
    values = []
    for M in (200, 400):
        op = SineSpectralOperator(M)
        coefficients = reference_solution(
            op, WeightFunction.cos_square(), math.pi / 2, sine_coefficients_poly_x2_1mx(M), 1.0
        )
        values.append(float(op.evaluate(coefficients, 0.4)))
    assert abs(values[0] - values[1]) <= 1e-16
    assert values[0] == pytest.approx(5.763e-6, rel=1e-3)


def test_rejects_non_diagonal_operator() -> None:  # noqa: D103
    with pytest.raises(TypeError, match="diagonal"):
        reference_solution(Laplacian1D(4), WeightFunction.zero(), 1.0, np.ones(4), 1.0)


def test_oracle_is_independent_of_the_contour_method() -> None:  # noqa: D103
    tree = ast.parse(open(lib.oracle.__file__, encoding="utf-8").read())
    imported = {node.module for node in ast.walk(tree) if isinstance(node, ast.ImportFrom)}
    imported |= {alias.name for node in ast.walk(tree) if isinstance(node, ast.Import) for alias in node.names}
    assert not imported & {"lib.contour", "lib.quadrature", "lib.solver"}
