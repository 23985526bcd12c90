import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd
from loguru import logger

from lib.config import RunConfig
from lib.data_loading import build_initial_data, sine_coefficients_poly_x2_1mx
from lib.data_schema import results_frame
from lib.evaluation import fit_exponential_convergence
from lib.operators import DiagonalOperator, SineSpectralOperator
from lib.oracle import cosine_transform, reference_solution
from lib.solver import NonlocalProblem, SolverConfig, StepMode, solve_at, solve_many
from lib.weights import WeightFunction

EXAMPLE_2_MODES = 200


@dataclass(frozen=True)
class Example:
    """A table example: the problem, where it is sampled and its exact solution when known."""

    problem: NonlocalProblem
    x: float
    t: float
    exact: Callable[[float, float], float] | None


def example_1_coefficient() -> float:
    """u0 coefficient (pi^4 + pi^2 + 1 + exp(-pi^3/2)) / (pi^4 + 1) of exact solution exp(-pi^2 t) sin(pi x)."""
    return 1.0 + cosine_transform(math.pi**2, math.pi / 2)


def example_problem(example: int) -> Example:
    """Example 1: w = cos s, T = pi/2, u = exp(-pi^2 t) sin(pi x). Example 2: w = cos s^2, T = pi/2, u0 = (1-x) x^2."""
    if example == 1:
        op = SineSpectralOperator(1)
        problem = NonlocalProblem(op=op, T=math.pi / 2, w=WeightFunction.cos(), u0=np.array([example_1_coefficient()]))
        return Example(
            problem=problem,
            x=0.5,
            t=1.0,
            exact=lambda x, t: math.exp(-math.pi**2 * t) * math.sin(math.pi * x),
        )
    if example == 2:
        op = SineSpectralOperator(EXAMPLE_2_MODES)
        u0 = sine_coefficients_poly_x2_1mx(EXAMPLE_2_MODES)
        problem = NonlocalProblem(op=op, T=math.pi / 2, w=WeightFunction.cos_square(), u0=u0)
        return Example(problem=problem, x=0.4, t=1.0, exact=None)
    logger.error(f"Unknown example {example}.")
    raise ValueError(f"example must be 1 or 2, got {example}")


def _point_value(example: Example, config: SolverConfig) -> tuple[float, float]:
    sample = solve_at(example.problem, config, example.t)
    return float(example.problem.op.evaluate(sample.value, example.x)), sample.grid.h


def run_reproduction(
    example: int, n: int, N: int, step_mode: StepMode = StepMode.SCALED, c0: float = 1.0
) -> pd.DataFrame:
    """One table row: the solution at the example's sample point and its error.

    Example 1 is compared with its exact solution. Example 2 has none and is compared with a run
    on the finer discretisation (max(2n, 64), max(2N, 512)).

    Args:
        example (int): 1 or 2.
        n (int): Gauss order.
        N (int): Sinc truncation.
        step_mode (StepMode): Step rule; the tables use the scaled rule with c0 = 1.
        c0 (float): Constant of the scaled rule.

    Returns:
        pd.DataFrame: One validated result row.
    """
    ex = example_problem(example)
    config = SolverConfig(n=n, N=N, step_mode=step_mode, c0=c0)
    value, h = _point_value(ex, config)
    if ex.exact is not None:
        reference = ex.exact(ex.x, ex.t)
    else:
        fine = config.model_copy(update={"n": max(2 * n, 64), "N": max(2 * N, 512)})
        reference, _ = _point_value(ex, fine)
    row = {"n": n, "N": N, "t": ex.t, "x": ex.x, "value": value, "abs_error": abs(value - reference)}
    logger.info(f"Successfully reproduced example {example} with n={n}, N={N}, h={h:.6g}.")
    return results_frame([row])


def run_convergence(
    example: int, n: int, Ns: Sequence[int], step_mode: StepMode = StepMode.SCALED
) -> tuple[pd.DataFrame, dict]:
    """Error of Example 1 for each N, with the least-squares fit of log(error) against sqrt(N+1)."""
    if example != 1:
        raise ValueError(f"convergence studies need an exact solution; only example 1 has one, got {example}")
    frames = [run_reproduction(example, n, N, step_mode=step_mode) for N in Ns]
    df = pd.concat(frames, ignore_index=True)
    fit = fit_exponential_convergence(df["N"].to_numpy(), df["abs_error"].to_numpy())
    return df, fit


def run_solve(config: RunConfig) -> pd.DataFrame:
    """Solve the configured problem and tabulate u(t, x) for every requested t and x.

    Diagonal and sine-spectral problems are also evaluated mode by mode on the reference path and
    carry the absolute difference; finite-difference runs leave ``abs_error`` empty.
    """
    op = config.build_operator()
    u0 = build_initial_data(config.u0, op)
    problem = NonlocalProblem(op=op, T=config.T, w=config.weight_function(), u0=u0, alpha=config.alpha)
    samples = solve_many(problem, config.solver_config(), config.t)

    diagonal_basis = isinstance(op, DiagonalOperator) and not isinstance(op, SineSpectralOperator)
    if config.x is not None:
        xs = list(config.x)
    elif diagonal_basis:
        xs = [float(i) for i in range(op.dim)]
    else:
        xs = [0.5]
    if diagonal_basis and any(not (x.is_integer() and 0 <= x < op.dim) for x in xs):
        logger.error(f"x={xs} are not component indices of a {op.dim}-dimensional operator.")
        raise ValueError(f"for the diagonal operator x must list component indices in [0, {op.dim})")

    rows = []
    for sample in samples:
        reference = (
            reference_solution(op, problem.w, problem.T, problem.u0, sample.t)
            if isinstance(op, DiagonalOperator)
            else None
        )
        for x in xs:
            if diagonal_basis:
                value = float(sample.value[int(x)])
                exact = None if reference is None else float(reference[int(x)])
            else:
                value = float(op.evaluate(sample.value, x))
                exact = None if reference is None else float(op.evaluate(reference, x))
            rows.append(
                {
                    "n": config.n,
                    "N": config.N,
                    "t": sample.t,
                    "x": x,
                    "value": value,
                    "abs_error": float("nan") if exact is None else abs(value - exact),
                }
            )
    logger.info(f"Successfully solved {len(samples)} time(s) at {len(xs)} point(s).")
    return results_frame(rows)
