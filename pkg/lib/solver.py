import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator

from lib.contour import Contour, contour_point, make_integration_contour
from lib.exceptions import ExistenceConditionError, NumericalFailureError
from lib.operators import SectorialOperator
from lib.quadrature import (
    GaussRule,
    WeightFunction,
    gauss_legendre,
    nonlocal_integral,
    sinc_step_large_t,
    sinc_step_scaled,
    sinc_step_uniform,
)

DENOMINATOR_TOL = 1e-13
IMAG_RESIDUAL_RTOL = 1e-8
TWO_PI_I = 2j * math.pi


class StepMode(str, Enum):
    """Rule choosing the Sinc step h from N."""

    UNIFORM = "uniform"
    LARGE_T = "large_t"
    SCALED = "scaled"


class SolverConfig(BaseModel):
    """Discretisation parameters of the contour quadrature.

    Attributes:
        n (int): Gauss order; the nonlocal integral uses n+1 points.
        N (int): Sinc truncation; the quadrature has 2N+1 terms.
        rho1 (float): Inner shift of the contour, 0 <= rho1 < rho0.
        step_mode (StepMode): ``uniform`` h = sqrt(pi d1 / (alpha (N+1))), ``large_t`` h = c1 ln N / N,
            ``scaled`` h = c0 / sqrt(N+1).
        alpha (float | None): Regularity hint of the uniform rule; the problem's own hint when None.
        c1 (float): Constant of the large-t rule.
        c0 (float): Constant of the scaled rule.
        use_symmetry (bool): Fold the sum over conjugate node pairs (N+1 resolvent solves instead of 2N+1).
        workers (int): Threads used for the resolvent solves.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(default=16, ge=0)
    N: int = Field(default=32, ge=0)
    rho1: float = Field(default=0.0, ge=0.0)
    step_mode: StepMode = StepMode.UNIFORM
    alpha: float | None = Field(default=None, gt=0.0, lt=1.0)
    c1: float = Field(default=1.0, gt=0.0)
    c0: float = Field(default=1.0, gt=0.0)
    use_symmetry: bool = True
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_large_t(self) -> "SolverConfig":
        if self.step_mode is StepMode.LARGE_T and self.N < 2:
            raise ValueError(f"the large_t step needs N >= 2, got N={self.N}")
        return self

    def step_size(self, d1: float, alpha: float) -> float:
        """Sinc step for a contour with strip width d1."""
        if self.step_mode is StepMode.LARGE_T:
            return sinc_step_large_t(self.N, self.c1)
        if self.step_mode is StepMode.SCALED:
            return sinc_step_scaled(self.N, self.c0)
        return sinc_step_uniform(d1, self.alpha if self.alpha is not None else alpha, self.N)


@dataclass(frozen=True)
class NonlocalProblem:
    """u' + A u = 0 on [0, T] with u(0) + int_0^T w(s) u(s) ds = u0.

    Attributes:
        op (SectorialOperator): The operator A.
        T (float): Horizon of the nonlocal condition.
        w (WeightFunction): Weight of the nonlocal condition.
        u0 (np.ndarray): Right-hand side of the condition, real, length op.dim.
        alpha (float): Regularity hint, u0 in D(A^alpha), used by the uniform step rule.
    """

    op: SectorialOperator
    T: float
    w: WeightFunction
    u0: np.ndarray
    alpha: float = 0.5

    def __post_init__(self) -> None:  # noqa: D105
        if not (math.isfinite(self.T) and self.T > 0):
            raise ValueError(f"T must be positive, got {self.T}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        u0 = np.asarray(self.u0, dtype=float)
        if u0.shape != (self.op.dim,):
            logger.error(f"u0 of shape {u0.shape} does not match operator dimension {self.op.dim}.")
            raise ValueError(f"u0 must have length {self.op.dim}, got shape {u0.shape}")
        u0.setflags(write=False)
        object.__setattr__(self, "u0", u0)


@dataclass(frozen=True)
class ConditionReport:
    """Sufficient existence conditions evaluated on a problem and its contour."""

    a_I: float
    w_sup: float
    w_sup_estimated: bool
    sharp_ok: bool
    rough_ok: bool
    self_adjoint_ok: bool | None


@dataclass(frozen=True)
class SincGrid:
    """Discretisation actually used for a sample."""

    h: float
    N: int
    n: int


@dataclass(frozen=True)
class SolutionSample:
    """Approximation u_{n,N}(t) with its diagnostics."""

    t: float
    value_complex: np.ndarray
    value: np.ndarray
    imag_residual: float
    report: ConditionReport
    grid: SincGrid


def check_existence(problem: NonlocalProblem, contour: Contour) -> ConditionReport:
    """Evaluate the sharp (||w|| < a_I), rough (||w|| <= 1/T) and self-adjoint (||w|| < rho0/sqrt 2) conditions.

    Args:
        problem (NonlocalProblem): The problem.
        contour (Contour): Contour built from ``problem.op.spectral``.

    Returns:
        ConditionReport: All condition flags; solving needs ``sharp_ok``.
    """
    sup = problem.w.sup_norm(problem.T)
    report = ConditionReport(
        a_I=contour.a_I,
        w_sup=sup.value,
        w_sup_estimated=sup.estimated,
        sharp_ok=sup.value < contour.a_I,
        rough_ok=sup.value <= 1.0 / problem.T,
        self_adjoint_ok=sup.value < problem.op.spectral.rho0 / math.sqrt(2.0) if problem.op.self_adjoint else None,
    )
    if report.sharp_ok and not report.rough_ok:
        logger.warning(
            f"||w||={report.w_sup:.6g} exceeds 1/T={1.0 / problem.T:.6g}: the Gauss error estimate assumes "
            f"the rough condition; proceeding on the sharp one (||w|| < a_I={report.a_I:.6g})."
        )
    return report


def _denominator(rule: GaussRule, problem: NonlocalProblem, z: complex | np.ndarray) -> complex | np.ndarray:
    denominator = 1.0 + nonlocal_integral(rule, problem.w, problem.T, z)
    if np.any(np.abs(denominator) < DENOMINATOR_TOL):
        logger.error("Nonlocal denominator 1 + I_n(z) collapsed on the contour.")
        raise NumericalFailureError("denominator 1 + I_n(z) vanishes on the contour; existence condition violated")
    return denominator


def integrand_eval(
    problem: NonlocalProblem, contour: Contour, rule: GaussRule, t: float, zeta: float
) -> np.ndarray:
    """Integrand (1/2 pi i) exp(-z t) [1 + I_n(z)]^(-1) z'(zeta) R1(z) u0 at z = z(zeta).

    Args:
        problem (NonlocalProblem): The problem.
        contour (Contour): Integration contour.
        rule (GaussRule): Gauss rule for the nonlocal integral.
        t (float): Time, t >= 0.
        zeta (float): Contour parameter.

    Returns:
        np.ndarray: Complex vector of length ``problem.op.dim``.

    Raises:
        NumericalFailureError: If |1 + I_n(z)| < 1e-13.
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    point = contour_point(contour, zeta)
    denominator = _denominator(rule, problem, point.z)
    scale = np.exp(-point.z * t) * point.dz / (denominator * TWO_PI_I)
    return scale * problem.op.modified_resolvent_apply(point.z, problem.u0)


class _SincNodes:
    """t-independent part of the quadrature: nodes, nonlocal factors and resolvent images."""

    def __init__(
        self,
        problem: NonlocalProblem,
        contour: Contour,
        rule: GaussRule,
        h: float,
        N: int,
        symmetric: bool,
        workers: int,
    ) -> None:
        self.h = h
        self.N = N
        self.symmetric = symmetric
        # k = 0, 1, ..., N then (full sum only) -1, ..., -N
        ks = np.arange(0, N + 1) if symmetric else np.concatenate((np.arange(0, N + 1), -np.arange(1, N + 1)))
        zeta = ks * h
        with np.errstate(over="ignore", invalid="ignore"):
            z = contour.a_I * np.cosh(zeta) - 1j * contour.b_I * np.sinh(zeta)
            dz = contour.a_I * np.sinh(zeta) - 1j * contour.b_I * np.cosh(zeta)
        finite = np.isfinite(z) & np.isfinite(dz)
        if not np.all(finite):
            logger.debug(f"{int(np.sum(~finite))} contour nodes overflow and are dropped.")
        self.z = np.where(finite, z, 0.0)
        dz = np.where(finite, dz, 0.0)
        denominator = np.ones_like(self.z)
        denominator[finite] = _denominator(rule, problem, self.z[finite])
        self.prefactor = np.where(finite, dz / (denominator * TWO_PI_I), 0.0)
        self.finite = finite

        op, u0 = problem.op, problem.u0
        live = [int(k) for k in np.flatnonzero(finite)]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                images = list(pool.map(lambda i: op.modified_resolvent_apply(self.z[i], u0), live))
        else:
            images = [op.modified_resolvent_apply(self.z[i], u0) for i in live]
        self.images = np.zeros((ks.size, op.dim), dtype=complex)
        for i, image in zip(live, images, strict=True):
            self.images[i] = image

    def terms(self, t: float) -> np.ndarray:
        with np.errstate(under="ignore"):
            factors = np.where(self.finite, np.exp(-self.z * t), 0.0) * self.prefactor
        return factors[:, None] * self.images

    def evaluate(self, t: float) -> np.ndarray:
        """h * sum_k F(kh), summed in ascending |k| with the k = 0 term added last."""
        terms = self.terms(t)
        acc = np.zeros(terms.shape[1], dtype=complex)
        if self.symmetric:
            for k in range(1, self.N + 1):
                acc += terms[k]
            return 2.0 * (self.h * acc).real + self.h * terms[0]
        for k in range(1, self.N + 1):
            acc += terms[k] + terms[self.N + k]
        return self.h * acc + self.h * terms[0]


def _prepare(problem: NonlocalProblem, config: SolverConfig) -> tuple[Contour, ConditionReport, _SincNodes]:
    contour = make_integration_contour(problem.op.spectral, config.rho1, problem.op.self_adjoint)
    report = check_existence(problem, contour)
    if not report.sharp_ok:
        logger.error(f"Sharp existence condition fails: ||w||={report.w_sup:.6g} >= a_I={report.a_I:.6g}.")
        raise ExistenceConditionError(
            f"||w||_C[0,T] = {report.w_sup:.6g} is not below a_I = {report.a_I:.6g}; the solve is refused"
        )
    rule = gauss_legendre(config.n)
    h = config.step_size(contour.d1, problem.alpha)
    nodes = _SincNodes(problem, contour, rule, h, config.N, config.use_symmetry, config.workers)
    return contour, report, nodes


def _sample(nodes: _SincNodes, report: ConditionReport, config: SolverConfig, t: float) -> SolutionSample:
    value_complex = nodes.evaluate(t)
    value = value_complex.real.copy()
    imag_residual = float(np.max(np.abs(value_complex.imag))) if value_complex.size else 0.0
    scale = float(np.max(np.abs(value))) if value.size else 0.0
    if imag_residual > IMAG_RESIDUAL_RTOL * scale:
        logger.warning(f"Imaginary residual {imag_residual:.3e} at t={t} exceeds 1e-8 * ||value||: check the input.")
    return SolutionSample(
        t=t,
        value_complex=value_complex,
        value=value,
        imag_residual=imag_residual,
        report=report,
        grid=SincGrid(h=nodes.h, N=config.N, n=config.n),
    )


def solve_many(problem: NonlocalProblem, config: SolverConfig, ts: Sequence[float]) -> list[SolutionSample]:
    """Approximate u(t) at every t in ``ts``, sharing nodes and resolvent solves across times.

    Args:
        problem (NonlocalProblem): The problem.
        config (SolverConfig): Discretisation parameters.
        ts (Sequence[float]): Times, each t >= 0.

    Returns:
        list[SolutionSample]: One sample per time, in input order.

    Raises:
        ExistenceConditionError: If ||w|| >= a_I.
        NumericalFailureError: If a resolvent solve or the nonlocal denominator breaks down.
    """
    ts = [float(t) for t in ts]
    if any(not (math.isfinite(t) and t >= 0) for t in ts):
        logger.error(f"Negative or non-finite evaluation time in {ts}.")
        raise ValueError("every evaluation time must be a finite t >= 0")
    _, report, nodes = _prepare(problem, config)
    samples = [_sample(nodes, report, config, t) for t in ts]
    logger.info(f"Successfully computed {len(samples)} samples with n={config.n}, N={config.N}, h={nodes.h:.6g}.")
    return samples


def solve_at(problem: NonlocalProblem, config: SolverConfig, t: float) -> SolutionSample:
    """Approximate u(t) by the Sinc quadrature h * sum_{k=-N..N} F_n(t, kh)."""
    return solve_many(problem, config, [t])[0]
