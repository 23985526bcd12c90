import math
from dataclasses import dataclass

import numpy as np
from loguru import logger
from numpy.polynomial.legendre import leggauss

from lib.exceptions import NumericalFailureError
from lib.operators import DiagonalOperator
from lib.weights import WeightFunction, WeightKind

PANEL_NODES, PANEL_WEIGHTS = leggauss(10)
REFINEMENT_RTOL = 1e-14
MAX_HALVINGS = 24
CROSS_CHECK_RTOL = 1e-12


@dataclass(frozen=True)
class ModeProblem:
    """One eigen-mode of a diagonal problem: u(t) = exp(-lam t) c0 / (1 + J(lam)).

    Attributes:
        lam (float): Eigenvalue, positive.
        w (WeightFunction): Weight of the nonlocal condition.
        T (float): Horizon.
        c0 (float): Coefficient of the mode in u0.
    """

    lam: float
    w: WeightFunction
    T: float
    c0: float

    def __post_init__(self) -> None:  # noqa: D105
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lam must be positive, got {self.lam}")
        if not (math.isfinite(self.T) and self.T > 0):
            raise ValueError(f"T must be positive, got {self.T}")


def _base_mesh(T: float, lam: float) -> np.ndarray:
    """Breakpoints 0, 1/lam, 2/lam, 4/lam, ... , T: panels graded on the decay scale of exp(-lam s)."""
    points = [0.0]
    scale = 1.0 / lam
    while scale < T:
        points.append(scale)
        scale *= 2.0
    points.append(T)
    return np.asarray(points)


def _composite_gauss(w: WeightFunction, lam: float, mesh: np.ndarray) -> float:
    left, right = mesh[:-1], mesh[1:]
    half = (right - left) / 2
    s = (left + half)[:, None] + half[:, None] * PANEL_NODES[None, :]
    values = w(s) * np.exp(-lam * s)
    return float(np.sum(half * (values @ PANEL_WEIGHTS)))


def nonlocal_transform(w: WeightFunction, T: float, lam: float, max_halvings: int = MAX_HALVINGS) -> tuple[float, int]:
    """J(lam) = int_0^T w(s) exp(-lam s) ds by composite 10-point Gauss panels with halving refinement.

    Every panel is halved until two successive levels agree to 1e-14 relative.

    Args:
        w (WeightFunction): Weight of the nonlocal condition.
        T (float): Horizon.
        lam (float): Decay rate, positive.
        max_halvings (int): Refinement budget.

    Returns:
        tuple: The accepted value and the number of halvings it took.

    Raises:
        NumericalFailureError: If the budget is exhausted.
    """
    if w.is_zero:
        return 0.0, 0
    mesh = _base_mesh(T, lam)
    previous = _composite_gauss(w, lam, mesh)
    for level in range(1, max_halvings + 1):
        mesh = np.sort(np.concatenate((mesh, (mesh[:-1] + mesh[1:]) / 2)))
        current = _composite_gauss(w, lam, mesh)
        if abs(current - previous) <= REFINEMENT_RTOL * abs(current):
            return current, level
        previous = current
    logger.error(f"Reference quadrature for lam={lam} did not settle after {max_halvings} halvings.")
    raise NumericalFailureError(f"reference integral for lam={lam} did not converge in {max_halvings} halvings")


def cosine_transform(lam: float, T: float) -> float:
    """Closed form of int_0^T cos(s) exp(-lam s) ds = [lam + exp(-lam T)(sin T - lam cos T)] / (1 + lam^2)."""
    return (lam + math.exp(-lam * T) * (math.sin(T) - lam * math.cos(T))) / (1.0 + lam * lam)


def _mode_denominator(p: ModeProblem) -> float:
    J, _ = nonlocal_transform(p.w, p.T, p.lam)
    if p.w.kind is WeightKind.COS:
        closed = cosine_transform(p.lam, p.T)
        if abs(J - closed) > CROSS_CHECK_RTOL * max(abs(closed), 1.0 / p.lam):
            logger.warning(f"Adaptive J={J!r} disagrees with the closed form {closed!r} at lam={p.lam}.")
    denominator = 1.0 + J
    if denominator == 0.0:
        logger.error(f"1 + J(lam) vanishes at lam={p.lam}.")
        raise NumericalFailureError(f"mode lam={p.lam} has 1 + J(lam) = 0")
    return denominator


def mode_reference(p: ModeProblem, t: float) -> float:
    """exp(-lam t) c0 / (1 + J(lam))."""
    if not t >= 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    return math.exp(-p.lam * t) * p.c0 / _mode_denominator(p)


def reference_solution(op: DiagonalOperator, w: WeightFunction, T: float, u0: np.ndarray, t: float) -> np.ndarray:
    """Mode-by-mode reference solution for an operator diagonal in its state basis.

    Args:
        op (DiagonalOperator): Diagonal or sine-spectral operator.
        w (WeightFunction): Weight of the nonlocal condition.
        T (float): Horizon.
        u0 (np.ndarray): Coefficients of u0 in the operator's eigenbasis.
        t (float): Time, t >= 0.

    Returns:
        np.ndarray: Coefficients of u(t).

    Raises:
        TypeError: For an operator that is not diagonal in its state basis.
    """
    if not isinstance(op, DiagonalOperator):
        logger.error(f"No reference solution for {type(op).__name__}.")
        raise TypeError(f"reference_solution needs a diagonal operator, got {type(op).__name__}")
    u0 = np.asarray(u0, dtype=float)
    if u0.shape != (op.dim,):
        raise ValueError(f"u0 must have length {op.dim}, got shape {u0.shape}")
    values = np.zeros(op.dim)
    for k, (lam, c0) in enumerate(zip(op.eigenvalues, u0, strict=True)):
        if c0 != 0.0:
            values[k] = mode_reference(ModeProblem(lam=float(lam), w=w, T=T, c0=float(c0)), t)
    return values
