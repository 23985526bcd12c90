import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from loguru import logger

from lib.exceptions import NumericalFailureError
from lib.weights import SupNorm, WeightFunction, WeightKind

__all__ = [
    "GaussRule",
    "SupNorm",
    "WeightFunction",
    "WeightKind",
    "gauss_error_bound_analytic",
    "gauss_error_bound_bv",
    "gauss_legendre",
    "map_to_interval",
    "nonlocal_integral",
    "sinc_step_large_t",
    "sinc_step_scaled",
    "sinc_step_uniform",
]

NEWTON_MAX_ITERATIONS = 100
NEWTON_RESIDUAL_TOL = 1e-15
NEWTON_STEP_TOL = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class GaussRule:
    """(n+1)-point Gauss-Legendre rule on [-1, 1].

    Attributes:
        order (int): n; the rule has n+1 nodes and is exact for polynomials of degree <= 2n+1.
        nodes (np.ndarray): Roots of P_{n+1}, strictly ascending and symmetric about 0.
        weights (np.ndarray): Positive weights summing to 2.
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:  # noqa: D105
        if not len(self.nodes) == len(self.weights) == self.order + 1:
            raise ValueError(f"a rule of order {self.order} needs {self.order + 1} nodes and weights")
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def size(self) -> int:  # noqa: D102
        return self.order + 1


def _legendre_with_derivative(m: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_m(x) and P_m'(x) by the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(1, m):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    dp = m * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> GaussRule:
    """Compute the (n+1)-point Gauss-Legendre rule by Newton iteration on P_{n+1}.

    Initial guesses are the asymptotic (Tricomi) approximations of the roots. Iteration stops
    when the polynomial residual drops below 1e-15 or the Newton update reaches rounding level.

    Args:
        n (int): Order of the rule, n >= 0.

    Returns:
        GaussRule: Nodes ascending, weights 2 / ((1 - x^2) P'_{n+1}(x)^2).

    Raises:
        ValueError: If n is negative.
        NumericalFailureError: If Newton does not converge in 100 iterations.
    """
    if n < 0:
        logger.error(f"Gauss rule order n={n} is negative.")
        raise ValueError(f"n must be >= 0, got {n}")
    m = n + 1
    if m == 1:
        return GaussRule(order=0, nodes=np.array([0.0]), weights=np.array([2.0]))

    i = np.arange(1, m + 1)
    x = np.cos(np.pi * (4 * i - 1) / (4 * m + 2)) * (1 - 1 / (8 * m**2) + 1 / (8 * m**3))
    for _ in range(NEWTON_MAX_ITERATIONS):
        p, dp = _legendre_with_derivative(m, x)
        step = p / dp
        x = x - step
        if np.max(np.abs(p)) <= NEWTON_RESIDUAL_TOL or np.max(np.abs(step)) <= NEWTON_STEP_TOL:
            break
    else:
        logger.error(f"Newton iteration for the {m}-point Gauss rule did not converge.")
        raise NumericalFailureError(f"Gauss-Legendre Newton iteration for n={n} did not converge")

    _, dp = _legendre_with_derivative(m, x)
    weights = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    x, weights = x[order], weights[order]
    # exact symmetry about the origin
    x = (x - x[::-1]) / 2
    weights = (weights + weights[::-1]) / 2
    logger.debug(f"Computed {m}-point Gauss-Legendre rule.")
    return GaussRule(order=n, nodes=x, weights=weights)


def map_to_interval(rule: GaussRule, T: float) -> tuple[np.ndarray, np.ndarray]:
    """Map the rule to [0, T]: xi_j = (T/2)(theta_j + 1), weights (T/2) omega_j."""
    if not T > 0:
        logger.error(f"Interval length T={T} is not positive.")
        raise ValueError(f"T must be positive, got {T}")
    half = T / 2
    return half * (rule.nodes + 1.0), half * rule.weights


def nonlocal_integral(
    rule: GaussRule, w: WeightFunction, T: float, z: complex | np.ndarray
) -> complex | np.ndarray:
    """Gauss approximation I_n(z) of int_0^T w(s) exp(-z s) ds.

    Args:
        rule (GaussRule): The (n+1)-point rule.
        w (WeightFunction): Weight of the nonlocal condition.
        T (float): Horizon, T > 0.
        z (complex | np.ndarray): One point or an array of points with Re(z) >= 0.

    Returns:
        complex | np.ndarray: I_n(z), with the shape of ``z``.
    """
    z_arr = np.asarray(z, dtype=complex)
    if np.any(z_arr.real < 0):
        logger.error("nonlocal_integral called with Re(z) < 0.")
        raise ValueError("nonlocal_integral requires Re(z) >= 0")
    xi, scaled_weights = map_to_interval(rule, T)
    weighted = scaled_weights * w(xi)
    values = np.exp(-np.multiply.outer(z_arr, xi)) @ weighted
    if z_arr.ndim == 0:
        return complex(values)
    return values


def sinc_step_uniform(d1: float, alpha: float, N: int) -> float:
    """Step h = sqrt(pi d1 / (alpha (N+1))), balancing discretisation and truncation uniformly in t."""
    if not 0 < alpha < 1:
        logger.error(f"alpha={alpha} outside (0, 1).")
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not d1 > 0:
        raise ValueError(f"d1 must be positive, got {d1}")
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    return math.sqrt(math.pi * d1 / (alpha * (N + 1)))


def sinc_step_large_t(N: int, c1: float = 1.0) -> float:
    """Step h = c1 ln(N) / N for evaluation times bounded away from zero."""
    if N < 2:
        logger.error(f"N={N} too small for the large-t step.")
        raise ValueError(f"N must be >= 2 for the large-t step, got {N}")
    if not c1 > 0:
        raise ValueError(f"c1 must be positive, got {c1}")
    return c1 * math.log(N) / N


def sinc_step_scaled(N: int, c0: float = 1.0) -> float:
    """Step h = c0 / sqrt(N+1); the uniform rule is the member c0 = sqrt(pi d1 / alpha)."""
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    if not c0 > 0:
        raise ValueError(f"c0 must be positive, got {c0}")
    return c0 / math.sqrt(N + 1)


def gauss_error_bound_analytic(M_bound: float, rho: float, n: int) -> float:
    """Bound 144 M rho^(-2n) / (35 (rho^2 - 1)) on |I - I_n| for a weight analytic in the Bernstein ellipse rho."""
    if not rho > 1:
        raise ValueError(f"rho must exceed 1, got {rho}")
    if not M_bound > 0:
        raise ValueError(f"M_bound must be positive, got {M_bound}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return 144.0 * M_bound * rho ** (-2 * n) / (35.0 * (rho * rho - 1.0))


def gauss_error_bound_bv(V: float, nu: int, n: int) -> float:
    """Bound 32 V / (15 pi nu (n - 2nu - 1)^(2nu+1)) on |I - I_n| when w^(nu) has bounded variation V."""
    if V < 0:
        raise ValueError(f"V must be nonnegative, got {V}")
    if nu < 1:
        raise ValueError(f"nu must be >= 1, got {nu}")
    if n <= 2 * nu + 1:
        raise ValueError(f"n must exceed 2*nu + 1 = {2 * nu + 1}, got {n}")
    return 32.0 * V / (15.0 * math.pi * nu * (n - 2 * nu - 1) ** (2 * nu + 1))
