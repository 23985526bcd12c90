from collections.abc import Sequence

import numpy as np
from loguru import logger


def max_abs_error(computed: np.ndarray, reference: np.ndarray) -> float:  # noqa: D103
    return float(np.max(np.abs(np.asarray(computed) - np.asarray(reference))))


def relative_error(computed: np.ndarray, reference: np.ndarray, scale: float | None = None) -> float:
    """Max-norm error relative to ``scale``, or to the max-norm of the reference when no scale is given."""
    scale = float(np.max(np.abs(reference))) if scale is None else scale
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    return max_abs_error(computed, reference) / scale


def fit_exponential_convergence(Ns: Sequence[int], errors: Sequence[float]) -> dict:
    """Least-squares fit of log(error) against sqrt(N + 1).

    Args:
        Ns (Sequence[int]): Sinc truncations.
        errors (Sequence[float]): Positive errors, one per truncation.

    Returns:
        dict: slope, intercept, rms residual of the fit, range of log(error) and their ratio.
    """
    Ns = np.asarray(Ns, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if Ns.size < 2 or Ns.shape != errors.shape:
        raise ValueError("need at least two (N, error) pairs of equal length")
    if not np.all(errors > 0):
        logger.error(f"Non-positive error in the convergence data: {errors}.")
        raise ValueError("errors must be positive to fit their logarithm")
    abscissa = np.sqrt(Ns + 1.0)
    log_errors = np.log(errors)
    slope, intercept = np.polyfit(abscissa, log_errors, 1)
    residuals = log_errors - (slope * abscissa + intercept)
    rms = float(np.sqrt(np.mean(residuals**2)))
    spread = float(np.ptp(log_errors))
    fit = {
        "slope": float(slope),
        "intercept": float(intercept),
        "rms_residual": rms,
        "log_range": spread,
        "residual_ratio": rms / spread if spread > 0 else float("inf"),
    }
    logger.info("Successfully fitted exponential convergence.")
    logger.info("\n\t".join([f"{k}: {v}" for k, v in fit.items()]))
    return fit
