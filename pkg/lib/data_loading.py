import numpy as np
import pandas as pd
from loguru import logger

from lib.operators import DiagonalOperator, Laplacian1D, SectorialOperator, SineSpectralOperator


def read_grid_values(path: str) -> np.ndarray:
    """Read initial data from a CSV file with a ``value`` column.

    Args:
        path (str): The file path to the CSV file.

    Returns:
        np.ndarray: The values in file order.
    """
    df = pd.read_csv(path)
    if "value" not in df.columns:
        logger.error(f"{path} has no 'value' column.")
        raise ValueError(f"{path}: expected a 'value' column, found {list(df.columns)}")
    values = df["value"].to_numpy(dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{path}: initial data must be finite")
    logger.info(f"Successfully read {values.size} grid values from {path}.")
    return values


def sine_coefficients_poly_x2_1mx(M: int) -> np.ndarray:
    """Sine coefficients 2 int_0^1 (1-x) x^2 sin(k pi x) dx = -(8 (-1)^k + 4) / (k pi)^3, k = 1..M."""
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    k = np.arange(1, M + 1)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    return -(8.0 * sign + 4.0) / (k * np.pi) ** 3


def build_initial_data(spec: str, op: SectorialOperator) -> np.ndarray:
    """Build u0 for ``op`` from ``sine:k``, ``poly_x2_1mx`` or a grid-value file.

    Sine-spectral operators take sine coefficients, the finite-difference Laplacian takes values
    on its interior grid, diagonal operators take one entry per component.
    """
    kind, _, index = spec.partition(":")
    if kind == "sine" and index:
        k = int(index)
        if isinstance(op, Laplacian1D):
            return np.sin(k * np.pi * op.grid)
        if k > op.dim:
            raise ValueError(f"sine:{k} needs at least {k} modes, the operator has {op.dim}")
        u0 = np.zeros(op.dim)
        u0[k - 1] = 1.0
        return u0
    if spec == "poly_x2_1mx":
        if isinstance(op, SineSpectralOperator):
            return sine_coefficients_poly_x2_1mx(op.dim)
        if isinstance(op, Laplacian1D):
            x = op.grid
            return (1.0 - x) * x * x
        raise ValueError("poly_x2_1mx needs the sine or laplacian operator")
    if isinstance(op, SineSpectralOperator) or not isinstance(op, (DiagonalOperator, Laplacian1D)):
        raise ValueError("grid-value files need the laplacian or diagonal operator")
    values = read_grid_values(spec)
    if values.size != op.dim:
        logger.error(f"{spec} holds {values.size} values, the operator needs {op.dim}.")
        raise ValueError(f"{spec}: expected {op.dim} values, got {values.size}")
    return values
