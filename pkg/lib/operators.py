from abc import ABC, abstractmethod
from collections.abc import Sequence

import numpy as np
from loguru import logger

from lib.contour import SpectralBounds
from lib.exceptions import NumericalFailureError

NEAR_SINGULAR_RTOL = 1e-14
PIVOT_RTOL = 1e-14


class SectorialOperator(ABC):
    """Strongly positive operator A acting on complex vectors of length ``dim``.

    Implementations are immutable after construction and allocate fresh working storage on
    every resolvent call, so one instance may be used from several threads at once.
    """

    def __init__(self, dim: int, spectral: SpectralBounds, self_adjoint: bool = True) -> None:
        if dim < 1:
            raise ValueError(f"dim must be positive, got {dim}")
        self._dim = dim
        self._spectral = spectral
        self._self_adjoint = self_adjoint

    @property
    def dim(self) -> int:  # noqa: D102
        return self._dim

    @property
    def spectral(self) -> SpectralBounds:  # noqa: D102
        return self._spectral

    @property
    def self_adjoint(self) -> bool:  # noqa: D102
        return self._self_adjoint

    @abstractmethod
    def apply(self, v: np.ndarray) -> np.ndarray:
        """Return A v."""

    @abstractmethod
    def _solve_shifted(self, z: complex, v: np.ndarray) -> np.ndarray:
        """Solve (zI - A) u = v for a validated vector v."""

    def _check_vector(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if v.shape != (self.dim,):
            logger.error(f"Vector of shape {v.shape} does not match operator dimension {self.dim}.")
            raise ValueError(f"expected a vector of length {self.dim}, got shape {v.shape}")
        return v

    def resolvent_apply(self, z: complex, v: np.ndarray) -> np.ndarray:
        """Apply the resolvent (zI - A)^(-1) to v.

        Args:
            z (complex): Point outside the spectral sector.
            v (np.ndarray): Vector of length ``dim``.

        Returns:
            np.ndarray: u with (zI - A) u = v.

        Raises:
            ValueError: On a dimension mismatch.
            NumericalFailureError: If z is numerically on the spectrum.
        """
        return self._solve_shifted(complex(z), self._check_vector(v))

    def modified_resolvent_apply(self, z: complex, v: np.ndarray) -> np.ndarray:
        """Apply R1(z) = (zI - A)^(-1) - I/z, which decays like |z|^(-2) along the contour."""
        z = complex(z)
        if z == 0:
            logger.error("Modified resolvent requested at z = 0.")
            raise ValueError("the modified resolvent is undefined at z = 0")
        v = self._check_vector(v)
        return self._solve_shifted(z, v) - v / z


class DiagonalOperator(SectorialOperator):
    """Operator diagonal in the standard basis with positive ascending eigenvalues."""

    def __init__(self, eigenvalues: Sequence[float]) -> None:
        eigenvalues = np.asarray(eigenvalues, dtype=float)
        if eigenvalues.ndim != 1 or eigenvalues.size == 0:
            raise ValueError("eigenvalues must be a non-empty list")
        if not np.all(eigenvalues > 0):
            logger.error("Non-positive eigenvalue passed to DiagonalOperator.")
            raise ValueError("eigenvalues must be positive")
        if np.any(np.diff(eigenvalues) < 0):
            raise ValueError("eigenvalues must be ascending")
        eigenvalues.setflags(write=False)
        self._eigenvalues = eigenvalues
        super().__init__(dim=eigenvalues.size, spectral=SpectralBounds(rho0=float(eigenvalues[0]), phi=0.0))

    @property
    def eigenvalues(self) -> np.ndarray:  # noqa: D102
        return self._eigenvalues

    def apply(self, v: np.ndarray) -> np.ndarray:  # noqa: D102
        return self._eigenvalues * self._check_vector(v)

    def _solve_shifted(self, z: complex, v: np.ndarray) -> np.ndarray:
        gap = z - self._eigenvalues
        if np.any(np.abs(gap) < NEAR_SINGULAR_RTOL * abs(z)):
            logger.error(f"Resolvent requested at z={z}, numerically on the spectrum.")
            raise NumericalFailureError(f"near-singular resolvent solve at z={z}")
        return v / gap

    def modified_resolvent_apply(self, z: complex, v: np.ndarray) -> np.ndarray:
        """Apply R1(z) mode by mode through the factor lambda / (z (z - lambda)), free of cancellation."""
        z = complex(z)
        if z == 0:
            logger.error("Modified resolvent requested at z = 0.")
            raise ValueError("the modified resolvent is undefined at z = 0")
        v = self._check_vector(v)
        gap = z - self._eigenvalues
        if np.any(np.abs(gap) < NEAR_SINGULAR_RTOL * abs(z)):
            logger.error(f"Resolvent requested at z={z}, numerically on the spectrum.")
            raise NumericalFailureError(f"near-singular resolvent solve at z={z}")
        return self._eigenvalues * v / (z * gap)


class SineSpectralOperator(DiagonalOperator):
    """-d^2/dx^2 on (0, 1) with Dirichlet ends, in the sine basis sin(k pi x), k = 1..modes.

    State vectors are sine-series coefficients; mode k has eigenvalue (k pi)^2 exactly.
    """

    def __init__(self, modes: int) -> None:
        if modes < 1:
            raise ValueError(f"modes must be >= 1, got {modes}")
        self.modes = modes
        super().__init__((np.pi * np.arange(1, modes + 1)) ** 2)

    def evaluate(self, coefficients: np.ndarray, x: np.ndarray | float) -> np.ndarray:
        """Sum the sine series with the given coefficients at the points x."""
        x = np.asarray(x, dtype=float)
        k = np.arange(1, self.modes + 1)
        basis = np.sin(np.pi * np.multiply.outer(x, k))
        return basis @ np.asarray(coefficients)


class Laplacian1D(SectorialOperator):
    """Second-difference Dirichlet Laplacian on m interior points of (0, 1).

    (A_h v)_i = (-v_{i-1} + 2 v_i - v_{i+1}) / dx^2 with v_0 = v_{m+1} = 0, dx = 1/(m+1).
    """

    def __init__(self, m: int) -> None:
        if m < 2:
            logger.error(f"Laplacian1D needs at least 2 interior points, got {m}.")
            raise ValueError(f"m must be >= 2, got {m}")
        self.m = m
        self.dx = 1.0 / (m + 1)
        super().__init__(dim=m, spectral=SpectralBounds(rho0=float(self.eigenvalues[0]), phi=0.0))

    @property
    def eigenvalues(self) -> np.ndarray:
        """lambda_k = (4/dx^2) sin^2(k pi dx / 2), k = 1..m."""
        k = np.arange(1, self.m + 1)
        return 4.0 / self.dx**2 * np.sin(k * np.pi * self.dx / 2) ** 2

    @property
    def grid(self) -> np.ndarray:
        """Interior grid points x_j = j dx."""
        return self.dx * np.arange(1, self.m + 1)

    def apply(self, v: np.ndarray) -> np.ndarray:  # noqa: D102
        v = self._check_vector(v)
        padded = np.concatenate(([0.0], v, [0.0]))
        return (2 * padded[1:-1] - padded[:-2] - padded[2:]) / self.dx**2

    def _solve_shifted(self, z: complex, v: np.ndarray) -> np.ndarray:
        # Thomas sweep on (zI - A_h): diagonal z - 2/dx^2, both off-diagonals 1/dx^2
        off = 1.0 / self.dx**2
        diag = z - 2.0 * off
        tolerance = PIVOT_RTOL * (abs(z) + 2.0 * off)
        upper = np.empty(self.m, dtype=complex)
        rhs = np.empty(self.m, dtype=complex)
        pivot = diag
        for i in range(self.m):
            if i > 0:
                pivot = diag - off * upper[i - 1]
            if abs(pivot) <= tolerance:
                logger.error(f"Pivot underflow in the tridiagonal sweep at row {i}, z={z}.")
                raise NumericalFailureError(f"tridiagonal elimination pivot underflow at z={z}")
            upper[i] = off / pivot
            rhs[i] = (v[i] - (off * rhs[i - 1] if i > 0 else 0.0)) / pivot
        u = np.empty(self.m, dtype=complex)
        u[-1] = rhs[-1]
        for i in range(self.m - 2, -1, -1):
            u[i] = rhs[i] - upper[i] * u[i + 1]
        return u

    def evaluate(self, values: np.ndarray, x: np.ndarray | float) -> np.ndarray:
        """Piecewise-linear interpolation of grid values, zero at both ends."""
        nodes = np.concatenate(([0.0], self.grid, [1.0]))
        padded = np.concatenate(([0.0], np.asarray(values, dtype=float), [0.0]))
        return np.interp(x, nodes, padded)


def make_laplacian1d(m: int) -> Laplacian1D:
    """Finite-difference Dirichlet Laplacian with spectral vertex rho0 = (4/dx^2) sin^2(pi dx / 2)."""
    operator = Laplacian1D(m)
    logger.info(f"Successfully built Laplacian1D with m={m}, rho0={operator.spectral.rho0:.6g}.")
    return operator
