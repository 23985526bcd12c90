from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from loguru import logger
from numpy.polynomial import Polynomial

SUP_NORM_SAMPLES = 2048


class WeightKind(str, Enum):
    """Analytic forms a weight function can take."""

    CONSTANT = "constant"
    COS = "cos"
    COS_SQUARE = "cos_square"
    POLYNOMIAL = "polynomial"
    CALLABLE = "callable"


@dataclass(frozen=True)
class SupNorm:
    """Sup-norm of w on [0, T] and whether it was estimated by sampling."""

    value: float
    estimated: bool


@dataclass(frozen=True)
class WeightFunction:
    """Weight w(s) of the nonlocal condition u(0) + int_0^T w(s) u(s) ds = u0.

    Use the ``constant``, ``cos``, ``cos_square``, ``polynomial`` and ``from_callable``
    constructors rather than the raw fields. A user callable must accept a numpy array of
    points and be safe to call from several threads at once.
    """

    kind: WeightKind
    coefficients: tuple[float, ...] = ()
    func: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)
    sup_norm_hint: float | None = None

    def __post_init__(self) -> None:  # noqa: D105
        if self.kind is WeightKind.CALLABLE and self.func is None:
            raise ValueError("a callable weight needs a function")
        if self.kind in (WeightKind.CONSTANT, WeightKind.POLYNOMIAL) and not self.coefficients:
            raise ValueError(f"a {self.kind.value} weight needs coefficients")
        if self.sup_norm_hint is not None and not self.sup_norm_hint >= 0:
            raise ValueError(f"sup_norm_hint must be nonnegative, got {self.sup_norm_hint}")

    @classmethod
    def constant(cls, c: float) -> "WeightFunction":  # noqa: D102
        return cls(kind=WeightKind.CONSTANT, coefficients=(float(c),))

    @classmethod
    def zero(cls) -> "WeightFunction":  # noqa: D102
        return cls.constant(0.0)

    @classmethod
    def cos(cls) -> "WeightFunction":
        """w(s) = cos(s)."""
        return cls(kind=WeightKind.COS)

    @classmethod
    def cos_square(cls) -> "WeightFunction":
        """w(s) = cos(s^2)."""
        return cls(kind=WeightKind.COS_SQUARE)

    @classmethod
    def polynomial(cls, coefficients: Sequence[float]) -> "WeightFunction":
        """w(s) = sum_k coefficients[k] s^k (ascending powers)."""
        return cls(kind=WeightKind.POLYNOMIAL, coefficients=tuple(float(c) for c in coefficients))

    @classmethod
    def from_callable(
        cls, func: Callable[[np.ndarray], np.ndarray], sup_norm_hint: float | None = None
    ) -> "WeightFunction":
        """Wrap a user-supplied vectorised function."""
        return cls(kind=WeightKind.CALLABLE, func=func, sup_norm_hint=sup_norm_hint)

    @property
    def is_zero(self) -> bool:  # noqa: D102
        return self.kind is WeightKind.CONSTANT and self.coefficients[0] == 0.0

    def __call__(self, s: np.ndarray | float) -> np.ndarray:
        """Evaluate w at the points s.

        Raises:
            ValueError: If the weight is not finite at one of the points.
        """
        s = np.asarray(s, dtype=float)
        if self.kind is WeightKind.CONSTANT:
            values = np.full_like(s, self.coefficients[0])
        elif self.kind is WeightKind.COS:
            values = np.cos(s)
        elif self.kind is WeightKind.COS_SQUARE:
            values = np.cos(s * s)
        elif self.kind is WeightKind.POLYNOMIAL:
            values = Polynomial(self.coefficients)(s)
        else:
            values = np.broadcast_to(np.asarray(self.func(s), dtype=float), s.shape)
        if not np.all(np.isfinite(values)):
            logger.error("Weight function returned non-finite values.")
            raise ValueError("weight function must be finite on [0, T]")
        return values

    def sup_norm(self, T: float) -> SupNorm:
        """||w||_C[0,T], analytic where the form allows it, by dense sampling otherwise."""
        if not T > 0:
            raise ValueError(f"T must be positive, got {T}")
        if self.sup_norm_hint is not None:
            return SupNorm(self.sup_norm_hint, estimated=False)
        if self.kind is WeightKind.CONSTANT:
            return SupNorm(abs(self.coefficients[0]), estimated=False)
        if self.kind in (WeightKind.COS, WeightKind.COS_SQUARE):
            # |cos| reaches 1 at s = 0
            return SupNorm(1.0, estimated=False)
        if self.kind is WeightKind.POLYNOMIAL:
            poly = Polynomial(self.coefficients)
            critical = [r.real for r in poly.deriv().roots() if abs(r.imag) < 1e-12 and 0.0 <= r.real <= T]
            candidates = np.array([0.0, T, *critical])
            return SupNorm(float(np.max(np.abs(poly(candidates)))), estimated=False)
        samples = np.linspace(0.0, T, SUP_NORM_SAMPLES)
        value = float(np.max(np.abs(self(samples))))
        logger.warning(f"Sup-norm of the weight estimated by sampling {SUP_NORM_SAMPLES} points: {value}")
        return SupNorm(value, estimated=True)

    def describe(self) -> str:
        """Short human-readable name of the weight."""
        if self.kind is WeightKind.CONSTANT:
            return f"constant({self.coefficients[0]})"
        if self.kind is WeightKind.POLYNOMIAL:
            return f"polynomial({', '.join(map(str, self.coefficients))})"
        if self.kind is WeightKind.CALLABLE:
            return getattr(self.func, "__name__", "callable")
        return self.kind.value
