import math
from dataclasses import dataclass

from loguru import logger


@dataclass(frozen=True)
class SpectralBounds:
    """Spectral characteristics of a sectorial operator.

    The spectrum lies in the sector with vertex ``rho0`` and half-angle ``phi``; outside it the
    resolvent is bounded by ``resolvent_const / (1 + |z|)``.

    Attributes:
        rho0 (float): Spectral vertex, strictly positive.
        phi (float): Spectral half-angle in [0, pi/2).
        resolvent_const (float | None): Constant M of the resolvent estimate, if known.
    """

    rho0: float
    phi: float = 0.0
    resolvent_const: float | None = None

    def __post_init__(self) -> None:  # noqa: D105
        if not (math.isfinite(self.rho0) and self.rho0 > 0):
            raise ValueError(f"rho0 must be a positive finite number, got {self.rho0}")
        if not 0.0 <= self.phi < math.pi / 2:
            raise ValueError(f"phi must lie in [0, pi/2), got {self.phi}")
        if self.resolvent_const is not None and not self.resolvent_const > 0:
            raise ValueError(f"resolvent_const must be positive when given, got {self.resolvent_const}")

    @property
    def b0(self) -> float:
        """Imaginary semi-axis of the spectral hyperbola."""
        return self.rho0 * math.tan(self.phi)

    @property
    def radius(self) -> float:
        """sqrt(rho0^2 + b0^2)."""
        return math.hypot(self.rho0, self.b0)


@dataclass(frozen=True)
class Contour:
    """Integration hyperbola z(zeta) = a_I cosh(zeta) - i b_I sinh(zeta) and its strip width d1."""

    bounds: SpectralBounds
    rho1: float
    a_I: float
    b_I: float
    d1: float
    self_adjoint: bool = False

    def __post_init__(self) -> None:  # noqa: D105
        if not 0.0 <= self.rho1 < self.bounds.rho0:
            raise ValueError(f"rho1 must lie in [0, rho0={self.bounds.rho0}), got {self.rho1}")
        if not (self.a_I > 0 and self.b_I > 0 and self.d1 > 0):
            raise ValueError(f"degenerate contour: a_I={self.a_I}, b_I={self.b_I}, d1={self.d1}")
        if not self.a_I > self.rho1:
            raise ValueError(f"contour vertex a_I={self.a_I} must lie right of rho1={self.rho1}")


@dataclass(frozen=True)
class PathPoint:
    """A point of the contour together with the parametric derivative z'(zeta)."""

    z: complex
    dz: complex
    zeta: float


def make_contour(bounds: SpectralBounds, rho1: float = 0.0) -> Contour:
    """Build the integration hyperbola enveloping the spectral hyperbola of ``bounds``.

    The strip of analyticity is bounded by the spectral hyperbola on one side and by the
    hyperbola through (rho1, 0) on the other, which gives

        d1  = arccos(rho1 / R) - phi,
        a_I = R cos(d1/2 + phi),
        b_I = R sin(d1/2 + phi),        R = sqrt(rho0^2 + b0^2).

    Args:
        bounds (SpectralBounds): Spectral characteristics of the operator.
        rho1 (float): Abscissa the inner boundary hyperbola passes through, 0 <= rho1 < rho0.

    Returns:
        Contour: The integration contour.

    Raises:
        ValueError: If rho1 is outside [0, rho0) or the resulting strip is degenerate.
    """
    if not 0.0 <= rho1 < bounds.rho0:
        logger.error(f"rho1={rho1} outside [0, rho0={bounds.rho0}).")
        raise ValueError(f"rho1 must lie in [0, rho0={bounds.rho0}), got {rho1}: the contour would touch the spectrum")
    radius = bounds.radius
    d1 = math.acos(rho1 / radius) - bounds.phi
    if d1 <= 0:
        logger.error(f"Degenerate strip width d1={d1}.")
        raise ValueError(f"strip width d1={d1} is not positive")
    angle = d1 / 2 + bounds.phi
    return Contour(
        bounds=bounds,
        rho1=rho1,
        a_I=radius * math.cos(angle),
        b_I=radius * math.sin(angle),
        d1=d1,
        self_adjoint=False,
    )


def make_self_adjoint_contour(rho0: float) -> Contour:
    """Build the contour for a self-adjoint positive definite operator: a_I = b_I = rho0/sqrt(2), d1 = pi/2."""
    if not rho0 > 0:
        logger.error(f"rho0={rho0} is not positive.")
        raise ValueError(f"rho0 must be positive, got {rho0}")
    axis = rho0 / math.sqrt(2.0)
    return Contour(
        bounds=SpectralBounds(rho0=rho0, phi=0.0),
        rho1=0.0,
        a_I=axis,
        b_I=axis,
        d1=math.pi / 2,
        self_adjoint=True,
    )


def make_integration_contour(bounds: SpectralBounds, rho1: float = 0.0, self_adjoint: bool = False) -> Contour:
    """Pick the self-adjoint contour when it applies, the general hyperbola otherwise."""
    if self_adjoint and bounds.phi == 0.0 and rho1 == 0.0:
        return make_self_adjoint_contour(bounds.rho0)
    return make_contour(bounds, rho1)


def contour_point(c: Contour, zeta: float) -> PathPoint:
    """Evaluate z(zeta) = a_I cosh(zeta) - i b_I sinh(zeta) and z'(zeta) = a_I sinh(zeta) - i b_I cosh(zeta)."""
    ch, sh = math.cosh(zeta), math.sinh(zeta)
    return PathPoint(
        z=complex(c.a_I * ch, -c.b_I * sh),
        dz=complex(c.a_I * sh, -c.b_I * ch),
        zeta=zeta,
    )


def shifted_axes(c: Contour, nu: float) -> tuple[float, float]:
    """Semi-axes (a(nu), b(nu)) of the contour translated by i*nu in the parameter plane.

    Args:
        c (Contour): The integration contour.
        nu (float): Shift inside the analyticity strip, |nu| <= d1/2.

    Returns:
        tuple: a(nu) in [rho1, rho0] and b(nu) in [b0, sqrt(b0^2 + rho0^2 - rho1^2)].

    Raises:
        ValueError: If nu lies outside the strip.
    """
    if abs(nu) > c.d1 / 2:
        logger.error(f"nu={nu} outside the strip |nu| <= {c.d1 / 2}.")
        raise ValueError(f"|nu| must not exceed d1/2={c.d1 / 2}, got {nu}")
    radius = c.bounds.radius
    angle = c.d1 / 2 + c.bounds.phi - nu
    return radius * math.cos(angle), radius * math.sin(angle)
