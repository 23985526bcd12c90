import os
import sys

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), "../"))

import math

import numpy as np

from lib.contour import (
    SpectralBounds,
    contour_point,
    make_contour,
    make_integration_contour,
    make_self_adjoint_contour,
    shifted_axes,
)


@pytest.mark.parametrize("phi", [0.1 * k for k in range(16)])
def test_strip_width_without_shift(phi: float) -> None:  # noqa: D103
    contour = make_contour(SpectralBounds(rho0=2.0, phi=phi), rho1=0.0)
    assert abs(contour.d1 - (math.pi / 2 - phi)) <= 1e-15


@pytest.mark.parametrize("rho0", [1.0, math.pi**2, 1234.5])
def test_self_adjoint_contour(rho0: float) -> None:  # noqa: D103
    contour = make_self_adjoint_contour(rho0)
    assert contour.a_I == contour.b_I
    assert math.isclose(contour.a_I, rho0 / math.sqrt(2.0), rel_tol=1e-15)
    assert contour.d1 == math.pi / 2
    assert contour.self_adjoint


@pytest.mark.parametrize("rho0, phi, rho1", [(1.0, 0.3, 0.0), (5.0, 0.7, 2.0), (10.0, 1.2, 9.5)])
def test_contour_axes_on_circle(rho0: float, phi: float, rho1: float) -> None:  # noqa: D103
    bounds = SpectralBounds(rho0=rho0, phi=phi)
    contour = make_contour(bounds, rho1)
    assert math.isclose(math.hypot(contour.a_I, contour.b_I), bounds.radius, rel_tol=1e-14)
    assert rho1 < contour.a_I < rho0


@pytest.mark.parametrize("rho1", [-0.1, 1.0, 3.0])
def test_rho1_outside_range(rho1: float) -> None:  # noqa: D103
    with pytest.raises(ValueError, match="rho1"):
        make_contour(SpectralBounds(rho0=1.0), rho1)


@pytest.mark.parametrize("rho0, phi", [(0.0, 0.0), (-1.0, 0.0), (1.0, math.pi / 2), (1.0, -0.1)])
def test_invalid_bounds(rho0: float, phi: float) -> None:  # noqa: D103
    with pytest.raises(ValueError):
        SpectralBounds(rho0=rho0, phi=phi)


def test_integration_contour_choice() -> None:  # noqa: D103
    bounds = SpectralBounds(rho0=4.0)
    assert make_integration_contour(bounds, 0.0, self_adjoint=True).self_adjoint
    assert not make_integration_contour(bounds, 1.0, self_adjoint=True).self_adjoint
    assert not make_integration_contour(bounds, 0.0, self_adjoint=False).self_adjoint
    assert not make_integration_contour(SpectralBounds(rho0=4.0, phi=0.2), 0.0, self_adjoint=True).self_adjoint


@pytest.mark.parametrize("zeta", [0.3, 1.0, 4.5])
def test_contour_point_conjugate_symmetry(zeta: float) -> None:  # noqa: D103
    contour = make_contour(SpectralBounds(rho0=3.0, phi=0.4), 0.5)
    ahead, behind = contour_point(contour, zeta), contour_point(contour, -zeta)
    assert behind.z == ahead.z.conjugate()
    assert behind.dz == -ahead.dz.conjugate()


def test_contour_vertex() -> None:  # noqa: D103
    contour = make_self_adjoint_contour(2.0)
    point = contour_point(contour, 0.0)
    assert point.z == complex(contour.a_I, 0.0)
    assert point.dz == complex(0.0, -contour.b_I)


def test_contour_derivative_matches_difference_quotient() -> None:  # noqa: D103
    contour = make_contour(SpectralBounds(rho0=3.0, phi=0.4), 0.5)
    step = 1e-6
    quotient = (contour_point(contour, 1.0 + step).z - contour_point(contour, 1.0 - step).z) / (2 * step)
    np.testing.assert_allclose(quotient, contour_point(contour, 1.0).dz, rtol=1e-8)


def test_contour_stays_left_of_spectral_vertex() -> None:  # noqa: D103
    contour = make_contour(SpectralBounds(rho0=3.0, phi=0.4), 0.5)
    for zeta in np.linspace(-6, 6, 101):
        z = contour_point(contour, zeta).z
        assert z.real >= contour.a_I - 1e-12


def test_shifted_axes_limits() -> None:  # noqa: D103
    bounds = SpectralBounds(rho0=3.0, phi=0.4)
    contour = make_contour(bounds, 0.5)
    assert shifted_axes(contour, 0.0) == pytest.approx((contour.a_I, contour.b_I), rel=1e-14)
    assert shifted_axes(contour, contour.d1 / 2) == pytest.approx((bounds.rho0, bounds.b0), rel=1e-14)
    a_inner, _ = shifted_axes(contour, -contour.d1 / 2)
    assert a_inner == pytest.approx(0.5, rel=1e-12)


def test_shift_outside_strip() -> None:  # noqa: D103
    contour = make_self_adjoint_contour(1.0)
    with pytest.raises(ValueError, match="nu"):
        shifted_axes(contour, contour.d1)


@pytest.mark.parametrize("rho0, phi", [(1.0, 0.0), (5.0, 0.4), (20.0, 1.2), (math.pi**2, 0.7)])
def test_shift_narrows_strip_and_moves_vertex(rho0: float, phi: float) -> None:  # noqa: D103
    bounds = SpectralBounds(rho0=rho0, phi=phi)
    contours = [make_contour(bounds, fraction * rho0) for fraction in np.linspace(0.0, 0.95, 12)]
    for inner, outer in zip(contours, contours[1:]):
        assert outer.d1 < inner.d1
        assert outer.a_I > inner.a_I


def test_shifted_axes_stay_in_bounds() -> None:  # noqa: D103
    rng = np.random.default_rng(5)
    for _ in range(1000):
        bounds = SpectralBounds(rho0=float(rng.uniform(0.5, 50.0)), phi=float(rng.uniform(0.0, 1.4)))
        rho1 = float(rng.uniform(0.0, 0.95)) * bounds.rho0
        contour = make_contour(bounds, rho1)
        a_nu, b_nu = shifted_axes(contour, float(rng.uniform(-contour.d1 / 2, contour.d1 / 2)))
        b_max = math.sqrt(bounds.b0**2 + bounds.rho0**2 - rho1**2)
        assert rho1 * (1 - 1e-12) <= a_nu <= bounds.rho0 * (1 + 1e-12)
        assert bounds.b0 * (1 - 1e-12) - 1e-12 <= b_nu <= b_max * (1 + 1e-12)
