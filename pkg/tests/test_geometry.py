import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cylstokes.errors import ConfigurationError, DomainError
from cylstokes.geometry import (
    bipolar_to_cart,
    boundary_points,
    cart_to_bipolar,
    frame_xi,
    inside_disks,
    make_geometry,
    near_infinity,
    scale_h,
)


@pytest.mark.parametrize("R,delta", [(1.0, 1e-2), (2.0, 2e-2), (0.5, 1e-4), (3.0, 0.7)])
def test_derived_parameters(R, delta):
    g = make_geometry(R, delta)
    assert g.a == pytest.approx(math.sqrt(delta * (R + delta / 4)), rel=1e-15)
    assert math.sinh(g.s) == pytest.approx(g.a / R, rel=1e-14)
    # the half gap is recovered from the bipolar parameter
    assert R * math.cosh(g.s) - R == pytest.approx(delta / 2, rel=1e-9)


def test_s_example():
    g = make_geometry(1.0, 0.01)
    assert g.s == pytest.approx(math.asinh(math.sqrt(0.010025)), rel=1e-15)


@pytest.mark.parametrize("kw,name", [
    ({"delta": 0.0}, "delta"),
    ({"delta": -1e-3}, "delta"),
    ({"R": 0.0}, "R"),
    ({"mu": float("nan")}, "mu"),
    ({"delta": float("inf")}, "delta"),
])
def test_invalid_parameters(kw, name):
    with pytest.raises(ConfigurationError, match=name):
        make_geometry(**kw)


@pytest.mark.parametrize("side", [1, 2])
def test_boundary_circles(g, side):
    zeta, theta = boundary_points(g, 64, side)
    x, y = bipolar_to_cart(g, zeta, theta)
    cx = g.centers[side - 1][0]
    assert np.allclose(np.hypot(x - cx, y), g.R, rtol=0, atol=1e-13)


def test_boundary_side_validated(g):
    with pytest.raises(ConfigurationError):
        boundary_points(g, 8, side=3)


@given(st.floats(-6, 6), st.floats(-6, 6))
def test_cartesian_round_trip(x, y):
    g = make_geometry(1.0, 1e-2)
    assume(not inside_disks(g, x, y))
    zeta, theta = cart_to_bipolar(g, x, y)
    assert abs(zeta) <= g.s * (1 + 1e-12)
    assume(not near_infinity(zeta, theta))
    xb, yb = bipolar_to_cart(g, zeta, theta)
    assert xb == pytest.approx(x, abs=1e-11 * (1 + abs(x)))
    assert yb == pytest.approx(y, abs=1e-11 * (1 + abs(y)))


@given(st.floats(-0.09, 0.09), st.floats(0.01, 2 * math.pi - 0.01))
def test_bipolar_round_trip(zeta, theta):
    g = make_geometry(1.0, 1e-2)
    x, y = bipolar_to_cart(g, zeta, theta)
    zb, tb = cart_to_bipolar(g, x, y)
    assert zb == pytest.approx(zeta, abs=1e-12)
    assert tb == pytest.approx(theta, abs=1e-12)


@given(st.floats(-1.0, 1.0), st.floats(0.05, 6.2))
def test_frame_is_symmetric_orthogonal(zeta, theta):
    X = frame_xi(zeta, theta).matrix
    assert np.allclose(X @ X, np.eye(2), atol=1e-12)
    assert np.allclose(X, X.T)


@pytest.mark.parametrize("zeta", [-0.05, 0.0, 0.08])
def test_line_element(g, zeta):
    # |d(x, y)/d theta| = 1/h along a zeta-circle
    theta = np.linspace(0.3, 6.0, 25)
    eps = 1e-6
    xp, yp = bipolar_to_cart(g, zeta, theta + eps)
    xm, ym = bipolar_to_cart(g, zeta, theta - eps)
    speed = np.hypot(xp - xm, yp - ym) / (2 * eps)
    assert np.allclose(speed, 1.0 / scale_h(g, zeta, theta), rtol=1e-7)


def test_infinity_rejected(g):
    with pytest.raises(DomainError):
        bipolar_to_cart(g, 0.0, 0.0)
    with pytest.raises(DomainError):
        cart_to_bipolar(g, g.a, 0.0)


def test_inside_disks(g):
    (c1, _), (c2, _) = g.centers
    assert inside_disks(g, c1, 0.0) and inside_disks(g, c2, 0.5)
    assert not inside_disks(g, 0.0, 0.0)
    assert not inside_disks(g, c2 + g.R, 0.0)
