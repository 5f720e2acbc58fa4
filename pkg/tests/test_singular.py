import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cylstokes.assembly import h2_field
from cylstokes.errors import DomainError
from cylstokes.fields import rigid_motion
from cylstokes.geometry import bipolar_to_cart, boundary_points, make_geometry
from cylstokes.noslip import series_field
from cylstokes.singular import (
    h1_field,
    h1_series,
    h2_tilde_field,
    h2_tilde_series,
    sigma_h1_gap,
    sigma_h1_narrow,
    sigma_h2_narrow,
    singular_constants,
)


@pytest.mark.parametrize("delta", [1e-1, 1e-2, 1e-4])
def test_constants(delta):
    g = make_geometry(1.0, delta)
    c = singular_constants(g)
    s = g.s
    assert c.A1 * (2 * s - math.tanh(2 * s)) == pytest.approx(1.0)
    assert c.B1 == pytest.approx(-c.A1 / (2 * math.cosh(2 * s)))
    assert c.A2 == pytest.approx(-1.0 / (2 * s + math.sinh(2 * s)))
    assert c.C2 == pytest.approx(math.sinh(s) ** 2 * c.A2 / g.a)


@pytest.mark.parametrize("delta", [1e-2, 1e-3])
@pytest.mark.parametrize("side,sign", [(1, -1.0), (2, 1.0)])
def test_boundary_values(delta, side, sign):
    g = make_geometry(1.0, delta)
    C2 = singular_constants(g).C2
    zeta, theta = boundary_points(g, 360, side)
    x, y = bipolar_to_cart(g, zeta, theta)
    assert np.abs(h1_field(g, zeta, theta).u - 0.5 * sign * rigid_motion(1, x, y)).max() < 1e-12
    want = 0.5 * sign * rigid_motion(2, x, y) - C2 * rigid_motion(3, x, y)
    assert np.abs(h2_tilde_field(g, zeta, theta).u - want).max() < 1e-12


@given(st.floats(-1, 1), st.floats(0.05, 2 * math.pi - 0.05))
def test_closed_form_matches_series(u, theta):
    g = make_geometry(1.0, 1e-2)
    zeta = u * g.s
    for closed, series in ((h1_field, h1_series), (h2_tilde_field, h2_tilde_series)):
        a = closed(g, zeta, theta)
        b = series_field(g, series(g), np.array(zeta), np.array(theta))
        scale = 1.0 + np.abs(b.E).max() + abs(float(b.p))
        assert np.allclose(a.u, b.u, atol=1e-12 * scale)
        assert np.allclose(a.E, b.E, atol=1e-12 * scale)
        assert np.allclose(a.p, b.p, atol=1e-12 * scale)


@given(st.floats(-1.0, 1.0))
def test_gap_forms_differ_by_gauge_constant(t):
    g = make_geometry(1.0, 1e-3)
    y = t * math.sqrt(g.delta)
    diff = sigma_h1_gap(g, y) - sigma_h1_narrow(g, y)
    assert np.allclose(diff, 0.75 * g.mu * g.R / g.delta**2 * np.eye(2), rtol=1e-12)


def test_h1_gap_stress_leading_order(g3):
    fs = h1_field(g3, 0.0, math.pi)
    lead = sigma_h1_gap(g3, 0.0)
    assert fs.sigma[0, 0] == pytest.approx(lead[0, 0], rel=5 * g3.delta)
    # form without the gauge constant, at the gap centre: (9/4) mu R / delta^2
    assert sigma_h1_narrow(g3, 0.0)[0, 0] == pytest.approx(2.25 / g3.delta**2)


def test_h2_gap_stress_leading_order(g3):
    fs = h2_field(g3, 0.0, math.pi)
    lead = sigma_h2_narrow(g3, 0.0)
    assert lead[0, 0] == 0.0
    assert fs.sigma[0, 1] == pytest.approx(lead[0, 1], rel=0.05)


@pytest.mark.parametrize("fn", [sigma_h1_narrow, sigma_h1_gap, sigma_h2_narrow])
def test_narrow_region_enforced(g, fn):
    y = 1.5 * math.sqrt(g.delta)
    with pytest.raises(DomainError):
        fn(g, y)
    assert fn(g, y, region_factor=2.0).shape == (2, 2)
