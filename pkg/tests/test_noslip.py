import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from cylstokes import noslip
from cylstokes.errors import DomainError
from cylstokes.fields import rigid_motion
from cylstokes.geometry import bipolar_to_cart, boundary_points, cart_to_bipolar, make_geometry
from cylstokes.validation import f_s_sum

# frozen regression values (adaptive and tanh-sinh quadrature agree to 1e-15)
F0_REF = 0.7280987824952262
G0_REF = 1.5371490762231073


@pytest.mark.parametrize("s", [0.3, 0.1, 0.03, 1e-3])
def test_truncation_order(s):
    N, tail = noslip.truncation_order(s)
    assert N >= 8
    assert tail <= 1e-14 * (1 + 1e-9)
    # close to minimal: N s exceeds the root of x^3 e^-x = eps s by less than the search step
    root = brentq(lambda x: 3 * math.log(x) - x - math.log(1e-14 * s), 3.0, 200.0)
    assert N == 8 or N * s < root + 0.25 + s


def test_truncation_cap_warns():
    with pytest.warns(RuntimeWarning):
        N, tail = noslip.truncation_order(1e-5, eps=1e-200)
    assert N == math.ceil(200 / 1e-5)
    assert tail > 1e-200


@pytest.mark.parametrize("s", [0.5, 0.1, 0.02])
def test_m_plus_half_matches_shifted_sum(s):
    assert noslip.m_plus_half(s) == pytest.approx(f_s_sum(s), rel=1e-12)


@pytest.mark.parametrize("delta,kv,krot", [
    (1e-2, -7.41949627108898, -13.77326908189023),
])
def test_k_reference(delta, kv, krot):
    g = make_geometry(1.0, delta)
    assert noslip.k_v(g) == pytest.approx(kv, rel=1e-12)
    assert noslip.k_rot(g) == pytest.approx(krot, rel=1e-12)


@pytest.mark.parametrize("delta", [1e-1, 1e-2, 1e-3])
@pytest.mark.parametrize("case", noslip.CASES)
@pytest.mark.parametrize("side", [1, 2])
def test_no_slip(delta, case, side):
    g = make_geometry(1.0, delta)
    zeta, theta = boundary_points(g, 400, side)
    u = noslip.field_v(g, case, zeta, theta).u
    if case == "rotation":
        u = u - rigid_motion(3, *bipolar_to_cart(g, zeta, theta))
    assert np.abs(u).max() < 1e-10


@pytest.mark.parametrize("case", noslip.CASES)
def test_gauge(g, case):
    co = noslip.coefficients(g, case)
    assert abs(noslip.gauge_sum(co)) < 1e-12


@pytest.mark.parametrize("case", noslip.CASES)
def test_pressure_vanishes_at_infinity(g, case):
    r = 1e-6
    p = noslip.field_v(g, case, np.array([0.3 * r]), np.array([r])).p
    assert abs(p[0]) < 1e-4


@pytest.mark.parametrize("case", noslip.CASES)
def test_to_json(g, case):
    doc = noslip.coefficients(g, case, 12).to_json()
    assert doc["case"] == case and doc["N"] == 12
    assert len(doc["n"]) == len(doc["first"]) == len(doc["second"])


def test_infinity_rejected(g):
    with pytest.raises(DomainError):
        noslip.field_v(g, "shear", 0.0, 0.0)


@given(st.floats(-2.5, 2.5), st.floats(0.02, 2.5))
def test_reflection_symmetry(x, y):
    # extensional flow is even in y (u_x) and odd in y (u_y); p is even
    g = make_geometry(1.0, 1e-2)
    (c2, _) = g.centers[1]
    if min(math.hypot(abs(x) - c2, y), 10.0) <= g.R * 1.001:
        return
    up = noslip.field_v(g, "extensional", *cart_to_bipolar(g, x, y))
    dn = noslip.field_v(g, "extensional", *cart_to_bipolar(g, x, -y))
    tol = 1e-9 * (1 + np.abs(up.u).max())
    assert up.u[0] == pytest.approx(dn.u[0], abs=tol)
    assert up.u[1] == pytest.approx(-dn.u[1], abs=tol)
    assert up.p == pytest.approx(dn.p, abs=1e-9 * (1 + abs(up.p)))


@given(st.floats(0.05, 1.0), st.floats(0.05, 2 * math.pi - 0.05))
def test_shear_pressure_is_odd(u, theta):
    # the q2 pressure flips sign under zeta -> -zeta (x -> -x)
    g = make_geometry(1.0, 1e-2)
    co = noslip.coefficients(g, "shear")
    z = u * g.s
    a = noslip.q2_pressure(g, co, z, theta)
    b = noslip.q2_pressure(g, co, -z, theta)
    assert a == pytest.approx(-b, abs=1e-9 * (1 + abs(a)))


def test_explicit_pressures_match_conjugation(g):
    z = np.linspace(-g.s, g.s, 7)
    t = np.linspace(0.3, 6.0, 7)
    for case, fn in (("extensional", noslip.q1_pressure), ("shear", noslip.q2_pressure),
                     ("rotation", noslip.prot_pressure)):
        co = noslip.coefficients(g, case)
        generic = noslip.series_field(g, co.series, z, t).p
        assert np.allclose(fn(g, co, z, t), generic, atol=1e-10 * (1 + np.abs(generic).max()))


def test_F0_G0_frozen():
    F0, G0 = noslip.F0_G0()
    assert F0 == pytest.approx(F0_REF, abs=1e-9)
    assert G0 == pytest.approx(G0_REF, abs=1e-9)
    schemes = noslip.F0_G0_schemes()
    (fa, ga), (ft, gt) = schemes.values()
    assert abs(fa - ft) < 1e-9 and abs(ga - gt) < 1e-9


@pytest.mark.parametrize("x,f,gv", [(1e-8, 1 / 3, 1.0), (1e-3, 1 / 3, 1.0)])
def test_integrand_limits(x, f, gv):
    assert noslip.f0(x) == pytest.approx(f, rel=1e-5)
    assert noslip.g0(x) == pytest.approx(gv, rel=1e-5)


@pytest.mark.parametrize("x0", [1.0, 30.0])
def test_integrands_continuous_at_switch(x0):
    for fn in (noslip.f0, noslip.g0):
        lo, hi = fn(x0 * (1 - 1e-12)), fn(x0 * (1 + 1e-12))
        assert lo == pytest.approx(hi, rel=1e-9)


@given(st.floats(1e-6, 60.0))
def test_integrands_positive_decreasing(x):
    for fn in (noslip.f0, noslip.g0):
        assert fn(x) > 0
        assert fn(x * 1.01) <= fn(x) * (1 + 1e-12)
