import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cylstokes.errors import ConfigurationError
from cylstokes.geometry import cart_to_bipolar, frame_xi
from cylstokes.noslip import series_field, series_field_grid
from cylstokes.stream import (
    StreamSeries,
    StreamTerm,
    eval_hpsi,
    eval_hpsi_grid,
    laplacian,
    pressure,
    velocity_bipolar,
    velocity_cartesian,
)
from cylstokes.validation import fd_stokes_residual, random_interior_points


def _series(coef):
    terms = []
    for n, (c1, c2, c3) in enumerate(coef, start=2):
        terms += [StreamTerm(c1, "cosh", n + 1, "cos", n), StreamTerm(c2, "cosh", n - 1, "cos", n),
                  StreamTerm(c3, "sinh", n + 1, "sin", n)]
    terms.append(StreamTerm(0.3, "zeta", 0, "sin", 1))
    return StreamSeries.from_terms(terms)


SERIES = _series([(0.4, -0.7, 0.2), (-0.1, 0.05, 0.3), (0.02, 0.01, -0.04)])


@pytest.mark.parametrize("zk,k,tk,n", [
    ("cosh", 3, "cos", 3),
    ("cosh", 0, "cos", 3),
    ("zeta_cosh", 1, "cos", 2),
    ("zeta", 0, "cos", 2),
    ("bogus", 1, "cos", 0),
])
def test_rejects_non_biharmonic_terms(zk, k, tk, n):
    with pytest.raises(ConfigurationError):
        StreamSeries.from_terms([StreamTerm(1.0, zk, k, tk, n)])


def test_from_modes_matches_from_terms():
    a = StreamSeries.from_modes(0.0, [("cosh", "cos", [3, 1], [2, 2], [0.4, -0.7])])
    b = StreamSeries.from_terms([StreamTerm(0.4, "cosh", 3, "cos", 2), StreamTerm(-0.7, "cosh", 1, "cos", 2)])
    z, t = np.array([0.03, -0.05]), np.array([1.0, 4.0])
    assert np.allclose(eval_hpsi(a, z, t).f, eval_hpsi(b, z, t).f, rtol=1e-15)


def test_stokes_residual(g):
    x, y = random_interior_points(g, 30, seed=7)
    fn = lambda x, y: series_field(g, SERIES, *cart_to_bipolar(g, x, y))  # noqa: E731
    mom, div = fd_stokes_residual((g, fn), x, y)
    assert mom.max() < 1e-4
    assert div.max() < 1e-4


def test_grid_matches_pointwise(g):
    z1 = np.linspace(-g.s, g.s, 5)
    t1 = np.linspace(0.2, 6.0, 7)
    Z, T = np.meshgrid(z1, t1, indexing="ij")
    hp, hg = eval_hpsi(SERIES, Z, T), eval_hpsi_grid(SERIES, z1, t1)
    for a, b in zip(hp, hg):
        assert np.allclose(a, b, rtol=1e-13, atol=1e-13)
    fp, fg = series_field(g, SERIES, Z, T), series_field_grid(g, SERIES, z1, t1)
    assert np.allclose(fp.u, fg.u, atol=1e-12)
    assert np.allclose(fp.p, fg.p, atol=1e-10)


def test_frame_components(g):
    z = np.array([-0.07, 0.0, 0.04])
    t = np.array([0.5, 2.0, 3.5])
    uz, ut = velocity_bipolar(SERIES, g, z, t)
    u = velocity_cartesian(SERIES, g, z, t)
    X = frame_xi(z, t).matrix
    assert np.allclose(np.einsum("...ij,...j->...i", X, np.stack([uz, ut], -1)), u, atol=1e-12)


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(g, c1, c2):
    a = _series([(1.0, 0.0, 0.0)])
    b = _series([(0.0, 0.5, -1.0)])
    combo = a.scaled(c1) + b.scaled(c2)
    z, t = np.array([0.02]), np.array([2.5])
    lhs = velocity_cartesian(combo, g, z, t)
    rhs = c1 * velocity_cartesian(a, g, z, t) + c2 * velocity_cartesian(b, g, z, t)
    assert np.allclose(lhs, rhs, atol=1e-12 * (1 + abs(c1) + abs(c2)))


def test_pressure_vanishes_at_infinity(g):
    # approach (0, 0) in the bipolar plane, i.e. |x| -> infinity
    r = np.geomspace(1e-2, 1e-6, 5)
    p = pressure(SERIES, g, 0.5 * r, r)
    assert abs(p[-1]) < 1e-4 * max(1.0, abs(p[0]))


def test_pressure_is_harmonic_conjugate(g):
    # Cauchy-Riemann in (zeta, theta) between mu * Laplacian(Psi) and -p
    z, t, e = 0.03, 1.7, 1e-6
    lap = lambda z, t: g.mu * laplacian(SERIES, g, z, t)  # noqa: E731
    p = lambda z, t: pressure(SERIES, g, z, t)  # noqa: E731
    dlap_dz = (lap(z + e, t) - lap(z - e, t)) / (2 * e)
    dp_dt = (p(z, t + e) - p(z, t - e)) / (2 * e)
    assert abs(dlap_dz - dp_dt) < 1e-6 * (1 + abs(dp_dt))
