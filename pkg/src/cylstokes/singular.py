"""Explicit singular solutions ``(h_1, p_1)`` and ``(h~_2, p~_2)``.

``h_1`` equals ``+-psi_1 / 2`` on the two cylinders and carries the pressure
blow-up of the extensional problem; ``h~_2`` equals ``+-psi_2 / 2 - C_2 psi_3``
and carries the shear-stress blow-up.  Both are evaluated from closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .fields import FieldSample
from .geometry import Geometry, frame_xi, near_infinity
from .stream import StreamSeries, StreamTerm, tensor_to_cartesian


@dataclass(frozen=True)
class SingularConstants:
    A1: float
    B1: float
    A2: float
    C2: float


@lru_cache(maxsize=64)
def singular_constants(g: Geometry) -> SingularConstants:
    s = g.s
    A1 = 1.0 / (2.0 * s - math.tanh(2.0 * s))
    B1 = -A1 / (2.0 * math.cosh(2.0 * s))
    A2 = -1.0 / (2.0 * s + math.sinh(2.0 * s))
    C2 = math.sinh(s) ** 2 / g.a * A2
    return SingularConstants(A1, B1, A2, C2)


def h1_series(g: Geometry) -> StreamSeries:
    """``h Psi_1 = (A_1 zeta + B_1 sinh 2 zeta) sin theta``."""
    c = singular_constants(g)
    return StreamSeries.from_terms(
        [StreamTerm(c.A1, "zeta", 0, "sin", 1), StreamTerm(c.B1, "sinh", 2, "sin", 1)]
    )


def h2_tilde_series(g: Geometry) -> StreamSeries:
    """``h Psi~_2 = A_2 zeta sinh zeta``."""
    c = singular_constants(g)
    return StreamSeries.from_terms([StreamTerm(c.A2, "zeta_sinh", 1, "cos", 0)])


def _prepare(zeta, theta):
    zeta, theta = np.broadcast_arrays(np.asarray(zeta, dtype=float), np.asarray(theta, dtype=float))
    far = near_infinity(zeta, theta)
    # evaluate far points at a harmless placeholder and overwrite with the limit
    zs = np.where(far, 0.0, zeta)
    ts = np.where(far, np.pi, theta)
    return zs, ts, far


def _assemble(g, zs, ts, far, u_z, u_t, p, e_zz, e_zt, e_tt) -> FieldSample:
    fr = frame_xi(zs, ts)
    X = fr.matrix
    u = np.stack([X[..., 0, 0] * u_z + X[..., 0, 1] * u_t, X[..., 1, 0] * u_z + X[..., 1, 1] * u_t], axis=-1)
    E = tensor_to_cartesian(fr, (e_zz, e_zt, e_tt))
    u[far] = 0.0
    p = np.where(far, 0.0, p)
    E[far] = 0.0
    return FieldSample(u, p, E, g.mu)


def h1_field(g: Geometry, zeta, theta) -> FieldSample:
    """``(h_1, p_1)``; the limit at infinity is zero velocity, pressure and strain."""
    c = singular_constants(g)
    zs, ts, far = _prepare(zeta, theta)
    ch, c1 = np.cosh(zs), np.cos(ts)
    sh, s1 = np.sinh(zs), np.sin(ts)
    d = ch - c1
    h = d / g.a
    alpha = (1.0 - ch * c1) / d
    core = c.A1 * zs + c.B1 * np.sinh(2.0 * zs)
    u_z = core * alpha
    u_t = s1 * (c.A1 + 2.0 * c.B1 * np.cosh(2.0 * zs) - sh * core / d)
    k = 2.0 * g.mu / g.a
    p = k * ((c.A1 - 2.0 * c.B1) * ch * c1 + c.B1 * np.cosh(2.0 * zs) * np.cos(2.0 * ts)) - k * (c.A1 - c.B1)
    e_zz = -h * (c.A1 + 2.0 * c.B1 * np.cosh(2.0 * zs)) * c1
    e_zt = h * 2.0 * c.B1 * np.sinh(2.0 * zs) * s1
    return _assemble(g, zs, ts, far, u_z, u_t, p, e_zz, e_zt, -e_zz)


def h2_tilde_field(g: Geometry, zeta, theta) -> FieldSample:
    """``(h~_2, p~_2)``; zero limit at infinity."""
    c = singular_constants(g)
    zs, ts, far = _prepare(zeta, theta)
    fr = frame_xi(zs, ts)
    sh = np.sinh(zs)
    h = (np.cosh(zs) - np.cos(ts)) / g.a
    u_z = c.A2 * zs * fr.beta
    u_t = c.A2 * zs * fr.alpha + c.A2 * sh
    p = -(2.0 * g.mu / g.a) * c.A2 * sh * np.sin(ts)
    zero = np.zeros_like(zs)
    e_zt = h * c.A2 * np.cosh(zs)
    return _assemble(g, zs, ts, far, u_z, u_t, p, zero, e_zt, zero)


def _check_narrow(g: Geometry, y, region_factor: float) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(y) > region_factor * math.sqrt(g.delta) * (1.0 + 1e-12)):
        raise DomainError(f"|y| must not exceed {region_factor} * sqrt(delta) in the gap region")
    return y


def sigma_h1_narrow(g: Geometry, y, region_factor: float = 1.0) -> np.ndarray:
    """Leading gap stress of ``(h_1, p_1)`` in the form
    ``-(3/4) mu R delta^-2 (y^2 + 3 R delta)(y^2 - R delta) / (y^2 + R delta)^2 * I``.

    This form omits the constant ``(3/4) mu R delta^-2`` that the pressure
    gauge at infinity adds; see :func:`sigma_h1_gap`.
    """
    y = _check_narrow(g, y, region_factor)
    rd = g.R * g.delta
    y2 = y * y
    f = -0.75 * g.mu * g.R / g.delta**2 * (y2 + 3 * rd) * (y2 - rd) / (y2 + rd) ** 2
    return f[..., None, None] * np.eye(2)


def sigma_h1_gap(g: Geometry, y, region_factor: float = 1.0) -> np.ndarray:
    """Leading gap stress of ``(h_1, p_1)`` with ``p_1 -> 0`` at infinity:
    ``3 mu R^3 / (y^2 + R delta)^2 * I``."""
    y = _check_narrow(g, y, region_factor)
    f = 3.0 * g.mu * g.R**3 / (y * y + g.R * g.delta) ** 2
    return f[..., None, None] * np.eye(2)


def sigma_h2_narrow(g: Geometry, y, region_factor: float = 1.0) -> np.ndarray:
    """Leading gap stress ``mu / delta * R delta / (y^2 + R delta) * [[0, 1], [1, 0]]``."""
    y = _check_narrow(g, y, region_factor)
    rd = g.R * g.delta
    f = g.mu / g.delta * rd / (y * y + rd)
    return f[..., None, None] * np.array([[0.0, 1.0], [1.0, 0.0]])
