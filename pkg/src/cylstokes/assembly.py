"""Boundary integrals, rigid-motion constants and the composed flow.

For a background ``U = [[a, c], [d, -a]] x`` the solution splits as

    u = a u_ex + (c + d)/2 u_sh + (c - d)/2 (y, -x),

with ``u_ex = v_1 + 2 c21 h_1`` and ``u_sh = v_2 + 2 c22 h_2 + c23 h_rot``,
where ``h_2 = h~_2 + C_2 h_rot``.  The rotation part moves the cylinders
rigidly and carries no stress.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, DegeneracyError, DomainError
from .fields import FieldSample, linear_field
from .geometry import Geometry, bipolar_to_cart, cart_to_bipolar, inside_disks
from .noslip import BACKGROUND_MATRIX, field_v, field_v_grid, k_rot, k_v, phi2_coefficients, phirot_coefficients
from .singular import h1_field, h2_tilde_field, singular_constants


def Qn(s: float, n: int) -> float:
    """``int_{-pi}^{pi} cos(n t) / (cosh s - cos t) dt = 2 pi exp(-n s) / sinh s``."""
    if s <= 0:
        raise ConfigurationError("s must be positive")
    if n < 0 or int(n) != n:
        raise ConfigurationError("n must be a non-negative integer")
    return 2.0 * math.pi * math.exp(-n * s) / math.sinh(s)


@dataclass(frozen=True)
class IntegralSet:
    """Pairings ``int_{dD_2} psi . sigma nu dl`` (``nu`` points into the fluid).

    ``I23`` pairs ``psi_3`` with ``sigma[h_2]``; ``I32`` pairs ``psi_2`` with
    ``sigma[h_rot]``.  Green's identity over both cylinders gives ``I32 = 2 I23``.
    """

    I1: float
    J1: float
    I22: float
    I23: float
    I32: float
    Irot: float
    J2: float
    Jrot: float

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RigidConstants:
    c21: float
    c22: float
    c23: float
    det: float
    cond: float

    def to_json(self) -> dict:
        return asdict(self)


@lru_cache(maxsize=32)
def boundary_integrals(g: Geometry) -> IntegralSet:
    s, mu, a = g.s, g.mu, g.a
    sc = singular_constants(g)
    four = 4.0 * math.pi * mu
    I1 = -four * sc.A1
    J1 = (
        -a * mu * sc.A1 / math.cosh(2.0 * s) * math.sinh(s)
        * ((2.0 * math.cosh(2.0 * s) - 1.0) * Qn(s, 0) - 2.0 * math.cosh(s) * Qn(s, 1) + Qn(s, 2))
    )
    d0_rot = phirot_coefficients(g).low["d0"]
    d0_sh = phi2_coefficients(g).low["d0"]
    Kr = k_rot(g)
    Irot = four * a * Kr
    I32 = four * d0_rot
    # psi_3 sees only the K-log part of h_rot inside h_2 = h~_2 + C_2 h_rot
    I23 = sc.C2 * Irot
    I22 = four * sc.A2 + sc.C2 * I32
    J2 = -0.5 * four * d0_sh
    Jrot = -four * a * k_v(g)
    return IntegralSet(I1, J1, I22, I23, I32, Irot, J2, Jrot)


@lru_cache(maxsize=32)
def rigid_constants(g: Geometry) -> RigidConstants:
    """``c21 = J_1 / I_1`` and the 2x2 system ``[[I22, I23], [I32, Irot]] (c22, c23) = (J2, Jrot)``."""
    it = boundary_integrals(g)
    if it.I1 == 0.0:
        raise DegeneracyError("I1 vanishes; c21 is undefined")
    c21 = it.J1 / it.I1
    A = np.array([[it.I22, it.I23], [it.I32, it.Irot]])
    det = it.I22 * it.Irot - it.I23 * it.I32
    scale = np.abs(A).max() ** 2
    if not np.isfinite(det) or abs(det) <= 1e-13 * scale:
        raise DegeneracyError(f"rigid-motion system is singular (det = {det:.3e})")
    c22 = (it.Irot * it.J2 - it.I23 * it.Jrot) / det
    c23 = (it.I22 * it.Jrot - it.I32 * it.J2) / det
    return RigidConstants(c21, c22, c23, det, float(np.linalg.cond(A)))


@dataclass(frozen=True)
class Background:
    """``U(x, y) = [[a, c], [d, -a]] (x, y)``."""

    a_coef: float
    c_coef: float
    d_coef: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a_coef, self.c_coef], [self.d_coef, -self.a_coef]])

    @property
    def weights(self) -> tuple[float, float, float]:
        """Amplitudes of ``U_ex``, ``U_sh`` and the rotation ``(y, -x)``."""
        c, d = self.c_coef, self.d_coef
        return self.a_coef, 0.5 * (c + d), 0.5 * (c - d)


BACKGROUNDS = {
    "ex": Background(1.0, 0.0, 0.0),
    "sh": Background(0.0, 1.0, 1.0),
    "rot": Background(0.0, 1.0, -1.0),
}


def parse_background(spec) -> Background:
    """Accept a :class:`Background`, a name in ``BACKGROUNDS`` or an ``(a, c, d)`` triple."""
    if isinstance(spec, Background):
        return spec
    if isinstance(spec, str):
        if spec in BACKGROUNDS:
            return BACKGROUNDS[spec]
        try:
            vals = [float(v) for v in spec.split(",")]
        except ValueError:
            vals = []
        if len(vals) != 3:
            raise ConfigurationError(f"background must be one of {sorted(BACKGROUNDS)} or 'a,c,d'")
        return Background(*vals)
    a, c, d = spec
    return Background(float(a), float(c), float(d))


@dataclass(frozen=True)
class FlowSolution:
    geometry: Geometry
    background: Background
    constants: RigidConstants
    integrals: IntegralSet

    @property
    def weights(self) -> tuple[float, float, float]:
        return self.background.weights


def solve_flow(g: Geometry, bg) -> FlowSolution:
    bg = parse_background(bg)
    w_ex, w_sh, _ = bg.weights
    if w_ex == 0.0 and w_sh == 0.0 and bg.c_coef == bg.d_coef:
        raise DegeneracyError("background is identically zero")
    if not all(math.isfinite(v) for v in (bg.a_coef, bg.c_coef, bg.d_coef)):
        raise ConfigurationError("background coefficients must be finite")
    return FlowSolution(g, bg, rigid_constants(g), boundary_integrals(g))


def _pointwise(g, case, zeta, theta):
    return field_v(g, case, zeta, theta)


def _gridwise(zeta_1d, theta_1d):
    def series(g, case, zeta, theta):
        return field_v_grid(g, case, zeta_1d, theta_1d)

    return series


def extensional_part(g: Geometry, zeta, theta, _series=_pointwise) -> FieldSample:
    """``(u_ex, p_ex) = (v_1, q_1) + 2 c21 (h_1, p_1)``."""
    c21 = rigid_constants(g).c21
    return _series(g, "extensional", zeta, theta) + h1_field(g, zeta, theta).scaled(2.0 * c21)


def h2_field(g: Geometry, zeta, theta, h_rot: FieldSample | None = None) -> FieldSample:
    """``(h_2, p_2) = (h~_2, p~_2) + C_2 (h_rot, p_rot)``."""
    if h_rot is None:
        h_rot = field_v(g, "rotation", zeta, theta)
    return h2_tilde_field(g, zeta, theta) + h_rot.scaled(singular_constants(g).C2)


def shear_part(g: Geometry, zeta, theta, _series=_pointwise) -> FieldSample:
    """``(u_sh, p_sh) = (v_2, q_2) + 2 c22 (h_2, p_2) + c23 (h_rot, p_rot)``."""
    rc = rigid_constants(g)
    h_rot = _series(g, "rotation", zeta, theta)
    return (
        _series(g, "shear", zeta, theta)
        + h2_field(g, zeta, theta, h_rot).scaled(2.0 * rc.c22)
        + h_rot.scaled(rc.c23)
    )


def _compose(sol: FlowSolution, zeta, theta, series) -> FieldSample:
    g = sol.geometry
    w_ex, w_sh, w_rot = sol.weights
    out = FieldSample.zeros(zeta.shape, g.mu)
    if w_ex:
        out = out + extensional_part(g, zeta, theta, series).scaled(w_ex)
    if w_sh:
        out = out + shear_part(g, zeta, theta, series).scaled(w_sh)
    if w_rot:
        x, y = bipolar_to_cart(g, zeta, theta)
        out = out + linear_field(x, y, BACKGROUND_MATRIX["rotation"], g.mu).scaled(w_rot)
    return out


def eval_flow_bipolar(sol: FlowSolution, zeta, theta) -> FieldSample:
    """Composed fields at bipolar points ``|zeta| <= s``."""
    zeta, theta = np.broadcast_arrays(np.asarray(zeta, dtype=float), np.asarray(theta, dtype=float))
    return _compose(sol, zeta, theta, _pointwise)


def eval_flow_grid(sol: FlowSolution, zeta_1d, theta_1d) -> FieldSample:
    """Composed fields on the tensor grid ``zeta_1d x theta_1d``; shapes ``(nz, nt, ...)``."""
    zeta_1d = np.atleast_1d(np.asarray(zeta_1d, dtype=float))
    theta_1d = np.atleast_1d(np.asarray(theta_1d, dtype=float))
    Z, T = np.meshgrid(zeta_1d, theta_1d, indexing="ij")
    return _compose(sol, Z, T, _gridwise(zeta_1d, theta_1d))


def eval_flow(sol: FlowSolution, x, y) -> FieldSample:
    """Cartesian fields at exterior points; points inside a cylinder raise :class:`DomainError`."""
    g = sol.geometry
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if np.any(inside_disks(g, x, y, tol=1e-12 * g.R)):
        raise DomainError("point lies inside a cylinder")
    zeta, theta = cart_to_bipolar(g, x, y)
    # snap boundary points onto the circles so series are not evaluated beyond them
    zeta = np.clip(zeta, -g.s, g.s)
    return eval_flow_bipolar(sol, zeta, theta)


def sigma_narrow_asymptotic(g: Geometry, bg, y, region_factor: float = 1.0, form: str = "gauge") -> np.ndarray:
    """Leading gap stress at ``x = 0`` as a ``(..., 2, 2)`` array.

    ``form="literal"`` uses ``2 mu sqrt(R/delta) (y^2 + 3 R delta)(y^2 - R delta)/(y^2 + R delta)^2 I``
    for ``U_ex``.  ``form="gauge"`` uses ``12 mu sqrt(R/delta) (R delta)^2 / (y^2 + R delta)^2 I``,
    which is ``2 c21 sigma[h_1]`` with ``c21 ~ 2 delta^{3/2}/sqrt(R)`` and ``p_1 -> 0`` at infinity.
    Both use ``2 mu sqrt(R/delta) R delta / (y^2 + R delta) [[0, 1], [1, 0]]`` for ``U_sh``.
    """
    bg = parse_background(bg)
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(y) > region_factor * math.sqrt(g.delta) * (1.0 + 1e-12)):
        raise DomainError(f"|y| must not exceed {region_factor} * sqrt(delta) in the gap region")
    if form not in ("literal", "gauge"):
        raise ConfigurationError("form must be 'literal' or 'gauge'")
    R, delta, mu = g.R, g.delta, g.mu
    rd = R * delta
    y2 = y * y
    lead = 2.0 * mu * math.sqrt(R / delta)
    if form == "literal":
        f_ex = lead * (y2 + 3.0 * rd) * (y2 - rd) / (y2 + rd) ** 2
    else:
        f_ex = 6.0 * lead * rd**2 / (y2 + rd) ** 2
    f_sh = lead * rd / (y2 + rd)
    w_ex, w_sh, _ = bg.weights
    eye = np.eye(2)
    off = np.array([[0.0, 1.0], [1.0, 0.0]])
    return (w_ex * f_ex)[..., None, None] * eye + (w_sh * f_sh)[..., None, None] * off
