"""Two-cylinder configuration and bipolar coordinates.

The cylinders have common radius ``R`` and are separated by a gap ``delta``
along the x-axis. Bipolar coordinates ``(zeta, theta)`` with foci ``(+-a, 0)``
map the fluid region onto the strip ``-s < zeta < s``; the point at infinity
corresponds to ``(zeta, theta) = (0, 0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError, DomainError

TWO_PI = 2.0 * math.pi

# points closer than this to (0, 0) in the (zeta, theta) plane count as infinity
INFINITY_RADIUS = 1e-8


@dataclass(frozen=True)
class Geometry:
    R: float
    delta: float
    mu: float
    a: float
    s: float

    @property
    def centers(self) -> tuple[tuple[float, float], tuple[float, float]]:
        c = self.R + 0.5 * self.delta
        return (-c, 0.0), (c, 0.0)

    @property
    def narrow_half_width(self) -> float:
        """Half-height ``sqrt(delta)`` of the gap region."""
        return math.sqrt(self.delta)


class BipolarPoint(NamedTuple):
    zeta: np.ndarray | float
    theta: np.ndarray | float


class Frame(NamedTuple):
    """Entries of the symmetric orthogonal matrix ``Xi = [e_zeta, e_theta]``."""

    alpha: np.ndarray | float
    beta: np.ndarray | float

    @property
    def matrix(self) -> np.ndarray:
        al = np.asarray(self.alpha, dtype=float)
        be = np.asarray(self.beta, dtype=float)
        out = np.empty(al.shape + (2, 2))
        out[..., 0, 0] = al
        out[..., 0, 1] = -be
        out[..., 1, 0] = -be
        out[..., 1, 1] = -al
        return out


def make_geometry(R: float = 1.0, delta: float = 1e-2, mu: float = 1.0) -> Geometry:
    for name, value in (("R", R), ("delta", delta), ("mu", mu)):
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ConfigurationError(f"{name} must be a positive finite number, got {value!r}")
    R, delta, mu = float(R), float(delta), float(mu)
    a = math.sqrt(delta * (R + 0.25 * delta))
    s = math.asinh(a / R)
    return Geometry(R=R, delta=delta, mu=mu, a=a, s=s)


def _wrap(theta):
    return np.mod(theta, TWO_PI)


def near_infinity(zeta, theta) -> np.ndarray:
    """Mask of bipolar points within ``INFINITY_RADIUS`` of ``(0, 0)``."""
    t = _wrap(np.asarray(theta, dtype=float))
    t = np.minimum(t, TWO_PI - t)
    return np.maximum(np.abs(zeta), t) < INFINITY_RADIUS


def _check_finite_point(zeta, theta) -> None:
    if np.any(near_infinity(zeta, theta)):
        raise DomainError("(zeta, theta) = (0, 0) is the point at infinity")


def bipolar_to_cart(g: Geometry, zeta, theta) -> tuple[np.ndarray, np.ndarray]:
    zeta = np.asarray(zeta, dtype=float)
    theta = np.asarray(theta, dtype=float)
    _check_finite_point(zeta, theta)
    d = np.cosh(zeta) - np.cos(theta)
    return g.a * np.sinh(zeta) / d, g.a * np.sin(theta) / d


def cart_to_bipolar(g: Geometry, x, y) -> BipolarPoint:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a = g.a
    dm = (x - a) ** 2 + y**2
    if np.any(dm == 0.0) or np.any((x + a) ** 2 + y**2 == 0.0):
        raise DomainError("the foci (+-a, 0) have no bipolar image")
    # log of the distance ratio, written to stay accurate far from the foci
    zeta = 0.5 * np.log1p(4.0 * a * x / dm)
    theta = _wrap(np.arctan2(2.0 * a * y, x * x + y * y - a * a))
    return BipolarPoint(zeta, theta)


def frame_xi(zeta, theta) -> Frame:
    zeta = np.asarray(zeta, dtype=float)
    theta = np.asarray(theta, dtype=float)
    _check_finite_point(zeta, theta)
    ch, c = np.cosh(zeta), np.cos(theta)
    d = ch - c
    return Frame((1.0 - ch * c) / d, np.sinh(zeta) * np.sin(theta) / d)


def scale_h(g: Geometry, zeta, theta):
    """Scale factor ``h = (cosh zeta - cos theta) / a``; ``dl = dtheta / h`` on ``zeta = const``."""
    zeta = np.asarray(zeta, dtype=float)
    theta = np.asarray(theta, dtype=float)
    _check_finite_point(zeta, theta)
    return (np.cosh(zeta) - np.cos(theta)) / g.a


def inside_disks(g: Geometry, x, y, tol: float = 0.0) -> np.ndarray:
    """True where ``(x, y)`` lies strictly inside either cylinder (beyond ``tol``)."""
    (c1, _), (c2, _) = g.centers
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r1 = np.hypot(x - c1, y)
    r2 = np.hypot(x - c2, y)
    return (r1 < g.R - tol) | (r2 < g.R - tol)


def boundary_points(g: Geometry, n: int, side: int = 2) -> BipolarPoint:
    """``n`` equispaced theta nodes on ``zeta = -s`` (side 1) or ``zeta = s`` (side 2)."""
    if side not in (1, 2):
        raise ConfigurationError("side must be 1 or 2")
    theta = TWO_PI * np.arange(n) / n
    zeta = np.full(n, g.s if side == 2 else -g.s)
    return BipolarPoint(zeta, theta)
