"""Point samples of velocity, pressure, strain and stress."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FieldSample:
    """Cartesian fields at a batch of points.

    ``u`` has shape ``(..., 2)``, ``p`` shape ``(...)`` and ``E`` shape ``(..., 2, 2)``.
    """

    u: np.ndarray
    p: np.ndarray
    E: np.ndarray
    mu: float

    @property
    def sigma(self) -> np.ndarray:
        eye = np.eye(2)
        return -self.p[..., None, None] * eye + 2.0 * self.mu * self.E

    def __add__(self, other: "FieldSample") -> "FieldSample":
        return FieldSample(self.u + other.u, self.p + other.p, self.E + other.E, self.mu)

    def scaled(self, c: float) -> "FieldSample":
        return FieldSample(c * self.u, c * self.p, c * self.E, self.mu)

    @classmethod
    def zeros(cls, shape, mu: float) -> "FieldSample":
        shape = tuple(shape)
        return cls(np.zeros(shape + (2,)), np.zeros(shape), np.zeros(shape + (2, 2)), mu)


def linear_field(x, y, matrix, mu: float) -> FieldSample:
    """Stokes pair ``(M x, 0)`` for a trace-free 2x2 matrix ``M``."""
    M = np.asarray(matrix, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    u = np.stack([M[0, 0] * x + M[0, 1] * y, M[1, 0] * x + M[1, 1] * y], axis=-1)
    sym = 0.5 * (M + M.T)
    E = np.broadcast_to(sym, x.shape + (2, 2)).copy()
    return FieldSample(u, np.zeros(x.shape), E, mu)


def rigid_motion(j: int, x, y) -> np.ndarray:
    """``psi_1 = (1, 0)``, ``psi_2 = (0, 1)``, ``psi_3 = (y, -x)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if j == 1:
        return np.stack([np.ones_like(x), np.zeros_like(x)], axis=-1)
    if j == 2:
        return np.stack([np.zeros_like(x), np.ones_like(x)], axis=-1)
    if j == 3:
        return np.stack([y, -x], axis=-1)
    raise ValueError("rigid motion index must be 1, 2 or 3")
