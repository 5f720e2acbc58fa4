"""Independent numerical oracles.

Finite-difference Stokes residuals, trapezoid contour pairings, sup-norm
estimates on bipolar grids, log-log rate fits and the small-``s`` expansion of
``M``.  None of these use the closed forms they are meant to check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate, stats

from .assembly import FlowSolution, eval_flow, eval_flow_grid
from .errors import ConfigurationError, ConvergenceError, DomainError
from .fields import FieldSample, rigid_motion
from .geometry import Geometry, bipolar_to_cart, boundary_points, frame_xi, scale_h
from .noslip import F0_G0, m_series


# ---------------------------------------------------------------------------
# finite differences


def distance_to_boundary(g: Geometry, x, y) -> np.ndarray:
    (c1, _), (c2, _) = g.centers
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.minimum(np.hypot(x - c1, y), np.hypot(x - c2, y)) - g.R


def _as_callable(sol):
    if isinstance(sol, FlowSolution):
        return sol.geometry, lambda x, y: eval_flow(sol, x, y)
    g, fn = sol
    return g, fn


def fd_stokes_residual(sol, x, y, step=None, floor: float = 1e-6) -> tuple[np.ndarray, np.ndarray]:
    """Relative momentum and divergence residuals by central differences.

    ``sol`` is a :class:`FlowSolution` or a pair ``(geometry, fn)`` with
    ``fn(x, y) -> FieldSample``.  The default step is ``3e-3`` times the
    distance ``d`` to the nearer cylinder.  Momentum residuals are scaled by
    ``|grad p| + mu |Laplacian u| + mu |grad u| / d``, divergence residuals by
    ``|grad u|``; both scales are floored at ``floor`` times their sample
    maximum.  Deep in the gap the no-slip fields reduce to rigid motions or
    vanish, so second-derivative terms alone would only measure rounding noise.
    """
    g, fn = _as_callable(sol)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    dist = distance_to_boundary(g, x, y)
    if np.any(dist <= 0):
        raise DomainError("residual points must lie strictly outside both cylinders")
    h = 3e-3 * dist if step is None else np.broadcast_to(np.asarray(step, dtype=float), x.shape)
    if np.any(h >= dist):
        raise DomainError("finite-difference stencil crosses a cylinder boundary")
    c = fn(x, y)
    xp, xm = fn(x + h, y), fn(x - h, y)
    yp, ym = fn(x, y + h), fn(x, y - h)
    hh = h[:, None]
    lap = (xp.u + xm.u + yp.u + ym.u - 4.0 * c.u) / hh**2
    grad_p = np.stack([(xp.p - xm.p) / (2 * h), (yp.p - ym.p) / (2 * h)], axis=-1)
    du_dx = (xp.u - xm.u) / (2 * hh)
    du_dy = (yp.u - ym.u) / (2 * hh)
    mom = np.linalg.norm(g.mu * lap - grad_p, axis=-1)
    div = np.abs(du_dx[:, 0] + du_dy[:, 1])
    div_scale = np.sqrt((du_dx**2).sum(-1) + (du_dy**2).sum(-1))
    mom_scale = np.linalg.norm(grad_p, axis=-1) + g.mu * (np.linalg.norm(lap, axis=-1) + div_scale / dist)
    tiny = np.finfo(float).tiny
    mom_scale = np.maximum(mom_scale, max(floor * mom_scale.max(), tiny))
    div_scale = np.maximum(div_scale, max(floor * div_scale.max(), tiny))
    return mom / mom_scale, div / div_scale


def random_interior_points(g: Geometry, n: int, seed: int = 0, half_width: float = 3.0):
    """Uniform random points in ``[-L, L]^2`` outside both cylinders, ``L = half_width * (R + delta)``.

    Cartesian sampling keeps most points where every building block is well
    above rounding level; in the neck between the cylinders the no-slip
    fields decay exponentially.
    """
    rng = np.random.default_rng(seed)
    L = half_width * (g.R + g.delta)
    xs, ys = [], []
    while sum(len(v) for v in xs) < n:
        x = rng.uniform(-L, L, 2 * n)
        y = rng.uniform(-L, L, 2 * n)
        keep = distance_to_boundary(g, x, y) > 1e-3 * g.R
        xs.append(x[keep])
        ys.append(y[keep])
    return np.concatenate(xs)[:n], np.concatenate(ys)[:n]


# ---------------------------------------------------------------------------
# contour pairings


def _traction_pairing(g: Geometry, fn, psi, side: int, n: int) -> float:
    zeta, theta = boundary_points(g, n, side)
    fs = fn(zeta, theta)
    fr = frame_xi(zeta, theta)
    e_zeta = np.stack([fr.alpha, -fr.beta], axis=-1)
    nu = -e_zeta if side == 2 else e_zeta
    traction = np.einsum("...ij,...j->...i", fs.sigma, nu)
    x, y = bipolar_to_cart(g, zeta, theta)
    w = psi(x, y)
    integrand = np.sum(w * traction, axis=-1) / scale_h(g, zeta, theta)
    return float(integrand.sum() * 2.0 * math.pi / n)


def contour_pairing(
    g: Geometry, fn, j, side: int = 2, n: int = 2048, rtol: float = 1e-9, atol: float = 0.0, max_n: int = 1 << 17
) -> float:
    """``int_{dD_side} psi . sigma nu dl`` by the periodic trapezoid rule in ``theta``.

    ``fn(zeta, theta) -> FieldSample``.  ``j`` is 1, 2 or 3 for a rigid motion
    or a 2x2 matrix ``U`` for the linear field ``U x``.  ``nu`` points into the
    fluid.  The node count doubles until successive values agree to ``rtol``
    (relative) or ``atol``; the latter is needed for pairings that vanish.
    """
    if isinstance(j, (int, np.integer)):
        psi = lambda x, y: rigid_motion(int(j), x, y)  # noqa: E731
    else:
        U = np.asarray(j, dtype=float)
        psi = lambda x, y: np.stack([U[0, 0] * x + U[0, 1] * y, U[1, 0] * x + U[1, 1] * y], axis=-1)  # noqa: E731
    prev = _traction_pairing(g, fn, psi, side, n)
    while n < max_n:
        n *= 2
        cur = _traction_pairing(g, fn, psi, side, n)
        scale = max(abs(cur), abs(prev))
        if abs(cur - prev) <= max(rtol * scale, atol):
            return cur
        prev = cur
    raise ConvergenceError(f"contour pairing did not settle with {max_n} nodes")


def max_boundary_stress(g: Geometry, fn, side: int = 2, n: int = 2048) -> float:
    zeta, theta = boundary_points(g, n, side)
    return float(np.abs(fn(zeta, theta).sigma).max())


def qn_quadrature(s: float, n: int) -> float:
    """``int_{-pi}^{pi} cos(n t)/(cosh s - cos t) dt`` by adaptive quadrature."""
    val, _ = integrate.quad(
        lambda t: math.cos(n * t) / (math.cosh(s) - math.cos(t)),
        -math.pi, math.pi, points=[0.0], epsabs=1e-13, epsrel=1e-13, limit=400,
    )
    return val


# ---------------------------------------------------------------------------
# sup norms and rates


QUANTITIES = ("pressure", "strain", "stress")


def bipolar_grid(g: Geometry, nz: int = 21, nt: int = 400):
    """``zeta`` uniform on ``[-s, s]``; ``theta`` uniform plus geometric clustering near ``0``.

    The gap is the ``theta ~ pi`` band, resolved by the uniform part; the far
    sides of the cylinders are squeezed into ``theta = O(s)``.
    """
    zeta = np.linspace(-g.s, g.s, nz)
    uni = np.linspace(0.0, 2 * math.pi, nt + 1)[1:-1]
    near = g.s * np.geomspace(1e-2, 1e2, max(nt // 4, 8))
    theta = np.unique(np.r_[uni, near, 2 * math.pi - near])
    theta = theta[(theta > 0) & (theta < 2 * math.pi)]
    return zeta, theta


def _norm_field(fs: FieldSample, quantity: str) -> np.ndarray:
    if quantity == "pressure":
        return np.abs(fs.p)
    if quantity == "strain":
        return np.linalg.norm(fs.E, ord=2, axis=(-2, -1))
    if quantity == "stress":
        return np.linalg.norm(fs.sigma, ord=2, axis=(-2, -1))
    raise ConfigurationError(f"quantity must be one of {QUANTITIES}")


@dataclass(frozen=True)
class SupNorm:
    value: float
    coarse: float
    location: tuple[float, float]
    converged: bool

    def to_json(self) -> dict:
        return asdict(self)


def sup_norms(sol: FlowSolution, quantities=QUANTITIES, nz: int = 21, nt: int = 400, rtol: float = 0.01) -> dict:
    """:class:`SupNorm` per quantity, sharing one coarse and one doubled grid evaluation."""
    for q in quantities:
        if q not in QUANTITIES:
            raise ConfigurationError(f"quantity must be one of {QUANTITIES}")
    g = sol.geometry
    samples = {q: [] for q in quantities}
    for k in (1, 2):
        zeta, theta = bipolar_grid(g, 2 * k * (nz // 2) + 1, k * nt)
        fs = eval_flow_grid(sol, zeta, theta)
        for q in quantities:
            arr = _norm_field(fs, q)
            i = np.unravel_index(np.argmax(arr), arr.shape)
            samples[q].append((float(arr[i]), zeta[i[0]], theta[i[1]]))
    out = {}
    for q, ((coarse, _, _), (fine, zi, ti)) in samples.items():
        converged = abs(fine - coarse) <= rtol * max(abs(fine), np.finfo(float).tiny)
        if not converged:
            warnings.warn(f"sup-norm of {q} not settled under grid doubling", RuntimeWarning, stacklevel=2)
        x, y = bipolar_to_cart(g, zi, ti)
        out[q] = SupNorm(fine, coarse, (float(x), float(y)), bool(converged))
    return out


def sup_norm_estimate(sol: FlowSolution, quantity: str, nz: int = 21, nt: int = 400, rtol: float = 0.01) -> SupNorm:
    """Maximum of ``|p|``, ``|E|_2`` or ``|sigma|_2`` over a bipolar grid, with one doubling.

    ``converged`` is false (and a warning is issued) when the doubled grid
    moves the estimate by more than ``rtol``.
    """
    return sup_norms(sol, (quantity,), nz, nt, rtol)[quantity]


@dataclass(frozen=True)
class RateFit:
    deltas: list
    values: list
    slope: float
    intercept: float
    r_squared: float
    excluded: list = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


def fit_rate(pairs, r2_threshold: float = 0.99) -> RateFit:
    """Least-squares slope of ``log value`` against ``log delta``.

    If ``r^2`` is below ``r2_threshold`` and at least three gaps remain, the
    largest gap is dropped once and recorded in ``excluded``.
    """
    pairs = sorted((float(d), float(v)) for d, v in pairs)
    if len(pairs) < 3:
        raise ConfigurationError("a rate fit needs at least three gaps")
    ds = np.array([p[0] for p in pairs])
    if np.any(ds <= 0) or any(p[1] <= 0 for p in pairs):
        raise ConfigurationError("gaps and values must be positive")
    if math.log10(ds.max() / ds.min()) < 2.0 - 1e-9:
        raise ConfigurationError("the gaps must span at least two decades")

    def fit(ps):
        lx = np.log([p[0] for p in ps])
        ly = np.log([p[1] for p in ps])
        if np.ptp(ly) == 0.0:
            return 0.0, float(ly[0]), 1.0
        r = stats.linregress(lx, ly)
        return float(r.slope), float(r.intercept), float(r.rvalue**2)

    slope, icpt, r2 = fit(pairs)
    excluded = []
    if r2 < r2_threshold and len(pairs) > 3:
        excluded = [pairs[-1][0]]
        pairs = pairs[:-1]
        slope, icpt, r2 = fit(pairs)
    return RateFit([p[0] for p in pairs], [p[1] for p in pairs], slope, icpt, r2, excluded)


# ---------------------------------------------------------------------------
# series checks


def euler_maclaurin_check(s: float) -> dict:
    """Compare ``(M(s) + 1/2) / s^2`` with ``F_0``; the remainder is ``O(s)``."""
    if not 0 < s <= 0.1:
        raise ConfigurationError("s must lie in (0, 0.1]")
    from .noslip import m_plus_half

    F0, _ = F0_G0()
    ratio = m_plus_half(s) / s**2
    return {"s": s, "M": m_series(s), "ratio": ratio, "F0": F0, "deviation": abs(ratio - F0), "bound": 10 * s}


def f_s_sum(s: float) -> float:
    """``M(s) + 1/2`` from the shifted terms ``M_n + 2 / (n (n^2 - 1))``.

    Each shifted term equals ``4 (sinh^2 ns - n^2 sinh^2 s) / (n (n^2-1)(sinh 2ns + n sinh 2s))``
    and tends to ``2 / (n (n^2 - 1))`` up to ``exp(-2ns)``.  Terms are summed
    explicitly up to ``n0 = ceil(40 / s)`` and the tail of ``2 / (n (n^2 - 1))``
    telescopes to ``1 / (n0 (n0 + 1))``.  Generic sequence extrapolation
    (``mpmath.nsum``) stalls near ``1e-6`` relative here because the terms cross
    over from exponential to algebraic decay around ``n ~ 1/s``.
    """
    import mpmath

    if not 0 < s <= 1.0:
        raise ConfigurationError("s must lie in (0, 1]")
    n0 = int(math.ceil(40.0 / s))
    with mpmath.workdps(30):
        S = mpmath.mpf(s)
        sh2 = mpmath.sinh(2 * S)
        shs2 = mpmath.sinh(S) ** 2
        total = mpmath.fsum(
            4 * (mpmath.sinh(n * S) ** 2 - n * n * shs2) / (n * (n * n - 1) * (mpmath.sinh(2 * n * S) + n * sh2))
            for n in range(2, n0 + 1)
        )
        return float(total + mpmath.mpf(1) / (n0 * (n0 + 1)))


# ---------------------------------------------------------------------------
# reporting


@dataclass
class Check:
    check_id: str
    target: str
    computed: object
    tolerance: object
    passed: bool
    note: str = ""

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        extra = f" ({self.note})" if self.note else ""
        return f"[{flag}] {self.check_id}: {self.target}; computed={_fmt(self.computed)} tol={_fmt(self.tolerance)}{extra}"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_fmt(x)}" for k, x in v.items()) + "}"
    return str(v)
