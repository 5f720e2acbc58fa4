"""No-slip series solutions ``(v_1, q_1)``, ``(v_2, q_2)`` and ``(h_rot, p_rot)``.

Each solution is a linear background plus a disturbance whose stream function
has bipolar series form.  The totals vanish on both cylinders; for the rotation
case the disturbance alone is ``h_rot``, which equals ``psi_3`` on both
cylinders.  Coefficients are generated in extended precision because the mode
denominators cancel to ``O(n^3 s^3)`` for small ``n s``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np
from scipy import integrate

from .errors import ConfigurationError, DomainError
from .fields import FieldSample, linear_field
from .geometry import Geometry, bipolar_to_cart, near_infinity
from .stream import StreamSeries, eval_hpsi, eval_hpsi_grid, pressure, pressure_grid, stream_kinematics

CASES = ("extensional", "shear", "rotation")

BACKGROUND_MATRIX = {
    "extensional": np.array([[1.0, 0.0], [0.0, -1.0]]),
    "shear": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "rotation": np.array([[0.0, 1.0], [-1.0, 0.0]]),
}

_DPS = 32
# mode products (n s)^3 exp(-n s) / s below this are dropped
DEFAULT_EPS = 1e-14


def truncation_order(s: float, eps: float = DEFAULT_EPS) -> tuple[int, float]:
    """Smallest ``N`` with ``(N s)^3 exp(-N s) <= eps * s``, capped at ``200 / s``.

    Strain terms on the cylinders behave like ``(n s)^3 exp(-n s) / s`` once the
    ``exp(n s)`` growth of ``cosh(n zeta)`` is included.  Returns ``(N, bound)``.
    """
    if s <= 0:
        raise ConfigurationError("s must be positive")
    cap = int(math.ceil(200.0 / s))
    x = 3.0
    while x**3 * math.exp(-x) > eps * s:
        x += 0.25
    n = max(8, int(math.ceil(x / s)))
    if n > cap:
        warnings.warn(f"truncation order capped at {cap}", RuntimeWarning, stacklevel=2)
        n = cap
    bound = (n * s) ** 3 * math.exp(-n * s) / s
    return n, bound


@dataclass(frozen=True, eq=False)
class NoSlipCoefficients:
    case: str
    K: float
    low: dict
    n: np.ndarray
    first: np.ndarray
    second: np.ndarray
    N: int
    tail_bound: float
    series: StreamSeries = field(repr=False)

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "K": self.K,
            "N": self.N,
            "tail_bound": self.tail_bound,
            "low": dict(self.low),
            "n": self.n.tolist(),
            "first": self.first.tolist(),
            "second": self.second.tolist(),
        }


class _Modes:
    """Extended-precision hyperbolic quantities for ``n = 2..N``."""

    def __init__(self, s: float, nmax: int):
        S = mpmath.mpf(s)
        self.S = S
        self.sh, self.ch = mpmath.sinh(S), mpmath.cosh(S)
        self.sh2 = mpmath.sinh(2 * S)
        q = mpmath.exp(-2 * S)
        self.em, self.ep = mpmath.exp(-S), mpmath.exp(S)
        self.rows = []
        qn = q
        for n in range(2, nmax + 1):
            qn = qn * q  # exp(-2 n s)
            es = (1 - qn) / 2  # exp(-ns) sinh(ns)
            ec = (1 + qn) / 2  # exp(-ns) cosh(ns)
            s2n = (1 / qn - qn) / 2  # sinh(2ns)
            self.rows.append((n, es, ec, s2n))


def _to_float(xs) -> np.ndarray:
    return np.array([float(x) for x in xs])


def _check_order(g: Geometry, N):
    if N is None:
        return truncation_order(g.s)
    N = int(N)
    if N < 2:
        raise ConfigurationError("truncation order N must be at least 2")
    return N, (N * g.s) ** 3 * math.exp(-N * g.s) / g.s


@lru_cache(maxsize=32)
def _m_sums(s: float) -> tuple[mpmath.mpf, mpmath.mpf]:
    """``M`` and ``M'`` in extended precision; both have terms decaying like ``exp(-2 n s)``."""
    with mpmath.workdps(_DPS):
        S = mpmath.mpf(s)
        sh, ch = mpmath.sinh(S), mpmath.cosh(S)
        sh2 = mpmath.sinh(2 * S)
        q = mpmath.exp(-2 * S)
        tol = mpmath.mpf(10) ** (-_DPS)
        qn = q
        M = mpmath.mpf(0)
        Mp = mpmath.mpf(0)
        n = 1
        while True:
            n += 1
            qn *= q
            es = (1 - qn) / 2
            den = (1 / qn - qn) / 2 + n * sh2
            t = -4 * (es + n * n * sh * sh + n * sh * ch) / (n * (n * n - 1) * den)
            tp = 4 * n * sh * sh / den
            M += t
            Mp += tp
            if abs(t) < tol * abs(M) and abs(tp) < tol * abs(Mp):
                return M, Mp


def m_series(s: float) -> float:
    """``M(s) = -4 sum_{n>=2} (e^{-ns} sinh ns + n^2 sinh^2 s + n sinh s cosh s) / (n (n^2-1)(sinh 2ns + n sinh 2s))``."""
    return float(_m_sums(float(s))[0])


def m_prime_series(s: float) -> float:
    """``M'(s) = sum_{n>=2} 4 n sinh^2 s / (sinh 2ns + n sinh 2s)``."""
    return float(_m_sums(float(s))[1])


def m_plus_half(s: float) -> float:
    """``M + 1/2``, formed before rounding since ``M`` tends to ``-1/2`` as ``s -> 0``."""
    with mpmath.workdps(_DPS):
        return float(_m_sums(float(s))[0] + mpmath.mpf(1) / 2)


def _kv_krot(g: Geometry) -> tuple[float, float]:
    with mpmath.workdps(_DPS):
        S = mpmath.mpf(g.s)
        A = mpmath.mpf(g.a)
        sh, ch, th = mpmath.sinh(S), mpmath.cosh(S), mpmath.tanh(S)
        M, Mp = _m_sums(g.s)
        Mh = M + mpmath.mpf(1) / 2
        num = 1 - th - 2 * sh**2 / (2 * S + mpmath.sinh(2 * S)) - Mp
        den = S * (mpmath.sinh(2 * S) - 2 * th) / (2 * S + mpmath.sinh(2 * S)) + Mh
        Kv = A * num / den
        Krot = -A / (S * sh**2 * th / (sh * ch + S) + Mh)
        return float(Kv), float(Krot)


def k_v(g: Geometry) -> float:
    return _kv_krot(g)[0]


def k_rot(g: Geometry) -> float:
    return _kv_krot(g)[1]


@lru_cache(maxsize=32)
def phi1_coefficients(g: Geometry, N: int | None = None) -> NoSlipCoefficients:
    """Coefficients of ``h Phi_1 = a_1 sinh 2z sin t + b_1 z sin t + sum (a_n sinh(n+1)z + b_n sinh(n-1)z) sin nt``."""
    N, tail = _check_order(g, N)
    with mpmath.workdps(_DPS):
        md = _Modes(g.s, N)
        A, S = mpmath.mpf(g.a), md.S
        sh, em, ep = md.sh, md.em, md.ep
        d1 = mpmath.sinh(2 * S) - 2 * S * mpmath.cosh(2 * S)
        a1 = -2 * A * em * (sh - S * em) / d1
        b1 = 4 * A * sh**2 / d1
        an, bn = [], []
        for n, es, _ec, s2n in md.rows:
            den = s2n - n * md.sh2
            an.append(-2 * A * (es - em * n * sh) / den)
            bn.append(2 * A * (es - ep * n * sh) / den)
        low = {"a1": float(a1), "b1": float(b1)}
        an, bn = _to_float(an), _to_float(bn)
    n = np.arange(2, N + 1)
    series = StreamSeries.from_modes(
        0.0,
        [
            ("sinh", "sin", [2], [1], [low["a1"]]),
            ("zeta", "sin", [0], [1], [low["b1"]]),
            ("sinh", "sin", n + 1, n, an),
            ("sinh", "sin", n - 1, n, bn),
        ],
    )
    return NoSlipCoefficients("extensional", 0.0, low, n, an, bn, N, tail, series)


def _even_series(K, c0, d0, c1, d1, n, cn, dn) -> StreamSeries:
    return StreamSeries.from_modes(
        K,
        [
            ("cosh", "cos", [1], [0], [c0]),
            ("zeta_sinh", "cos", [1], [0], [d0]),
            ("cosh", "cos", np.r_[2, n + 1], np.r_[1, n], np.r_[c1, cn]),
            ("cosh", "cos", np.r_[0, n - 1], np.r_[1, n], np.r_[d1, dn]),
        ],
    )


@lru_cache(maxsize=32)
def phi2_coefficients(g: Geometry, N: int | None = None) -> NoSlipCoefficients:
    """Coefficients of ``h Phi_2 = K_v log term + c_0 cosh z + d_0 z sinh z + sum (c_n cosh(n+1)z + d_n cosh(n-1)z) cos nt``."""
    N, tail = _check_order(g, N)
    Kv = k_v(g)
    with mpmath.workdps(_DPS):
        md = _Modes(g.s, N)
        A, S, K = mpmath.mpf(g.a), md.S, mpmath.mpf(Kv)
        sh, ch, em, ep = md.sh, md.ch, md.em, md.ep
        c0 = -A / 2 + A * sh**2 / (sh * ch + S) + K * (-1 + mpmath.exp(-2 * S) - 2 * S * (1 + S)) / (2 * S + md.sh2)
        d0 = A / (sh * ch + S) - K * sh**2 / (S + ch * sh)
        c1 = A * (-1 + mpmath.coth(2 * S)) + K / (1 + mpmath.exp(2 * S))
        d1 = A / 2 - A / md.sh2 + K * (1 + S - mpmath.tanh(S) / 2)
        cn, dn = [], []
        for n, es, ec, s2n in md.rows:
            den = s2n + n * md.sh2
            cn.append(2 * A * (ec - em * n * sh) / den + 2 * K * (es + em * n * sh) / (n * (n + 1) * den))
            dn.append(-2 * A * (ec - ep * n * sh) / den - 2 * K * (es + ep * n * sh) / (n * (n - 1) * den))
        low = {"c0": float(c0), "d0": float(d0), "c1": float(c1), "d1": float(d1)}
        cn, dn = _to_float(cn), _to_float(dn)
    n = np.arange(2, N + 1)
    series = _even_series(Kv, low["c0"], low["d0"], low["c1"], low["d1"], n, cn, dn)
    return NoSlipCoefficients("shear", Kv, low, n, cn, dn, N, tail, series)


@lru_cache(maxsize=32)
def phirot_coefficients(g: Geometry, N: int | None = None) -> NoSlipCoefficients:
    """Coefficients of the rotation stream, same layout as :func:`phi2_coefficients`.

    The low-order constants are ``a_0' = a/2 - K (s^2 + s + e^{-s} sinh s)/(sinh s cosh s + s)``
    and ``b_1' = a/2 + K (s + 1 - tanh(s)/2)``, matching the background
    ``h Phi_rot^0 = -(a/2)(cosh z + cos t)``.
    """
    N, tail = _check_order(g, N)
    Kr = k_rot(g)
    with mpmath.workdps(_DPS):
        md = _Modes(g.s, N)
        A, S, K = mpmath.mpf(g.a), md.S, mpmath.mpf(Kr)
        sh, ch, em, ep = md.sh, md.ch, md.em, md.ep
        a0 = A / 2 - K * (S**2 + S + em * sh) / (sh * ch + S)
        d0 = -K * sh**2 / (sh * ch + S)
        a1 = K * em / ch / 2
        b1 = A / 2 + K * (S + 1 - mpmath.tanh(S) / 2)
        an, bn = [], []
        for n, es, _ec, s2n in md.rows:
            den = s2n + n * md.sh2
            an.append(2 * K * (n * em * sh + es) / (n * (n + 1) * den))
            bn.append(-2 * K * (n * ep * sh + es) / (n * (n - 1) * den))
        low = {"a0": float(a0), "d0": float(d0), "a1": float(a1), "b1": float(b1)}
        an, bn = _to_float(an), _to_float(bn)
    n = np.arange(2, N + 1)
    series = _even_series(Kr, low["a0"], low["d0"], low["a1"], low["b1"], n, an, bn)
    return NoSlipCoefficients("rotation", Kr, low, n, an, bn, N, tail, series)


def coefficients(g: Geometry, case: str, N: int | None = None) -> NoSlipCoefficients:
    if case == "extensional":
        return phi1_coefficients(g, N)
    if case == "shear":
        return phi2_coefficients(g, N)
    if case == "rotation":
        return phirot_coefficients(g, N)
    raise ConfigurationError(f"unknown case {case!r}; expected one of {CASES}")


def gauge_sum(co: NoSlipCoefficients) -> float:
    """``h Phi`` of the series part at infinity, ``c_0 + sum (c_n + d_n)``; zero for a decaying stream."""
    vals = [co.first.sum(), co.second.sum()]
    if co.case == "shear":
        vals += [co.low["c0"], co.low["c1"], co.low["d1"]]
    elif co.case == "rotation":
        vals += [co.low["a0"], co.low["a1"], co.low["b1"]]
    else:
        return 0.0
    return math.fsum(vals)


def background_hpsi(g: Geometry, case: str, zeta, theta):
    """``h Phi^0`` and its zeta-derivative for the three backgrounds (used for residual checks)."""
    zeta = np.asarray(zeta, dtype=float)
    theta = np.asarray(theta, dtype=float)
    a = g.a
    ch, c = np.cosh(zeta), np.cos(theta)
    sh, s = np.sinh(zeta), np.sin(theta)
    d = ch - c
    if case == "extensional":
        f = a * sh * s / d
        fz = a * ch * s / d - a * sh * sh * s / d**2
    elif case == "shear":
        f = 0.5 * a * (s * s - sh * sh) / d
        fz = 0.5 * a * (-2.0 * sh * ch / d - (s * s - sh * sh) * sh / d**2)
    elif case == "rotation":
        f = -0.5 * a * (ch + c)
        fz = -0.5 * a * sh
    else:
        raise ConfigurationError(f"unknown case {case!r}")
    return f, fz


# ---------------------------------------------------------------------------
# pressures written as explicit harmonic series


def _w_series(g: Geometry, beta: np.ndarray, zeta, theta, kind: str) -> np.ndarray:
    """``sum_m beta_m H_m`` with ``H_m = cosh mz cos mt`` (kind 'c') or ``sinh mz sin mt`` (kind 's')."""
    zeta, theta = np.broadcast_arrays(np.asarray(zeta, dtype=float), np.asarray(theta, dtype=float))
    m = np.arange(beta.size)
    zf = zeta.ravel()[:, None] * m
    tf = theta.ravel()[:, None] * m
    H = np.cosh(zf) * np.cos(tf) if kind == "c" else np.sinh(zf) * np.sin(tf)
    return (H @ beta).reshape(zeta.shape)


def _check_pressure_point(zeta, theta):
    zeta, theta = np.broadcast_arrays(np.asarray(zeta, dtype=float), np.asarray(theta, dtype=float))
    return zeta, theta, near_infinity(zeta, theta)


def q1_pressure(g: Geometry, co: NoSlipCoefficients, zeta, theta) -> np.ndarray:
    """``q_1 = C + (2 mu / a) * sum beta_m cosh(m zeta) cos(m theta)`` with ``C`` making ``q_1(0, 0) = 0``."""
    zeta, theta, far = _check_pressure_point(zeta, theta)
    n, an, bn = co.n, co.first, co.second
    a1, b1 = co.low["a1"], co.low["b1"]
    beta = np.zeros(co.N + 2)
    beta[1] += -2.0 * a1 + b1
    beta[2] += a1
    np.add.at(beta, n, -((n + 1) * an - (n - 1) * bn))
    np.add.at(beta, n + 1, n * an)
    np.add.at(beta, n - 1, -n * bn)
    k = 2.0 * g.mu / g.a
    C = k * (a1 - b1 + np.sum(an + bn))
    q = C + k * _w_series(g, beta, zeta, theta, "c")
    return np.where(far, 0.0, q)


def _even_pressure(g: Geometry, d0, c1, n, cn, dn, zeta, theta) -> np.ndarray:
    zeta, theta, far = _check_pressure_point(zeta, theta)
    beta = np.zeros(n[-1] + 2 if n.size else 3)
    beta[1] += -d0 + 2.0 * c1
    beta[2] += -c1
    np.add.at(beta, n, (n + 1) * cn - (n - 1) * dn)
    np.add.at(beta, n + 1, -n * cn)
    np.add.at(beta, n - 1, n * dn)
    q = (2.0 * g.mu / g.a) * _w_series(g, beta, zeta, theta, "s")
    return np.where(far, 0.0, q)


def q2_pressure(g: Geometry, co: NoSlipCoefficients, zeta, theta) -> np.ndarray:
    """``q_2 = (2 mu / a)(-d_0 w_1 + sum ((n+1) c_n - (n-1) d_n) w_n - n c_n w_{n+1} + n d_n w_{n-1})``, ``w_n = sinh nz sin nt``."""
    lo = co.low
    return _even_pressure(g, lo["d0"], lo["c1"], co.n, co.first, co.second, zeta, theta)


def prot_pressure(g: Geometry, co: NoSlipCoefficients, zeta, theta) -> np.ndarray:
    """Rotation pressure, same conjugation rule as :func:`q2_pressure`."""
    lo = co.low
    return _even_pressure(g, lo["d0"], lo["a1"], co.n, co.first, co.second, zeta, theta)


# ---------------------------------------------------------------------------
# fields


def series_field(g: Geometry, series: StreamSeries, zeta, theta) -> FieldSample:
    """Disturbance fields of a stream series (no background)."""
    zeta, theta = np.broadcast_arrays(np.asarray(zeta, dtype=float), np.asarray(theta, dtype=float))
    far = near_infinity(zeta, theta)
    zs = np.where(far, 0.0, zeta)
    ts = np.where(far, np.pi, theta)
    hp = eval_hpsi(series, zs, ts, 2)
    u, E = stream_kinematics(g, zs, ts, hp)
    p = pressure(series, g, zs, ts)
    u[far] = 0.0
    E[far] = 0.0
    p = np.where(far, 0.0, p)
    return FieldSample(u, p, E, g.mu)


def series_field_grid(g: Geometry, series: StreamSeries, zeta_1d, theta_1d) -> FieldSample:
    """:func:`series_field` on the tensor grid ``zeta_1d x theta_1d``, which must avoid infinity."""
    zeta_1d = np.atleast_1d(np.asarray(zeta_1d, dtype=float))
    theta_1d = np.atleast_1d(np.asarray(theta_1d, dtype=float))
    Z, T = np.meshgrid(zeta_1d, theta_1d, indexing="ij")
    if np.any(near_infinity(Z, T)):
        raise DomainError("grid evaluation does not accept the point at infinity")
    hp = eval_hpsi_grid(series, zeta_1d, theta_1d, 2)
    u, E = stream_kinematics(g, Z, T, hp)
    return FieldSample(u, pressure_grid(series, g, zeta_1d, theta_1d), E, g.mu)


def field_v_grid(g: Geometry, case: str, zeta_1d, theta_1d, N: int | None = None) -> FieldSample:
    """:func:`field_v` on a tensor grid; much faster for large ``N``."""
    co = coefficients(g, case, N)
    dist = series_field_grid(g, co.series, zeta_1d, theta_1d)
    if case == "rotation":
        return dist
    Z, T = np.meshgrid(np.atleast_1d(zeta_1d), np.atleast_1d(theta_1d), indexing="ij")
    x, y = bipolar_to_cart(g, Z, T)
    return dist + linear_field(x, y, BACKGROUND_MATRIX[case], g.mu)


def field_v(g: Geometry, case: str, zeta, theta, N: int | None = None) -> FieldSample:
    """``(v_1, q_1)``, ``(v_2, q_2)`` or ``(h_rot, p_rot)`` at bipolar points."""
    co = coefficients(g, case, N)
    zeta, theta = np.broadcast_arrays(np.asarray(zeta, dtype=float), np.asarray(theta, dtype=float))
    if zeta.ndim == 1 and zeta.size > 1 and np.all(zeta == zeta[0]) and not np.any(near_infinity(zeta, theta)):
        # points on one zeta-circle (boundary samples): the separable path is much faster
        sample = series_field_grid(g, co.series, zeta[:1], theta)
        dist = FieldSample(sample.u[0], sample.p[0], sample.E[0], g.mu)
    else:
        dist = series_field(g, co.series, zeta, theta)
    if case == "rotation":
        return dist
    if np.any(near_infinity(zeta, theta)):
        raise DomainError("the linear background is unbounded at infinity")
    x, y = bipolar_to_cart(g, zeta, theta)
    return dist + linear_field(x, y, BACKGROUND_MATRIX[case], g.mu)


# ---------------------------------------------------------------------------
# F_0 and G_0


def _sinh_minus_x(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = np.abs(x) < 1.0
    xs = x[small]
    term = xs**3 / 6.0
    acc = term.copy()
    for k in range(2, 12):
        term = term * xs * xs / ((2 * k) * (2 * k + 1))
        acc += term
    out[small] = acc
    xl = x[~small]
    out[~small] = np.sinh(xl) - xl
    return out


def f0(x):
    """``(4 sinh^2 x - 4 x^2) / (x^3 (sinh 2x + 2x))`` with ``f0(0+) = 1/3``."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        big = x > 30.0
        xs = np.where(big, 1.0, x)
        num = 4.0 * _sinh_minus_x(xs) * (np.sinh(xs) + xs)
        den = xs**3 * (np.sinh(2.0 * xs) + 2.0 * xs)
        val = num / den
        # beyond x = 30 the ratio equals 2 tanh(x)/x^3 to double precision
        xb = np.where(big, x, 1.0)
        val = np.where(big, 2.0 * np.tanh(xb) / xb**3, val)
    return val


def g0(x):
    """``4 x / (sinh 2x + 2x)`` with ``g0(0+) = 1``."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        return 4.0 * x / (np.sinh(2.0 * x) + 2.0 * x)


def f0_g0(x):
    return f0(x), g0(x)


X_CUT = 40.0


def _scheme_adaptive() -> tuple[float, float]:
    """scipy adaptive quadrature on (0, 1] and [1, X_CUT] plus the tail.

    Beyond ``X_CUT`` the integrand of ``F_0`` is ``2/x^3`` up to ``exp(-2x)``
    corrections, so its tail ``1 / X_CUT^2`` is added exactly; the tail of
    ``G_0`` is below ``1e-30`` and dropped.
    """
    opts = dict(epsabs=1e-14, epsrel=1e-12, limit=200)
    F = integrate.quad(lambda t: float(f0(t)), 0.0, 1.0, **opts)[0]
    F += integrate.quad(lambda t: float(f0(t)), 1.0, X_CUT, **opts)[0]
    F += 1.0 / X_CUT**2
    G = integrate.quad(lambda t: float(g0(t)), 0.0, 1.0, **opts)[0]
    G += integrate.quad(lambda t: float(g0(t)), 1.0, X_CUT, **opts)[0]
    return F, G


def _scheme_tanh_sinh() -> tuple[float, float]:
    """Double-exponential quadrature over ``[0, inf)`` in extended precision."""
    with mpmath.workdps(30):
        def f(t):
            if t < mpmath.mpf("1e-6"):
                return mpmath.mpf(1) / 3 + 2 * t**2 / 45
            return (4 * mpmath.sinh(t) ** 2 - 4 * t**2) / (t**3 * (mpmath.sinh(2 * t) + 2 * t))

        def gg(t):
            if t == 0:
                return mpmath.mpf(1)
            return 4 * t / (mpmath.sinh(2 * t) + 2 * t)

        F = mpmath.quad(f, [0, 1, 4, 16, mpmath.inf], method="tanh-sinh")
        G = mpmath.quad(gg, [0, 1, 4, 16, mpmath.inf], method="tanh-sinh")
        return float(F), float(G)


@lru_cache(maxsize=1)
def F0_G0_schemes() -> dict:
    return {"adaptive": _scheme_adaptive(), "tanh_sinh": _scheme_tanh_sinh()}


def F0_G0() -> tuple[float, float]:
    return F0_G0_schemes()["adaptive"]
