"""Stream functions of biharmonic bipolar form and their kinematics.

A stream function is stored through ``F = h * Psi`` as a log term
``K (cosh z - cos t) log(2 cosh z - 2 cos t)`` plus separable terms
``c * Z(zeta) * T(theta)``.  All derivatives are taken term by term in
closed form.  Cartesian velocity and strain follow from the conformal map
``x + i y = a coth(w / 2)`` with ``w = zeta - i theta``:

    u_x - i u_y   = 2i Psi_w w'
    E_xx - i E_xy = 2i (Psi_ww w'^2 + Psi_w w'')

The pressure is the harmonic conjugate of ``mu * Laplacian(Psi)``, which for
the admissible terms is an explicit finite combination of
``cosh/sinh(m zeta) * cos/sin(m theta)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .errors import ConfigurationError, DomainError
from .geometry import Frame, Geometry, frame_xi, near_infinity

ZETA_KINDS = ("cosh", "sinh", "zeta_cosh", "zeta_sinh", "zeta")
THETA_KINDS = ("cos", "sin")

# elements per temporary (points x modes) block
_BLOCK = 1 << 21


@dataclass(frozen=True)
class StreamTerm:
    coefficient: float
    zeta_kind: str
    k: int
    theta_kind: str
    n: int


def _check_term(zk: str, k: int, tk: str, n: int) -> None:
    if zk not in ZETA_KINDS or tk not in THETA_KINDS:
        raise ConfigurationError(f"unknown term kinds ({zk!r}, {tk!r})")
    if n < 0 or k < 0:
        raise ConfigurationError("mode indices must be non-negative")
    if zk in ("cosh", "sinh"):
        if k not in (n - 1, n + 1):
            raise ConfigurationError(f"{zk}({k} zeta) with mode {n} is not biharmonic")
    elif zk in ("zeta_cosh", "zeta_sinh"):
        if (tk, n, k) != ("cos", 0, 1):
            raise ConfigurationError(f"{zk} is admissible only with a constant theta factor")
    elif n != 1 or k != 0:
        raise ConfigurationError("the bare zeta factor is admissible only with mode 1")


class _Group(NamedTuple):
    zeta_kind: str
    theta_kind: str
    k: np.ndarray
    n: np.ndarray
    c: np.ndarray


class HPsi(NamedTuple):
    """``F = h Psi`` and its partial derivatives (``z`` = zeta, ``t`` = theta)."""

    f: np.ndarray
    fz: np.ndarray | None = None
    ft: np.ndarray | None = None
    fzz: np.ndarray | None = None
    fzt: np.ndarray | None = None
    ftt: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class StreamSeries:
    K: float
    groups: tuple[_Group, ...]
    n_max: int
    _harmonic: dict = field(init=False, repr=False)
    _single_valued: bool = field(init=False, repr=False)

    def __post_init__(self):
        harm, ok = _laplacian_expansion(self.groups)
        object.__setattr__(self, "_harmonic", harm)
        object.__setattr__(self, "_single_valued", ok)

    @classmethod
    def from_terms(cls, terms: Iterable[StreamTerm], K: float = 0.0) -> "StreamSeries":
        buckets: dict[tuple[str, str], list[tuple[int, int, float]]] = {}
        for t in terms:
            _check_term(t.zeta_kind, t.k, t.theta_kind, t.n)
            buckets.setdefault((t.zeta_kind, t.theta_kind), []).append((t.k, t.n, t.coefficient))
        groups = []
        for (zk, tk), rows in buckets.items():
            rows.sort(key=lambda r: (r[1], r[0]))
            k, n, c = (np.array(col) for col in zip(*rows))
            groups.append(_Group(zk, tk, k.astype(int), n.astype(int), c.astype(float)))
        n_max = max((int(g.n.max()) for g in groups), default=0)
        return cls(float(K), tuple(groups), n_max)

    @classmethod
    def from_modes(cls, K: float, blocks) -> "StreamSeries":
        """Build from ``(zeta_kind, theta_kind, k, n, c)`` array blocks."""
        groups = []
        for zk, tk, k, n, c in blocks:
            k = np.atleast_1d(np.asarray(k, dtype=int))
            n = np.atleast_1d(np.asarray(n, dtype=int))
            c = np.atleast_1d(np.asarray(c, dtype=float))
            if not (k.shape == n.shape == c.shape):
                raise ConfigurationError("mode arrays must have equal length")
            for kk, nn in {(int(a), int(b)) for a, b in zip(k, n)}:
                _check_term(zk, kk, tk, nn)
            order = np.lexsort((k, n))
            groups.append(_Group(zk, tk, k[order], n[order], c[order]))
        n_max = max((int(g.n.max()) for g in groups if g.n.size), default=0)
        return cls(float(K), tuple(groups), n_max)

    @property
    def terms(self) -> list[StreamTerm]:
        out = []
        for g in self.groups:
            out.extend(
                StreamTerm(float(c), g.zeta_kind, int(k), g.theta_kind, int(n))
                for k, n, c in zip(g.k, g.n, g.c)
            )
        return out

    @property
    def pressure_single_valued(self) -> bool:
        return self._single_valued

    def scaled(self, factor: float) -> "StreamSeries":
        groups = tuple(g._replace(c=g.c * factor) for g in self.groups)
        return StreamSeries(self.K * factor, groups, self.n_max)

    def __add__(self, other: "StreamSeries") -> "StreamSeries":
        return StreamSeries(self.K + other.K, self.groups + other.groups, max(self.n_max, other.n_max))


# ---------------------------------------------------------------------------
# separable factors


def _zeta_factors(kind: str, k: np.ndarray, zeta: np.ndarray, order: int):
    """Z, Z', Z'' with shape ``zeta.shape + k.shape`` (zeta is 1-d)."""
    z = zeta[:, None]
    if kind in ("cosh", "sinh"):
        kz = z * k[None, :]
        ch, sh = np.cosh(kz), np.sinh(kz)
        f0, f1 = (ch, sh) if kind == "cosh" else (sh, ch)
        out = [f0]
        if order >= 1:
            out.append(k * f1)
        if order >= 2:
            out.append((k * k) * f0)
        return out
    ch = np.cosh(z) * np.ones(k.shape)
    sh = np.sinh(z) * np.ones(k.shape)
    zz = z * np.ones(k.shape)
    if kind == "zeta_cosh":
        out = [zz * ch, ch + zz * sh, 2.0 * sh + zz * ch]
    elif kind == "zeta_sinh":
        out = [zz * sh, sh + zz * ch, 2.0 * ch + zz * sh]
    else:
        out = [zz, np.ones_like(zz), np.zeros_like(zz)]
    return out[: order + 1]


def _theta_factors(kind: str, n: np.ndarray, theta: np.ndarray, order: int):
    nt = theta[:, None] * n[None, :]
    c, s = np.cos(nt), np.sin(nt)
    if kind == "cos":
        out = [c, -n * s, -(n * n) * c]
    else:
        out = [s, n * c, -(n * n) * s]
    return out[: order + 1]


# (zeta derivative, theta derivative) for each HPsi slot
_SLOTS = (("f", 0, 0), ("fz", 1, 0), ("ft", 0, 1), ("fzz", 2, 0), ("fzt", 1, 1), ("ftt", 0, 2))


def _slots(order: int):
    return [s for s in _SLOTS if s[1] + s[2] <= order]


def _log_partials(zeta, theta, order: int) -> dict:
    ch, c = np.cosh(zeta), np.cos(theta)
    sh, s = np.sinh(zeta), np.sin(theta)
    d = ch - c
    lg = np.log(2.0 * d)
    out = {"f": d * lg}
    if order >= 1:
        out["fz"] = sh * (lg + 1.0)
        out["ft"] = s * (lg + 1.0)
    if order >= 2:
        out["fzz"] = ch * (lg + 1.0) + sh * sh / d
        out["fzt"] = sh * s / d
        out["ftt"] = c * (lg + 1.0) + s * s / d
    return out


def eval_hpsi(series: StreamSeries, zeta, theta, derivative_order: int = 2) -> HPsi:
    """Values and partials of ``h Psi`` at scattered points."""
    if derivative_order not in (0, 1, 2):
        raise ConfigurationError("derivative_order must be 0, 1 or 2")
    zeta, theta = np.broadcast_arrays(np.asarray(zeta, dtype=float), np.asarray(theta, dtype=float))
    shape = zeta.shape
    zf, tf = zeta.ravel(), theta.ravel()
    slots = _slots(derivative_order)
    acc = {name: np.zeros(zf.size) for name, _, _ in slots}
    for g in series.groups:
        m = max(g.c.size, 1)
        step = max(1, _BLOCK // m)
        for lo in range(0, zf.size, step):
            sl = slice(lo, lo + step)
            Z = _zeta_factors(g.zeta_kind, g.k, zf[sl], derivative_order)
            T = _theta_factors(g.theta_kind, g.n, tf[sl], derivative_order)
            for name, i, j in slots:
                acc[name][sl] += np.sum(Z[i] * T[j] * g.c, axis=1)
    if series.K != 0.0:
        if np.any(near_infinity(zf, tf)):
            raise DomainError("the log term is singular at infinity")
        lp = _log_partials(zf, tf, derivative_order)
        for name, _, _ in slots:
            acc[name] += series.K * lp[name]
    return HPsi(**{name: v.reshape(shape) for name, v in acc.items()})


def eval_hpsi_grid(series: StreamSeries, zeta_1d, theta_1d, derivative_order: int = 2) -> HPsi:
    """Same as :func:`eval_hpsi` on the tensor grid ``zeta_1d x theta_1d``."""
    zeta_1d = np.atleast_1d(np.asarray(zeta_1d, dtype=float))
    theta_1d = np.atleast_1d(np.asarray(theta_1d, dtype=float))
    slots = _slots(derivative_order)
    shape = (zeta_1d.size, theta_1d.size)
    acc = {name: np.zeros(shape) for name, _, _ in slots}
    for g in series.groups:
        Z = _zeta_factors(g.zeta_kind, g.k, zeta_1d, derivative_order)
        Zc = [z * g.c for z in Z]
        step = max(1, _BLOCK // max(g.c.size, 1))
        for lo in range(0, theta_1d.size, step):
            sl = slice(lo, lo + step)
            T = _theta_factors(g.theta_kind, g.n, theta_1d[sl], derivative_order)
            for name, i, j in slots:
                acc[name][:, sl] += Zc[i] @ T[j].T
    if series.K != 0.0:
        zz, tt = np.meshgrid(zeta_1d, theta_1d, indexing="ij")
        if np.any(near_infinity(zz, tt)):
            raise DomainError("the log term is singular at infinity")
        lp = _log_partials(zz, tt, derivative_order)
        for name, _, _ in slots:
            acc[name] += series.K * lp[name]
    return HPsi(**acc)


# ---------------------------------------------------------------------------
# kinematics


def _psi_partials(g: Geometry, zeta, theta, hp: HPsi):
    """Partials of ``Psi = a F / D`` with ``D = cosh zeta - cos theta``."""
    d = np.cosh(zeta) - np.cos(theta)
    dz, dt = np.sinh(zeta), np.sin(theta)
    dzz, dtt = np.cosh(zeta), np.cos(theta)
    q = hp.f / d
    qz = (hp.fz - q * dz) / d
    qt = (hp.ft - q * dt) / d
    qzz = (hp.fzz - 2.0 * qz * dz - q * dzz) / d
    qtt = (hp.ftt - 2.0 * qt * dt - q * dtt) / d
    qzt = (hp.fzt - qz * dt - qt * dz) / d
    a = g.a
    return a * qz, a * qt, a * qzz, a * qzt, a * qtt


def _map_derivatives(g: Geometry, zeta, theta):
    w = zeta - 1j * theta
    wp = -(2.0 / g.a) * np.sinh(0.5 * w) ** 2
    wpp = -(1.0 / g.a) * np.sinh(w) * wp
    return wp, wpp


def stream_kinematics(g: Geometry, zeta, theta, hp: HPsi) -> tuple[np.ndarray, np.ndarray]:
    """Cartesian velocity ``(..., 2)`` and strain ``(..., 2, 2)`` from ``h Psi`` partials."""
    zeta = np.asarray(zeta, dtype=float)
    theta = np.asarray(theta, dtype=float)
    pz, pt, pzz, pzt, ptt = _psi_partials(g, zeta, theta, hp)
    wp, wpp = _map_derivatives(g, zeta, theta)
    psi_w = 0.5 * (pz + 1j * pt)
    psi_ww = 0.25 * (pzz - ptt + 2j * pzt)
    ubar = 2j * psi_w * wp
    e = 2j * (psi_ww * wp * wp + psi_w * wpp)
    u = np.stack([ubar.real, -ubar.imag], axis=-1)
    E = np.empty(zeta.shape + (2, 2))
    E[..., 0, 0] = e.real
    E[..., 1, 1] = -e.real
    E[..., 0, 1] = E[..., 1, 0] = -e.imag
    return u, E


def velocity_cartesian(series: StreamSeries, g: Geometry, zeta, theta) -> np.ndarray:
    hp = eval_hpsi(series, zeta, theta, 2)
    return stream_kinematics(g, zeta, theta, hp)[0]


def velocity_bipolar(series: StreamSeries, g: Geometry, zeta, theta) -> tuple[np.ndarray, np.ndarray]:
    """Frame components ``(u_zeta, u_theta)`` straight from the bipolar operators."""
    zeta = np.asarray(zeta, dtype=float)
    theta = np.asarray(theta, dtype=float)
    frame_xi(zeta, theta)  # domain check
    hp = eval_hpsi(series, zeta, theta, 1)
    d = np.cosh(zeta) - np.cos(theta)
    u_z = -hp.ft + hp.f * np.sin(theta) / d
    u_t = hp.fz - hp.f * np.sinh(zeta) / d
    return u_z, u_t


def tensor_to_cartesian(frame: Frame, components) -> np.ndarray:
    """``Xi T Xi`` for a symmetric frame tensor given as ``(T_zz, T_zt, T_tt)``."""
    tzz, tzt, ttt = (np.asarray(c, dtype=float) for c in components)
    tzz, tzt, ttt = np.broadcast_arrays(tzz, tzt, ttt)
    T = np.empty(tzz.shape + (2, 2))
    T[..., 0, 0] = tzz
    T[..., 1, 1] = ttt
    T[..., 0, 1] = T[..., 1, 0] = tzt
    X = np.broadcast_to(frame.matrix, T.shape)
    return X @ T @ X


def strain_bipolar(series: StreamSeries, g: Geometry, zeta, theta):
    """Frame components ``(E_zz, E_zt, E_tt)`` of the strain."""
    zeta = np.asarray(zeta, dtype=float)
    theta = np.asarray(theta, dtype=float)
    fr = frame_xi(zeta, theta)
    E = strain_cartesian(series, g, zeta, theta)
    Eb = fr.matrix @ E @ fr.matrix
    return Eb[..., 0, 0], Eb[..., 0, 1], Eb[..., 1, 1]


def strain_cartesian(series: StreamSeries, g: Geometry, zeta, theta) -> np.ndarray:
    hp = eval_hpsi(series, zeta, theta, 2)
    return stream_kinematics(g, zeta, theta, hp)[1]


# ---------------------------------------------------------------------------
# Laplacian and pressure
#
# a * Laplacian(Psi) = (D (d_zz + d_tt) + (cosh z + cos t) - 2 sinh z d_z - 2 sin t d_t) F
# maps each admissible term onto harmonics H^{xy}_m, x in {c, s} for cosh/sinh(m zeta)
# and y in {c, s} for cos/sin(m theta).


def _laplacian_expansion(groups) -> tuple[dict, bool]:
    rows: dict[str, list[tuple[np.ndarray, np.ndarray]]] = {"cc": [], "ss": [], "sc": [], "cs": []}
    single_valued = True
    for g in groups:
        tl = "c" if g.theta_kind == "cos" else "s"
        if g.zeta_kind in ("cosh", "sinh"):
            kind = ("c" if g.zeta_kind == "cosh" else "s") + tl
            up = g.k == g.n + 1
            n, c = g.n, g.c
            # k = n + 1:  2(n+1) H_n - 2n H_{n+1};  k = n - 1:  -2(n-1) H_n + 2n H_{n-1}
            rows[kind].append((n[up], 2.0 * (n[up] + 1) * c[up]))
            rows[kind].append((n[up] + 1, -2.0 * n[up] * c[up]))
            dn = ~up
            rows[kind].append((n[dn], -2.0 * (n[dn] - 1) * c[dn]))
            rows[kind].append((n[dn] - 1, 2.0 * n[dn] * c[dn]))
        elif g.zeta_kind == "zeta_sinh":
            c = g.c.sum()
            rows["cc"].append((np.array([0, 1]), np.array([2.0 * c, -2.0 * c])))
        elif g.zeta_kind == "zeta" and g.theta_kind == "sin":
            rows["ss"].append((np.array([1]), np.array([-2.0 * g.c.sum()])))
        else:
            # zeta cosh(zeta) and zeta cos(theta) produce the harmonic zeta, whose
            # conjugate theta is multivalued in the exterior domain
            if np.any(g.c != 0.0):
                single_valued = False
    out = {}
    for kind, parts in rows.items():
        if not parts:
            continue
        m = np.concatenate([p[0] for p in parts])
        w = np.concatenate([p[1] for p in parts])
        acc = np.zeros(int(m.max()) + 1)
        np.add.at(acc, m, w)
        out[kind] = acc
    return out, single_valued


def _harmonic(kind: str, m: np.ndarray, zeta: np.ndarray, theta: np.ndarray) -> np.ndarray:
    mz = zeta[:, None] * m
    mt = theta[:, None] * m
    zf = np.cosh(mz) if kind[0] == "c" else np.sinh(mz)
    tf = np.cos(mt) if kind[1] == "c" else np.sin(mt)
    return zf * tf


# conjugation rule for f = phi - i p holomorphic in w = zeta - i theta:
# phi = H^cc -> p = H^ss ; H^ss -> -(H^cc - 1) ; H^sc -> H^cs ; H^cs -> -H^sc
_CONJUGATE = {"cc": ("ss", 1.0, 0.0), "ss": ("cc", -1.0, 1.0), "sc": ("cs", 1.0, 0.0), "cs": ("sc", -1.0, 0.0)}


def _harmonic_sum(expansion: dict, zeta, theta, conjugate: bool) -> np.ndarray:
    zeta, theta = np.broadcast_arrays(np.asarray(zeta, dtype=float), np.asarray(theta, dtype=float))
    shape = zeta.shape
    zf, tf = zeta.ravel(), theta.ravel()
    out = np.zeros(zf.size)
    for kind, w in expansion.items():
        m = np.arange(w.size)
        nz = w != 0.0
        m, w = m[nz], w[nz]
        if not m.size:
            continue
        target, sign, shift = _CONJUGATE[kind] if conjugate else (kind, 1.0, 0.0)
        step = max(1, _BLOCK // m.size)
        for lo in range(0, zf.size, step):
            sl = slice(lo, lo + step)
            H = _harmonic(target, m, zf[sl], tf[sl])
            out[sl] += sign * np.sum((H - shift) * w, axis=1)
    return out.reshape(shape)


def laplacian(series: StreamSeries, g: Geometry, zeta, theta) -> np.ndarray:
    """Cartesian Laplacian of ``Psi`` (the log term is harmonic and drops out)."""
    return _harmonic_sum(series._harmonic, zeta, theta, conjugate=False) / g.a


def pressure(series: StreamSeries, g: Geometry, zeta, theta) -> np.ndarray:
    """Pressure conjugate to ``mu * Laplacian(Psi)``, vanishing at infinity."""
    if not series.pressure_single_valued:
        raise DomainError("this stream function has no single-valued pressure")
    return (g.mu / g.a) * _harmonic_sum(series._harmonic, zeta, theta, conjugate=True)


def pressure_grid(series: StreamSeries, g: Geometry, zeta_1d, theta_1d) -> np.ndarray:
    if not series.pressure_single_valued:
        raise DomainError("this stream function has no single-valued pressure")
    zeta_1d = np.atleast_1d(np.asarray(zeta_1d, dtype=float))
    theta_1d = np.atleast_1d(np.asarray(theta_1d, dtype=float))
    out = np.zeros((zeta_1d.size, theta_1d.size))
    for kind, w in series._harmonic.items():
        m = np.nonzero(w)[0]
        if not m.size:
            continue
        wm = w[m]
        target, sign, shift = _CONJUGATE[kind]
        zf = np.cosh(np.outer(zeta_1d, m)) if target[0] == "c" else np.sinh(np.outer(zeta_1d, m))
        step = max(1, _BLOCK // m.size)
        for lo in range(0, theta_1d.size, step):
            sl = slice(lo, lo + step)
            mt = np.outer(theta_1d[sl], m)
            tf = np.cos(mt) if target[1] == "c" else np.sin(mt)
            out[:, sl] += sign * ((zf * wm) @ tf.T)
            if shift:
                out[:, sl] -= sign * shift * wm.sum()
    return (g.mu / g.a) * out
