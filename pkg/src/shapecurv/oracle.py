"""Finite-difference oracles, independent of the closed-form derivatives.

Everything here is built from *values* of the potential only: derivative checks,
the quotient metric in an affine chart with a numerically differentiated Riemann
tensor, the ambient conformal metric, and the vertical part of a Lie bracket.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import IllConditionedError
from .nbody import Configuration, as_configuration, check_collisions, com_embedding, complexify, mul_i, potential, realify
from .shape import ReducedPoint, TangentPair, as_point, horizontal_frame, horizontal_project

EPS = np.finfo(float).eps
METRIC_STEP = 1e-3


# -- derivatives of the potential ------------------------------------------


def _potential_at(config: Configuration, x: np.ndarray) -> float:
    return potential(Configuration(complexify(x), config.masses))


def fd_gradient(config, h: float | None = None) -> np.ndarray:
    """Central-difference realified gradient of the potential."""
    config = as_configuration(config)
    check_collisions(config)
    x0 = realify(config.positions)
    h = EPS ** (1 / 3) * (1 + np.linalg.norm(x0)) if h is None else h
    g = np.empty_like(x0)
    for k in range(x0.size):
        e = np.zeros_like(x0)
        e[k] = h
        g[k] = (_potential_at(config, x0 + e) - _potential_at(config, x0 - e)) / (2 * h)
    return g


def _second_differences(f, x0: np.ndarray, h: float) -> np.ndarray:
    d = x0.size
    f0 = f(x0)
    H = np.empty((d, d))
    eye = np.eye(d) * h
    for a in range(d):
        H[a, a] = (f(x0 + eye[a]) - 2 * f0 + f(x0 - eye[a])) / h**2
        for b in range(a):
            val = (
                f(x0 + eye[a] + eye[b]) - f(x0 + eye[a] - eye[b]) - f(x0 - eye[a] + eye[b]) + f(x0 - eye[a] - eye[b])
            ) / (4 * h**2)
            H[a, b] = H[b, a] = val
    return H


def fd_hessian(config, h: float | None = None, richardson: bool = True) -> np.ndarray:
    """Second differences of the potential; symmetric by construction.

    Default step is eps^(1/4) * scale. With ``richardson`` the O(h^2) error is
    removed with one halving: (4 H(h/2) - H(h)) / 3.
    """
    config = as_configuration(config)
    check_collisions(config)
    x0 = realify(config.positions)
    h = EPS**0.25 * (1 + np.linalg.norm(x0)) if h is None else h
    f = lambda x: _potential_at(config, x)
    H = _second_differences(f, x0, h)
    if richardson:
        H = (4.0 * _second_differences(f, x0, h / 2) - H) / 3.0
    return H


# -- Riemann tensor of a metric given by samples ----------------------------


def riemann_fd(metric: Callable[[np.ndarray], np.ndarray], dim: int, h: float = METRIC_STEP):
    """Metric, Christoffel symbols and all-lower Riemann tensor at u = 0.

    Second-order central stencils on ``metric``. Convention:
    R_iklm = 1/2 (g_im,kl + g_kl,im - g_il,km - g_km,il) + g_np (G^n_kl G^p_im - G^n_km G^p_il),
    so R(X, Y, X, Y) / |X ^ Y|^2 is +1/R^2 on a round sphere of radius R.
    """
    zero = np.zeros(dim)
    g0 = np.asarray(metric(zero), dtype=float)
    steps = np.eye(dim) * h
    plus = [np.asarray(metric(steps[c])) for c in range(dim)]
    minus = [np.asarray(metric(-steps[c])) for c in range(dim)]
    dg = np.stack([(plus[c] - minus[c]) / (2 * h) for c in range(dim)])  # [c, a, b] = d_c g_ab
    ddg = np.empty((dim, dim, dim, dim))  # [c, d, a, b] = d_c d_d g_ab
    for c in range(dim):
        ddg[c, c] = (plus[c] - 2 * g0 + minus[c]) / h**2
        for d in range(c):
            val = (
                metric(steps[c] + steps[d])
                - metric(steps[c] - steps[d])
                - metric(-steps[c] + steps[d])
                + metric(-steps[c] - steps[d])
            ) / (4 * h**2)
            ddg[c, d] = ddg[d, c] = val

    gamma_lower = 0.5 * (
        np.einsum("afb->fab", dg) + np.einsum("bfa->fab", dg) - dg
    )  # [f, a, b] = 1/2 (d_a g_fb + d_b g_fa - d_f g_ab)
    gamma = np.einsum("ef,fab->eab", np.linalg.inv(g0), gamma_lower)

    second = 0.5 * (
        np.einsum("klim->iklm", ddg)
        + np.einsum("imkl->iklm", ddg)
        - np.einsum("kmil->iklm", ddg)
        - np.einsum("ilkm->iklm", ddg)
    )
    quad = np.einsum("np,nkl,pim->iklm", g0, gamma, gamma) - np.einsum("np,nkm,pil->iklm", g0, gamma, gamma)
    return g0, gamma, second + quad


def fd_sectional_metric(metric, X, Y, h: float = METRIC_STEP) -> float:
    """Sectional curvature through span(X, Y) of a sampled metric at u = 0."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    g0, _, R = riemann_fd(metric, X.size, h)
    gxx, gyy, gxy = X @ g0 @ X, Y @ g0 @ Y, X @ g0 @ Y
    area = gxx * gyy - gxy**2
    if area < 1e-8 * gxx * gyy:
        raise IllConditionedError("two-plane is degenerate (Gram determinant too small)")
    return float(np.einsum("iklm,i,k,l,m->", R, X, Y, X, Y) / area)


# -- quotient metric in an affine horizontal chart -------------------------


@dataclass
class ChartMetricSampler:
    """Quotient metric of shape space pulled back through u -> pi(base + sum u_a frame_a)."""

    base: ReducedPoint
    frame: list = field(default=None)

    def __post_init__(self):
        self.base = as_point(self.base)
        if self.frame is None:
            self.frame = horizontal_frame(self.base)
        self._F = np.column_stack(self.frame)
        self._emb = com_embedding(self.base.n)

    @property
    def dim(self) -> int:
        return self._F.shape[1]

    def slice_point(self, u) -> np.ndarray:
        return self.base.real + self._F @ np.asarray(u, dtype=float)

    def __call__(self, u) -> np.ndarray:
        s = self.slice_point(u)
        z = complexify(s)
        U = potential(Configuration(self._emb.embed(z)))
        hor = np.column_stack([horizontal_project(z, f) for f in self.frame])
        return U * (hor.T @ hor)

    def coordinates(self, v) -> np.ndarray:
        """Chart components of a horizontal vector at the base."""
        return self._F.T @ np.asarray(v, dtype=float)


def chart_metric(base, u, frame=None) -> np.ndarray:
    return ChartMetricSampler(base, frame)(u)


def fubini_study_metric(z, vectors) -> np.ndarray:
    """Standard Fubini-Study metric at z on realified vectors (columns of the result's indices)."""
    z = np.asarray(z, dtype=complex)
    W = [complexify(v) for v in vectors]
    nz2 = np.vdot(z, z).real
    G = np.empty((len(W), len(W)))
    for a, wa in enumerate(W):
        for b, wb in enumerate(W):
            G[a, b] = (np.vdot(wa, wb) * nz2 - np.vdot(wa, z) * np.vdot(z, wb)).real / nz2**2
    return G


def fs_factorization(sampler: ChartMetricSampler, u) -> tuple[np.ndarray, np.ndarray]:
    """(chart metric, U at the unit representative times pulled-back Fubini-Study) at chart point u."""
    z = complexify(sampler.slice_point(u))
    U_unit = potential(Configuration(sampler._emb.embed(z / np.linalg.norm(z))))
    return sampler(u), U_unit * fubini_study_metric(z, sampler.frame)


def fd_sectional(pair: TangentPair, h: float = METRIC_STEP) -> float:
    """Quotient sectional curvature through the pair's plane, from the sampled chart metric."""
    sampler = ChartMetricSampler(pair.base)
    X, Y = sampler.coordinates(pair.v1), sampler.coordinates(pair.v2)
    return fd_sectional_metric(sampler, X, Y, h)


def fd_ambient_sectional(pair: TangentPair, h: float = METRIC_STEP) -> float:
    """Sectional curvature of U_L ds^2 on C^(n-1) through span(v1, v2), by finite differences."""
    base = pair.base
    emb = com_embedding(base.n)
    x0 = base.real
    scale = base.norm

    def metric(u):
        U = potential(Configuration(emb.embed(complexify(x0 + scale * u))))
        return U * scale**2 * np.eye(x0.size)

    # coordinates x = x0 + scale * u, so vectors rescale by 1/scale
    return fd_sectional_metric(metric, pair.v1 / scale, pair.v2 / scale, h)


# -- Lie bracket of horizontal extensions ---------------------------------


def fd_bracket_vertical(pair: TangentPair, h: float = 1e-5) -> tuple[float, float]:
    """Realified inner products of [V1, V2] with E = p and iE = ip at the base.

    V_a(x) = hor_x(v_a) / sqrt(U_L(x)); the bracket uses central differences of
    the fields along each other.
    """
    base = pair.base
    emb = com_embedding(base.n)
    x0 = base.real
    step = h * base.norm

    def field_at(x, v):
        z = complexify(x)
        return horizontal_project(z, v) / np.sqrt(potential(Configuration(emb.embed(z))))

    def directional(v, w):
        return (field_at(x0 + step * w, v) - field_at(x0 - step * w, v)) / (2 * step)

    V1 = field_at(x0, pair.v1)
    V2 = field_at(x0, pair.v2)
    bracket = directional(pair.v2, V1) - directional(pair.v1, V2)
    return float(bracket @ x0), float(bracket @ mul_i(x0))


def fd_oneill(pair: TangentPair, h: float = 1e-5) -> float:
    """(3/4) times the squared JM norm of the vertical bracket part."""
    dot_e, dot_ie = fd_bracket_vertical(pair, h)
    x0 = pair.base.real
    U = potential(Configuration(com_embedding(pair.base.n).embed(pair.base.coords)))
    return 0.75 * U * (dot_e**2 + dot_ie**2) / float(x0 @ x0)
