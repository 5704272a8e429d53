"""Strong-force (1/r^2) potential, its exact derivatives, and the center-of-mass embedding.

Complex vectors are realified as interleaved ``(x_0, y_0, x_1, y_1, ...)`` arrays.
Gradients and Hessians are always taken with respect to those real coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CollisionError

COLLISION_RTOL = 1e-9


# -- realification helpers -------------------------------------------------


def realify(z) -> np.ndarray:
    """Complex vector of length m -> interleaved real vector of length 2m."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(2 * z.size)
    out[0::2] = z.real
    out[1::2] = z.imag
    return out


def complexify(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.size % 2:
        raise ValueError(f"realified vector must have even length, got {x.size}")
    return x[0::2] + 1j * x[1::2]


def mul_i(x) -> np.ndarray:
    """Multiply a realified vector by the imaginary unit: (x, y) -> (-y, x)."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    out[0::2] = -x[1::2]
    out[1::2] = x[0::2]
    return out


def rdot(a, b) -> float:
    """Realified inner product Re<a, b>."""
    return float(np.dot(np.asarray(a, dtype=float), np.asarray(b, dtype=float)))


# -- configurations --------------------------------------------------------


@dataclass(frozen=True)
class Configuration:
    """Planar positions (complex) and masses of ``n`` labeled bodies."""

    positions: np.ndarray
    masses: np.ndarray = field(default=None)

    def __post_init__(self):
        q = np.asarray(self.positions, dtype=complex).ravel()
        if q.size < 3:
            raise ValueError(f"need at least 3 bodies, got {q.size}")
        m = np.ones(q.size) if self.masses is None else np.asarray(self.masses, dtype=float).ravel()
        if m.shape != q.shape:
            raise ValueError("masses and positions differ in length")
        if np.any(m <= 0):
            raise ValueError("masses must be positive")
        object.__setattr__(self, "positions", q)
        object.__setattr__(self, "masses", m)

    @property
    def n(self) -> int:
        return self.positions.size

    @property
    def unit_masses(self) -> bool:
        return bool(np.all(self.masses == 1.0))

    def scaled(self, lam: float) -> "Configuration":
        return Configuration(lam * self.positions, self.masses)


def as_configuration(config) -> Configuration:
    if isinstance(config, Configuration):
        return config
    return Configuration(np.asarray(config, dtype=complex))


def _pairs(n: int):
    return np.triu_indices(n, k=1)


def check_collisions(config: Configuration, rtol: float = COLLISION_RTOL) -> float:
    """Raise CollisionError if two bodies are closer than ``rtol * (1 + |q|)``.

    Returns the minimum pairwise distance otherwise.
    """
    q = config.positions
    i, j = _pairs(config.n)
    r = np.abs(q[i] - q[j])
    k = int(np.argmin(r))
    tol = rtol * (1.0 + np.linalg.norm(q))
    if not r[k] > tol:
        pair = (int(i[k]) + 1, int(j[k]) + 1)
        raise CollisionError(
            f"bodies {pair[0]} and {pair[1]} collide (distance {r[k]:.3g} <= tolerance {tol:.3g})",
            pair=pair,
            distance=float(r[k]),
        )
    return float(r[k])


# -- potential calculus ----------------------------------------------------


@dataclass(frozen=True)
class DerivativeBundle:
    value: float
    gradient: np.ndarray  # realified, length 2n
    hessian: np.ndarray  # 2n x 2n


def potential(config) -> float:
    """U = sum over pairs of m_i m_j / r_ij^2."""
    config = as_configuration(config)
    check_collisions(config)
    q, m = config.positions, config.masses
    i, j = _pairs(config.n)
    r2 = np.abs(q[i] - q[j]) ** 2
    return float(np.sum(m[i] * m[j] / r2))


def potential_gradient(config) -> np.ndarray:
    """Exact realified gradient of the potential."""
    config = as_configuration(config)
    check_collisions(config)
    q, m = config.positions, config.masses
    i, j = _pairs(config.n)
    d = q[i] - q[j]
    # d/dq_i of m_i m_j |d|^-2 is -2 m_i m_j d / |d|^4
    w = -2.0 * m[i] * m[j] * d / np.abs(d) ** 4
    g = np.zeros(config.n, dtype=complex)
    np.add.at(g, i, w)
    np.add.at(g, j, -w)
    return realify(g)


def pair_forces(q: np.ndarray, m: np.ndarray) -> tuple[float, np.ndarray]:
    """Unchecked potential and complex-regrouped gradient; the integrators' hot path."""
    D = q[None, :] - q[:, None]  # D[k, j] = q_j - q_k
    r2 = D.real**2 + D.imag**2
    np.fill_diagonal(r2, np.inf)
    mm = m[:, None] * m[None, :]
    value = 0.5 * float(np.sum(mm / r2))
    grad = 2.0 * np.sum(mm * D / r2**2, axis=1)
    return value, grad


def potential_derivatives(config) -> DerivativeBundle:
    """Value, realified gradient and Hessian of the potential in closed form."""
    config = as_configuration(config)
    check_collisions(config)
    q, m = config.positions, config.masses
    n = config.n
    i, j = _pairs(n)
    d = q[i] - q[j]
    mm = m[i] * m[j]
    r2 = np.abs(d) ** 2
    value = float(np.sum(mm / r2))

    w = -2.0 * mm * d / r2**2
    g = np.zeros(n, dtype=complex)
    np.add.at(g, i, w)
    np.add.at(g, j, -w)

    # Hessian of m |d|^-2 w.r.t. the 2-vector d: m (8 d d^T / r^6 - 2 I / r^4)
    dv = np.stack([d.real, d.imag], axis=-1)
    blocks = mm[:, None, None] * (
        8.0 * dv[:, :, None] * dv[:, None, :] / (r2**3)[:, None, None]
        - 2.0 * np.eye(2)[None] / (r2**2)[:, None, None]
    )
    hess = np.zeros((n, 2, n, 2))
    for b, a, c in zip(blocks, i, j):
        hess[a, :, a, :] += b
        hess[c, :, c, :] += b
        hess[a, :, c, :] -= b
        hess[c, :, a, :] -= b
    return DerivativeBundle(value, realify(g), hess.reshape(2 * n, 2 * n))


def moment_of_inertia(config) -> float:
    """Moment of inertia about the center of mass."""
    config = as_configuration(config)
    q, m = config.positions, config.masses
    qcm = np.sum(m * q) / np.sum(m)
    return float(np.sum(m * np.abs(q - qcm) ** 2))


# -- center-of-mass embedding ---------------------------------------------

_L4 = np.array(
    [
        [0.5, 1 / np.sqrt(2), 0.0],
        [0.5, -1 / np.sqrt(2), 0.0],
        [-0.5, 0.0, 1 / np.sqrt(2)],
        [-0.5, 0.0, -1 / np.sqrt(2)],
    ]
)


@dataclass(frozen=True)
class ComEmbedding:
    """Real n x (n-1) matrix whose columns are an orthonormal zero-sum basis.

    Being real, it acts on complex coordinates componentwise and is an
    isometry of C^(n-1) onto the center-of-mass-zero subspace of C^n.
    """

    basis: np.ndarray

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def realified(self) -> np.ndarray:
        return np.kron(self.basis, np.eye(2))

    def embed(self, p) -> np.ndarray:
        return self.basis @ np.asarray(p, dtype=complex)

    def project(self, q) -> np.ndarray:
        """Adjoint: center-of-mass-zero positions back to Jacobi coordinates."""
        return self.basis.T @ np.asarray(q, dtype=complex)


def com_embedding(n: int) -> ComEmbedding:
    """Deterministic Jacobi-type basis; for n=4 the fixed matrix used throughout."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    if n == 4:
        return ComEmbedding(_L4.copy())
    cols = []
    for k in range(1, n):
        v = np.zeros(n)
        v[:k] = 1.0
        v[k] = -float(k)
        for c in cols:
            v -= np.dot(c, v) * c
        cols.append(v / np.linalg.norm(v))
    return ComEmbedding(np.column_stack(cols))


# -- potential restricted to the center-of-mass subspace -------------------


@dataclass(frozen=True)
class RestrictedPotential:
    """U_L = U o L at p, with its realified gradient/Hessian and directional derivatives."""

    value: float
    gradient: np.ndarray
    hessian: np.ndarray
    first: np.ndarray  # d_a U_L for each supplied direction
    second: np.ndarray  # d_a^2 U_L for each supplied direction


def restricted_potential(p, emb: ComEmbedding | None = None, directions: Sequence = ()) -> RestrictedPotential:
    """Evaluate U_L(p) and derivatives along realified ``directions`` in C^(n-1)."""
    p = np.asarray(p, dtype=complex)
    emb = com_embedding(p.size + 1) if emb is None else emb
    bundle = potential_derivatives(Configuration(emb.embed(p)))
    Lr = emb.realified
    grad = Lr.T @ bundle.gradient
    hess = Lr.T @ bundle.hessian @ Lr
    dirs = np.atleast_2d(np.asarray(directions, dtype=float)) if len(directions) else np.zeros((0, grad.size))
    first = dirs @ grad
    second = np.einsum("ai,ij,aj->a", dirs, hess, dirs)
    return RestrictedPotential(bundle.value, grad, hess, first, second)


def restricted_value(p, emb: ComEmbedding | None = None) -> float:
    p = np.asarray(p, dtype=complex)
    emb = com_embedding(p.size + 1) if emb is None else emb
    return potential(Configuration(emb.embed(p)))


def restricted_gradient(p, emb: ComEmbedding | None = None) -> np.ndarray:
    p = np.asarray(p, dtype=complex)
    emb = com_embedding(p.size + 1) if emb is None else emb
    return emb.realified.T @ potential_gradient(Configuration(emb.embed(p)))
