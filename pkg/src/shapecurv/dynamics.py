"""Newton's equations for the strong-force potential and Jacobi-Maupertuis geodesics.

Zero-energy, zero-momentum Newton motion and the geodesics of U_L ds^2 trace the
same curves in C^(n-1); this module integrates both so that can be checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid
from scipy.spatial.distance import directed_hausdorff

from .errors import CollisionError
from .nbody import (
    COLLISION_RTOL,
    Configuration,
    check_collisions,
    com_embedding,
    complexify,
    potential,
    pair_forces,
    potential_gradient,
    restricted_value,
)
from .shape import CollinearChart, horizontal_project, normal_plane_frame

DEFAULT_DT = 1e-4


@dataclass(frozen=True)
class PhaseState:
    positions: np.ndarray
    velocities: np.ndarray
    masses: np.ndarray = field(default=None)

    def __post_init__(self):
        q = np.asarray(self.positions, dtype=complex).ravel()
        v = np.asarray(self.velocities, dtype=complex).ravel()
        m = np.ones(q.size) if self.masses is None else np.asarray(self.masses, dtype=float).ravel()
        if not (q.shape == v.shape == m.shape):
            raise ValueError("positions, velocities and masses must have equal length")
        object.__setattr__(self, "positions", q)
        object.__setattr__(self, "velocities", v)
        object.__setattr__(self, "masses", m)

    @property
    def config(self) -> Configuration:
        return Configuration(self.positions, self.masses)

    def kinetic(self) -> float:
        return 0.5 * float(np.sum(self.masses * np.abs(self.velocities) ** 2))

    def energy(self) -> float:
        return self.kinetic() - potential(self.config)

    def angular_momentum(self) -> float:
        return float(np.sum(self.masses * np.imag(np.conj(self.positions) * self.velocities)))

    def inertia(self) -> float:
        return float(np.sum(self.masses * np.abs(self.positions) ** 2))

    def inertia_rate(self) -> float:
        return 2.0 * float(np.sum(self.masses * np.real(np.conj(self.positions) * self.velocities)))

    def rotated(self, angle: float) -> "PhaseState":
        u = np.exp(1j * angle)
        return PhaseState(u * self.positions, u * self.velocities, self.masses)


def newton_rhs(state: PhaseState) -> tuple[np.ndarray, np.ndarray]:
    """(dq/dt, dv/dt) with acceleration grad U / m."""
    grad = complexify(potential_gradient(state.config))
    return state.velocities, grad / state.masses


def _rk4_step(f, y, dt):
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _n_steps(t_end: float, dt: float) -> int:
    if dt <= 0:
        raise ValueError("dt must be positive")
    return max(1, int(round(abs(t_end) / dt)))


@dataclass
class NewtonTrajectory:
    times: np.ndarray
    positions: np.ndarray  # (steps+1, n) complex
    velocities: np.ndarray
    masses: np.ndarray
    energy: np.ndarray
    potential: np.ndarray  # U = -V
    angular_momentum: np.ndarray
    inertia: np.ndarray
    inertia_rate: np.ndarray
    truncated: bool = False
    collision: CollisionError | None = None

    @property
    def inertia_accel_residual(self) -> np.ndarray:
        """d^2 I/dt^2 from differences of the inertia samples, minus 4H."""
        if self.times.size < 3:
            return np.zeros_like(self.times)
        dd = np.gradient(np.gradient(self.inertia, self.times, edge_order=2), self.times, edge_order=2)
        return dd - 4.0 * self.energy

    def state(self, k: int = -1) -> PhaseState:
        return PhaseState(self.positions[k], self.velocities[k], self.masses)


def _integrate(f, y0, n_steps, h, check):
    """Fixed-step RK4 on a complex state; stops before the first step that fails ``check``."""
    ys = [y0]
    y = y0
    collision = None
    for _ in range(n_steps):
        y_next = _rk4_step(f, y, h)
        try:
            check(y, y_next)
        except CollisionError as exc:
            collision = exc
            break
        y = y_next
        ys.append(y)
    return np.array(ys), collision


def _segment_min_gap(d0: np.ndarray, d1: np.ndarray) -> np.ndarray:
    """Smallest |d0 + s (d1 - d0)| over s in [0, 1], per pair."""
    dd = d1 - d0
    den = np.abs(dd) ** 2
    s = np.where(den > 0, -np.real(np.conj(d0) * dd) / np.where(den > 0, den, 1.0), 0.0)
    s = np.clip(s, 0.0, 1.0)
    return np.abs(d0 + s * dd)


def _near_collision_check(positions_of, m):
    """Reject a step whose endpoint, or the straight path to it, comes within 10x tolerance.

    The path test catches encounters a fixed step would otherwise jump over.
    """
    rtol = 10 * COLLISION_RTOL
    i, j = np.triu_indices(m.size, 1)

    def check(y_prev, y_next):
        q1 = positions_of(y_next)
        check_collisions(Configuration(q1, m), rtol=rtol)
        q0 = positions_of(y_prev)
        gaps = _segment_min_gap(q0[i] - q0[j], q1[i] - q1[j])
        k = int(np.argmin(gaps))
        if gaps[k] <= rtol * (1 + np.linalg.norm(q1)):
            raise CollisionError(
                f"bodies {i[k] + 1} and {j[k] + 1} pass within {gaps[k]:.3g} during a step",
                pair=(int(i[k]) + 1, int(j[k]) + 1),
                distance=float(gaps[k]),
            )

    return check


def integrate_newton(initial: PhaseState, t_end: float, dt: float = DEFAULT_DT) -> NewtonTrajectory:
    """Classical RK4 with fixed step; stops early (``truncated``) when bodies get within 10x tolerance."""
    m = initial.masses
    n = m.size
    steps = _n_steps(t_end, dt)
    h = math.copysign(dt, t_end) if t_end else dt
    check_collisions(initial.config)

    def f(y):
        _, grad = pair_forces(y[:n], m)
        return np.concatenate([y[n:], grad / m])

    y0 = np.concatenate([initial.positions, initial.velocities])
    Y, collision = _integrate(f, y0, steps, h, _near_collision_check(lambda y: y[:n], m))
    Q, V = Y[:, :n], Y[:, n:]
    i, j = np.triu_indices(n, 1)
    pot = np.sum(m[i] * m[j] / np.abs(Q[:, i] - Q[:, j]) ** 2, axis=1)
    kin = 0.5 * np.sum(m * np.abs(V) ** 2, axis=1)
    return NewtonTrajectory(
        times=h * np.arange(len(Y)),
        positions=Q,
        velocities=V,
        masses=m,
        energy=kin - pot,
        potential=pot,
        angular_momentum=np.sum(m * np.imag(np.conj(Q) * V), axis=1),
        inertia=np.sum(m * np.abs(Q) ** 2, axis=1),
        inertia_rate=2.0 * np.sum(m * np.real(np.conj(Q) * V), axis=1),
        truncated=collision is not None,
        collision=collision,
    )


@dataclass
class GeodesicTrajectory:
    times: np.ndarray
    points: np.ndarray  # (steps+1, n-1) complex, Jacobi coordinates
    velocities: np.ndarray
    jm_speed: np.ndarray  # U_L |dx/dt|^2
    truncated: bool = False
    collision: CollisionError | None = None


def integrate_jm_geodesic(p0, v0, t_end: float, dt: float = DEFAULT_DT) -> GeodesicTrajectory:
    """Geodesic of e^(2u) ds^2, u = log(U_L)/2: x'' = -2 (du.x') x' + |x'|^2 grad u."""
    p0 = np.asarray(p0, dtype=complex)
    v0 = np.asarray(v0, dtype=complex)
    if not np.any(v0):
        raise ValueError("initial velocity must be nonzero")
    d = p0.size
    L = com_embedding(d + 1).basis
    m = np.ones(d + 1)
    steps = _n_steps(t_end, dt)
    h = math.copysign(dt, t_end) if t_end else dt
    check_collisions(Configuration(L @ p0))

    def f(y):
        x, v = y[:d], y[d:]
        U, grad = pair_forces(L @ x, m)
        du = (L.T @ grad) / (2.0 * U)
        return np.concatenate([v, -2.0 * np.real(np.vdot(du, v)) * v + np.vdot(v, v).real * du])

    y0 = np.concatenate([p0, v0])
    Y, collision = _integrate(f, y0, steps, h, _near_collision_check(lambda y: L @ y[:d], m))
    X, V = Y[:, :d], Y[:, d:]
    Q = X @ L.T
    i, j = np.triu_indices(d + 1, 1)
    U = np.sum(1.0 / np.abs(Q[:, i] - Q[:, j]) ** 2, axis=1)
    speed = U * np.sum(np.abs(V) ** 2, axis=1)
    return GeodesicTrajectory(h * np.arange(len(Y)), X, V, speed, collision is not None, collision)


# -- matched zero-energy data and trace comparison -------------------------


def matched_initial_data(
    phi: float = math.pi / 8,
    theta: float = math.pi / 2,
    mix: float = 0.6,
    scale: float = 4.0,
) -> tuple[PhaseState, np.ndarray, np.ndarray]:
    """Zero-energy, zero-momentum four-body data starting at a collinear shape.

    The Jacobi point is ``scale * p(phi, theta)``; the direction is a unit
    horizontal vector mixing the two normal-plane frame vectors. Speed is set so
    that kinetic energy equals the potential (H = 0). Returns the Newton state
    and the matching (p0, v0) for the geodesic integrator.
    """
    pair = normal_plane_frame(CollinearChart(phi, theta))
    w = math.cos(mix) * pair.v1 + math.sin(mix) * pair.v2
    p0 = scale * pair.base.coords
    w = horizontal_project(p0, w)
    w /= np.linalg.norm(w)
    U = restricted_value(p0)
    v0 = math.sqrt(2.0 * U) * complexify(w)
    emb = com_embedding(4)
    state = PhaseState(emb.embed(p0), emb.embed(v0))
    return state, p0, v0


def shape_trace(points) -> np.ndarray:
    """Phase- and scale-invariant image of each row x: the realified projector x x* / |x|^2."""
    X = np.atleast_2d(np.asarray(points, dtype=complex))
    X = X / np.linalg.norm(X, axis=1, keepdims=True)
    P = X[:, :, None] * np.conj(X[:, None, :])
    k = P.shape[0]
    return np.concatenate([P.real.reshape(k, -1), P.imag.reshape(k, -1)], axis=1)


def hausdorff_distance(a, b) -> float:
    return max(directed_hausdorff(a, b)[0], directed_hausdorff(b, a)[0])


def jm_time_for(newton: NewtonTrajectory) -> float:
    """Geodesic parameter reached when the geodesic starts with Newton's initial velocity.

    With constant JM speed, d(tau)/dt = U(q(t)) / U(q(0)).
    """
    U = newton.potential
    return float(trapezoid(U, newton.times) / U[0])


@dataclass
class EquivalenceResult:
    newton: NewtonTrajectory
    geodesic: GeodesicTrajectory
    hausdorff: float


def compare_newton_jm(initial: PhaseState, t_end: float, dt: float = DEFAULT_DT) -> EquivalenceResult:
    """Integrate Newton from ``initial`` and the JM geodesic from the same Jacobi data; compare shape traces."""
    if not np.all(initial.masses == 1.0):
        raise ValueError("Newton/geodesic comparison needs unit masses")
    newton = integrate_newton(initial, t_end, dt)
    emb = com_embedding(initial.masses.size)
    qcm = np.mean(initial.positions)
    p0 = emb.project(initial.positions - qcm)
    v0 = emb.project(initial.velocities - np.mean(initial.velocities))
    tau = jm_time_for(newton)
    steps = max(1, newton.times.size - 1)
    geo = integrate_jm_geodesic(p0, v0, tau, abs(tau) / steps)
    newton_jacobi = (newton.positions - newton.positions.mean(axis=1, keepdims=True)) @ emb.basis
    dist = hausdorff_distance(shape_trace(newton_jacobi), shape_trace(geo.points))
    return EquivalenceResult(newton, geo, dist)
