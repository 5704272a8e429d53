import math

import numpy as np
import pytest

from shapecurv.dynamics import (
    PhaseState,
    compare_newton_jm,
    hausdorff_distance,
    integrate_jm_geodesic,
    integrate_newton,
    matched_initial_data,
    newton_rhs,
    shape_trace,
)
from shapecurv.errors import CollisionError
from shapecurv.nbody import com_embedding, potential_gradient

SQUARE = np.array([1, 1j, -1, -1j], dtype=complex)


def generic_state(rng):
    q = SQUARE * 2.0 + 0.2 * (rng.normal(size=4) + 1j * rng.normal(size=4))
    v = 0.3 * (rng.normal(size=4) + 1j * rng.normal(size=4))
    return PhaseState(q, v - v.mean(), np.array([1.0, 2.0, 1.5, 1.0]))


@pytest.fixture(scope="module")
def matched():
    state, _, _ = matched_initial_data()
    return compare_newton_jm(state, 1.0, 1e-4)


def test_square_at_rest_accelerates_inward():
    dq, dv = newton_rhs(PhaseState(SQUARE, np.zeros(4)))
    np.testing.assert_array_equal(dq, 0)
    for q, a in zip(SQUARE, dv):
        # antiparallel to the position
        assert (a / q).imag == pytest.approx(0, abs=1e-14)
        assert (a / q).real < 0


def test_total_force_vanishes(rng):
    state = generic_state(rng)
    _, dv = newton_rhs(state)
    assert abs(np.sum(state.masses * dv)) < 1e-12


def test_energy_derivative_along_field_is_zero(rng):
    state = generic_state(rng)
    dq, dv = newton_rhs(state)
    # dH/dt = sum m v.a - grad U . v
    grad = potential_gradient(state.config)
    v = np.column_stack([state.velocities.real, state.velocities.imag]).ravel()
    kin = float(np.sum(state.masses * np.real(np.conj(state.velocities) * dv)))
    assert kin - grad @ v == pytest.approx(0, abs=1e-12)


def test_single_step_energy_drift(rng):
    state = generic_state(rng)
    tr = integrate_newton(state, 1e-4, 1e-4)
    assert abs(tr.energy[-1] - tr.energy[0]) < 1e-10


def test_matched_data_monitors():
    state, p0, v0 = matched_initial_data()
    assert state.energy() == pytest.approx(0, abs=1e-12)
    assert state.angular_momentum() == pytest.approx(0, abs=1e-12)
    assert state.inertia_rate() == pytest.approx(0, abs=1e-12)
    assert abs(np.sum(state.positions)) < 1e-14
    assert abs(np.vdot(p0, v0)) < 1e-12 * np.linalg.norm(p0) * np.linalg.norm(v0)


def test_zero_energy_inertia_constant(matched):
    tr = matched.newton
    assert not tr.truncated
    assert np.max(np.abs(tr.inertia - tr.inertia[0])) / tr.inertia[0] < 1e-6
    assert np.max(np.abs(tr.energy - tr.energy[0])) < 1e-8
    assert np.max(np.abs(tr.angular_momentum - tr.angular_momentum[0])) < 1e-8
    assert np.max(np.abs(tr.inertia_accel_residual)) < 1e-5 * max(1.0, np.max(tr.potential))


def test_inertia_rate_matches_differences(matched):
    tr = matched.newton
    dt = tr.times[1] - tr.times[0]
    numeric = np.gradient(tr.inertia, dt)
    assert np.max(np.abs(numeric[1:-1] - tr.inertia_rate[1:-1])) < 1e-6


def test_generic_conservation(rng):
    tr = integrate_newton(generic_state(rng), 1.0, 1e-4)
    assert not tr.truncated
    assert np.max(np.abs(tr.energy - tr.energy[0])) < 1e-8
    assert np.max(np.abs(tr.angular_momentum - tr.angular_momentum[0])) < 1e-8


def test_rotation_equivariance(rng):
    state = generic_state(rng)
    a = integrate_newton(state, 0.2, 1e-3)
    b = integrate_newton(state.rotated(0.7), 0.2, 1e-3)
    np.testing.assert_allclose(b.positions, np.exp(0.7j) * a.positions, atol=1e-12)


def test_time_reversibility(rng):
    state = generic_state(rng)
    fwd = integrate_newton(state, 0.5, 1e-4).state()
    back = integrate_newton(PhaseState(fwd.positions, -fwd.velocities, fwd.masses), 0.5, 1e-4).state()
    scale = np.linalg.norm(np.concatenate([state.positions, state.velocities]))
    err = np.linalg.norm(np.concatenate([back.positions - state.positions, -back.velocities - state.velocities]))
    assert err / scale < 1e-7


def test_jm_speed_and_horizontality(matched):
    geo = matched.geodesic
    assert not geo.truncated
    assert np.ptp(geo.jm_speed) / geo.jm_speed[0] < 1e-6
    x, v = geo.points, geo.velocities
    bound = 1e-6 * np.linalg.norm(x, axis=1) * np.linalg.norm(v, axis=1)
    inner = np.sum(np.conj(x) * v, axis=1)
    assert np.all(np.abs(inner.real) < bound)
    assert np.all(np.abs(inner.imag) < bound)


def test_newton_and_geodesic_traces_agree(matched):
    assert matched.hausdorff < 1e-4


def test_shape_trace_invariant_under_phase_and_scale(rng):
    x = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
    assert hausdorff_distance(shape_trace(x), shape_trace(2.5j * x)) < 1e-14


def test_collision_truncates():
    q = np.array([-1, 1, 10, -10], dtype=complex)
    v = np.array([3, -3, 0, 0], dtype=complex)
    tr = integrate_newton(PhaseState(q, v), 2.0, 1e-3)
    assert tr.truncated
    assert isinstance(tr.collision, CollisionError)
    assert tr.times[-1] < 2.0


def test_collision_at_start_raises():
    with pytest.raises(CollisionError):
        integrate_newton(PhaseState([0, 0, 1, 2], np.zeros(4)), 1.0)


def test_geodesic_rejects_zero_velocity():
    with pytest.raises(ValueError):
        integrate_jm_geodesic(com_embedding(4).project(SQUARE), np.zeros(3), 1.0)


def test_equivalence_needs_unit_masses():
    state, _, _ = matched_initial_data()
    with pytest.raises(ValueError):
        compare_newton_jm(PhaseState(state.positions, state.velocities, np.full(4, 2.0)), 0.1)
