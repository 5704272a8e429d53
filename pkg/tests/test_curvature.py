import itertools
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from shapecurv.curvature import (
    collinear_normal_curvature,
    collinear_rho_alpha,
    equilateral_point,
    inequality_sides,
    kn_block,
    oneill_term,
    pants_curvature,
    sectional_curvature,
)
from shapecurv.errors import CollisionError, FrameError
from shapecurv.nbody import com_embedding, complexify, mul_i, realify
from shapecurv.sampling import random_pair, random_point
from shapecurv.shape import CollinearChart, ReducedPoint, TangentPair, normal_plane_frame, tangent_plane_frame

ANCHOR = CollinearChart(math.pi / 8, math.pi / 2)


def symbolic_anchor():
    """Exact U, |grad U / 2|^2 and curvature terms at phi = pi/8 from a sympy model."""
    x = sp.symbols("x0:6", real=True)
    z = [x[0] + sp.I * x[1], x[2] + sp.I * x[3], x[4] + sp.I * x[5]]
    r2 = sp.sqrt(2)
    L = sp.Matrix(
        [
            [sp.Rational(1, 2), 1 / r2, 0],
            [sp.Rational(1, 2), -1 / r2, 0],
            [-sp.Rational(1, 2), 0, 1 / r2],
            [-sp.Rational(1, 2), 0, -1 / r2],
        ]
    )
    q = L * sp.Matrix(z)
    U = 0
    for j, k in itertools.combinations(range(4), 2):
        d = q[j] - q[k]
        U += 1 / sp.expand(d * sp.conjugate(d))
    phi = sp.pi / 8
    c, s = sp.cos(phi), sp.sin(phi)
    point = {x[0]: 0, x[1]: 0, x[2]: c, x[3]: 0, x[4]: s, x[5]: 0}
    # normal-plane frame i(sin phi cos theta, sin phi sin theta, -cos phi), i(-sin theta, cos theta, 0) at theta=pi/2
    v1 = [0, 0, 0, s, 0, -c]
    v2 = [0, -1, 0, 0, 0, 0]
    grad = [sp.diff(U, xi) for xi in x]
    hess = sp.hessian(U, x)
    at = lambda e: sp.nsimplify(sp.simplify(e.subs(point)))
    u = at(U)
    g = [at(gi) for gi in grad]
    d1 = sum(a * b for a, b in zip(g, v1))
    d2 = sum(a * b for a, b in zip(g, v2))
    H = hess.subs(point)
    dd1 = sp.simplify((sp.Matrix([v1]) * H * sp.Matrix(v1))[0])
    dd2 = sp.simplify((sp.Matrix([v2]) * H * sp.Matrix(v2))[0])
    grad_norm = sp.simplify(sum(gi**2 for gi in g) / 4)
    return {
        "u": sp.simplify(u),
        "d1": sp.simplify(d1),
        "d2": sp.simplify(d2),
        "grad_norm": grad_norm,
        "lap": sp.simplify(dd1 + dd2),
    }


@pytest.fixture(scope="module")
def exact():
    return symbolic_anchor()


def test_anchor_symbolic_values(exact):
    assert exact["u"] == 20
    assert exact["d1"] == 0
    assert exact["d2"] == 0
    assert exact["grad_norm"] == 976
    assert sp.simplify(-exact["u"] * exact["lap"] / 2) == 3920


def test_anchor_matches_symbolic(exact):
    b = sectional_curvature(normal_plane_frame(ANCHOR))
    assert b.u_l == pytest.approx(20, rel=1e-13)
    assert b.term_first_partials == pytest.approx(0, abs=1e-9)
    assert b.term_grad_norm == pytest.approx(-float(exact["grad_norm"]), rel=1e-12)
    assert b.term_laplacian == pytest.approx(-float(exact["u"] * exact["lap"] / 2), rel=1e-12)
    assert b.term_oneill == pytest.approx(0, abs=1e-12)
    assert b.k == pytest.approx((3920 - 976) / 20**3, rel=1e-12)


def test_anchor_inequality_values():
    sides = inequality_sides(math.pi / 8)
    t = collinear_rho_alpha(math.pi / 8)
    assert t.sum_rho(2) == pytest.approx(20, rel=1e-13)
    assert t.sum_rho(6) == pytest.approx(680, rel=1e-13)
    assert t.sum_alpha_rho4() == pytest.approx(196, rel=1e-13)
    assert sides.lhs == pytest.approx(976, rel=1e-13)
    assert sides.rhs == pytest.approx(3920, rel=1e-13)
    assert sides.holds


@pytest.mark.parametrize("phi", np.linspace(0.02, math.pi / 4 - 0.02, 13))
def test_normal_curvature_positive_first_quadrant(phi):
    assert sectional_curvature(normal_plane_frame(CollinearChart(phi, math.pi / 2))).k > 0


@pytest.mark.parametrize("phi", np.linspace(0.03, math.pi / 4 - 0.03, 50))
def test_rho_alpha_algebra_matches_general_formula(phi):
    direct = sectional_curvature(normal_plane_frame(CollinearChart(phi, math.pi / 2)))
    algebra = collinear_normal_curvature(phi)
    assert algebra.k == pytest.approx(direct.k, rel=1e-11)
    assert algebra.term_grad_norm == pytest.approx(direct.term_grad_norm, rel=1e-11)
    assert algebra.term_laplacian == pytest.approx(direct.term_laplacian, rel=1e-11)


@pytest.mark.parametrize("phi", np.linspace(0.03, math.pi / 4 - 0.03, 50))
def test_rho_relations(phi):
    t = collinear_rho_alpha(phi)
    r = t.rho
    assert r[2, 4] == -r[1, 3]
    assert r[2, 3] == -r[1, 4]
    # gaps from the chart positions
    q = ReducedPoint([0, math.cos(phi), math.sin(phi)]).bodies().real
    for (j, k), val in r.items():
        assert val == pytest.approx(1 / (q[j - 1] - q[k - 1]), rel=1e-12)
    assert all(a >= 0 for a in t.alpha.values())
    sides = inequality_sides(phi)
    assert sides.lhs_rearranged == pytest.approx(sides.lhs, rel=1e-9)
    assert sides.rhs_rearranged == pytest.approx(sides.rhs, rel=1e-9)


@pytest.mark.parametrize("phi", np.linspace(0.03, math.pi / 4 - 0.03, 9))
def test_inequality_symmetric_under_reflection(phi):
    a = inequality_sides(phi)
    b = inequality_sides(math.pi / 2 - phi)
    assert a.lhs == pytest.approx(b.lhs, rel=1e-10)
    assert a.rhs == pytest.approx(b.rhs, rel=1e-10)


def test_inequality_rejects_collision():
    with pytest.raises(CollisionError):
        inequality_sides(math.pi / 4)


def test_scale_and_phase_invariance(rng):
    for _ in range(30):
        pair = random_pair(rng, random_point(rng, 4))
        k0 = sectional_curvature(pair).k
        for c in (2.5, 0.3j, -1 + 1j):
            assert sectional_curvature(pair.transformed(c)).k == pytest.approx(k0, rel=1e-10)


def test_plane_basis_independence(rng):
    for _ in range(30):
        pair = random_pair(rng, random_point(rng, 4))
        a = rng.uniform(0, 2 * math.pi)
        w1 = math.cos(a) * pair.v1 + math.sin(a) * pair.v2
        w2 = -math.sin(a) * pair.v1 + math.cos(a) * pair.v2
        rot = TangentPair(pair.base, w1, w2)
        assert sectional_curvature(rot).k == pytest.approx(sectional_curvature(pair).k, rel=1e-10)


@pytest.mark.parametrize("perm", [(1, 0, 2, 3), (2, 3, 0, 1), (3, 2, 1, 0), (0, 2, 1, 3), (1, 2, 3, 0)])
def test_body_permutation_equivariance(rng, perm):
    emb = com_embedding(4)
    for _ in range(10):
        pair = random_pair(rng, random_point(rng, 4))
        move = lambda v: realify(emb.project(emb.embed(complexify(v))[list(perm)]))
        base = ReducedPoint(complexify(move(pair.base.real)))
        moved = TangentPair(base, move(pair.v1), move(pair.v2))
        assert sectional_curvature(moved).k == pytest.approx(sectional_curvature(pair).k, rel=1e-10)


def test_holomorphic_plane_oneill(rng):
    for _ in range(30):
        pair = random_pair(rng, random_point(rng, 4))
        hol = TangentPair(pair.base, pair.v1, mul_i(pair.v1))
        u = sectional_curvature(hol).u_l
        assert oneill_term(hol) == pytest.approx(3 * u**2 / pair.base.norm**2, rel=1e-12)


def test_breakdown_consistency(rng):
    for _ in range(30):
        pair = random_pair(rng, random_point(rng, 5))
        b = sectional_curvature(pair)
        assert b.k == pytest.approx(b.scaled / b.u_l**3, rel=1e-14)
        assert b.kn_block + b.term_oneill / b.u_l**3 == pytest.approx(b.k, rel=1e-10, abs=1e-14)
        assert kn_block(pair) == b.kn_block
        assert b.term_first_partials >= 0
        assert b.term_grad_norm <= 0
        assert b.term_oneill >= 0
        assert set(b.as_dict()) == {"k", "term_first_partials", "term_grad_norm", "term_laplacian", "term_oneill", "u_l"}


def test_collinear_planes_have_no_oneill_term():
    for phi in (0.1, 0.3, 0.6):
        chart = CollinearChart(phi, math.pi / 2)
        assert oneill_term(normal_plane_frame(chart)) == pytest.approx(0, abs=1e-12)
        assert oneill_term(tangent_plane_frame(chart)) == pytest.approx(0, abs=1e-12)


def test_invalid_frame_rejected():
    pair = normal_plane_frame(ANCHOR)
    with pytest.raises(FrameError):
        sectional_curvature(TangentPair(pair.base, pair.v1, pair.v1))


def test_pants_equilateral_flat_and_negative_elsewhere(rng):
    assert pants_curvature(equilateral_point()) == pytest.approx(0, abs=1e-12)
    for _ in range(100):
        assert pants_curvature(random_point(rng, 3, min_sep=1e-2)) < 0


def test_pants_requires_three_bodies(rng):
    with pytest.raises(ValueError):
        pants_curvature(random_point(rng, 4))


@settings(max_examples=60, deadline=None)
@given(
    phi=st.floats(0.01, math.pi / 4 - 0.01),
    theta=st.floats(-math.pi, math.pi),
)
def test_normal_frame_curvature_finite(phi, theta):
    try:
        pair = normal_plane_frame(CollinearChart(phi, theta))
    except CollisionError:
        return
    b = sectional_curvature(pair)
    assert math.isfinite(b.k)
    assert b.u_l > 0
