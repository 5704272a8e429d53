import math

import numpy as np
import pytest

from shapecurv.errors import CollisionError, FrameError, ZeroPointError
from shapecurv.nbody import com_embedding, complexify, mul_i, realify
from shapecurv.sampling import random_point
from shapecurv.shape import (
    CollinearChart,
    ReducedPoint,
    TangentPair,
    collinear_point,
    horizontal_frame,
    horizontal_project,
    normal_plane_frame,
    tangent_plane_frame,
    vertical_frame,
)


def random_valid_chart(rng):
    while True:
        chart = CollinearChart(rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi))
        try:
            collinear_point(chart)
            return chart
        except CollisionError:
            continue


def test_vertical_frame_basic():
    e, ie = vertical_frame([1, 0, 0])
    np.testing.assert_array_equal(e, [1, 0, 0, 0, 0, 0])
    np.testing.assert_array_equal(ie, [0, 1, 0, 0, 0, 0])


def test_vertical_frame_orthonormal(rng):
    for _ in range(100):
        e, ie = vertical_frame(complexify(rng.normal(size=6)))
        G = np.array([[e @ e, e @ ie], [ie @ e, ie @ ie]])
        np.testing.assert_allclose(G, np.eye(2), atol=1e-12)


def test_zero_point():
    with pytest.raises(ZeroPointError):
        vertical_frame([0, 0, 0])


def test_horizontal_project_kills_vertical_and_is_idempotent(rng):
    for _ in range(100):
        p = complexify(rng.normal(size=6))
        np.testing.assert_allclose(horizontal_project(p, realify(p)), 0, atol=1e-12)
        np.testing.assert_allclose(horizontal_project(p, realify(1j * p)), 0, atol=1e-12)
        w = rng.normal(size=6)
        h = horizontal_project(p, w)
        np.testing.assert_allclose(horizontal_project(p, h), h, atol=1e-12)
        e, ie = vertical_frame(p)
        np.testing.assert_allclose(h + (w @ e) * e + (w @ ie) * ie, w, atol=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_horizontal_frame(rng, n):
    p = complexify(rng.normal(size=2 * (n - 1)))
    F = np.column_stack(horizontal_frame(p))
    assert F.shape[1] == 2 * n - 4
    np.testing.assert_allclose(F.T @ F, np.eye(2 * n - 4), atol=1e-10)
    e, ie = vertical_frame(p)
    np.testing.assert_allclose(F.T @ e, 0, atol=1e-10)
    np.testing.assert_allclose(F.T @ ie, 0, atol=1e-10)
    # the horizontal space is complex
    iF = np.column_stack([mul_i(f) for f in F.T])
    resid = iF - F @ (F.T @ iF)
    assert np.abs(resid).max() < 1e-10


def test_collinear_point_anchor():
    p = collinear_point(CollinearChart(math.pi / 8, math.pi / 2))
    np.testing.assert_allclose(p.coords, [0, math.cos(math.pi / 8), math.sin(math.pi / 8)], atol=1e-16)
    q = p.bodies()
    c, s = math.cos(math.pi / 8) / math.sqrt(2), math.sin(math.pi / 8) / math.sqrt(2)
    np.testing.assert_allclose(q, [c, -c, s, -s], atol=1e-15)
    assert 1 / (q[0] - q[1]).real == pytest.approx(1 / (math.sqrt(2) * math.cos(math.pi / 8)))


@pytest.mark.parametrize("phi", [0.0, math.pi / 4, -math.pi / 4, math.pi / 2])
def test_collision_angles(phi):
    with pytest.raises(CollisionError):
        collinear_point(CollinearChart(phi, math.pi / 2))


def test_collision_message_names_pair():
    with pytest.raises(CollisionError) as info:
        collinear_point(CollinearChart(math.pi / 4, math.pi / 2))
    assert set(info.value.pair) in ({1, 3}, {2, 4})


def test_chart_unit_norm(rng):
    for _ in range(100):
        assert collinear_point(random_valid_chart(rng)).norm == pytest.approx(1.0, abs=1e-14)


def test_normal_plane_frame(rng):
    for _ in range(100):
        chart = random_valid_chart(rng)
        pair = normal_plane_frame(chart)
        pair.validate()
        assert pair.v1 @ mul_i(pair.v2) == pytest.approx(0, abs=1e-15)
        # the frame is already horizontal: projection leaves v1 unchanged
        np.testing.assert_allclose(horizontal_project(pair.base, pair.v1), pair.v1, atol=1e-15)


@pytest.mark.parametrize("phi", [0.1, 0.3, 0.7])
def test_normal_frame_embeds_purely_imaginary(phi):
    pair = normal_plane_frame(CollinearChart(phi, math.pi / 2))
    emb = com_embedding(4)
    for v in (pair.v1, pair.v2):
        assert np.all(emb.embed(complexify(v)).real == 0)


def test_tangent_plane_frame(rng):
    for _ in range(100):
        chart = random_valid_chart(rng)
        tp = tangent_plane_frame(chart)
        tp.validate()
        npf = normal_plane_frame(chart)
        # i maps the tangent plane onto the normal plane
        N = np.column_stack([npf.v1, npf.v2])
        for v in (tp.v1, tp.v2):
            iv = mul_i(v)
            assert np.linalg.norm(iv - N @ (N.T @ iv)) < 1e-12
        assert tp.v1 @ mul_i(tp.v2) == pytest.approx(0, abs=1e-15)


def test_chart_frames_lie_in_horizontal_frame_span(rng):
    for _ in range(20):
        pair = normal_plane_frame(random_valid_chart(rng))
        F = np.column_stack(horizontal_frame(pair.base))
        for v in (pair.v1, pair.v2):
            assert np.linalg.norm(v - F @ (F.T @ v)) < 1e-10


def test_spanning_orthonormalizes():
    pair = normal_plane_frame(CollinearChart(0.3, 1.0))
    sp = TangentPair.spanning(pair.base, 7 * pair.v1, 3 * pair.v1 + 7 * pair.v2)
    np.testing.assert_allclose(sp.v1, pair.v1, atol=1e-14)
    np.testing.assert_allclose(sp.v2, pair.v2, atol=1e-14)


def test_spanning_rejects_vertical_and_parallel():
    p = ReducedPoint([1, 0.5, 0.2j])
    w = horizontal_frame(p)[0]
    with pytest.raises(FrameError):
        TangentPair.spanning(p, w, p.real)
    with pytest.raises(FrameError):
        TangentPair.spanning(p, w, 2 * w)


def test_random_point_separation(rng):
    p = random_point(rng, 4, min_sep=0.2)
    q = p.bodies() / p.norm
    i, j = np.triu_indices(4, 1)
    assert np.abs(q[i] - q[j]).min() >= 0.2
