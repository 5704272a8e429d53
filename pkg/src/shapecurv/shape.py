"""Quotient geometry of C^(n-1) under rotations and scalings.

At a point p the vertical space is C p = span(p, i p); the horizontal space is its
realified orthogonal complement and carries the metric of shape space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FrameError, ZeroPointError
from .nbody import Configuration, check_collisions, com_embedding, complexify, mul_i, rdot, realify

FRAME_TOL = 1e-10


@dataclass(frozen=True)
class ReducedPoint:
    """Representative p in C^(n-1) of a shape; any nonzero complex multiple is the same shape."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", np.asarray(self.coords, dtype=complex).ravel())

    @property
    def n(self) -> int:
        return self.coords.size + 1

    @property
    def real(self) -> np.ndarray:
        return realify(self.coords)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def bodies(self) -> np.ndarray:
        """Positions of the n bodies (center of mass at the origin)."""
        return com_embedding(self.n).embed(self.coords)

    def check_collisions(self) -> float:
        return check_collisions(Configuration(self.bodies()))


def as_point(p) -> ReducedPoint:
    return p if isinstance(p, ReducedPoint) else ReducedPoint(p)


def _require_nonzero(p: ReducedPoint) -> None:
    if not p.norm > 0:
        raise ZeroPointError("reduced point has zero norm")


def vertical_frame(p) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal realified basis (p/|p|, ip/|p|) of the vertical space."""
    p = as_point(p)
    _require_nonzero(p)
    e = p.real / p.norm
    return e, mul_i(e)


def horizontal_project(p, w) -> np.ndarray:
    p = as_point(p)
    e, ie = vertical_frame(p)
    w = np.asarray(w, dtype=float)
    return w - np.dot(w, e) * e - np.dot(w, ie) * ie


def horizontal_frame(p) -> list[np.ndarray]:
    """Orthonormal basis of the horizontal space (2n-4 vectors).

    Gram-Schmidt over horizontal projections of the realified standard basis,
    in index order; projections with norm below 1e-8 are skipped.
    """
    p = as_point(p)
    dim = 2 * (p.n - 1)
    frame: list[np.ndarray] = []
    for k in range(dim):
        w = np.zeros(dim)
        w[k] = 1.0
        w = horizontal_project(p, w)
        for f in frame:
            w -= np.dot(f, w) * f
        nrm = np.linalg.norm(w)
        if nrm < 1e-8:
            continue
        frame.append(w / nrm)
        if len(frame) == dim - 2:
            break
    return frame


@dataclass(frozen=True)
class TangentPair:
    """Two orthonormal horizontal realified vectors at ``base`` spanning a two-plane."""

    base: ReducedPoint
    v1: np.ndarray
    v2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", as_point(self.base))
        object.__setattr__(self, "v1", np.asarray(self.v1, dtype=float))
        object.__setattr__(self, "v2", np.asarray(self.v2, dtype=float))

    @classmethod
    def spanning(cls, base, w1, w2) -> "TangentPair":
        """Gram-Schmidt (w1 first) within the plane, then validate."""
        base = as_point(base)
        w1 = np.asarray(w1, dtype=float)
        w2 = np.asarray(w2, dtype=float)
        n1 = np.linalg.norm(w1)
        if not n1 > 0:
            raise FrameError("first spanning vector is zero")
        v1 = w1 / n1
        w2 = w2 - np.dot(v1, w2) * v1
        n2 = np.linalg.norm(w2)
        if n2 < 1e-8 * max(1.0, np.linalg.norm(w2)):
            raise FrameError("spanning vectors are parallel")
        pair = cls(base, v1, w2 / n2)
        pair.validate()
        return pair

    def validate(self, tol: float = FRAME_TOL) -> None:
        dim = 2 * (self.base.n - 1)
        if self.v1.shape != (dim,) or self.v2.shape != (dim,):
            raise FrameError(f"tangent vectors must have length {dim}")
        _require_nonzero(self.base)
        a, b, c = rdot(self.v1, self.v1), rdot(self.v2, self.v2), rdot(self.v1, self.v2)
        if abs(a - 1) > tol or abs(b - 1) > tol or abs(c) > tol:
            raise FrameError("tangent vectors are not orthonormal")
        e, ie = vertical_frame(self.base)
        worst = max(abs(rdot(v, f)) for v in (self.v1, self.v2) for f in (e, ie))
        if worst > tol:
            raise FrameError(f"tangent vectors are not horizontal (vertical component {worst:.3g})")

    def transformed(self, c: complex) -> "TangentPair":
        """Same shape and plane at the representative c*p, with frame rotated by c/|c|."""
        u = c / abs(c)
        rot = lambda v: realify(u * complexify(v))
        return TangentPair(ReducedPoint(c * self.base.coords), rot(self.v1), rot(self.v2))


# -- collinear charts (n = 4) ---------------------------------------------


@dataclass(frozen=True)
class CollinearChart:
    """Angles on the real 2-sphere p = (cos phi cos theta, cos phi sin theta, sin phi)."""

    phi: float
    theta: float


def _chart_point(chart: CollinearChart) -> np.ndarray:
    cf, sf = np.cos(chart.phi), np.sin(chart.phi)
    ct, st = np.cos(chart.theta), np.sin(chart.theta)
    return np.array([cf * ct, cf * st, sf], dtype=complex)


def collinear_point(chart: CollinearChart) -> ReducedPoint:
    p = ReducedPoint(_chart_point(chart))
    p.check_collisions()
    return p


def normal_plane_frame(chart: CollinearChart) -> TangentPair:
    """Frame of the normal plane i T RP^2: v1 = -i dp/dphi, v2 = (i / cos phi) dp/dtheta."""
    p = collinear_point(chart)
    cf, sf = np.cos(chart.phi), np.sin(chart.phi)
    ct, st = np.cos(chart.theta), np.sin(chart.theta)
    v1 = 1j * np.array([sf * ct, sf * st, -cf])
    v2 = 1j * np.array([-st, ct, 0.0])
    return TangentPair(p, realify(v1), realify(v2))


def tangent_plane_frame(chart: CollinearChart) -> TangentPair:
    """Frame of T RP^2 itself: dp/dphi and (1 / cos phi) dp/dtheta."""
    p = collinear_point(chart)
    cf, sf = np.cos(chart.phi), np.sin(chart.phi)
    ct, st = np.cos(chart.theta), np.sin(chart.theta)
    v1 = np.array([-sf * ct, -sf * st, cf], dtype=complex)
    v2 = np.array([-st, ct, 0.0], dtype=complex)
    return TangentPair(p, realify(v1), realify(v2))
