"""Sectional curvature of the reduced Jacobi-Maupertuis metric on shape space.

For ambient-orthonormal horizontal v1, v2 at p, with U = U_L(p) and d_a the
directional derivative along v_a::

    U^3 K = 3/4 (d_1U^2 + d_2U^2) - |grad U / 2|^2 - U/2 (d_1^2 U + d_2^2 U)
            + 3 U^2 / |p|^2 (v1 . i v2)^2

The first three summands are the curvature of the conformal metric U ds^2
(times U^3); the last is the O'Neill correction of the quotient by C*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .nbody import com_embedding, complexify, mul_i, rdot, restricted_potential
from .shape import CollinearChart, ReducedPoint, TangentPair, as_point, horizontal_frame, normal_plane_frame

PAIRS4 = ((1, 2), (3, 4), (1, 3), (1, 4), (2, 4), (2, 3))


@dataclass(frozen=True)
class CurvatureBreakdown:
    term_first_partials: float
    term_grad_norm: float
    term_laplacian: float
    term_oneill: float
    u_l: float
    k: float

    @property
    def scaled(self) -> float:
        """U_L^3 K as the sum of the four terms."""
        return self.term_first_partials + self.term_grad_norm + self.term_laplacian + self.term_oneill

    @property
    def kn_block(self) -> float:
        return (self.term_first_partials + self.term_grad_norm + self.term_laplacian) / self.u_l**3

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "term_first_partials": self.term_first_partials,
            "term_grad_norm": self.term_grad_norm,
            "term_laplacian": self.term_laplacian,
            "term_oneill": self.term_oneill,
            "u_l": self.u_l,
        }


def _breakdown(first, grad_norm, laplacian, oneill, u) -> CurvatureBreakdown:
    total = first + grad_norm + laplacian + oneill
    return CurvatureBreakdown(first, grad_norm, laplacian, oneill, u, total / u**3)


def sectional_curvature(pair: TangentPair) -> CurvatureBreakdown:
    """Curvature of the quotient metric through span(d pi v1, d pi v2)."""
    pair.validate()
    p = pair.base
    rp = restricted_potential(p.coords, com_embedding(p.n), (pair.v1, pair.v2))
    u = rp.value
    first = 0.75 * float(np.sum(rp.first**2))
    grad_norm = -0.25 * float(np.dot(rp.gradient, rp.gradient))
    laplacian = -0.5 * u * float(np.sum(rp.second))
    oneill = 3.0 * u**2 / p.norm**2 * rdot(pair.v1, mul_i(pair.v2)) ** 2
    return _breakdown(first, grad_norm, laplacian, oneill, u)


def kn_block(pair: TangentPair) -> float:
    """Sectional curvature of the ambient conformal metric U_L ds^2 through span(v1, v2)."""
    return sectional_curvature(pair).kn_block


def oneill_term(pair: TangentPair) -> float:
    """The un-normalized O'Neill summand 3 U_L^2 / |p|^2 (v1 . i v2)^2."""
    return sectional_curvature(pair).term_oneill


def pants_curvature(p) -> float:
    """Gaussian curvature of the three-body shape sphere at the shape of p."""
    p = as_point(p)
    if p.n != 3:
        raise ValueError(f"pants curvature needs n=3, got n={p.n}")
    f1, f2 = horizontal_frame(p)
    return sectional_curvature(TangentPair(p, f1, f2)).k


def equilateral_point() -> ReducedPoint:
    """Reduced point of three unit masses at the cube roots of unity."""
    q = np.exp(2j * np.pi * np.arange(3) / 3)
    return ReducedPoint(com_embedding(3).project(q))


# -- collinear circle theta = pi/2, n = 4 ----------------------------------


@dataclass(frozen=True)
class RhoAlphaTable:
    """Signed inverse gaps rho_jk = 1/(q_j - q_k) and weights alpha_jk, keyed by 1-based pairs."""

    phi: float
    rho: dict
    alpha: dict

    def sum_rho(self, power: int) -> float:
        return sum(self.rho[jk] ** power for jk in PAIRS4)

    def sum_alpha_rho4(self) -> float:
        return sum(self.alpha[jk] * self.rho[jk] ** 4 for jk in PAIRS4)


def _check_phi(phi: float) -> CollinearChart:
    chart = CollinearChart(phi, math.pi / 2)
    normal_plane_frame(chart)  # raises CollisionError at excluded angles
    return chart


def collinear_rho_alpha(phi: float) -> RhoAlphaTable:
    """rho from the closed forms on the circle theta = pi/2; alpha from the normal-plane frame."""
    chart = _check_phi(phi)
    c, s = math.cos(phi), math.sin(phi)
    r2 = math.sqrt(2.0)
    rho = {
        (1, 2): 1 / (r2 * c),
        (3, 4): 1 / (r2 * s),
        (1, 3): r2 / (c - s),
        (1, 4): r2 / (c + s),
    }
    rho[(2, 4)] = -rho[(1, 3)]
    rho[(2, 3)] = -rho[(1, 4)]

    pair = normal_plane_frame(chart)
    emb = com_embedding(4)
    # L v_a = i * (real vector); keep the real vector
    w1 = (emb.embed(complexify(pair.v1)) / 1j).real
    w2 = (emb.embed(complexify(pair.v2)) / 1j).real
    alpha = {(j, k): float((w1[j - 1] - w1[k - 1]) ** 2 + (w2[j - 1] - w2[k - 1]) ** 2) for j, k in PAIRS4}
    return RhoAlphaTable(phi, rho, alpha)


@dataclass(frozen=True)
class InequalitySides:
    """Both sides of sum_k (sum_j rho_jk^3)^2 < (sum rho^2)(sum alpha rho^4), directly and rearranged."""

    phi: float
    lhs: float
    rhs: float
    lhs_rearranged: float
    rhs_rearranged: float

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs


def inequality_sides(phi: float) -> InequalitySides:
    t = collinear_rho_alpha(phi)
    r = t.rho
    lhs = 2.0 * (
        (r[1, 2] ** 3 + r[1, 3] ** 3 + r[1, 4] ** 3) ** 2 + (r[1, 3] ** 3 - r[1, 4] ** 3 - r[3, 4] ** 3) ** 2
    )
    rhs = t.sum_rho(2) * t.sum_alpha_rho4()

    s2, c2 = math.sin(2 * phi), math.cos(2 * phi)
    s6 = t.sum_rho(6)
    lhs_re = 2 * s6 - 96.0 / (s2**2 * c2**2)
    rhs_re = (
        2 * s6
        + (c2 / s2) ** 2 * (r[1, 3] ** 6 + r[1, 4] ** 6)
        + 8 * (s2 / c2) ** 2 * (r[1, 2] ** 6 + r[3, 4] ** 6)
        + (r[1, 3] ** 4 + r[1, 4] ** 4) * (4 / s2**2 + 16 / c2**2)
    )
    return InequalitySides(phi, lhs, rhs, lhs_re, rhs_re)


def collinear_normal_curvature(phi: float) -> CurvatureBreakdown:
    """Normal-plane curvature on theta = pi/2 through the rho/alpha algebra alone."""
    t = collinear_rho_alpha(phi)
    sides = inequality_sides(phi)
    u = t.sum_rho(2)
    return _breakdown(0.0, -sides.lhs, u * t.sum_alpha_rho4(), 0.0, u)


__all__ = [
    "CurvatureBreakdown",
    "InequalitySides",
    "RhoAlphaTable",
    "collinear_normal_curvature",
    "collinear_rho_alpha",
    "equilateral_point",
    "inequality_sides",
    "kn_block",
    "oneill_term",
    "pants_curvature",
    "sectional_curvature",
]
