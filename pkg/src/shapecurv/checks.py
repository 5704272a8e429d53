"""Seeded verification suites behind ``shapecurv verify``.

Each check measures one error and compares it with a fixed tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import curvature as cv
from . import dynamics as dyn
from . import oracle
from .nbody import (
    Configuration,
    com_embedding,
    complexify,
    mul_i,
    potential,
    potential_derivatives,
    rdot,
    realify,
    restricted_potential,
)
from .sampling import random_configuration, random_pair, random_point
from .scan import run_scan
from .shape import CollinearChart, TangentPair, horizontal_frame, normal_plane_frame

SEED = 20240601
ANCHOR_PHI = math.pi / 8
THEOREM_PHI_MIN = 0.01
THEOREM_PHI_MAX = math.pi / 4 - 0.01


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float
    tolerance: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: measured {self.measured:.3e} (tolerance {self.tolerance:.1e})"


def _le(name, measured, tol) -> Check:
    measured = float(measured)
    return Check(name, bool(measured <= tol), measured, tol)


def _lt(name, measured, tol) -> Check:
    measured = float(measured)
    return Check(name, bool(measured < tol), measured, tol)


def _rel(a, b) -> float:
    return abs(a - b) / abs(b)


# -- derivatives -----------------------------------------------------------


def check_derivatives(samples: int = 100) -> list[Check]:
    rng = np.random.default_rng(SEED)
    grad_err = hess_err = sum_err = euler_err = 0.0
    inv_err = 0.0
    for _ in range(samples):
        q = random_configuration(rng, 4)
        b = potential_derivatives(q)
        g_fd = oracle.fd_gradient(q)
        H_fd = oracle.fd_hessian(q)
        grad_err = max(grad_err, np.linalg.norm(g_fd - b.gradient) / np.linalg.norm(b.gradient))
        hess_err = max(hess_err, np.linalg.norm(H_fd - b.hessian) / np.linalg.norm(b.hessian))
        sum_err = max(sum_err, abs(complexify(b.gradient).sum()) / np.linalg.norm(b.gradient))
        euler_err = max(euler_err, abs(b.gradient @ realify(q) + 2 * b.value) / b.value)
        c = complex(rng.normal(), rng.normal())
        for other in (q + c, np.exp(1j * rng.uniform(0, 2 * np.pi)) * q):
            inv_err = max(inv_err, _rel(potential(other), b.value))
        for lam in (0.5, 2.0, 10.0):
            inv_err = max(inv_err, _rel(potential(lam * q), b.value / lam**2))
    return [
        _lt("gradient vs finite differences (relative)", grad_err, 1e-6),
        _lt("Hessian vs finite differences (relative)", hess_err, 1e-6),
        _le("gradient components sum to zero", sum_err, 1e-12),
        _le("Euler identity grad.q = -2U", euler_err, 1e-12),
        _le("translation/rotation/homogeneity invariance", inv_err, 1e-12),
    ]


# -- curvature -------------------------------------------------------------


def check_anchor() -> list[Check]:
    pair = normal_plane_frame(CollinearChart(ANCHOR_PHI, math.pi / 2))
    b = cv.sectional_curvature(pair)
    t = cv.collinear_rho_alpha(ANCHOR_PHI)
    values = {
        "U_L": (b.u_l, 20.0),
        "|grad U/2|^2": (-b.term_grad_norm, 976.0),
        "U_L sum alpha rho^4": (b.u_l * t.sum_alpha_rho4(), 3920.0),
        "U_L^3 K": (b.scaled, 2944.0),
        "K": (b.k, 0.368),
    }
    out = [_le(f"anchor phi=pi/8: {name} = {exact:g}", _rel(got, exact), 1e-10) for name, (got, exact) in values.items()]
    k_fd = oracle.fd_sectional(pair)
    out.append(_lt("anchor phi=pi/8: finite-difference K = 0.368", _rel(k_fd, 0.368), 1e-3))
    return out


def check_theorem(samples: int = 512) -> list[Check]:
    records = run_scan(math.pi / 2, THEOREM_PHI_MIN, THEOREM_PHI_MAX, samples, "normal")
    ok = [r for r in records if r.ok]
    min_k = min(r.k for r in ok)
    min_gap = min(r.rhs - r.lhs for r in ok)
    return [
        Check(f"all {samples} samples collision-free", len(ok) == samples, float(len(ok)), float(samples)),
        Check("normal-plane K > 0 on theta = pi/2", min_k > 0, min_k, 0.0),
        Check("lhs < rhs of the inequality on theta = pi/2", min_gap > 0, min_gap, 0.0),
    ]


def oracle_samples(n: int, count: int, rng) -> list[TangentPair]:
    return [random_pair(rng, random_point(rng, n)) for _ in range(count)]


def check_oracle_equivalence(count: int = 32) -> list[Check]:
    rng = np.random.default_rng(SEED + 1)
    out = []
    for n in (4, 3):
        err = 0.0
        for pair in oracle_samples(n, count, rng):
            k = cv.sectional_curvature(pair).k
            err = max(err, abs(oracle.fd_sectional(pair) - k) / max(1.0, abs(k)))
        out.append(_lt(f"closed form vs chart-metric FD curvature, n={n}, {count} samples", err, 1e-3))
    return out


def check_step_halving(points: int = 5, h: float = 1e-3) -> list[Check]:
    rng = np.random.default_rng(SEED + 2)
    worst = math.inf
    for pair in oracle_samples(4, points, rng):
        k = cv.sectional_curvature(pair).k
        e1 = abs(oracle.fd_sectional(pair, h) - k)
        e2 = abs(oracle.fd_sectional(pair, h / 2) - k)
        worst = min(worst, e1 / e2)
    return [Check(f"step halving improves FD curvature (min ratio, {points} points)", worst >= 3, worst, 3.0)]


def check_collinear_paths(count: int = 50) -> list[Check]:
    err = 0.0
    for phi in np.linspace(0.02, math.pi / 4 - 0.02, count):
        generic = cv.sectional_curvature(normal_plane_frame(CollinearChart(float(phi), math.pi / 2)))
        special = cv.collinear_normal_curvature(float(phi))
        err = max(err, _rel(special.k, generic.k))
    return [_le("collinear rho/alpha path vs generic curvature", err, 1e-10)]


def check_curvature() -> list[Check]:
    rng = np.random.default_rng(SEED + 3)
    out = check_anchor() + check_theorem() + check_collinear_paths()
    out += check_oracle_equivalence(32) + check_step_halving()
    inv = 0.0
    for pair in oracle_samples(4, 10, rng):
        k = cv.sectional_curvature(pair).k
        for c in (0.5 * np.exp(0.2j * np.pi), 3.0 * np.exp(2j)):
            inv = max(inv, _rel(cv.sectional_curvature(pair.transformed(c)).k, k))
        for a in (math.pi / 7, math.pi / 3, 1.0):
            w1 = math.cos(a) * pair.v1 + math.sin(a) * pair.v2
            w2 = -math.sin(a) * pair.v1 + math.cos(a) * pair.v2
            inv = max(inv, _rel(cv.sectional_curvature(TangentPair(pair.base, w1, w2)).k, k))
    out.append(_le("K depends only on the shape and the plane", inv, 1e-10))
    return out


# -- bracket, gradient-norm and factorization identities ------------------


def check_gradient_norm_identity(samples: int = 100) -> Check:
    rng = np.random.default_rng(SEED + 4)
    err = 0.0
    for _ in range(samples):
        p = random_point(rng, 4)
        basis = np.eye(6)
        rp = restricted_potential(p.coords, directions=basis)
        L = com_embedding(4)
        full = potential_derivatives(Configuration(L.embed(p.coords))).gradient
        err = max(err, _rel(np.sum(rp.first**2), full @ full))
    return _le("|grad U|^2 = sum_a (d_a U_L)^2 over an orthonormal basis", err, 1e-10)


def check_brackets(samples: int = 20) -> list[Check]:
    rng = np.random.default_rng(SEED + 5)
    dot_e_max = rel_max = closure = 0.0
    for pair in oracle_samples(4, samples, rng):
        U = cv.sectional_curvature(pair).u_l
        dot_e, dot_ie = oracle.fd_bracket_vertical(pair)
        expected = 2.0 * rdot(pair.v1, mul_i(pair.v2)) / U  # 2 V1 . iV2
        dot_e_max = max(dot_e_max, abs(dot_e))
        rel_max = max(rel_max, abs(dot_ie - expected) / (2.0 / U))
    for pair in oracle_samples(4, samples, rng):
        # plane (v, iv): maximal vertical bracket
        v = pair.v1
        holo = TangentPair(pair.base, v, mul_i(v))
        b = cv.sectional_curvature(holo)
        _, dot_ie = oracle.fd_bracket_vertical(holo)
        rel_max = max(rel_max, _rel(dot_ie, 2.0 * rdot(v, mul_i(mul_i(v))) / b.u_l))
        closure = max(closure, _rel(oracle.fd_oneill(holo), b.term_oneill / b.u_l**3))
    return [
        _lt("FD bracket: [V1,V2].E = 0", dot_e_max, 1e-6),
        _lt("FD bracket: [V1,V2].iE = 2 V1.iV2 (relative)", rel_max, 1e-5),
        _lt("O'Neill closure: 3/4 |[V1,V2]^V|^2 = term_oneill / U_L^3", closure, 1e-5),
    ]


def check_kn_block(samples: int = 10) -> list[Check]:
    rng = np.random.default_rng(SEED + 6)
    split = fd = 0.0
    for pair in oracle_samples(4, samples, rng):
        b = cv.sectional_curvature(pair)
        split = max(split, abs(b.k - (b.kn_block + b.term_oneill / b.u_l**3)) / max(1.0, abs(b.k)))
        fd = max(fd, abs(oracle.fd_ambient_sectional(pair) - b.kn_block) / max(1.0, abs(b.kn_block)))
    return [
        _le("K = K_conformal + O'Neill term", split, 1e-12),
        _lt("conformal block vs ambient FD curvature", fd, 1e-3),
    ]


def check_fubini_study() -> list[Check]:
    rng = np.random.default_rng(SEED + 7)
    err = 0.0
    for n in (3, 4):
        sampler = oracle.ChartMetricSampler(random_point(rng, n))
        grid = np.linspace(-0.035, 0.035, 5)
        for a in grid:
            for b in grid:
                u = np.zeros(sampler.dim)
                u[0], u[-1] = a, b
                g, g_fs = oracle.fs_factorization(sampler, u)
                err = max(err, np.max(np.abs(g - g_fs)) / np.max(np.abs(g)))
    return [_lt("chart metric = U x Fubini-Study", err, 1e-8)]


def check_terms(count: int = 50) -> list[Check]:
    emb = com_embedding(4)
    first = dot = hess = 0.0
    for phi in np.linspace(0.02, math.pi / 4 - 0.02, count):
        pair = normal_plane_frame(CollinearChart(float(phi), math.pi / 2))
        rp = restricted_potential(pair.base.coords, emb, (pair.v1, pair.v2))
        first = max(first, np.max(np.abs(rp.first)))
        dot = max(dot, abs(rdot(pair.v1, mul_i(pair.v2))))
        q = emb.embed(pair.base.coords)
        H = potential_derivatives(q).hessian
        for j in range(4):
            for k in range(4):
                if j != k:
                    expect = 2.0 / (q[j] - q[k]).real ** 4
                    hess = max(hess, _rel(H[2 * j + 1, 2 * k + 1], expect))
    return [
        _lt("collinear normal plane: d_a U_L = 0", first, 1e-12),
        _lt("collinear normal plane: v1 . i v2 = 0", dot, 1e-12),
        _lt("Hessian y-block off-diagonal = 2 rho^4", hess, 1e-10),
    ]


def check_identities() -> list[Check]:
    return (
        [check_gradient_norm_identity()]
        + check_brackets()
        + check_kn_block()
        + check_fubini_study()
        + check_terms()
    )


# -- pants -----------------------------------------------------------------


def check_pants(samples: int = 500) -> list[Check]:
    rng = np.random.default_rng(SEED + 8)
    k_max = max(cv.pants_curvature(random_point(rng, 3, min_sep=1e-3)) for _ in range(samples))
    k_eq = abs(cv.pants_curvature(cv.equilateral_point()))
    return [
        _le(f"n=3: K <= 1e-9 at {samples} random shapes (max K)", k_max, 1e-9),
        _lt("n=3: |K| at the equilateral shape", k_eq, 1e-6),
    ]


# -- dynamics --------------------------------------------------------------


def check_dynamics(t_end: float = 1.0, dt: float = 1e-4) -> list[Check]:
    state, _, _ = dyn.matched_initial_data()
    res = dyn.compare_newton_jm(state, t_end, dt)
    tr = res.newton
    I0 = tr.inertia[0]
    return [
        Check("Newton run not truncated", not tr.truncated, float(tr.truncated), 0.0),
        _lt("H=0: moment of inertia constant (relative)", np.max(np.abs(tr.inertia - I0)) / I0, 1e-6),
        _lt("energy drift", np.max(np.abs(tr.energy - tr.energy[0])), 1e-8),
        _lt("angular momentum drift", np.max(np.abs(tr.angular_momentum - tr.angular_momentum[0])), 1e-8),
        _lt(
            "virial residual d2I/dt2 - 4H",
            np.max(np.abs(tr.inertia_accel_residual)) / max(1.0, np.max(tr.potential)),
            1e-5,
        ),
        _lt("JM speed constant along the geodesic", np.ptp(res.geodesic.jm_speed) / res.geodesic.jm_speed[0], 1e-6),
        _lt("Newton vs JM shape traces (Hausdorff)", res.hausdorff, 1e-4),
    ]


SUITES: dict[str, Callable[[], list[Check]]] = {
    "derivatives": check_derivatives,
    "curvature": check_curvature,
    "appendix": check_identities,
    "pants": check_pants,
    "dynamics": check_dynamics,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        return [c for suite in SUITES.values() for c in suite()]
    return SUITES[name]()
