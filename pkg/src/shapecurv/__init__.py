"""Sectional curvature of the reduced Jacobi-Maupertuis metric on equal-mass N-body shape space."""

from .curvature import (
    CurvatureBreakdown,
    collinear_normal_curvature,
    collinear_rho_alpha,
    inequality_sides,
    kn_block,
    oneill_term,
    pants_curvature,
    sectional_curvature,
)
from .errors import CollisionError, FrameError, IllConditionedError, ZeroPointError
from .nbody import Configuration, com_embedding, moment_of_inertia, potential, potential_derivatives
from .shape import (
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

__version__ = "0.1.0"
