"""Exact-rational cube and crosspolytope normalization, cubical towers and
connected sums, with certificates for every step."""

from ._linalg import Fraction
from .constructor import Tower, build_tower, c_connected_sum, glue, prism_lift
from .enumerative import FVector, GcVector, cube_f, cubical_h, density_schedule, gc_of_f, short_cubical_h, tower_f
from .errors import CertificateError, PolytopeError
from .geometry import (
    HPolytope,
    IncidenceStructure,
    VPolytope,
    certify_cube,
    certify_crosspolytope,
    hull,
    polar_dual,
    realize,
    standard_crosspolytope,
    standard_cube,
)
from .normalizer import check_orthogonal_concurrent, normalize_crosspolytope, normalize_cube, relate_cubes, verify_log
from .projective import ProjectiveMap, dual_map, ray_scale, normal_transform

__all__ = [
    "Fraction", "Tower", "build_tower", "c_connected_sum", "glue", "prism_lift",
    "FVector", "GcVector", "cube_f", "cubical_h", "density_schedule", "gc_of_f", "short_cubical_h", "tower_f",
    "CertificateError", "PolytopeError",
    "HPolytope", "IncidenceStructure", "VPolytope", "certify_cube", "certify_crosspolytope", "hull",
    "polar_dual", "realize", "standard_crosspolytope", "standard_cube",
    "check_orthogonal_concurrent", "normalize_crosspolytope", "normalize_cube", "relate_cubes", "verify_log",
    "ProjectiveMap", "dual_map", "ray_scale", "normal_transform",
]
