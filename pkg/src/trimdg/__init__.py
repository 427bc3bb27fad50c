"""DG algebra structures on iterated trimming complexes and Tor algebra
classification for quotients of k[x1, x2, x3]."""

from .complexes import FreeComplex, GradedFreeModule, check_complex, exactness_check, mapping_cone
from .dga import DGProduct, check_leibniz, reduce_mod_m
from .families import FamilySpec, family_resolution, predicted_tuple
from .field import make_field
from .koszul import KoszulComplex, build_koszul, koszul_lift
from .linalg import PolyMatrix, graded_solve
from .poly import Polynomial, PolynomialRing, default_ring
from .tor import TorProfile, classify, compute_profile, homology_algebra, koszul_homology_oracle
from .trimming import TrimData, trim, trimmed_ideal_generators

__all__ = [
    "FreeComplex", "GradedFreeModule", "check_complex", "exactness_check", "mapping_cone",
    "DGProduct", "check_leibniz", "reduce_mod_m",
    "FamilySpec", "family_resolution", "predicted_tuple",
    "make_field", "KoszulComplex", "build_koszul", "koszul_lift",
    "PolyMatrix", "graded_solve", "Polynomial", "PolynomialRing", "default_ring",
    "TorProfile", "classify", "compute_profile", "homology_algebra", "koszul_homology_oracle",
    "TrimData", "trim", "trimmed_ideal_generators",
]

__version__ = "0.1.0"
