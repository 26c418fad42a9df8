"""Tenfold-way classification of gapped Bloch models.

Clifford algebra models and isomorphism certificates, graded real structures
and their relative signs, van Daele style odd self-adjoint unitaries, Bloch
model builders, classification lookups and numerical strong invariants.
"""

__version__ = "0.1.0"

from .classify import SymmetryProfile, classify, strong_invariant_group
from .clifford import build_clifford, certify_iso, graded_tensor, species
from .graded_real import GradedRealAlgebra, relative_signs, sqrt_unitary
from .invariants import chern_number, winding_number, z2_invariant
from .models import (
    BlochModel,
    SymmetrySpec,
    build_haldane,
    build_kane_mele,
    build_qwz,
    build_ssh,
    evaluate,
    gap,
    verify_symmetries,
)

__all__ = [
    "BlochModel",
    "GradedRealAlgebra",
    "SymmetryProfile",
    "SymmetrySpec",
    "build_clifford",
    "build_haldane",
    "build_kane_mele",
    "build_qwz",
    "build_ssh",
    "certify_iso",
    "chern_number",
    "classify",
    "evaluate",
    "gap",
    "graded_tensor",
    "relative_signs",
    "species",
    "sqrt_unitary",
    "strong_invariant_group",
    "verify_symmetries",
    "winding_number",
    "z2_invariant",
]
