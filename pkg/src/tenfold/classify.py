"""Classification lookups: symmetry profile to K-functor, degree and invariant group.

A profile records which symmetries are present, the parities ``Theta
conj(Theta) = +-1`` of the antiunitary ones and, when a chiral grading ``Gamma``
meets an antiunitary symmetry, the reality sign ``t(Gamma) Gamma`` with
``t(Gamma) = Theta conj(Gamma) Theta^dagger``. Real degrees are taken mod 8,
complex ones mod 2; degree ``-1`` is stored as ``7``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from ._linalg import TOL_ALG, dag, norm, scalar_sign, scalar_value
from .clifford import species

# KO_i(R) for i = 0..7, from Bott periodicity.
KO_POINT = ("Z", "Z2", "Z2", "0", "Z", "0", "0", "0")
KU_POINT = ("Z", "0")

CARTAN = {
    (False, None, None): "A",
    (True, None, None): "AIII",
    (False, 1, None): "AI",
    (False, -1, None): "AII",
    (False, None, 1): "D",
    (False, None, -1): "C",
    (True, 1, 1): "BDI",
    (True, 1, -1): "CI",
    (True, -1, 1): "DIII",
    (True, -1, -1): "CII",
}

# (parity, t(Gamma)Gamma) -> Clifford label (r, s) of the real subalgebra factor
_CHIRAL_REAL = {(1, 1): (2, 2), (1, -1): (3, 1), (-1, -1): (1, 3), (-1, 1): (0, 4)}
# one real symmetry without chiral: (kind, parity) -> (r, s)
_ONE_REAL = {("trs", 1): (1, 0), ("trs", -1): (0, 3), ("phs", 1): (0, 1), ("phs", -1): (3, 0)}


class InconsistentProfileError(ValueError):
    """Declared symmetries do not fit together."""


def clifford_degree(r: int, s: int) -> int:
    """K-degree carried by a ``Cl_{r,s}`` factor: ``DK(B (x) Cl_{r,s}) = KO_{s-r+1}(B)``."""
    return (s - r + 1) % 8


def _fmt_degree(k_functor: str, degree: int) -> str:
    return str(degree) if k_functor == "complex" else {7: "-1"}.get(degree, str(degree))


@dataclass(frozen=True)
class SymmetryProfile:
    """Verified symmetry data, independent of any matrices.

    Attributes
    ----------
    chiral : bool
    trs, phs : int or None
        Parity ``+1`` (even) or ``-1`` (odd) when present.
    grading_reality : int or None
        ``t(Gamma) Gamma`` for the antiunitary symmetry present; required
        whenever two of the three symmetries are declared.
    """

    chiral: bool = False
    trs: Optional[int] = None
    phs: Optional[int] = None
    grading_reality: Optional[int] = None

    def normalized(self) -> "SymmetryProfile":
        """Fill in the symmetry implied by the other two, rejecting contradictions."""
        for name in ("trs", "phs", "grading_reality"):
            v = getattr(self, name)
            if v is not None and v not in (1, -1):
                raise InconsistentProfileError(f"{name} must be +1 or -1, got {v!r}")
        real = (self.trs is not None) + (self.phs is not None)
        pair = real == 2 or (self.chiral and real == 1)
        if pair and self.grading_reality is None:
            raise InconsistentProfileError("grading reality sign required with two symmetries")
        if not pair and self.grading_reality is not None:
            raise InconsistentProfileError("grading reality sign given without a chiral pair")
        if not pair:
            return self
        s = self.grading_reality
        trs, phs = self.trs, self.phs
        if trs is None:
            trs = s * phs
        elif phs is None:
            phs = s * trs
        elif phs != s * trs:
            raise InconsistentProfileError(
                f"PHS parity {phs:+d} differs from t(Gamma)Gamma * TRS parity {s * trs:+d}"
            )
        return SymmetryProfile(True, trs, phs, s)

    def key(self) -> tuple:
        return (self.chiral, self.trs, self.phs)


@dataclass(frozen=True)
class ClassDescriptor:
    """Result of :func:`classify`."""

    profile: SymmetryProfile
    k_functor: str
    degree: int
    subalgebra_note: str
    k_group: str
    cartan_label: str
    clifford: Optional[tuple] = None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["profile"] = asdict(self.profile)
        out["clifford"] = list(self.clifford) if self.clifford else None
        return out


@dataclass(frozen=True)
class AbelianGroup:
    kind: str  # "Z", "Z2" or "0"

    def __post_init__(self):
        if self.kind not in ("Z", "Z2", "0"):
            raise ValueError(f"unknown group kind {self.kind!r}")

    def __str__(self) -> str:
        return self.kind


def classify(profile: SymmetryProfile) -> ClassDescriptor:
    """Map a symmetry profile to its K-functor and degree relative to ``A^f``.

    Examples
    --------
    >>> classify(SymmetryProfile(trs=-1)).degree
    4
    >>> classify(SymmetryProfile(chiral=True, trs=1, grading_reality=1)).degree
    1
    """
    p = profile.normalized()
    label = CARTAN[p.key()]
    if p.trs is None and p.phs is None:
        deg = 1 if p.chiral else 0
        group = "K_1(A,gamma)" if p.chiral else "KU_0(A)"
        note = "(A, gamma)" if p.chiral else "(A (x) Cl_1, id (x) st)"
        return ClassDescriptor(p, "complex", deg, note, group, label)
    if p.chiral:
        rs = _CHIRAL_REAL[(p.trs, p.grading_reality)]
    elif p.trs is not None:
        rs = _ONE_REAL[("trs", p.trs)]
    else:
        rs = _ONE_REAL[("phs", p.phs)]
    deg = clifford_degree(*rs)
    note = f"A^f (x) Cl_{{{rs[0]},{rs[1]}}}"
    return ClassDescriptor(p, "real", deg, note, f"KO_{_fmt_degree('real', deg)}(A^f)", label, rs)


def cartan_label(descriptor: ClassDescriptor) -> str:
    return CARTAN[descriptor.profile.key()]


def strong_invariant_group(descriptor: ClassDescriptor, d: int) -> AbelianGroup:
    """``K_{degree-d}`` of a point: the group of strong invariants in dimension ``d``."""
    if d < 0:
        raise ValueError("dimension must be non-negative")
    if descriptor.k_functor == "complex":
        return AbelianGroup(KU_POINT[(descriptor.degree - d) % 2])
    return AbelianGroup(KO_POINT[(descriptor.degree - d) % 8])


# coarser tables


@dataclass(frozen=True)
class RoughDescriptor:
    """Classification before fixing a reference structure."""

    graded_algebra: str
    real_subalgebra: str
    k_group: str
    k_functor: str
    degree: int


def rough_classify(profile: SymmetryProfile) -> RoughDescriptor:
    """Classification by the symmetry algebra alone, degrees relative to ``A^t`` or ``A^p``.

    Combined TRS and PHS without chiral symmetry is not a row of this table;
    such profiles should be passed with ``chiral=True``.
    """
    p = profile.normalized()
    if p.chiral and p.trs is not None:
        return RoughDescriptor("(A, gamma, t)", "(A^t, gamma)", "K_1(A^t,gamma)", "real", 1)
    if p.chiral:
        return RoughDescriptor("(A, gamma)", "n/a", "K_1(A,gamma)", "complex", 1)
    if p.trs is not None:
        return RoughDescriptor("(A (x) Cl_1, id (x) st, t (x) l_{1,0})", "(A^t (x) Cl_{1,0}, id (x) st)",
                               "KO_0(A^t)", "real", 0)
    if p.phs is not None:
        return RoughDescriptor("(A (x) Cl_1, id (x) st, p (x) l_{0,1})", "(A^p (x) Cl_{0,1}, id (x) st)",
                               "KO_2(A^p)", "real", 2)
    return RoughDescriptor("(A (x) Cl_1, id (x) st)", "n/a", "KU_0(A)", "complex", 0)


def inner_chiral_classify(profile: SymmetryProfile) -> RoughDescriptor:
    """Classification for an inner chiral grading ``Ad_Gamma``, degrees relative to ``A^t``.

    A real grading (``t(Gamma) = Gamma``) gives ``KO_1``, an imaginary one
    ``KO_{-1}``; without TRS the result is ``KU_1(A)``.
    """
    p = profile.normalized()
    if not p.chiral:
        raise InconsistentProfileError("inner chiral classification needs a chiral symmetry")
    if p.trs is None:
        return RoughDescriptor("(A_++ (x) Cl_2, id (x) st)", "n/a", "KU_1(A)", "complex", 1)
    if p.grading_reality == 1:
        return RoughDescriptor("(A_++ (x) Cl_2, id (x) st, t (x) l_{1,1})", "(A_++^t (x) Cl_{1,1}, id (x) st)",
                               "KO_1(A^t)", "real", 1)
    return RoughDescriptor("(A_++ (x) Cl_2, id (x) st, Ad_e t (x) l_{2,0})", "(A_++^t' (x) Cl_{2,0}, id (x) st)",
                           "KO_-1(A^t)", "real", 7)


def profile_from_signs(eta1: int, eta2: int) -> SymmetryProfile:
    """Profile of a chiral insulator whose TRS has relative signs ``(eta1, eta2)``."""
    return SymmetryProfile(chiral=True, trs=eta1, grading_reality=eta2)


def profile_from_fp(eta1: int, extension: str) -> SymmetryProfile:
    """Profile of a trivially graded algebra extended by ``Cl_1`` with ``l_{1,0}`` or ``l_{0,1}``."""
    if extension == "l10":
        return SymmetryProfile(trs=eta1)
    if extension == "l01":
        return SymmetryProfile(phs=eta1)
    raise ValueError("extension must be 'l10' or 'l01'")


# from matrices


def profile_from_operators(chiral=None, trs=None, phs=None, tol: float = TOL_ALG) -> SymmetryProfile:
    """Parities and reality sign of constant fiber symmetry operators.

    TRS together with PHS implies the chiral operator ``Theta_T Theta_P^dagger``
    (up to phase); when all three are declared their product must be
    proportional to the identity.
    """
    par = {}
    for name, t in (("trs", trs), ("phs", phs)):
        if t is None:
            continue
        try:
            par[name] = scalar_sign(t @ t.conj())
        except ValueError as exc:
            raise InconsistentProfileError(f"{name} operator does not square to +-1") from exc
    g = chiral
    if g is None and trs is not None and phs is not None:
        u = trs @ dag(phs)
        try:
            z = scalar_value(u @ u)
        except ValueError as exc:
            raise InconsistentProfileError("TRS and PHS do not combine to a grading") from exc
        g = u / np.sqrt(z)
        if norm(g - dag(g)) > 1e-8:
            raise InconsistentProfileError("TRS and PHS do not combine to a grading")
    elif g is not None and trs is not None and phs is not None:
        try:
            scalar_value(g @ trs @ dag(phs))
        except ValueError as exc:
            raise InconsistentProfileError("declared PHS is not chiral times TRS") from exc
    reality = None
    if g is not None and (trs is not None or phs is not None):
        t = trs if trs is not None else phs
        try:
            reality = scalar_sign(t @ g.conj() @ dag(t) @ g)
        except ValueError as exc:
            raise InconsistentProfileError("grading is not homogeneous for the real symmetry") from exc
    return SymmetryProfile(g is not None, par.get("trs"), par.get("phs"), reality).normalized()


def profile_from_spec(spec) -> SymmetryProfile:
    """Profile of a :class:`~tenfold.models.SymmetrySpec`."""
    return profile_from_operators(spec.chiral, spec.trs, spec.phs)


def all_profiles() -> list:
    """The ten consistent profiles in canonical form."""
    out = [SymmetryProfile(), SymmetryProfile(chiral=True)]
    out += [SymmetryProfile(trs=e) for e in (1, -1)] + [SymmetryProfile(phs=e) for e in (1, -1)]
    out += [SymmetryProfile(True, t, p, t * p) for t in (1, -1) for p in (1, -1)]
    return out


# KO of a point from Clifford module counting


def ko_point_from_modules() -> list:
    """``KO_k(R)`` for ``k = 0..7`` as ``coker(M(C_k) -> M(C_{k-1}))``.

    ``C_k = Cl_{0,k}`` and ``M`` is the free abelian group on irreducible
    ungraded modules, read from the species ladder. When ``C_{k-1}`` has two
    irreducibles its central volume element anticommutes with the extra
    generator, so the restriction contains both with equal multiplicity.
    Returns group labels ``"Z"``, ``"Z2"``, ``"0"`` (Smith normal form of a
    map between ranks at most 2).
    """
    out = []
    for k in range(8):
        top = k if k > 0 else 8
        src, tgt = species(0, top), species(0, top - 1)
        mult = src.module_dim // (tgt.module_dim * tgt.copies)
        # restriction matrix, rows = target irreducibles
        mat = np.full((tgt.copies, src.copies), mult, dtype=int)
        out.append(_cokernel_label(mat))
    return out


def _cokernel_label(mat: np.ndarray) -> str:
    rows, cols = mat.shape
    rank = np.linalg.matrix_rank(mat.astype(float))
    free = rows - rank
    if rank == 0:
        torsion = 1
    else:
        # gcd of the rank-sized minors; here ranks are at most 1
        torsion = int(np.gcd.reduce(np.abs(mat).ravel()))
    if free > 1 or (free == 1 and torsion > 1):
        raise ValueError("unexpected cokernel shape")
    if free == 1:
        return "Z"
    return "0" if torsion == 1 else f"Z{torsion}"
