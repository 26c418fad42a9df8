"""Graded matrix algebras with real structures.

A real structure is stored as a unitary ``Theta`` and acts as
``R(a) = Theta conj(a) Theta^dagger``; the reference structure is plain entrywise
conjugation (``Theta = 1``). A grading is stored as a self-adjoint unitary
``Gamma`` acting by conjugation, or ``None`` for the trivial grading.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._linalg import (
    SX,
    SY,
    SZ,
    TOL_ALG,
    TOL_GAP,
    TOL_SCALAR,
    I2,
    PAULI,
    antilinear_action,
    dag,
    is_unitary,
    kron,
    norm,
    scalar_sign,
    scalar_value,
    grading_eigenbases,
)

STRUCTURES = ("R", "R*", "gamma", "gamma*")


class ObstructionError(ValueError):
    """Raised when a constructive step is blocked by a sign obstruction."""


@dataclass(frozen=True, eq=False)
class GradedRealAlgebra:
    """Matrix algebra ``M_n`` (or a subalgebra of it) with grading and real structure.

    Parameters
    ----------
    n : int
        Matrix size.
    grading : ndarray or None
        Self-adjoint unitary ``Gamma``; ``None`` means trivially graded.
    theta : ndarray or None
        Unitary ``Theta`` of the real structure ``Ad_Theta o conj``; ``None``
        means no real structure is attached (complex algebra).
    generators : tuple of ndarray or None
        Generating set of a proper subalgebra; ``None`` means all of ``M_n``.
    """

    n: int
    grading: Optional[np.ndarray] = None
    theta: Optional[np.ndarray] = None
    generators: Optional[tuple] = None
    name: str = ""

    def __post_init__(self):
        n = self.n
        if self.grading is not None:
            g = np.asarray(self.grading, dtype=complex)
            if g.shape != (n, n):
                raise ValueError("grading has wrong shape")
            if norm(g - dag(g)) > TOL_ALG or norm(g @ g - np.eye(n)) > TOL_ALG:
                raise ValueError("grading must be a self-adjoint unitary")
            object.__setattr__(self, "grading", g)
        if self.theta is not None:
            t = np.asarray(self.theta, dtype=complex)
            if t.shape != (n, n):
                raise ValueError("theta has wrong shape")
            if not is_unitary(t):
                raise ValueError("theta must be unitary")
            try:
                scalar_sign(t @ t.conj())
            except ValueError as exc:
                raise ValueError("Ad_theta o conj does not have order two") from exc
            if self.grading is not None:
                g = self.grading
                gtg = g @ t @ g.conj()
                if norm(gtg - t) > TOL_SCALAR and norm(gtg + t) > TOL_SCALAR:
                    raise ValueError("real structure does not commute with the grading")
            object.__setattr__(self, "theta", t)

    # basic structure maps

    @property
    def gamma_op(self) -> np.ndarray:
        if self.grading is None:
            return np.eye(self.n, dtype=complex)
        return self.grading

    @property
    def trivially_graded(self) -> bool:
        return self.grading is None

    @property
    def is_reference(self) -> bool:
        """True when the real structure is plain entrywise conjugation."""
        return self.theta is not None and norm(self.theta - np.eye(self.n)) < TOL_ALG

    @property
    def parity(self) -> int:
        """``Theta conj(Theta)``, the sign ``epsilon`` of the real structure."""
        if self.theta is None:
            raise ValueError("no real structure attached")
        return scalar_sign(self.theta @ self.theta.conj())

    @property
    def grading_reality(self) -> int:
        """``R(Gamma) Gamma``: +1 for a real inner grading, -1 for imaginary."""
        if self.theta is None:
            raise ValueError("no real structure attached")
        g = self.gamma_op
        return scalar_sign(self.real(g) @ g)

    def gamma(self, a: np.ndarray) -> np.ndarray:
        if self.grading is None:
            return np.asarray(a)
        return self.grading @ a @ self.grading

    def real(self, a: np.ndarray) -> np.ndarray:
        if self.theta is None:
            raise ValueError("no real structure attached")
        return antilinear_action(self.theta, a)

    def with_theta(self, theta: Optional[np.ndarray], name: str = "") -> "GradedRealAlgebra":
        return GradedRealAlgebra(self.n, self.grading, theta, self.generators, name or self.name)

    def complex_dim(self) -> int:
        """Complex dimension; equals the real dimension of the real subalgebra."""
        if self.generators is None:
            return self.n * self.n
        from ._linalg import algebra_dim

        return algebra_dim(list(self.generators), self.n)

    def spanning_set(self) -> list:
        """Matrix units spanning ``M_n`` over the complex numbers."""
        out = []
        for i in range(self.n):
            for j in range(self.n):
                e = np.zeros((self.n, self.n), dtype=complex)
                e[i, j] = 1.0
                out.append(e)
        return out


def quaternions() -> GradedRealAlgebra:
    """``H = M_2(C)^h`` with ``h = Ad_{i sigma_y} o conj``, trivially graded."""
    return GradedRealAlgebra(2, None, 1j * SY, name="H")


def m2_standard(theta: Optional[np.ndarray] = None) -> GradedRealAlgebra:
    """``(M_2, Ad_{sigma_z})`` with reference structure unless ``theta`` is given."""
    return GradedRealAlgebra(2, SZ, I2 if theta is None else theta, name="M2")


@dataclass(frozen=True)
class SignPair:
    """Relative signs ``(eta1, eta2) = (phi_R(Theta), phi_gamma*(Theta))``."""

    eta1: int
    eta2: int

    def __post_init__(self):
        if self.eta1 not in (1, -1) or self.eta2 not in (1, -1):
            raise ValueError("relative signs must be +-1")

    def as_tuple(self) -> tuple:
        return (self.eta1, self.eta2)

    def __str__(self) -> str:
        f = lambda x: "+1" if x > 0 else "-1"
        return f"({f(self.eta1)},{f(self.eta2)})"


def apply_structure(algebra: GradedRealAlgebra, xi: str, a: np.ndarray) -> np.ndarray:
    """Apply ``xi`` in ``{"R", "R*", "gamma", "gamma*"}`` of ``algebra`` to ``a``."""
    if xi == "R":
        return algebra.real(a)
    if xi == "R*":
        return algebra.real(dag(a))
    if xi == "gamma":
        return algebra.gamma(a)
    if xi == "gamma*":
        return algebra.gamma(dag(a))
    raise ValueError(f"unknown structure {xi!r}; expected one of {STRUCTURES}")


def phi(algebra: GradedRealAlgebra, xi: str, u: np.ndarray, tol: float = TOL_ALG) -> np.ndarray:
    """``phi_xi(u) = u xi(u)`` for a unitary ``u``.

    Parameters
    ----------
    algebra : GradedRealAlgebra
        Supplies ``Theta`` for ``R`` and ``Gamma`` for ``gamma``.
    xi : str
        One of ``"R"``, ``"R*"``, ``"gamma"``, ``"gamma*"``.
    u : ndarray
        Unitary matrix.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, tol):
        raise ValueError("phi requires a unitary argument")
    return u @ apply_structure(algebra, xi, u)


def _homogeneity(algebra: GradedRealAlgebra, theta: np.ndarray) -> int:
    g = algebra.gamma_op
    x = g @ theta @ g
    if norm(x - theta) < TOL_SCALAR:
        return 1
    if norm(x + theta) < TOL_SCALAR:
        return -1
    raise ValueError("theta is not homogeneous for the grading")


def relative_algebra(algebra: GradedRealAlgebra, theta: np.ndarray) -> GradedRealAlgebra:
    """Algebra carrying ``R = Ad_theta o f`` where ``f`` is ``algebra``'s structure."""
    base = algebra.theta if algebra.theta is not None else np.eye(algebra.n)
    return algebra.with_theta(np.asarray(theta, dtype=complex) @ base)


def relative_signs(algebra: GradedRealAlgebra, theta: np.ndarray) -> SignPair:
    """Relative signs of ``R = Ad_theta o f`` with respect to the reference ``f``.

    ``eta1 = phi_R(theta)`` is the parity and ``eta2 = phi_gamma*(theta) =
    theta Gamma theta^dagger Gamma`` the homogeneity sign of ``theta``.

    Raises
    ------
    ValueError
        If ``theta`` is not homogeneous or ``R`` does not have order two.
    """
    theta = np.asarray(theta, dtype=complex)
    _homogeneity(algebra, theta)
    rel = relative_algebra(algebra, theta)
    eta1 = scalar_sign(phi(rel, "R", theta))
    eta2 = scalar_sign(phi(rel, "gamma*", theta))
    return SignPair(eta1, eta2)


# square roots


def antipodal_gap(u: np.ndarray, tol_gap: float = TOL_GAP) -> tuple:
    """Widest gap of the eigenphases of ``u`` taken mod pi.

    Returns
    -------
    (width, midpoint) : tuple of float
        Ties are broken by the smallest midpoint in ``[0, pi)``.
    """
    w = np.linalg.eigvals(u)
    ph = np.sort(np.mod(np.angle(w), np.pi))
    gaps = np.diff(np.concatenate([ph, [ph[0] + np.pi]]))
    mids = np.mod(ph + gaps / 2, np.pi)
    best = gaps.max()
    cand = np.flatnonzero(gaps > best - 1e-12)
    k = cand[np.argmin(mids[cand])]
    if gaps[k] <= tol_gap:
        raise ValueError("spectrum meets every antipodal pair; no square root branch")
    return float(gaps[k]), float(mids[k])


def _unitary_function(u: np.ndarray, f) -> np.ndarray:
    # Schur form of a normal matrix is diagonal with a unitary basis
    from scipy.linalg import schur

    t, z = schur(u, output="complex")
    d = np.diag(t)
    return z @ np.diag(f(d)) @ dag(z)


_LINEAR_STRUCTURES = ("R*", "gamma", "gamma*")


def sqrt_unitary(
    u: np.ndarray,
    xi: Optional[str] = None,
    algebra: Optional[GradedRealAlgebra] = None,
    tol: float = TOL_ALG,
    tol_gap: float = TOL_GAP,
) -> np.ndarray:
    """Unitary square root of ``u`` on a branch avoiding an antipodal pair.

    With ``m`` the midpoint of the widest gap of the eigenphases mod pi, the
    spectrum misses ``e^{im}`` and ``-e^{im}``. Rotating by ``z = e^{-im}``
    moves the gap onto ``+-1``; the principal logarithm is halved and the
    result rotated back by ``e^{im/2}``. If ``xi`` names a complex-linear
    (anti)automorphism with ``xi(u) = u``, the root is ``xi``-invariant.

    Examples
    --------
    ``diag(1, i)`` gives ``diag(1, e^{i pi/4})``; ``-1`` gives ``i``.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, tol):
        raise ValueError("sqrt_unitary requires a unitary argument")
    if xi is not None:
        if xi not in _LINEAR_STRUCTURES:
            raise ValueError("invariant square roots need a complex-linear structure")
        if algebra is None:
            raise ValueError("xi given without an algebra")
        if norm(apply_structure(algebra, xi, u) - u) > tol:
            raise ValueError(f"u is not {xi}-invariant")
    _, m = antipodal_gap(u, tol_gap)
    z = np.exp(-1j * m)

    def root(d):
        return np.exp(0.5j * m) * np.exp(0.5 * np.log(z * d))

    v = _unitary_function(u, root)
    if norm(v @ v - u) > tol:
        raise ValueError("square root residual exceeds tolerance")
    return v


# order-two and commutation criteria


@dataclass
class OrderTwoReport:
    """Order-two and commutation predicates compared with direct composition."""

    order_two: bool
    order_two_direct: bool
    commute: bool
    commute_direct: bool
    commute_via_square: Optional[bool]
    residuals: dict

    @property
    def consistent(self) -> bool:
        ok = self.order_two == self.order_two_direct and self.commute == self.commute_direct
        if self.order_two and self.commute_via_square is not None:
            ok = ok and self.commute_via_square == self.commute_direct
        return ok


def _is_scalar(a: np.ndarray, tol: float = TOL_SCALAR) -> bool:
    try:
        scalar_value(a, tol)
    except ValueError:
        return False
    return True


def order_two_check(algebra: GradedRealAlgebra, u: np.ndarray, xi: str = "R") -> OrderTwoReport:
    """Compare the phi-based predicates for ``xi' = Ad_u o xi`` with direct checks.

    ``xi'`` has order two iff ``phi_xi(u)`` is central. ``xi'`` and ``xi``
    commute iff ``phi_xi*(u)`` is central, which for an order-two ``xi'`` is
    equivalent to ``u^2`` being central. The direct side evaluates
    ``xi'^2 - id`` and ``xi' xi - xi xi'`` on matrix units (both maps are
    complex linear).
    """
    if xi not in ("R", "gamma"):
        raise ValueError("xi must be 'R' or 'gamma'")
    u = np.asarray(u, dtype=complex)
    base = lambda a: apply_structure(algebra, xi, a)
    new = lambda a: u @ base(a) @ dag(u)
    star = "R*" if xi == "R" else "gamma*"
    order_two = _is_scalar(phi(algebra, xi, u))
    commute = _is_scalar(phi(algebra, star, u))
    square = _is_scalar(u @ u)
    r_sq, r_comm = 0.0, 0.0
    for b in algebra.spanning_set():
        r_sq = max(r_sq, norm(new(new(b)) - b))
        r_comm = max(r_comm, norm(new(base(b)) - base(new(b))))
    return OrderTwoReport(
        order_two=order_two,
        order_two_direct=r_sq < TOL_SCALAR,
        commute=commute,
        commute_direct=r_comm < TOL_SCALAR,
        commute_via_square=square if order_two else None,
        residuals={"order_two": r_sq, "commute": r_comm},
    )


def invariant_generator(algebra: GradedRealAlgebra, theta: np.ndarray) -> np.ndarray:
    """Unit-scalar multiple ``w`` of ``theta`` fixed by ``R = Ad_theta o f``.

    Follows the invariance lemma: ``v = theta / z`` with ``z^2 = theta^2``
    satisfies ``v^2 = 1``; then ``R(v) = phi_R(v) v`` and ``w = mu v`` with
    ``mu^2 = phi_R(v)`` is ``R``-invariant.

    Raises
    ------
    ValueError
        If ``theta^2`` is not scalar (``R`` and ``f`` do not commute).
    """
    theta = np.asarray(theta, dtype=complex)
    try:
        z2 = scalar_value(theta @ theta)
    except ValueError as exc:
        raise ValueError("theta^2 is not scalar; R and f do not commute") from exc
    z = np.sqrt(z2)
    v = theta / z
    rel = relative_algebra(algebra, theta)
    mu = np.sqrt(scalar_value(phi(rel, "R", v)))
    w = mu * v
    if norm(rel.real(w) - w) > TOL_ALG:
        raise ValueError("invariance correction failed")
    return w


def inner_conjugacy_witness(algebra: GradedRealAlgebra, theta: np.ndarray, tol: float = TOL_ALG):
    """Even ``w`` with ``theta = w f(w)^dagger``, or the tag ``"obstructed(eta)"``.

    For ``eta = (+1, +1)`` the even, ``f*``-invariant ``theta`` has an even
    ``f*``-invariant square root ``w``; then ``Ad_w`` intertwines
    ``(gamma, f)`` with ``(gamma, Ad_theta o f)``. This is checked on matrix
    units (real and imaginary multiples). Other signs cannot be inner
    conjugated.
    """
    theta = np.asarray(theta, dtype=complex)
    eta = relative_signs(algebra, theta)
    if eta.as_tuple() != (1, 1):
        return f"obstructed{eta}"
    ref = algebra if algebra.theta is not None else algebra.with_theta(np.eye(algebra.n))
    # f*-invariance of theta, with the reference structure attached
    w = sqrt_unitary(theta, "R*", ref, tol=tol)
    fw = ref.real(w)
    if norm(w @ dag(fw) - theta) > tol:
        raise ValueError("square root does not reproduce theta")
    if norm(algebra.gamma(w) - w) > tol:
        raise ValueError("square root is not even")
    resid = intertwining_residual(algebra, theta, w)
    if resid > tol:
        raise ValueError(f"intertwining residual {resid:.2e} exceeds tolerance")
    return w


def intertwining_residual(algebra: GradedRealAlgebra, theta: np.ndarray, w: np.ndarray) -> float:
    """Max of ``||S(w b w*) - w f(b) w*||`` over matrix units, ``S = Ad_theta o f``."""
    ref = algebra if algebra.theta is not None else algebra.with_theta(np.eye(algebra.n))
    rel = relative_algebra(ref, theta)
    worst = 0.0
    for b in algebra.spanning_set():
        for c in (b, 1j * b):
            lhs = rel.real(w @ c @ dag(w))
            rhs = w @ ref.real(c) @ dag(w)
            worst = max(worst, norm(lhs - rhs))
    return worst


# parity algebra


@dataclass(frozen=True)
class ParityRecord:
    theta_label: str
    grading_label: str
    parity_t: int
    grading_reality: int
    homogeneity: int
    parity_p: int
    predicted: int


def parity_configurations() -> list:
    """Check ``parity(gamma o t) = (Gamma t(Gamma)) parity(t)`` on ``M_4``.

    ``t = Ad_Theta o f`` runs over phase-normalized Pauli strings and two
    balanced gradings (one real, one imaginary). One record is kept per
    sign configuration ``(parity_t, t(Gamma)Gamma, homogeneity of Theta)``.
    """
    names = "IXYZ"
    gradings = {"1(x)Z": kron(PAULI[0], SZ), "Y(x)1": kron(SY, PAULI[0])}
    seen = {}
    for gname, g in gradings.items():
        alg = GradedRealAlgebra(4, g, None)
        for i in range(4):
            for j in range(4):
                theta = kron(PAULI[i], PAULI[j])
                par_t = scalar_sign(theta @ theta.conj())
                hom = _homogeneity(alg, theta)
                t_gamma = antilinear_action(theta, g)
                reality = scalar_sign(t_gamma @ g)
                gt = g @ t_gamma
                p_theta = g @ theta
                par_p = scalar_sign(p_theta @ p_theta.conj())
                pred = scalar_sign(gt) * par_t
                key = (par_t, reality, hom)
                if key not in seen:
                    seen[key] = ParityRecord(
                        names[i] + names[j], gname, par_t, reality, hom, par_p, pred
                    )
    return [seen[k] for k in sorted(seen)]


# Morita machinery


def blocks(a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Embed ``[[a, b], [c, d]]`` into ``A (x) M_2`` (second factor is the block index)."""
    e = [np.zeros((2, 2), dtype=complex) for _ in range(4)]
    for k, (i, j) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
        e[k][i, j] = 1
    return np.kron(a, e[0]) + np.kron(b, e[1]) + np.kron(c, e[2]) + np.kron(d, e[3])


def eq_u(gamma: np.ndarray) -> np.ndarray:
    """``U = ((1 - Gamma) (x) sigma_x + (1 + Gamma) (x) 1) / 2`` on ``A (x) M_2``."""
    one = np.eye(gamma.shape[0])
    return 0.5 * (np.kron(one - gamma, SX) + np.kron(one + gamma, I2))


@dataclass
class MoritaReport:
    """Certificates for ``Psi_e``, ``U`` and ``psi_e`` on one algebra."""

    case: str
    checks: dict
    psi_unitary: np.ndarray
    corner_theta: Optional[np.ndarray]
    tol: float = TOL_ALG

    @property
    def failures(self) -> list:
        return [k for k, v in self.checks.items() if not v < self.tol]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "passed": self.passed,
            "max_residual": max(self.checks.values(), default=0.0),
            "failures": self.failures,
        }


def morita_psi_e(algebra: GradedRealAlgebra, e: np.ndarray, tol: float = TOL_ALG) -> MoritaReport:
    """Certify the Morita maps built from an odd self-adjoint unitary ``e``.

    * ``Psi_e = Ad_W`` with ``W = 1 (+) e`` on ``M_2(A)``: intertwines
      ``gamma_2 = Ad_{Gamma (x) 1}`` with ``gamma_ev = Ad_{Gamma (x) sigma_z}``.
    * ``U`` of the doubling trick: ``U (Gamma (x) sigma_z) U^* = 1 (x) sigma_z``;
      with a real structure, ``U`` is ``R_2``-invariant (real ``Gamma``) or
      ``U R_2(U^*) = 1 (x) sigma_x`` (imaginary ``Gamma``).
    * ``psi_e = Ad_{J^*}`` with ``J = [V_+, e V_+]``: ``A -> M_2(A_{++})`` sends
      ``Gamma`` to ``sigma_z (x) 1``. With a real structure the transported
      ``Theta`` is ``1 (x) Theta_{++}`` (real ``Gamma``, ``R(e) = e``) or
      ``sigma_x (x) Theta^e_{++}`` for ``Ad_e o R`` (imaginary ``Gamma``).

    The ``M_2(A_{++})`` side uses the block index as the first tensor factor.
    """
    e = np.asarray(e, dtype=complex)
    n = algebra.n
    g = algebra.gamma_op
    eye = np.eye(n)
    if algebra.grading is None:
        raise ValueError("Morita maps need a nontrivial grading")
    if norm(e - dag(e)) > tol or norm(e @ e - eye) > tol:
        raise ValueError("e must be a self-adjoint unitary")
    if norm(g @ e @ g + e) > tol:
        raise ValueError("e must be odd")
    checks = {}
    theta = algebra.theta
    real_grading = None
    if theta is not None:
        real_grading = algebra.grading_reality
        if norm(algebra.real(e) - e) > tol:
            raise ValueError("e must be fixed by the real structure")

    # Psi_e
    P0 = np.diag([1.0, 0.0]).astype(complex)
    P1 = np.diag([0.0, 1.0]).astype(complex)
    W = np.kron(eye, P0) + np.kron(e, P1)
    g2 = np.kron(g, I2)
    gev = np.kron(g, SZ)
    probe = _probe_matrices(2 * n)
    checks["Psi_grading"] = max(norm(W @ (g2 @ x @ g2) @ W - gev @ (W @ x @ W) @ gev) for x in probe)
    checks["Psi_involution"] = norm(W @ W - np.eye(2 * n))
    a, b, c, d = (np.asarray(x) for x in probe[0].reshape(n, 2, n, 2).transpose(1, 3, 0, 2).reshape(4, n, n))
    # block formula [[a, b e], [e c, e d e]]
    x = blocks(a, b, c, d)
    checks["Psi_formula"] = norm(W @ x @ W - blocks(a, b @ e, e @ c, e @ d @ e))
    if theta is not None:
        t2 = np.kron(theta, I2)
        checks["Psi_real"] = max(
            norm(W @ antilinear_action(t2, y) @ W - antilinear_action(t2, W @ y @ W)) for y in probe
        )

    # U
    U = eq_u(g)
    checks["U_unitary"] = norm(U @ dag(U) - np.eye(2 * n))
    checks["U_grading"] = norm(U @ gev @ dag(U) - np.kron(eye, SZ))
    if theta is not None:
        t2 = np.kron(theta, I2)
        if real_grading == 1:
            checks["U_real"] = norm(antilinear_action(t2, U) - U)
        else:
            checks["U_real"] = norm(U @ antilinear_action(t2, dag(U)) - np.kron(eye, SX))

    # psi_e
    vp, vm = grading_eigenbases(g)
    k = vp.shape[1]
    if vm.shape[1] != k:
        raise ValueError("grading must be balanced")
    J = np.hstack([vp, e @ vp])
    checks["psi_unitary"] = norm(dag(J) @ J - np.eye(n))
    checks["psi_grading"] = norm(dag(J) @ g @ J - np.kron(SZ, np.eye(k)))
    corner = None
    case = "1"
    if theta is None:
        case = "complex"
    elif real_grading == 1:
        case = "2+/3+"
        corner = dag(vp) @ theta @ vp.conj()
        checks["psi_real"] = norm(dag(J) @ theta @ J.conj() - np.kron(I2, corner))
        checks["corner_unitary"] = norm(corner @ dag(corner) - np.eye(k))
    else:
        case = "2-/3-"
        corner = dag(vp) @ e @ theta @ vp.conj()
        checks["psi_real"] = norm(dag(J) @ theta @ J.conj() - np.kron(SX, corner))
        checks["corner_unitary"] = norm(corner @ dag(corner) - np.eye(k))
    return MoritaReport(case, checks, dag(J), corner, tol)


def _probe_matrices(n: int, count: int = 3) -> list:
    rng = np.random.default_rng(12345)
    return [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for _ in range(count)]


# sign tables for M_n and M_n (x) Cl_1


@dataclass(frozen=True, eq=False)
class SignTableRow:
    """One balanced graded real structure with its expected data.

    ``clifford`` is the ``(r, s)`` label of the real subalgebra, up to the
    Morita factor. For rows on ``M_n (x) Cl_1`` the ``Cl_1`` factor is the
    ``sigma_x``-span inside ``M_2`` graded by ``sigma_z`` and ``extension``
    records whether its generator is real (``l10``) or imaginary (``l01``).
    """

    label: str
    algebra: GradedRealAlgebra
    theta: np.ndarray
    signs: tuple
    clifford: tuple
    extension: Optional[str] = None


def cl1_extension(algebra: GradedRealAlgebra, theta: np.ndarray) -> str:
    """``l10`` if ``Ad_theta o f`` fixes the ``Cl_1`` generator ``1 (x) sigma_x``, ``l01`` if it negates it."""
    rel = relative_algebra(algebra, theta)
    e = np.kron(np.eye(algebra.n // 2), SX)
    image = rel.real(e)
    if norm(image - e) < TOL_ALG:
        return "l10"
    if norm(image + e) < TOL_ALG:
        return "l01"
    raise ValueError("real structure does not preserve the Cl_1 factor")


def sign_table_rows() -> list:
    """Four graded rows on ``(M_n, Ad_Gamma)`` and four rows on ``M_n (x) Cl_1``."""
    m2 = GradedRealAlgebra(2, SZ, None, name="M2")
    m4 = GradedRealAlgebra(4, kron(I2, SZ), None, name="M4")
    graded = [
        SignTableRow("c", m2, I2, (1, 1), (1, 1)),
        SignTableRow("Ad_sx c", m2, SX, (1, -1), (2, 0)),
        SignTableRow("Ad_sy c", m2, SY, (-1, -1), (0, 2)),
        SignTableRow("Ad_sy c (x) c", m4, kron(SY, I2), (-1, 1), (0, 4)),
    ]
    cl1_small = GradedRealAlgebra(2, SZ, None, generators=(I2, SX), name="Cl1")
    cl1_big = GradedRealAlgebra(4, kron(I2, SZ), None, generators=(kron(I2, I2), kron(I2, SX), kron(SX, I2), kron(SZ, I2)), name="M2(x)Cl1")
    fp = [
        SignTableRow("c", cl1_small, I2, (1, 1), (1, 0), "l10"),
        SignTableRow("st c", cl1_small, SZ, (1, 1), (0, 1), "l01"),
        SignTableRow("Ad_sy c (x) c", cl1_big, kron(SY, I2), (-1, 1), (0, 3), "l10"),
        SignTableRow("Ad_sy c (x) st c", cl1_big, kron(SY, SZ), (-1, 1), (3, 0), "l01"),
    ]
    return graded + fp


def random_invariant_theta(rng: np.random.Generator, algebra: GradedRealAlgebra) -> np.ndarray:
    """Random even ``f*``-invariant unitary ``theta = w w^T`` with ``w`` even.

    The grading must be real diagonal so that ``w^T`` stays even.
    """
    from scipy.stats import unitary_group

    g = algebra.gamma_op
    vp, vm = grading_eigenbases(g)
    w = np.zeros((algebra.n, algebra.n), dtype=complex)
    for v in (vp, vm):
        k = v.shape[1]
        if k:
            u = unitary_group.rvs(k, random_state=rng) if k > 1 else np.exp(2j * np.pi * rng.random()) * np.eye(1)
            w += v @ u @ dag(v)
    return w @ w.T
