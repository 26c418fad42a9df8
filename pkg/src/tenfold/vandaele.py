"""Van Daele K-theory at matrix and Bloch scale.

Classes are never materialized as group elements. Phases are compared through
explicit homotopy witnesses (sampled paths of odd self-adjoint unitaries) and
through the integer invariants computed downstream from :func:`q_map`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._linalg import (
    I2,
    SY,
    TOL_ALG,
    TOL_GAP,
    antilinear_action,
    dag,
    eigh_split,
    grading_eigenbases,
    norm,
)
from .graded_real import GradedRealAlgebra


class GapError(ValueError):
    """Raised when an operator fails the spectral gap condition.

    Attributes
    ----------
    index : tuple
        Position in the stacked family (empty for a single matrix).
    eigenvalue : float
        Eigenvalue of smallest modulus at that position.
    """

    def __init__(self, message: str, index: tuple = (), eigenvalue: float = 0.0):
        super().__init__(message)
        self.index = index
        self.eigenvalue = eigenvalue


def osu_residuals(x: np.ndarray, algebra: GradedRealAlgebra) -> dict:
    """Residuals of ``x = x^* = x^-1``, ``gamma(x) = -x`` and ``R(x) = x``."""
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1]
    g = algebra.gamma_op
    out = {
        "selfadjoint": norm(x - dag(x)),
        "unitary": norm(x @ x - np.eye(n)),
        "odd": norm(g @ x @ g + x),
    }
    if algebra.theta is not None:
        out["real"] = norm(antilinear_action(algebra.theta, x) - x)
    return out


@dataclass
class OSU:
    """Odd self-adjoint unitary of a graded (real) matrix algebra."""

    element: np.ndarray
    algebra: GradedRealAlgebra
    checks: dict = field(default_factory=dict)

    def __post_init__(self):
        self.element = np.asarray(self.element, dtype=complex)
        self.checks = osu_residuals(self.element, self.algebra)

    @property
    def valid(self) -> bool:
        return max(self.checks.values()) < TOL_ALG

    def require(self) -> "OSU":
        if not self.valid:
            bad = {k: v for k, v in self.checks.items() if not v < TOL_ALG}
            raise ValueError(f"not an odd self-adjoint unitary: {bad}")
        return self


@dataclass
class HomotopyWitness:
    """Sampled path of OSUs with its validity record.

    ``validity`` holds the largest OSU residual over the samples and the
    smallest spectral gap (``min |eigenvalue|``) seen along the path.
    """

    samples: np.ndarray
    times: np.ndarray
    source: np.ndarray
    target: np.ndarray
    validity: dict
    description: str = ""

    @property
    def valid(self) -> bool:
        return self.validity["max_residual"] < TOL_ALG and self.validity["min_gap"] > TOL_GAP

    def to_dict(self) -> dict:
        return {"description": self.description, "valid": self.valid, **self.validity}


def flatten(h: np.ndarray, tol_gap: float = TOL_GAP) -> np.ndarray:
    """Spectral flattening ``sgn(h)`` of a self-adjoint matrix or stack of them.

    Parameters
    ----------
    h : ndarray, shape (..., N, N)
        Self-adjoint matrices; leading axes index a Bloch family.

    Raises
    ------
    GapError
        If some eigenvalue has modulus ``<= tol_gap``; the offending index
        and eigenvalue are reported.
    """
    h = np.asarray(h, dtype=complex)
    w, v = eigh_split(h)
    small = np.min(np.abs(w), axis=-1)
    if np.any(small <= tol_gap):
        idx = tuple(int(i) for i in np.unravel_index(int(np.argmin(small)), small.shape))
        row = w[idx]
        ev = float(row[np.argmin(np.abs(row))])
        raise GapError(f"gap failure at index {idx}: eigenvalue {ev:.3e}", idx, ev)
    s = np.sign(w)
    return (v * s[..., None, :]) @ dag(v)


def flatten_witness(h: np.ndarray, samples: int = 32) -> dict:
    """Gap along the linear path ``(1 - t) h + t sgn(h)`` on ``samples`` points.

    Returns the minimal modulus of eigenvalues along the path, the gap of
    ``h`` and the commutator ``||[sgn(h), h]||``.
    """
    h = np.asarray(h, dtype=complex)
    s = flatten(h)
    gap_h = float(np.min(np.abs(np.linalg.eigvalsh(0.5 * (h + dag(h))))))
    worst = np.inf
    for t in np.linspace(0.0, 1.0, samples):
        p = (1 - t) * h + t * s
        worst = min(worst, float(np.min(np.abs(np.linalg.eigvalsh(0.5 * (p + dag(p)))))))
    return {
        "min_path_gap": worst,
        "gap": gap_h,
        "bound": min(1.0, gap_h),
        "commutator": norm(s @ h - h @ s),
    }


def rotation_homotopy(e1, e2, algebra: Optional[GradedRealAlgebra] = None, samples: int = 64) -> tuple:
    """Rotation paths ``w(t) = cos(t) e1 + sin(t) e2``.

    Parameters
    ----------
    e1, e2 : OSU or ndarray
        Anticommuting odd self-adjoint unitaries of the same algebra.
    samples : int
        Number of sample points on each path.

    Returns
    -------
    (to_e2, to_minus_e1) : tuple of HomotopyWitness
        Paths over ``[0, pi/2]`` and ``[0, pi]``.
    """
    if isinstance(e1, OSU):
        algebra = algebra or e1.algebra
        e1 = e1.element
    if isinstance(e2, OSU):
        algebra = algebra or e2.algebra
        e2 = e2.element
    e1 = np.asarray(e1, dtype=complex)
    e2 = np.asarray(e2, dtype=complex)
    if algebra is None:
        raise ValueError("an algebra is required to check oddness")
    anti = norm(e1 @ e2 + e2 @ e1)
    if anti > TOL_ALG:
        raise ValueError(f"e1 and e2 do not anticommute (residual {anti:.3g})")
    out = []
    for stop, target, label in ((np.pi / 2, e2, "e1 -> e2"), (np.pi, -e1, "e1 -> -e1")):
        ts = np.linspace(0.0, stop, samples)
        path = np.cos(ts)[:, None, None] * e1 + np.sin(ts)[:, None, None] * e2
        worst = 0.0
        gap = np.inf
        for x in path:
            worst = max(worst, max(osu_residuals(x, algebra).values()))
            gap = min(gap, float(np.min(np.abs(np.linalg.eigvalsh(0.5 * (x + dag(x)))))))
        worst = max(worst, norm(path[0] - e1), norm(path[-1] - target))
        out.append(
            HomotopyWitness(path, ts, e1, target, {"max_residual": worst, "min_gap": gap}, label)
        )
    return tuple(out)


def default_basepoint(gamma: np.ndarray) -> np.ndarray:
    """``e = V_- V_+^* + V_+ V_-^*``; equals ``sigma_x (x) 1`` for ``Gamma = sigma_z (x) 1``."""
    vp, vm = grading_eigenbases(gamma)
    if vp.shape[1] != vm.shape[1]:
        raise ValueError("grading is not balanced; no odd unitary basepoint")
    return vm @ dag(vp) + vp @ dag(vm)


def q_map(h: np.ndarray, e: np.ndarray, gamma: np.ndarray, tol: float = TOL_ALG) -> np.ndarray:
    """Compression ``Q_e(h) = Pi_+ e h Pi_+`` on the ``+1`` eigenspace of ``Gamma``.

    Parameters
    ----------
    h : ndarray, shape (..., N, N)
        Odd self-adjoint unitary or a Bloch family of them.
    e : ndarray
        Odd self-adjoint unitary basepoint.
    gamma : ndarray
        Balanced grading operator.

    Returns
    -------
    ndarray, shape (..., N/2, N/2)
        Unitary in the basis of ``V_+``.
    """
    h = np.asarray(h, dtype=complex)
    vp, _ = grading_eigenbases(gamma)
    q = dag(vp) @ e @ h @ vp
    k = q.shape[-1]
    res = norm(q @ dag(q) - np.eye(k))
    if res > tol:
        raise ValueError(f"compression is not unitary (residual {res:.3g}); h not odd or not flat")
    return q


def direct_sum(*mats: np.ndarray) -> np.ndarray:
    """Block-diagonal sum of matrices or of equally stacked families."""
    mats = [np.asarray(m, dtype=complex) for m in mats]
    lead = mats[0].shape[:-2]
    n = sum(m.shape[-1] for m in mats)
    out = np.zeros(lead + (n, n), dtype=complex)
    i = 0
    for m in mats:
        k = m.shape[-1]
        out[..., i : i + k, i : i + k] = m
        i += k
    return out


def inverse_representative(x: np.ndarray, e: np.ndarray) -> np.ndarray:
    """``-e x e``, the inverse of ``[x]`` relative to the basepoint ``e``."""
    return -e @ x @ e


# Boersema-Loring representatives


_SELF_ADJOINT_DEGREES = (0, 2, 4, 6)
_QUATERNIONIC_DEGREES = (4, 5, 6)


@dataclass
class BLRepresentative:
    """Element validated against the degree-specific symmetry condition."""

    degree: int
    element: np.ndarray
    condition: str
    residuals: dict

    def to_dict(self) -> dict:
        return {"degree": self.degree, "condition": self.condition, "residuals": self.residuals}


def quaternionic_theta(theta: np.ndarray, size: int) -> np.ndarray:
    """``Theta`` of ``R^h = R (x) Ad_{i sigma_y}`` on ``M_m(A) (x) M_2`` of total ``size``."""
    n = theta.shape[0]
    if size % (2 * n):
        raise ValueError(f"size {size} is not a multiple of 2 x {n}")
    m = size // (2 * n)
    return np.kron(np.kron(np.eye(m), theta), 1j * SY)


def bl_representative(degree: int, u: np.ndarray, algebra: GradedRealAlgebra, tol: float = TOL_ALG) -> BLRepresentative:
    """Validate ``u`` as a representative of ``KO_degree`` of the real subalgebra.

    Conditions, with ``R`` from ``algebra`` extended entrywise to ``M_m(A)``
    and ``R^h = R (x) Ad_{i sigma_y}``:

    ======  ===============================  ==============================
    degree  kind                             condition
    ======  ===============================  ==============================
    0       self-adjoint unitary             ``R(u) = u``
    1       unitary                          ``R(U) = U``
    2       self-adjoint unitary             ``R(u) = -u``
    3       unitary                          ``R(U) = -U^*``
    4       self-adjoint unitary             ``R^h(u) = u``
    5       unitary                          ``R^h(U) = U``
    6       self-adjoint unitary             ``R^h(u) = -u``
    7       unitary                          ``R(U) = U^*``
    ======  ===============================  ==============================

    Raises
    ------
    ValueError
        Naming the violated condition.
    """
    if algebra.theta is None:
        raise ValueError("bl_representative needs a real structure")
    d = int(degree) % 8
    u = np.asarray(u, dtype=complex)
    size = u.shape[0]
    n = algebra.n
    if d in _QUATERNIONIC_DEGREES:
        theta = quaternionic_theta(algebra.theta, size)
    else:
        if size % n:
            raise ValueError(f"size {size} is not a multiple of {n}")
        theta = np.kron(np.eye(size // n), algebra.theta)
    R = lambda a: antilinear_action(theta, a)
    res = {"unitary": norm(u @ dag(u) - np.eye(size))}
    if d in _SELF_ADJOINT_DEGREES:
        res["selfadjoint"] = norm(u - dag(u))
    cond = {
        0: ("R(u) = u", R(u) - u),
        1: ("R(U) = U", R(u) - u),
        2: ("R(u) = -u", R(u) + u),
        3: ("R(U) = -U^*", R(u) + dag(u)),
        4: ("R^h(u) = u", R(u) - u),
        5: ("R^h(U) = U", R(u) - u),
        6: ("R^h(u) = -u", R(u) + u),
        7: ("R(U) = U^*", R(u) - dag(u)),
    }[d]
    res["condition"] = norm(cond[1])
    bad = [k for k, v in res.items() if not v < tol]
    if bad:
        raise ValueError(f"degree {d} representative rejected: {cond[0]} / {bad} violated ({res})")
    return BLRepresentative(d, u, cond[0], res)


def bl_examples(algebra: GradedRealAlgebra) -> dict:
    """One constructive representative per degree over ``algebra``.

    Built from the degree-0 flat Hamiltonian ``sigma_z (x) 1`` and Pauli
    factors; the quaternionic factor of ``R^h`` is the last tensor slot.
    Every element uses real or imaginary Pauli matrices tensored with the
    identity of ``algebra``, so the conditions hold for any ``Theta``.
    """
    from ._linalg import SX, SZ

    one = np.eye(algebra.n, dtype=complex)
    th = np.pi / 5
    rot = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]], dtype=complex)
    sym = np.array([[np.cos(th), 1j * np.sin(th)], [1j * np.sin(th), np.cos(th)]])
    return {
        0: np.kron(SZ, one),
        1: np.kron(rot, one),
        2: np.kron(SY, one),
        3: np.kron(1j * SY, one),
        4: np.kron(np.kron(SZ, one), I2),
        5: np.kron(one, 1j * SZ),
        6: np.kron(one, SZ),
        7: np.kron(sym, one),
    }
