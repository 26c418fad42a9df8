"""Small linear-algebra helpers shared across the package."""

from __future__ import annotations

import numpy as np

TOL_ALG = 1e-10
TOL_GAP = 1e-8
TOL_SCALAR = 1e-8

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (I2, SX, SY, SZ)


def kron(*mats: np.ndarray) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def dag(a: np.ndarray) -> np.ndarray:
    return np.swapaxes(a, -1, -2).conj()


def norm(a: np.ndarray) -> float:
    """Operator 2-norm of a single matrix, or the max over a stack."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    if a.ndim == 2:
        return float(np.linalg.norm(a, 2))
    return float(np.max(np.linalg.norm(a, 2, axis=(-2, -1))))


def adjoint_action(u: np.ndarray, a: np.ndarray) -> np.ndarray:
    return u @ a @ dag(u)


def antilinear_action(theta: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Apply ``Ad_theta o conj`` to ``a``."""
    return theta @ np.conj(a) @ dag(theta)


def scalar_value(a: np.ndarray, tol: float = TOL_SCALAR) -> complex:
    """Return ``c`` if ``a = c * 1`` within ``tol``, else raise ``ValueError``."""
    a = np.asarray(a)
    n = a.shape[-1]
    c = np.trace(a) / n
    if norm(a - c * np.eye(n)) > tol:
        raise ValueError("matrix is not a scalar multiple of the identity")
    return complex(c)


def scalar_sign(a: np.ndarray, tol: float = TOL_SCALAR) -> int:
    """Coerce ``a = +-1`` to the integer sign.

    Raises
    ------
    ValueError
        If ``a`` is not within ``tol`` of ``+1`` or ``-1``.
    """
    c = scalar_value(a, tol)
    for s in (1, -1):
        if abs(c - s) <= tol:
            return s
    raise ValueError(f"scalar {c:.3g} is not +-1")


def is_unitary(u: np.ndarray, tol: float = TOL_ALG) -> bool:
    n = u.shape[-1]
    return norm(u @ dag(u) - np.eye(n)) < tol


def orthonormal_span_dim(mats, tol: float = 1e-9) -> int:
    """Complex dimension of the linear span of a list of matrices."""
    if len(mats) == 0:
        return 0
    m = np.array([np.asarray(x).ravel() for x in mats])
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * max(1.0, s[0])))


def algebra_dim(generators, n: int, tol: float = 1e-9, max_iter: int = 64) -> int:
    """Complex dimension of the unital algebra generated by ``generators``.

    Grows an orthonormal basis of the span by right multiplication with the
    generators until it stops growing.
    """
    basis = np.eye(n, dtype=complex).reshape(1, -1) / np.sqrt(n)
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if not gens:
        return 1
    for _ in range(max_iter):
        mats = basis.reshape(-1, n, n)
        cand = [basis]
        for g in gens:
            cand.append((mats @ g).reshape(len(mats), -1))
        stacked = np.concatenate(cand, axis=0)
        u, s, vh = np.linalg.svd(stacked, full_matrices=False)
        r = int(np.sum(s > tol * s[0]))
        new = vh[:r]
        if r == len(basis):
            return r
        basis = new
    return len(basis)


def eigh_split(h: np.ndarray):
    """Return (eigenvalues, eigenvectors) of a Hermitian matrix or stack."""
    h = 0.5 * (h + dag(h))
    return np.linalg.eigh(h)


def grading_eigenbases(gamma: np.ndarray):
    """Orthonormal bases ``(V_plus, V_minus)`` of the eigenspaces of a grading.

    A diagonal grading keeps the standard basis order so that derived
    basepoints look like ``sigma_x (x) 1``.
    """
    n = gamma.shape[0]
    if np.allclose(gamma, np.diag(np.diag(gamma))):
        d = np.real(np.diag(gamma))
        eye = np.eye(n, dtype=complex)
        return eye[:, d > 0], eye[:, d < 0]
    w, v = eigh_split(gamma)
    return v[:, w > 0], v[:, w < 0]
