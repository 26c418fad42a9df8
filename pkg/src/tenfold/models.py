"""Tight-binding Bloch models ``h(k) = sum_n t_n exp(2 pi i n.k)`` on ``[0, 1)^d``.

Antiunitary symmetries act as ``Theta conj(h(-k)) Theta^dagger``; this is the
Fourier transform of entrywise conjugation of the hopping matrices. The chiral
symmetry acts pointwise in ``k``.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._linalg import I2, SX, SY, SZ, TOL_ALG, dag, norm, scalar_sign

SQRT3 = np.sqrt(3.0)
# honeycomb lattice: a1 = (1, 0), a2 = (1/2, sqrt3/2); A at 0, B at (a1 + a2) / 3
HONEYCOMB = {
    "a1": [1.0, 0.0],
    "a2": [0.5, SQRT3 / 2],
    "tau_A": [0.0, 0.0],
    "tau_B": [0.5, SQRT3 / 6],
}
# cells n of the three B neighbours of A in cell 0, and the bond vectors B - A
_NN_CELLS = ((0, 0), (-1, 0), (0, -1))
_NN_BONDS = (
    np.array([0.5, SQRT3 / 6]),
    np.array([-0.5, SQRT3 / 6]),
    np.array([0.0, -SQRT3 / 3]),
)
# second neighbours of a site, 120 degrees apart counter-clockwise
_NNN_CELLS = ((1, 0), (-1, 1), (0, -1))


class ModelSchemaError(ValueError):
    """Malformed model file or inconsistent hopping data."""


@dataclass(frozen=True, eq=False)
class BlochModel:
    """Finitely supported hopping data with ``t_{-n} = t_n^dagger``.

    Attributes
    ----------
    d : int
        Lattice dimension.
    N : int
        Fiber dimension.
    hoppings : dict
        Maps integer tuples ``n`` to complex ``N x N`` matrices.
    name : str
    params : dict
        Builder parameters and lattice data, kept for reproducibility.
    """

    d: int
    N: int
    hoppings: dict
    name: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        hops = {}
        for n, t in self.hoppings.items():
            n = tuple(int(x) for x in n)
            if len(n) != self.d:
                raise ModelSchemaError(f"hopping vector {n} does not have length d={self.d}")
            t = np.asarray(t, dtype=complex)
            if t.shape != (self.N, self.N):
                raise ModelSchemaError(f"hopping at {n} has shape {t.shape}")
            hops[n] = t
        for n, t in hops.items():
            m = tuple(-x for x in n)
            if m not in hops:
                raise ModelSchemaError(f"hopping at {n} has no partner at {m}")
            if norm(hops[m] - dag(t)) > TOL_ALG:
                raise ModelSchemaError(f"t_{m} != t_{n}^dagger")
        object.__setattr__(self, "hoppings", hops)
        keys = sorted(hops)
        object.__setattr__(self, "_ns", np.array(keys, dtype=float).reshape(len(keys), self.d))
        object.__setattr__(
            self,
            "_ts",
            np.array([hops[k] for k in keys]).reshape(len(keys), self.N, self.N),
        )

    @classmethod
    def from_hoppings(cls, d: int, N: int, hoppings: dict, name: str = "", params=None, warn: bool = True):
        """Build a model, adding missing partners ``t_{-n} = t_n^dagger``."""
        hops = {tuple(int(x) for x in n): np.asarray(t, dtype=complex) for n, t in hoppings.items()}
        added = []
        for n in list(hops):
            m = tuple(-x for x in n)
            if m not in hops:
                hops[m] = dag(hops[n])
                added.append(m)
        if added and warn:
            warnings.warn(f"added adjoint partners for {len(added)} one-sided hoppings", stacklevel=2)
        return cls(d, N, hops, name, dict(params or {}))

    @property
    def support_radius(self) -> int:
        if not self.hoppings:
            return 0
        return int(max(max(abs(x) for x in n) if n else 0 for n in self.hoppings))


@dataclass(frozen=True, eq=False)
class SymmetrySpec:
    """Declared symmetry operators on the fiber.

    ``chiral`` is a self-adjoint unitary ``Gamma`` with ``Gamma h(k) Gamma =
    -h(k)``; ``trs`` and ``phs`` are unitaries ``Theta`` acting with
    ``k -> -k`` as ``Theta conj(h(-k)) Theta^dagger = +-h(k)``.
    """

    chiral: Optional[np.ndarray] = None
    trs: Optional[np.ndarray] = None
    phs: Optional[np.ndarray] = None

    def __post_init__(self):
        for name in ("chiral", "trs", "phs"):
            op = getattr(self, name)
            if op is None:
                continue
            op = np.asarray(op, dtype=complex)
            n = op.shape[0]
            if op.shape != (n, n) or norm(op @ dag(op) - np.eye(n)) > TOL_ALG:
                raise ModelSchemaError(f"{name} operator must be a square unitary")
            if name == "chiral" and norm(op - dag(op)) > TOL_ALG:
                raise ModelSchemaError("chiral operator must be self-adjoint")
            object.__setattr__(self, name, op)

    @property
    def present(self) -> dict:
        return {k: getattr(self, k) is not None for k in ("chiral", "trs", "phs")}


# evaluation


def evaluate(model: BlochModel, k) -> np.ndarray:
    """``h(k) = sum_n t_n exp(2 pi i n.k)``.

    Parameters
    ----------
    k : array_like, shape (..., d)
        Points of ``[0, 1)^d``; leading axes are kept.

    Returns
    -------
    ndarray, shape (..., N, N)
    """
    k = np.asarray(k, dtype=float)
    if model.d == 1 and (k.ndim == 0 or k.shape[-1] != 1):
        k = k[..., None]
    if not model.hoppings:
        return np.zeros(k.shape[:-1] + (model.N, model.N), dtype=complex)
    phase = np.exp(2j * np.pi * (k @ model._ns.T))
    return np.einsum("...m,mij->...ij", phase, model._ts)


def grid(d: int, n) -> np.ndarray:
    """Regular grid of ``[0, 1)^d`` with ``n`` points per axis, shape ``(n,)*d + (d,)``."""
    axes = [np.arange(n) / n] * d
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1)


def evaluate_grid(model: BlochModel, n: int) -> np.ndarray:
    return evaluate(model, grid(model.d, n))


def gap(model: BlochModel, grid_size: int = 64) -> tuple:
    """Smallest singular value of ``h(k)`` over the grid and a minimizing ``k``."""
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    ks = grid(model.d, grid_size)
    w = np.linalg.eigvalsh(evaluate(model, ks))
    small = np.min(np.abs(w), axis=-1)
    idx = np.unravel_index(int(np.argmin(small)), small.shape)
    return float(small[idx]), tuple(float(x) for x in ks[idx])


def reversed_grid(values: np.ndarray, d: int) -> np.ndarray:
    """Reindex grid data at ``k`` to the value at ``-k``."""
    out = values
    for ax in range(d):
        out = np.roll(np.flip(out, axis=ax), 1, axis=ax)
    return out


# symmetry checks


@dataclass
class SymmetryReport:
    """Residuals of declared symmetries and the derived signs."""

    residuals: dict
    parities: dict
    grading_reality: Optional[int]
    commutation: dict
    grid_size: int

    def consistent(self, tol: float = 1e-8) -> bool:
        return all(v < tol for v in self.residuals.values()) and all(
            v < tol for v in self.commutation.values()
        )

    def to_dict(self) -> dict:
        return {
            "residuals": self.residuals,
            "parities": self.parities,
            "grading_reality": self.grading_reality,
            "commutation": self.commutation,
            "grid_size": self.grid_size,
        }


def verify_symmetries(model: BlochModel, spec: SymmetrySpec, grid_size: Optional[int] = None) -> SymmetryReport:
    """Max-over-grid residuals of the declared symmetry relations.

    chiral: ``||Gamma h(k) Gamma + h(k)||``; TRS: ``||Theta conj(h(-k))
    Theta^dagger - h(k)||``; PHS: same with ``+ h(k)``. Parities are
    ``Theta conj(Theta)``; with chiral and TRS present the reality sign
    ``Theta_T conj(Gamma) Theta_T^dagger Gamma`` is reported.
    """
    if grid_size is None:
        grid_size = 32 if model.d <= 2 else 12
    h = evaluate_grid(model, grid_size)
    hm = reversed_grid(h, model.d)
    res, par, comm = {}, {}, {}
    g = spec.chiral
    if g is not None:
        res["chiral"] = norm(g @ h @ g + h)
    for name, sign in (("trs", 1), ("phs", -1)):
        t = getattr(spec, name)
        if t is None:
            continue
        res[name] = norm(t @ hm.conj() @ dag(t) - sign * h)
        try:
            par[name] = scalar_sign(t @ t.conj())
        except ValueError:
            par[name] = 0
            comm[f"{name}_order_two"] = 1.0
    reality = None
    if g is not None and spec.trs is not None:
        t = spec.trs
        try:
            reality = scalar_sign(t @ g.conj() @ dag(t) @ g)
        except ValueError:
            comm["trs_grading_homogeneous"] = 1.0
    if g is not None and spec.phs is not None:
        t = spec.phs
        try:
            scalar_sign(t @ g.conj() @ dag(t) @ g)
        except ValueError:
            comm["phs_grading_homogeneous"] = 1.0
    return SymmetryReport(res, par, reality, comm, grid_size)


# builders


def _add(hops: dict, n, mat):
    n = tuple(n)
    hops[n] = hops.get(n, 0) + np.asarray(mat, dtype=complex)


def _add_bond(hops: dict, n, mat):
    """Add ``mat`` at ``n`` and its adjoint at ``-n``."""
    n = tuple(n)
    _add(hops, n, mat)
    _add(hops, tuple(-x for x in n), dag(np.asarray(mat, dtype=complex)))


def build_ssh(v: float, w: float) -> tuple:
    """SSH chain: ``h(k) = [[0, v + w e^{-2 pi i k}], [v + w e^{2 pi i k}, 0]]``.

    Returns
    -------
    (BlochModel, SymmetrySpec)
        Chiral symmetry ``Gamma = sigma_z``.
    """
    hops = {}
    _add(hops, (0,), v * SX)
    inter = np.array([[0, w], [0, 0]], dtype=complex)
    _add_bond(hops, (-1,), inter)
    model = BlochModel(1, 2, hops, "ssh", {"v": v, "w": w})
    return model, SymmetrySpec(chiral=SZ)


def build_qwz(m: float) -> tuple:
    """Qi-Wu-Zhang model ``sin kx sx + sin ky sy + (m + cos kx + cos ky) sz`` (``k`` in units of 2 pi)."""
    hops = {}
    _add(hops, (0, 0), m * SZ)
    _add_bond(hops, (1, 0), 0.5 * SZ - 0.5j * SX)
    _add_bond(hops, (0, 1), 0.5 * SZ - 0.5j * SY)
    model = BlochModel(2, 2, hops, "qwz", {"m": m})
    return model, SymmetrySpec()


def _haldane_hops(t1: float, t2: float, phi: float, m: float) -> dict:
    hops = {}
    _add(hops, (0, 0), m * SZ)
    ab = np.array([[0, t1], [0, 0]], dtype=complex)
    for n in _NN_CELLS:
        if n == (0, 0):
            _add(hops, n, ab + dag(ab))
        else:
            _add_bond(hops, n, ab)
    nnn = t2 * np.diag([np.exp(1j * phi), np.exp(-1j * phi)])
    for n in _NNN_CELLS:
        _add_bond(hops, n, nnn)
    return hops


def build_haldane(t1: float, t2: float, phi: float, m: float) -> tuple:
    """Haldane honeycomb model, sublattice basis ``(A, B)``.

    Nearest neighbour ``t1``; second-neighbour ``t2 e^{+i phi}`` on ``A`` and
    ``t2 e^{-i phi}`` on ``B`` along the counter-clockwise second-neighbour
    vectors ``a1, a2 - a1, -a2``; staggered mass ``m sigma_z``. Gapped with
    ``|C| = 1`` when ``|m| < 3 sqrt(3) |t2 sin(phi)|``.
    """
    hops = _haldane_hops(t1, t2, phi, m)
    params = {"t1": t1, "t2": t2, "phi": phi, "m": m, "lattice": HONEYCOMB}
    return BlochModel(2, 2, hops, "haldane", params), SymmetrySpec()


def build_kane_mele(t: float, lambda_so: float, lambda_r: float, m: float) -> tuple:
    """Kane-Mele model on ``spin (x) sublattice`` (spin is the outer factor).

    ``h = [[h1, R], [R^*, h2]]`` with ``h1`` the Haldane model at
    ``t2 = lambda_so, phi = pi/2``, ``h2 = f(h1)`` and the Rashba coupling
    ``i lambda_r (s x d)_z`` on nearest-neighbour bonds ``d`` (unit vectors).
    Time reversal is ``Theta_T = sigma_y (x) 1``.
    """
    hops = {}
    up = _haldane_hops(t, lambda_so, np.pi / 2, m)
    for n, mat in up.items():
        _add(hops, n, np.kron(np.diag([1, 0]), mat) + np.kron(np.diag([0, 1]), mat.conj()))
    if lambda_r:
        for n, d in zip(_NN_CELLS, _NN_BONDS):
            d = d / np.linalg.norm(d)
            spin = 1j * lambda_r * (SX * d[1] - SY * d[0])
            ab = np.zeros((2, 2), dtype=complex)
            ab[0, 1] = 1.0
            bond = np.kron(spin, ab)
            if n == (0, 0):
                _add(hops, n, bond + dag(bond))
            else:
                _add_bond(hops, n, bond)
    params = {"t": t, "lambda_so": lambda_so, "lambda_r": lambda_r, "m": m, "lattice": HONEYCOMB}
    model = BlochModel(2, 4, hops, "kane_mele", params)
    return model, SymmetrySpec(trs=np.kron(SY, I2))


BUILDERS = {
    "ssh": (build_ssh, ("v", "w")),
    "qwz": (build_qwz, ("m",)),
    "haldane": (build_haldane, ("t1", "t2", "phi", "m")),
    "kane_mele": (build_kane_mele, ("t", "lambda_so", "lambda_r", "m")),
}


def kane_mele_block_residuals(model: BlochModel, grid_size: int = 32) -> dict:
    """Residuals of ``f(h1) = h2`` and ``f(R) = -R^*`` on the Bloch side.

    ``f`` acts as ``F(k) -> conj(F(-k))`` and ``*`` as the pointwise adjoint.
    """
    if model.N % 2:
        raise ValueError("Kane-Mele block form needs even fiber dimension")
    h = evaluate_grid(model, grid_size)
    hm = reversed_grid(h, model.d)
    k = model.N // 2
    h1, h2, r = h[..., :k, :k], h[..., k:, k:], h[..., :k, k:]
    h1m, rm = hm[..., :k, :k], hm[..., :k, k:]
    return {
        "f(h1)=h2": norm(h1m.conj() - h2),
        "f(R)=-R*": norm(rm.conj() + dag(r)),
    }


# combinators


def direct_sum(a: BlochModel, b: BlochModel, name: str = "") -> BlochModel:
    if a.d != b.d:
        raise ValueError("dimension mismatch")
    hops = {}
    za, zb = np.zeros((a.N, a.N)), np.zeros((b.N, b.N))
    for n in set(a.hoppings) | set(b.hoppings):
        ta = a.hoppings.get(n, za)
        tb = b.hoppings.get(n, zb)
        m = np.zeros((a.N + b.N, a.N + b.N), dtype=complex)
        m[: a.N, : a.N] = ta
        m[a.N :, a.N :] = tb
        hops[n] = m
    return BlochModel(a.d, a.N + b.N, hops, name or f"{a.name}+{b.name}", {"parts": [a.params, b.params]})


def direct_sum_spec(a: SymmetrySpec, b: SymmetrySpec) -> SymmetrySpec:
    def cat(x, y):
        if x is None or y is None:
            return None
        out = np.zeros((x.shape[0] + y.shape[0],) * 2, dtype=complex)
        out[: x.shape[0], : x.shape[0]] = x
        out[x.shape[0] :, x.shape[0] :] = y
        return out

    return SymmetrySpec(cat(a.chiral, b.chiral), cat(a.trs, b.trs), cat(a.phs, b.phs))


def restrict(model: BlochModel, indices, name: str = "") -> BlochModel:
    """Compress every hopping matrix onto the fiber ``indices``."""
    idx = np.asarray(indices)
    hops = {n: t[np.ix_(idx, idx)] for n, t in model.hoppings.items()}
    return BlochModel(model.d, len(idx), hops, name or model.name + "|restricted", dict(model.params))


# JSON schema


def _matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def _matrix_from_json(obj, n: int, where: str) -> np.ndarray:
    try:
        if isinstance(obj, dict):
            re = np.asarray(obj["re"], dtype=float)
            im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
            m = re + 1j * im
        else:
            m = np.asarray(obj, dtype=float).astype(complex)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelSchemaError(f"{where}: malformed matrix ({exc})") from exc
    if m.shape != (n, n):
        raise ModelSchemaError(f"{where}: expected shape {(n, n)}, got {m.shape}")
    return m


def model_from_dict(data: dict) -> tuple:
    """Parse the JSON model schema into ``(BlochModel, SymmetrySpec)``."""
    if not isinstance(data, dict):
        raise ModelSchemaError("model file must hold a JSON object")
    for key, typ in (("name", str), ("d", int), ("N", int), ("hoppings", list)):
        if key not in data:
            raise ModelSchemaError(f"missing field '{key}'")
        if not isinstance(data[key], typ) or isinstance(data[key], bool):
            raise ModelSchemaError(f"field '{key}' must be {typ.__name__}")
    d, n = data["d"], data["N"]
    if d < 1 or n < 1:
        raise ModelSchemaError("d and N must be positive")
    hops = {}
    for i, entry in enumerate(data["hoppings"]):
        where = f"hoppings[{i}]"
        if not isinstance(entry, dict) or "n" not in entry or "re" not in entry:
            raise ModelSchemaError(f"{where}: needs 'n' and 're'")
        vec = entry["n"]
        if not isinstance(vec, list) or len(vec) != d or not all(isinstance(x, int) for x in vec):
            raise ModelSchemaError(f"{where}.n must be a list of {d} integers")
        mat = _matrix_from_json({"re": entry["re"], "im": entry.get("im", None) or np.zeros((n, n)).tolist()}, n, where)
        key = tuple(vec)
        hops[key] = hops.get(key, 0) + mat
    zero = tuple([0] * d)
    if zero in hops and norm(hops[zero] - dag(hops[zero])) > TOL_ALG:
        raise ModelSchemaError("on-site term t_0 is not self-adjoint")
    for key in list(hops):
        partner = tuple(-x for x in key)
        if partner in hops and key != partner and norm(hops[partner] - dag(hops[key])) > TOL_ALG:
            raise ModelSchemaError(f"t_{partner} != t_{key}^dagger")
    model = BlochModel.from_hoppings(d, n, hops, data["name"], data.get("params", {}))
    sym = data.get("symmetries", {}) or {}
    if not isinstance(sym, dict):
        raise ModelSchemaError("'symmetries' must be an object")
    unknown = set(sym) - {"chiral", "trs", "phs"}
    if unknown:
        raise ModelSchemaError(f"unknown symmetries {sorted(unknown)}")
    ops = {k: _matrix_from_json(v, n, f"symmetries.{k}") for k, v in sym.items() if v is not None}
    return model, SymmetrySpec(**ops)


def model_to_dict(model: BlochModel, spec: Optional[SymmetrySpec] = None) -> dict:
    hops = [
        {"n": list(n), **_matrix_to_json(t)} for n, t in sorted(model.hoppings.items())
    ]
    out = {"name": model.name, "d": model.d, "N": model.N, "hoppings": hops, "symmetries": {}}
    if spec is not None:
        for k in ("chiral", "trs", "phs"):
            op = getattr(spec, k)
            if op is not None:
                out["symmetries"][k] = _matrix_to_json(op)
    if model.params:
        out["params"] = json.loads(json.dumps(model.params, default=float))
    return out


def load_model(path) -> tuple:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelSchemaError(f"invalid JSON: {exc}") from exc
    return model_from_dict(data)


def save_model(path, model: BlochModel, spec: Optional[SymmetrySpec] = None) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_dict(model, spec), fh, indent=2, sort_keys=True)
        fh.write("\n")
