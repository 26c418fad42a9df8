"""Strong invariants of gapped Bloch models: 1D winding, 2D Chern number, 2D Z2.

Berry connection convention: ``A = i <u|du>``, so a link phase ``arg det(U_j^dagger
U_{j+1})`` is ``-A dk`` and the Chern number is minus the plaquette phase sum
over ``2 pi``. Winding numbers use the counter-clockwise orientation of
``det q(k)`` with ``q = Pi_+ e h Pi_+``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from pfapack import pfaffian as _pf
from scipy.linalg import polar, schur

from ._linalg import TOL_GAP, dag, norm
from .models import BlochModel, SymmetrySpec, direct_sum, direct_sum_spec, evaluate, grid, restrict
from .vandaele import GapError, default_basepoint, flatten, q_map

DEFAULT_GRID = {"winding": 256, "chern": 24, "z2": 64}


class InvariantError(ValueError):
    """Invariant is not applicable or could not be certified."""


class ConvergenceError(InvariantError):
    pass


class BranchError(InvariantError):
    """Square-root branch of ``det w`` jumped along the tracking path."""


@dataclass
class InvariantReport:
    """Integer invariant with its numerical certificate.

    Attributes
    ----------
    kind : str
        ``"winding"``, ``"chern"`` or ``"z2"``.
    value : int
    grid : int
        Resolution of the reported value.
    gap_certificate : float
        Minimum of ``|eigenvalue|`` over the sampled points.
    convergence : list of (grid, value)
        Values at two resolutions.
    residual : float
        Distance of the raw value from the reported integer (or from ``+-1``
        for the Pfaffian ratios).
    """

    kind: str
    value: int
    grid: int
    gap_certificate: float
    convergence: list
    residual: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def stable(self) -> bool:
        return len({v for _, v in self.convergence}) == 1

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "value": int(self.value),
            "grid": int(self.grid),
            "gap_certificate": float(self.gap_certificate),
            "convergence": [[int(g), int(v)] for g, v in self.convergence],
            "stable": self.stable,
            "residual": float(self.residual),
            "details": self.details,
        }


def _min_gap(h: np.ndarray) -> float:
    return float(np.min(np.abs(np.linalg.eigvalsh(h))))


def _require_gap(h: np.ndarray, tol_gap: float) -> float:
    g = _min_gap(h)
    if g <= tol_gap:
        raise GapError(f"gap {g:.3e} below tolerance {tol_gap:.1e}", None, g)
    return g


def _occupied(h: np.ndarray) -> np.ndarray:
    """Frames of negative-energy eigenvectors, shape ``(..., N, n_occ)``."""
    w, v = np.linalg.eigh(h)
    counts = np.sum(w < 0, axis=-1)
    n = int(counts.flat[0])
    if np.any(counts != n):
        raise GapError("number of occupied bands varies over the grid", None, 0.0)
    return v[..., :n]


# winding


def winding_of_family(x: np.ndarray, e: np.ndarray, gamma: np.ndarray) -> tuple:
    """Winding of ``det Q_e(x(k))`` for a closed loop of flat odd matrices.

    Parameters
    ----------
    x : ndarray, shape (M, N, N)
        Odd self-adjoint unitaries sampled at ``k = j / M``.

    Returns
    -------
    (value, residual) : (int, float)
    """
    q = q_map(x, e, gamma)
    det = np.linalg.det(q)
    steps = np.angle(np.roll(det, -1) / det)
    raw = float(np.sum(steps)) / (2 * np.pi)
    w = int(round(raw))
    return w, abs(raw - w)


def winding_number(
    model: BlochModel,
    spec: SymmetrySpec,
    grid_size: int = DEFAULT_GRID["winding"],
    e: Optional[np.ndarray] = None,
    tol_gap: float = TOL_GAP,
) -> InvariantReport:
    """Winding number of a 1D chiral model.

    ``h(k)`` is flattened, compressed to ``q(k) = V_+^dagger e sgn(h) V_+`` and
    the phase increments of ``det q`` are summed around the circle.
    """
    if model.d != 1:
        raise InvariantError("winding number needs d = 1")
    if spec.chiral is None:
        raise InvariantError("winding number needs a chiral symmetry")
    gamma = spec.chiral
    if e is None:
        e = default_basepoint(gamma)
    conv, gaps, residuals = [], [], []
    for n in (grid_size, 2 * grid_size):
        h = evaluate(model, grid(1, n))
        gaps.append(_require_gap(h, tol_gap))
        w, res = winding_of_family(flatten(h, tol_gap), e, gamma)
        if res > 0.1:
            raise ConvergenceError(f"winding not integral (residual {res:.3f})")
        conv.append((n, w))
        residuals.append(res)
    return InvariantReport("winding", conv[0][1], grid_size, min(gaps), conv, residuals[0])


# Chern number


def _link(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``det(a^dagger b)`` over stacked frames."""
    return np.linalg.det(dag(a) @ b)


def plaquette_phases(frames: np.ndarray) -> np.ndarray:
    """Principal plaquette phases of a periodic ``(n, n, N, n_occ)`` frame grid."""
    u00 = frames
    u10 = np.roll(frames, -1, axis=0)
    u11 = np.roll(u10, -1, axis=1)
    u01 = np.roll(frames, -1, axis=1)
    loop = _link(u00, u10) * _link(u10, u11) * _link(u11, u01) * _link(u01, u00)
    return np.angle(loop)


def _chern_at(model: BlochModel, n: int, tol_gap: float) -> tuple:
    h = evaluate(model, grid(2, n))
    g = _require_gap(h, tol_gap)
    f = plaquette_phases(_occupied(h))
    raw = -float(np.sum(f)) / (2 * np.pi)
    return int(round(raw)), abs(raw - round(raw)), g


def chern_number(model: BlochModel, grid_size: int = DEFAULT_GRID["chern"], tol_gap: float = TOL_GAP) -> InvariantReport:
    """Chern number of the occupied bands by plaquette field strengths.

    Values at ``grid_size`` and ``2 grid_size`` are compared; on disagreement
    the resolution is doubled once more before giving up.
    """
    if model.d != 2:
        raise InvariantError("Chern number needs d = 2")
    n = grid_size
    c1, r1, g1 = _chern_at(model, n, tol_gap)
    c2, r2, g2 = _chern_at(model, 2 * n, tol_gap)
    conv = [(n, c1), (2 * n, c2)]
    if c1 != c2:
        c3, r3, g3 = _chern_at(model, 4 * n, tol_gap)
        if c3 != c2:
            raise ConvergenceError(f"Chern number unstable under refinement: {c1}, {c2}, {c3}")
        n, c1, r1, g1, conv = 2 * n, c2, r2, g2, [(2 * n, c2), (4 * n, c3)]
    if max(r1, r2) > 1e-6:
        raise ConvergenceError("plaquette sum not integral")
    return InvariantReport("chern", c1, n, min(g1, g2), conv, r1)


# Z2 via sewing-matrix Pfaffians


def _transport_line(frames: np.ndarray) -> tuple:
    """Parallel transport along a closed line, then spread the holonomy.

    Returns the periodic smooth gauge and its unwrapped link phase sum.
    """
    m = frames.shape[0]
    out = frames.copy()
    for j in range(1, m):
        ov = dag(out[j]) @ out[j - 1]
        u, _ = polar(ov)
        out[j] = out[j] @ u
    # one more step lands on frames[0] @ hol
    hol = polar(dag(frames[0]) @ out[m - 1])[0]
    t, z = schur(hol, output="complex")
    angles = np.angle(np.diag(t))
    for j in range(m):
        out[j] = out[j] @ (z * np.exp(-1j * (j / m) * angles)) @ dag(z)
    phase = float(np.sum(np.angle(_link(out, np.roll(out, -1, axis=0)))))
    return out, phase


def _track_sqrt(dets: np.ndarray) -> np.ndarray:
    out = np.empty_like(dets)
    out[0] = np.sqrt(dets[0])
    for j in range(1, len(dets)):
        r = np.sqrt(dets[j])
        a, b = abs(r - out[j - 1]), abs(r + out[j - 1])
        out[j] = r if a <= b else -r
        if min(a, b) > 0.5:
            raise BranchError(f"sqrt det w jumps by {min(a, b):.3f} at step {j}; refine the grid")
    return out


def _sewing(frames: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """``w(k_j) = U(-k_j)^dagger Theta conj(U(k_j))`` along a line of ``M`` points."""
    m = frames.shape[0]
    minus = frames[(-np.arange(m)) % m]
    return dag(minus) @ theta @ frames.conj()


def _line_deltas(frames: np.ndarray, theta: np.ndarray) -> tuple:
    m = frames.shape[0]
    w = _sewing(frames, theta)
    half = m // 2
    root = _track_sqrt(np.linalg.det(w[: half + 1]))
    deltas, resid = [], 0.0
    for j in (0, half):
        wj = w[j]
        resid = max(resid, norm(wj + wj.T))
        pf = _pf.pfaffian(0.5 * (wj - wj.T))
        deltas.append(pf / root[j])
    return deltas, resid


def z2_invariant(
    model: BlochModel,
    spec: SymmetrySpec,
    grid_size: int = DEFAULT_GRID["z2"],
    tol_gap: float = TOL_GAP,
    _check: bool = True,
) -> InvariantReport:
    """Time-reversal Z2 invariant of a 2D model with odd TRS.

    The occupied frames on the lines ``ky = 0`` and ``ky = 1/2`` are put in
    periodic smooth gauges; their relative winding is fixed so that the
    difference of line Berry phases equals the plaquette flux of the half
    torus between them. The sewing matrices at the four TRIM are then
    compared through ``Pf(w) / sqrt(det w)`` with the square root continued
    along each line.
    """
    if model.d != 2:
        raise InvariantError("Z2 invariant needs d = 2")
    if spec.trs is None:
        raise InvariantError("Z2 invariant needs time-reversal symmetry")
    theta = spec.trs
    if norm(theta @ theta.conj() + np.eye(theta.shape[0])) > 1e-8:
        raise InvariantError("Z2 invariant needs odd time reversal (Theta conj(Theta) = -1)")
    conv, info = [], []
    for n in (grid_size, 2 * grid_size):
        if n % 2:
            raise ValueError("grid size must be even")
        val, det = _z2_at(model, theta, n, tol_gap)
        conv.append((n, val))
        info.append(det)
    if conv[0][1] != conv[1][1]:
        raise ConvergenceError(f"Z2 unstable under refinement: {conv}")
    d = info[0]
    return InvariantReport("z2", conv[0][1], grid_size, d.pop("gap"), conv, d["delta_residual"], d)


def _z2_at(model: BlochModel, theta: np.ndarray, n: int, tol_gap: float) -> tuple:
    h = evaluate(model, grid(2, n))
    gap = _require_gap(h, tol_gap)
    frames = _occupied(h)
    if frames.shape[-1] % 2:
        raise InvariantError("odd number of occupied bands under odd time reversal")
    half = n // 2
    flux = -float(np.sum(plaquette_phases(frames)[:, :half]))
    # flux here is minus the half-torus plaquette sum, i.e. the Berry flux
    bottom, phi0 = _transport_line(frames[:, 0])
    top, phi1 = _transport_line(frames[:, half])
    shift = int(round((phi0 - phi1 + flux) / (2 * np.pi)))
    if shift:
        top = top.copy()
        top[:, :, 0] *= np.exp(2j * np.pi * shift * np.arange(n) / n)[:, None]
    d0, r0 = _line_deltas(bottom, theta)
    d1, r1 = _line_deltas(top, theta)
    deltas = np.array(d0 + d1)
    prod = complex(np.prod(deltas))
    sign = 1 if prod.real > 0 else -1
    resid = float(max(np.max(np.abs(np.abs(deltas) - 1)), abs(prod - sign), r0 / 10, r1 / 10))
    if abs(prod - sign) > 1e-3 or max(r0, r1) > 1e-6:
        raise BranchError(f"Pfaffian ratio not +-1: product {prod:.4f}")
    value = 0 if sign == 1 else 1
    details = {
        "deltas": [int(round(x.real)) for x in deltas],
        "gauge_shift": shift,
        "delta_residual": resid,
        "gap": gap,
    }
    return value, details


def spin_chern_parity(
    model: BlochModel,
    block: Optional[Sequence[int]] = None,
    grid_size: int = DEFAULT_GRID["chern"],
    tol: float = 1e-10,
) -> InvariantReport:
    """Chern number of a decoupled spin block, mod 2.

    ``block`` defaults to the first half of the fiber (spin up in the
    spin-outer ordering). The block must decouple from its complement.
    """
    n = model.N
    idx = np.arange(n // 2) if block is None else np.asarray(block)
    rest = np.setdiff1d(np.arange(n), idx)
    off = max((norm(t[np.ix_(idx, rest)]) for t in model.hoppings.values()), default=0.0)
    if off > tol:
        raise InvariantError(f"spin block is coupled (residual {off:.2e})")
    rep = chern_number(restrict(model, idx), grid_size)
    return InvariantReport(
        "spin_chern_parity", rep.value % 2, rep.grid, rep.gap_certificate,
        [(g, v % 2) for g, v in rep.convergence], rep.residual, {"block_chern": rep.value},
    )


def mod2_doubling_check(model: BlochModel, spec: SymmetrySpec, other: Optional[tuple] = None, grid_size: int = DEFAULT_GRID["z2"]) -> dict:
    """Z2 of ``model (+) model`` (or ``model (+) other``) beside the single-copy value.

    When the spin block decouples, the block Chern number is reported for both:
    doubling kills the real class but the complex block datum doubles.
    """
    om, os_ = (model, spec) if other is None else other
    total = direct_sum(model, om)
    tspec = direct_sum_spec(spec, os_)
    single = z2_invariant(model, spec, grid_size)
    summed = z2_invariant(total, tspec, grid_size)
    out = {"z2_single": single.value, "z2_sum": summed.value, "z2_expected": (single.value + z2_invariant(om, os_, grid_size).value) % 2}
    try:
        k = model.N // 2
        ko = om.N // 2
        up = list(range(k)) + [model.N + i for i in range(ko)]
        out["block_chern_single"] = spin_chern_parity(model).details["block_chern"]
        out["block_chern_sum"] = spin_chern_parity(total, up).details["block_chern"]
    except InvariantError:
        pass
    return out


# homotopy sweeps


def sweep(models: Sequence[tuple], kind: str, gap_grid: int = 32, tol_gap: float = 1e-3, **kw) -> dict:
    """Gap certificate along a sampled path of ``(model, spec)`` pairs and endpoint invariants.

    The path is accepted when every sample keeps a gap above ``tol_gap``;
    then the invariant of ``kind`` must agree at both ends.
    """
    from .models import gap

    gaps = [gap(m, gap_grid)[0] for m, _ in models]
    fn = {"winding": winding_number, "chern": lambda m, s, **k: chern_number(m, **k), "z2": z2_invariant}[kind]
    ends = [fn(*models[0], **kw).value, fn(*models[-1], **kw).value]
    return {
        "min_gap": float(min(gaps)),
        "gapped": bool(min(gaps) > tol_gap),
        "endpoints": ends,
        "agree": ends[0] == ends[1],
    }
