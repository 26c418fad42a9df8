"""Command-line entry point.

Exit codes: 0 success, 1 schema error, 2 symmetry inconsistency or invariant
not applicable, 3 gap failure, 4 failed certificate (convergence, branch or
verification suite).
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import sys
import warnings

import numpy as np
import scipy

from . import __version__
from ._linalg import TOL_ALG, TOL_GAP, kron, I2, SX, SY, SZ
from .classify import (
    InconsistentProfileError,
    classify,
    ko_point_from_modules,
    KO_POINT,
    profile_from_fp,
    profile_from_signs,
    profile_from_spec,
    clifford_degree,
    strong_invariant_group,
)
from .clifford import (
    eq_cl_certificate,
    h_times_cl_certificate,
    m2c_certificate,
    m2r_certificate,
    species,
    species_from_model,
)
from .graded_real import (
    GradedRealAlgebra,
    cl1_extension,
    inner_conjugacy_witness,
    intertwining_residual,
    m2_standard,
    morita_psi_e,
    parity_configurations,
    random_invariant_theta,
    relative_signs,
    sign_table_rows,
)
from .invariants import DEFAULT_GRID, InvariantError, chern_number, winding_number, winding_of_family, z2_invariant
from .models import BUILDERS, ModelSchemaError, gap, grid, load_model, evaluate, model_to_dict, verify_symmetries
from .vandaele import GapError, bl_examples, bl_representative, flatten, flatten_witness, inverse_representative, rotation_homotopy

EXIT_OK, EXIT_SCHEMA, EXIT_SYMMETRY, EXIT_GAP, EXIT_CERT = 0, 1, 2, 3, 4


def _header(args, command: str, digest=None) -> dict:
    return {
        "tool": "tenfold",
        "command": command,
        "versions": {"tenfold": __version__, "numpy": np.__version__, "scipy": scipy.__version__},
        "seed": args.seed,
        "tolerances": {"alg": args.tol_alg, "gap": args.tol_gap},
        "input": digest,
    }


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, default=_jsonable)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, complex):
        return [x.real, x.imag]
    raise TypeError(f"not serializable: {type(x)}")


def _load(args):
    try:
        with open(args.model, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ModelSchemaError(f"cannot read model file: {exc}") from exc
    digest = {"path": args.model, "sha256": hashlib.sha256(raw).hexdigest()}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        model, spec = load_model(args.model)
    notes = [str(w.message) for w in caught]
    return model, spec, digest, notes


def _verified_class(model, spec, args, report):
    """Symmetry residuals, profile and class; returns an exit code or the descriptor."""
    grid_size = args.grid if args.grid else None
    sym = verify_symmetries(model, spec, grid_size)
    report["symmetries"] = {**sym.to_dict(), "tol": args.tol_alg}
    bad = {k: v for k, v in sym.residuals.items() if not v < args.tol_alg}
    if bad or sym.commutation:
        report["error"] = f"declared symmetries violated: {sorted(bad) + sorted(sym.commutation)}"
        return EXIT_SYMMETRY
    try:
        profile = profile_from_spec(spec)
    except InconsistentProfileError as exc:
        report["error"] = str(exc)
        return EXIT_SYMMETRY
    desc = classify(profile)
    group = strong_invariant_group(desc, model.d)
    report["classification"] = {**desc.to_dict(), "d": model.d, "strong_invariant_group": group.kind}
    return desc, group


def cmd_classify(args) -> int:
    try:
        model, spec, digest, notes = _load(args)
    except ModelSchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    report = _header(args, "classify", digest)
    if notes:
        report["warnings"] = notes
    out = _verified_class(model, spec, args, report)
    if isinstance(out, int):
        _emit(report, args)
        return out
    g, k = gap(model, args.grid or (64 if model.d == 1 else 32))
    report["gap"] = {"min": g, "at": list(k), "tol": args.tol_gap}
    _emit(report, args)
    return EXIT_OK if g > args.tol_gap else EXIT_GAP


def _applicable(kind: str, model, desc, group) -> str:
    if kind == "winding":
        ok = model.d == 1 and desc.profile.chiral and group.kind == "Z"
    elif kind == "chern":
        ok = model.d == 2 and desc.cartan_label in ("A", "D", "C")
    else:
        ok = model.d == 2 and desc.cartan_label in ("AII", "DIII")
    return "" if ok else f"{kind} not applicable to class {desc.cartan_label} in d={model.d}"


def cmd_invariant(args) -> int:
    try:
        model, spec, digest, notes = _load(args)
    except ModelSchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    report = _header(args, "invariant", digest)
    out = _verified_class(model, spec, args, report)
    if isinstance(out, int):
        _emit(report, args)
        return out
    desc, group = out
    why = _applicable(args.kind, model, desc, group)
    if why:
        report["error"] = why
        _emit(report, args)
        return EXIT_SYMMETRY
    n = args.grid or DEFAULT_GRID[args.kind]
    try:
        if args.kind == "winding":
            rep = winding_number(model, spec, n, tol_gap=args.tol_gap)
        elif args.kind == "chern":
            rep = chern_number(model, n, tol_gap=args.tol_gap)
        else:
            rep = z2_invariant(model, spec, n, tol_gap=args.tol_gap)
    except GapError as exc:
        report["error"] = f"gap failure: {exc}"
        _emit(report, args)
        return EXIT_GAP
    except InvariantError as exc:
        report["error"] = str(exc)
        _emit(report, args)
        return EXIT_CERT
    report["invariant"] = rep.to_dict()
    _emit(report, args)
    return EXIT_OK


def cmd_flatten(args) -> int:
    try:
        model, spec, digest, notes = _load(args)
    except ModelSchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    report = _header(args, "flatten", digest)
    n = args.grid or 8
    ks = grid(model.d, n).reshape(-1, model.d)
    try:
        flat = flatten(evaluate(model, ks), args.tol_gap)
    except GapError as exc:
        report["error"] = f"gap failure: {exc}"
        _emit(report, args)
        return EXIT_GAP
    report["samples"] = [
        {"k": k.tolist(), "re": np.round(f.real, 12).tolist(), "im": np.round(f.imag, 12).tolist()}
        for k, f in zip(ks, flat)
    ]
    _emit(report, args)
    return EXIT_OK


def cmd_build(args) -> int:
    fn, names = BUILDERS[args.name]
    values = dict(zip(names, args.params))
    if len(args.params) != len(names):
        print(f"{args.name} needs parameters {names}", file=sys.stderr)
        return EXIT_SCHEMA
    model, spec = fn(**values)
    text = json.dumps(model_to_dict(model, spec), indent=2, sort_keys=True, default=_jsonable)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


# verification suites


def _entry(name, residual, passed, **extra) -> dict:
    return {"name": name, "residual": float(residual), "passed": bool(passed), **extra}


def suite_clifford(rng, tol) -> list:
    out = []
    for item in range(1, 7):
        c = h_times_cl_certificate(item)
        out.append(_entry(f"H(x)Cl item {item}", c.max_residual, c.passed and c.max_residual < tol))
    for r, s, r2, s2 in itertools.product(range(6), repeat=4):
        if r + s + r2 + s2 <= 5:
            c = eq_cl_certificate(r, s, r2, s2)
            out.append(_entry(f"Cl{r}{s} (x) Cl{r2}{s2}", c.max_residual, c.passed and c.max_residual < tol))
    for r, s in itertools.product(range(4), repeat=2):
        if r + s <= 3:
            c = m2r_certificate(r, s)
            out.append(_entry(f"M2(R) (x) Cl{r}{s}", c.max_residual, c.passed and c.max_residual < tol))
    for n in range(4):
        c = m2c_certificate(n)
        out.append(_entry(f"M2(C) (x) Cl_{n}", c.max_residual, c.passed and c.max_residual < tol))
    for r, s in itertools.product(range(7), repeat=2):
        if r + s <= 6:
            a, b = species(r, s), species_from_model(r, s)
            out.append(_entry(f"species Cl{r}{s} = {a}", 0.0 if a == b else 1.0, a == b))
    ko = ko_point_from_modules()
    out.append(_entry("KO(point) from module counting", 0.0, tuple(ko) == KO_POINT, groups=ko))
    return out


def suite_signs(rng, tol) -> list:
    out = []
    for row in sign_table_rows():
        ref = row.algebra.with_theta(np.eye(row.algebra.n))
        s = relative_signs(ref, row.theta).as_tuple()
        if row.extension:
            ext = cl1_extension(ref, row.theta)
            deg = classify(profile_from_fp(s[0], ext)).degree
            ok = s[0] == row.signs[0] and ext == row.extension
        else:
            deg = classify(profile_from_signs(*s)).degree
            ok = s == row.signs
        ok = ok and deg == clifford_degree(*row.clifford)
        out.append(_entry(f"{row.algebra.name} {row.label}", 0.0, ok, signs=list(s), degree=deg))
    alg = GradedRealAlgebra(4, kron(SZ, I2), np.eye(4), name="M4")
    worst = 0.0
    for _ in range(50):
        th = random_invariant_theta(rng, alg)
        w = inner_conjugacy_witness(alg, th)
        worst = max(worst, intertwining_residual(alg, th, w))
    out.append(_entry("inner conjugacy witnesses x50", worst, worst < tol))
    for name, th, tag in (("sigma_y", SY, "obstructed(-1,-1)"), ("sigma_x", SX, "obstructed(+1,-1)")):
        got = inner_conjugacy_witness(m2_standard(), th)
        out.append(_entry(f"obstruction {name}", 0.0, isinstance(got, str) and got == tag, tag=str(got)))
    recs = parity_configurations()
    out.append(_entry("parity product rule", 0.0, all(r.parity_p == r.predicted for r in recs), count=len(recs)))
    return out


def suite_morita(rng, tol) -> list:
    out = []
    for label, theta in (("f", I2), ("Ad_sx f", SX)):
        rep = morita_psi_e(m2_standard(theta), SX)
        worst = max(rep.checks.values())
        out.append(_entry(f"Morita (M2, sz, {label}) case {rep.case}", worst, rep.passed and worst < tol))
    return out


def suite_vandaele(rng, tol) -> list:
    from .models import build_ssh

    out = []
    alg4 = GradedRealAlgebra(4, kron(SZ, I2), None)
    w1, w2 = rotation_homotopy(kron(SX, I2), kron(SY, SZ), alg4)
    out.append(_entry("rotation path e1 -> e2", w1.validity["max_residual"], w1.valid))
    out.append(_entry("rotation path e1 -> -e1", w2.validity["max_residual"], w2.valid))
    h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    fw = flatten_witness(h + h.conj().T)
    out.append(_entry("flattening path gapped", 0.0, fw["min_path_gap"] >= fw["bound"] - 1e-12))
    alg = m2_standard()
    for deg, u in bl_examples(alg).items():
        try:
            rep = bl_representative(deg, u, alg)
        except ValueError as exc:
            out.append(_entry(f"unitary representative degree {deg}", 1.0, False, error=str(exc)))
            continue
        out.append(_entry(f"unitary representative degree {deg}", max(rep.residuals.values()), True, condition=rep.condition))
    gamma, e = SZ, SX
    for v, w in rng.uniform(-1.5, 1.5, size=(4, 2)):
        if abs(abs(v) - abs(w)) < 0.1:
            continue
        fam = flatten(evaluate(build_ssh(v, w)[0], grid(1, 128)))
        n, _ = winding_of_family(fam, e, gamma)
        neg, _ = winding_of_family(inverse_representative(fam, e), e, gamma)
        big = np.zeros((128, 4, 4), dtype=complex)
        big[:, :2, :2] = fam
        big[:, 2:, 2:] = fam
        dbl, _ = winding_of_family(big, np.kron(I2, e), np.kron(I2, gamma))
        out.append(_entry(f"winding laws SSH({v:.3f},{w:.3f})", 0.0, neg == -n and dbl == 2 * n, winding=n))
    return out


SUITES = {"clifford": suite_clifford, "signs": suite_signs, "morita": suite_morita, "vandaele": suite_vandaele}


def cmd_verify(args) -> int:
    report = _header(args, "verify")
    names = list(SUITES) if args.suite == "all" else [args.suite]
    rng = np.random.default_rng(args.seed)
    failed = 0
    report["suites"] = {}
    for name in names:
        entries = SUITES[name](rng, args.tol_alg)
        bad = sum(not e["passed"] for e in entries)
        failed += bad
        report["suites"][name] = {"entries": entries, "passed": len(entries) - bad, "total": len(entries)}
    report["passed"] = failed == 0
    _emit(report, args)
    return EXIT_OK if failed == 0 else EXIT_CERT


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=None, help="grid points per axis")
    common.add_argument("--tol-alg", type=float, default=TOL_ALG)
    common.add_argument("--tol-gap", type=float, default=TOL_GAP)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json-out", metavar="PATH", default=None)

    p = argparse.ArgumentParser(prog="tenfold", description="Classification and invariants of gapped Bloch models.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("classify", parents=[common], help="verify symmetries and classify a model")
    c.add_argument("model")
    c.set_defaults(func=cmd_classify)
    i = sub.add_parser("invariant", parents=[common], help="compute a strong invariant")
    i.add_argument("model")
    i.add_argument("--kind", choices=("winding", "chern", "z2"), required=True)
    i.set_defaults(func=cmd_invariant)
    v = sub.add_parser("verify", parents=[common], help="run certificate suites")
    v.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    v.set_defaults(func=cmd_verify)
    f = sub.add_parser("flatten", parents=[common], help="dump sgn(h) on a grid")
    f.add_argument("model")
    f.set_defaults(func=cmd_flatten)
    b = sub.add_parser("build", parents=[common], help="write a builder model as JSON")
    b.add_argument("name", choices=sorted(BUILDERS))
    b.add_argument("params", type=float, nargs="*")
    b.set_defaults(func=cmd_build)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
