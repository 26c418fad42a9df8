"""Acceptance criteria, one test each, with tolerances and runtime limits.

Each test prints a single ``PASS``/``FAIL`` line (visible with ``pytest -s``
or in the captured output of a failing run).
"""

import itertools
import time

import numpy as np
import pytest

from tenfold._linalg import I2, SX, SY, SZ, kron, norm
from tenfold.classify import (
    InconsistentProfileError,
    SymmetryProfile,
    all_profiles,
    classify,
    inner_chiral_classify,
    rough_classify,
    strong_invariant_group,
)
from tenfold.clifford import eq_cl_certificate, h_times_cl_certificate, m2c_certificate, m2r_certificate
from tenfold.graded_real import (
    GradedRealAlgebra,
    cl1_extension,
    inner_conjugacy_witness,
    intertwining_residual,
    m2_standard,
    morita_psi_e,
    random_invariant_theta,
    relative_signs,
    sign_table_rows,
)
from tenfold.invariants import (
    chern_number,
    mod2_doubling_check,
    spin_chern_parity,
    winding_number,
    winding_of_family,
    z2_invariant,
)
from tenfold.models import build_kane_mele, build_qwz, build_ssh, evaluate, grid, kane_mele_block_residuals
from tenfold.vandaele import direct_sum, flatten, inverse_representative, rotation_homotopy


def verdict(number, title, checks, elapsed, limit):
    ok = all(checks.values()) and elapsed < limit
    failed = [k for k, v in checks.items() if not v]
    if elapsed >= limit:
        failed.append(f"runtime {elapsed:.2f}s >= {limit}s")
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({elapsed:.2f}s / {limit}s)"
    if failed:
        line += f" failed: {failed}"
    print(line)
    assert ok, line


def test_criterion_1_clifford_certificates():
    t0 = time.perf_counter()
    worst, checks = 0.0, {}
    for item in range(1, 7):
        c = h_times_cl_certificate(item)
        worst = max(worst, c.max_residual)
        checks[f"H(x)Cl item {item}"] = c.passed
    for r, s, r2, s2 in itertools.product(range(6), repeat=4):
        if r + s + r2 + s2 <= 5:
            c = eq_cl_certificate(r, s, r2, s2)
            worst = max(worst, c.max_residual)
            checks[f"Cl{r}{s} (x) Cl{r2}{s2}"] = c.passed
    for r, s in itertools.product(range(4), repeat=2):
        if r + s <= 3:
            c = m2r_certificate(r, s)
            worst = max(worst, c.max_residual)
            checks[f"M2R {r},{s}"] = c.passed
    for n in range(4):
        c = m2c_certificate(n)
        worst = max(worst, c.max_residual)
        checks[f"M2C {n}"] = c.passed
    checks["max residual < 1e-10"] = worst < 1e-10
    verdict(1, "Clifford certificates", checks, time.perf_counter() - t0, 5.0)


def test_criterion_2_sign_tables():
    t0 = time.perf_counter()
    expected_graded = [(1, 1), (1, -1), (-1, -1), (-1, 1)]
    expected_fp = [((1, 1), "l10"), ((1, 1), "l01"), ((-1, 1), "l10"), ((-1, 1), "l01")]
    rows = sign_table_rows()
    graded = [r for r in rows if r.extension is None]
    fp = [r for r in rows if r.extension is not None]
    checks = {"row counts": len(graded) == 4 and len(fp) == 4}
    for row, want in zip(graded, expected_graded):
        checks[f"graded {row.label}"] = relative_signs(row.algebra, row.theta).as_tuple() == want
    for row, (want, ext) in zip(fp, expected_fp):
        got = relative_signs(row.algebra, row.theta).as_tuple()
        checks[f"fp {row.label}"] = got == want and cl1_extension(row.algebra, row.theta) == ext
    verdict(2, "sign tables", checks, time.perf_counter() - t0, 1.0)


def test_criterion_3_conjugacy():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240611)
    alg = GradedRealAlgebra(4, kron(SZ, I2), None)
    worst, witnesses = 0.0, 0
    for _ in range(50):
        theta = random_invariant_theta(rng, alg)
        w = inner_conjugacy_witness(alg, theta)
        if not isinstance(w, str):
            witnesses += 1
            worst = max(worst, intertwining_residual(alg, theta, w))
    m2 = m2_standard()
    checks = {
        "50 witnesses": witnesses == 50,
        "residual < 1e-10": worst < 1e-10,
        "sigma_y obstructed": inner_conjugacy_witness(m2, SY) == "obstructed(-1,-1)",
        "sigma_x obstructed": inner_conjugacy_witness(m2, SX) == "obstructed(+1,-1)",
    }
    verdict(3, "conjugacy witnesses", checks, time.perf_counter() - t0, 5.0)


def test_criterion_4_morita():
    t0 = time.perf_counter()
    real = morita_psi_e(m2_standard(), SX)
    imag = morita_psi_e(m2_standard(SX), SX)
    checks = {
        "real grading case": real.passed and real.case == "2+/3+",
        "imaginary grading case": imag.passed and imag.case == "2-/3-",
        "U certified": all(k in real.checks for k in ("U_grading", "U_real")),
        "Psi and psi certified": all(k in imag.checks for k in ("Psi_grading", "psi_grading", "psi_real")),
    }
    verdict(4, "Morita machinery", checks, time.perf_counter() - t0, 2.0)


def test_criterion_5_classification():
    t0 = time.perf_counter()
    P = SymmetryProfile
    checks = {
        "rough none": rough_classify(P()).k_group == "KU_0(A)",
        "rough chiral": rough_classify(P(chiral=True)).k_group == "K_1(A,gamma)",
        "rough TRS": rough_classify(P(trs=1)).k_group == "KO_0(A^t)",
        "rough PHS": rough_classify(P(phs=1)).k_group == "KO_2(A^p)",
        "rough chiral TRS": rough_classify(P(chiral=True, trs=1, grading_reality=1)).k_group == "K_1(A^t,gamma)",
        "inner chiral complex": inner_chiral_classify(P(chiral=True)).degree == 1,
        "inner chiral real": inner_chiral_classify(P(chiral=True, trs=1, grading_reality=1)).degree == 1,
        "inner chiral imaginary": inner_chiral_classify(P(chiral=True, trs=1, grading_reality=-1)).degree == 7,
    }
    one_real = {("trs", 1): 0, ("trs", -1): 4, ("phs", 1): 2, ("phs", -1): 6}
    for (kind, par), deg in one_real.items():
        d = classify(P(**{kind: par}))
        checks[f"{kind} {par:+d}"] = (d.k_functor, d.degree) == ("real", deg)
    balanced = {(1, 1): 1, (1, -1): 7, (-1, -1): 3, (-1, 1): 5}
    for (par, real), deg in balanced.items():
        d = classify(P(chiral=True, trs=par, grading_reality=real))
        checks[f"chiral TRS {par:+d} {real:+d}"] = d.degree == deg and d.profile.phs == par * real
    checks["none"] = (classify(P()).k_functor, classify(P()).degree) == ("complex", 0)
    checks["chiral"] = (classify(P(chiral=True)).k_functor, classify(P(chiral=True)).degree) == ("complex", 1)
    checks["total on ten"] = len({classify(p).cartan_label for p in all_profiles()}) == 10
    try:
        classify(P(trs=1, phs=1, grading_reality=-1))
        checks["rejects inconsistent"] = False
    except InconsistentProfileError:
        checks["rejects inconsistent"] = True
    checks["TRS odd d=2 is Z2"] = strong_invariant_group(classify(P(trs=-1)), 2).kind == "Z2"
    verdict(5, "classification lookups", checks, time.perf_counter() - t0, 1.0)


def test_criterion_6_integer_invariants():
    t0 = time.perf_counter()
    top = winding_number(*build_ssh(0.0, 1.0), grid_size=256)
    triv = winding_number(*build_ssh(1.0, 0.0), grid_size=256)
    q1 = chern_number(build_qwz(-1.0)[0], 24)
    q3 = chern_number(build_qwz(-3.0)[0], 24)
    km, km_spec = build_kane_mele(1.0, 0.1, 0.0, 0.0)
    z_top = z2_invariant(km, km_spec)
    spin = spin_chern_parity(km)
    z_triv = z2_invariant(*build_kane_mele(1.0, 0.0, 0.0, 0.5))
    checks = {
        "SSH(0,1) winding +-1": abs(top.value) == 1 and top.residual < 1e-6,
        "SSH(1,0) winding 0": triv.value == 0 and triv.residual < 1e-6,
        "QWZ(-1) Chern 1 at 24 and 48": q1.convergence == [(24, 1), (48, 1)],
        "QWZ(-3) Chern 0 at 24 and 48": q3.convergence == [(24, 0), (48, 0)],
        "Kane-Mele Z2 1": z_top.value == 1,
        "spin Chern parity agrees": spin.value == z_top.value,
        "trivial Kane-Mele Z2 0": z_triv.value == 0,
    }
    verdict(6, "integer invariants", checks, time.perf_counter() - t0, 30.0)


def test_criterion_7_van_daele():
    t0 = time.perf_counter()
    m2 = GradedRealAlgebra(2, SZ, None)
    to_e2, to_minus = rotation_homotopy(SX, SY, m2)
    fam = {vw: flatten(evaluate(build_ssh(*vw)[0], grid(1, 256))) for vw in [(0.2, 1.0), (0.5, 1.4), (1.0, 0.3)]}
    neg_ok, add_ok = True, True
    for x in fam.values():
        a, _ = winding_of_family(x, SX, SZ)
        b, _ = winding_of_family(inverse_representative(x, SX), SX, SZ)
        neg_ok &= b == -a
    for x, y in itertools.combinations(fam.values(), 2):
        s, _ = winding_of_family(direct_sum(x, y), kron(I2, SX), kron(I2, SZ))
        add_ok &= s == winding_of_family(x, SX, SZ)[0] + winding_of_family(y, SX, SZ)[0]
    dbl = mod2_doubling_check(*build_kane_mele(1.0, 0.1, 0.0, 0.0))
    checks = {
        "rotation path valid": to_e2.valid and to_minus.valid and norm(to_minus.target + SX) < 1e-12,
        "winding negation": neg_ok,
        "winding additivity": add_ok,
        "doubled Kane-Mele Z2 0": dbl["z2_single"] == 1 and dbl["z2_sum"] == 0,
    }
    verdict(7, "Van Daele properties", checks, time.perf_counter() - t0, 20.0)


def test_criterion_8_kane_mele_blocks():
    t0 = time.perf_counter()
    checks = {}
    for args in [(1.0, 0.1, 0.0, 0.0), (1.0, 0.1, 0.05, 0.0), (1.0, 0.2, 0.3, 0.4)]:
        res = kane_mele_block_residuals(build_kane_mele(*args)[0], grid_size=32)
        checks[f"KM{args}"] = max(res.values()) < 1e-10
    verdict(8, "Kane-Mele block relations", checks, time.perf_counter() - t0, 2.0)
