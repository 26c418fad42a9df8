import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import unitary_group

from tenfold._linalg import I2, SX, SY, SZ, dag, kron, norm
from tenfold.clifford import build_clifford, inner_grading_check
from tenfold.graded_real import (
    GradedRealAlgebra,
    SignPair,
    cl1_extension,
    eq_u,
    inner_conjugacy_witness,
    intertwining_residual,
    invariant_generator,
    m2_standard,
    morita_psi_e,
    order_two_check,
    parity_configurations,
    phi,
    quaternions,
    random_invariant_theta,
    relative_algebra,
    relative_signs,
    sign_table_rows,
    sqrt_unitary,
)

M2 = GradedRealAlgebra(2, SZ, None)
M4 = GradedRealAlgebra(4, kron(I2, SZ), None)


class TestAlgebra:
    def test_rejects_bad_grading(self):
        with pytest.raises(ValueError):
            GradedRealAlgebra(2, 2 * SZ)

    def test_rejects_non_order_two_theta(self):
        with pytest.raises(ValueError):
            GradedRealAlgebra(2, None, np.diag([1, np.exp(1j * np.pi / 3)]) @ SX)

    def test_rejects_inhomogeneous_theta(self):
        with pytest.raises(ValueError):
            GradedRealAlgebra(2, SZ, (SX + SZ) / np.sqrt(2))

    def test_parity_and_reality(self):
        m = m2_standard()
        assert m.is_reference and m.parity == 1 and m.grading_reality == 1
        assert quaternions().parity == -1
        assert m2_standard(SX).grading_reality == -1


class TestPhi:
    def test_sx(self):
        assert norm(phi(m2_standard(), "R", SX) - I2) < 1e-12

    def test_sy(self):
        assert norm(phi(m2_standard(), "R", SY) + I2) < 1e-12

    @given(st.floats(0, 2 * np.pi))
    def test_unit_scalar_cancels(self, t):
        lam = np.exp(1j * t)
        a = m2_standard()
        assert norm(phi(a, "R", lam * SX) - phi(a, "R", SX)) < 1e-12

    def test_linear_variants(self):
        a = m2_standard()
        assert norm(phi(a, "gamma", SX) + I2) < 1e-12
        assert norm(phi(a, "gamma*", SZ) - I2) < 1e-12

    def test_non_unitary(self):
        with pytest.raises(ValueError):
            phi(m2_standard(), "R", 2 * SX)

    def test_unknown_structure(self):
        with pytest.raises(ValueError):
            phi(m2_standard(), "Q", SX)


class TestRelativeSigns:
    @pytest.mark.parametrize(
        "alg,theta,expected",
        [
            (M2, I2, (1, 1)),
            (M2, SX, (1, -1)),
            (M2, SY, (-1, -1)),
            (M4, kron(SY, I2), (-1, 1)),
        ],
    )
    def test_graded_rows(self, alg, theta, expected):
        assert relative_signs(alg, theta).as_tuple() == expected

    @given(st.floats(0, 2 * np.pi), st.sampled_from(["I", "X", "Y"]))
    def test_scalar_gauge_invariance(self, t, which):
        theta = {"I": I2, "X": SX, "Y": SY}[which]
        lam = np.exp(1j * t)
        assert relative_signs(M2, lam * theta) == relative_signs(M2, theta)

    def test_inhomogeneous(self):
        with pytest.raises(ValueError):
            relative_signs(M2, (SX + SZ) / np.sqrt(2))

    def test_sign_pair_validation(self):
        with pytest.raises(ValueError):
            SignPair(1, 0)
        assert str(SignPair(1, -1)) == "(+1,-1)"


class TestSqrtUnitary:
    def test_diag(self):
        v = sqrt_unitary(np.diag([1, 1j]))
        assert norm(v - np.diag([1, np.exp(1j * np.pi / 4)])) < 1e-12

    def test_identity(self):
        assert norm(sqrt_unitary(np.eye(3)) - np.eye(3)) < 1e-12

    def test_minus_one(self):
        v = sqrt_unitary(-np.eye(2))
        assert norm(v @ v + np.eye(2)) < 1e-12
        assert abs(abs(v[0, 0]) - 1) < 1e-12

    def test_no_wide_gap_rejected(self):
        # eigenphases spaced pi/4 mod pi leave no gap wider than the tolerance
        u = np.diag(np.exp(1j * np.pi * np.arange(4) / 4))
        with pytest.raises(ValueError):
            sqrt_unitary(u, tol_gap=1.0)
        assert norm(sqrt_unitary(u) @ sqrt_unitary(u) - u) < 1e-12

    def test_invariance_precondition(self):
        with pytest.raises(ValueError):
            sqrt_unitary(np.diag([1, 1j]) @ SX, "R*", m2_standard())

    @pytest.mark.parametrize("n", [2, 4, 8])
    def test_random_gapped(self, n, rng):
        for _ in range(100):
            z = unitary_group.rvs(n, random_state=rng)
            # eigenphases in (-3pi/4, 3pi/4) leave a gap around -1
            ph = rng.uniform(-0.75 * np.pi, 0.75 * np.pi, n)
            u = z @ np.diag(np.exp(1j * ph)) @ dag(z)
            v = sqrt_unitary(u)
            assert norm(v @ v - u) < 1e-10

    @pytest.mark.parametrize("n", [2, 4, 8])
    def test_random_invariant_roots(self, n, rng):
        alg = GradedRealAlgebra(n, None, np.eye(n))
        for _ in range(100):
            # R*-invariant means complex symmetric: u = O D O^T with O real orthogonal
            o, _ = np.linalg.qr(rng.standard_normal((n, n)))
            ph = rng.uniform(-0.75 * np.pi, 0.75 * np.pi, n)
            u = o @ np.diag(np.exp(1j * ph)) @ o.T
            v = sqrt_unitary(u, "R*", alg)
            assert norm(v @ v - u) < 1e-10
            assert norm(v.T - v) < 1e-10

    def test_gamma_invariant_root(self):
        u = np.diag([1j, -1j, np.exp(0.3j), 1.0])
        alg = GradedRealAlgebra(4, kron(I2, SZ), None)
        v = sqrt_unitary(u, "gamma", alg)
        assert norm(alg.gamma(v) - v) < 1e-12


class TestOrderTwo:
    def test_sx(self):
        r = order_two_check(m2_standard(), SX)
        assert r.order_two and r.commute and r.consistent

    def test_non_commuting_phase(self):
        # order two holds for a diagonal phase (conj undoes it); commuting fails
        r = order_two_check(m2_standard(), np.diag([1, np.exp(1j * np.pi / 3)]))
        assert r.order_two_direct == r.order_two
        assert not r.commute and not r.commute_direct
        assert r.consistent

    def test_identity(self):
        r = order_two_check(m2_standard(), I2)
        assert r.order_two and r.commute and r.consistent

    def test_non_order_two(self):
        u = np.diag([1, np.exp(1j * np.pi / 3)]) @ (SX + SZ) / np.sqrt(2)
        r = order_two_check(m2_standard(), u)
        assert not r.order_two and r.consistent

    @pytest.mark.parametrize("xi", ["R", "gamma"])
    def test_random_agreement(self, xi, rng):
        alg = m2_standard()
        for _ in range(40):
            u = unitary_group.rvs(2, random_state=rng)
            assert order_two_check(alg, u, xi).consistent
        for base in (I2, SX, SY, SZ):
            u = np.exp(2j * np.pi * rng.random()) * base
            assert order_two_check(alg, u, xi).consistent


class TestInvariantGenerator:
    def _check(self, theta):
        w = invariant_generator(M2, theta)
        rel = relative_algebra(M2, theta)
        assert norm(rel.real(w) - w) < 1e-12
        return w

    def test_sx(self):
        w = self._check(SX)
        assert min(norm(w - SX), norm(w + SX)) < 1e-12

    def test_i_sx(self):
        w = self._check(1j * SX)
        assert min(norm(w - SX), norm(w + SX)) < 1e-12

    def test_sy(self):
        w = self._check(SY)
        assert min(norm(w - 1j * SY), norm(w + 1j * SY)) < 1e-12

    def test_hypothesis_fails(self):
        with pytest.raises(ValueError):
            invariant_generator(M2, np.diag([1, 1j]))


class TestWitness:
    def test_identity(self):
        assert norm(inner_conjugacy_witness(M2, I2) - I2) < 1e-12

    @given(st.floats(-1.5, 1.5))
    def test_diagonal_phase(self, t0):
        theta = np.diag([1, np.exp(1j * t0)])
        w = inner_conjugacy_witness(M2, theta)
        assert norm(w - np.diag([1, np.exp(1j * t0 / 2)])) < 1e-10
        assert intertwining_residual(M2, theta, w) < 1e-10

    @given(st.floats(-3.1, 3.1))
    def test_diagonal_phase_any_branch(self, t0):
        # away from small angles the gap midpoint may pick the other root of the second entry
        theta = np.diag([1, np.exp(1j * t0)])
        w = inner_conjugacy_witness(M2, theta)
        assert norm(w @ w.T - theta) < 1e-10
        assert intertwining_residual(M2, theta, w) < 1e-10

    def test_sy_obstructed(self):
        assert inner_conjugacy_witness(M2, SY) == "obstructed(-1,-1)"

    def test_sx_obstructed(self):
        assert inner_conjugacy_witness(M2, SX) == "obstructed(+1,-1)"

    def test_random_soundness(self, rng):
        for _ in range(20):
            theta = random_invariant_theta(rng, M4)
            out = inner_conjugacy_witness(M4, theta)
            if isinstance(out, str):
                assert relative_signs(M4, theta).as_tuple() != (1, 1)
            else:
                assert intertwining_residual(M4, theta, out) < 1e-10


class TestMorita:
    def test_real_case(self):
        rep = morita_psi_e(m2_standard(), SX)
        assert rep.case == "2+/3+" and rep.passed
        assert "U_real" in rep.checks and "psi_real" in rep.checks

    def test_imaginary_case(self):
        rep = morita_psi_e(m2_standard(SX), SX)
        assert rep.case == "2-/3-" and rep.passed

    def test_complex(self):
        rep = morita_psi_e(M2, SY)
        assert rep.case == "complex" and rep.passed

    def test_eq_u(self):
        u = eq_u(SZ)
        assert norm(u @ kron(SZ, SZ) @ dag(u) - kron(I2, SZ)) < 1e-12

    def test_larger(self):
        alg = GradedRealAlgebra(4, kron(I2, SZ), np.eye(4))
        assert morita_psi_e(alg, kron(I2, SX)).passed

    @pytest.mark.parametrize("e", [SZ, 2 * SX, SX + SY])
    def test_bad_e(self, e):
        with pytest.raises(ValueError):
            morita_psi_e(m2_standard(), e)

    def test_e_not_real(self):
        with pytest.raises(ValueError):
            morita_psi_e(m2_standard(), SY)


def test_parity_configurations():
    recs = parity_configurations()
    assert len(recs) == 8
    assert {(r.parity_t, r.grading_reality, r.homogeneity) for r in recs} == {
        (a, b, c) for a in (1, -1) for b in (1, -1) for c in (1, -1)
    }
    for r in recs:
        assert r.parity_p == r.predicted


class TestSignTable:
    def test_rows(self):
        rows = sign_table_rows()
        assert len(rows) == 8
        for row in rows:
            assert relative_signs(row.algebra, row.theta).as_tuple() == row.signs
            if row.extension is not None:
                assert cl1_extension(row.algebra, row.theta) == row.extension

    def test_cl1_generators_are_structure_stable(self):
        for row in sign_table_rows():
            if row.algebra.generators is None:
                continue
            rel = relative_algebra(row.algebra, row.theta)
            for g in row.algebra.generators:
                img = rel.real(g)
                assert min(norm(img - g), norm(img + g)) < 1e-12


@pytest.mark.parametrize("pair", [((1, 1), (1, 0)), ((0, 2), (0, 1))])
def test_inner_grading_lemma_on_clifford(pair):
    b1, b2 = (build_clifford(*x) for x in pair)
    assert inner_grading_check(b1, b2) < 1e-10
