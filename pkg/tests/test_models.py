import json
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tenfold._linalg import I2, SX, SY, SZ, norm
from tenfold.models import (
    BUILDERS,
    HONEYCOMB,
    BlochModel,
    ModelSchemaError,
    SymmetrySpec,
    build_haldane,
    build_kane_mele,
    build_qwz,
    build_ssh,
    direct_sum,
    evaluate,
    evaluate_grid,
    gap,
    grid,
    kane_mele_block_residuals,
    load_model,
    model_from_dict,
    model_to_dict,
    restrict,
    reversed_grid,
    save_model,
    verify_symmetries,
)

ALL_BUILDS = [
    build_ssh(0.3, 1.1),
    build_qwz(-1.2),
    build_haldane(1.0, 0.2, np.pi / 3, 0.1),
    build_kane_mele(1.0, 0.1, 0.05, 0.2),
]


def onsite(mat, d=1):
    return BlochModel(d, mat.shape[0], {(0,) * d: mat})


class TestEvaluate:
    def test_ssh_w0(self):
        model, _ = build_ssh(1.0, 0.0)
        for k in (0.0, 0.17, 0.5, 0.91):
            assert norm(evaluate(model, k) - SX) < 1e-14

    def test_zero(self):
        z = BlochModel(2, 3, {})
        assert norm(evaluate(z, np.array([0.3, 0.2]))) == 0.0

    def test_onsite(self):
        m = onsite(SZ)
        assert norm(evaluate(m, grid(1, 8)) - SZ) < 1e-15

    def test_ssh_closed_form(self):
        v, w = 0.7, 1.3
        model, _ = build_ssh(v, w)
        for k in np.linspace(0, 1, 11):
            z = v + w * np.exp(2j * np.pi * k)
            expect = np.array([[0, np.conj(z)], [z, 0]])
            assert norm(evaluate(model, k) - expect) < 1e-12

    def test_qwz_closed_form(self):
        m = 0.4
        model, _ = build_qwz(m)
        for kx, ky in [(0.1, 0.2), (0.5, 0.0), (0.33, 0.77)]:
            a, b = 2 * np.pi * kx, 2 * np.pi * ky
            expect = np.sin(a) * SX + np.sin(b) * SY + (m + np.cos(a) + np.cos(b)) * SZ
            assert norm(evaluate(model, np.array([kx, ky])) - expect) < 1e-12

    @given(st.sampled_from(range(4)), st.floats(0, 1), st.floats(0, 1), st.integers(-3, 3))
    def test_periodic_and_selfadjoint(self, which, kx, ky, shift):
        model, _ = ALL_BUILDS[which]
        k = np.array([kx, ky][: model.d])
        h = evaluate(model, k)
        assert norm(h - h.conj().T) < 1e-12
        assert norm(evaluate(model, k + shift) - h) < 1e-10

    def test_grid_shape(self):
        assert grid(2, 5).shape == (5, 5, 2)
        model, _ = build_qwz(1.0)
        assert evaluate_grid(model, 6).shape == (6, 6, 2, 2)

    def test_reversed_grid(self):
        model, _ = build_qwz(0.3)
        h = evaluate_grid(model, 8)
        hm = reversed_grid(h, 2)
        ks = grid(2, 8)
        assert norm(hm[3, 5] - evaluate(model, -ks[3, 5])) < 1e-12


class TestGap:
    def test_ssh_dimerized(self):
        g, _ = gap(build_ssh(0.0, 1.0)[0])
        assert abs(g - 1) < 1e-12

    def test_ssh_critical(self):
        g, kmin = gap(build_ssh(1.0, 1.0)[0])
        assert g < 1e-12 and abs(kmin[0] - 0.5) < 1e-12

    def test_onsite(self):
        assert abs(gap(onsite(SZ))[0] - 1) < 1e-15

    def test_qwz_gapless(self):
        assert gap(build_qwz(0.0)[0])[0] < 1e-12

    @given(st.floats(0, 2), st.floats(0, 2))
    def test_ssh_oracle(self, v, w):
        # min over an even grid of |v + w e^{2 pi i k}| is |v - w| (k = 1/2 is on the grid)
        g, _ = gap(build_ssh(v, w)[0], 64)
        assert abs(g - abs(v - w)) < 1e-12


class TestSymmetries:
    def test_ssh_chiral(self):
        model, spec = build_ssh(0.0, 1.0)
        rep = verify_symmetries(model, spec)
        assert rep.residuals["chiral"] < 1e-14

    def test_kane_mele_trs(self):
        model, spec = build_kane_mele(1.0, 0.1, 0.0, 0.0)
        rep = verify_symmetries(model, spec)
        assert rep.residuals["trs"] < 1e-10 and rep.parities["trs"] == -1

    def test_kane_mele_rashba_keeps_trs(self):
        model, spec = build_kane_mele(1.0, 0.1, 0.3, 0.2)
        assert verify_symmetries(model, spec).residuals["trs"] < 1e-10

    def test_haldane_bogus_trs(self):
        model, _ = build_haldane(1.0, 0.3, np.pi / 2, 0.0)
        rep = verify_symmetries(model, SymmetrySpec(trs=I2))
        assert rep.residuals["trs"] > 0.5

    def test_zero_hamiltonian(self):
        z = BlochModel(1, 2, {})
        rep = verify_symmetries(z, SymmetrySpec(chiral=SZ, trs=I2, phs=SY))
        assert all(v == 0 for v in rep.residuals.values())
        assert rep.grading_reality == 1

    def test_reality_sign(self):
        model, _ = build_ssh(0.3, 1.0)
        rep = verify_symmetries(model, SymmetrySpec(chiral=SZ, trs=I2, phs=SZ))
        assert rep.consistent() and rep.grading_reality == 1
        assert rep.parities == {"trs": 1, "phs": 1}

    def test_non_order_two_flagged(self):
        model, _ = build_ssh(0.3, 1.0)
        rep = verify_symmetries(model, SymmetrySpec(trs=np.diag([1, 1j]) @ SX))
        assert not rep.consistent()

    @pytest.mark.parametrize("lso", [0.0, 0.1, 0.25])
    def test_kane_mele_blocks(self, lso):
        model, _ = build_kane_mele(1.0, lso, 0.2, 0.1)
        res = kane_mele_block_residuals(model)
        assert res["f(h1)=h2"] < 1e-10 and res["f(R)=-R*"] < 1e-10

    def test_kane_mele_decouples_without_rashba(self):
        model, _ = build_kane_mele(1.0, 0.1, 0.0, 0.3)
        h = evaluate_grid(model, 12)
        assert norm(h[..., :2, 2:]) < 1e-14
        assert norm(h[..., 2:, :2]) < 1e-14

    def test_rashba_couples(self):
        model, _ = build_kane_mele(1.0, 0.1, 0.2, 0.0)
        assert norm(evaluate_grid(model, 12)[..., :2, 2:]) > 0.1


class TestBuilders:
    def test_registry(self):
        assert set(BUILDERS) == {"ssh", "qwz", "haldane", "kane_mele"}

    def test_honeycomb_metadata(self):
        model, _ = build_haldane(1.0, 0.1, 0.5, 0.0)
        assert model.params["phi"] == 0.5
        a1, a2 = np.array(HONEYCOMB["a1"]), np.array(HONEYCOMB["a2"])
        assert abs(np.linalg.norm(a1) - np.linalg.norm(a2)) < 1e-12

    def test_haldane_conjugate(self):
        a, _ = build_haldane(1.0, 0.2, 0.7, 0.1)
        b, _ = build_haldane(1.0, 0.2, -0.7, 0.1)
        k = np.array([0.21, 0.64])
        assert norm(evaluate(a, k).conj() - evaluate(b, -k)) < 1e-12

    def test_support_radius(self):
        assert build_ssh(1, 1)[0].support_radius == 1
        assert onsite(SZ).support_radius == 0


class TestCombinators:
    def test_direct_sum_and_restrict(self):
        a, _ = build_qwz(1.0)
        b, _ = build_qwz(-1.0)
        s = direct_sum(a, b)
        k = np.array([0.3, 0.1])
        assert norm(evaluate(restrict(s, [2, 3]), k) - evaluate(b, k)) < 1e-14
        assert norm(evaluate(s, k)[:2, 2:]) == 0


class TestSchema:
    def test_round_trip(self, tmp_path):
        for model, spec in ALL_BUILDS:
            p = tmp_path / f"{model.name}.json"
            save_model(p, model, spec)
            m2, s2 = load_model(p)
            k = np.full(model.d, 0.37)
            assert norm(evaluate(m2, k) - evaluate(model, k)) < 1e-14
            for name in ("chiral", "trs", "phs"):
                a, b = getattr(spec, name), getattr(s2, name)
                assert (a is None) == (b is None)
                if a is not None:
                    assert norm(a - b) < 1e-15

    def test_one_sided_warns(self):
        data = {
            "name": "chain",
            "d": 1,
            "N": 1,
            "hoppings": [{"n": [1], "re": [[1.0]], "im": [[0.5]]}],
        }
        with pytest.warns(UserWarning, match="adjoint partners"):
            model, _ = model_from_dict(data)
        assert norm(model.hoppings[(-1,)] - np.array([[1.0 - 0.5j]])) == 0

    def test_two_sided_silent(self):
        data = model_to_dict(build_ssh(0.5, 1.0)[0])
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            model_from_dict(data)

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda d: d.pop("N"),
            lambda d: d.update(d="one"),
            lambda d: d.update(hoppings={}),
            lambda d: d["hoppings"][0].update(n=[0, 0]),
            lambda d: d["hoppings"][0].update(re=[[1.0]]),
            lambda d: d.update(symmetries={"mirror": [[1, 0], [0, 1]]}),
            lambda d: d.update(symmetries={"trs": [[2, 0], [0, 1]]}),
            lambda d: d.update(symmetries={"chiral": [[1, 0], [0, 1], [0, 0]]}),
        ],
    )
    def test_schema_errors(self, mutate):
        data = model_to_dict(*build_ssh(0.5, 1.0))
        mutate(data)
        with pytest.raises(ModelSchemaError):
            model_from_dict(data)

    def test_non_hermitian_onsite(self):
        data = {"name": "x", "d": 1, "N": 2, "hoppings": [{"n": [0], "re": [[0, 1], [0, 0]]}]}
        with pytest.raises(ModelSchemaError):
            model_from_dict(data)

    def test_mismatched_partner(self):
        data = {
            "name": "x", "d": 1, "N": 1,
            "hoppings": [{"n": [1], "re": [[1.0]]}, {"n": [-1], "re": [[2.0]]}],
        }
        with pytest.raises(ModelSchemaError):
            model_from_dict(data)

    def test_bad_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        with pytest.raises(ModelSchemaError):
            load_model(p)

    def test_serialized_is_plain_json(self):
        json.dumps(model_to_dict(*build_kane_mele(1, 0.1, 0.05, 0)))
