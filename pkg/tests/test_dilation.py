import numpy as np
import pytest

from gammakit.corpus import (commuting_normal_symbols, commuting_unitaries, fundamental_symbols,
                             gamma2_corpus, nonnormal_small_tuple, normal_symmetrization)
from gammakit.dilation import (build_coisometry_model, build_isometric_dilation,
                               build_unitary_dilation, dilate, hypothesis_gates,
                               minimality_rank_check, pure_isometry_model,
                               verify_dilation_moments, verify_step_identities, wold_split_check)
from gammakit.errors import DomainError, StructuralError
from gammakit.fundamental import solve_fundamental, z_grid
from gammakit.linalg import adj, op_norm
from gammakit.pencils import PURE_ISOMETRY, UNITARY, gamma_unitary_from_unitaries


def _solve(t):
    return solve_fundamental(t, "direct"), solve_fundamental(t, "adjoint")


class TestUnitaryDilation:
    def test_gamma2_instances(self, rng):
        for t in gamma2_corpus(rng, 8):
            out = dilate(t)
            assert out["steps"]["pass"]
            m = out["moments"]
            assert m["pass"] and m["U_unitary"] <= 1e-12
            assert out["minimality"]["pass"]

    def test_blocks_layout(self, rng):
        t = normal_symmetrization(rng, 2, 3)
        E, F = _solve(t)
        dil = build_unitary_dilation(t, E, F, 3, 4)
        kinds = [(b["block_kind"], b["offset"]) for b in dil.blocks.to_list()]
        assert kinds[0] == ("past", -3) and kinds[3] == ("H", 0) and kinds[-1] == ("future", 4)
        assert dil.safe_degree == 2
        assert dil.U.shape == (dil.blocks.size,) * 2
        assert np.allclose(dil.U[np.ix_(dil.h_index, dil.h_index)], t.S(2))

    def test_truncation_stability(self, rng):
        t = gamma2_corpus(rng, 1)[0]
        E, F = _solve(t)
        for n_minus, n_plus in [(4, 4), (6, 6), (8, 8)]:
            dil = build_unitary_dilation(t, E, F, n_minus, n_plus)
            assert verify_dilation_moments(t, dil, 2)["pass"]

    def test_degree_beyond_safe_raises(self, rng):
        t = normal_symmetrization(rng, 2, 2)
        E, F = _solve(t)
        dil = build_unitary_dilation(t, E, F, 3, 3)
        with pytest.raises(DomainError):
            verify_dilation_moments(t, dil, 3)

    def test_too_short_truncation(self, rng):
        t = normal_symmetrization(rng, 2, 2)
        E, F = _solve(t)
        with pytest.raises(DomainError):
            build_unitary_dilation(t, E, F, 1, 3)

    def test_mismatched_sides(self, rng):
        t = normal_symmetrization(rng, 2, 2)
        E, F = _solve(t)
        with pytest.raises(StructuralError):
            build_unitary_dilation(t, F, E)

    def test_unitary_input_is_its_own_dilation(self, rng):
        t = gamma_unitary_from_unitaries(commuting_unitaries(rng, 3, 3))
        out = dilate(t)
        assert out["E"].rank == 0 and out["F"].rank == 0
        assert out["dilation"].U.shape == (3, 3)
        assert out["moments"]["pass"] and out["steps"]["pass"]

    def test_n3_gate_families(self, rng):
        for _ in range(4):
            good = normal_symmetrization(rng, 3, 3, unimodular=2)
            E, F = _solve(good)
            assert all(g["pass"] for g in hypothesis_gates(E, F).values())
            steps = verify_step_identities(good, E, F)
            assert steps["pass"] and not steps["failing"]

            bad = nonnormal_small_tuple(rng, 3, 3)
            E, F = _solve(bad)
            gates = hypothesis_gates(E, F)
            assert not all(g["pass"] for g in gates.values())
            steps = verify_step_identities(bad, E, F)
            # Identities whose hypotheses fail are reported, not required.
            assert steps["failing"] and steps["pass"]
            for name in steps["failing"]:
                assert steps["identities"][name]["gated"]

    def test_minimality_count(self, rng):
        t = normal_symmetrization(rng, 2, 3)
        E, F = _solve(t)
        dil = build_unitary_dilation(t, E, F, 5, 5)
        out = minimality_rank_check(dil, 2)
        assert out["expected"] == 3 + 2 * (E.rank + F.rank)
        assert out["pass"]


class TestIsometricDilation:
    def test_variant_b_passes_on_gamma2(self, rng):
        for t in gamma2_corpus(rng, 5):
            E, F = _solve(t)
            out = build_isometric_dilation(t, E, F)
            assert "B" in out["passing"]

    def test_variant_a_as_displayed_fails(self, rng):
        t = normal_symmetrization(rng, 2, 3)
        out = build_isometric_dilation(t, *_solve(t))
        assert "A" not in out["passing"]


class TestPureModel:
    def test_zero_symbols_give_shift(self):
        model, rep = pure_isometry_model([np.zeros((2, 2))] * 2, 2, n_blocks=4)
        assert all(np.allclose(m, 0) for m in model.M)
        assert np.allclose(model.Mz, np.kron(np.eye(4, k=-1), np.eye(2)))
        assert rep["commutation_pass"] and rep["condition4_pass"] and rep["norm_bound"]

    def test_n2_scalar_norm_bound(self):
        # For n = 2 the symbol is c + conj(c) z, whose sup norm on the circle is 2|c|.
        for c in [0.3, 0.999j, 1.0, 1.01, -2.0]:
            _, rep = pure_isometry_model([np.array([[c]])], 1, grid=z_grid(64))
            assert rep["norm_bound"] == (abs(c) <= 1 + 1e-12)

    def test_commutation_iff_condition4(self, rng):
        for k in range(30):
            n = 3 + k % 2
            if k % 3 == 0:
                E = commuting_normal_symbols(rng, n, 2)
            else:
                E = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(n - 1)]
            _, rep = pure_isometry_model(E, 2, grid=z_grid(8))
            assert rep["consistent"]

    def test_genuine_symbols(self, rng):
        for n in (2, 3, 4):
            model, rep = pure_isometry_model(fundamental_symbols(rng, n, 2), 2)
            assert rep["norm_bound"] and rep["commutation_pass"]


class TestCoisometry:
    def test_gamma2(self, rng):
        for t in gamma2_corpus(rng, 5):
            _, rep = build_coisometry_model(t, solve_fundamental(t, "adjoint"))
            assert rep["pass"] and rep["V*_isometric"] <= 1e-12

    def test_requires_adjoint_side(self, rng):
        t = normal_symmetrization(rng, 2, 2)
        with pytest.raises(StructuralError):
            build_coisometry_model(t, solve_fundamental(t, "direct"))

    def test_model_contains_tuple(self, rng):
        t = normal_symmetrization(rng, 3, 2)
        model, rep = build_coisometry_model(t, solve_fundamental(t, "adjoint"), n_blocks=3)
        h = model.blocks.indices([0])
        assert np.allclose(model.V[np.ix_(h, h)], t.S(3))
        assert rep["H_invariance"] <= 1e-12


class TestWold:
    def test_mixed(self, rng):
        u = gamma_unitary_from_unitaries(commuting_unitaries(rng, 3, 2))
        model, _ = pure_isometry_model(fundamental_symbols(rng, 3, 2), 2, n_blocks=4)
        out = wold_split_check(u, model)
        assert out["pass"] and out["pure_part_nilpotent"]

    def test_pure_only(self, rng):
        model, _ = pure_isometry_model(fundamental_symbols(rng, 3, 2), 2, n_blocks=4)
        out = wold_split_check(None, model)
        assert out["pass"] and out["direct_sum_isometry"] == PURE_ISOMETRY

    def test_unitary_only(self, rng):
        u = gamma_unitary_from_unitaries(commuting_unitaries(rng, 3, 2))
        assert wold_split_check(u, None)["direct_sum_isometry"] == UNITARY

    def test_nothing(self):
        with pytest.raises(DomainError):
            wold_split_check(None, None)

    def test_length_mismatch(self, rng):
        u = gamma_unitary_from_unitaries(commuting_unitaries(rng, 2, 2))
        model, _ = pure_isometry_model(fundamental_symbols(rng, 3, 2), 2)
        with pytest.raises(StructuralError):
            wold_split_check(u, model)
