import numpy as np
import pytest

from gammakit.combinatorics import k_const
from gammakit.corpus import (commuting_normal_symbols, commuting_unitaries, fundamental_corpus,
                             gamma2_corpus, nonnormal_small_tuple, normal_symmetrization)
from gammakit.fundamental import (lemma43_check, lemma72_suite, prop66_conditions,
                                  prop71_residual, radius_bound_check, solve_fundamental,
                                  thm73_gate, unitary_equivalence_invariance, uniqueness_check,
                                  z_grid)
from gammakit.geometry import sample_polydisc, symmetrize
from gammakit.linalg import OperatorTuple, adj, max_numerical_radius, random_unitary
from gammakit.pencils import gamma_unitary_from_unitaries


def _scalar_tuple(s):
    return OperatorTuple(tuple(np.array([[x]], dtype=complex) for x in s))


class TestSolver:
    def test_scalar_closed_form(self, rng):
        # For a scalar point with |s_n| < 1 the defect is the whole line and the
        # defining equation divides out: E_i = (s_i - conj(s_{n-i}) s_n) / (1 - |s_n|^2).
        for n in range(2, 6):
            for z in sample_polydisc(rng, 20, n):
                s = symmetrize(0.95 * z)
                fo = solve_fundamental(_scalar_tuple(s))
                assert fo.rank == 1 and fo.solved
                for i in range(1, n):
                    want = (s[i - 1] - np.conj(s[n - i - 1]) * s[n - 1]) / (1 - abs(s[n - 1]) ** 2)
                    assert fo.op(i)[0, 0] == pytest.approx(want, abs=1e-12)

    def test_unitary_sn_has_rank_zero(self, rng):
        t = gamma_unitary_from_unitaries(commuting_unitaries(rng, 3, 4))
        fo = solve_fundamental(t)
        assert fo.rank == 0 and fo.solved
        assert radius_bound_check(fo)["pass"]

    def test_zero_tuple(self):
        t = OperatorTuple((np.zeros((3, 3)), np.zeros((3, 3))))
        fo = solve_fundamental(t)
        assert fo.rank == 3 and np.allclose(fo.op(1), 0)

    def test_residuals_on_corpus(self, rng):
        for t in fundamental_corpus(rng, 15):
            for side in ("direct", "adjoint"):
                fo = solve_fundamental(t, side)
                assert fo.max_residual <= 1e-10
                assert max(fo.off_defect, default=0) <= 1e-10

    def test_ambient_reproduces_equation(self, rng):
        t = normal_symmetrization(rng, 3, 4, unimodular=1)
        fo = solve_fundamental(t)
        n, D = t.n, fo.D
        for i in (1, 2):
            lhs = t.S(i) - adj(t.S(n - i)) @ t.S(n)
            assert np.allclose(D @ fo.ambient(i) @ D, lhs, atol=1e-10)

    def test_nonsolvable_is_flagged(self):
        # S_n = diag(1, 1/2) has a one-dimensional defect space, and the swap
        # matrix leaves a part of S_1 - S_1^* S_n outside it.
        u = np.diag([1.0, 0.5]).astype(complex)
        t = OperatorTuple((np.array([[0, 1], [1, 0]], dtype=complex), u))
        fo = solve_fundamental(t)
        assert not fo.solved and fo.flags

    def test_bad_side(self, rng):
        with pytest.raises(ValueError):
            solve_fundamental(normal_symmetrization(rng, 2, 2), side="sideways")

    def test_uniqueness(self, rng):
        for t in fundamental_corpus(rng, 8):
            out = uniqueness_check(t, rng=rng)
            assert out["pass"] and out["max_deviation"] <= 1e-9

    def test_uniqueness_rank_zero(self, rng):
        t = gamma_unitary_from_unitaries(commuting_unitaries(rng, 2, 2))
        assert uniqueness_check(t)["variants"] == 0


class TestRadius:
    def test_bound_on_corpus(self, rng):
        for t in fundamental_corpus(rng, 8):
            out = radius_bound_check(solve_fundamental(t), grid=z_grid(16), radius_points=180)
            assert out["pass"]
            assert [r["k"] for r in out["rows"]] == [k_const(t.n, i) for i in range(1, t.n)]

    def test_symmetry_cache_matches_direct_evaluation(self, rng):
        fo = solve_fundamental(normal_symmetrization(rng, 4, 3))
        g = z_grid(12)
        rows = radius_bound_check(fo, grid=g, radius_points=180)["rows"]
        for r in rows:
            i = r["i"]
            direct = max_numerical_radius(fo.op(i)[None] + g[:, None, None] * fo.op(4 - i)[None], 180)
            assert r["omega"] == pytest.approx(direct, rel=1e-9)

    def test_violation_detected(self):
        fo = solve_fundamental(OperatorTuple((np.zeros((2, 2)), np.zeros((2, 2)))))
        fo.E = [np.array([[0, 5], [0, 0]], dtype=complex)]
        assert not radius_bound_check(fo, grid=z_grid(8))["pass"]


class TestSymbolNormality:
    def test_commuting_normal_all_hold(self, rng):
        for n in (2, 3, 4):
            out = lemma43_check(commuting_normal_symbols(rng, n, 3))
            assert out["agree"] and all(out["verdicts"].values())

    def test_jordan_n2_computed_truth(self):
        # With a single symbol A_1 every condition is about A_1* + A_1 z, which
        # is a multiple of a normal matrix on the circle, so all four hold.
        J = np.array([[0, 1], [0, 0]], dtype=complex)
        out = lemma43_check([J])
        assert all(out["verdicts"].values())
        assert out["residuals"]["(3)"] <= 1e-12

    def test_random_n3_agree(self, rng):
        for _ in range(10):
            A = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(2)]
            out = lemma43_check(A)
            assert out["agree"] and not any(out["verdicts"].values())


class TestGates:
    def test_prop66_trivial_for_n2(self, rng):
        for t in gamma2_corpus(rng, 6):
            assert prop66_conditions(solve_fundamental(t))["pass"]
            assert thm73_gate(solve_fundamental(t))["pass"]
            assert thm73_gate(solve_fundamental(t, "adjoint"))["pass"]

    def test_prop66_fails_on_nonnormal(self, rng):
        fo = solve_fundamental(nonnormal_small_tuple(rng, 3, 3))
        assert not prop66_conditions(fo)["pass"]
        assert not thm73_gate(fo)["pass"]

    def test_normal_gates_pass(self, rng):
        t = normal_symmetrization(rng, 4, 3)
        for side in ("direct", "adjoint"):
            fo = solve_fundamental(t, side)
            assert prop66_conditions(fo)["pass"] and thm73_gate(fo)["pass"]


class TestDefectIdentities:
    def test_gamma2(self, rng):
        for t in gamma2_corpus(rng, 6):
            out = lemma72_suite(t, solve_fundamental(t), solve_fundamental(t, "adjoint"))
            assert all(v is not False for v in out["pass"].values()), out

    def test_gated_entries_are_none(self, rng):
        t = nonnormal_small_tuple(rng, 3, 3)
        out = lemma72_suite(t, solve_fundamental(t), solve_fundamental(t, "adjoint"))
        assert out["pass"]["(4)"] is None and out["gates"]["(4)"] is False

    def test_prop71(self, rng):
        for _ in range(20):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            a /= 1.1 * np.linalg.norm(a, 2)
            assert prop71_residual(a) <= 1e-12


class TestInvariance:
    def test_identity(self, rng):
        t = normal_symmetrization(rng, 3, 3)
        assert unitary_equivalence_invariance(t, np.eye(3))["residual"] <= 1e-12

    @pytest.mark.parametrize("side", ["direct", "adjoint"])
    def test_random_unitary_and_permutation(self, rng, side):
        for t in fundamental_corpus(rng, 5):
            d = t.dim
            assert unitary_equivalence_invariance(t, random_unitary(rng, d), side=side)["pass"]
            assert unitary_equivalence_invariance(t, np.eye(d)[rng.permutation(d)], side=side)["pass"]
