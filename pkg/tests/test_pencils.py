import math

import numpy as np
import pytest

from gammakit.combinatorics import k_const
from gammakit.corpus import (commuting_unitaries, fundamental_symbols, gamma2_corpus,
                             normal_symmetrization)
from gammakit.dilation import pure_isometry_model
from gammakit.errors import DomainError
from gammakit.geometry import alpha_grid, beta_grid, scalar_pencils, symmetrize
from gammakit.linalg import OperatorTuple, random_unitary
from gammakit.pencils import (FAIL, ISOMETRY, PURE_ISOMETRY, UNITARY, CO_ISOMETRY,
                              classify_coisometry, classify_isometry, classify_unitary,
                              gamma_unitary_from_unitaries, isometry_implies_contraction_check,
                              necessary_contraction_suite, op_pencil, pencil_min_eig,
                              symmetrize_tuple)

ALPHAS = alpha_grid(16)


def _scalar_tuple(s):
    return OperatorTuple(tuple(np.array([[x]], dtype=complex) for x in s))


def _evidence(verdict, name):
    return next(e for e in (verdict["evidence"] if isinstance(verdict, dict) else verdict.evidence)
                if e.name == name)


class TestOpPencil:
    def test_one_by_one_matches_scalar(self, rng):
        for n in (2, 3, 4):
            s = symmetrize(0.9 * np.exp(2j * np.pi * rng.uniform(size=n)))
            t = _scalar_tuple(s)
            for i in range(1, n):
                for a in ALPHAS[::7]:
                    pe = op_pencil(i, a, t)
                    assert pe.phi1[0, 0].real == pytest.approx(scalar_pencils(i, a, s)[0])
                    assert pe.phi2[0, 0].real == pytest.approx(scalar_pencils(i, a, s)[1])

    def test_zero_tuple_gives_k_squared(self):
        t = OperatorTuple(tuple(np.zeros((3, 3)) for _ in range(4)))
        for i in range(1, 4):
            pe = op_pencil(i, 0.4 - 0.2j, t)
            assert np.allclose(pe.phi1, k_const(4, i) ** 2 * np.eye(3))
            assert np.allclose(pe.phi2, k_const(4, i) ** 2 * np.eye(3))

    def test_hermitian(self, rng):
        t = normal_symmetrization(rng, 3, 4)
        pe = op_pencil(1, 0.3 + 0.5j, t)
        assert np.allclose(pe.phi1, pe.phi1.conj().T)

    def test_domain(self, rng):
        t = normal_symmetrization(rng, 3, 2)
        with pytest.raises(DomainError):
            op_pencil(3, 0.5, t)
        with pytest.raises(DomainError):
            op_pencil(1, 1.5, t)
        bad = OperatorTuple((np.array([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]])))
        with pytest.raises(DomainError):
            op_pencil(1, 0.5, bad)


class TestNecessarySuite:
    def test_normal_instances_pass(self, rng):
        for n in (2, 3, 4):
            for dim in (1, 3, 5):
                assert necessary_contraction_suite(normal_symmetrization(rng, n, dim), ALPHAS)["pass"]

    def test_gamma2_corpus_pass(self, rng):
        for t in gamma2_corpus(rng, 10):
            assert necessary_contraction_suite(t, ALPHAS)["pass"]

    def test_large_sn_is_refuted(self):
        t = _scalar_tuple([0.0, 0.0, 1.2])
        out = necessary_contraction_suite(t, ALPHAS)
        assert not out["pass"] and out["verdict"] == "refuted"
        assert not _evidence(out, "norm_bounds").passed

    def test_outside_scalar_point_is_refuted(self):
        out = necessary_contraction_suite(_scalar_tuple(symmetrize([1.3, 0.1, 0.1])), ALPHAS)
        assert not _evidence(out, "joint_spectrum_max_root").passed

    def test_noncommuting_is_refuted(self):
        out = necessary_contraction_suite(
            OperatorTuple((np.array([[0, 0.5], [0, 0]]), np.array([[0, 0], [0.5, 0]]))), ALPHAS)
        assert not out["pass"] and not _evidence(out, "commutator").passed

    def test_pencil_min_eig_nonnegative_on_normal(self, rng):
        assert pencil_min_eig(normal_symmetrization(rng, 4, 3), ALPHAS) >= -1e-10


class TestUnitary:
    def test_identity_gives_binomials(self):
        for n in (2, 3, 5):
            t = gamma_unitary_from_unitaries([np.eye(2)] * n)
            for i in range(1, n + 1):
                assert np.allclose(t.S(i), math.comb(n, i) * np.eye(2))
            assert classify_unitary(t).cls == UNITARY

    def test_diagonal_unitaries(self, rng):
        us = commuting_unitaries(rng, 3, 4, kind="diagonal")
        t = gamma_unitary_from_unitaries(us)
        diag = np.array([np.diag(u) for u in us]).T
        for r in range(4):
            assert np.allclose([t.S(i)[r, r] for i in (1, 2, 3)], symmetrize(diag[r]))
        v = classify_unitary(t)
        assert v.cls == UNITARY and v.certified

    def test_rejects_nonunitary_input(self, rng):
        with pytest.raises(DomainError):
            gamma_unitary_from_unitaries([np.eye(2), np.diag([1, 0.5])])
        u, w = random_unitary(rng, 3), random_unitary(rng, 3)
        with pytest.raises(DomainError):
            gamma_unitary_from_unitaries([u, w])

    def test_fails_on_contraction(self):
        t = symmetrize_tuple([np.eye(2), np.diag([1, 0.5])])
        v = classify_unitary(t)
        assert v.cls == FAIL and not _evidence(v, "Sn_unitary").passed

    def test_invariant_under_conjugation(self, rng):
        t = gamma_unitary_from_unitaries(commuting_unitaries(rng, 4, 3))
        w = random_unitary(rng, 3)
        assert classify_unitary(t.conjugate_by(w)).cls == UNITARY

    def test_coisometry_of_unitary(self, rng):
        t = gamma_unitary_from_unitaries(commuting_unitaries(rng, 3, 3))
        assert classify_coisometry(t, alphas=ALPHAS).cls == UNITARY


class TestIsometry:
    def test_unitary_escalates(self, rng):
        t = gamma_unitary_from_unitaries(commuting_unitaries(rng, 3, 3))
        v = classify_isometry(t, alphas=ALPHAS, betas=beta_grid(32))
        assert v.cls == UNITARY and v.certified

    def test_strict_contraction_is_not_isometry(self, rng):
        v = classify_isometry(normal_symmetrization(rng, 3, 3), alphas=ALPHAS, betas=beta_grid(32))
        assert v.cls == FAIL

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_truncated_model_on_interior(self, rng, n):
        E = fundamental_symbols(rng, n, 2)
        model, rep = pure_isometry_model(E, 2, n_blocks=5)
        assert rep["commutation_pass"] and rep["norm_bound"]
        v = classify_isometry(model.as_tuple(), betas=beta_grid(32), interior=model.interior)
        assert v.cls == PURE_ISOMETRY
        assert _evidence(v, "pencils_vanish").passed

    def test_isometry_implies_contraction_zero_tuple(self):
        t = OperatorTuple(tuple(np.zeros((2, 2)) for _ in range(3)))
        out = isometry_implies_contraction_check(t, alphas=ALPHAS)
        assert out["suite_pass"] and not out["triggered"] and out["pass"]

    def test_isometry_implies_contraction_unitary(self, rng):
        t = gamma_unitary_from_unitaries(commuting_unitaries(rng, 3, 3))
        out = isometry_implies_contraction_check(t, alphas=ALPHAS)
        assert out["triggered"] and out["Sn_unitary"] and out["pass"]
        assert out["residuals"]["normality"] <= 1e-10


def test_verdict_serializes():
    v = classify_unitary(gamma_unitary_from_unitaries([np.eye(1)] * 2))
    d = v.to_dict()
    assert d["class"] == UNITARY and all(set(e) == {"name", "residual", "tol", "pass"}
                                         for e in d["evidence"])
    assert CO_ISOMETRY != ISOMETRY
