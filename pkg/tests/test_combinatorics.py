import math

import pytest

from gammakit.combinatorics import (F, G, binom, f_domain, k_const, k_const_forms,
                                    minimizer_index, verify_sign_tables)
from gammakit.errors import DomainError


def test_binom_examples():
    assert binom(5, 2) == 10
    assert binom(3, -1) == 0
    assert binom(3, 4) == 0
    assert binom(30, 15) == 155117520
    assert binom(80, 40) == math.comb(80, 40)
    with pytest.raises(DomainError):
        binom(-1, 0)


def test_F_G_examples():
    assert F(5, 3, 1, 0) == 50
    assert G(5, 4, 1, 0) == -50


def test_F_zeros_and_G_is_minus_F():
    for m in range(1, 13):
        for i in range(1, m + 1):
            for l in range(0, i + 1):
                dom = f_domain(m, i, l)
                for j in dom:
                    assert G(m, m + 2 - i, l, j) == -F(m, i, l, j)
                for j in (l - 2, 2 * i - m - 2):
                    if j in dom:
                        assert F(m, i, l, j) == 0


def test_F_reflection_symmetry():
    for m in range(1, 13):
        for i in range(1, m + 1):
            for l in range(0, i + 1):
                dom = f_domain(m, i, l)
                for j in dom:
                    r = 2 * i - m - 4 + l - j
                    if r in dom:
                        assert F(m, i, l, j) == F(m, i, l, r)


def test_F_rejects_out_of_domain():
    with pytest.raises(DomainError):
        F(5, 3, 1, 5)


def test_minimizer_is_an_argmin_for_l_above_threshold():
    # Oracle: brute-force scan of the domain.
    for m in range(2, 13):
        for i in range(1, m + 1):
            for l in range(0, i + 1):
                if l <= 2 * i - m:
                    continue
                dom = list(f_domain(m, i, l))
                if not dom:
                    continue
                j = minimizer_index(m, i, l)
                if j not in dom:
                    continue
                vals = {jj: F(m, i, l, jj) for jj in dom}
                assert vals[j] == min(vals.values())
                assert vals[j] <= 0


def test_k_const_examples_and_forms():
    assert k_const(4, 1) == 4
    assert k_const(4, 2) == 6
    assert k_const(10, 4) == 210
    assert k_const_forms(10, 4) == (210, 210)
    with pytest.raises(DomainError):
        k_const(4, 4)


def test_k_identity_all_cases():
    cases = 0
    for n in range(2, 31):
        for i in range(1, n):
            a, b = k_const_forms(n, i)
            assert a == b == math.comb(n, i)
            cases += 1
    assert cases == 435


def test_sign_tables_small():
    rep = verify_sign_tables(6)
    assert rep.ok and rep.checks > 0
    with pytest.raises(DomainError):
        verify_sign_tables(0)
