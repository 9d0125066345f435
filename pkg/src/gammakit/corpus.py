"""Random instance generators with known membership.

Every generator takes an explicit ``numpy.random.Generator`` so that runs
are reproducible from a single seed.
"""

from __future__ import annotations

import numpy as np

from .geometry import sample_polydisc
from .linalg import OperatorTuple, adj, op_norm, random_unitary
from .pencils import symmetrize_tuple


def normal_symmetrization(rng: np.random.Generator, n: int, dim: int,
                          unimodular: int = 0, radius: float = 0.95) -> OperatorTuple:
    """Symmetrization of commuting normal contractions W diag(z_j) W*.

    ``unimodular`` joint eigenvalues are placed on the torus, which makes the
    defect of S_n rank-deficient by that amount. Interior joint eigenvalues
    are drawn from the polydisc of the given radius.
    """
    z = radius * sample_polydisc(rng, dim, n)
    for r in range(min(unimodular, dim)):
        z[r] = np.exp(2j * np.pi * rng.uniform(size=n))
    w = random_unitary(rng, dim)
    ms = [w @ np.diag(z[:, j]) @ adj(w) for j in range(n)]
    return symmetrize_tuple(ms)


def commuting_unitaries(rng: np.random.Generator, n: int, dim: int, kind: str = "qr"):
    """n commuting unitaries sharing an eigenbasis (diagonal or Haar-rotated)."""
    phases = np.exp(2j * np.pi * rng.uniform(size=(n, dim)))
    if kind == "diagonal":
        return [np.diag(p) for p in phases]
    w = random_unitary(rng, dim)
    return [w @ np.diag(p) @ adj(w) for p in phases]


def ando_pair(rng: np.random.Generator, dim: int, scale: float = 0.9) -> OperatorTuple:
    """(M1 + M2, M1 M2) for commuting non-normal contractions M1, M2.

    M1 and M2 are scaled polynomials in one random matrix, so they commute;
    Ando's inequality makes their symmetrization a Γ₂-contraction.
    """
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    c = rng.normal(size=3) + 1j * rng.normal(size=3)
    m1 = a
    m2 = c[0] * np.eye(dim) + c[1] * a + c[2] * a @ a
    m1 = scale * m1 / op_norm(m1)
    m2 = scale * m2 / max(op_norm(m2), 1e-12)
    return symmetrize_tuple([m1, m2])


def gamma2_corpus(rng: np.random.Generator, count: int, max_dim: int = 5) -> list:
    """Mixed Γ₂ instances: normal symmetrizations (some with rank-deficient
    defect) and Ando pairs."""
    out = []
    for k in range(count):
        dim = int(rng.integers(2, max_dim + 1))
        kind = k % 3
        if kind == 0:
            out.append(normal_symmetrization(rng, 2, dim))
        elif kind == 1:
            out.append(normal_symmetrization(rng, 2, dim, unimodular=int(rng.integers(1, dim))))
        else:
            out.append(ando_pair(rng, dim))
    return out


def fundamental_corpus(rng: np.random.Generator, count: int, max_dim: int = 8,
                       max_n: int = 5) -> list:
    out = []
    for k in range(count):
        n = int(rng.integers(2, max_n + 1))
        dim = int(rng.integers(1, max_dim + 1))
        uni = int(rng.integers(0, dim)) if k % 2 else 0
        out.append(normal_symmetrization(rng, n, dim, unimodular=uni))
    return out


def admissible_scalar_symbols(rng: np.random.Generator, n: int) -> list:
    """Scalars A_1..A_{n-1} with |A_i| + |A_{n-i}| <= k(i) (strictly)."""
    from .combinatorics import k_const

    a = np.zeros(n - 1, dtype=complex)
    for i in range(1, n):
        j = n - i
        if i > j:
            continue
        k = k_const(n, i)
        r = rng.uniform(0.1, 0.9, size=2) * k / 2
        ph = np.exp(2j * np.pi * rng.uniform(size=2))
        a[i - 1] = r[0] * ph[0]
        a[j - 1] = r[1] * ph[1] if i != j else r[0] * ph[0]
    return [np.array([[x]]) for x in a]


def commuting_normal_symbols(rng: np.random.Generator, n: int, fibre: int,
                             slack: float = 0.9) -> list:
    """Commuting normal fibre matrices satisfying both model admissibility conditions."""
    from .combinatorics import k_const

    w = random_unitary(rng, fibre)
    diag = np.zeros((n - 1, fibre), dtype=complex)
    for i in range(1, n):
        j = n - i
        if i > j:
            continue
        k = k_const(n, i)
        for c in range(fibre):
            r = rng.uniform(0.05, 1.0, size=2)
            r = slack * k * r / r.sum() if i != j else slack * k / 2 * r[:1].repeat(2)
            ph = np.exp(2j * np.pi * rng.uniform(size=2))
            diag[i - 1, c] = r[0] * ph[0]
            diag[j - 1, c] = r[1] * ph[1] if i != j else r[0] * ph[0]
    return [w @ np.diag(d) @ adj(w) for d in diag]


def nonnormal_small_tuple(rng: np.random.Generator, n: int, dim: int,
                          size: float = 0.3) -> OperatorTuple:
    """Symmetrization of small commuting non-normal matrices.

    Not certified as a Γₙ-contraction; used where a strict-contraction S_n
    with generically non-commuting fundamental operators is wanted.
    """
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    a = a / op_norm(a)
    ms = []
    for _ in range(n):
        c = rng.normal(size=3) + 1j * rng.normal(size=3)
        m = c[0] * np.eye(dim) + c[1] * a + c[2] * a @ a
        ms.append(size * m / op_norm(m))
    return symmetrize_tuple(ms)


def fundamental_symbols(rng: np.random.Generator, n: int, fibre: int) -> list:
    """Fundamental operators of a strict normal Γₙ-contraction on C^fibre.

    Because they come from an actual contraction, the pure model built on
    them is a genuine Γₙ-isometry, which norm-admissible symbols alone do not
    guarantee once n >= 3.
    """
    from .fundamental import solve_fundamental

    t = normal_symmetrization(rng, n, fibre)
    fo = solve_fundamental(t)
    return [fo.op(i) for i in range(1, n)]
