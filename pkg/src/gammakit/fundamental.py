"""Fundamental operators of a tuple and the identities they satisfy.

For a tuple with contraction S_n the fundamental operators E_i live on the
defect space of S_n and solve S_i - S_{n-i}^* S_n = D E_i D. They are stored
as r x r matrices in an orthonormal defect basis B, so the ambient operator
is B E_i B^*.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .combinatorics import k_const
from .linalg import (OperatorTuple, adj, defect_pair, max_numerical_radius, op_norm,
                     random_unitary)

SOLVER_TOL = 1e-10
GATE_TOL = 1e-9


@dataclass
class FundamentalOperators:
    """E_1..E_{n-1} on a defect basis, for ``side`` 'direct' or 'adjoint'.

    For the adjoint side the tuple is (S_1^*, ..., S_n^*) and the operators
    are conventionally called F_i.
    """

    side: str
    n: int
    D: np.ndarray
    basis: np.ndarray
    E: list
    residuals: list
    off_defect: list
    tol: float
    flags: list = field(default_factory=list)

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def op(self, i: int) -> np.ndarray:
        """1-based access to E_i."""
        return self.E[i - 1]

    def ambient(self, i: int) -> np.ndarray:
        B = self.basis
        return B @ self.E[i - 1] @ adj(B)

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    @property
    def solved(self) -> bool:
        return not self.flags


def _defect_side(t: OperatorTuple, side: str) -> OperatorTuple:
    if side == "direct":
        return t
    if side == "adjoint":
        return t.adjoint()
    raise ValueError(f"side must be 'direct' or 'adjoint', not {side!r}")


def solve_fundamental(t: OperatorTuple, side: str = "direct", tol: float = SOLVER_TOL,
                      basis: np.ndarray | None = None, cut: float | None = None
                      ) -> FundamentalOperators:
    """Compress S_i - S_{n-i}^* S_n to the defect space and divide out D.

    ``basis`` replaces the eigenvector basis of D by another orthonormal
    basis of the same space; ``cut`` changes the rank threshold. Both exist
    so that uniqueness can be probed by re-solving.
    """
    u = _defect_side(t, side)
    n = u.n
    dp = defect_pair(u.S(n), tol if cut is None else cut)
    if basis is None:
        basis = dp.basis
        dinv_b = dp.basis / dp.sing
    else:
        dinv_b = dp.pinv() @ basis
    P = basis @ adj(basis)
    Es, res, off = [], [], []
    eye = np.eye(u.dim)
    for i in range(1, n):
        X = u.S(i) - adj(u.S(n - i)) @ u.S(n)
        Es.append(adj(dinv_b) @ X @ dinv_b)
        res.append(op_norm(X - P @ X @ P))
        Q = eye - P
        off.append(op_norm(Q @ X @ Q))
    fo = FundamentalOperators(side, n, dp.D, basis, Es, [float(r) for r in res],
                              [float(o) for o in off], tol)
    if fo.max_residual > tol:
        fo.flags.append(f"residual {fo.max_residual:.3e} exceeds {tol:.1e}: "
                        "no exact solution, tuple is not a contraction of the required kind")
    return fo


def uniqueness_check(t: OperatorTuple, tol: float = SOLVER_TOL, side: str = "direct",
                     rng: np.random.Generator | None = None) -> dict:
    """Re-solve on rotated and permuted bases and with shifted rank cuts.

    Deviations are measured after mapping back to the reference basis and
    are relative to max(1, ||E_i||).
    """
    rng = np.random.default_rng(0) if rng is None else rng
    ref = solve_fundamental(t, side, tol)
    r = ref.rank
    if r == 0:
        return {"rank": 0, "max_deviation": 0.0, "pass": True, "variants": 0}
    B = ref.basis
    variants = []
    q = random_unitary(rng, r)
    variants.append(("rotated", B @ q, None))
    perm = np.eye(r)[rng.permutation(r)]
    variants.append(("permuted", B @ perm, None))
    variants.append(("cut_x10", None, tol * 10))
    variants.append(("cut_/10", None, tol / 10))
    worst = 0.0
    for name, basis, cut in variants:
        alt = solve_fundamental(t, side, tol, basis=basis, cut=cut)
        if alt.rank != r:
            worst = np.inf
            continue
        align = adj(B) @ alt.basis  # alt coordinates -> reference coordinates
        for i in range(1, t.n):
            mapped = align @ alt.op(i) @ adj(align)
            dev = op_norm(mapped - ref.op(i)) / max(1.0, op_norm(ref.op(i)))
            worst = max(worst, dev)
    return {"rank": r, "max_deviation": float(worst), "pass": bool(worst <= 1e-9),
            "variants": len(variants)}


def z_grid(points: int = 720) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(points) / points)


def radius_bound_check(fo: FundamentalOperators, grid=None, tol: float = 1e-8,
                       radius_points: int = 720) -> dict:
    """max over |z| = 1 of omega(E_i + z E_{n-i}) and of omega(E_i^* + z E_{n-i})."""
    grid = z_grid(64) if grid is None else np.asarray(grid)
    n = fo.n
    rows = []
    ok = True
    # omega(E_{n-i} + z E_i) = omega(E_i + conj(z) E_{n-i}), and likewise for
    # the starred family, so on a conjugation-closed grid row n-i repeats row i.
    symmetric = np.allclose(np.sort_complex(grid), np.sort_complex(np.conj(grid)))
    cache = {}
    for i in range(1, n):
        k = k_const(n, i)
        worst = worst_star = 0.0
        if symmetric and (n - i) in cache:
            worst, worst_star = cache[n - i]
        elif fo.rank:
            Ei, Ej = fo.op(i), fo.op(n - i)
            zz = grid[:, None, None]
            worst = max_numerical_radius(Ei[None] + zz * Ej[None], radius_points)
            worst_star = max_numerical_radius(adj(Ei)[None] + zz * Ej[None], radius_points)
        cache[i] = (worst, worst_star)
        rows.append({"i": i, "k": k, "omega": worst, "omega_star": worst_star})
        ok &= worst <= k + tol and worst_star <= k + tol
    return {"rows": rows, "pass": bool(ok),
            "max_excess": float(max((max(r["omega"], r["omega_star"]) - r["k"] for r in rows),
                                    default=-np.inf))}


def _comm(a, b):
    return a @ b - b @ a


def _is_normal(m):
    return op_norm(m @ adj(m) - adj(m) @ m)


def lemma43_check(A: list, grid=None, tol: float = 1e-9) -> dict:
    """Evaluate the four normality/commutation conditions on A_1..A_{n-1}.

    (1) [A_i, A_j] = 0 and [A_i, A_{n-j}^*] = [A_j, A_{n-i}^*];
    (2) A_i^* + A_{n-i} z and A_j^* + A_{n-j} z commute on the grid;
    (3) A_i^* + A_{n-i} z is normal on the grid;
    (4) A_{n-i}^* + A_i z is normal on the grid.
    """
    grid = z_grid(32) if grid is None else np.asarray(grid)
    A = [np.asarray(a, dtype=complex) for a in A]
    n = len(A) + 1

    def a(i):
        return A[i - 1]

    idx = range(1, n)
    c1 = max([op_norm(_comm(a(i), a(j))) for i in idx for j in idx]
             + [op_norm(_comm(a(i), adj(a(n - j))) - _comm(a(j), adj(a(n - i))))
                for i in idx for j in idx], default=0.0)
    c2 = c3 = c4 = 0.0
    for z in grid:
        for i in idx:
            ai = adj(a(i)) + a(n - i) * z
            c3 = max(c3, _is_normal(ai))
            c4 = max(c4, _is_normal(adj(a(n - i)) + a(i) * z))
            for j in idx:
                c2 = max(c2, op_norm(_comm(ai, adj(a(j)) + a(n - j) * z)))
    vals = {"(1)": c1, "(2)": c2, "(3)": c3, "(4)": c4}
    verdicts = {k: bool(v <= tol) for k, v in vals.items()}
    return {"residuals": {k: float(v) for k, v in vals.items()}, "verdicts": verdicts,
            "agree": len(set(verdicts.values())) == 1}


def prop66_conditions(fo: FundamentalOperators, tol: float = GATE_TOL) -> dict:
    n = fo.n
    idx = range(1, n)
    c1 = max((op_norm(_comm(fo.op(i), fo.op(j))) for i in idx for j in idx), default=0.0)
    c2 = max((op_norm(_comm(fo.op(i), adj(fo.op(n - j))) - _comm(fo.op(j), adj(fo.op(n - i))))
              for i in idx for j in idx), default=0.0)
    return {"commute": float(c1), "mixed": float(c2), "pass": bool(c1 <= tol and c2 <= tol)}


def thm73_gate(fo: FundamentalOperators, tol: float = GATE_TOL) -> dict:
    """The dilation hypothesis for E (direct side) or F (adjoint side).

    Direct:  E_l E_{n-k}^* - E_k E_{n-l}^* = E_{n-k}^* E_l - E_{n-l}^* E_k.
    Adjoint: F_l^* F_{n-k} - F_k^* F_{n-l} = F_{n-k} F_l^* - F_{n-l} F_k^*.
    """
    n = fo.n
    worst = 0.0
    for l in range(1, n):
        for k in range(1, n):
            if fo.side == "direct":
                El, Ek, Enk, Enl = fo.op(l), fo.op(k), fo.op(n - k), fo.op(n - l)
                lhs = El @ adj(Enk) - Ek @ adj(Enl)
                rhs = adj(Enk) @ El - adj(Enl) @ Ek
            else:
                Fl, Fk, Fnk, Fnl = fo.op(l), fo.op(k), fo.op(n - k), fo.op(n - l)
                lhs = adj(Fl) @ Fnk - adj(Fk) @ Fnl
                rhs = Fnk @ adj(Fl) - Fnl @ adj(Fk)
            worst = max(worst, op_norm(lhs - rhs))
    return {"residual": float(worst), "pass": bool(worst <= tol)}


@dataclass
class DefectMaps:
    """Coordinate maps between H and the two defect bases.

    Bd, Bc are the bases of the defect spaces of S_n and S_n^*. Every
    identity below is written with these so that compressed E and F can be
    compared with ambient products.
    """

    t: OperatorTuple
    E: FundamentalOperators
    F: FundamentalOperators

    def __post_init__(self):
        self.Bd = self.E.basis
        self.Bc = self.F.basis
        self.D = self.E.D
        self.Dc = self.F.D
        self.Sn = self.t.S(self.t.n)

    def e(self, i):
        return self.E.op(i)

    def f(self, i):
        return self.F.op(i)


def prop71_residual(Sn: np.ndarray) -> float:
    """|| S_n D_{S_n} - D_{S_n^*} S_n ||."""
    D = defect_pair(Sn).D
    Dc = defect_pair(adj(Sn)).D
    return op_norm(Sn @ D - Dc @ Sn)


def lemma72_suite(t: OperatorTuple, E: FundamentalOperators, F: FundamentalOperators,
                  tol: float = GATE_TOL) -> dict:
    m = DefectMaps(t, E, F)
    n = t.n
    Bd, Bc, D, Dc, Sn = m.Bd, m.Bc, m.D, m.Dc, m.Sn
    out = {"prop71": prop71_residual(Sn)}
    r1 = r2 = r3 = r6 = r6mix = 0.0
    for i in range(1, n):
        Ei, Fi = m.e(i), m.f(i)
        r1 = max(r1, op_norm(Sn @ Bd @ Ei - Bc @ adj(Fi) @ adj(Bc) @ Sn @ Bd),
                 op_norm(adj(Sn) @ Bc @ Fi - Bd @ adj(Ei) @ adj(Bd) @ adj(Sn) @ Bc))
        r2 = max(r2, op_norm(adj(Bd) @ D @ t.S(i) - Ei @ adj(Bd) @ D
                             - adj(m.e(n - i)) @ adj(Bd) @ D @ Sn))
        r3 = max(r3, op_norm(t.S(i) @ Dc @ Bc - Dc @ Bc @ adj(Fi) - Sn @ Dc @ Bc @ m.f(n - i)))
    out["(1)"], out["(2)"], out["(3)"] = r1, r2, r3
    egate = prop66_conditions(E, tol)["commute"] <= tol
    fgate = prop66_conditions(F, tol)["commute"] <= tol
    r4 = r5 = 0.0
    for i in range(1, n):
        for j in range(1, n):
            lhs = adj(t.S(n - j)) @ t.S(i) - adj(t.S(n - i)) @ t.S(j)
            inner = adj(m.e(n - j)) @ m.e(i) - adj(m.e(n - i)) @ m.e(j)
            r4 = max(r4, op_norm(lhs - D @ Bd @ inner @ adj(Bd) @ D))
            lhs = t.S(i) @ adj(t.S(n - j)) - t.S(j) @ adj(t.S(n - i))
            inner = adj(m.f(i)) @ m.f(n - j) - adj(m.f(j)) @ m.f(n - i)
            r5 = max(r5, op_norm(lhs - Dc @ Bc @ inner @ adj(Bc) @ Dc))
    out["(4)"] = r4
    out["(5)"] = r5
    gates = {"(4)": bool(egate), "(5)": bool(fgate)}
    for i in range(1, n):
        k = k_const(n, i)
        zz = z_grid(32)[:, None, None]
        if E.rank:
            r6 = max(r6, max_numerical_radius(m.e(n - i)[None] + adj(m.e(i))[None] * zz) - k)
        if E.rank or F.rank:
            # Mixed-space variant: F lives on the co-defect space, so it is
            # compared after embedding both into H.
            amb = (Bc @ adj(m.f(n - i)) @ adj(Bc))[None] + (Bd @ m.e(i) @ adj(Bd))[None] * zz
            r6mix = max(r6mix, max_numerical_radius(amb) - k)
    out["(6)"] = max(r6, 0.0)
    out["(6)_mixed_ambient"] = max(r6mix, 0.0)
    passes = {
        "prop71": out["prop71"] <= 1e-12 * max(1.0, op_norm(Sn)) * 10,
        "(1)": r1 <= tol, "(2)": r2 <= tol, "(3)": r3 <= tol,
        "(4)": (r4 <= tol) if egate else None, "(5)": (r5 <= tol) if fgate else None,
        "(6)": out["(6)"] <= 1e-8,
    }
    return {"residuals": {k: float(v) for k, v in out.items()}, "gates": gates,
            "pass": {k: (None if v is None else bool(v)) for k, v in passes.items()},
            "informational": ["(6)_mixed_ambient"]}


def unitary_equivalence_invariance(t: OperatorTuple, W: np.ndarray, tol: float = 1e-9,
                                   side: str = "direct") -> dict:
    """E' for W^* t W against V E V^* with V = B'^* W^* B."""
    E = solve_fundamental(t, side)
    E2 = solve_fundamental(t.conjugate_by(W), side)
    if E.rank != E2.rank:
        return {"residual": float("inf"), "pass": False, "rank": [E.rank, E2.rank]}
    V = adj(E2.basis) @ adj(W) @ E.basis
    worst = max((op_norm(E2.op(i) - V @ E.op(i) @ adj(V)) for i in range(1, t.n)), default=0.0)
    return {"residual": float(worst), "pass": bool(worst <= tol), "rank": [E.rank, E2.rank]}
