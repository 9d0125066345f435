"""Operator pencils, the necessary-condition suite and the tuple classifiers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .combinatorics import k_const
from .errors import DomainError
from .geometry import alpha_grid, beta_grid, elementary_symmetric, gamma_weights, roots_membership
from .linalg import (OperatorTuple, adj, commute_check, commute_tol_for, hermitian_part,
                     joint_eigenvalues, op_norm, require_commuting, spectral_radius)

UNITARY = "Γₙ-unitary"
ISOMETRY = "Γₙ-isometry"
PURE_ISOMETRY = "pure Γₙ-isometry"
CO_ISOMETRY = "Γₙ-co-isometry"
NECESSARY_PASS = "necessary-conditions-pass"
FAIL = "fail"


@dataclass(frozen=True)
class PencilEvaluation:
    i: int
    alpha: complex
    phi1: np.ndarray
    phi2: np.ndarray
    min_eigs: tuple


def _pencils(t: OperatorTuple, i: int, alpha: complex):
    n, d = t.n, t.dim
    k = k_const(n, i)
    eye = np.eye(d, dtype=complex)
    X = alpha ** i * t.S(i)
    Y = alpha ** (n - i) * t.S(n - i)
    Z = alpha ** n * t.S(n)
    a, b = k * eye - X, k * Z - Y
    c, e = k * eye - Y, k * Z - X
    phi1 = hermitian_part(adj(a) @ a - adj(b) @ b)
    phi2 = hermitian_part(adj(c) @ c - adj(e) @ e)
    return phi1, phi2


def op_pencil(i: int, alpha: complex, t: OperatorTuple, check: bool = True) -> PencilEvaluation:
    """Both operator pencils at index i for the alpha-scaled tuple.

    Expanded, Phi_1 = k^2(I - Z*Z) + X*X - Y*Y - k(X + X*) + k(Z*Y + Y*Z)
    with X = alpha^i S_i, Y = alpha^{n-i} S_{n-i}, Z = alpha^n S_n.
    """
    if check:
        require_commuting(t)
    if not 1 <= i <= t.n - 1:
        raise DomainError(f"pencil index {i} outside 1..{t.n - 1}")
    if abs(alpha) > 1 + 1e-12:
        raise DomainError("|alpha| must be at most 1")
    p1, p2 = _pencils(t, i, alpha)
    return PencilEvaluation(i, complex(alpha), p1, p2,
                            (float(np.linalg.eigvalsh(p1)[0]), float(np.linalg.eigvalsh(p2)[0])))


def pencil_min_eig(t: OperatorTuple, alphas) -> float:
    """Smallest eigenvalue of either pencil over all i and the alpha grid."""
    worst = np.inf
    for i in range(1, t.n):
        for a in alphas:
            p1, p2 = _pencils(t, i, a)
            worst = min(worst, np.linalg.eigvalsh(p1)[0], np.linalg.eigvalsh(p2)[0])
    return float(worst)


def pencil_max_norm(t: OperatorTuple, betas) -> float:
    worst = 0.0
    for i in range(1, t.n):
        for b in betas:
            p1, p2 = _pencils(t, i, b)
            worst = max(worst, op_norm(p1), op_norm(p2))
    return worst


@dataclass
class Evidence:
    name: str
    residual: float
    tol: float
    passed: bool | None = None

    def __post_init__(self):
        if self.passed is None:
            self.passed = bool(self.residual <= self.tol)
        self.residual = float(self.residual)

    def to_dict(self) -> dict:
        return {"name": self.name, "residual": self.residual, "tol": self.tol,
                "pass": bool(self.passed)}


@dataclass
class ClassifierVerdict:
    cls: str
    evidence: list = field(default_factory=list)
    certified: bool = False
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.cls != FAIL

    def to_dict(self) -> dict:
        return {"class": self.cls, "certified": self.certified,
                "evidence": [e.to_dict() for e in self.evidence], "notes": list(self.notes)}


def _eig_membership(t: OperatorTuple, tol: float):
    """Largest root modulus over the joint eigenvalues, and the in-Γ verdict."""
    spec = joint_eigenvalues(t)
    worst = 0.0
    inside = True
    for p in spec.points:
        v = roots_membership(np.array(p), tol)
        worst = max(worst, max(v.witnesses))
        inside &= v.in_closed
    return worst, inside


def necessary_contraction_suite(t: OperatorTuple, alphas=None, tol: float = 1e-10) -> dict:
    """Norm bounds, pencil positivity and joint-spectrum membership.

    A failure refutes the contraction property; a pass only fails to refute it.
    """
    alphas = alpha_grid() if alphas is None else np.asarray(alphas)
    n = t.n
    comm, comm_ok = commute_check(t)
    ev = [Evidence("commutator", comm, commute_tol_for(t.dim), comm_ok)]
    norm_excess = max([op_norm(t.S(i)) - k_const(n, i) for i in range(1, n)]
                      + [op_norm(t.S(n)) - 1.0])
    ev.append(Evidence("norm_bounds", max(norm_excess, 0.0), tol))
    if n > 1:
        lam = pencil_min_eig(t, alphas)
        ev.append(Evidence("pencil_min_eig", max(-lam, 0.0), tol))
    if comm_ok:
        worst, inside = _eig_membership(t, 1e-8)
        ev.append(Evidence("joint_spectrum_max_root", max(worst - 1.0, 0.0), 1e-8, inside))
    else:
        ev.append(Evidence("joint_spectrum_max_root", np.inf, 1e-8, False))
    passed = all(e.passed for e in ev)
    return {"verdict": "not-refuted" if passed else "refuted", "pass": passed,
            "evidence": ev,
            "note": "necessary conditions only; a pass does not certify a contraction"}


def gamma_unitary_from_unitaries(us, tol: float = 1e-10) -> OperatorTuple:
    us = [np.asarray(u, dtype=complex) for u in us]
    d = us[0].shape[0]
    for u in us:
        if op_norm(adj(u) @ u - np.eye(d)) > tol or op_norm(u @ adj(u) - np.eye(d)) > tol:
            raise DomainError("input matrix is not unitary")
    _, ok = commute_check(OperatorTuple(tuple(us)), max(tol, commute_tol_for(d)))
    if not ok:
        raise DomainError("input unitaries do not commute")
    return OperatorTuple(tuple(elementary_symmetric(us)[1:]))


def symmetrize_tuple(ms) -> OperatorTuple:
    """(s_1(M), ..., s_n(M)) for commuting matrices M_1, ..., M_n."""
    return OperatorTuple(tuple(elementary_symmetric([np.asarray(m, dtype=complex) for m in ms])[1:]))


def _identity_residual(t: OperatorTuple) -> float:
    n = t.n
    return max((op_norm(t.S(i) - adj(t.S(n - i)) @ t.S(n)) for i in range(1, n)), default=0.0)


def _truncation(t: OperatorTuple) -> OperatorTuple | None:
    n = t.n
    if n == 1:
        return None
    return OperatorTuple(tuple(g * t.S(i) for g, i in zip(gamma_weights(n), range(1, n))))


def _is_normal_tuple(t: OperatorTuple, tol: float) -> bool:
    return all(op_norm(m @ adj(m) - adj(m) @ m) <= tol for m in t.ops)


def _truncation_evidence(t: OperatorTuple, tol: float, alphas) -> list:
    tr = _truncation(t)
    if tr is None:
        return [Evidence("truncation_in_gamma", 0.0, tol, True)]
    suite = necessary_contraction_suite(tr, alphas, tol)
    return [Evidence("truncation_" + e.name, e.residual, e.tol, e.passed) for e in suite["evidence"]]


def classify_unitary(t: OperatorTuple, tol: float = 1e-10, alphas=None) -> ClassifierVerdict:
    d, n = t.dim, t.n
    eye = np.eye(d)
    Sn = t.S(n)
    ev = [Evidence("commutator", commute_check(t)[0], commute_tol_for(d)),
          Evidence("Sn_unitary", max(op_norm(adj(Sn) @ Sn - eye), op_norm(Sn @ adj(Sn) - eye)), tol),
          Evidence("normality", max(op_norm(m @ adj(m) - adj(m) @ m) for m in t.ops), tol),
          Evidence("Si_eq_Sn-i*Sn", _identity_residual(t), tol)]
    if ev[0].passed:
        ev += _truncation_evidence(t, tol, alphas)
    ok = all(e.passed for e in ev)
    return ClassifierVerdict(UNITARY if ok else FAIL, ev, certified=ok,
                             notes=["normal commuting tuple: joint-eigenvalue membership is exact"]
                             if ok else [])


def _mobius_residual(t: OperatorTuple, betas) -> float | None:
    """Isometry defect of (k b^n S_n - S_{n-i})(k - b^i S_i)^{-1} and its mirror."""
    n, d = t.n, t.dim
    eye = np.eye(d)
    for i in range(1, n):
        if spectral_radius(t.S(i)) >= k_const(n, i):
            return None
    worst = 0.0
    for i in range(1, n):
        k = k_const(n, i)
        for b in betas:
            for a_idx, b_idx in ((i, n - i), (n - i, i)):
                M = (k * b ** n * t.S(n) - t.S(b_idx)) @ np.linalg.inv(k * eye - b ** a_idx * t.S(a_idx))
                worst = max(worst, op_norm(adj(M) @ M - eye))
    return worst


def classify_isometry(t: OperatorTuple, tol: float = 1e-10, alphas=None, betas=None,
                      interior=None) -> ClassifierVerdict:
    """Isometry criteria evaluated independently.

    ``interior`` optionally restricts the residuals to a set of coordinates,
    as used for truncated models where the last block is cut off.
    """
    betas = beta_grid() if betas is None else np.asarray(betas)
    n, d = t.n, t.dim
    Sn = t.S(n)
    rows = np.arange(d) if interior is None else np.asarray(interior)

    def cut(m):
        return m[np.ix_(rows, rows)]

    eye = np.eye(len(rows))
    ident = max((op_norm(cut(t.S(i) - adj(t.S(n - i)) @ Sn)) for i in range(1, n)), default=0.0)
    ev = [Evidence("Sn_isometric", op_norm(cut(adj(Sn) @ Sn) - eye), tol),
          Evidence("Si_eq_Sn-i*Sn", ident, tol)]
    crit2 = all(e.passed for e in ev)
    if interior is None:
        ev += _truncation_evidence(t, tol, alphas)
        crit2 = all(e.passed for e in ev)
    worst = 0.0
    for i in range(1, n):
        for b in betas:
            p1, p2 = _pencils(t, i, b)
            worst = max(worst, op_norm(cut(p1)), op_norm(cut(p2)))
    ev.append(Evidence("pencils_vanish", worst, tol))
    if interior is None:
        mob = _mobius_residual(t, betas)
        if mob is not None:
            ev.append(Evidence("mobius_isometric", mob, max(tol, 1e-9)))
    if not crit2:
        return ClassifierVerdict(FAIL, ev)
    verdict = ClassifierVerdict(ISOMETRY, ev, certified=_is_normal_tuple(t, tol) if interior is None else False)
    if interior is not None and spectral_radius(Sn) < 1 - 1e-8:
        # A truncated shift has no eigenvalue on the circle, so no unitary summand.
        verdict.cls = PURE_ISOMETRY
        verdict.notes.append("S_n has spectral radius < 1: no unitary part on the truncation")
    if interior is None:
        uni = classify_unitary(t, tol, alphas)
        if uni.ok:
            verdict.cls = UNITARY
            verdict.certified = True
            verdict.notes.append("finite-dimensional isometry is unitary; escalated")
    return verdict


def classify_coisometry(t: OperatorTuple, tol: float = 1e-10, **kw) -> ClassifierVerdict:
    v = classify_isometry(t.adjoint(), tol, **kw)
    if v.cls == ISOMETRY:
        v.cls = CO_ISOMETRY
    return v


def isometry_implies_contraction_check(t: OperatorTuple, tol: float = 1e-10, alphas=None) -> dict:
    """If the suite passes and S_n is isometric, the algebraic identities must hold."""
    n, d = t.n, t.dim
    eye = np.eye(d)
    Sn = t.S(n)
    suite = necessary_contraction_suite(t, alphas, tol)
    iso = op_norm(adj(Sn) @ Sn - eye) <= tol
    uni = iso and op_norm(Sn @ adj(Sn) - eye) <= tol
    out = {"suite_pass": suite["pass"], "Sn_isometric": bool(iso), "Sn_unitary": bool(uni),
           "triggered": bool(suite["pass"] and iso), "residuals": {}, "pass": True}
    if not out["triggered"]:
        return out
    res = out["residuals"]
    res["Si_eq_Sn-i*Sn"] = _identity_residual(t)
    res["Si*Si_eq_Sn-i*Sn-i"] = max((op_norm(adj(t.S(i)) @ t.S(i) - adj(t.S(n - i)) @ t.S(n - i))
                                     for i in range(1, n)), default=0.0)
    if uni:
        res["normality"] = max(op_norm(m @ adj(m) - adj(m) @ m) for m in t.ops)
    out["residuals"] = {k: float(v) for k, v in res.items()}
    out["pass"] = all(v <= tol for v in res.values())
    return out
