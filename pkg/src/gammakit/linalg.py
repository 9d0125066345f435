"""Dense complex linear algebra primitives.

Everything here is a pure function of numpy arrays. Tuples of commuting
matrices are carried by :class:`OperatorTuple`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.linalg

from .errors import DomainError, StructuralError

PSD_TOL = 1e-10
RANK_TOL = 1e-10


def commute_tol_for(dim: int) -> float:
    """Default commutator tolerance, 1e-10 per unit of dimension."""
    return 1e-10 * max(int(dim), 1)


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise StructuralError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise StructuralError("matrix has non-finite entries")
    return a


def _square(m) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise StructuralError(f"matrix is not square: {a.shape}")
    return a


def adj(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def op_norm(m) -> float:
    """Largest singular value, from the top eigenvalue of M*M."""
    a = as_matrix(m)
    if a.size == 0:
        return 0.0
    gram = adj(a) @ a
    gram = 0.5 * (gram + adj(gram))
    top = np.linalg.eigvalsh(gram)[-1]
    return float(np.sqrt(max(top, 0.0)))


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + adj(m))


@dataclass(frozen=True)
class OperatorTuple:
    """An n-tuple of square matrices acting on a common space.

    Commutativity is not enforced at construction; operations that rely on
    it call :func:`commute_check` themselves.
    """

    ops: tuple = field()

    def __post_init__(self):
        mats = tuple(_square(m).copy() for m in self.ops)
        if not mats:
            raise StructuralError("an operator tuple needs at least one member")
        d = mats[0].shape[0]
        for k, m in enumerate(mats):
            if m.shape != (d, d):
                raise StructuralError(
                    f"member {k + 1} has shape {m.shape}, expected {(d, d)}")
        for m in mats:
            m.setflags(write=False)
        object.__setattr__(self, "ops", mats)

    @property
    def n(self) -> int:
        return len(self.ops)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def S(self, i: int) -> np.ndarray:
        """1-based access with S(0) = I, matching the s_0 = 1 convention."""
        if i == 0:
            return np.eye(self.dim, dtype=complex)
        if not 1 <= i <= self.n:
            raise DomainError(f"index {i} outside 0..{self.n}")
        return self.ops[i - 1]

    def adjoint(self) -> "OperatorTuple":
        return OperatorTuple(tuple(adj(m) for m in self.ops))

    def conjugate_by(self, w: np.ndarray) -> "OperatorTuple":
        """Return (W* S_i W)."""
        w = _square(w)
        return OperatorTuple(tuple(adj(w) @ m @ w for m in self.ops))

    def scaled(self, factors) -> "OperatorTuple":
        return OperatorTuple(tuple(f * m for f, m in zip(factors, self.ops)))

    def compress(self, idx) -> "OperatorTuple":
        idx = np.asarray(idx, dtype=int)
        return OperatorTuple(tuple(m[np.ix_(idx, idx)] for m in self.ops))


def commute_check(t: OperatorTuple, tol: float | None = None):
    """Largest pairwise commutator norm and whether it is within ``tol``."""
    if not isinstance(t, OperatorTuple):
        t = OperatorTuple(tuple(t))
    tol = commute_tol_for(t.dim) if tol is None else tol
    worst = 0.0
    for a, b in combinations(t.ops, 2):
        worst = max(worst, op_norm(a @ b - b @ a))
    return worst, worst <= tol


def require_commuting(t: OperatorTuple, tol: float | None = None) -> None:
    worst, ok = commute_check(t, tol)
    if not ok:
        raise DomainError(f"tuple does not commute (max commutator norm {worst:.3e})")


def psd_check(m, tol: float = PSD_TOL):
    """Return ``(verdict, lambda_min)`` for a Hermitian matrix.

    Hermitian-ness is judged relative to the size of ``m`` so that large
    pencils built from binomial constants do not trip on rounding.
    """
    a = _square(m)
    if a.size == 0:
        return True, 0.0
    scale = max(1.0, float(np.max(np.abs(a))))
    skew = op_norm(a - adj(a))
    if skew > tol * scale:
        raise DomainError(f"matrix is not Hermitian (skew norm {skew:.3e})")
    lam = float(np.linalg.eigvalsh(hermitian_part(a))[0])
    return lam >= -tol, lam


def _psd_eig(m, tol):
    ok, lam = psd_check(m, tol)
    if not ok:
        raise DomainError(f"matrix is not positive semidefinite (min eigenvalue {lam:.3e})")
    w, v = np.linalg.eigh(hermitian_part(_square(m)))
    w = np.where(w < 0, 0.0, w)
    return w, v


def psd_sqrt(m, tol: float = PSD_TOL) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues in [-tol, 0) are clamped to 0."""
    w, v = _psd_eig(m, tol)
    return (v * np.sqrt(w)) @ adj(v)


@dataclass(frozen=True)
class DefectPair:
    """D_T together with an orthonormal basis of its range.

    ``sing`` holds the nonzero eigenvalues of D_T in basis order, so that
    D_T B = B diag(sing).
    """

    D: np.ndarray
    basis: np.ndarray
    sing: np.ndarray

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ adj(self.basis)

    def pinv(self) -> np.ndarray:
        """Pseudoinverse of D_T consistent with the chosen basis."""
        return (self.basis / self.sing) @ adj(self.basis)


def defect_pair(T, tol: float = PSD_TOL) -> DefectPair:
    """Defect operator (I - T*T)^{1/2} and a basis of its range.

    The rank cut is made on the spectrum of I - T*T rather than on that of
    its square root: rounding noise of size 1e-16 in I - T*T would otherwise
    show up as spurious defect directions of size 1e-8.
    """
    T = _square(T)
    d = T.shape[0]
    if op_norm(T) > 1 + tol:
        raise DomainError("not a contraction")
    w, v = np.linalg.eigh(hermitian_part(np.eye(d) - adj(T) @ T))
    keep = w > tol
    w = np.where(keep, w, 0.0)
    D = (v * np.sqrt(w)) @ adj(v)
    basis = v[:, keep]
    return DefectPair(D=D, basis=basis, sing=np.sqrt(w[keep]))


def pseudoinverse(m, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Moore-Penrose inverse; singular values below rank_tol*sigma_max are dropped."""
    a = as_matrix(m)
    if a.size == 0:
        return adj(a).copy()
    return np.linalg.pinv(a, rcond=rank_tol)


def penrose_residuals(m, mp) -> dict:
    a = as_matrix(m)
    return {
        "AXA": op_norm(a @ mp @ a - a),
        "XAX": op_norm(mp @ a @ mp - mp),
        "AX_hermitian": op_norm(a @ mp - adj(a @ mp)),
        "XA_hermitian": op_norm(mp @ a - adj(mp @ a)),
    }


def _lambda_max_at(a: np.ndarray, theta: np.ndarray) -> np.ndarray:
    ph = np.exp(1j * np.asarray(theta))[:, None, None]
    h = 0.5 * (ph * a + np.conj(ph) * adj(a))
    return np.linalg.eigvalsh(h)[:, -1]


def numerical_radius(a, grid_points: int = 720, refine: bool = True) -> float:
    """Numerical radius from a uniform angle grid.

    omega(A) = max_theta lambda_max(Re(e^{i theta} A)). The grid maximum is a
    lower bound that is nondecreasing under refinement; with ``refine`` the
    best grid cells are additionally polished by a bounded scalar search,
    which removes the O(h^2) grid bias.
    """
    a = _square(a)
    if grid_points < 8:
        raise DomainError("grid_points must be at least 8")
    if a.size == 0:
        return 0.0
    theta = 2 * np.pi * np.arange(grid_points) / grid_points
    vals = _lambda_max_at(a, theta)
    best = float(vals.max())
    if not refine:
        return best
    from scipy.optimize import minimize_scalar

    h = 2 * np.pi / grid_points
    for k in np.argsort(vals)[-3:]:
        res = minimize_scalar(lambda x: -_lambda_max_at(a, np.array([x]))[0],
                              bounds=(theta[k] - h, theta[k] + h), method="bounded",
                              options={"xatol": 1e-12})
        best = max(best, float(-res.fun))
    return best


def max_numerical_radius(mats, grid_points: int = 720, refine: bool = True) -> float:
    """max_k omega(A_k) for a stack of equal-size square matrices.

    All (matrix, angle) pairs are evaluated in one batched eigensolve and only
    the overall best cell is refined, which is what bound checks over a
    parameter grid need.
    """
    mats = np.asarray(mats, dtype=complex)
    if mats.ndim == 2:
        mats = mats[None]
    if mats.shape[-1] == 0 or mats.shape[0] == 0:
        return 0.0
    if grid_points < 8:
        raise DomainError("grid_points must be at least 8")
    theta = 2 * np.pi * np.arange(grid_points) / grid_points
    ph = np.exp(1j * theta)[None, :, None, None]
    a = mats[:, None]
    h = 0.5 * (ph * a + np.conj(ph) * np.conj(np.swapaxes(a, -1, -2)))
    vals = np.linalg.eigvalsh(h)[..., -1]
    best = float(vals.max())
    if not refine:
        return best
    from scipy.optimize import minimize_scalar

    k, j = np.unravel_index(np.argmax(vals), vals.shape)
    step = 2 * np.pi / grid_points
    res = minimize_scalar(lambda x: -_lambda_max_at(mats[k], np.array([x]))[0],
                          bounds=(theta[j] - step, theta[j] + step), method="bounded",
                          options={"xatol": 1e-12})
    return max(best, float(-res.fun))


def spectral_radius(a) -> float:
    a = _square(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(a))))


@dataclass(frozen=True)
class Spectrum:
    points: tuple
    multiplicities: tuple

    def as_array(self) -> np.ndarray:
        """Points repeated by multiplicity, one row per joint eigenvalue."""
        rows = [p for p, k in zip(self.points, self.multiplicities) for _ in range(k)]
        return np.array(rows, dtype=complex)


def _triangular_defect(t: OperatorTuple, q: np.ndarray) -> float:
    worst = 0.0
    for m in t.ops:
        r = adj(q) @ m @ q
        worst = max(worst, float(np.linalg.norm(np.tril(r, -1))))
    return worst


def _null_basis(m: np.ndarray, tol: float) -> np.ndarray:
    """Kernel basis; always returns at least the smallest right singular vector."""
    _, s, vh = np.linalg.svd(m)
    scale = max(1.0, s[0] if s.size else 1.0)
    k = max(1, int(np.sum(s <= tol * scale)))
    return adj(vh[-k:])


def _deflate(mats: list[np.ndarray], tol: float) -> np.ndarray:
    """Unitary Q making every matrix upper triangular, by common eigenvectors."""
    d = mats[0].shape[0]
    if d == 1:
        return np.eye(1, dtype=complex)
    sub = np.eye(d, dtype=complex)
    for m in mats:
        proj = adj(sub) @ m @ sub
        lam = np.linalg.eigvals(proj)[0]
        ker = _null_basis(proj - lam * np.eye(proj.shape[0]), max(tol, 1e-8))
        sub = sub @ ker
        sub, _ = np.linalg.qr(sub)
    v = sub[:, :1] / np.linalg.norm(sub[:, :1])
    # QR of [v | I] puts a unit multiple of v in the first column.
    full = np.linalg.qr(np.hstack([v, np.eye(d, dtype=complex)]))[0][:, :d]
    rest = full[:, 1:]
    inner = _deflate([adj(rest) @ m @ rest for m in mats], tol)
    return np.hstack([full[:, :1], rest @ inner])


def _group(points: np.ndarray, tol: float):
    pts, mult = [], []
    for p in points:
        for k, q in enumerate(pts):
            if np.max(np.abs(p - q)) <= tol:
                mult[k] += 1
                break
        else:
            pts.append(p)
            mult.append(1)
    return pts, mult


def joint_eigenvalues(t: OperatorTuple, tol: float | None = None,
                      rng: np.random.Generator | None = None) -> Spectrum:
    """Joint eigenvalues by simultaneous unitary triangularization.

    A Schur form of a random linear combination usually triangularizes the
    whole tuple; when eigenvalue collisions make it fail (checked directly),
    the tuple is triangularized by recursive common-eigenvector deflation.
    """
    tol = commute_tol_for(t.dim) if tol is None else tol
    require_commuting(t, tol)
    rng = np.random.default_rng(0) if rng is None else rng
    scale = max(1.0, max(op_norm(m) for m in t.ops))
    tri_tol = 1e-8 * scale * t.dim
    q = None
    for _ in range(3):
        c = rng.normal(size=t.n) + 1j * rng.normal(size=t.n)
        comb = sum(ci * m for ci, m in zip(c, t.ops))
        _, z = scipy.linalg.schur(comb, output="complex")
        if _triangular_defect(t, z) <= tri_tol:
            q = z
            break
    if q is None:
        q = _deflate(list(t.ops), tol)
    diag = np.array([np.diag(adj(q) @ m @ q) for m in t.ops]).T
    pts, mult = _group(diag, 1e-7 * scale)
    return Spectrum(points=tuple(tuple(complex(x) for x in p) for p in pts),
                    multiplicities=tuple(mult))


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph
