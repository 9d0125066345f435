"""Scalar geometry of the closed symmetrized polydisc.

Points are plain complex numpy vectors. ``s`` always means (s_1, ..., s_n)
with s_0 = 1 left implicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .combinatorics import F, binom, f_domain, k_const
from .errors import DomainError
from .linalg import psd_check

MEMBERSHIP_TOL = 1e-8

OPEN, CLOSED, BOUNDARY, OUTSIDE = "open", "closed", "boundary", "outside"


def elementary_symmetric(values) -> list:
    """[e_0, e_1, ..., e_n] by expanding prod (t + v_k) one factor at a time.

    Works for scalars and for commuting square matrices alike; for matrices
    e_0 is the identity of matching size.
    """
    values = list(values)
    if values and np.ndim(values[0]) == 2:
        one = np.eye(np.shape(values[0])[0], dtype=complex)
        zero = np.zeros_like(one)
    else:
        one, zero = 1.0 + 0j, 0j
    e = [one]
    for v in values:
        e.append(zero)
        for k in range(len(e) - 1, 0, -1):
            e[k] = e[k] + v @ e[k - 1] if np.ndim(v) == 2 else e[k] + v * e[k - 1]
    return e


def symmetrize(z) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return np.array(elementary_symmetric(z)[1:], dtype=complex)


def symmetrize_batch(z: np.ndarray) -> np.ndarray:
    """Row-wise symmetrization of an (N, n) array; returns (N, n+1) with s_0."""
    z = np.asarray(z, dtype=complex)
    N, n = z.shape
    e = np.zeros((N, n + 1), dtype=complex)
    e[:, 0] = 1
    for k in range(n):
        e[:, 1:k + 2] = e[:, 1:k + 2] + z[:, k:k + 1] * e[:, 0:k + 1]
    return e


def sample_polydisc(rng: np.random.Generator, size: int, m: int) -> np.ndarray:
    """Uniform points of the open polydisc by per-coordinate rejection."""
    out = np.empty(size * m, dtype=complex)
    filled = 0
    while filled < out.size:
        need = out.size - filled
        cand = rng.uniform(-1, 1, size=(2 * need + 16, 2))
        cand = cand[:, 0] + 1j * cand[:, 1]
        cand = cand[np.abs(cand) < 1][:need]
        out[filled:filled + cand.size] = cand
        filled += cand.size
    return out.reshape(size, m)


def _check_h_index(m1: int, i: int, j: int):
    m = m1 - 1
    if m < 1 or not 1 <= i <= m + 1 or not i - m - 2 <= j <= i - 1:
        raise DomainError(f"h index (m+1={m1}, i={i}, j={j}) out of range")


def h_func(m_plus_1: int, i: int, j: int, z):
    """(h_ij, h_i'j) = (|s_i|^2 - |s_{m+2+j-i}|^2, its negative)."""
    _check_h_index(m_plus_1, i, j)
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != m_plus_1:
        raise DomainError(f"z must have length {m_plus_1}")
    e = symmetrize_batch(z.reshape(-1, m_plus_1))
    val = _h_from_e(e, m_plus_1, i, j)
    val = val[0] if z.ndim == 1 else val
    return val, -val


def _pick(e: np.ndarray, k: int) -> np.ndarray:
    if 0 <= k < e.shape[1]:
        return e[:, k]
    return np.zeros(e.shape[0], dtype=complex)


def _h_from_e(e, m1, i, j):
    m = m1 - 1
    return np.abs(_pick(e, i)) ** 2 - np.abs(_pick(e, m + 2 + j - i)) ** 2


def _g_from_e(e, w, m, i, l, j):
    a = np.conj(_pick(e, i)) * _pick(e, i - l)
    b = np.conj(_pick(e, m + 2 + j - i)) * _pick(e, m + 2 + j - l - i)
    return np.real(w * (a - b))


def g_func(m: int, i: int, l: int, j: int, z, w):
    """(g_ilj, g_i'lj) with g_i'lj = -g_ilj."""
    if j not in f_domain(m, i, l):
        raise DomainError(f"g index (m={m}, i={i}, l={l}, j={j}) out of range")
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != m:
        raise DomainError(f"z must have length {m}")
    e = symmetrize_batch(z.reshape(-1, m))
    val = _g_from_e(e, np.asarray(w).reshape(-1), m, i, l, j)
    val = val[0] if z.ndim == 1 else val
    return val, -val


def h_bound(m_plus_1: int, i: int, j: int) -> int:
    """Stated bound for |h_ij|; 0 on the row j = 2i-m-2 where h vanishes."""
    _check_h_index(m_plus_1, i, j)
    m = m_plus_1 - 1
    if j == 2 * i - m - 2:
        return 0
    if j == -1:
        if i == m + 1:
            return 1
        return abs(binom(m + 1, m - i) ** 2 - binom(m + 1, i - 1) ** 2)
    return abs(binom(m + 1, i) ** 2 - binom(m + 1, m + 2 + j - i) ** 2)


def g_bound(m: int, i: int, l: int, j: int) -> int:
    """Stated bound for |g_ilj|.

    On the row j = l-2 three rules are listed; when more than one applies the
    special cases i = l and i = m take precedence over the general i >= l+1 rule.
    """
    if j == 2 * i - m - 2:
        return 0
    if j != l - 2:
        return abs(F(m, i, l, j))
    if i == l:
        return binom(m, i)
    if i == m:
        return binom(m, l)
    return abs(binom(m, m - 1 - i) * binom(m, m - 1 - i + l)
               - binom(m, i - 1) * binom(m, i - l - 1))


def h_rows(m_plus_1: int):
    m = m_plus_1 - 1
    for i in range(1, m + 2):
        for j in range(i - m - 2, i):
            yield i, j


def g_rows(m: int):
    for i in range(1, m + 1):
        for l in range(0, i + 1):
            for j in f_domain(m, i, l):
                yield i, l, j


@dataclass
class EstimateReport:
    m_plus_1: int
    samples: int
    seed: int
    tol: float
    violations: list = field(default_factory=list)
    zero_row_max: float = 0.0
    max_ratio: float = 0.0
    sharpness: dict = field(default_factory=dict)
    records: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and self.zero_row_max <= 1e-12

    def min_sharpness(self, k: int = 5) -> float:
        vals = [r for key, r in self.sharpness.items() if key[1] == k]
        return min(vals) if vals else float("nan")

    def to_dict(self) -> dict:
        sharp = [{"family": fam, "k": k, "min_ratio": r}
                 for (fam, k), r in sorted(self.sharpness.items())]
        return {"m_plus_1": self.m_plus_1, "samples": self.samples, "seed": self.seed,
                "tol": self.tol, "violations": self.violations,
                "zero_row_max": self.zero_row_max, "max_ratio": self.max_ratio,
                "sharpness": sharp, "records": self.records}


def verify_estimates(m_plus_1: int, samples: int, seed: int, tol: float = 1e-10,
                     batch: int = 20000) -> EstimateReport:
    """Sample the polydisc and compare h and g against their stated bounds.

    h lives on D^{m+1}; g lives on D^m x D with w the last coordinate. The
    sharpness probe evaluates both at (1 - 10^-k)(1, ..., 1), k = 2..5, and
    records the smallest ratio value/bound over rows with a nonzero bound.
    The g probe uses w = 1 - 10^-k as well, which is where Re(w x) peaks
    for real positive x.
    """
    m1 = m_plus_1
    m = m1 - 1
    if m < 1:
        raise DomainError("need m+1 >= 2")
    rep = EstimateReport(m_plus_1=m1, samples=samples, seed=seed, tol=tol)
    rng = np.random.default_rng(seed)
    hr = list(h_rows(m1))
    gr = list(g_rows(m))
    h_obs = {r: 0.0 for r in hr}
    g_obs = {r: 0.0 for r in gr}
    done = 0
    while done < samples:
        b = min(batch, samples - done)
        pts = sample_polydisc(rng, b, m1)
        e_h = symmetrize_batch(pts)
        e_g = symmetrize_batch(pts[:, :m])
        w = pts[:, m]
        for (i, j) in hr:
            h_obs[(i, j)] = max(h_obs[(i, j)], float(np.max(np.abs(_h_from_e(e_h, m1, i, j)))))
        for (i, l, j) in gr:
            g_obs[(i, l, j)] = max(g_obs[(i, l, j)],
                                   float(np.max(np.abs(_g_from_e(e_g, w, m, i, l, j)))))
        done += b

    def judge(check, key, bound, observed, zero_row):
        if zero_row:
            rep.zero_row_max = max(rep.zero_row_max, observed)
            ok = observed <= 1e-12
        else:
            ok = observed <= bound + tol
            if bound > 0:
                rep.max_ratio = max(rep.max_ratio, observed / bound)
        rec = {"check": check, "indices": list(key), "bound": bound,
               "observed": observed, "verdict": "pass" if ok else "fail"}
        rep.records.append(rec)
        if not ok:
            rep.violations.append(rec)

    for (i, j), obs in h_obs.items():
        judge("h", (m1, i, j), h_bound(m1, i, j), obs, j == 2 * i - m - 2)
    for (i, l, j), obs in g_obs.items():
        judge("g", (m, i, l, j), g_bound(m, i, l, j), obs, j == 2 * i - m - 2)

    for k in range(2, 6):
        r = 1 - 10.0 ** (-k)
        e_h = symmetrize_batch(np.full((1, m1), r))
        e_g = symmetrize_batch(np.full((1, m), r))
        ratios_h, ratios_g = [], []
        for (i, j) in hr:
            if j == -1 or j == 2 * i - m - 2:
                continue
            bnd = h_bound(m1, i, j)
            if bnd > 0:
                ratios_h.append(abs(_h_from_e(e_h, m1, i, j)[0]) / bnd)
        for (i, l, j) in gr:
            if j == l - 2 or j == 2 * i - m - 2:
                continue
            bnd = g_bound(m, i, l, j)
            if bnd > 0:
                ratios_g.append(abs(_g_from_e(e_g, np.array([r]), m, i, l, j)[0]) / bnd)
        if ratios_h:
            rep.sharpness[("h", k)] = float(min(ratios_h))
        if ratios_g:
            rep.sharpness[("g", k)] = float(min(ratios_g))
    return rep


def companion_roots(s) -> np.ndarray:
    """Roots of z^n - s_1 z^{n-1} + ... + (-1)^n s_n via a companion matrix."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    n = s.size
    coeffs = np.array([(-1) ** k * s[k - 1] for k in range(1, n + 1)], dtype=complex)
    comp = np.zeros((n, n), dtype=complex)
    comp[0, :] = -coeffs
    if n > 1:
        comp[1:, :-1] = np.eye(n - 1)
    return np.linalg.eigvals(comp)


def _merged_roots(s, cluster: float = 1e-2, rel: float = 1e-10) -> np.ndarray:
    """Companion roots with numerically multiple roots snapped to their centroid.

    A k-fold root only comes back from an eigensolver to about eps**(1/k), so
    a torus point like (1, ..., 1) would otherwise look off the circle. Roots
    closer than ``cluster`` are grouped; a group of size k is replaced by its
    centroid c when p and its first k - 1 derivatives all vanish at c relative
    to the coefficient scale. Genuinely distinct nearby roots fail that test
    and are kept as computed.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    roots = companion_roots(s)
    n = roots.size
    if n < 2:
        return roots
    coeffs = np.concatenate([[1.0], [(-1) ** k * s[k - 1] for k in range(1, n + 1)]])
    poly = np.poly1d(coeffs)
    label = list(range(n))

    def find(a):
        while label[a] != a:
            label[a] = label[label[a]]
            a = label[a]
        return a

    for a in range(n):
        for b in range(a + 1, n):
            if abs(roots[a] - roots[b]) <= cluster * max(1.0, abs(roots[a])):
                label[find(a)] = find(b)
    out = roots.copy()
    groups: dict[int, list[int]] = {}
    for a in range(n):
        groups.setdefault(find(a), []).append(a)
    for idx in groups.values():
        k = len(idx)
        if k < 2:
            continue
        c = roots[idx].mean()
        scale = np.sum(np.abs(coeffs) * max(1.0, abs(c)) ** np.arange(n, -1, -1))
        d = poly
        ok = True
        for j in range(k):
            if abs(d(c)) > rel * scale * math.factorial(n) / math.factorial(max(n - j, 1)):
                ok = False
                break
            d = d.deriv()
        if ok:
            out[idx] = c
    return out


@dataclass(frozen=True)
class MembershipVerdict:
    region: str
    witnesses: tuple
    method: str

    @property
    def in_closed(self) -> bool:
        return self.region != OUTSIDE

    @property
    def in_open(self) -> bool:
        return self.region == OPEN

    @property
    def in_boundary(self) -> bool:
        return self.region == BOUNDARY

    def to_dict(self) -> dict:
        return {"region": self.region, "witnesses": list(self.witnesses), "method": self.method}


def roots_membership(s, tol: float = MEMBERSHIP_TOL) -> MembershipVerdict:
    """Classify s by the moduli of the roots of its polynomial.

    The regions are reported most-specific first: the distinguished boundary
    (all roots within tol of the circle), the open domain (all roots inside
    1 - tol), the rest of the closed set, and outside.
    """
    mod = np.sort(np.abs(_merged_roots(s)))
    if np.all(np.abs(mod - 1) <= tol):
        region = BOUNDARY
    elif np.all(mod < 1 - tol):
        region = OPEN
    elif np.all(mod <= 1 + tol):
        region = CLOSED
    else:
        region = OUTSIDE
    return MembershipVerdict(region, tuple(float(x) for x in mod), "roots")


def schur_matrices(s, alpha: complex = 1.0):
    """p(S), q(S) and L = q(S)*q(S) - p(S)*p(S) for the alpha-scaled point.

    p(z) = sum_k a_k z^k with a_n = 1, a_{n-k} = (-1)^k alpha^k s_k, and q is
    its reversed conjugate. S is the nilpotent upper shift, so both matrices
    are upper triangular Toeplitz in the first n coefficients.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    n = s.size
    a = np.zeros(n + 1, dtype=complex)
    a[n] = 1
    for k in range(1, n + 1):
        a[n - k] = (-1) ** k * alpha ** k * s[k - 1]
    shift = np.eye(n, k=1, dtype=complex)
    powers = [np.linalg.matrix_power(shift, k) for k in range(n)]
    p = sum(a[k] * powers[k] for k in range(n))
    q = sum(np.conj(a[n - k]) * powers[k] for k in range(n))
    L = q.conj().T @ q - p.conj().T @ p
    return p, q, L


def schur_membership(s, alpha: complex = 1.0, tol: float = 1e-9):
    """L and whether it is positive definite (all roots of p strictly inside)."""
    if abs(alpha) > 1 + 1e-15:
        raise DomainError("|alpha| must be at most 1")
    _, _, L = schur_matrices(s, alpha)
    _, lam = psd_check(L, max(tol, 1e-10))
    return L, lam > tol


def costara_decompose(s, check_membership: bool = True):
    """c_i = (s_i - conj(s_{n-i}) s_n) / (1 - |s_n|^2) and its residual."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    n = s.size
    sn = s[-1]
    if abs(sn) >= 1:
        raise DomainError("|s_n| >= 1; use bboundary_check")
    c = np.array([(s[i - 1] - np.conj(s[n - i - 1]) * sn) / (1 - abs(sn) ** 2)
                  for i in range(1, n)], dtype=complex)
    resid = max((abs(s[i - 1] - c[i - 1] - np.conj(c[n - i - 1]) * sn)
                 for i in range(1, n)), default=0.0)
    out = {"c": c, "residual": float(resid)}
    if check_membership and n > 1 and roots_membership(s).in_closed:
        out["c_in_closed"] = roots_membership(c).in_closed
    return out


def gamma_weights(n: int) -> np.ndarray:
    return np.array([(n - i) / n for i in range(1, n)])


def bboundary_check(s, tol: float = MEMBERSHIP_TOL) -> dict:
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    n = s.size
    sn = s[-1]
    unimodular = abs(abs(sn) - 1) <= tol
    ident = max((abs(s[i - 1] - np.conj(s[n - i - 1]) * sn) for i in range(1, n)), default=0.0)
    trunc = gamma_weights(n) * s[:-1]
    trunc_ok = True if n == 1 else roots_membership(trunc, tol).in_closed
    verdict = bool(unimodular and ident <= tol and trunc_ok)
    return {"verdict": verdict, "unimodular": bool(unimodular),
            "identity_residual": float(ident), "identity": bool(ident <= tol),
            "truncation_in_closed": bool(trunc_ok),
            "agrees_with_roots": verdict == roots_membership(s, tol).in_boundary}


def scalar_pencils(i: int, alpha: complex, s):
    """(Phi_1, Phi_2) at index i for the alpha-scaled point."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    n = s.size
    k = k_const(n, i)
    X = alpha ** i * s[i - 1]
    Y = alpha ** (n - i) * s[n - i - 1]
    Z = alpha ** n * s[n - 1]
    phi1 = abs(k - X) ** 2 - abs(k * Z - Y) ** 2
    phi2 = abs(k - Y) ** 2 - abs(k * Z - X) ** 2
    return float(phi1), float(phi2)


def scalar_pencils_batch(i: int, alphas: np.ndarray, s: np.ndarray):
    """Vectorized pencils over a batch of points (rows) and an alpha grid."""
    n = s.shape[1]
    k = k_const(n, i)
    a = np.asarray(alphas)[None, :]
    X = a ** i * s[:, i - 1:i]
    Y = a ** (n - i) * s[:, n - i - 1:n - i]
    Z = a ** n * s[:, n - 1:n]
    return (np.abs(k - X) ** 2 - np.abs(k * Z - Y) ** 2,
            np.abs(k - Y) ** 2 - np.abs(k * Z - X) ** 2)


def alpha_grid(points_per_circle: int = 64, radii=(0.25, 0.5, 0.75, 1.0)) -> np.ndarray:
    th = 2 * np.pi * np.arange(points_per_circle) / points_per_circle
    return np.concatenate([r * np.exp(1j * th) for r in radii])


def beta_grid(points: int = 128) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(points) / points)


def counterexample_point(n: int, i: int, eps: float) -> dict:
    """The point symmetrize((1-eps), ..., (1-eps)) and the size of s_i.

    Returns the exact |s_i| = C(n,i)(1-eps)^i next to the value
    (1-eps)C(n,i) quoted in the source, with a flag marking that they differ.
    """
    if n < 4 or not 1 < i < n - 1 or not 0 < eps < 1:
        raise DomainError("need n >= 4, 1 < i < n-1 and 0 < eps < 1")
    s = symmetrize(np.full(n, 1 - eps))
    exact = math.comb(n, i) * (1 - eps) ** i
    quoted = (1 - eps) * math.comb(n, i)
    return {"s": s, "abs_si": float(abs(s[i - 1])), "exact_formula": exact,
            "quoted_formula": quoted, "formulas_differ": not math.isclose(exact, quoted),
            "exceeds_n": bool(abs(s[i - 1]) > n), "membership": roots_membership(s)}
