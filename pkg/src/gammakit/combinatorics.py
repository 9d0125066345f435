"""Exact integer binomial functions F, G and the constant k(i).

All arithmetic uses Python integers, so nothing overflows however large m is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError


def binom(a: int, b: int) -> int:
    """C(a, b), taken to be 0 when b is out of range."""
    if a < 0:
        raise DomainError(f"binom: top index {a} is negative")
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def f_domain(m: int, i: int, l: int) -> range:
    """Admissible j for F(m, i, l, j): i+l-m-2 <= j <= i-2."""
    if m < 1 or not 1 <= i <= m or not 0 <= l <= i:
        raise DomainError(f"index (m={m}, i={i}, l={l}) out of range")
    return range(i + l - m - 2, i - 1)


def F(m: int, i: int, l: int, j: int) -> int:
    if j not in f_domain(m, i, l):
        raise DomainError(f"j={j} outside the domain of F for (m={m}, i={i}, l={l})")
    return (binom(m, i) * binom(m, i - l)
            - binom(m, m + 2 + j - i) * binom(m, m + 2 + j - i - l))


def G(m: int, i_prime: int, l: int, j: int) -> int:
    """The mirrored function, evaluated from its own formula."""
    i = m + 2 - i_prime
    if not 1 <= i <= m or not 0 <= l <= i:
        raise DomainError(f"index (m={m}, i'={i_prime}, l={l}) out of range")
    if not l - i_prime <= j <= m - i_prime:
        raise DomainError(f"j={j} outside the domain of G for (m={m}, i'={i_prime}, l={l})")
    return (binom(m, i_prime + j) * binom(m, i_prime + j - l)
            - binom(m, m + 2 - i_prime) * binom(m, m + 2 - i_prime - l))


def k_const(n: int, i: int) -> int:
    """k(i) = C(n-1, i) + C(n-1, n-i); raises if the product form disagrees."""
    if not 1 <= i <= n - 1:
        raise DomainError(f"k(i) needs 1 <= i <= n-1, got n={n}, i={i}")
    a, b = k_const_forms(n, i)
    if a != b:  # pragma: no cover - would mean arithmetic is broken
        raise AssertionError(f"k(i) forms disagree at n={n}, i={i}: {a} != {b}")
    return a


def k_const_forms(n: int, i: int) -> tuple[int, int]:
    """Both displayed forms: binomial sum and (1/i!) prod_{k<i} (n-k)."""
    if not 1 <= i <= n - 1:
        raise DomainError(f"k(i) needs 1 <= i <= n-1, got n={n}, i={i}")
    summed = binom(n - 1, i) + binom(n - 1, n - i)
    num = math.prod(n - k for k in range(i))
    q, r = divmod(num, math.factorial(i))
    if r:
        raise AssertionError("product form is not an integer")  # pragma: no cover
    return summed, q


def minimizer_index(m: int, i: int, l: int) -> int:
    """floor(i - (m-l+5)/2) + 1, computed without floats."""
    return (2 * i - (m - l + 5)) // 2 + 1


@dataclass
class SignReport:
    m_max: int
    checks: int = 0
    violations: list = field(default_factory=list)
    ties: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"m_max": self.m_max, "checks": self.checks,
                "violations": self.violations, "ties": self.ties}


def _rec(report: SignReport, claim: str, idx: tuple, relation: str, values, ok: bool):
    report.checks += 1
    if not ok:
        report.violations.append({"claim": claim, "indices": list(idx),
                                  "relation": relation, "values": values})


def _shape_checks(report, tag, idx, vals: dict, jstar: int, extremum: str):
    """Extremum location plus monotone shape on either side of it.

    ``extremum`` is 'min' for F and 'max' for G. Ties with a neighbouring
    index are accepted and logged.
    """
    js = sorted(vals)
    lo, hi = js[0], js[-1]
    sign = 1 if extremum == "min" else -1
    best = min(sign * v for v in vals.values()) * sign
    in_dom = lo <= jstar <= hi
    _rec(report, f"{tag}(e) location", idx, f"j*={jstar} in [{lo},{hi}]",
         {"j_star": jstar}, in_dom)
    if not in_dom:
        return
    hit = vals[jstar] == best
    if hit:
        for nb in (jstar - 1, jstar + 1):
            if nb in vals and vals[nb] == best:
                report.ties.append({"claim": f"{tag}(e)", "indices": list(idx),
                                    "tied": sorted([jstar, nb])})
    _rec(report, f"{tag}(e) extremum", idx, f"F(j*) is the {extremum}",
         {"at_j_star": vals[jstar], extremum: best}, hit)
    if extremum == "min":
        _rec(report, f"{tag}(e) sign", idx, "value at j* <= 0", vals[jstar], vals[jstar] <= 0)
    else:
        _rec(report, f"{tag}(e) sign", idx, "value at j* >= 0", vals[jstar], vals[jstar] >= 0)
    for j in range(lo, hi):
        step = vals[j + 1] - vals[j]
        left = j + 1 <= jstar
        want_down = left if extremum == "min" else not left
        ok = step <= 0 if want_down else step >= 0
        _rec(report, f"{tag}(e) monotone", idx + (j,),
             "nonincreasing" if want_down else "nondecreasing",
             [vals[j], vals[j + 1]], ok)


def _check_F(report: SignReport, m: int, i: int, l: int):
    dom = f_domain(m, i, l)
    vals = {j: F(m, i, l, j) for j in dom}
    idx = (m, i, l)
    z1, z2 = l - 2, 2 * i - m - 2
    for j, v in vals.items():
        mirror = 2 * i - m - 4 + l - j
        _rec(report, "F(a) symmetry", idx + (j,), f"F(j) = F({mirror})",
             [v, vals.get(mirror)], vals.get(mirror) == v)
    for z in (z1, z2):
        _rec(report, "F(a) zero", idx + (z,), "F = 0", vals.get(z), vals.get(z) == 0)
    if l >= 2 * i - m:
        tag = "F[l>=2i-m]"
        ranges = [("(b)", z2, z1, "<=0"), ("(c)", dom.start, z2 - 1, ">0"),
                  ("(d)", z1 + 1, dom.stop - 1, ">0")]
    else:
        tag = "F[l<2i-m]"
        ranges = [("(b)", z1, z2, "<=0"), ("(c)", dom.start, z1 - 1, ">0"),
                  ("(d)", z2 + 1, dom.stop - 1, ">0")]
    for part, a, b, rel in ranges:
        for j in range(a, b + 1):
            v = vals[j]
            _rec(report, tag + part, idx + (j,), "F " + rel, v, v <= 0 if rel == "<=0" else v > 0)
    _shape_checks(report, tag, idx, vals, minimizer_index(m, i, l), "min")


def _check_G(report: SignReport, m: int, i: int, l: int):
    ip = m + 2 - i
    idx = (m, ip, l)
    dom = range(l - ip, m - ip + 1)
    vals = {j: G(m, ip, l, j) for j in dom}
    for j, v in vals.items():
        _rec(report, "G=-F", idx + (j,), "G + F = 0", [v, F(m, i, l, j)], v + F(m, i, l, j) == 0)
        mirror = m - 2 * ip + l - j
        _rec(report, "G(a) symmetry", idx + (j,), f"G(j) = G({mirror})",
             [v, vals.get(mirror)], vals.get(mirror) == v)
    z1, z2 = l - 2, m - 2 * ip + 2
    for z in (z1, z2):
        _rec(report, "G(a) zero", idx + (z,), "G = 0", vals.get(z), vals.get(z) == 0)
    # The two sign-pattern corollaries split on l against m - 2i + 4; equality is neither case.
    if l > m - 2 * ip + 4:
        tag = "G[l>m-2i+4]"
        ranges = [("(b)", z2, z1, ">=0"), ("(c)", dom.start, z2 - 1, "<0"),
                  ("(d)", z1 + 1, dom.stop - 1, "<0")]
    elif l < m - 2 * ip + 4:
        tag = "G[l<m-2i+4]"
        ranges = [("(b)", z1, z2, ">=0"), ("(c)", dom.start, z1 - 1, "<0"),
                  ("(d)", z2 + 1, dom.stop - 1, "<0")]
    else:
        return
    for part, a, b, rel in ranges:
        for j in range(a, b + 1):
            v = vals[j]
            _rec(report, tag + part, idx + (j,), "G " + rel, v, v >= 0 if rel == ">=0" else v < 0)
    jstar = (m + l - 1 - 2 * ip) // 2 + 1
    _shape_checks(report, tag, idx, vals, jstar, "max")


def verify_sign_tables(m_max: int) -> SignReport:
    """Exhaustively check the sign and shape claims for F and G up to m_max."""
    if m_max < 1:
        raise DomainError("m_max must be at least 1")
    report = SignReport(m_max=m_max)
    for m in range(1, m_max + 1):
        for i in range(1, m + 1):
            for l in range(0, i + 1):
                _check_F(report, m, i, l)
                _check_G(report, m, i, l)
    return report
