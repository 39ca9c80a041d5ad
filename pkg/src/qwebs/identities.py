"""Exhaustive checks of the q-binomial identities behind the relation families.

Every check is a direct summation in Z[q, q^-1], so each grid point that
passes is an exact proof of that instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .qalgebra import LaurentPoly, qbinom, qpow


@dataclass
class IdentityReport:
    name: str
    grid: str
    cases: int = 0
    violations: list = field(default_factory=list)
    findings: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "grid": self.grid,
            "cases": self.cases,
            "passed": self.passed,
            "violations": [list(v) for v in self.violations],
            "findings": [list(v) for v in self.findings],
        }


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _vectors(length: int, lo: int, hi: int):
    return product(range(lo, hi + 1), repeat=length)


def triple_binomial_sum(n, sum_a, min_a, sum_b, max_b, j, js) -> LaurentPoly:
    sumtilde_a = sum_a - min_a
    sumhat_b = sum_b - max_b
    total = LaurentPoly()
    lo = max(-sumhat_b, sum_b + js - j)
    hi = min(-sumtilde_a + 1, js - j + n + sum_a)
    for k in range(lo, hi + 1):
        term = (qbinom(j + k - max_b, j - sum_b)
                * qbinom(min_a + n - j - k, sum_a + n - 1 - j)
                * qbinom(n + sum_a - sum_b, j - js + k - sum_b))
        total = total + term * _sign(j + k)
    return total


def verify_ed_zero(max_n: int = 5, max_entry: int = 4, lengths=(2, 3)) -> IdentityReport:
    rep = IdentityReport("ed-zero", f"n in [1,{max_n}], lengths {list(lengths)}, entries in [0,{max_entry}]")
    params = set()
    for k in lengths:
        for a in _vectors(k, 0, max_entry):
            for b in _vectors(k, 0, max_entry):
                params.add((sum(a), min(a), sum(b), max(b)))
    for n in range(1, max_n + 1):
        for sum_a, min_a, sum_b, max_b in sorted(params):
            for j in range(sum_b, sum_a + n):
                for js in range(-(sum_b - max_b), -(sum_a - min_a) + 1):
                    rep.cases += 1
                    if not triple_binomial_sum(n, sum_a, min_a, sum_b, max_b, j, js).is_zero():
                        rep.violations.append((n, sum_a, min_a, sum_b, max_b, j, js))
    return rep


def ss_identity_residual(n, a, b, m, mp, limits: str = "stated") -> LaurentPoly:
    """Residual of the SS'-SS identity.

    ``limits="stated"`` sums l over [n + sum a - min b, n + min a];
    ``limits="support"`` sums over every l where both binomials can be nonzero.
    """
    sa, sb = sum(a), sum(b)
    if limits == "stated":
        ls = range(n + sa - min(b), n + min(a) + 1)
    elif limits == "support":
        ls = range(min(sb - mp, n + sa - m), n + sa - mp + 1)
    else:
        raise ValueError(f"unknown limits {limits!r}")
    total = LaurentPoly()
    for l in ls:
        total = total + (qbinom(m + l - 1 - sb, m + l - n - sa) * qbinom(n + sa - sb, mp + l - sb)) * _sign(l)
    delta = LaurentPoly(1) if m == mp else LaurentPoly()
    return delta - total * _sign(m + n + sa)


def verify_ssprime_ss(max_n: int = 5, lo: int = -2, hi: int = 4, pad: int = 2) -> IdentityReport:
    """Sweep the SS'-SS identity.

    A failure at the stated l-limits that disappears when l runs over the
    full support is recorded as a finding (the limits truncate nonzero
    terms); a failure in both forms is a violation.
    """
    rep = IdentityReport("ssprime-ss", f"n in [1,{max_n}], a, b in [{lo},{hi}]^2, m, m' within {pad} of [max a, min b]")
    params = set()
    for a in _vectors(2, lo, hi):
        for b in _vectors(2, lo, hi):
            params.add((sum(a), min(a), max(a), sum(b), min(b)))
    for n in range(1, max_n + 1):
        for sa, mina, maxa, sb, minb in sorted(params):
            if n + sa - sb <= 0:
                continue
            # a and b only enter through these statistics
            a = (mina, sa - mina)
            b = (minb, sb - minb)
            for m in range(maxa - pad, minb + pad + 1):
                for mp in range(maxa - pad, minb + pad + 1):
                    rep.cases += 1
                    if ss_identity_residual(n, a, b, m, mp).is_zero():
                        continue
                    case = (n, sa, mina, maxa, sb, minb, m, mp)
                    if ss_identity_residual(n, a, b, m, mp, "support").is_zero():
                        rep.findings.append(case)
                    else:
                        rep.violations.append(case)
    return rep


def verify_vandermonde(max_xy: int = 8) -> IdentityReport:
    rep = IdentityReport("vandermonde", f"0 <= x, y <= {max_xy}, -1 <= z <= x+y")
    for x in range(max_xy + 1):
        for y in range(max_xy + 1):
            for z in range(-1, x + y + 1):
                rep.cases += 1
                rhs = LaurentPoly()
                for i in range(y + 1):
                    rhs = rhs + qpow(-(x + y) * i) * qbinom(y, i) * qbinom(x, z - i)
                if qbinom(x + y, z) != qpow(y * z) * rhs:
                    rep.violations.append((x, y, z))
    return rep


def verify_recurrence(max_m: int = 12) -> IdentityReport:
    rep = IdentityReport("recurrence", f"1 <= m <= {max_m}, 0 <= k <= m")
    for m in range(1, max_m + 1):
        for k in range(m + 1):
            rep.cases += 1
            if qbinom(m, k) != qpow(k) * qbinom(m - 1, k) + qpow(k - m) * qbinom(m - 1, k - 1):
                rep.violations.append((m, k))
    return rep


IDENTITIES = {
    "ed-zero": verify_ed_zero,
    "ssprime-ss": verify_ssprime_ss,
    "vandermonde": verify_vandermonde,
    "recurrence": verify_recurrence,
}
