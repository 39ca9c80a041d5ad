"""Diagrammatic Gel'fand-Tsetlin branching of polygon webs via reduction paths.

A reduction pattern (a', b') shifts the flows of a level-n polygon to those of
a level-(n-1) polygon; the boundary points whose labels drop by one form the
key of the matrix entry the term contributes to.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

from .polygons import (
    ZERO_WEB,
    Boundary,
    PolygonWeb,
    WebSum,
    make_web,
)
from .qalgebra import LaurentPoly, qpow

Key = tuple[int, ...]


@dataclass(frozen=True)
class ReductionPattern:
    family: str
    ap: tuple[int, ...]
    bp: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.ap)

    @property
    def size(self) -> int:
        """m(a', b') = sum a' - sum b'."""
        return sum(self.ap) - sum(self.bp)


def _cyc(v: tuple[int, ...], i: int) -> int:
    return v[(i - 1) % len(v)]


def admissible_patterns(family: str, k: int) -> list[ReductionPattern]:
    if family not in ("P", "Q"):
        raise ValueError(f"unknown family {family!r}")
    if k < 1:
        raise ValueError("patterns need k >= 1; closed loops are handled by dgt_terms")
    bvals = (0, 1) if family == "P" else (-1, 0)
    out = []
    for ap in product((0, 1), repeat=k):
        for bp in product(bvals, repeat=k):
            ok = True
            for i in range(1, k + 1):
                x, y, z = _cyc(ap, i), _cyc(ap, i + 1), _cyc(bp, i)
                if family == "P" and not (z <= x and z <= y):
                    ok = False
                if family == "Q" and not (x * z == 0 and y * z == 0):
                    ok = False
            if ok:
                out.append(ReductionPattern(family, ap, bp))
    return out


def key_subset(pat: ReductionPattern) -> frozenset[int]:
    """Traversed boundary points: 2i-1 is the (a_i|b_i) leg, 2i the (b_i|a_{i+1}) leg."""
    s = set()
    for i in range(1, pat.k + 1):
        x, y, z = _cyc(pat.ap, i), _cyc(pat.ap, i + 1), _cyc(pat.bp, i)
        if pat.family == "P":
            if x == 1 and z == 0:
                s.add(2 * i - 1)
            if y == 1 and z == 0:
                s.add(2 * i)
        else:
            if x == 1 or z == -1:
                s.add(2 * i - 1)
            if y == 1 or z == -1:
                s.add(2 * i)
    return frozenset(s)


def _dot(u, v) -> int:
    return sum(x * y for x, y in zip(u, v))


def _rotl(v: tuple[int, ...]) -> tuple[int, ...]:
    return v[1:] + v[:1]


def dgt_coefficient(w: PolygonWeb, pat: ReductionPattern) -> LaurentPoly:
    if w.family != pat.family:
        raise ValueError("pattern family does not match web family")
    f, n, l = w.flows, w.n, w.l
    k = f.k
    if k == 0:
        raise ValueError("closed loops are handled by dgt_terms")
    a, b, ap, bp = f.a, f.b, pat.ap, pat.bp
    sign = (-1) ** (_dot(bp, [x + y for x, y in zip(a, _rotl(a))]) % 2)
    if w.family == "P":
        e = l * (sum(bp) - sum(ap) + 1) + _dot(_rotl(ap), b) - _dot(bp, a) - a[0] - n * ap[0]
    else:
        e = (l * (sum(ap) - sum(bp) - k + 1) + sum(b) + n * sum(bp)
             + _dot(bp, _rotl(a)) - _dot(ap, b) - a[0] - n * ap[0])
    return qpow(e, sign)


def dgt_terms(w: PolygonWeb) -> list[tuple[frozenset[int], LaurentPoly, object]]:
    """(key, coefficient, target web) for every reduction path of w."""
    f, n, l = w.flows, w.n, w.l
    if f.k == 0:
        if w.family == "P":
            return [
                (frozenset(), qpow(l), make_web("P", n - 1, f, l)),
                (frozenset(), qpow(l - n), make_web("P", n - 1, f, l - 1)),
            ]
        return [(frozenset(), qpow(0), make_web("Q", n - 1, f, l))]
    out = []
    for pat in admissible_patterns(w.family, f.k):
        target = make_web(w.family, n - 1, f.plus(pat.ap, pat.bp), l)
        out.append((key_subset(pat), dgt_coefficient(w, pat), target))
    return out


def reduced_boundary(boundary: Boundary, s: Iterable[int]) -> Boundary:
    k2 = len(boundary)
    s = set(s)
    return tuple((lab - (1 if (k2 - pos) in s else 0), o) for pos, (lab, o) in enumerate(boundary))


class BranchImage:
    """Matrix entries of dGT: boundary-reduction key -> WebSum at level n-1."""

    def __init__(self, n: int, boundary: Boundary, entries: Mapping[Key, WebSum] | None = None):
        self.n = n
        self.boundary = boundary
        self.entries: dict[Key, WebSum] = {k: v for k, v in (entries or {}).items() if not v.is_zero()}

    def keys(self) -> list[Key]:
        return sorted(self.entries)

    def __getitem__(self, key) -> WebSum:
        key = tuple(sorted(key))
        if key in self.entries:
            return self.entries[key]
        return WebSum(self.n - 1, reduced_boundary(self.boundary, key))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BranchImage):
            return NotImplemented
        return self.entries == other.entries

    def __add__(self, other: BranchImage) -> BranchImage:
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return BranchImage(self.n, self.boundary, out)

    def to_json(self) -> dict:
        return {f"s=[{','.join(map(str, k))}]": self.entries[k].to_json() for k in self.keys()}


def dgt(x: WebSum | PolygonWeb) -> BranchImage:
    if isinstance(x, PolygonWeb):
        x = WebSum.single(x)
    if x.n < 1:
        raise ValueError("dGT needs level n >= 1")
    acc: dict[Key, dict] = {}
    for w, c in x.items():
        for s, coef, target in dgt_terms(w):
            if target is ZERO_WEB:
                continue
            key = tuple(sorted(s))
            acc.setdefault(key, []).append((c * coef, target))
    entries = {}
    for key, pairs in acc.items():
        bd = reduced_boundary(x.boundary, key)
        ws = WebSum(x.n - 1, bd)
        for c, t in pairs:
            ws = ws + WebSum(x.n - 1, bd, {t: c})
        entries[key] = ws
    return BranchImage(x.n, x.boundary, entries)


def dgt_empty_pullback_coefficients(w: PolygonWeb) -> list[tuple[LaurentPoly, object]]:
    """The empty-key entry of dGT(w) as (coefficient, target) pairs."""
    return [(c, t) for s, c, t in dgt_terms(w) if not s and t is not ZERO_WEB]
