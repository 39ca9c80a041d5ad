"""Polygon webs P^n_{a,b}{l}, Q^n_{a,b}{l} and formal sums of them.

A polygon is described by flow labels: the outer regions carry
a_1, b_1, a_2, b_2, ... (cyclically) and the inner region carries l.  Edge
labels are differences of neighbouring flows, so the whole web is determined
by (family, n, a, b, l); the family only fixes which range l lives in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .qalgebra import LaurentPoly, ONE

Boundary = tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class FlowPair:
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __init__(self, a: Sequence[int], b: Sequence[int]):
        a, b = tuple(int(x) for x in a), tuple(int(x) for x in b)
        if len(a) != len(b):
            raise ValueError("flow vectors must have equal length")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def k(self) -> int:
        return len(self.a)

    def ai(self, i: int) -> int:
        """a_i with 1-based cyclic indexing."""
        return self.a[(i - 1) % self.k]

    def bi(self, i: int) -> int:
        return self.b[(i - 1) % self.k]

    # Empty vectors (closed loops) use max = min = 0.
    @property
    def sum_a(self) -> int:
        return sum(self.a)

    @property
    def sum_b(self) -> int:
        return sum(self.b)

    @property
    def max_a(self) -> int:
        return max(self.a, default=0)

    @property
    def min_a(self) -> int:
        return min(self.a, default=0)

    @property
    def max_b(self) -> int:
        return max(self.b, default=0)

    @property
    def min_b(self) -> int:
        return min(self.b, default=0)

    @property
    def sumhat_b(self) -> int:
        return self.sum_b - self.max_b

    @property
    def sumtilde_a(self) -> int:
        return self.sum_a - self.min_a

    def is_admissible(self, n: int) -> bool:
        for i in range(1, self.k + 1):
            lo = max(self.ai(i), self.ai(i + 1))
            hi = min(n + self.ai(i), n + self.ai(i + 1))
            if not lo <= self.bi(i) <= hi:
                return False
        return True

    def shifted(self, c: int) -> FlowPair:
        return FlowPair([x + c for x in self.a], [x + c for x in self.b])

    def plus(self, da: Sequence[int], db: Sequence[int]) -> FlowPair:
        return FlowPair([x + y for x, y in zip(self.a, da)], [x + y for x, y in zip(self.b, db)])

    def regions(self) -> list[int]:
        """Outer flows in boundary order: a_1, b_k, a_k, ..., b_1, a_1."""
        out = [self.ai(1)]
        for i in range(self.k, 0, -1):
            out += [self.bi(i), self.ai(i)]
        return out

    def __str__(self) -> str:
        return f"({','.join(map(str, self.a))}),({','.join(map(str, self.b))})"


def boundary_label(flows: FlowPair) -> Boundary:
    """Label(a,b) = (b_k-a_1,-)(b_k-a_k,+) ... (b_1-a_2,-)(b_1-a_1,+)."""
    out: list[tuple[int, str]] = []
    for i in range(flows.k, 0, -1):
        out.append((flows.bi(i) - flows.ai(i + 1), "-"))
        out.append((flows.bi(i) - flows.ai(i), "+"))
    return tuple(out)


def point_of_position(k: int, pos: int) -> int:
    """Boundary point number (1..2k) of the pos-th entry (0-based) of Label."""
    return 2 * k - pos


@dataclass(frozen=True)
class PolygonWeb:
    family: str
    n: int
    flows: FlowPair
    l: int

    def sort_key(self):
        return (self.family, self.l, self.flows.a, self.flows.b)

    @property
    def boundary(self) -> Boundary:
        return boundary_label(self.flows)

    def to_json(self) -> dict:
        return {"family": self.family, "n": self.n, "a": list(self.flows.a),
                "b": list(self.flows.b), "l": self.l}

    @classmethod
    def from_json(cls, obj: Mapping) -> PolygonWeb:
        w = make_web(obj["family"], obj["n"], FlowPair(obj["a"], obj["b"]), obj["l"])
        if w is ZERO_WEB:
            raise ValueError(f"inadmissible web {obj}")
        return w

    def __str__(self) -> str:
        return f"{self.family}^{self.n}_{{{self.flows}}}{{{self.l}}}"


class _ZeroWeb:
    """The zero morphism; produced by out-of-range constructions."""

    def __repr__(self) -> str:
        return "ZERO"

    def __bool__(self) -> bool:
        return False


ZERO_WEB = _ZeroWeb()


def l_range(family: str, n: int, flows: FlowPair) -> range:
    if family == "P":
        return range(flows.max_b, flows.min_a + n + 1)
    if family == "Q":
        return range(flows.max_a, flows.min_b + 1)
    raise ValueError(f"unknown family {family!r}")


def make_web(family: str, n: int, flows: FlowPair | tuple, l: int):
    """The canonical web, or ZERO_WEB if anything is out of range."""
    if not isinstance(flows, FlowPair):
        flows = FlowPair(*flows)
    if family not in ("P", "Q"):
        raise ValueError(f"unknown family {family!r}")
    if n < 0 or not flows.is_admissible(n) or l not in l_range(family, n, flows):
        return ZERO_WEB
    return canonical_form(PolygonWeb(family, n, flows, l))


def canonical_form(w: PolygonWeb) -> PolygonWeb:
    """Shift all flows so that min(a) = 0."""
    if w.flows.k == 0:
        return w
    c = -w.flows.min_a
    if c == 0:
        return w
    return PolygonWeb(w.family, w.n, w.flows.shifted(c), w.l + c)


def representative(w: PolygonWeb) -> PolygonWeb:
    """Canonical form with Q-webs rewritten to P-webs where the two agree."""
    w = canonical_form(w)
    f, n = w.flows, w.n
    if f.k == 1:
        # Extreme bigons are all the plain strand.
        if (w.family == "Q" and w.l in (f.a[0], f.b[0])) or (w.family == "P" and w.l == f.a[0] + n):
            return PolygonWeb("P", n, f, f.b[0])
    if f.k == 0:
        return w
    if w.family == "P":
        # A one-point Q-range identifies both extreme P-webs with the same Q-web.
        collapsed = f.min_b == f.max_a and (f.k == 2 or (len(set(f.a)) == 1 and len(set(f.b)) == 1))
        if collapsed and w.l == f.min_a + n:
            return PolygonWeb("P", n, f, f.max_b)
        return w
    target = None
    if f.k == 2 and w.l == f.min_b:
        target = f.max_b
    elif f.k == 2 and w.l == f.max_a:
        target = f.min_a + n
    elif len(set(f.a)) == 1 and w.l == f.a[0]:
        target = f.a[0] + n
    elif len(set(f.b)) == 1 and w.l == f.b[0]:
        target = f.b[0]
    if target is None:
        return w
    return representative(PolygonWeb("P", n, f, target))


def web_eq(u: PolygonWeb, v: PolygonWeb) -> bool:
    return representative(u) == representative(v)


def rotate_Q_to_P(flows: FlowPair, n: int) -> FlowPair:
    """(a, b) -> (b - n, rotl(a)); the internal label is unchanged."""
    a = flows.a[1:] + flows.a[:1]
    return FlowPair([x - n for x in flows.b], a)


def rotate_P_to_Q(flows: FlowPair, n: int) -> FlowPair:
    """Inverse of rotate_Q_to_P."""
    a = flows.b[-1:] + flows.b[:-1]
    return FlowPair(a, [x + n for x in flows.a])


def admissible_webs(family: str, n: int, flows: FlowPair) -> list[PolygonWeb]:
    out = []
    for l in l_range(family, n, flows):
        w = make_web(family, n, flows, l)
        if w is not ZERO_WEB:
            out.append(w)
    return out


class WebSum:
    """Finite linear combination of polygon webs sharing one boundary."""

    __slots__ = ("n", "boundary", "_terms")

    def __init__(self, n: int, boundary: Boundary, terms: Mapping[PolygonWeb, LaurentPoly] | None = None):
        self.n = n
        self.boundary = tuple(boundary)
        acc: dict[PolygonWeb, LaurentPoly] = {}
        for w, c in (terms or {}).items():
            self._add_into(acc, w, c)
        self._terms = acc

    def _add_into(self, acc: dict, w, c) -> None:
        if w is ZERO_WEB:
            return
        c = LaurentPoly.coerce(c)
        if c.is_zero():
            return
        if w.n != self.n or w.boundary != self.boundary:
            raise ValueError(f"web {w} does not match boundary {self.boundary} at level {self.n}")
        w = representative(w)
        new = acc.get(w, LaurentPoly()) + c
        if new.is_zero():
            acc.pop(w, None)
        else:
            acc[w] = new

    @classmethod
    def single(cls, w: PolygonWeb, coeff: LaurentPoly | int = ONE) -> WebSum:
        return cls(w.n, w.boundary, {w: LaurentPoly.coerce(coeff)})

    @classmethod
    def build(cls, n: int, flows: FlowPair, pairs: Iterable[tuple]) -> WebSum:
        """Sum of coeff * web for (coeff, web) pairs; ZERO webs are dropped."""
        out = cls(n, boundary_label(flows))
        acc = dict(out._terms)
        for c, w in pairs:
            out._add_into(acc, w, c)
        out._terms = acc
        return out

    def items(self) -> list[tuple[PolygonWeb, LaurentPoly]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def coeff(self, w: PolygonWeb) -> LaurentPoly:
        return self._terms.get(representative(w), LaurentPoly())

    def webs(self) -> list[PolygonWeb]:
        return [w for w, _ in self.items()]

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[PolygonWeb, LaurentPoly]]:
        return iter(self.items())

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: WebSum) -> None:
        if self.n != other.n or self.boundary != other.boundary:
            raise ValueError("WebSums have different boundaries")

    def __add__(self, other: WebSum) -> WebSum:
        self._check(other)
        acc = dict(self._terms)
        for w, c in other._terms.items():
            self._add_into(acc, w, c)
        out = WebSum(self.n, self.boundary)
        out._terms = acc
        return out

    def scale(self, c: LaurentPoly | int) -> WebSum:
        c = LaurentPoly.coerce(c)
        return WebSum(self.n, self.boundary, {w: c * x for w, x in self._terms.items()})

    def __neg__(self) -> WebSum:
        return self.scale(-1)

    def __sub__(self, other: WebSum) -> WebSum:
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WebSum):
            return NotImplemented
        return self.n == other.n and self.boundary == other.boundary and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, self.boundary, frozenset(self._terms.items())))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.items():
            tag = f"{w.family}{{{w.l}}}"
            if c == 1:
                parts.append(tag)
            elif c == -1:
                parts.append(f"-{tag}")
            else:
                parts.append(f"({c}){tag}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"WebSum(n={self.n}, {self})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "boundary": [[lab, o] for lab, o in self.boundary],
            "terms": [{"web": w.to_json(), "coeff": c.to_json()} for w, c in self.items()],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> WebSum:
        boundary = tuple((int(x), str(o)) for x, o in obj["boundary"])
        terms = {PolygonWeb.from_json(t["web"]): LaurentPoly.from_json(t["coeff"]) for t in obj["terms"]}
        return cls(obj["n"], boundary, terms)
