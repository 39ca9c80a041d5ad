"""Relation families among polygon webs: SS, SS', APR, AQR and their duals.

Each family is generated from closed q-binomial formulas.  Elements are kept
in two forms: ``formal`` maps internal labels to coefficients before any
identification of webs (the natural coordinates for dual functionals), and
``elements`` are the corresponding WebSums with identified webs merged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .branching import dgt
from .polygons import (
    ZERO_WEB,
    FlowPair,
    PolygonWeb,
    WebSum,
    boundary_label,
    canonical_form,
    make_web,
    representative,
    rotate_Q_to_P,
)
from .qalgebra import NOT_IN_SPAN, LaurentPoly, RatFunc, in_span, qbinom, qpow, rank

Formal = dict[tuple[str, int], LaurentPoly]


@dataclass
class RelationSpace:
    label: str
    n: int
    flows: FlowPair
    indices: list[int] = field(default_factory=list)
    formal: list[Formal] = field(default_factory=list)
    elements: list[WebSum] = field(default_factory=list)

    def nonzero(self) -> list[WebSum]:
        return [x for x in self.elements if not x.is_zero()]

    def __len__(self) -> int:
        return len(self.elements)


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _space(label: str, n: int, flows: FlowPair, rows: Sequence[tuple[int, Formal]]) -> RelationSpace:
    sp = RelationSpace(label, n, flows)
    for idx, raw in rows:
        clean: Formal = {}
        for (fam, l), c in raw.items():
            if c.is_zero() or make_web(fam, n, flows, l) is ZERO_WEB:
                continue
            clean[(fam, l)] = clean.get((fam, l), LaurentPoly()) + c
        clean = {k: v for k, v in clean.items() if not v.is_zero()}
        sp.indices.append(idx)
        sp.formal.append(clean)
        sp.elements.append(formal_to_websum(n, flows, clean))
    return sp


def formal_to_websum(n: int, flows: FlowPair, formal: Mapping[tuple[str, int], LaurentPoly]) -> WebSum:
    pairs = [(c, make_web(fam, n, flows, l)) for (fam, l), c in sorted(formal.items())]
    return WebSum.build(n, flows, pairs)


def _need_square(flows: FlowPair) -> None:
    if flows.k != 2:
        raise ValueError("square-switch relations need flow vectors of length 2")


# ---------------------------------------------------------------------------
# square switch


def ss_span(n: int, flows: FlowPair) -> RelationSpace:
    _need_square(flows)
    f = flows
    t = n + f.sum_a - f.sum_b
    rows = []
    if t >= 0:
        for l in range(f.max_b, f.min_a + n + 1):
            raw: Formal = {("P", l): LaurentPoly(1)}
            for m in range(f.max_a, f.min_b + 1):
                raw[("Q", m)] = -qbinom(t, m + l - f.sum_b)
            rows.append((l, raw))
    else:
        for l in range(f.max_a, f.min_b + 1):
            raw = {("Q", l): LaurentPoly(1)}
            for m in range(f.max_b, n + f.min_a + 1):
                raw[("P", m)] = -qbinom(-t, m + l - f.sum_a - n)
            rows.append((l, raw))
    return _space("SS", n, f, rows)


def ss_prime_span(n: int, flows: FlowPair) -> RelationSpace:
    _need_square(flows)
    f = flows
    t = n + f.sum_a - f.sum_b
    rows = []
    if t >= 0:
        for m in range(f.max_a, f.min_b + 1):
            raw: Formal = {("Q", m): LaurentPoly(1)}
            for l in range(n + f.sum_a - m, n + f.min_a + 1):
                c = qbinom(m + l - 1 - f.sum_b, m + l - n - f.sum_a)
                raw[("P", l)] = raw.get(("P", l), LaurentPoly()) - c * _sign(m + l + n + f.sum_a)
            rows.append((m, raw))
    else:
        for m in range(f.max_b, f.min_a + n + 1):
            raw = {("P", m): LaurentPoly(1)}
            for l in range(f.sum_b - m, f.min_b + 1):
                c = qbinom(m + l - n - 1 - f.sum_a, m + l - f.sum_b)
                raw[("Q", l)] = raw.get(("Q", l), LaurentPoly()) - c * _sign(m + l + f.sum_b)
            rows.append((m, raw))
    return _space("SS'", n, f, rows)


# ---------------------------------------------------------------------------
# APR and AQR relations


def apr_formal(n: int, flows: FlowPair) -> list[tuple[int, Formal]]:
    f = flows
    out = []
    for j in range(f.sum_b, f.sum_a + n):
        raw: Formal = {}
        for k in range(-f.sumhat_b, -f.sumtilde_a + 2):
            c = qbinom(j + k - f.max_b, j - f.sum_b) * qbinom(f.min_a + n - j - k, f.sum_a + n - 1 - j)
            if not c.is_zero():
                raw[("P", j + k)] = c * _sign(j + k)
        out.append((j, raw))
    return out


def aqr_formal(n: int, flows: FlowPair) -> list[tuple[int, Formal]]:
    """Summation limits as stated, with k = half the boundary length."""
    f = flows
    k2 = f.k
    top = f.sum_b - n * (k2 - 1) - 1
    out = []
    for j in range(f.sum_a, top + 1):
        raw: Formal = {}
        for k in range(-f.sumtilde_a, -f.sumhat_b + n * k2 + 2):
            c = qbinom(j + k - f.max_a, j - f.sum_a) * qbinom(f.min_b - j - k, f.sum_b - n * (k2 - 1) - 1 - j)
            if not c.is_zero():
                raw[("Q", j + k)] = c * _sign(j + k)
        out.append((j, raw))
    return out


def apr_span(n: int, flows: FlowPair) -> RelationSpace:
    return _space("APR", n, flows, apr_formal(n, flows))


def aqr_span(n: int, flows: FlowPair) -> RelationSpace:
    return _space("AQR", n, flows, aqr_formal(n, flows))


def aqr_matches_rotation(n: int, flows: FlowPair) -> bool:
    """AQR on (a, b) equals APR on the rotated flows with P relabelled as Q."""
    q_side = aqr_span(n, flows).formal
    rot = rotate_Q_to_P(flows, n)
    p_side = _space("APR", n, rot, apr_formal(n, rot)).formal
    moved = [{("Q", l): c for (_, l), c in raw.items()} for raw in p_side]
    return q_side == moved


# ---------------------------------------------------------------------------
# orthogonal complements


@dataclass(frozen=True)
class DualFunctional:
    family: str
    n: int
    flows: FlowPair
    index: int
    coeffs: tuple[tuple[int, LaurentPoly], ...]

    def __call__(self, l: int) -> LaurentPoly:
        return dict(self.coeffs).get(l, LaurentPoly())


def _functional(family, n, flows, index, raw: Mapping[int, LaurentPoly]) -> DualFunctional:
    keep = {l: c for l, c in raw.items() if not c.is_zero() and make_web(family, n, flows, l) is not ZERO_WEB}
    return DualFunctional(family, n, flows, index, tuple(sorted(keep.items())))


def apr_complement(n: int, flows: FlowPair) -> list[DualFunctional]:
    f = flows
    out = []
    for js in range(-f.sumhat_b, -f.sumtilde_a + 1):
        raw = {}
        for ks in range(f.sum_b, n + f.sum_a + 1):
            raw[ks + js] = qbinom(n + f.sum_a - f.sum_b, ks - f.sum_b)
        out.append(_functional("P", n, f, js, raw))
    return out


def aqr_complement(n: int, flows: FlowPair) -> list[DualFunctional]:
    """Q-side functionals, transported from the P side by rotation."""
    if flows.k == 0:
        return []
    rot = rotate_Q_to_P(flows, n)
    out = []
    for e in apr_complement(n, rot):
        out.append(_functional("Q", n, flows, e.index, dict(e.coeffs)))
    return out


def pair(f: DualFunctional, x) -> LaurentPoly:
    """Evaluate a dual functional on formal coordinates or on a WebSum."""
    if isinstance(x, WebSum):
        if x.n != f.n or x.boundary != boundary_label(f.flows):
            raise ValueError("functional and WebSum live over different boundaries")
        slots: dict[PolygonWeb, int] = {}
        for l, _ in _admissible_labels(f.family, f.n, f.flows):
            w = representative(make_web(f.family, f.n, f.flows, l))
            if w in slots:
                raise ValueError("identified webs share a slot; pass formal coordinates")
            slots[w] = l
        total = LaurentPoly()
        for w, c in x.items():
            if w in slots:
                total = total + f(slots[w]) * c
        return total
    total = LaurentPoly()
    for key, c in x.items():
        fam, l = key
        if fam != f.family:
            raise ValueError("functional family does not match")
        total = total + f(l) * c
    return total


def _admissible_labels(family: str, n: int, flows: FlowPair):
    from .polygons import l_range

    for l in l_range(family, n, flows):
        w = make_web(family, n, flows, l)
        if w is not ZERO_WEB:
            yield l, w


# ---------------------------------------------------------------------------
# diagnostics


def breadth(x) -> int:
    """Number of nonzero terms (of a WebSum or of formal coordinates)."""
    if isinstance(x, WebSum):
        return len(x)
    return sum(1 for c in x.values() if not c.is_zero())


def label_circumference(n: int, boundary) -> int:
    """Longest alternating in/out cyclic run of labels strictly inside (0, n)."""
    signs = [o for lab, o in boundary if 0 < lab < n]
    if not signs:
        return 0
    runs = sum(1 for i in range(len(signs)) if signs[i] != signs[i - 1])
    return runs if runs >= 2 else 0


def circumference(n: int, flows: FlowPair) -> int:
    return label_circumference(n, boundary_label(flows))


def is_hexagonal(n: int, flows: FlowPair) -> bool:
    return circumference(n, flows) >= 6


# ---------------------------------------------------------------------------
# linear algebra on WebSums


def coordinates(sums: Sequence[WebSum]) -> tuple[list[PolygonWeb], list[list[LaurentPoly]]]:
    webs = sorted({w for s in sums for w in s.webs()}, key=lambda w: w.sort_key())
    cols = [[s.coeff(w) for w in webs] for s in sums]
    return webs, cols


def span_rank(sums: Sequence[WebSum]) -> int:
    sums = [s for s in sums if not s.is_zero()]
    if not sums:
        return 0
    _, cols = coordinates(sums)
    return rank(cols)


def ss_decomposition(n: int, flows: FlowPair) -> dict:
    """Ranks of SS, APR, SS' and of APR + SS' (direct sum iff the last equals the sum)."""
    ss = ss_span(n, flows).nonzero()
    apr = apr_span(n, flows).nonzero()
    ssp = ss_prime_span(n, flows).nonzero()
    return {
        "ss": span_rank(ss),
        "apr": span_rank(apr),
        "ss_prime": span_rank(ssp),
        "apr_plus_ss_prime": span_rank(apr + ssp),
        "ss_with_both": span_rank(ss + apr + ssp),
    }


# ---------------------------------------------------------------------------
# inductive kernel check


@dataclass
class InductiveReport:
    n: int
    flows: str
    space: str
    cases: int = 0
    witnesses: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "flows": self.flows,
            "space": self.space,
            "cases": self.cases,
            "passed": self.passed,
            "failures": self.failures,
            "witnesses": self.witnesses,
        }


def lower_relations(n: int, flows: FlowPair) -> list[WebSum]:
    """Spanning set of SS (squares only), APR and AQR at level n."""
    out = []
    if flows.k == 2:
        out += ss_span(n, flows).nonzero()
    out += apr_span(n, flows).nonzero()
    out += aqr_span(n, flows).nonzero()
    return out


def _flows_of(x: WebSum) -> FlowPair:
    return x.webs()[0].flows


def certify(y: WebSum):
    """Witness coefficients expressing y in the relation span at its own flows, or NOT_IN_SPAN."""
    if y.is_zero():
        return []
    basis = lower_relations(y.n, _flows_of(y))
    basis = [b for b in basis if b.boundary == y.boundary]
    if not basis:
        return NOT_IN_SPAN
    webs, cols = coordinates(basis + [y])
    return in_span(cols[-1], cols[:-1])


def _rat_str(c: RatFunc) -> str:
    return str(c)


def verify_kernel_inductive(n: int, flows: FlowPair, space: str = "apr") -> InductiveReport:
    """Every dGT matrix entry of every spanning element lies in the level n-1 relation span."""
    builders = {"ss": ss_span, "apr": apr_span, "aqr": aqr_span, "ss'": ss_prime_span}
    if space not in builders:
        raise ValueError(f"unknown space {space!r}")
    rep = InductiveReport(n, str(flows), space)
    if n < 1:
        for x in builders[space](n, flows).elements:
            rep.cases += 1
            if not x.is_zero():
                rep.failures.append({"element": str(x), "reason": "nonzero at level 0"})
        return rep
    sp = builders[space](n, flows)
    for idx, x in zip(sp.indices, sp.elements):
        if x.is_zero():
            continue
        image = dgt(x)
        for key in image.keys():
            y = image[key]
            rep.cases += 1
            w = certify(y)
            if w is NOT_IN_SPAN:
                rep.failures.append({"index": idx, "key": list(key), "entry": str(y)})
            else:
                rep.witnesses.append({"index": idx, "key": list(key), "coefficients": [_rat_str(c) for c in w]})
    return rep


def canonical_flows(flows: FlowPair) -> FlowPair:
    if flows.k == 0:
        return flows
    return canonical_form(PolygonWeb("P", 0, flows, 0)).flows


def dgt_empty_pullback_holds(n: int, flows: FlowPair) -> bool:
    """e^{n-1}_{j*} o dGT_empty == q^{j* - a_1 + sum b} e^n_{j*} on every P^n{l}."""
    f = flows
    lower = {e.index: e for e in apr_complement(n - 1, f)}
    a1 = f.a[0] if f.k else 0
    for e in apr_complement(n, f):
        if e.index not in lower:
            return False
        el = lower[e.index]
        for l, _ in _admissible_labels("P", n, f):
            lhs = el(l) * qpow(l - a1) + el(l - 1) * qpow(l - a1 + f.sum_b - f.sum_a - n)
            if lhs != e(l) * qpow(e.index - a1 + f.sum_b):
                return False
    return True


def formal_rank(vectors: Sequence[Formal]) -> int:
    """Rank with every P{l}, Q{m} treated as an independent basis vector."""
    vectors = [v for v in vectors if v]
    if not vectors:
        return 0
    keys = sorted({k for v in vectors for k in v})
    return rank([[v.get(k, LaurentPoly()) for k in keys] for v in vectors])


def ss_decomposition_formal(n: int, flows: FlowPair) -> dict:
    ss = ss_span(n, flows).formal
    apr = apr_span(n, flows).formal
    ssp = ss_prime_span(n, flows).formal
    return {
        "ss": formal_rank(ss),
        "apr": formal_rank(apr),
        "ss_prime": formal_rank(ssp),
        "apr_plus_ss_prime": formal_rank(apr + ssp),
        "ss_with_both": formal_rank(ss + apr + ssp),
    }


def relation_span_for_kernel(n: int, flows: FlowPair, families: Sequence[str] = ("P", "Q")) -> list[WebSum]:
    out = []
    if "P" in families:
        out += apr_span(n, flows).nonzero()
    if "Q" in families:
        out += aqr_span(n, flows).nonzero()
    if flows.k == 2 and set(families) == {"P", "Q"}:
        out += ss_span(n, flows).nonzero()
    return out


def compare_kernel(n: int, flows: FlowPair, families: Sequence[str] = ("P", "Q")) -> dict:
    """Oracle kernel versus the relation span, as exact ranks."""
    from .reporacle import kernel_rank

    rk, webs, ker = kernel_rank(n, flows, families)
    bd = boundary_label(flows)
    kernel_sums = [WebSum(n, bd, dict(zip(webs, v))) for v in ker]
    rel = relation_span_for_kernel(n, flows, families)
    kd, rd = span_rank(kernel_sums), span_rank(rel)
    both = span_rank(kernel_sums + rel)
    return {"webs": len(webs), "rank": rk, "kernel_dim": kd, "relation_dim": rd,
            "combined": both, "equal": kd == rd == both}
