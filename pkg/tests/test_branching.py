"""The path-model branching functor on polygon webs."""

from __future__ import annotations

import random
from itertools import product

import pytest

from qwebs.branching import (
    ReductionPattern,
    admissible_patterns,
    dgt,
    dgt_coefficient,
    dgt_empty_pullback_coefficients,
    key_subset,
)
from qwebs.polygons import FlowPair, PolygonWeb, WebSum, admissible_webs, make_web
from qwebs.qalgebra import LaurentPoly, ONE, qpow


def _brute_patterns(family, k):
    bvals = (0, 1) if family == "P" else (-1, 0)
    out = set()
    for ap in product((0, 1), repeat=k):
        for bp in product(bvals, repeat=k):
            ok = True
            for i in range(k):
                x, y, z = ap[i], ap[(i + 1) % k], bp[i]
                if family == "P":
                    ok &= z <= x and z <= y
                else:
                    ok &= x * z == 0 and y * z == 0
            if ok:
                out.add((ap, bp))
    return out


def _webs(max_n=5, max_k=3, max_entry=2, families=("P", "Q")):
    for n in range(1, max_n + 1):
        for k in range(1, max_k + 1):
            for a in product(range(max_entry + 1), repeat=k):
                if min(a) != 0:
                    continue
                for b in product(range(max_entry + 2), repeat=k):
                    f = FlowPair(a, b)
                    if f.is_admissible(n):
                        for fam in families:
                            yield from admissible_webs(fam, n, f)


def test_pattern_enumeration():
    assert {(p.ap, p.bp) for p in admissible_patterns("P", 1)} == {((0,), (0,)), ((1,), (0,)), ((1,), (1,))}
    assert {(p.ap, p.bp) for p in admissible_patterns("Q", 1)} == {((0,), (0,)), ((0,), (-1,)), ((1,), (0,))}
    for fam in ("P", "Q"):
        for k in range(1, 5):
            pats = admissible_patterns(fam, k)
            assert len(pats) == len(set(pats))
            assert {(p.ap, p.bp) for p in pats} == _brute_patterns(fam, k)
    assert len(admissible_patterns("P", 2)) == 7
    with pytest.raises(ValueError):
        admissible_patterns("P", 0)


def test_key_subsets():
    assert key_subset(ReductionPattern("P", (0, 0), (0, 0))) == frozenset()
    assert key_subset(ReductionPattern("P", (1, 1), (1, 1))) == frozenset()
    assert key_subset(ReductionPattern("Q", (0, 0), (-1, -1))) == frozenset({1, 2, 3, 4})
    assert key_subset(ReductionPattern("Q", (1, 1), (0, 0))) == frozenset({1, 2, 3, 4})
    assert key_subset(ReductionPattern("P", (1, 0), (0, 0))) == frozenset({1, 4})
    # apart from the exceptional pairs the key determines the pattern
    for fam in ("P", "Q"):
        for k in (1, 2, 3):
            seen = {}
            for p in admissible_patterns(fam, k):
                seen.setdefault(key_subset(p), []).append(p)
            assert all(len(v) == 1 for s, v in seen.items() if s not in (frozenset(), frozenset(range(1, 2 * k + 1))))


def test_coefficient_examples():
    w = make_web("P", 4, FlowPair((0, 0), (1, 1)), 2)
    f, l, n = w.flows, w.l, w.n
    assert dgt_coefficient(w, ReductionPattern("P", (0, 0), (0, 0))) == qpow(l - f.a[0])
    assert dgt_coefficient(w, ReductionPattern("P", (1, 1), (1, 1))) == qpow(l - f.a[0] + f.sum_b - f.sum_a - n)
    v = make_web("Q", 4, FlowPair((0, 1), (2, 2)), 1)
    assert dgt_coefficient(v, ReductionPattern("Q", (1, 1), (0, 0))) == qpow(v.l - v.flows.a[0] - 4)
    with pytest.raises(ValueError):
        dgt_coefficient(v, ReductionPattern("P", (0, 0), (0, 0)))


def test_empty_entry_numeric_instance():
    w = make_web("P", 4, FlowPair((0, 0), (1, 1)), 2)
    e = dgt(w)[()]
    lower = FlowPair((0, 0), (1, 1))
    assert e.coeff(make_web("P", 3, lower, 2)) == qpow(2)
    assert e.coeff(make_web("P", 3, lower, 1)) == ONE
    assert str(e) == "P{1} + (q^2)P{2}"


def test_empty_entry_matches_closed_form():
    for w in _webs(families=("P",)):
        f, n, l = w.flows, w.n, w.l
        want = WebSum.build(n - 1, f, [
            (qpow(l - f.a[0]), make_web("P", n - 1, f, l)),
            (qpow(l - f.a[0] + f.sum_b - f.sum_a - n), make_web("P", n - 1, f, l - 1)),
        ])
        assert dgt(w)[()] == want
    for w in _webs(families=("Q",)):
        f, n, l = w.flows, w.n, w.l
        want = WebSum.build(n - 1, f, [(qpow(l - f.a[0] + f.sum_b - l * f.k), make_web("Q", n - 1, f, l))])
        assert dgt(w)[()] == want


def test_all_key_on_q_two_vertex_form():
    for w in _webs(families=("Q",)):
        f, n, l = w.flows, w.n, w.l
        full = tuple(range(1, 2 * f.k + 1))
        up = FlowPair([x + 1 for x in f.a], f.b)
        down = FlowPair(f.a, [x - 1 for x in f.b])
        want = WebSum.build(n - 1, up, [
            (qpow(l - f.a[0] - n), make_web("Q", n - 1, up, l)),
            (qpow(l + f.sum_b - n * f.k - f.sum_a - f.a[0]), make_web("Q", n - 1, down, l)),
        ])
        assert dgt(w)[full] == want


def test_pullback_coefficient_list():
    w = make_web("P", 3, FlowPair((0,), (1,)), 2)
    pairs = dgt_empty_pullback_coefficients(w)
    assert [c for c, _ in pairs] == [qpow(2), ONE]


def test_loops():
    w = make_web("P", 4, FlowPair((), ()), 2)
    img = dgt(w)
    assert img.keys() == [()]
    assert str(img[()]) == "(q^-2)P{1} + (q^2)P{2}"
    assert str(dgt(make_web("Q", 4, FlowPair((), ()), 0))[()]) == "Q{0}"


def test_linearity():
    rng = random.Random(5)
    f = FlowPair((0, 0, 0), (1, 1, 1))
    webs = admissible_webs("P", 4, f) + admissible_webs("Q", 4, f)
    for _ in range(20):
        al, be = LaurentPoly.monomial(rng.randint(-3, 3), rng.choice((-2, 1, 3))), qpow(rng.randint(-3, 3))
        x = WebSum.single(rng.choice(webs))
        y = WebSum.single(rng.choice(webs))
        lhs = dgt(x.scale(al) + y.scale(be))
        rhs = dgt(x.scale(al)) + dgt(y.scale(be))
        for key in set(lhs.keys()) | set(rhs.keys()):
            assert lhs[key] == rhs[key]


def test_shift_equivariance():
    for w in _webs(max_n=4, max_k=2):
        for c in (-2, 3):
            shifted = PolygonWeb(w.family, w.n, w.flows.shifted(c), w.l + c)
            a, b = dgt(w), dgt(shifted)
            assert a.keys() == b.keys()
            for key in a.keys():
                assert a[key] == b[key]


def test_image_boundaries_match_keys():
    w = make_web("P", 4, FlowPair((0, 1), (2, 2)), 2)
    img = dgt(w)
    for key in img.keys():
        for t in img[key].webs():
            assert t.boundary == img[key].boundary
    js = img.to_json()
    assert all(k.startswith("s=[") for k in js)


def test_two_vertex_sections_have_five_terms():
    # k=1 bigons have 3 patterns per family; k=2 squares 7; each target is a web or zero
    for w in _webs(max_n=4, max_k=1):
        assert len(admissible_patterns(w.family, 1)) == 3
    img = dgt(make_web("P", 4, FlowPair((0, 0), (2, 2)), 3))
    assert sum(len(img[k]) for k in img.keys()) <= 7


def test_requires_positive_level():
    with pytest.raises(ValueError):
        dgt(make_web("P", 0, FlowPair((0,), (0,)), 0))
