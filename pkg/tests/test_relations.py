"""Relation families, their dual functionals, and structural kernel checks."""

from __future__ import annotations

from itertools import product

import pytest

from golden import APR_GOLDEN, SS_GOLDEN, F
from qwebs.polygons import FlowPair, WebSum, make_web
from qwebs.relations import (
    apr_complement,
    apr_span,
    aqr_complement,
    aqr_matches_rotation,
    aqr_span,
    breadth,
    circumference,
    dgt_empty_pullback_holds,
    is_hexagonal,
    label_circumference,
    pair,
    ss_decomposition_formal,
    ss_prime_span,
    ss_span,
    verify_kernel_inductive,
)


def _flows(n, k, max_entry=3):
    for a in product(range(max_entry + 1), repeat=k):
        if k and min(a) != 0:
            continue
        for b in product(range(max_entry + n + 1), repeat=k):
            f = FlowPair(a, b)
            if f.is_admissible(n):
                yield f


SWEEP = [(n, f) for n in range(1, 6) for k in range(0, 4) for f in _flows(n, k, 2 if k == 3 else 3)]


@pytest.mark.parametrize("key", sorted(APR_GOLDEN))
def test_apr_golden_tables(key):
    n, a, b = key
    assert apr_span(n, FlowPair(a, b)).formal == APR_GOLDEN[key]


@pytest.mark.parametrize("key", sorted(SS_GOLDEN))
def test_ss_golden_tables(key):
    n, a, b = key
    got = ss_span(n, FlowPair(a, b)).formal
    for element in SS_GOLDEN[key]:
        assert element in got


def test_named_examples():
    hexa = apr_span(4, FlowPair((0, 0, 0), (1, 1, 1)))
    assert [str(x) for x in hexa.elements] == ["-P{1} + P{2} - P{3} + P{4}"]
    assert breadth(hexa.elements[0]) == 4
    assert apr_span(4, FlowPair((0,), (3,))).elements[0].is_zero()
    assert [str(x) for x in ss_span(4, FlowPair((0, 0), (2, 2))).nonzero()] == ["P{3} - Q{1}"]
    assert "(q^-3 + q^-1 + q + q^3)P{0} - P{1}" in [str(x) for x in apr_span(4, FlowPair((), ())).elements]


def test_ss_balanced_case_reduces_to_two_terms():
    # n + sum a - sum b = 0
    f = FlowPair((0, 0), (2, 2))
    for el in ss_span(4, f).formal[1:-1]:
        (pl,) = [l for fam, l in el if fam == "P"]
        assert el == F(("P", pl, 1), ("Q", f.sum_b - pl, -1))
    assert len(apr_span(4, f)) == 0


def test_ss_rejects_other_lengths():
    with pytest.raises(ValueError):
        ss_span(4, FlowPair((0,), (1,)))
    with pytest.raises(ValueError):
        ss_prime_span(4, FlowPair((0, 0, 0), (1, 1, 1)))


def test_ss_decomposition():
    d = ss_decomposition_formal(4, FlowPair((0, 0), (1, 1)))
    assert d["ss"] == d["apr"] + d["ss_prime"] == d["apr_plus_ss_prime"]
    for n in range(1, 6):
        for f in _flows(n, 2):
            if n + f.sum_a - f.sum_b > 0:
                d = ss_decomposition_formal(n, f)
                assert d["ss"] == d["apr"] + d["ss_prime"] == d["apr_plus_ss_prime"] == d["ss_with_both"]


def test_aqr_is_rotated_apr():
    for n, f in SWEEP:
        if f.k:
            assert aqr_matches_rotation(n, f)
    # AQR vanishes when the P side carries the relations
    assert len(aqr_span(4, FlowPair((0, 0, 0), (1, 1, 1))).nonzero()) == 0


def test_orthogonality_and_counts():
    for n, f in SWEEP:
        es, ds = apr_complement(n, f), apr_span(n, f)
        for e in es:
            for formal in ds.formal:
                assert pair(e, formal).is_zero()
        if n + f.sum_a - f.sum_b >= 0:
            labels = f.min_a + n - f.max_b + 1
            assert len(es) + len(ds) == max(labels, 0)


def test_aqr_orthogonality():
    for n, f in SWEEP:
        for e in aqr_complement(n, f):
            for formal in aqr_span(n, f).formal:
                assert pair(e, formal).is_zero()


def test_pair_basics():
    f = FlowPair((0, 0, 0), (1, 1, 1))
    (e,) = apr_complement(5, FlowPair((0, 0, 0, 0), (1, 1, 1, 1)))[:1]
    assert pair(e, {}) == 0
    hexa = apr_span(4, f)
    es = apr_complement(4, f)
    x = WebSum.single(make_web("P", 4, f, 2))
    assert [pair(e, x) for e in es] == [e(2) for e in es]
    assert all(pair(e, hexa.elements[0]).is_zero() for e in es)


def test_pullback_identity():
    for n in range(2, 6):
        for k in range(0, 4):
            for f in _flows(n, k, 2):
                if f.is_admissible(n - 1) and n - 1 + f.sum_a - f.sum_b >= 0:
                    assert dgt_empty_pullback_holds(n, f)


def test_breadth_bounds():
    for n, f in SWEEP:
        for x in apr_span(n, f).formal:
            assert len(x) <= f.sumhat_b - f.sumtilde_a + 2
        c = circumference(n, f)
        for x in apr_span(n, f).nonzero():
            assert breadth(x) >= c // 2 + 1


def test_circumference_and_hexagonality():
    assert circumference(4, FlowPair((0, 0, 0), (1, 1, 1))) == 6
    assert is_hexagonal(4, FlowPair((0, 0, 0), (1, 1, 1)))
    assert circumference(3, FlowPair((0, 0), (0, 0))) == 0
    assert not is_hexagonal(4, FlowPair((0, 0), (1, 1)))
    # six nontrivial edges, but only one in/out alternation
    labels = ((5, "+"),) + ((1, "-"), (0, "+")) * 5 + ((1, "-"),)
    assert label_circumference(6, labels) == 2
    assert label_circumference(6, ((1, "-"), (1, "+")) * 3) == 6


def test_inductive_examples():
    rep = verify_kernel_inductive(4, FlowPair((0, 0), (1, 1)), "ss")
    assert rep.passed and rep.cases > 0
    rep = verify_kernel_inductive(4, FlowPair((0, 0, 0), (1, 1, 1)), "apr")
    assert rep.passed
    base = verify_kernel_inductive(0, FlowPair((0, 0), (0, 0)), "ss")
    assert base.passed
    assert all(x.is_zero() for x in ss_span(0, FlowPair((0, 0), (0, 0))).elements)


def test_inductive_report_json():
    rep = verify_kernel_inductive(3, FlowPair((0, 0), (1, 1)), "ss")
    js = rep.to_json()
    assert js["passed"] is True and js["space"] == "ss" and js["flows"] == "(0,0),(1,1)"
