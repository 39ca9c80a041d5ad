"""Polygon webs: boundary labels, admissibility, canonical forms and WebSums."""

from __future__ import annotations

from itertools import product

import pytest

from qwebs.polygons import (
    ZERO_WEB,
    FlowPair,
    PolygonWeb,
    WebSum,
    admissible_webs,
    boundary_label,
    canonical_form,
    l_range,
    make_web,
    representative,
    rotate_P_to_Q,
    rotate_Q_to_P,
    web_eq,
)
from qwebs.qalgebra import qint


def _flows(max_n=4, max_k=3, max_entry=3):
    for n in range(1, max_n + 1):
        for k in range(1, max_k + 1):
            for a in product(range(max_entry + 1), repeat=k):
                if min(a) != 0:
                    continue
                for b in product(range(max_entry + 2), repeat=k):
                    f = FlowPair(a, b)
                    if f.is_admissible(n):
                        yield n, f


def test_boundary_label_examples():
    assert boundary_label(FlowPair((0, 0), (3, 0))) == ((0, "-"), (0, "+"), (3, "-"), (3, "+"))
    assert boundary_label(FlowPair((0, 0, 0), (1, 1, 1))) == ((1, "-"), (1, "+")) * 3
    assert all(lab == 0 for lab, _ in boundary_label(FlowPair((2, 2, 2), (2, 2, 2))))


def test_derived_scalars():
    f = FlowPair((1, 3, 0), (4, 3, 5))
    assert (f.sum_a, f.sum_b, f.max_a, f.min_a, f.max_b, f.min_b) == (4, 12, 3, 0, 5, 3)
    assert f.sumhat_b == 7 and f.sumtilde_a == 4
    assert f.regions() == [1, 5, 0, 3, 3, 4, 1]


def test_labels_in_range_iff_admissible():
    for n in range(0, 4):
        for a in product(range(3), repeat=2):
            for b in product(range(-1, 6), repeat=2):
                f = FlowPair(a, b)
                in_range = all(0 <= lab <= n for lab, _ in boundary_label(f))
                assert in_range == f.is_admissible(n)


def test_make_web_examples():
    hexa = FlowPair((0, 0, 0), (1, 1, 1))
    w = make_web("P", 4, hexa, 1)
    assert isinstance(w, PolygonWeb) and w.l == 1
    assert make_web("P", 4, hexa, 0) is ZERO_WEB
    assert isinstance(make_web("Q", 3, FlowPair((0, 0), (1, 1)), 0), PolygonWeb)
    assert make_web("Q", 3, FlowPair((0, 0), (1, 1)), 2) is ZERO_WEB
    assert make_web("P", 1, FlowPair((0, 0), (3, 3)), 3) is ZERO_WEB


def test_label_counts():
    for n, f in _flows():
        assert len(l_range("P", n, f)) == max(f.min_a + n - f.max_b + 1, 0)
        assert len(l_range("Q", n, f)) == max(f.min_b - f.max_a + 1, 0)
        assert len(admissible_webs("P", n, f)) == len(l_range("P", n, f))


def test_canonical_form():
    w = PolygonWeb("P", 3, FlowPair((1, 1), (2, 2)), 2)
    assert canonical_form(w) == PolygonWeb("P", 3, FlowPair((0, 0), (1, 1)), 1)
    for n, f in _flows(max_n=3, max_k=2, max_entry=2):
        for w in admissible_webs("P", n, f):
            assert canonical_form(w) == w
            for c in range(-5, 6):
                shifted = PolygonWeb("P", n, f.shifted(c), w.l + c)
                assert canonical_form(shifted) == w


def test_web_eq_examples():
    sq = FlowPair((0, 0), (1, 1))
    assert web_eq(make_web("P", 3, sq, 1), make_web("Q", 3, sq, 1))
    assert web_eq(make_web("P", 3, sq, 3), make_web("Q", 3, sq, 0))
    hexa = FlowPair((0, 0, 0), (1, 1, 1))
    assert not web_eq(make_web("P", 4, hexa, 2), make_web("P", 4, hexa, 3))
    assert web_eq(make_web("P", 4, hexa, 1), make_web("Q", 4, hexa, 1))
    assert web_eq(make_web("P", 4, hexa, 4), make_web("Q", 4, hexa, 0))


def test_bigon_extremes_are_the_strand():
    f = FlowPair((0,), (2,))
    strand = make_web("P", 4, f, 2)
    for fam, l in (("P", 4), ("Q", 0), ("Q", 2)):
        assert web_eq(make_web(fam, 4, f, l), strand)
    assert not web_eq(make_web("P", 4, f, 3), strand)
    # a one-point Q-range ties both extreme P-webs together
    f = FlowPair((0, 1), (1, 2))
    assert web_eq(make_web("P", 3, f, 2), make_web("P", 3, f, 3))
    loops = FlowPair((), ())
    assert not web_eq(make_web("P", 4, loops, 0), make_web("P", 4, loops, 4))


def test_web_eq_is_an_equivalence():
    webs = []
    for n, f in _flows(max_n=3, max_k=2, max_entry=2):
        webs += admissible_webs("P", n, f) + admissible_webs("Q", n, f)
    classes = {}
    for w in webs:
        assert web_eq(w, w)
        classes.setdefault(representative(w), []).append(w)
    for members in classes.values():
        for u in members:
            for v in members:
                assert web_eq(u, v) and web_eq(v, u)
    reps = list(classes)
    for i, u in enumerate(reps):
        for v in reps[i + 1:]:
            assert not web_eq(u, v)


def test_rotation():
    f = FlowPair((0, 0), (2, 2))
    g = rotate_Q_to_P(f, 4)
    assert g == FlowPair((-2, -2), (0, 0))
    assert rotate_P_to_Q(g, 4) == f
    assert len(set(rotate_Q_to_P(FlowPair((1, 1, 1), (2, 3, 4)), 5).b)) == 1
    for n, f in _flows(max_n=3, max_k=3, max_entry=2):
        assert rotate_P_to_Q(rotate_Q_to_P(f, n), n) == f


def test_websum_arithmetic():
    f = FlowPair((0, 0), (1, 1))
    w = make_web("P", 3, f, 2)
    x = WebSum.single(w)
    assert (x + x.scale(-1)).is_zero()
    assert x.scale(1) == x
    y = x.scale(qint(2)) + x.scale(qint(2))
    assert y.coeff(w) == qint(2) * 2
    assert str(y) == "(2q^-1 + 2q)P{2}"
    # identified webs share a slot
    z = WebSum.single(make_web("Q", 3, f, 1)) + WebSum.single(make_web("P", 3, f, 1))
    assert len(z) == 1 and str(z) == "(2)P{1}"
    other = WebSum.single(make_web("P", 3, FlowPair((0, 0), (2, 2)), 2))
    with pytest.raises(ValueError):
        x + other


def test_json_round_trip():
    w = make_web("P", 4, FlowPair((0, 0, 0), (1, 1, 1)), 2)
    assert w.to_json() == {"family": "P", "n": 4, "a": [0, 0, 0], "b": [1, 1, 1], "l": 2}
    assert PolygonWeb.from_json(w.to_json()) == w
    x = WebSum.single(w, qint(3)) + WebSum.single(make_web("P", 4, w.flows, 3), -1)
    assert WebSum.from_json(x.to_json()) == x
    assert x.to_json()["boundary"][0] == [1, "-"]
