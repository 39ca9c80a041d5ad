"""Exhaustive q-binomial identity sweeps."""

from __future__ import annotations

from qwebs.identities import (
    IDENTITIES,
    ss_identity_residual,
    triple_binomial_sum,
    verify_ed_zero,
    verify_recurrence,
    verify_ssprime_ss,
    verify_vandermonde,
)
from qwebs.qalgebra import qbinom


def test_ed_zero_hexagon_instance():
    for js in range(-2, 1):
        assert triple_binomial_sum(4, 0, 0, 3, 1, 3, js).is_zero()


def test_ed_zero_empty_range_and_small_n():
    # empty k-range
    assert triple_binomial_sum(2, 0, 0, 5, 5, 1, 9).is_zero()
    # n <= sum b - sum a - 1 kills the third binomial everywhere
    sa, sb = 1, 6
    for k in range(-10, 10):
        assert qbinom(3 + sa - sb, k).is_zero()
    assert triple_binomial_sum(3, sa, 0, sb, 3, 4, -2).is_zero()


def test_ssprime_collapse_case():
    # n + sum a - sum b = 1 leaves two terms
    a, b = (0, 0), (1, 2)
    n = 4
    for m in range(0, 2):
        for mp in range(0, 2):
            assert ss_identity_residual(n, a, b, m, mp).is_zero()


def test_ssprime_generic_points():
    assert ss_identity_residual(5, (0, 1), (2, 2), 1, 1).is_zero()
    assert ss_identity_residual(5, (0, 1), (2, 2), 1, 2).is_zero()
    assert ss_identity_residual(5, (0, 0), (1, 1), 0, 1, "support").is_zero()


def test_default_sweeps_have_no_violations():
    for name, fn in IDENTITIES.items():
        rep = fn()
        assert rep.passed, (name, rep.violations[:3])
        assert rep.cases > 0


def test_ssprime_findings_lie_outside_the_natural_range():
    rep = verify_ssprime_ss(max_n=3)
    for n, sa, mina, maxa, sb, minb, m, mp in rep.findings:
        assert not (maxa <= m <= minb and maxa <= mp <= minb)


def test_small_grids_and_reproducibility():
    assert verify_vandermonde(0).cases == 2
    assert verify_recurrence(1).cases == 2
    assert verify_ed_zero(max_n=2).to_json() == verify_ed_zero(max_n=2).to_json()
