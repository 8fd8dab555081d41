import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fastlight import sensitivity as sn
from fastlight.errors import CadSingularity, ComplexRoot, ZeroQ

import golden

W0 = 2.43e15


def test_first_order_no_dispersion():
    assert sn.first_order_beat(5.0, 1.0, W0, 0.0) == (5.0, 1.0)


def test_first_order_half_group_index():
    beat, xi = sn.first_order_beat(5.0, 1.0, W0, -0.5 / W0)
    assert xi == pytest.approx(2.0, rel=1e-15) and beat == pytest.approx(10.0, rel=1e-15)


def test_first_order_cad():
    with pytest.raises(CadSingularity):
        sn.first_order_beat(5.0, 1.0, W0, -1.0 / W0)


def test_q_factor():
    assert sn.q_factor(1e-9, 0.0, W0) == 0.0
    f = 2 * math.pi * 1e6 / W0
    assert sn.q_factor(f, 4.1e-38, W0) == pytest.approx(golden.HEADLINE_Q, rel=1e-12)
    assert sn.q_factor(2 * f, 4.1e-38, W0) == 2 * sn.q_factor(f, 4.1e-38, W0)
    with pytest.raises(ValueError):
        sn.q_factor(0.0, 1.0, W0)
    with pytest.warns(UserWarning):
        sn.q_factor(1.0, 1e-30, W0)


def test_q_headline_value():
    # the quoted inputs give Q = 6.26e-16; 6.1e-16 is not reproducible from them
    assert golden.HEADLINE_Q == pytest.approx(6.26e-16, rel=1e-3)


def test_second_order_q_zero():
    beat, eta = sn.second_order_beat(3.0, 7.5, 0.0)
    assert eta == 7.5 and beat == 3.0 * 7.5


def test_second_order_headline():
    _, eta = sn.second_order_beat(1.0, 1e9, 6.1e-16)
    assert eta == pytest.approx(golden.ETA_Q61_XI1E9, rel=1e-12)
    assert eta == pytest.approx(7.8e7, rel=5e-3)


def test_second_order_saturation():
    q = 6.1e-16
    _, eta = sn.second_order_beat(1.0, math.inf, q)
    assert eta == pytest.approx(sn.eta_max(q), rel=1e-15)
    for xi in (1e11, -1e11, 1e13, -1e13):
        _, eta = sn.second_order_beat(1.0, xi, q)
        assert eta < sn.eta_max(q) and eta == pytest.approx(sn.eta_max(q), rel=1e-3)


def test_negative_q_edge():
    # Q < 0: real roots stop at |xi| = 1/sqrt|Q|, where both branches meet 2/sqrt|Q|
    q = -6.1e-16
    xi = 1 / math.sqrt(-q) * (1 - 1e-15)
    for branch in ("upper", "lower"):
        _, eta = sn.second_order_beat(1.0, xi, q, branch)
        assert eta == pytest.approx(sn.eta_max(q), rel=1e-6)


def test_complex_root():
    with pytest.raises(ComplexRoot):
        sn.second_order_beat(1.0, 1e9, -6.1e-16)


def test_lower_branch_is_other_root():
    xi, q = 0.5, 0.3
    _, up = sn.second_order_beat(1.0, xi, q, "upper")
    _, lo = sn.second_order_beat(1.0, xi, q, "lower")
    root = math.sqrt(1 + q * xi * xi)
    assert up == pytest.approx(abs(2 * xi / (1 + root)), rel=1e-14)
    assert lo == pytest.approx(abs(-2 * xi / (1 - root)), rel=1e-12)


def test_eta_max():
    assert sn.eta_max(4.0) == 1.0
    assert sn.eta_max(1e-16) == pytest.approx(2e8, rel=1e-15)
    assert sn.eta_max(6.1e-16) == pytest.approx(golden.ETA_MAX_Q61, rel=1e-14)
    assert sn.eta_max(6.1e-16) / 8.0e7 - 1 < 0.02
    with pytest.raises(ZeroQ):
        sn.eta_max(0.0)


@settings(max_examples=300, deadline=None)
@given(log_xi=st.floats(-3, 12), log_q=st.floats(-30, -1), sign=st.sampled_from([-1.0, 1.0]))
def test_branch_limit(log_xi, log_q, sign):
    xi, q = sign * 10**log_xi, 10**log_q
    if q * xi * xi >= 1e-6:
        return
    _, eta = sn.second_order_beat(1.0, xi, q)
    # evaluated exactly on the computed doubles, so no rounding enters the check
    a = Fraction(abs(xi))
    assert abs(Fraction(eta) - a) <= a * Fraction(q) * Fraction(xi) ** 2 / 2


def test_monotone_and_bounded():
    q = 6.26e-16
    xi = np.geomspace(1e-3, 1e14, 5000)
    eta = np.array([sn.second_order_beat(1.0, x, q)[1] for x in xi])
    assert np.all(np.diff(eta) > 0)
    assert eta.max() <= sn.eta_max(q) * (1 + 1e-12)
    assert eta[-1] == pytest.approx(sn.eta_max(q), rel=1e-6)


@settings(max_examples=200, deadline=None)
@given(n_g=st.floats(-2, 2).filter(lambda x: abs(x) > 1e-3), log_q=st.floats(-20, -8))
def test_report_triangle(n_g, log_q):
    q = 10**log_q
    beat1, xi = sn.first_order_beat(1.0, 1.0, W0, (n_g - 1.0) / W0)
    beat2, _ = sn.second_order_beat(1.0, xi, q)
    if q * xi * xi < 1e-3:
        assert abs(beat1 - beat2) / abs(beat2) <= q * xi * xi


def test_resonance_q():
    assert sn.resonance_q(1e-9, -0.75, 4e-38, W0) == pytest.approx(-4e-9 * -0.75 - 2e-9 * 4e-38 * W0**2, rel=1e-14)


def test_report_invariants():
    beat1, xi = sn.first_order_beat(1.0, 1.0, W0, -0.2 / W0)
    beat2, eta = sn.second_order_beat(1.0, xi, 1e-10)
    rep = sn.EnhancementReport(xi, 1 / xi - 1, 1e-10, 1e-9, 1e-37, eta, sn.eta_max(1e-10), beat1, beat2, beat2)
    assert rep.invariant_violations() == []
    bad = sn.EnhancementReport(xi, 0.5, 1e-10, 1e-9, 1e-37, 1e9, sn.eta_max(1e-10), beat1, beat2, beat2)
    assert set(bad.invariant_violations()) == {"xi*(1+n_tilde)=1", "|eta|<=eta_max"}


class TestCurve:
    Q = golden.HEADLINE_Q

    def test_unit_point(self):
        pts = sn.figure3_curve(self.Q, (0.5, 1.0), 11)
        assert pts[-1].ng_over_n0 == 1.0
        assert pts[-1].eta == pytest.approx(1.0, rel=1e-12)

    def test_bounded_and_saturating(self):
        pts = sn.figure3_curve(self.Q)
        etas = np.array([p.eta for p in pts])
        bound = sn.eta_max(self.Q)
        assert etas.max() <= bound * (1 + 1e-9)
        assert etas.max() >= 0.98 * bound

    def test_plateau_both_sides(self):
        pts = sn.figure3_curve(self.Q)
        closest_neg = max((p for p in pts if p.ng_over_n0 < 0), key=lambda p: p.ng_over_n0)
        closest_pos = min((p for p in pts if p.ng_over_n0 > 0), key=lambda p: p.ng_over_n0)
        for p in (closest_neg, closest_pos):
            assert p.eta == pytest.approx(8.1e7, rel=0.02)

    def test_exclusion(self):
        pts = sn.figure3_curve(self.Q, (-1.0, 1.0), 501, scale="linear")
        assert all(abs(p.ng_over_n0) >= 1e-12 for p in pts)

    def test_monotone_upper(self):
        pts = [p for p in sn.figure3_curve(self.Q) if p.ng_over_n0 > 0]
        etas = [p.eta for p in pts]
        assert all(b < a for a, b in zip(etas, etas[1:]))

    def test_lower_branch_option(self):
        pts = sn.figure3_curve(self.Q, (-1.0, -1e-3), 20, negative_branch="lower")
        assert all(p.branch == "lower" and p.eta > sn.eta_max(self.Q) for p in pts)

    def test_complex_samples_flagged(self):
        pts = sn.figure3_curve(-1e-4, (1e-6, 1.0), 50)
        flagged = [p for p in pts if p.flag]
        assert flagged and all(math.isnan(p.eta) and p.flag.startswith("ComplexRoot") for p in flagged)
        assert len(pts) == 50
