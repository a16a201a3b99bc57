"""Moving the two bounds from the bidisk to the Euclidean ball."""

import cmath
import math

import pytest

from plurigap.ball_transfer import (
    GapResult,
    ball_margin,
    gap_verdict,
    green_upper_in_ball,
    in_ball,
    lempert_lower_in_ball,
)
from plurigap.errors import NotInBall, SectorViolation
from plurigap.green_bounds import BoundReport
from plurigap.neil_disk import PoleConfig, build_neil, green_upper_from_neil

# the point where the strict gap is certified
Z1 = 10 ** -4.5 * cmath.exp(0.7j)
Z = (Z1, 1e-3)
CFG = PoleConfig.from_epsilon(1e-6, s_mode="identity")
DELTA = 0.2
THRESHOLD = (2.0 - DELTA) * math.log(abs(Z[1]))


class TestBallMembership:
    def test_margin_formula(self):
        assert ball_margin((0.3, 0.4)) == pytest.approx(1.0 - 0.09 - 0.16, rel=1e-12)

    def test_boundary_is_excluded(self):
        # |(0.6, 0.8)|^2 = 1 exactly; openness matters for the bounds
        assert not in_ball((0.6, 0.8))
        assert in_ball((0.6, 0.79))
        assert not in_ball((1.0, 0.0))


class TestLowerPassThrough:
    def test_report_shape(self):
        rep = lempert_lower_in_ball(THRESHOLD, Z, CFG)
        assert rep.kind == "lower"
        assert rep.domain == "ball"
        assert rep.value == THRESHOLD
        assert rep.witness["kind"] == "inclusion_pass_through"
        assert rep.witness["ball_margin_point"] == pytest.approx(
            ball_margin(Z), rel=1e-12
        )

    def test_rejects_point_outside_ball(self):
        with pytest.raises(NotInBall):
            lempert_lower_in_ball(-1.0, (0.8, 0.7), CFG)

    def test_poles_always_clear_the_ball_check(self):
        # PoleConfig caps |eps| and |s| below 1, which already places every
        # pole (0,0), (eps*s, 0), (0, eps) inside the open ball; the pole
        # guard is defensive depth, so extreme-but-legal configs must pass
        big = PoleConfig(epsilon=0.999, s=0.999)
        for cfg in (big, PoleConfig(epsilon=1.0 - 1e-16, s=0.0)):
            for pole in cfg.poles:
                assert in_ball(pole)
            rep = lempert_lower_in_ball(-1.0, (0.1, 0.1), cfg)
            assert rep.value == -1.0


class TestUpperViaDilation:
    def test_frozen_value(self):
        rep = green_upper_in_ball(Z, CFG)
        assert rep.kind == "upper"
        assert rep.domain == "ball"
        assert rep.value == pytest.approx(-12.918190697732236, rel=1e-12)

    def test_matches_direct_dilated_route(self):
        rep = green_upper_in_ball(Z, CFG)
        z_scaled = (math.sqrt(2.0) * Z[0], math.sqrt(2.0) * Z[1])
        cfg_scaled = PoleConfig(epsilon=math.sqrt(2.0) * CFG.epsilon, s=CFG.s)
        direct = green_upper_from_neil(build_neil(z_scaled, cfg_scaled))
        assert rep.value == pytest.approx(direct.value, abs=1e-9)

    def test_witness_records_the_dilation(self):
        w = green_upper_in_ball(Z, CFG).witness
        assert w["kind"] == "dilated_bidisk_green"
        assert w["scale_factor"] == pytest.approx(math.sqrt(2.0), rel=1e-15)
        assert w["log_scale"] == pytest.approx(0.5 * math.log(2.0), rel=1e-15)
        assert w["scaled_epsilon"] == pytest.approx(
            math.sqrt(2.0) * CFG.epsilon, rel=1e-15
        )
        assert abs(w["scaled_point"][1]) == pytest.approx(
            math.sqrt(2.0) * abs(Z[1]), rel=1e-15
        )

    def test_dilation_can_break_the_sector_from_below(self):
        # ratio |z1|/|z2|^(3/2) = 0.55 in the bidisk becomes 0.4625 after
        # dilation, under the 1/2 floor
        m2 = 1e-3
        zv = (0.55 * m2 ** 1.5, m2)
        with pytest.raises(SectorViolation):
            green_upper_in_ball(zv, CFG)

    def test_rejects_point_outside_ball(self):
        with pytest.raises(NotInBall):
            green_upper_in_ball((0.8, 0.7), CFG)


class TestGapVerdict:
    def test_frozen_strict_gap(self):
        lo = lempert_lower_in_ball(THRESHOLD, Z, CFG)
        up = green_upper_in_ball(Z, CFG)
        g = gap_verdict(lo, up)
        assert isinstance(g, GapResult)
        assert g.gap == pytest.approx(0.484231195564389, rel=1e-9)
        assert g.strict

    def test_gap_is_plain_difference(self):
        lo = lempert_lower_in_ball(THRESHOLD, Z, CFG)
        up = green_upper_in_ball(Z, CFG)
        g = gap_verdict(lo, up)
        assert g.gap == pytest.approx(lo.value - up.value, rel=1e-15)

    def test_kind_mismatch(self):
        up = green_upper_in_ball(Z, CFG)
        with pytest.raises(ValueError):
            gap_verdict(up, up)

    def test_domain_mismatch(self):
        lo_ball = lempert_lower_in_ball(THRESHOLD, Z, CFG)
        up_bidisk = BoundReport(
            kind="upper", value=-13.0, witness={}, point=Z, config=CFG, domain="bidisk"
        )
        with pytest.raises(ValueError):
            gap_verdict(lo_ball, up_bidisk)

    def test_point_mismatch(self):
        lo = lempert_lower_in_ball(THRESHOLD, Z, CFG)
        other = (0.1 * Z[0], Z[1])
        up = BoundReport(
            kind="upper", value=-13.0, witness={}, point=other, config=CFG, domain="ball"
        )
        with pytest.raises(ValueError):
            gap_verdict(lo, up)

    def test_non_strict_gap_reported_not_raised(self):
        lo = lempert_lower_in_ball(-20.0, Z, CFG)
        up = green_upper_in_ball(Z, CFG)
        g = gap_verdict(lo, up)
        assert not g.strict
        assert g.gap < 0
