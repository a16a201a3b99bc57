"""Disk-envelope upper bound, competitor lower bound, and the sandwich."""

import math

import numpy as np
import pytest

from plurigap.errors import CoincidentPoint, PoleHit
from plurigap.green_bounds import (
    BoundReport,
    green_lower_oracle,
    poletsky_disk_bound,
    sandwich,
)
from plurigap.disk_geometry import pseudo_dist
from plurigap.neil_disk import PoleConfig, build_neil, green_upper_from_neil

from conftest import random_disk_point, random_sector_point

Z = (1e-3, 1e-2)
CFG = PoleConfig.from_epsilon(1e-4, s_mode="identity")


def lower_mini_oracle(cfg, z):
    """Sum of single-pole terms, written out longhand."""
    total = 0.0
    for a1, a2 in cfg.poles:
        total += math.log(max(pseudo_dist(z[0], a1), pseudo_dist(z[1], a2)))
    return total


class TestPoletsky:
    def test_matches_disk_report(self):
        d = build_neil(Z, CFG)
        r = 1.0 - d.eta
        rep = green_upper_from_neil(d)
        recomputed = poletsky_disk_bound([p / r for p in d.preimages], d.zeta_z / r)
        assert recomputed == pytest.approx(rep.value, rel=1e-12)

    def test_matches_disk_report_over_sector(self):
        rng = np.random.default_rng(17)
        for _ in range(25):
            z = random_sector_point(rng)
            cfg = PoleConfig.from_epsilon(abs(z[1]) ** 3, s_mode="identity")
            d = build_neil(z, cfg)
            r = 1.0 - d.eta
            rep = green_upper_from_neil(d)
            recomputed = poletsky_disk_bound(
                [p / r for p in d.preimages], d.zeta_z / r
            )
            assert recomputed == pytest.approx(rep.value, rel=1e-12)

    def test_permutation_invariance_is_exact(self):
        rng = np.random.default_rng(23)
        pts = [random_disk_point(rng, rmax=0.7) for _ in range(6)]
        ref = poletsky_disk_bound(pts, 0.05 + 0.02j)
        for _ in range(20):
            rng.shuffle(pts)
            assert poletsky_disk_bound(pts, 0.05 + 0.02j) == ref

    def test_coincident_point_raises(self):
        with pytest.raises(CoincidentPoint):
            poletsky_disk_bound([0.1, 0.2], 0.2)


class TestLowerOracle:
    def test_frozen_value(self):
        assert green_lower_oracle(CFG, Z) == pytest.approx(
            -13.825559893817275, rel=1e-12
        )

    def test_matches_mini_oracle(self):
        rng = np.random.default_rng(29)
        for _ in range(50):
            z = random_sector_point(rng)
            cfg = PoleConfig.from_epsilon(abs(z[1]) ** 3, s_mode="identity")
            assert green_lower_oracle(cfg, z) == pytest.approx(
                lower_mini_oracle(cfg, z), rel=1e-12
            )

    def test_single_pole_reduces_to_max_coordinate(self):
        sp = PoleConfig.single_pole()
        assert green_lower_oracle(sp, (0.3, 0.4)) == pytest.approx(
            math.log(0.4), rel=1e-12
        )
        assert green_lower_oracle(sp, (0.5, 0.1)) == pytest.approx(
            math.log(0.5), rel=1e-12
        )

    def test_pole_hit_raises(self):
        with pytest.raises(PoleHit):
            green_lower_oracle(CFG, (0.0, 0.0))
        with pytest.raises(PoleHit):
            green_lower_oracle(CFG, (0.0, CFG.epsilon))

    def test_collapsed_config_keeps_multiplicity(self):
        # with eps = s = 0 all three poles sit at the origin, so the lower
        # bound is three times the single-pole value
        cfg0 = PoleConfig.from_epsilon(0.0, s_mode="zero")
        got = green_lower_oracle(cfg0, (0.3, 0.4))
        assert got == pytest.approx(3.0 * math.log(0.4), rel=1e-12)


class TestBoundReport:
    def test_rejects_bad_kind(self):
        with pytest.raises(ValueError):
            BoundReport(kind="sideways", value=-1.0, witness={}, point=Z, config=CFG)

    def test_rejects_bad_domain(self):
        with pytest.raises(ValueError):
            BoundReport(
                kind="upper", value=-1.0, witness={}, point=Z, config=CFG, domain="disk"
            )

    def test_rejects_positive_value(self):
        with pytest.raises(ValueError):
            BoundReport(kind="upper", value=0.5, witness={}, point=Z, config=CFG)

    def test_rejects_divergent_value(self):
        with pytest.raises(ValueError):
            BoundReport(kind="lower", value=-math.inf, witness={}, point=Z, config=CFG)


class TestSandwich:
    def test_frozen_values_at_reference_point(self):
        lower, upper = sandwich(CFG, Z)
        assert lower == pytest.approx(-13.825559893817275, rel=1e-12)
        assert upper == pytest.approx(-9.01521630248066, rel=1e-12)
        assert lower < upper

    def test_holds_over_sector(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            z = random_sector_point(rng)
            cfg = PoleConfig.from_epsilon(abs(z[1]) ** 3, s_mode="identity")
            lower, upper = sandwich(cfg, z)
            assert lower <= upper + 1e-9

    def test_holds_in_collapsed_modes(self):
        for cfg in (
            PoleConfig.from_epsilon(0.0, s_mode="zero"),
            PoleConfig.from_epsilon(1e-4, s_mode="zero"),
        ):
            lower, upper = sandwich(cfg, Z)
            assert lower <= upper + 1e-9
