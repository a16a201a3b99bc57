"""Unit disk geometry: Möbius automorphisms, the pseudohyperbolic
metric, and finite Blaschke products."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from plurigap.disk_geometry import (
    TOL_GEOM,
    BlaschkeProduct,
    _pseudo_dist_raw,
    as_closed_disk_point,
    as_disk_point,
    blaschke_eval,
    mobius,
    pseudo_dist,
)
from plurigap.errors import InvalidDiskPoint

from conftest import random_disk_point

# Strategy for interior points, kept off the rim so denominators stay tame.
disk_points = st.complex_numbers(max_magnitude=0.93, allow_nan=False, allow_infinity=False)


class TestMobius:
    def test_swaps_origin_and_center(self):
        a = 0.3 + 0.4j
        assert mobius(a, 0.0) == a
        assert abs(mobius(a, a)) < 1e-15

    def test_involution_random(self):
        rng = np.random.default_rng(42)
        for _ in range(500):
            a = random_disk_point(rng)
            z = random_disk_point(rng)
            assert abs(mobius(a, mobius(a, z)) - z) < 1e-12

    @given(a=disk_points, z=disk_points)
    def test_involution_property(self, a, z):
        assert abs(mobius(a, mobius(a, z)) - z) < 1e-10

    def test_boundary_to_boundary(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            a = random_disk_point(rng)
            zeta = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
            assert abs(abs(mobius(a, zeta)) - 1.0) < 1e-12

    def test_center_must_be_interior(self):
        with pytest.raises(InvalidDiskPoint):
            mobius(1.0 + 0j, 0.1)


class TestPseudoDist:
    def test_frozen_value(self):
        # |0.5 - (-0.5)| / |1 - 0.5 * (-0.5)| = 1 / 1.25
        assert pseudo_dist(0.5, -0.5) == pytest.approx(0.8, abs=1e-15)

    def test_symmetry_and_range(self):
        rng = np.random.default_rng(42)
        for _ in range(500):
            a, b = random_disk_point(rng), random_disk_point(rng)
            d = pseudo_dist(a, b)
            assert d == pytest.approx(pseudo_dist(b, a), abs=1e-15)
            assert 0.0 <= d < 1.0

    def test_mobius_invariance(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            a, b, c = (random_disk_point(rng) for _ in range(3))
            assert pseudo_dist(mobius(c, a), mobius(c, b)) == pytest.approx(
                pseudo_dist(a, b), abs=1e-12
            )

    def test_triangle_inequality(self):
        """d(a,b) <= (d(a,c) + d(c,b)) / (1 + d(a,c) d(c,b))."""
        rng = np.random.default_rng(11)
        for _ in range(500):
            a, b, c = (random_disk_point(rng) for _ in range(3))
            lhs = pseudo_dist(a, b)
            p, q = pseudo_dist(a, c), pseudo_dist(c, b)
            assert lhs <= (p + q) / (1.0 + p * q) + 1e-12

    @given(a=disk_points, b=disk_points)
    def test_agrees_with_mobius_modulus(self, a, b):
        assert pseudo_dist(a, b) == pytest.approx(abs(mobius(a, b)), abs=1e-12)

    def test_raw_variant_handles_exterior_targets(self):
        # 1 - a * conj(b) = 0 for a = 0.5, b = 2: the raw form reports inf
        # instead of raising, which the feasibility diagnostics rely on.
        assert _pseudo_dist_raw(0.5, 2.0) == math.inf
        assert _pseudo_dist_raw(0.3, 0.4) == pytest.approx(pseudo_dist(0.3, 0.4))


class TestValidation:
    def test_open_disk_gate(self):
        assert as_disk_point(0.99) == 0.99
        for bad in (1.0, 1.0 + 0j, 2.0, -1.5j):
            with pytest.raises(InvalidDiskPoint):
                as_disk_point(bad)

    def test_closed_disk_tolerance(self):
        assert as_closed_disk_point(1.0) == 1.0
        assert as_closed_disk_point(1.0 + TOL_GEOM / 2) == 1.0 + TOL_GEOM / 2
        with pytest.raises(InvalidDiskPoint):
            as_closed_disk_point(1.0 + 10 * TOL_GEOM)


class TestBlaschkeProduct:
    def test_degree_and_zeros(self):
        b = BlaschkeProduct(unimodular_factor=1.0, zeros=(0.2, -0.3j))
        assert b.degree == 2
        assert abs(b(0.2)) < 1e-14
        assert abs(b(-0.3j)) < 1e-14

    def test_matches_product_of_factors(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            zeros = tuple(random_disk_point(rng) for _ in range(3))
            c = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
            b = BlaschkeProduct(unimodular_factor=c, zeros=zeros)
            z = random_disk_point(rng)
            direct = c
            for w in zeros:
                direct *= mobius(w, z)
            assert abs(b(z) - direct) < 1e-13
            assert blaschke_eval(b, z) == b(z)

    def test_unimodular_on_circle(self):
        b = BlaschkeProduct(unimodular_factor=-1.0, zeros=(0.5, 0.1 + 0.2j, -0.4j))
        for k in range(32):
            zeta = cmath.exp(2j * math.pi * k / 32)
            assert abs(abs(b(zeta)) - 1.0) < 1e-12

    def test_rejects_bad_data(self):
        with pytest.raises(InvalidDiskPoint):
            BlaschkeProduct(unimodular_factor=0.5, zeros=(0.1,))
        with pytest.raises(InvalidDiskPoint):
            BlaschkeProduct(unimodular_factor=1.0, zeros=(1.2,))
