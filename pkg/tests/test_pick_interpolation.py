"""Two-point Schwarz-Pick interpolation and the factorized-disk assembly."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plurigap.disk_geometry import mobius, pseudo_dist
from plurigap.errors import DegenerateNodes, InfeasibleProblem, InvalidDiskPoint
from plurigap.neil_disk import PoleConfig
from plurigap.pick_interpolation import (
    FactorizedDisk,
    SchurInterpolant,
    TwoPointProblem,
    assemble_disk,
    compute_w_values,
    pick_feasible,
    solve_two_point,
)

from conftest import random_disk_point

interior = st.complex_numbers(
    max_magnitude=0.9, allow_nan=False, allow_infinity=False
)


class TestTwoPointProblem:
    def test_rejects_exterior_node(self):
        with pytest.raises(InvalidDiskPoint):
            TwoPointProblem(node_a=1.2, target_a=0.1, node_b=0.3, target_b=0.2)

    def test_rejects_exterior_target(self):
        with pytest.raises(InvalidDiskPoint):
            TwoPointProblem(node_a=0.1, target_a=0.95, node_b=0.3, target_b=1.5)

    def test_rejects_coincident_nodes(self):
        with pytest.raises(DegenerateNodes):
            TwoPointProblem(node_a=0.3 + 0.1j, target_a=0.0, node_b=0.3 + 0.1j, target_b=0.5)


class TestPickFeasible:
    def test_contracting_data_is_feasible(self):
        p = TwoPointProblem(node_a=0.0, target_a=0.0, node_b=0.5, target_b=0.25)
        ok, margin = pick_feasible(p)
        assert ok
        assert margin == pytest.approx(0.5 - 0.25, rel=1e-12)

    def test_expanding_data_is_infeasible(self):
        # nodes are close (d = 1/7) but the targets are nearly antipodal
        p = TwoPointProblem(node_a=0.5, target_a=0.9, node_b=0.6, target_b=-0.9)
        ok, margin = pick_feasible(p)
        assert not ok
        assert margin == pytest.approx(0.1 / 0.7 - 1.8 / 1.81, rel=1e-12)
        assert margin < 0

    def test_rigid_boundary_case_counts_as_infeasible(self):
        # equal pseudo-distances only admit a Blaschke transport, which the
        # strict test deliberately excludes
        p = TwoPointProblem(node_a=0.0, target_a=0.0, node_b=0.5, target_b=0.5)
        ok, margin = pick_feasible(p)
        assert not ok
        assert margin == 0.0


class TestSolveTwoPoint:
    def test_explicit_schur_constant(self):
        # with both chart centers at the origin the interpolant is just c*zeta
        h = solve_two_point(
            TwoPointProblem(node_a=0.0, target_a=0.0, node_b=0.5, target_b=0.25)
        )
        assert h.schur_constant == pytest.approx(0.5)
        assert h(0.0) == pytest.approx(0.0)
        assert h(0.5) == pytest.approx(0.25)
        assert h(0.8) == pytest.approx(0.4)

    def test_infeasible_raises_with_margin(self):
        with pytest.raises(InfeasibleProblem) as exc:
            solve_two_point(
                TwoPointProblem(node_a=0.5, target_a=0.9, node_b=0.6, target_b=-0.9)
            )
        assert exc.value.margin is not None
        assert exc.value.margin < 0

    def test_random_problems_roundtrip(self):
        """solve succeeds exactly when pick_feasible says so, and the
        interpolant reproduces both targets."""
        rng = np.random.default_rng(7)
        n_feasible = 0
        for _ in range(2000):
            na, nb = random_disk_point(rng), random_disk_point(rng)
            ta, tb = random_disk_point(rng), random_disk_point(rng)
            if na == nb:
                continue
            p = TwoPointProblem(node_a=na, target_a=ta, node_b=nb, target_b=tb)
            ok, _ = pick_feasible(p)
            if not ok:
                with pytest.raises(InfeasibleProblem):
                    solve_two_point(p)
                continue
            n_feasible += 1
            h = solve_two_point(p)
            assert abs(h(na) - ta) < 1e-10
            assert abs(h(nb) - tb) < 1e-10
        # sanity: the sampler hits both branches often
        assert 100 < n_feasible < 1900

    @given(na=interior, nb=interior, ta=interior, tb=interior)
    @settings(max_examples=300, deadline=None)
    def test_interpolant_is_a_self_map(self, na, nb, ta, tb):
        if abs(na - nb) < 1e-6:
            return
        p = TwoPointProblem(node_a=na, target_a=ta, node_b=nb, target_b=tb)
        ok, _ = pick_feasible(p)
        if not ok:
            return
        h = solve_two_point(p)
        for k in range(16):
            zeta = 0.999 * cmath.exp(2j * math.pi * k / 16)
            assert abs(h(zeta)) <= 1.0 + 1e-9


class TestSchurInterpolant:
    def test_rejects_large_constant(self):
        with pytest.raises(InfeasibleProblem):
            SchurInterpolant(outer_center=0.1, inner_node=0.2, schur_constant=1.5)

    def test_rejects_bad_sign(self):
        with pytest.raises(ValueError):
            SchurInterpolant(outer_center=0.1, inner_node=0.2, schur_constant=0.5, sign=2)

    def test_matches_mobius_composition(self):
        h = SchurInterpolant(outer_center=0.3j, inner_node=0.2, schur_constant=0.7)
        for zeta in (0.0, 0.5, -0.4 + 0.1j):
            want = mobius(0.3j, 0.7 * mobius(0.2, zeta))
            assert abs(h(zeta) - want) < 1e-15


class TestWValues:
    # straightforward to evaluate by hand at round nodes
    Z = (1e-3, 1e-2)
    CFG = PoleConfig.from_epsilon(1e-6, s_mode="identity")

    def test_frozen_values(self):
        w1, w2, w3, w4 = compute_w_values(self.Z, self.CFG, 0.1, 0.11, 0.09)
        assert w1 == pytest.approx(-4.5004545454545446e-10, rel=1e-12)
        assert w2 == pytest.approx(-0.9909999999999992, rel=1e-12)
        assert w3 == pytest.approx(9.890000000000006, rel=1e-12)
        assert w4 == pytest.approx(0.0005500555555555555, rel=1e-12)

    def test_values_match_defining_quotients(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            n0 = random_disk_point(rng, rmax=0.8)
            n1 = random_disk_point(rng, rmax=0.8)
            n2 = random_disk_point(rng, rmax=0.8)
            if min(abs(n0), abs(n1), abs(n2)) < 1e-3:
                continue
            if min(abs(n0 - n1), abs(n0 - n2), abs(n1 - n2)) < 1e-3:
                continue
            w1, w2, w3, w4 = compute_w_values(self.Z, self.CFG, n0, n1, n2)
            eps, s = self.CFG.epsilon, self.CFG.s
            assert abs(w1 - eps * s / (n1 * mobius(n2, n1))) < 1e-15
            assert abs(w2 - self.Z[0] / (n0 * mobius(n2, n0))) < 1e-12
            assert abs(w3 - self.Z[1] / (n0 * mobius(n1, n0))) < 1e-12
            assert abs(w4 - eps / (n2 * mobius(n1, n2))) < 1e-15

    def test_vanishing_node_underflows(self):
        with pytest.raises(DegenerateNodes):
            compute_w_values(self.Z, self.CFG, 0.0, 0.11, 0.09)


class TestFactorizedDisk:
    Z = (1e-3, 1e-2)
    CFG = PoleConfig.from_epsilon(1e-6, s_mode="identity")
    # node triple found by the multistart search (objective -6.863140763018517)
    NODES = (
        -0.10219866759286637 - 0.0018961267744043002j,
        -0.0008012562261543645 + 0.0009082593435096683j,
        -0.0014052423291125576 + 0.000608766613851538j,
    )

    def test_interpolation_conditions(self):
        d = FactorizedDisk.from_interpolation_data(self.Z, self.CFG, *self.NODES)
        n0, n1, n2 = self.NODES
        eps = self.CFG.epsilon
        rho = self.CFG.rho
        targets = [
            (0j, (0j, 0j)),
            (n1, (rho, 0j)),
            (n2, (0j, complex(eps))),
            (n0, (complex(self.Z[0]), complex(self.Z[1]))),
        ]
        for zeta, want in targets:
            got = assemble_disk(d, zeta)
            assert abs(got[0] - want[0]) < 1e-9
            assert abs(got[1] - want[1]) < 1e-9

    def test_maps_into_closed_bidisk(self):
        d = FactorizedDisk.from_interpolation_data(self.Z, self.CFG, *self.NODES)
        for k in range(128):
            zeta = cmath.exp(2j * math.pi * k / 128)
            a, b = assemble_disk(d, zeta)
            assert abs(a) <= 1.0 + 1e-9
            assert abs(b) <= 1.0 + 1e-9

    def test_infeasible_node_triple(self):
        # at these nodes w3 = 9.89, so the second coordinate cannot interpolate
        with pytest.raises(InfeasibleProblem):
            FactorizedDisk.from_interpolation_data(self.Z, self.CFG, 0.1, 0.11, 0.09)
