"""Two-point Schwarz-Pick interpolation and the disk factorization.

A two-point problem asks for a holomorphic self-map h of the unit disk
with h(node_a) = target_a and h(node_b) = target_b.  By invariant
Schwarz-Pick, a solution with values strictly inside the disk exists
exactly when the targets are strictly closer in pseudohyperbolic
distance than the nodes.  The explicit solution used here is

    h = phi_{target_a} o (c * phi_{node_a}),
    c = phi_{target_a}(target_b) / phi_{node_a}(node_b),

which pins |c| = d(targets)/d(nodes) < 1.

The same module hosts the w-value map and the two-interpolant
factorization of an analytic disk through the three-pole configuration:
    phi(zeta) = (zeta phi_{zeta2}(zeta) h1(zeta), zeta phi_{zeta1}(zeta) h2(zeta))
so that phi(0) = (0, 0), and hitting the remaining poles and the target
point reduces to two independent two-point problems for h1 and h2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .disk_geometry import (
    BidiskPoint,
    ClosedDiskPoint,
    DiskPoint,
    as_closed_disk_point,
    as_disk_point,
    mobius,
    pseudo_dist,
)
from .errors import DegenerateNodes, InfeasibleProblem

if TYPE_CHECKING:
    from .neil_disk import PoleConfig

# Denominators below this are treated as exact zeros (w-values blow up).
_DENOM_FLOOR = 1e-300


@dataclass(frozen=True)
class TwoPointProblem:
    """Data of a two-point interpolation problem.

    Nodes must be distinct points of the open disk; targets must lie
    strictly inside the disk.
    """

    node_a: DiskPoint
    target_a: DiskPoint
    node_b: DiskPoint
    target_b: DiskPoint

    def __post_init__(self):
        object.__setattr__(self, "node_a", as_disk_point(self.node_a, "node_a"))
        object.__setattr__(self, "node_b", as_disk_point(self.node_b, "node_b"))
        object.__setattr__(self, "target_a", as_disk_point(self.target_a, "target_a"))
        object.__setattr__(self, "target_b", as_disk_point(self.target_b, "target_b"))
        if self.node_a == self.node_b:
            raise DegenerateNodes("interpolation nodes coincide")


def pick_feasible(p: TwoPointProblem) -> tuple[bool, float]:
    """Strict two-point Pick test.

    Returns ``(ok, margin)`` with margin = d(nodes) - d(targets).  The
    problem is declared feasible only for margin > 0; the rigid boundary
    case margin = 0 (Blaschke transport) is reported infeasible.
    """
    margin = pseudo_dist(p.node_a, p.node_b) - pseudo_dist(p.target_a, p.target_b)
    return margin > 0.0, margin


@dataclass(frozen=True)
class SchurInterpolant:
    """Interpolant h(zeta) = phi_{outer}(sign * c * phi_{inner}(zeta)).

    ``sign`` records the orientation convention (always +1 for
    interpolants built by :func:`solve_two_point`); ``schur_constant``
    satisfies |c| <= 1, strictly < 1 for feasible data.
    """

    outer_center: DiskPoint
    inner_node: DiskPoint
    schur_constant: complex
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "outer_center", as_disk_point(self.outer_center, "outer center"))
        object.__setattr__(self, "inner_node", as_disk_point(self.inner_node, "inner node"))
        c = complex(self.schur_constant)
        if abs(c) > 1.0:
            raise InfeasibleProblem(f"Schur constant must satisfy |c| <= 1, got {abs(c)}")
        object.__setattr__(self, "schur_constant", c)
        if self.sign not in (1, -1):
            raise ValueError("sign convention must be +1 or -1")

    def __call__(self, zeta: ClosedDiskPoint) -> complex:
        inner = mobius(self.inner_node, zeta)
        return mobius(self.outer_center, self.sign * self.schur_constant * inner)


def solve_two_point(p: TwoPointProblem) -> SchurInterpolant:
    """Construct the explicit interpolant for a feasible problem.

    Raises :class:`InfeasibleProblem` (carrying the margin) when the
    strict Pick condition fails.
    """
    ok, margin = pick_feasible(p)
    if not ok:
        raise InfeasibleProblem(
            f"two-point problem infeasible, margin = {margin}", margin=margin
        )
    c = mobius(p.target_a, p.target_b) / mobius(p.node_a, p.node_b)
    return SchurInterpolant(
        outer_center=p.target_a, inner_node=p.node_a, schur_constant=c
    )


def compute_w_values(
    z: BidiskPoint,
    cfg: "PoleConfig",
    zeta0: DiskPoint,
    zeta1: DiskPoint,
    zeta2: DiskPoint,
) -> tuple[complex, complex, complex, complex]:
    """Interpolation targets for the factorized disk through three poles.

        w1 = eps*s / (zeta1 phi_{zeta2}(zeta1))   h1(zeta1), first coordinate
        w2 = z1    / (zeta0 phi_{zeta2}(zeta0))   h1(zeta0)
        w3 = z2    / (zeta0 phi_{zeta1}(zeta0))   h2(zeta0), second coordinate
        w4 = eps   / (zeta2 phi_{zeta1}(zeta2))   h2(zeta2)

    The values are returned unclamped: moduli >= 1 are meaningful (they
    witness infeasibility).  Raises :class:`DegenerateNodes` when a
    denominator underflows (coincident or vanishing nodes).
    """
    zeta0 = as_disk_point(zeta0, "zeta0")
    zeta1 = as_disk_point(zeta1, "zeta1")
    zeta2 = as_disk_point(zeta2, "zeta2")
    z1, z2 = complex(z[0]), complex(z[1])

    d1 = zeta1 * mobius(zeta2, zeta1)
    d2 = zeta0 * mobius(zeta2, zeta0)
    d3 = zeta0 * mobius(zeta1, zeta0)
    d4 = zeta2 * mobius(zeta1, zeta2)
    for name, d in (("w1", d1), ("w2", d2), ("w3", d3), ("w4", d4)):
        if abs(d) < _DENOM_FLOOR:
            raise DegenerateNodes(f"denominator of {name} underflows: |d| = {abs(d)}")

    w1 = cfg.epsilon * cfg.s / d1
    w2 = z1 / d2
    w3 = z2 / d3
    w4 = cfg.epsilon / d4
    return w1, w2, w3, w4


@dataclass(frozen=True)
class FactorizedDisk:
    """Analytic disk phi(zeta) = (zeta phi_{zeta2}(zeta) h1(zeta),
    zeta phi_{zeta1}(zeta) h2(zeta)) with Schur interpolants h1, h2."""

    zeta1: DiskPoint
    zeta2: DiskPoint
    h1: SchurInterpolant
    h2: SchurInterpolant

    @classmethod
    def from_interpolation_data(
        cls,
        z: BidiskPoint,
        cfg: "PoleConfig",
        zeta0: DiskPoint,
        zeta1: DiskPoint,
        zeta2: DiskPoint,
    ) -> "FactorizedDisk":
        """Build the disk through ((0,0), (rho,0), (0,eps), z) from node data.

        Solves the two two-point problems
            h1(zeta1) = w1, h1(zeta0) = w2   and   h2(zeta2) = w4, h2(zeta0) = w3.
        Raises :class:`InfeasibleProblem` when either Pick condition fails.
        """
        w1, w2, w3, w4 = compute_w_values(z, cfg, zeta0, zeta1, zeta2)
        for name, w in (("w1", w1), ("w2", w2), ("w3", w3), ("w4", w4)):
            if not abs(w) < 1.0:
                raise InfeasibleProblem(f"target {name} leaves the disk: |w| = {abs(w)}")
        h1 = solve_two_point(
            TwoPointProblem(node_a=zeta1, target_a=w1, node_b=zeta0, target_b=w2)
        )
        h2 = solve_two_point(
            TwoPointProblem(node_a=zeta2, target_a=w4, node_b=zeta0, target_b=w3)
        )
        return cls(zeta1=zeta1, zeta2=zeta2, h1=h1, h2=h2)


def assemble_disk(d: FactorizedDisk, zeta: ClosedDiskPoint) -> BidiskPoint:
    """Evaluate the factorized disk at ``zeta`` (closed disk allowed)."""
    zeta = as_closed_disk_point(zeta, "argument")
    first = zeta * mobius(d.zeta2, zeta) * d.h1(zeta)
    second = zeta * mobius(d.zeta1, zeta) * d.h2(zeta)
    return first, second
