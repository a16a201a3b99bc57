"""Unit-disk geometry: Mobius involutions, pseudohyperbolic distance,
finite Blaschke products.

Points are plain ``complex`` scalars.  ``DiskPoint`` marks values that
must satisfy ``|z| < 1`` strictly; ``ClosedDiskPoint`` admits ``|z| <= 1``
and is accepted only where boundary evaluation is meaningful.  The two
aliases carry the contract; the validators enforce it at API boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidDiskPoint

# Absolute tolerance for geometric identity checks (involution residuals,
# boundary preservation, unimodularity).  Tests import this.
TOL_GEOM = 1e-12

DiskPoint = complex
ClosedDiskPoint = complex
BidiskPoint = tuple[complex, complex]


def as_disk_point(z: complex, what: str = "point") -> complex:
    """Validate ``|z| < 1`` strictly and return ``z`` as ``complex``."""
    z = complex(z)
    if not abs(z) < 1.0:
        raise InvalidDiskPoint(f"{what} must lie in the open unit disk, |z| = {abs(z)}")
    return z


def as_closed_disk_point(z: complex, what: str = "point") -> complex:
    """Validate ``|z| <= 1`` (up to TOL_GEOM) and return ``z`` as ``complex``."""
    z = complex(z)
    if abs(z) > 1.0 + TOL_GEOM:
        raise InvalidDiskPoint(f"{what} must lie in the closed unit disk, |z| = {abs(z)}")
    return z


def mobius(a: DiskPoint, zeta: ClosedDiskPoint) -> ClosedDiskPoint:
    """Evaluate the disk automorphism phi_a(zeta) = (a - zeta)/(1 - conj(a) zeta).

    phi_a is an involution exchanging 0 and a; it preserves the unit
    circle, so ``zeta`` may sit on the boundary.
    """
    a = as_disk_point(a, "automorphism center")
    zeta = as_closed_disk_point(zeta, "argument")
    return (a - zeta) / (1.0 - a.conjugate() * zeta)


def pseudo_dist(a: DiskPoint, b: DiskPoint) -> float:
    """Pseudohyperbolic distance d(a, b) = |a - b| / |1 - a conj(b)|.

    Symmetric, in [0, 1) for interior points, invariant under disk
    automorphisms, and equal to |phi_a(b)|.
    """
    a = as_disk_point(a, "first point")
    b = as_disk_point(b, "second point")
    return abs(a - b) / abs(1.0 - a * b.conjugate())


def _pseudo_dist_raw(a: complex, b: complex) -> float:
    """Pseudohyperbolic distance formula without membership validation.

    Used by diagnostic code paths that must evaluate the formula on data
    that may have already escaped the disk (for example interpolation
    targets with modulus >= 1).  Returns ``inf`` when the denominator
    vanishes.
    """
    den = abs(1.0 - a * b.conjugate())
    if den == 0.0:
        return math.inf
    return abs(a - b) / den


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product B(zeta) = c * prod_k phi_{z_k}(zeta).

    ``unimodular_factor`` must have modulus 1 (within TOL_GEOM) and every
    zero must lie strictly inside the disk.  The degree is ``len(zeros)``.
    """

    unimodular_factor: complex
    zeros: tuple[complex, ...]

    def __post_init__(self):
        c = complex(self.unimodular_factor)
        if abs(abs(c) - 1.0) > TOL_GEOM:
            raise InvalidDiskPoint(f"factor must be unimodular, |c| = {abs(c)}")
        zeros = tuple(as_disk_point(z, "Blaschke zero") for z in self.zeros)
        object.__setattr__(self, "unimodular_factor", c)
        object.__setattr__(self, "zeros", zeros)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, zeta: ClosedDiskPoint) -> ClosedDiskPoint:
        return blaschke_eval(self, zeta)


def blaschke_eval(b: BlaschkeProduct, zeta: ClosedDiskPoint) -> ClosedDiskPoint:
    """Evaluate a Blaschke product at ``zeta`` (closed disk allowed).

    The result lies in the closed disk; on the boundary |B(zeta)| = 1.
    """
    zeta = as_closed_disk_point(zeta, "argument")
    out = complex(b.unimodular_factor)
    for z in b.zeros:
        out *= (z - zeta) / (1.0 - z.conjugate() * zeta)
    return out
