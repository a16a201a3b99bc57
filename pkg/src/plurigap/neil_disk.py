"""Perturbed cuspidal disks through a three-pole configuration.

The pole set is S = {(0,0), (rho,0), (0,eps)} with rho = eps*s.  For a
target z = (z1, z2) the map

    Psi(zeta) = ((lambda zeta - s/2)(zeta^2 - mu^2),  zeta^2 - (s/(2 lambda))^2)

is a polynomial perturbation of the cuspidal curve w1^2 = w2^3 chosen so
that Psi passes through all three poles and through z:

    lambda^2 = (z1 / (z2 (z2 - eps))) (z1/(z2 - eps) + s)
    mu^2     = eps + (s / (2 lambda))^2
    Psi(+-mu)             = (0, eps)
    Psi( s/(2 lambda))    = (0, 0)
    Psi(-s/(2 lambda))    = (eps*s, 0)
    Psi(zeta_z) = z  at  zeta_z = (z1/(z2 - eps) + s/2) / lambda.

On the sector  |z2|^{3/2}/2 <= |z1| <= |z2|^{3/2}  with eps, s small,
|zeta_z| stays within eta of |z2|^{1/2} and |lambda|^2 >= 1/32, which is
what makes Psi((1-eta) . ) land inside the bidisk and turns the disk into
a Green-function competitor.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .disk_geometry import BidiskPoint, pseudo_dist
from .errors import ContainmentFailed, CoincidentPoint, DegenerateTarget, PreimageOutsideDisk
from .green_bounds import BoundReport

_S_MODES = ("identity", "zero", "fixed")


@dataclass(frozen=True)
class PoleConfig:
    """Three-pole configuration {(0,0), (rho,0), (0,eps)} with rho = eps*s.

    ``mode`` is "three_pole" for the full configuration (possibly with
    collapsed points when eps = 0 or s = 0, flagged by ``collapsed``) or
    "single_pole" for the one-point set {(0,0)} used as a degenerate
    reference; in single-pole mode eps = s = 0 is forced.  Degenerate
    collapses are tracked as multiplicity: ``poles`` always returns the
    full multiset for the mode.
    """

    epsilon: complex = 0j
    s: complex = 0j
    mode: str = "three_pole"

    def __post_init__(self):
        object.__setattr__(self, "epsilon", complex(self.epsilon))
        object.__setattr__(self, "s", complex(self.s))
        if self.mode not in ("three_pole", "single_pole"):
            raise ValueError(f"unknown mode: {self.mode!r}")
        if self.mode == "single_pole" and (self.epsilon != 0 or self.s != 0):
            raise ValueError("single_pole mode forces epsilon = s = 0")
        if abs(self.epsilon) >= 1.0 or abs(self.s) >= 1.0:
            raise ValueError("epsilon and s must have modulus < 1")

    @classmethod
    def from_epsilon(
        cls, epsilon: complex, s_mode: str = "identity", s_value: complex | None = None
    ) -> "PoleConfig":
        """Build a configuration from eps and an s(eps) family.

        Families: "identity" (s = eps, the default perturbation scale),
        "zero" (s = 0, collapsed pair), "fixed" (explicit ``s_value``).
        """
        if s_mode not in _S_MODES:
            raise ValueError(f"unknown s_mode: {s_mode!r}")
        if s_mode == "identity":
            s = complex(epsilon)
        elif s_mode == "zero":
            s = 0j
        else:
            if s_value is None:
                raise ValueError("s_mode 'fixed' requires s_value")
            s = complex(s_value)
        return cls(epsilon=complex(epsilon), s=s)

    @classmethod
    def single_pole(cls) -> "PoleConfig":
        return cls(epsilon=0j, s=0j, mode="single_pole")

    @property
    def rho(self) -> complex:
        return self.epsilon * self.s

    @property
    def poles(self) -> tuple[BidiskPoint, ...]:
        """Pole multiset for the mode (repeats kept when collapsed)."""
        if self.mode == "single_pole":
            return ((0j, 0j),)
        return ((0j, 0j), (self.rho, 0j), (0j, self.epsilon))

    @property
    def is_single_pole(self) -> bool:
        return self.mode == "single_pole"

    @property
    def collapsed(self) -> bool:
        """True when distinct pole slots coincide (eps = 0 or s = 0)."""
        return self.mode == "three_pole" and (self.epsilon == 0 or self.s == 0)


def in_sector(z: BidiskPoint) -> bool:
    """Sector condition |z2|^{3/2}/2 <= |z1| <= |z2|^{3/2}.

    A relative slack of 1e-12 keeps boundary points (|z1| exactly at the
    cap, a common test configuration) from flipping on the last ulp of
    the power computation.
    """
    m1, m2 = abs(complex(z[0])), abs(complex(z[1]))
    cap = m2 ** 1.5
    return 0.5 * cap * (1.0 - 1e-12) <= m1 <= cap * (1.0 + 1e-12)


@dataclass(frozen=True)
class NeilDisk:
    """A constructed disk, together with its source data.

    ``lam`` and ``mu`` are principal square roots of the defining
    expressions; flipping the sign of ``lam`` flips ``zeta_z`` and the
    odd preimages simultaneously and leaves every modulus-level quantity
    unchanged (tested as a symmetry, not normalized away).
    """

    lam: complex
    mu: complex
    zeta_z: complex
    source_z: BidiskPoint
    source_cfg: PoleConfig
    eta: float = 0.05

    @property
    def preimages(self) -> tuple[complex, complex, complex, complex]:
        """Pole preimages (mu, -mu, s/(2 lam), -s/(2 lam)) hitting
        (0,eps), (0,eps), (0,0), (rho,0) in that order."""
        a = self.source_cfg.s / (2.0 * self.lam)
        return (self.mu, -self.mu, a, -a)

    def psi(self, zeta: complex) -> BidiskPoint:
        """Evaluate the defining polynomial map (no disk restriction)."""
        lam, s = self.lam, self.source_cfg.s
        a = s / (2.0 * lam)
        first = (lam * zeta - s / 2.0) * (zeta * zeta - self.mu * self.mu)
        second = zeta * zeta - a * a
        return first, second


def build_neil(z: BidiskPoint, cfg: PoleConfig, eta: float = 0.05) -> NeilDisk:
    """Construct the disk through the poles of ``cfg`` and through ``z``.

    Raises :class:`DegenerateTarget` when the defining formulas break
    down (z2 = 0, z2 = eps, z1 = 0, or lambda^2 = 0) and
    :class:`PreimageOutsideDisk` when a preimage or zeta_z has modulus
    >= 1.
    """
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie in (0, 1)")
    if cfg.is_single_pole:
        raise DegenerateTarget("single-pole configurations do not define a cuspidal disk")
    z1, z2 = complex(z[0]), complex(z[1])
    eps, s = cfg.epsilon, cfg.s
    if z2 == 0:
        raise DegenerateTarget("z2 = 0")
    if z2 == eps:
        raise DegenerateTarget("z2 = epsilon")
    if z1 == 0:
        raise DegenerateTarget("z1 = 0")

    ratio = z1 / (z2 - eps)
    lam_sq = (z1 / (z2 * (z2 - eps))) * (ratio + s)
    if lam_sq == 0:
        raise DegenerateTarget("lambda^2 = 0: z1/(z2 - eps) + s vanishes")
    lam = cmath.sqrt(lam_sq)
    mu_sq = eps + (s / (2.0 * lam)) ** 2
    mu = cmath.sqrt(mu_sq)
    zeta_z = (ratio + s / 2.0) / lam

    disk = NeilDisk(lam=lam, mu=mu, zeta_z=zeta_z, source_z=(z1, z2), source_cfg=cfg, eta=eta)
    for name, p in zip(("mu", "-mu", "s/(2 lam)", "-s/(2 lam)"), disk.preimages):
        if not abs(p) < 1.0:
            raise PreimageOutsideDisk(f"preimage {name} has modulus {abs(p)} >= 1")
    if not abs(zeta_z) < 1.0:
        raise PreimageOutsideDisk(f"zeta_z has modulus {abs(zeta_z)} >= 1")
    return disk


def eval_neil(d: NeilDisk, zeta: complex) -> BidiskPoint:
    """Evaluate the disk map at ``zeta``; no bidisk membership is implied
    (only the (1-eta)-rescaled disk is certified inside)."""
    return d.psi(complex(zeta))


def containment_check(d: NeilDisk, eta: float | None = None, n_samples: int = 8192) -> float:
    """Certify Psi(closed disk of radius 1-eta) inside the open bidisk.

    Samples ``n_samples`` equispaced points of the circle |zeta| = 1-eta
    and subtracts a rigorous slack bounding what sampling can miss: each
    coordinate of Psi is a polynomial, its derivative bounded on the
    closed disk of radius r by the coefficient sums

        |Psi1'| <= 3|lam| r^2 + |s| r + |lam||mu|^2,   |Psi2'| <= 2 r,

    and two adjacent samples are at most pi r / n_samples apart along a
    chord inside that disk.  By the maximum principle the circle maximum
    controls the whole closed disk, so

        margin = 1 - max_coordinate(sampled max + derivative slack)

    is a certified lower bound on the distance to escape.  Returns the
    (positive) margin; raises :class:`ContainmentFailed` with the margin
    otherwise.
    """
    if eta is None:
        eta = d.eta
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie in (0, 1)")
    if n_samples < 16:
        raise ValueError("n_samples too small for a meaningful slack")
    r = 1.0 - eta
    lam, mu, s = d.lam, d.mu, d.source_cfg.s
    a = s / (2.0 * lam)

    k = np.arange(n_samples)
    zeta = r * np.exp(2j * math.pi * k / n_samples)
    first = (lam * zeta - s / 2.0) * (zeta * zeta - mu * mu)
    second = zeta * zeta - a * a
    max1 = float(np.abs(first).max())
    max2 = float(np.abs(second).max())

    d1 = 3.0 * abs(lam) * r * r + abs(s) * r + abs(lam) * abs(mu) ** 2
    d2 = 2.0 * r
    step = math.pi * r / n_samples
    reach = max(max1 + d1 * step, max2 + d2 * step)
    margin = 1.0 - reach
    if margin <= 0.0:
        raise ContainmentFailed(
            f"cannot certify containment: margin = {margin} "
            f"(coordinate maxima {max1}, {max2} at radius {r})",
            margin=margin,
        )
    return margin


def green_upper_from_neil(d: NeilDisk, eta: float | None = None) -> BoundReport:
    """Upper bound on the pluricomplex Green function at the source point.

    Rescaling the disk by 1-eta makes v(zeta) = G(Psi((1-eta) zeta)) a
    negative subharmonic function on the unit disk with logarithmic poles
    at the rescaled preimages, so v is dominated by the sum of disk Green
    functions with those poles.  Evaluating at zeta_z/(1-eta) gives

        G(z) <= sum_p log d(zeta_z/(1-eta), p/(1-eta))

    over the four pole preimages (multiset; collapsed preimages keep
    their multiplicity, matching the multiplicity carried by the map).
    Requires a positive containment margin for the same eta; that
    precondition is the caller's responsibility and is checked by the
    sandwich and CLI layers.

    The report records the measured offset c1 = bound - 2 log|z2|.
    """
    if eta is None:
        eta = d.eta
    r = 1.0 - eta
    eval_pt = d.zeta_z / r
    if not abs(eval_pt) < 1.0:
        raise PreimageOutsideDisk(f"zeta_z/(1-eta) has modulus {abs(eval_pt)} >= 1")
    rescaled = []
    for name, p in zip(("mu", "-mu", "s/(2 lam)", "-s/(2 lam)"), d.preimages):
        q = p / r
        if not abs(q) < 1.0:
            raise PreimageOutsideDisk(f"rescaled preimage {name} has modulus {abs(q)} >= 1")
        rescaled.append(q)

    terms = []
    for q in rescaled:
        dist = pseudo_dist(eval_pt, q)
        if dist == 0.0:
            raise CoincidentPoint("evaluation point coincides with a pole preimage")
        terms.append(math.log(dist))
    value = math.fsum(terms)
    z2 = d.source_z[1]
    c1 = value - 2.0 * math.log(abs(z2))
    witness = {
        "kind": "analytic-disk",
        "eta": eta,
        "eval_point": eval_pt,
        "preimages": tuple(rescaled),
        "log_terms": tuple(terms),
        "c1": c1,
        "lam": d.lam,
        "mu": d.mu,
        "zeta_z": d.zeta_z,
    }
    return BoundReport(
        kind="upper", value=value, witness=witness, point=d.source_z, config=d.source_cfg
    )
