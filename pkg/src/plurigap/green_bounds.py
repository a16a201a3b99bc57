"""Upper and lower bounds for the pluricomplex Green function of the
bidisk with poles at a three-point configuration.

Upper bounds come from analytic disks (sum of disk Green functions at
the pole preimages); the lower bound is the sum over the pole multiset
of single-pole bidisk Green functions max(log d(z1, a1), log d(z2, a2)),
which is a competitor in the defining envelope.  Degenerate (collapsed)
configurations are handled with multiplicity on both sides, so the
sandwich inequality is preserved in every mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .disk_geometry import BidiskPoint, DiskPoint, as_disk_point, pseudo_dist
from .errors import CoincidentPoint, PoleHit

if TYPE_CHECKING:
    from .neil_disk import PoleConfig


@dataclass(frozen=True)
class BoundReport:
    """A one-sided bound with enough witness data to re-verify it.

    ``kind`` is "upper" or "lower"; ``value`` is the bound (always <= 0:
    divergent bounds are reported through exceptions, never as floating
    infinities); ``witness`` is a structured dict describing how the
    value was produced; ``domain`` tags the bidisk or the ball.
    """

    kind: str
    value: float
    witness: dict
    point: BidiskPoint
    config: "PoleConfig"
    domain: str = "bidisk"

    def __post_init__(self):
        if self.kind not in ("upper", "lower"):
            raise ValueError(f"kind must be 'upper' or 'lower', got {self.kind!r}")
        if self.domain not in ("bidisk", "ball"):
            raise ValueError(f"domain must be 'bidisk' or 'ball', got {self.domain!r}")
        if not self.value <= 0.0:
            raise ValueError(f"bound must be <= 0, got {self.value}")
        if math.isinf(self.value):
            raise ValueError("divergent bounds must be raised, not reported")


def poletsky_disk_bound(preimages: Sequence[complex], eval_point: DiskPoint) -> float:
    """Sum of disk Green functions: sum_p log d(eval_point, p).

    This is the generic disk-envelope upper bound given any analytic
    disk hitting the poles at ``preimages``.  fsum makes the result
    exactly permutation-invariant in the preimage list.  Raises
    :class:`CoincidentPoint` when the evaluation point equals a
    preimage (the bound is -infinity, reported as an exception).
    """
    eval_point = as_disk_point(eval_point, "evaluation point")
    terms = []
    for p in preimages:
        d = pseudo_dist(eval_point, p)
        if d == 0.0:
            raise CoincidentPoint("evaluation point coincides with a preimage")
        terms.append(math.log(d))
    return math.fsum(terms)


def green_lower_oracle(cfg: "PoleConfig", z: BidiskPoint) -> float:
    """Competitor lower bound: sum over the pole multiset of
    max(log d(z1, a1), log d(z2, a2)).

    Each summand is the single-pole Green function of the bidisk, so the
    sum is a negative plurisubharmonic function with (at least) unit
    logarithmic singularity at every pole, hence a lower bound for the
    envelope.  Collapsed configurations keep their multiplicity; the
    single-pole mode contributes exactly one term.  Raises
    :class:`PoleHit` when z equals a pole.
    """
    z1 = as_disk_point(complex(z[0]), "z1")
    z2 = as_disk_point(complex(z[1]), "z2")
    terms = []
    for a1, a2 in cfg.poles:
        d1 = pseudo_dist(z1, a1)
        d2 = pseudo_dist(z2, a2)
        if d1 == 0.0 and d2 == 0.0:
            raise PoleHit(f"evaluation point equals the pole ({a1}, {a2})")
        best = max(d1, d2)
        terms.append(math.log(best))
    return math.fsum(terms)


def sandwich(cfg: "PoleConfig", z: BidiskPoint, eta: float = 0.05) -> tuple[float, float]:
    """Evaluate both bounds and assert lower <= upper + 1e-9.

    Runs the containment certificate before trusting the disk bound;
    constituent errors (degenerate target, containment failure, pole
    hits) propagate.
    """
    from .neil_disk import build_neil, containment_check, green_upper_from_neil

    lower = green_lower_oracle(cfg, z)
    disk = build_neil(z, cfg, eta=eta)
    containment_check(disk, eta)
    upper = green_upper_from_neil(disk, eta).value
    if not lower <= upper + 1e-9:
        raise AssertionError(
            f"sandwich violated: lower {lower} > upper {upper} at z = {z}"
        )
    return lower, upper
