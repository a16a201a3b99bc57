"""Exception types shared across the package.

Every error raised by library code derives from :class:`PlurigapError`,
so callers (and the CLI) can distinguish domain failures from bugs.
"""

from __future__ import annotations


class PlurigapError(Exception):
    """Base class for all library errors."""


class InvalidDiskPoint(PlurigapError):
    """A point violates a unit-disk membership precondition."""


class InfeasibleProblem(PlurigapError):
    """Two-point interpolation data fails the Schwarz-Pick condition.

    Carries the (non-positive) feasibility margin when available.
    """

    def __init__(self, message: str, margin: float | None = None):
        super().__init__(message)
        self.margin = margin


class DegenerateNodes(PlurigapError):
    """Interpolation nodes collide, or a node denominator underflows."""


class DegenerateTarget(PlurigapError):
    """Target point incompatible with the disk construction
    (z2 = 0, z2 = epsilon, z1 = 0, or a vanishing leading coefficient)."""


class PreimageOutsideDisk(PlurigapError):
    """A pole preimage or evaluation point left the open unit disk."""


class ContainmentFailed(PlurigapError):
    """The rescaled analytic disk could not be certified inside the bidisk.

    Carries the certified (negative) margin.
    """

    def __init__(self, message: str, margin: float):
        super().__init__(message)
        self.margin = margin


class CoincidentPoint(PlurigapError):
    """Evaluation point coincides with a pole preimage (bound diverges)."""


class PoleHit(PlurigapError):
    """Evaluation point equals a pole of the configuration."""


class NoFeasiblePoint(PlurigapError):
    """The candidate search found no feasible configuration."""


class OutsideRegime(PlurigapError):
    """Parameters violate the certified smallness regime."""


class CounterexampleFound(PlurigapError):
    """A sampled below-threshold candidate verified as feasible.

    This falsifies either the implementation or the certified regime,
    and always aborts loudly.
    """


class NotInBall(PlurigapError):
    """A point required to lie in the unit ball (or the transfer polydisk)
    does not."""


class SectorViolation(PlurigapError):
    """A point violates the sector condition |z2|^{3/2}/2 <= |z1| <= |z2|^{3/2}."""


class ChainInconsistency(PlurigapError):
    """The inequality chain accepted data it must refute; implementation bug."""
