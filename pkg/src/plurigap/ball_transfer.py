"""Transporting the bidisk bounds to the Euclidean unit ball.

Two inclusions do all the work.  The ball sits inside the bidisk, so
any analytic disk competitor in the ball is one in the bidisk and the
bidisk Lempert lower bound passes through unchanged.  In the other
direction the bidisk scaled by sqrt(2)/2 sits inside the ball, so the
Green function of the ball is dominated by the bidisk Green function
of the dilated data: poles and evaluation point multiplied by sqrt(2).
A strict positive gap between the transported lower bound and the
dilated upper bound certifies that the Lempert function exceeds the
Green function at that point of the ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .disk_geometry import BidiskPoint
from .errors import NotInBall, SectorViolation
from .green_bounds import BoundReport
from .neil_disk import PoleConfig, build_neil, containment_check, green_upper_from_neil, in_sector

_SQRT2 = math.sqrt(2.0)


def ball_margin(z: BidiskPoint) -> float:
    """1 - |z1|^2 - |z2|^2; positive exactly on the open ball."""
    return 1.0 - abs(z[0]) ** 2 - abs(z[1]) ** 2


def in_ball(z: BidiskPoint) -> bool:
    return ball_margin(z) > 0.0


def _require_in_ball(z: BidiskPoint, what: str) -> None:
    if not in_ball(z):
        raise NotInBall(f"{what} {z} has |.|^2 = {1.0 - ball_margin(z)} >= 1")


def lempert_lower_in_ball(
    bidisk_lower: float, z: BidiskPoint, cfg: PoleConfig
) -> BoundReport:
    """Re-issue a bidisk Lempert lower bound for the ball.

    The ball is contained in the bidisk, so every analytic disk through
    the poles and z inside the ball is also one inside the bidisk; the
    infimum over the smaller family can only grow.  Raises
    :class:`NotInBall` if the point or any pole escapes the ball.
    """
    _require_in_ball(z, "point")
    for pole in cfg.poles:
        _require_in_ball(pole, "pole")
    return BoundReport(
        kind="lower",
        value=bidisk_lower,
        witness={
            "kind": "inclusion_pass_through",
            "inclusion": "ball subset bidisk",
            "bidisk_lower": bidisk_lower,
            "ball_margin_point": ball_margin(z),
        },
        point=z,
        config=cfg,
        domain="ball",
    )


def green_upper_in_ball(
    z: BidiskPoint, cfg: PoleConfig, eta: float | None = None
) -> BoundReport:
    """Green upper bound on the ball via the dilated bidisk.

    Scaling the inclusion (sqrt(2)/2) D^2 subset B^2 by sqrt(2) turns a
    ball datum (z, poles) into the bidisk datum (sqrt(2) z, sqrt(2)
    poles); monotonicity of the Green function under inclusion gives

        G_ball(poles; z) <= G_bidisk(sqrt(2) poles; sqrt(2) z).

    The dilated poles are again of the perturbed form with epsilon' =
    sqrt(2) epsilon and s' = s (so rho' = epsilon' s' = sqrt(2) rho).
    The dilation multiplies |z2| by sqrt(2), which tightens only the
    lower sector inequality by 2^(-1/4); :class:`SectorViolation` is
    raised when the dilated point falls out.  The containment check
    runs on the dilated disk before the bound is trusted.
    """
    _require_in_ball(z, "point")
    for pole in cfg.poles:
        _require_in_ball(pole, "pole")
    z_scaled = (_SQRT2 * z[0], _SQRT2 * z[1])
    cfg_scaled = PoleConfig(epsilon=_SQRT2 * cfg.epsilon, s=cfg.s, mode=cfg.mode)
    if not in_sector(z_scaled):
        raise SectorViolation(
            f"dilated point {z_scaled} leaves the sector; the dilation "
            "tightens the lower bound |z1| >= |z2|^(3/2)/2 by 2^(-1/4)"
        )
    disk = build_neil(z_scaled, cfg_scaled, eta=0.05 if eta is None else eta)
    containment_check(disk)
    inner = green_upper_from_neil(disk)
    return BoundReport(
        kind="upper",
        value=inner.value,
        witness={
            "kind": "dilated_bidisk_green",
            "inclusion": "(sqrt(2)/2) bidisk subset ball",
            "scale_factor": _SQRT2,
            "log_scale": 0.5 * math.log(2.0),
            "scaled_point": z_scaled,
            "scaled_epsilon": cfg_scaled.epsilon,
            "scaled_poles": cfg_scaled.poles,
            "inner_witness": inner.witness,
            "c1_scaled": inner.value - 2.0 * math.log(abs(z_scaled[1])),
        },
        point=z,
        config=cfg,
        domain="ball",
    )


@dataclass(frozen=True)
class GapResult:
    """Difference between a Lempert lower and a Green upper bound."""

    gap: float
    strict: bool
    lower: BoundReport
    upper: BoundReport


def gap_verdict(lower: BoundReport, upper: BoundReport) -> GapResult:
    """Combine matched bounds into a gap statement.

    The gap is lower.value - upper.value; strict means > 0, which
    certifies that the Lempert function strictly exceeds the Green
    function at that point.  Mismatched kinds, domains, or points are
    caller bugs and raise ValueError.
    """
    if lower.kind != "lower" or upper.kind != "upper":
        raise ValueError(
            f"need (lower, upper) reports, got ({lower.kind}, {upper.kind})"
        )
    if lower.domain != upper.domain:
        raise ValueError(
            f"domain mismatch: {lower.domain} vs {upper.domain}"
        )
    if lower.point != upper.point:
        raise ValueError("reports describe different points")
    gap = lower.value - upper.value
    return GapResult(gap=gap, strict=gap > 0.0, lower=lower, upper=upper)
