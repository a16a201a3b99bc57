"""Refutation chain for below-threshold candidates.

For delta in (0, 1/4), a sector target z with |z2| below an explicit
radius, and a sufficiently small pole perturbation, no feasible node
triple can push the disk objective below (2 - delta) log|z2|.  The
refutation is a chain of pseudohyperbolic estimates ending in
incompatible lower and upper bounds on |w2|.  This module computes the
regime thresholds (with the exact inequality each one certifies),
evaluates every link of the chain numerically on concrete candidates,
and samples below-threshold candidates to confirm none is feasible.

All chain arithmetic runs on log-moduli: the thresholds shrink like
18^(-2/(1-4 delta)) as delta -> 1/4, far beyond floating-point range,
so raw moduli are never formed when a logarithm will do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .disk_geometry import BidiskPoint, _pseudo_dist_raw, as_disk_point, mobius, pseudo_dist
from .errors import (
    ChainInconsistency,
    CounterexampleFound,
    DegenerateTarget,
    OutsideRegime,
    SectorViolation,
)
from .lempert_search import CandidateData, feasible
from .neil_disk import PoleConfig, in_sector
from .pick_interpolation import compute_w_values

_LOG2 = math.log(2.0)
_LOG3 = math.log(3.0)
_LOG6 = math.log(6.0)
_LOG8 = math.log(8.0)
_LOG9 = math.log(9.0)
_LOG18 = math.log(18.0)


@dataclass(frozen=True)
class Thresholds:
    """Smallness radii certified by the chain, stored as natural logs.

    Derivations (r = |z2|, all logs natural):

    * ``log_r1`` closes the step |phi_{zeta2}(zeta0)| < |w3|/2: the
      chain provides |phi_{zeta2}(zeta0)| <= 2 r^(1-delta) and
      |w3| >= r^(1/2+delta)/2, so it suffices that
      2 r^(1-delta) <= r^(1/2+delta)/4, i.e. r^(1/2-2delta) <= 1/8,
      i.e. r <= 8^(-2/(1-4delta)).
    * ``log_r2`` closes |phi_{zeta2}(zeta0)| <= |zeta0|/2 from the same
      two ingredients (|zeta0| >= r^(1/2+delta)/2 by the symmetric
      estimate); the arithmetic is identical, so r2 = r1.  The same
      radius also closes |zeta1| >= |zeta0|/4 later in the chain.
    * ``log_r0`` is where the terminal bounds collide:
      9 r^(1-delta) < r^(1/2+delta)/2 iff r^(1/2-2delta) < 1/18 iff
      r < 18^(-2/(1-4delta)); combined with r1 and r2 (both larger),
      r0 = 18^(-2/(1-4delta)).
    * ``log_eps0`` is the perturbation cap at the given |z2|:
      |eps| < |z2|^(3/2)/8 makes |phi_{zeta1}(zeta2)| < |z2|^(1-delta),
      intersected with the identity-family s-condition
      |s| = |eps| < |z2|^(1-delta).

    The ``r1``/``r2``/``r0``/``eps0`` properties exponentiate on demand
    and may underflow to 0.0 for delta near 1/4; comparisons must use
    the log fields.
    """

    delta: float
    z2_mod: float
    log_r1: float
    log_r2: float
    log_r0: float
    log_eps0: float

    @property
    def r1(self) -> float:
        return math.exp(self.log_r1)

    @property
    def r2(self) -> float:
        return math.exp(self.log_r2)

    @property
    def r0(self) -> float:
        return math.exp(self.log_r0)

    @property
    def eps0(self) -> float:
        return math.exp(self.log_eps0)

    def certifies(self) -> dict[str, str]:
        return {
            "r1": "|z2| <= r1 makes |phi_{zeta2}(zeta0)| < |w3|/2",
            "r2": "|z2| <= r2 makes |phi_{zeta2}(zeta0)| <= |zeta0|/2 "
                  "and |zeta1| >= |zeta0|/4",
            "r0": "|z2| <= r0 makes 9|z2|^(1-delta) < |z2|^(1/2+delta)/2 "
                  "(the terminal w2 bounds collide)",
            "eps0": "|eps| < eps0 makes |phi_{zeta1}(zeta2)| < |z2|^(1-delta) "
                    "and |s| < |z2|^(1-delta) for s = eps",
        }


def compute_thresholds(delta: float, z2_mod: float) -> Thresholds:
    """Certified regime radii for a given delta and target scale.

    Raises :class:`OutsideRegime` unless 0 < delta < 1/4 (at delta =
    1/4 the exponent 2/(1-4 delta) blows up and no radius works).
    """
    if not 0.0 < delta < 0.25:
        raise OutsideRegime(f"delta must lie in (0, 1/4), got {delta}")
    if not z2_mod > 0.0:
        raise DegenerateTarget("z2 = 0 has no chain regime")
    expo = 2.0 / (1.0 - 4.0 * delta)
    log_z2 = math.log(z2_mod)
    return Thresholds(
        delta=delta,
        z2_mod=z2_mod,
        log_r1=-expo * _LOG8,
        log_r2=-expo * _LOG8,
        log_r0=-expo * _LOG18,
        log_eps0=min(1.5 * log_z2 - _LOG8, (1.0 - delta) * log_z2),
    )


@dataclass(frozen=True)
class ChainParams:
    """Validated parameter block for the refutation chain.

    ``regime_violations`` is empty when the parameters sit inside the
    certified regime; with ``enforce_regime=False`` the violations are
    recorded instead of raised, which lets the sampling machinery run
    empirically at scales where the chain constants are not yet binding.
    """

    delta: float
    z: BidiskPoint
    cfg: PoleConfig
    thresholds: Thresholds
    regime_violations: tuple[str, ...] = ()

    @classmethod
    def create(
        cls,
        delta: float,
        z: BidiskPoint,
        cfg: PoleConfig,
        enforce_regime: bool = True,
    ) -> "ChainParams":
        z = (complex(z[0]), complex(z[1]))
        as_disk_point(z[0], "z1")
        as_disk_point(z[1], "z2")
        if z[1] == 0:
            raise DegenerateTarget("z2 = 0")
        if not in_sector(z):
            raise SectorViolation(
                f"target {z} violates |z2|^(3/2)/2 <= |z1| <= |z2|^(3/2)"
            )
        if cfg.is_single_pole or cfg.epsilon == 0 or cfg.s == 0:
            raise DegenerateTarget(
                "the chain requires a genuine three-pole configuration "
                "(epsilon != 0 and s != 0)"
            )
        th = compute_thresholds(delta, abs(z[1]))
        log_z2 = math.log(abs(z[1]))
        violations = []
        if not log_z2 <= th.log_r0:
            violations.append(
                f"|z2| = {abs(z[1])} exceeds r0 = exp({th.log_r0})"
            )
        if not math.log(abs(cfg.epsilon)) < th.log_eps0:
            violations.append(
                f"|eps| = {abs(cfg.epsilon)} reaches eps0 = exp({th.log_eps0})"
            )
        if not math.log(abs(cfg.s)) < (1.0 - delta) * log_z2:
            violations.append(
                f"|s| = {abs(cfg.s)} reaches |z2|^(1-delta)"
            )
        if violations and enforce_regime:
            raise OutsideRegime("; ".join(violations))
        return cls(
            delta=delta, z=z, cfg=cfg, thresholds=th,
            regime_violations=tuple(violations),
        )

    @property
    def objective_threshold(self) -> float:
        """(2 - delta) log|z2|, the hypothesis level the chain refutes."""
        return (2.0 - self.delta) * math.log(abs(self.z[1]))


@dataclass(frozen=True)
class ChainStep:
    """One link: the claim  lhs (<|<=) rhs  evaluated on actual data."""

    name: str
    lhs: float
    rhs: float
    strict: bool
    holds: bool

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


@dataclass(frozen=True)
class ChainTrace:
    """Ordered evaluation of every chain link on one candidate.

    ``window_empty`` states whether the terminal w2 bounds are
    incompatible at these parameters (always true inside the certified
    regime); the verdict summarizes which hypothesis the data fails.
    """

    steps: tuple[ChainStep, ...]
    window_empty: bool

    def step(self, name: str) -> ChainStep:
        for s in self.steps:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def first_failure(self) -> str | None:
        for s in self.steps:
            if not s.holds:
                return s.name
        return None

    @property
    def feasibility_verdict(self) -> bool:
        """Exactly the strict Pick feasibility of the candidate."""
        return all(self.step(n).holds for n in ("w_mod", "ineqex1", "ineqex2"))

    @property
    def verdict(self) -> str:
        if not self.step("hyplemp").holds:
            return "hypothesis_not_satisfied"
        if not self.feasibility_verdict:
            return "infeasible"
        if not (self.step("w2bel").holds and self.step("final").holds):
            return "contradiction"
        return "no_refutation"


def _log_abs(x: complex) -> float:
    m = abs(x)
    return math.log(m) if m > 0.0 else -math.inf


def _log_dist(a: complex, b: complex) -> float:
    d = _pseudo_dist_raw(a, b)
    if d == 0.0:
        return -math.inf
    if math.isinf(d):
        return math.inf
    return math.log(d)


def check_chain(p: ChainParams, c: CandidateData) -> ChainTrace:
    """Evaluate both sides of every chain link on a candidate.

    Raises :class:`ChainInconsistency` if the candidate passes the
    hypothesis and feasibility links, the terminal windows are
    incompatible, and yet no derived link fails: the chain proves that
    situation impossible, so reaching it means the implementation is
    wrong.
    """
    if c.zeta1 is None or c.zeta2 is None:
        raise DegenerateTarget("the chain applies to three-pole candidates")
    delta = p.delta
    lz1 = _log_abs(p.z[0])
    lz2 = _log_abs(p.z[1])
    leps = _log_abs(p.cfg.epsilon)
    ls = _log_abs(p.cfg.s)

    l0 = _log_abs(c.zeta0)
    l2 = _log_abs(c.zeta2)
    d01 = _log_dist(c.zeta0, c.zeta1)
    d02 = _log_dist(c.zeta0, c.zeta2)
    d12 = _log_dist(c.zeta1, c.zeta2)
    w1, w2, w3, w4 = compute_w_values(p.z, p.cfg, c.zeta0, c.zeta1, c.zeta2)
    lw = {1: _log_abs(w1), 2: _log_abs(w2), 3: _log_abs(w3), 4: _log_abs(w4)}
    ldw12 = _log_dist(w1, w2)
    ldw34 = _log_dist(w3, w4)

    objective_val = l0 + d01 + d02
    steps: list[ChainStep] = []

    def add(name: str, lhs: float, rhs: float, strict: bool):
        holds = (lhs < rhs) if strict else (lhs <= rhs)
        steps.append(ChainStep(name=name, lhs=lhs, rhs=rhs, strict=strict, holds=holds))

    # Hypotheses: the objective sits below the threshold and the data is
    # strictly feasible.
    add("hyplemp", objective_val, (2.0 - delta) * lz2, strict=True)
    add("w_mod", max(lw.values()), 0.0, strict=True)
    add("ineqex1", ldw12, d01, strict=True)
    add("ineqex2", ldw34, d02, strict=True)

    # Derived links, in derivation order.  Each rhs is the bound the
    # chain proves from the hypotheses; ``holds`` records whether the
    # measured data obeys it.
    add("startrem", -lw[2] - lw[3], l0 - (0.5 + delta) * lz2 + _LOG2, strict=False)
    add("symest", -lw[2] - lw[3] - l0, -(0.5 + delta) * lz2 + _LOG2, strict=False)
    add("w3est", (0.5 + delta) * lz2 - _LOG2, lw[3], strict=False)
    add("phi02est", d02, (1.0 - delta) * lz2 + _LOG2, strict=False)
    add("w4est", lw[3] - _LOG2, lw[4], strict=False)
    # 1/2 <= |zeta2|/|zeta0| <= 3/2, encoded as a single violation <= 0.
    ratio = l2 - l0
    ze2_violation = max(math.log(0.5) - ratio, ratio - math.log(1.5))
    add("ze2est", ze2_violation, 0.0, strict=False)
    add("phi12est", d12, _LOG8 + leps - (0.5 + delta) * lz2, strict=False)
    add("phi10est", d01, _LOG3 + (1.0 - delta) * lz2, strict=True)
    add("w2bel", (0.5 + delta) * lz2 - _LOG2, lw[2], strict=False)
    # Terminal ceiling |w2| <= 6|s| + 3|z2|^(1-delta); inside the regime
    # the right side is below 9|z2|^(1-delta).
    ceiling = float(np.logaddexp(_LOG6 + ls, _LOG3 + (1.0 - delta) * lz2))
    add("final", lw[2], ceiling, strict=False)

    floor = (0.5 + delta) * lz2 - _LOG2
    regime_ceiling = _LOG9 + (1.0 - delta) * lz2
    window_empty = floor > regime_ceiling

    trace = ChainTrace(steps=tuple(steps), window_empty=window_empty)
    if (
        window_empty
        and trace.step("hyplemp").holds
        and trace.feasibility_verdict
        and all(s.holds for s in trace.steps)
    ):
        raise ChainInconsistency(
            "candidate satisfies hypothesis, feasibility, and every derived "
            "link although the terminal bounds are incompatible"
        )
    return trace


@dataclass(frozen=True)
class DisproofReport:
    """Outcome of sampling below-threshold candidates."""

    n_samples: int
    seed: int
    objective_threshold: float
    histogram: dict[str, int]
    regime_violations: tuple[str, ...]
    example_nodes: tuple[complex, complex, complex]
    example_first_failure: str


def _sample_candidate(
    p: ChainParams, rng: np.random.Generator
) -> CandidateData:
    """Draw one candidate with objective strictly below the threshold.

    Log-coordinate budget: split T - slack into three negative parts
    (log|zeta0|, log d(zeta0,zeta1), log d(zeta0,zeta2)), then lift
    with uniform phases; phi_{zeta0} transports a point at modulus
    exp(t) to a node at exactly that pseudohyperbolic distance.

    The split weights (1 + u_i)/sum(1 + u_j) stay inside [1/5, 1/2], so
    the pairwise spread of the three log scales never exceeds 0.3 of
    the budget.  That keeps every lifted node representable: a distance
    scale more than 52 bits below |zeta0| would round the node onto
    zeta0 itself.
    """
    T = p.objective_threshold
    slack = 1e-6 + rng.uniform(0.0, 3.0)
    total = T - slack
    u = rng.uniform(0.0, 1.0, 3)
    weights = (1.0 + u) / float(np.sum(1.0 + u))
    t0, t1, t2 = (total * float(w) for w in weights)

    theta = rng.uniform(0.0, 2.0 * math.pi, 3)
    zeta0 = math.exp(t0) * complex(math.cos(theta[0]), math.sin(theta[0]))
    zeta1 = mobius(zeta0, math.exp(t1) * complex(math.cos(theta[1]), math.sin(theta[1])))
    zeta2 = mobius(zeta0, math.exp(t2) * complex(math.cos(theta[2]), math.sin(theta[2])))
    if zeta1 == 0 or zeta2 == 0 or zeta1 == zeta2 or pseudo_dist(zeta1, zeta2) == 0.0:
        # Measure-zero collisions: nudge the last phase deterministically.
        theta2 = theta[2] + 1e-3
        zeta2 = mobius(zeta0, math.exp(t2) * complex(math.cos(theta2), math.sin(theta2)))
    cand = CandidateData.from_nodes(p.z, p.cfg, zeta0, zeta1, zeta2)
    if not cand.objective < T:
        raise ChainInconsistency(
            f"sampled candidate objective {cand.objective} is not below {T}"
        )
    return cand


def disprove_below_threshold(
    p: ChainParams,
    n_samples: int = 1000,
    seed: int = 0,
    enforce_regime: bool = True,
) -> DisproofReport:
    """Sample below-threshold candidates; every one must be infeasible.

    Each sample's chain trace must agree with the direct feasibility
    predicate (:class:`ChainInconsistency` otherwise);
    :class:`CounterexampleFound` aborts loudly on any feasible sample,
    because inside the regime that falsifies the implementation.  With
    ``enforce_regime=False`` the same sampling runs empirically outside
    the certified regime.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if p.regime_violations and enforce_regime:
        raise OutsideRegime("; ".join(p.regime_violations))
    # The sampler bounds the log-scale spread by 0.30 of the budget; past
    # the 52-bit cliff distinct nodes stop being representable as doubles.
    budget = abs(p.objective_threshold) + 3.0 + 1e-6
    if 0.30 * budget > 34.0:
        raise OutsideRegime(
            f"objective threshold {p.objective_threshold} is too deep to "
            "sample in double precision (node scale spread would exceed "
            "the 52-bit representability cliff)"
        )

    histogram: dict[str, int] = {}
    example_nodes = None
    example_failure = None
    for i in range(n_samples):
        rng = np.random.default_rng([seed, i])
        cand = _sample_candidate(p, rng)
        trace = check_chain(p, cand)
        direct = feasible(cand, p.z, p.cfg)
        if trace.feasibility_verdict != direct.ok:
            raise ChainInconsistency(
                f"sample {i}: chain feasibility {trace.feasibility_verdict} "
                f"!= predicate {direct.ok}"
            )
        if direct.ok:
            raise CounterexampleFound(
                f"sample {i} is feasible below the threshold: nodes "
                f"({cand.zeta0}, {cand.zeta1}, {cand.zeta2}), "
                f"objective {cand.objective} < {p.objective_threshold}"
            )
        name = trace.first_failure or "none"
        histogram[name] = histogram.get(name, 0) + 1
        if example_nodes is None:
            example_nodes = (cand.zeta0, cand.zeta1, cand.zeta2)
            example_failure = name
    return DisproofReport(
        n_samples=n_samples,
        seed=seed,
        objective_threshold=p.objective_threshold,
        histogram=dict(sorted(histogram.items())),
        regime_violations=p.regime_violations,
        example_nodes=example_nodes,
        example_first_failure=example_failure,
    )
