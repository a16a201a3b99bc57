"""Finite-dimensional reduction and search for the Lempert-side infimum.

Normalizing an analytic disk through the three poles so that the (0,0)
preimage sits at the disk origin, the quantity to minimize over node
triples (zeta0, zeta1, zeta2) is

    objective = log|zeta0| + log d(zeta0, zeta1) + log d(zeta0, zeta2),

subject to the two strict Pick conditions on the induced interpolation
targets w1..w4 (and |w_i| < 1).  The search is a seeded multistart over
the six real node coordinates with a self-contained Nelder-Mead
refinement; infeasible points are rejected (or penalized) but the
returned minimizer is always verified feasible and re-assembled into an
analytic disk whose interpolation residuals are checked.

Determinism: every start k draws from ``default_rng([seed, k])`` and the
aggregation uses a lexicographic tie-break on the node coordinates, so
results do not depend on evaluation order or worker count
(``PLURIGAP_THREADS`` only caps parallelism).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .disk_geometry import BidiskPoint, DiskPoint, _pseudo_dist_raw, as_disk_point, mobius, pseudo_dist
from .errors import DegenerateNodes, DegenerateTarget, NoFeasiblePoint, PreimageOutsideDisk
from .neil_disk import PoleConfig, build_neil
from .pick_interpolation import FactorizedDisk, assemble_disk, compute_w_values

# Node pairs closer than this (pseudohyperbolic) are rejected during the
# search; this is a search-space guard at experiment scale, not part of
# the mathematical feasibility predicate (which rejects collisions
# through the strict Pick inequalities themselves).
NODE_DIST_FLOOR = 1e-8

# Residual tolerance when re-assembling the winning disk.
_RESIDUAL_TOL = 1e-9


class FeasibilityResult(NamedTuple):
    """Outcome of the feasibility predicate.

    ``margins`` are the two strict-inequality gaps
    (d(zeta1, zeta0) - d(w1, w2), d(zeta2, zeta0) - d(w3, w4)); in
    single-pole mode they are (1 - |z1/zeta0|, 1 - |z2/zeta0|).
    ``w_violations`` lists 1-based indices of targets with |w_i| >= 1.
    """

    ok: bool
    margins: tuple[float, float]
    w_violations: tuple[int, ...]


@dataclass(frozen=True)
class CandidateData:
    """A node triple with its induced targets and objective value.

    ``zeta1``/``zeta2``/``w`` are None in single-pole mode, where only
    the target preimage ``zeta0`` exists.
    """

    zeta0: DiskPoint
    zeta1: DiskPoint | None
    zeta2: DiskPoint | None
    w: tuple[complex, complex, complex, complex] | None
    objective: float

    @classmethod
    def from_nodes(
        cls,
        z: BidiskPoint,
        cfg: PoleConfig,
        zeta0: complex,
        zeta1: complex | None = None,
        zeta2: complex | None = None,
    ) -> "CandidateData":
        zeta0 = as_disk_point(zeta0, "zeta0")
        if cfg.is_single_pole:
            if zeta0 == 0:
                raise DegenerateNodes("zeta0 = 0 is the pole itself")
            return cls(zeta0=zeta0, zeta1=None, zeta2=None, w=None,
                       objective=_objective_single(zeta0))
        if zeta1 is None or zeta2 is None:
            raise ValueError("three-pole candidates need all three nodes")
        zeta1 = as_disk_point(zeta1, "zeta1")
        zeta2 = as_disk_point(zeta2, "zeta2")
        w = compute_w_values(z, cfg, zeta0, zeta1, zeta2)
        return cls(zeta0=zeta0, zeta1=zeta1, zeta2=zeta2, w=w,
                   objective=_objective_three(zeta0, zeta1, zeta2))


def _objective_single(zeta0: complex) -> float:
    return math.log(abs(zeta0))


def _objective_three(zeta0: complex, zeta1: complex, zeta2: complex) -> float:
    d1 = pseudo_dist(zeta0, zeta1)
    d2 = pseudo_dist(zeta0, zeta2)
    if d1 == 0.0 or d2 == 0.0 or zeta0 == 0:
        # Coincident nodes: -inf sentinel.  Such candidates are never
        # feasible and never serialized; the sentinel only orders them
        # below everything during rejection.
        return -math.inf
    return math.fsum((math.log(abs(zeta0)), math.log(d1), math.log(d2)))


def objective(c: CandidateData) -> float:
    """Recompute the search objective from the stored nodes."""
    if c.zeta1 is None:
        return _objective_single(c.zeta0)
    return _objective_three(c.zeta0, c.zeta1, c.zeta2)


def feasible(c: CandidateData, z: BidiskPoint, cfg: PoleConfig) -> FeasibilityResult:
    """Strict feasibility of a candidate triple.

    Three-pole mode requires |w_i| < 1 for all four targets and the two
    strict Pick conditions; the margins are reported even when a modulus
    check fails (diagnostics for the chain).  Raises
    :class:`DegenerateNodes` only when a w-denominator underflows.
    """
    if cfg.is_single_pole:
        m = abs(c.zeta0)
        m1 = 1.0 - abs(complex(z[0])) / m
        m2 = 1.0 - abs(complex(z[1])) / m
        return FeasibilityResult(ok=(m1 > 0.0 and m2 > 0.0), margins=(m1, m2), w_violations=())

    w1, w2, w3, w4 = compute_w_values(z, cfg, c.zeta0, c.zeta1, c.zeta2)
    violations = tuple(i + 1 for i, w in enumerate((w1, w2, w3, w4)) if not abs(w) < 1.0)
    # Raw formula: targets may sit outside the disk and must still yield
    # diagnostic margins.
    m1 = pseudo_dist(c.zeta1, c.zeta0) - _pseudo_dist_raw(w1, w2)
    m2 = pseudo_dist(c.zeta2, c.zeta0) - _pseudo_dist_raw(w3, w4)
    ok = not violations and m1 > 0.0 and m2 > 0.0
    return FeasibilityResult(ok=ok, margins=(m1, m2), w_violations=violations)


@dataclass(frozen=True)
class SearchConfig:
    """Multistart / Nelder-Mead knobs.

    ``feasibility_mode`` is "reject" (infeasible evaluates to +inf) or
    "penalty" (objective plus ``penalty_weight`` times the constraint
    violation; used for exploration, the winner is still required to be
    feasible).
    """

    n_starts: int = 64
    max_iters: int = 200
    seed: int = 0
    reflect: float = 1.0
    expand: float = 2.0
    contract: float = 0.5
    shrink: float = 0.5
    feasibility_mode: str = "reject"
    penalty_weight: float = 100.0

    def __post_init__(self):
        if self.n_starts < 1:
            raise ValueError("n_starts must be >= 1")
        if self.feasibility_mode not in ("reject", "penalty"):
            raise ValueError(f"unknown feasibility_mode: {self.feasibility_mode!r}")


@dataclass(frozen=True)
class SearchOutcome:
    """Winner of a search plus bookkeeping for reports."""

    best: CandidateData
    disk: FactorizedDisk | None
    residual: float
    n_starts: int
    n_feasible_starts: int
    margins: tuple[float, float]


def _thread_count() -> int:
    raw = os.environ.get("PLURIGAP_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def _map_starts(fn: Callable[[int], object], n: int) -> list:
    workers = _thread_count()
    if workers <= 1:
        return [fn(k) for k in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n)))


def _nelder_mead(
    f: Callable[[np.ndarray], float],
    x0: np.ndarray,
    step: np.ndarray,
    sc: SearchConfig,
    xatol: float = 1e-10,
    fatol: float = 1e-12,
) -> tuple[np.ndarray, float]:
    """Minimal Nelder-Mead on R^n with configurable coefficients.

    Handles +inf objective values (rejection walls); bails out
    immediately when the whole initial simplex is infeasible.
    """
    n = x0.size
    pts = [np.array(x0, dtype=float)]
    for i in range(n):
        q = np.array(x0, dtype=float)
        q[i] += step[i]
        pts.append(q)
    fv = [f(p) for p in pts]

    for _ in range(sc.max_iters):
        order = sorted(range(n + 1), key=lambda i: fv[i])
        pts = [pts[i] for i in order]
        fv = [fv[i] for i in order]
        if math.isinf(fv[0]):
            break
        if (fv[-1] - fv[0] < fatol) and max(
            float(np.max(np.abs(p - pts[0]))) for p in pts[1:]
        ) < xatol:
            break

        centroid = np.mean(pts[:-1], axis=0)
        xr = centroid + sc.reflect * (centroid - pts[-1])
        fr = f(xr)
        if fr < fv[0]:
            xe = centroid + sc.expand * (xr - centroid)
            fe = f(xe)
            if fe < fr:
                pts[-1], fv[-1] = xe, fe
            else:
                pts[-1], fv[-1] = xr, fr
        elif fr < fv[-2]:
            pts[-1], fv[-1] = xr, fr
        else:
            if fr < fv[-1]:
                xc = centroid + sc.contract * (xr - centroid)
            else:
                xc = centroid - sc.contract * (centroid - pts[-1])
            fc = f(xc)
            if fc < min(fr, fv[-1]):
                pts[-1], fv[-1] = xc, fc
            else:
                for i in range(1, n + 1):
                    pts[i] = pts[0] + sc.shrink * (pts[i] - pts[0])
                    fv[i] = f(pts[i])

    best = min(range(n + 1), key=lambda i: fv[i])
    return pts[best], fv[best]


def _nodes_from_vec(x: np.ndarray) -> tuple[complex, complex, complex]:
    return (
        complex(x[0], x[1]),
        complex(x[2], x[3]),
        complex(x[4], x[5]),
    )


def _make_evaluator(z: BidiskPoint, cfg: PoleConfig, sc: SearchConfig, best_cell: list):
    """Wrap objective + feasibility for the simplex method.

    ``best_cell`` accumulates the best *feasible* point seen, so penalty
    mode can wander while the final answer stays feasible.
    """
    single = cfg.is_single_pole
    z1a, z2a = abs(complex(z[0])), abs(complex(z[1]))

    def evaluate(x: np.ndarray) -> float:
        if single:
            zeta0 = complex(x[0], x[1])
            r = abs(zeta0)
            if not r < 1.0 or r < NODE_DIST_FLOOR:
                return math.inf
            obj = _objective_single(zeta0)
            ok = z1a < r and z2a < r
            viol = max(0.0, z1a / r - 1.0) + max(0.0, z2a / r - 1.0)
        else:
            zeta0, zeta1, zeta2 = _nodes_from_vec(x)
            if not (abs(zeta0) < 1.0 and abs(zeta1) < 1.0 and abs(zeta2) < 1.0):
                return math.inf
            if (
                min(abs(zeta0), abs(zeta1), abs(zeta2)) < NODE_DIST_FLOOR
                or pseudo_dist(zeta0, zeta1) < NODE_DIST_FLOOR
                or pseudo_dist(zeta0, zeta2) < NODE_DIST_FLOOR
                or pseudo_dist(zeta1, zeta2) < NODE_DIST_FLOOR
            ):
                return math.inf
            obj = _objective_three(zeta0, zeta1, zeta2)
            try:
                w = compute_w_values(z, cfg, zeta0, zeta1, zeta2)
            except DegenerateNodes:
                return math.inf
            viol = math.fsum(max(0.0, abs(wi) - 1.0) for wi in w)
            m1 = pseudo_dist(zeta1, zeta0) - _pseudo_dist_raw(w[0], w[1])
            m2 = pseudo_dist(zeta2, zeta0) - _pseudo_dist_raw(w[2], w[3])
            viol += max(0.0, -m1) + max(0.0, -m2)
            ok = viol == 0.0 and m1 > 0.0 and m2 > 0.0 and all(abs(wi) < 1.0 for wi in w)

        if ok and (best_cell[0] is None or (obj, tuple(x)) < (best_cell[0], best_cell[1])):
            best_cell[0] = obj
            best_cell[1] = tuple(float(v) for v in x)
        if sc.feasibility_mode == "reject":
            return obj if ok else math.inf
        return obj + sc.penalty_weight * viol

    return evaluate


def _deterministic_starts(z: BidiskPoint, cfg: PoleConfig) -> list[np.ndarray]:
    """Seed candidates derived from the cuspidal-disk construction.

    The polynomial disk maps only the (1-eta)-rescaled disk into the
    bidisk, so the valid competitor is zeta -> Psi((1-eta) zeta); its
    preimage data, normalized so the (0,0) preimage moves to the origin
    (b = a/(1-eta), a = s/(2 lambda)), gives the witness nodes

        zeta0 = phi_b(zeta_z/(1-eta)),  zeta1 = phi_b(-a/(1-eta)),
        zeta2 = phi_b(+-mu/(1-eta)).

    Both mu branches are seeded, plus an unnormalized symmetric
    configuration zeta1 = -zeta2 (exploration only; it need not be
    feasible).
    """
    if cfg.is_single_pole:
        return []
    try:
        d = build_neil(z, cfg)
    except (DegenerateTarget, PreimageOutsideDisk):
        return []
    r = 1.0 - d.eta
    a = cfg.s / (2.0 * d.lam)
    b = a / r
    out = []
    if 0 < abs(b) < 1.0 and abs(d.zeta_z / r) < 1.0 and abs(d.mu / r) < 1.0:
        zeta0 = mobius(b, d.zeta_z / r)
        zeta1 = mobius(b, -a / r)
        for branch in (d.mu, -d.mu):
            zeta2 = mobius(b, branch / r)
            out.append(np.array(
                [zeta0.real, zeta0.imag, zeta1.real, zeta1.imag, zeta2.real, zeta2.imag]
            ))
    if 0 < abs(d.mu / r) and abs(d.mu / r) < 1.0 and abs(d.zeta_z / r) < 1.0:
        zeta0, m = d.zeta_z / r, d.mu / r
        out.append(np.array(
            [zeta0.real, zeta0.imag, -m.real, -m.imag, m.real, m.imag]
        ))
    return out


def _random_start(rng: np.random.Generator, k: int, lo_log: float, dim: int) -> np.ndarray:
    """Stratified log-radius start: digit j of k (base 8) selects the
    log-radius stratum of node j, the position inside the stratum and
    all phases are drawn from the per-start generator."""
    n_bins = 8
    coords = []
    n_nodes = dim // 2
    for j in range(n_nodes):
        b = (k // (n_bins**j)) % n_bins
        t = (b + rng.uniform()) / n_bins
        logr = lo_log * (1.0 - t)  # t=0 -> radius lower edge, t->1 -> radius 1
        r = math.exp(logr)
        th = rng.uniform(0.0, 2.0 * math.pi)
        coords.extend((r * math.cos(th), r * math.sin(th)))
    return np.array(coords)


def search(z: BidiskPoint, cfg: PoleConfig, sc: SearchConfig | None = None) -> SearchOutcome:
    """Seeded multistart minimization of the disk objective.

    Returns the best feasible candidate together with the assembled
    interpolating disk (None in single-pole mode) and its interpolation
    residual.  Raises :class:`NoFeasiblePoint` when every start fails.
    """
    if sc is None:
        sc = SearchConfig()
    z = (complex(z[0]), complex(z[1]))
    as_disk_point(z[0], "z1")
    as_disk_point(z[1], "z2")

    dim = 2 if cfg.is_single_pole else 6
    max_mod = max(abs(z[0]), abs(z[1]))
    if max_mod == 0.0:
        raise DegenerateTarget("target point equals the origin pole")
    lo_log = math.log(max_mod)

    det = _deterministic_starts(z, cfg)
    if cfg.is_single_pole:
        # Geometric midpoint of the admissible radial range.
        det = [np.array([math.exp(0.5 * lo_log), 0.0])]

    def run_start(k: int):
        best_cell = [None, None]
        f = _make_evaluator(z, cfg, sc, best_cell)
        if k < len(det):
            x0 = det[k]
            scale = max(float(np.max(np.abs(x0))), 1e-6)
            step = np.full(dim, 0.25 * scale)
        else:
            rng = np.random.default_rng([sc.seed, k])
            x0 = _random_start(rng, k - len(det), lo_log, dim)
            step = np.maximum(0.25 * np.abs(x0), 1e-4)
        _nelder_mead(f, x0, step, sc)
        return best_cell

    cells = _map_starts(run_start, sc.n_starts)
    feas = [(c[0], c[1]) for c in cells if c[0] is not None]
    if not feas:
        raise NoFeasiblePoint(
            f"no feasible candidate in {sc.n_starts} starts (seed {sc.seed})"
        )
    best_obj, best_x = min(feas)

    if cfg.is_single_pole:
        cand = CandidateData.from_nodes(z, cfg, complex(best_x[0], best_x[1]))
        res = feasible(cand, z, cfg)
        return SearchOutcome(
            best=cand, disk=None, residual=0.0, n_starts=sc.n_starts,
            n_feasible_starts=len(feas), margins=res.margins,
        )

    zeta0, zeta1, zeta2 = _nodes_from_vec(np.array(best_x))
    cand = CandidateData.from_nodes(z, cfg, zeta0, zeta1, zeta2)
    res = feasible(cand, z, cfg)
    if not res.ok:
        raise NoFeasiblePoint("winner failed re-verification; search inconsistent")
    disk = FactorizedDisk.from_interpolation_data(z, cfg, zeta0, zeta1, zeta2)
    residual = disk_residual(disk, z, cfg, zeta0)
    if not residual < _RESIDUAL_TOL:
        raise NoFeasiblePoint(
            f"assembled disk residual {residual} exceeds {_RESIDUAL_TOL}"
        )
    return SearchOutcome(
        best=cand, disk=disk, residual=residual, n_starts=sc.n_starts,
        n_feasible_starts=len(feas), margins=res.margins,
    )


def disk_residual(
    disk: FactorizedDisk, z: BidiskPoint, cfg: PoleConfig, zeta0: complex
) -> float:
    """Max absolute interpolation error of the assembled disk over the
    four conditions phi(0) = (0,0), phi(zeta1) = (rho,0),
    phi(zeta2) = (0,eps), phi(zeta0) = z."""
    checks = [
        (0j, (0j, 0j)),
        (disk.zeta1, (cfg.rho, 0j)),
        (disk.zeta2, (0j, cfg.epsilon)),
        (zeta0, (complex(z[0]), complex(z[1]))),
    ]
    worst = 0.0
    for zeta, want in checks:
        got = assemble_disk(disk, zeta)
        worst = max(worst, abs(got[0] - want[0]), abs(got[1] - want[1]))
    return worst
