"""Command-line front end.

Runs the disk construction checks, the bound computations, the
multistart search, the refutation chain, and the ball transfer, and
emits machine-readable reports (JSON schema "plurigap/1", or flat CSV
rows for sweeps).  Reports are deterministic for a fixed (config, seed)
pair: keys are sorted, no timestamps are recorded, and every run embeds
its fully resolved configuration so a report can be re-verified
offline with the ``verify`` subcommand.

Exit codes: 0 success, 1 a declared check failed, 2 degenerate or
out-of-regime input, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .ball_transfer import gap_verdict, green_upper_in_ball, lempert_lower_in_ball
from .certificate import ChainParams, check_chain, disprove_below_threshold
from .errors import (
    ChainInconsistency,
    CoincidentPoint,
    ContainmentFailed,
    CounterexampleFound,
    DegenerateNodes,
    DegenerateTarget,
    InfeasibleProblem,
    InvalidDiskPoint,
    NoFeasiblePoint,
    NotInBall,
    OutsideRegime,
    PlurigapError,
    PoleHit,
    PreimageOutsideDisk,
    SectorViolation,
)
from .green_bounds import BoundReport, green_lower_oracle, poletsky_disk_bound
from .lempert_search import CandidateData, SearchConfig, disk_residual, feasible, search
from .neil_disk import NeilDisk, PoleConfig, build_neil, containment_check, green_upper_from_neil
from .pick_interpolation import FactorizedDisk

SCHEMA = "plurigap/1"

_CSV_COLUMNS = (
    "z1_re", "z1_im", "z2_re", "z2_im", "epsilon", "s", "delta", "eta",
    "green_upper", "green_lower", "lempert_best", "gap", "strict",
)

# Exceptions that signal degenerate or out-of-regime input (exit 2)
# versus a failed check on well-posed input (exit 1).
_DEGENERATE = (
    InvalidDiskPoint, DegenerateTarget, DegenerateNodes, PreimageOutsideDisk,
    ContainmentFailed, OutsideRegime, SectorViolation, NotInBall, PoleHit,
    CoincidentPoint,
)
_CHECK_FAILED = (NoFeasiblePoint, CounterexampleFound, ChainInconsistency, InfeasibleProblem)


class UsageError(PlurigapError):
    """Bad flags, unreadable config, or malformed report file."""


def _parse_complex(v) -> complex:
    """Accept [re, im] pairs, bare numbers, or Python complex literals."""
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise UsageError(f"complex values are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", ""))
        except ValueError as e:
            raise UsageError(f"cannot parse complex value {v!r}") from e
    raise UsageError(f"cannot parse complex value {v!r}")


def _flag_complex(text: str) -> complex:
    try:
        return _parse_complex(text)
    except UsageError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


_COMPLEX_FIELDS = frozenset({"z1", "z2", "epsilon", "s_value", "zeta0", "zeta1", "zeta2"})
_INT_FIELDS = frozenset({"n_starts", "max_iters", "seed", "samples"})
_FLOAT_FIELDS = frozenset({"delta", "eta"})
_BOOL_FIELDS = frozenset({"single_pole", "expect_strict", "allow_out_of_regime"})


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run parameters.

    Resolution order: built-in defaults, then ``--config`` file entries,
    then command-line flags.  The resolved block is embedded verbatim in
    every report.
    """

    z1: complex = 1e-3 + 0j
    z2: complex = 1e-2 + 0j
    epsilon: complex = 1e-4 + 0j
    s_mode: str = "identity"
    s_value: complex | None = None
    single_pole: bool = False
    delta: float = 0.2
    eta: float = 0.05
    n_starts: int = 64
    max_iters: int = 200
    seed: int = 0
    samples: int = 1000
    output_path: str | None = None
    format: str = "json"
    sweep: str | None = None
    expect_strict: bool = False
    allow_out_of_regime: bool = False
    zeta0: complex | None = None
    zeta1: complex | None = None
    zeta2: complex | None = None

    @property
    def z(self) -> tuple[complex, complex]:
        return (self.z1, self.z2)

    def pole_config(self) -> PoleConfig:
        if self.single_pole:
            return PoleConfig.single_pole()
        try:
            return PoleConfig.from_epsilon(self.epsilon, self.s_mode, self.s_value)
        except ValueError as e:
            raise UsageError(str(e)) from e

    @classmethod
    def resolve(cls, args: argparse.Namespace) -> "RunConfig":
        base = {f.name: getattr(cls(), f.name) for f in dataclasses.fields(cls)}
        cfg_path = getattr(args, "config", None)
        if cfg_path:
            try:
                raw = json.loads(Path(cfg_path).read_text())
            except (OSError, json.JSONDecodeError) as e:
                raise UsageError(f"cannot read config {cfg_path}: {e}") from e
            if not isinstance(raw, dict):
                raise UsageError("config file must hold a JSON object")
            for key, value in raw.items():
                name = key.replace("-", "_")
                if name == "z":
                    base["z1"] = _parse_complex(value[0])
                    base["z2"] = _parse_complex(value[1])
                elif name in base:
                    base[name] = _coerce_field(name, value)
                else:
                    raise UsageError(f"unknown config key {key!r}")
        for name in base:
            if hasattr(args, name) and getattr(args, name) is not None:
                base[name] = getattr(args, name)
        rc = cls(**base)
        if rc.format not in ("json", "csv"):
            raise UsageError(f"unknown format {rc.format!r}")
        if rc.format == "csv" and args.command != "gap":
            raise UsageError("csv output is only defined for the gap command")
        if rc.samples < 1 or rc.n_starts < 1 or rc.max_iters < 1:
            raise UsageError("samples, n_starts, and max_iters must be >= 1")
        return rc

    def to_jsonable(self) -> dict:
        d = dataclasses.asdict(self)
        # Where the report lands is not part of the experiment identity;
        # keeping it would break byte-identity across re-runs to
        # different files.
        d["output_path"] = None
        return _jsonable(d)


def _coerce_field(name: str, value):
    if value is None:
        return None
    if name in _COMPLEX_FIELDS:
        return _parse_complex(value)
    if name in _INT_FIELDS:
        return int(value)
    if name in _FLOAT_FIELDS:
        return float(value)
    if name in _BOOL_FIELDS:
        if not isinstance(value, bool):
            raise UsageError(f"config key {name!r} must be a boolean")
        return value
    return str(value)


def _jsonable(x):
    """Recursively convert to JSON-encodable form; complex -> [re, im]."""
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if dataclasses.is_dataclass(x):
        return _jsonable(dataclasses.asdict(x))
    return str(x)


def _bound_dict(rep: BoundReport) -> dict:
    return _jsonable({
        "kind": rep.kind,
        "value": rep.value,
        "domain": rep.domain,
        "point": list(rep.point),
        "config": {"mode": rep.config.mode, "epsilon": rep.config.epsilon, "s": rep.config.s},
        "witness": rep.witness,
    })


def _check(name: str, passed: bool, detail: str) -> dict:
    return {"name": name, "passed": bool(passed), "detail": detail}


def _exit_from_checks(checks: list[dict]) -> int:
    return 0 if all(c["passed"] for c in checks) else 1


# ---------------------------------------------------------------------------
# Command implementations.  Each returns (report dict, exit code).
# ---------------------------------------------------------------------------


def _neil_residuals(disk: NeilDisk) -> dict[str, float]:
    cfg = disk.source_cfg
    targets = ((0j, cfg.epsilon), (0j, cfg.epsilon), (0j, 0j), (cfg.rho, 0j))
    names = ("preimage_mu", "preimage_minus_mu", "preimage_a", "preimage_minus_a")
    out = {}
    for name, pre, want in zip(names, disk.preimages, targets):
        got = disk.psi(pre)
        out[name] = max(abs(got[0] - want[0]), abs(got[1] - want[1]))
    got = disk.psi(disk.zeta_z)
    out["point_passage"] = max(abs(got[0] - disk.source_z[0]), abs(got[1] - disk.source_z[1]))
    return out


def cmd_neil_verify(rc: RunConfig) -> tuple[dict, int]:
    cfg = rc.pole_config()
    disk = build_neil(rc.z, cfg, rc.eta)
    residuals = _neil_residuals(disk)
    a = cfg.s / (2.0 * disk.lam)
    # |zeta_z^2 - z2| = |eps - a^2| exactly, so the measured defect must
    # stay below that algebraic budget plus float slack.
    modzeta_defect = abs(abs(disk.zeta_z) ** 2 - abs(rc.z2))
    modzeta_budget = abs(cfg.epsilon) + abs(a) ** 2 + 1e-12
    margin = containment_check(disk)

    checks = [
        _check(f"residual_{k}", v < 1e-10, f"{v} < 1e-10") for k, v in residuals.items()
    ]
    checks.append(_check(
        "modzeta", modzeta_defect <= modzeta_budget,
        f"| |zeta_z|^2 - |z2| | = {modzeta_defect} <= {modzeta_budget}",
    ))
    checks.append(_check("containment", margin > 0.0, f"margin = {margin}"))
    report = {
        "schema": SCHEMA,
        "command": "neil-verify",
        "config": rc.to_jsonable(),
        "result": _jsonable({
            "lam": disk.lam,
            "mu": disk.mu,
            "zeta_z": disk.zeta_z,
            "preimages": disk.preimages,
            "residuals": residuals,
            "modzeta_defect": modzeta_defect,
            "modzeta_budget": modzeta_budget,
            "containment_margin": margin,
        }),
        "checks": checks,
    }
    return report, _exit_from_checks(checks)


def cmd_green_bound(rc: RunConfig) -> tuple[dict, int]:
    cfg = rc.pole_config()
    disk = build_neil(rc.z, cfg, rc.eta)
    margin = containment_check(disk)
    rep = green_upper_from_neil(disk)
    recompute = poletsky_disk_bound(rep.witness["preimages"], rep.witness["eval_point"])
    checks = [
        _check("containment", margin > 0.0, f"margin = {margin}"),
        _check(
            "independent_recompute", abs(recompute - rep.value) < 1e-12,
            f"|{recompute} - {rep.value}| < 1e-12",
        ),
    ]
    report = {
        "schema": SCHEMA,
        "command": "green-bound",
        "config": rc.to_jsonable(),
        "bound": _bound_dict(rep),
        "result": _jsonable({
            "value": rep.value,
            "c1": rep.witness["c1"],
            "containment_margin": margin,
            "independent_recompute": recompute,
        }),
        "checks": checks,
    }
    return report, _exit_from_checks(checks)


def cmd_lempert_search(rc: RunConfig) -> tuple[dict, int]:
    cfg = rc.pole_config()
    sc = SearchConfig(n_starts=rc.n_starts, max_iters=rc.max_iters, seed=rc.seed)
    try:
        out = search(rc.z, cfg, sc)
    except NoFeasiblePoint as e:
        checks = [_check("found_feasible", False, str(e))]
        report = {
            "schema": SCHEMA,
            "command": "lempert-search",
            "config": rc.to_jsonable(),
            "result": {"found": False, "detail": str(e)},
            "checks": checks,
        }
        return report, 1

    best = out.best
    result = {
        "found": True,
        "objective": best.objective,
        "zeta0": best.zeta0,
        "zeta1": best.zeta1,
        "zeta2": best.zeta2,
        "w": best.w,
        "margins": out.margins,
        "residual": out.residual,
        "n_starts": out.n_starts,
        "n_feasible_starts": out.n_feasible_starts,
    }
    checks = [_check("found_feasible", True, f"objective = {best.objective}")]
    if not cfg.is_single_pole:
        checks.append(_check(
            "disk_residual", out.residual < 1e-9, f"{out.residual} < 1e-9"
        ))
    checks.append(_check(
        "margins_positive", all(m > 0.0 for m in out.margins), f"margins = {out.margins}"
    ))
    report = {
        "schema": SCHEMA,
        "command": "lempert-search",
        "config": rc.to_jsonable(),
        "result": _jsonable(result),
        "checks": checks,
    }
    return report, _exit_from_checks(checks)


def _trace_dict(trace) -> dict:
    return _jsonable({
        "steps": [
            {"name": s.name, "lhs": s.lhs, "rhs": s.rhs, "strict": s.strict,
             "holds": s.holds, "margin": s.margin}
            for s in trace.steps
        ],
        "window_empty": trace.window_empty,
        "first_failure": trace.first_failure,
        "verdict": trace.verdict,
    })


def cmd_chain_check(rc: RunConfig) -> tuple[dict, int]:
    cfg = rc.pole_config()
    enforce = not rc.allow_out_of_regime
    params = ChainParams.create(rc.delta, rc.z, cfg, enforce_regime=enforce)

    if rc.zeta0 is not None:
        if rc.zeta1 is None or rc.zeta2 is None:
            raise UsageError("trace mode needs --zeta0, --zeta1, and --zeta2")
        cand = CandidateData.from_nodes(rc.z, cfg, rc.zeta0, rc.zeta1, rc.zeta2)
        trace = check_chain(params, cand)
        refuted = trace.verdict in ("hypothesis_not_satisfied", "infeasible", "contradiction")
        checks = [_check("refuted", refuted, f"verdict = {trace.verdict}")]
        report = {
            "schema": SCHEMA,
            "command": "chain-check",
            "config": rc.to_jsonable(),
            "result": {
                "mode": "trace",
                "objective": _jsonable(cand.objective),
                "objective_threshold": params.objective_threshold,
                "regime_warnings": list(params.regime_violations),
                "trace": _trace_dict(trace),
            },
            "checks": checks,
        }
        return report, _exit_from_checks(checks)

    try:
        dis = disprove_below_threshold(params, rc.samples, rc.seed, enforce_regime=enforce)
    except CounterexampleFound as e:
        checks = [_check("all_infeasible", False, str(e))]
        report = {
            "schema": SCHEMA,
            "command": "chain-check",
            "config": rc.to_jsonable(),
            "result": {
                "mode": "disproof",
                "counterexample": str(e),
                "objective_threshold": params.objective_threshold,
                "regime_warnings": list(params.regime_violations),
            },
            "checks": checks,
        }
        return report, 1
    total = sum(dis.histogram.values())
    checks = [_check(
        "all_infeasible", total == dis.n_samples,
        f"{total}/{dis.n_samples} sampled candidates infeasible",
    )]
    report = {
        "schema": SCHEMA,
        "command": "chain-check",
        "config": rc.to_jsonable(),
        "result": _jsonable({
            "mode": "disproof",
            "n_samples": dis.n_samples,
            "objective_threshold": dis.objective_threshold,
            "histogram": dis.histogram,
            "example_nodes": dis.example_nodes,
            "example_first_failure": dis.example_first_failure,
            "regime_warnings": list(dis.regime_violations),
            "counterexample": None,
        }),
        "checks": checks,
    }
    return report, _exit_from_checks(checks)


def _gap_record(rc: RunConfig) -> dict:
    """One gap experiment row: bounds, search, disproof, ball verdict."""
    cfg = rc.pole_config()
    z = rc.z
    disk = build_neil(z, cfg, rc.eta)
    margin = containment_check(disk)
    green_rep = green_upper_from_neil(disk)
    green_lower = green_lower_oracle(cfg, z)

    sc = SearchConfig(n_starts=rc.n_starts, max_iters=rc.max_iters, seed=rc.seed)
    try:
        out = search(z, cfg, sc)
        search_block = {
            "found": True,
            "objective": out.best.objective,
            "zeta0": out.best.zeta0,
            "zeta1": out.best.zeta1,
            "zeta2": out.best.zeta2,
            "margins": out.margins,
            "residual": out.residual,
            "n_feasible_starts": out.n_feasible_starts,
        }
        lempert_best = out.best.objective
    except NoFeasiblePoint as e:
        search_block = {"found": False, "detail": str(e)}
        lempert_best = None

    params = ChainParams.create(rc.delta, z, cfg, enforce_regime=False)
    threshold = params.objective_threshold
    counterexample = None
    disproof_block = None
    try:
        dis = disprove_below_threshold(params, rc.samples, rc.seed, enforce_regime=False)
        disproof_block = {
            "n_samples": dis.n_samples,
            "histogram": dis.histogram,
            "example_first_failure": dis.example_first_failure,
        }
    except CounterexampleFound as e:
        counterexample = str(e)

    lower_rep = lempert_lower_in_ball(threshold, z, cfg)
    upper_rep = green_upper_in_ball(z, cfg, rc.eta)
    gap = gap_verdict(lower_rep, upper_rep)

    checks = [
        _check("containment", margin > 0.0, f"margin = {margin}"),
        _check(
            "disproof_all_infeasible", counterexample is None,
            counterexample or f"{rc.samples}/{rc.samples} infeasible below {threshold}",
        ),
        _check(
            "search_at_or_above_threshold",
            lempert_best is None or lempert_best >= threshold,
            f"best = {lempert_best}, threshold = {threshold}",
        ),
        _check("ball_gap_strict", gap.strict, f"gap = {gap.gap}"),
    ]
    return _jsonable({
        "z": list(z),
        "epsilon": cfg.epsilon,
        "s": cfg.s,
        "delta": rc.delta,
        "eta": rc.eta,
        "green_upper": green_rep.value,
        "green_lower": green_lower,
        "lempert_best": lempert_best,
        "objective_threshold": threshold,
        "gap": gap.gap,
        "strict": gap.strict,
        "regime_warnings": list(params.regime_violations),
        "green_report": _bound_dict(green_rep),
        "search": search_block,
        "disproof": disproof_block,
        "counterexample": counterexample,
        "ball": {"lower": _bound_dict(lower_rep), "upper": _bound_dict(upper_rep)},
        "checks": checks,
    })


def _sweep_configs(rc: RunConfig) -> list[RunConfig]:
    """Rows of a sweep: |z2| takes each listed modulus, phases are kept,
    |z1| follows the configured sector ratio, and epsilon scales as the
    cube of the modulus (its phase is kept as well)."""
    try:
        moduli = [float(tok) for tok in rc.sweep.split(",") if tok.strip()]
    except ValueError as e:
        raise UsageError(f"cannot parse sweep list {rc.sweep!r}") from e
    if not moduli:
        raise UsageError("empty sweep list")
    phase1 = rc.z1 / abs(rc.z1) if rc.z1 != 0 else 1.0 + 0j
    phase2 = rc.z2 / abs(rc.z2) if rc.z2 != 0 else 1.0 + 0j
    phase_eps = rc.epsilon / abs(rc.epsilon) if rc.epsilon != 0 else 1.0 + 0j
    if abs(rc.z2) == 0:
        raise UsageError("sweep needs a nonzero base z2")
    ratio = abs(rc.z1) / abs(rc.z2) ** 1.5
    rows = []
    for m in moduli:
        rows.append(dataclasses.replace(
            rc,
            z1=ratio * m ** 1.5 * phase1,
            z2=m * phase2,
            epsilon=(m ** 3) * phase_eps,
            sweep=None,
        ))
    return rows


def cmd_gap(rc: RunConfig) -> tuple[dict, int]:
    if rc.sweep:
        rows = [_gap_record(row_rc) for row_rc in _sweep_configs(rc)]
        report = {
            "schema": SCHEMA,
            "command": "gap",
            "config": rc.to_jsonable(),
            "records": rows,
        }
    else:
        rows = [_gap_record(rc)]
        report = {
            "schema": SCHEMA,
            "command": "gap",
            "config": rc.to_jsonable(),
            "record": rows[0],
        }
    ok = all(
        row["strict"] and all(c["passed"] for c in row["checks"]) for row in rows
    )
    code = 1 if (rc.expect_strict and not ok) else 0
    return report, code


def cmd_ball_transfer(rc: RunConfig) -> tuple[dict, int]:
    cfg = rc.pole_config()
    threshold = (2.0 - rc.delta) * math.log(abs(rc.z2))
    lower_rep = lempert_lower_in_ball(threshold, rc.z, cfg)
    upper_rep = green_upper_in_ball(rc.z, cfg, rc.eta)
    gap = gap_verdict(lower_rep, upper_rep)
    checks = []
    if rc.expect_strict:
        checks.append(_check("ball_gap_strict", gap.strict, f"gap = {gap.gap}"))
    report = {
        "schema": SCHEMA,
        "command": "ball-transfer",
        "config": rc.to_jsonable(),
        "result": _jsonable({
            "lower": _bound_dict(lower_rep),
            "upper": _bound_dict(upper_rep),
            "gap": gap.gap,
            "strict": gap.strict,
            "objective_threshold": threshold,
        }),
        "checks": checks,
    }
    return report, _exit_from_checks(checks)


# ---------------------------------------------------------------------------
# Report verification.
# ---------------------------------------------------------------------------


def _cpx(v) -> complex:
    return complex(float(v[0]), float(v[1]))


def _close(a: float, b: float, tol: float = 1e-12) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _rc_from_report(data: dict) -> RunConfig:
    cfg = data.get("config")
    if not isinstance(cfg, dict):
        raise UsageError("report has no embedded config")
    kwargs = {}
    for f in dataclasses.fields(RunConfig):
        if f.name not in cfg:
            continue
        v = cfg[f.name]
        if f.name in _COMPLEX_FIELDS or f.name in ("zeta0", "zeta1", "zeta2"):
            kwargs[f.name] = None if v is None else _parse_complex(v)
        else:
            kwargs[f.name] = v
    return RunConfig(**kwargs)


def _verify_neil(data: dict, rc: RunConfig) -> list[str]:
    mismatches = []
    disk = build_neil(rc.z, rc.pole_config(), rc.eta)
    residuals = _neil_residuals(disk)
    stored = data["result"]["residuals"]
    for name, value in residuals.items():
        if name not in stored or not _close(value, stored[name]):
            mismatches.append(f"residual {name}: recomputed {value}, stored {stored.get(name)}")
        if not value < 1e-10:
            mismatches.append(f"residual {name} = {value} breaches 1e-10")
    margin = containment_check(disk)
    if not _close(margin, data["result"]["containment_margin"], 1e-9):
        mismatches.append(
            f"containment margin: recomputed {margin}, stored {data['result']['containment_margin']}"
        )
    return mismatches


def _verify_green_value(stored_bound: dict, rc: RunConfig) -> list[str]:
    mismatches = []
    disk = build_neil(rc.z, rc.pole_config(), rc.eta)
    containment_check(disk)
    rep = green_upper_from_neil(disk)
    if not _close(rep.value, stored_bound["value"]):
        mismatches.append(
            f"green bound: recomputed {rep.value}, stored {stored_bound['value']}"
        )
    witness = stored_bound["witness"]
    preimages = [_cpx(p) for p in witness["preimages"]]
    eval_point = _cpx(witness["eval_point"])
    recompute = poletsky_disk_bound(preimages, eval_point)
    if not _close(recompute, stored_bound["value"]):
        mismatches.append(
            f"stored witness recomputes to {recompute}, stored value {stored_bound['value']}"
        )
    return mismatches


def _verify_lempert_result(result: dict, rc: RunConfig) -> list[str]:
    if not result.get("found"):
        return []
    mismatches = []
    cfg = rc.pole_config()
    zeta0 = _cpx(result["zeta0"])
    if cfg.is_single_pole:
        cand = CandidateData.from_nodes(rc.z, cfg, zeta0)
    else:
        cand = CandidateData.from_nodes(
            rc.z, cfg, zeta0, _cpx(result["zeta1"]), _cpx(result["zeta2"])
        )
    if not _close(cand.objective, result["objective"]):
        mismatches.append(
            f"objective: recomputed {cand.objective}, stored {result['objective']}"
        )
    res = feasible(cand, rc.z, cfg)
    if not res.ok:
        mismatches.append(f"stored winner is not feasible: margins {res.margins}")
    if not cfg.is_single_pole and res.ok:
        disk = FactorizedDisk.from_interpolation_data(
            rc.z, cfg, cand.zeta0, cand.zeta1, cand.zeta2
        )
        residual = disk_residual(disk, rc.z, cfg, cand.zeta0)
        if not residual < 1e-9:
            mismatches.append(f"stored winner disk residual {residual} breaches 1e-9")
    return mismatches


def _verify_chain(data: dict, rc: RunConfig) -> list[str]:
    mismatches = []
    cfg = rc.pole_config()
    params = ChainParams.create(rc.delta, rc.z, cfg, enforce_regime=False)
    result = data["result"]
    if result["mode"] == "trace":
        cand = CandidateData.from_nodes(rc.z, cfg, rc.zeta0, rc.zeta1, rc.zeta2)
        trace = check_chain(params, cand)
        stored_steps = {s["name"]: s for s in result["trace"]["steps"]}
        for step in trace.steps:
            s = stored_steps.get(step.name)
            if s is None:
                mismatches.append(f"step {step.name} missing from report")
                continue
            if s["holds"] != step.holds or not (
                _close(step.lhs, s["lhs"]) and _close(step.rhs, s["rhs"])
            ):
                mismatches.append(
                    f"step {step.name}: recomputed ({step.lhs}, {step.rhs}, {step.holds}), "
                    f"stored ({s['lhs']}, {s['rhs']}, {s['holds']})"
                )
        if trace.verdict != result["trace"]["verdict"]:
            mismatches.append(
                f"verdict: recomputed {trace.verdict}, stored {result['trace']['verdict']}"
            )
        return mismatches
    if result.get("counterexample"):
        mismatches.append("stored report records a counterexample; nothing to certify")
        return mismatches
    try:
        dis = disprove_below_threshold(params, rc.samples, rc.seed, enforce_regime=False)
    except CounterexampleFound as e:
        return [f"re-run found a counterexample the report lacks: {e}"]
    if dis.histogram != result["histogram"]:
        mismatches.append(
            f"histogram: recomputed {dis.histogram}, stored {result['histogram']}"
        )
    if not _close(dis.objective_threshold, result["objective_threshold"]):
        mismatches.append("objective threshold drifted")
    return mismatches


def _verify_gap_record(record: dict, rc: RunConfig) -> list[str]:
    row_rc = dataclasses.replace(
        rc,
        z1=_cpx(record["z"][0]),
        z2=_cpx(record["z"][1]),
        epsilon=_cpx(record["epsilon"]),
        sweep=None,
    )
    mismatches = _verify_green_value(record["green_report"], row_rc)
    cfg = row_rc.pole_config()
    lower = green_lower_oracle(cfg, row_rc.z)
    if not _close(lower, record["green_lower"]):
        mismatches.append(
            f"green lower oracle: recomputed {lower}, stored {record['green_lower']}"
        )
    threshold = (2.0 - row_rc.delta) * math.log(abs(row_rc.z2))
    if not _close(threshold, record["objective_threshold"]):
        mismatches.append("objective threshold drifted")
    up = green_upper_in_ball(row_rc.z, cfg, row_rc.eta)
    if not _close(up.value, record["ball"]["upper"]["value"]):
        mismatches.append(
            f"ball upper: recomputed {up.value}, stored {record['ball']['upper']['value']}"
        )
    gap = threshold - up.value
    if not _close(gap, record["gap"], 1e-9):
        mismatches.append(f"gap arithmetic: recomputed {gap}, stored {record['gap']}")
    if (gap > 0.0) != record["strict"]:
        mismatches.append("strict flag inconsistent with recomputed gap")
    mismatches.extend(_verify_lempert_result(record["search"], row_rc))
    return mismatches


def _verify_ball(data: dict, rc: RunConfig) -> list[str]:
    mismatches = []
    cfg = rc.pole_config()
    result = data["result"]
    threshold = (2.0 - rc.delta) * math.log(abs(rc.z2))
    if not _close(threshold, result["objective_threshold"]):
        mismatches.append("objective threshold drifted")
    up = green_upper_in_ball(rc.z, cfg, rc.eta)
    if not _close(up.value, result["upper"]["value"]):
        mismatches.append(
            f"ball upper: recomputed {up.value}, stored {result['upper']['value']}"
        )
    gap = threshold - up.value
    if not _close(gap, result["gap"], 1e-9):
        mismatches.append(f"gap arithmetic: recomputed {gap}, stored {result['gap']}")
    if (gap > 0.0) != result["strict"]:
        mismatches.append("strict flag inconsistent with recomputed gap")
    return mismatches


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        data = json.loads(Path(args.report).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read report {args.report}: {e}") from e
    if data.get("schema") != SCHEMA:
        raise UsageError(f"unknown schema {data.get('schema')!r}, expected {SCHEMA!r}")
    rc = _rc_from_report(data)
    command = data.get("command")
    if command == "neil-verify":
        mismatches = _verify_neil(data, rc)
    elif command == "green-bound":
        mismatches = _verify_green_value(data["bound"], rc)
    elif command == "lempert-search":
        mismatches = _verify_lempert_result(data["result"], rc)
    elif command == "chain-check":
        mismatches = _verify_chain(data, rc)
    elif command == "gap":
        records = data["records"] if "records" in data else [data["record"]]
        mismatches = []
        for i, record in enumerate(records):
            mismatches.extend(f"record {i}: {m}" for m in _verify_gap_record(record, rc))
    elif command == "ball-transfer":
        mismatches = _verify_ball(data, rc)
    else:
        raise UsageError(f"cannot verify reports for command {command!r}")
    out = {
        "schema": SCHEMA,
        "command": "verify",
        "target_command": command,
        "ok": not mismatches,
        "mismatches": mismatches,
    }
    sys.stdout.write(json.dumps(out, sort_keys=True, indent=2) + "\n")
    for m in mismatches:
        print(f"mismatch: {m}", file=sys.stderr)
    return 0 if not mismatches else 1


# ---------------------------------------------------------------------------
# Output plumbing and the entry point.
# ---------------------------------------------------------------------------


def _gap_csv(report: dict) -> str:
    records = report["records"] if "records" in report else [report["record"]]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS)
    for rec in records:
        z1, z2 = rec["z"]
        writer.writerow([
            z1[0], z1[1], z2[0], z2[1],
            math.hypot(*rec["epsilon"]), math.hypot(*rec["s"]),
            rec["delta"], rec["eta"],
            rec["green_upper"], rec["green_lower"],
            "" if rec["lempert_best"] is None else rec["lempert_best"],
            rec["gap"], str(rec["strict"]).lower(),
        ])
    return buf.getvalue()


def _emit(report: dict, rc: RunConfig) -> None:
    if rc.format == "csv":
        text = _gap_csv(report)
    else:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if rc.output_path:
        Path(rc.output_path).write_text(text)
        print(f"report written to {rc.output_path}", file=sys.stderr)
    else:
        sys.stdout.write(text)


class _Parser(argparse.ArgumentParser):
    """argparse with BSD-style usage exits (64 instead of 2)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(64, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its entries")
    common.add_argument("--out", dest="output_path", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--z1", type=_flag_complex, default=None, metavar="C",
                        help="first coordinate, e.g. '1e-3' or '3e-5+2e-5j'")
    common.add_argument("--z2", type=_flag_complex, default=None, metavar="C")
    common.add_argument("--epsilon", type=_flag_complex, default=None, metavar="C")
    common.add_argument("--s-mode", dest="s_mode", choices=("identity", "zero", "fixed"), default=None)
    common.add_argument("--s-value", dest="s_value", type=_flag_complex, default=None, metavar="C")
    common.add_argument("--eta", type=float, default=None)
    common.add_argument("--delta", type=float, default=None)

    parser = _Parser(
        prog="plurigap",
        description="Two-sided bounds and refutation checks for the "
                    "three-pole Green/Lempert gap experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("neil-verify", parents=[common],
                   help="build the polynomial disk and check residuals and containment")
    sub.add_parser("green-bound", parents=[common],
                   help="compute the analytic-disk upper bound with its witness")

    p = sub.add_parser("lempert-search", parents=[common],
                       help="multistart search for the best feasible disk objective")
    p.add_argument("--n-starts", dest="n_starts", type=int, default=None)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=None)
    p.add_argument("--single-pole", dest="single_pole", action="store_true", default=None)

    p = sub.add_parser("chain-check", parents=[common],
                       help="evaluate the refutation chain or sample below-threshold candidates")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--allow-out-of-regime", dest="allow_out_of_regime",
                   action="store_true", default=None)
    p.add_argument("--zeta0", type=_flag_complex, default=None, metavar="C")
    p.add_argument("--zeta1", type=_flag_complex, default=None, metavar="C")
    p.add_argument("--zeta2", type=_flag_complex, default=None, metavar="C")

    p = sub.add_parser("gap", parents=[common],
                       help="full gap experiment: bounds, search, disproof, ball transfer")
    p.add_argument("--n-starts", dest="n_starts", type=int, default=None)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--sweep", default=None, metavar="M1,M2,...",
                   help="comma-separated |z2| moduli; one record per modulus")
    p.add_argument("--expect-strict", dest="expect_strict", action="store_true", default=None)

    p = sub.add_parser("ball-transfer", parents=[common],
                       help="transport the bounds to the ball and report the gap")
    p.add_argument("--expect-strict", dest="expect_strict", action="store_true", default=None)

    p = sub.add_parser("verify", help="re-check the witnesses stored in a report file")
    p.add_argument("report", help="path to a JSON report emitted by another subcommand")

    return parser


_HANDLERS = {
    "neil-verify": cmd_neil_verify,
    "green-bound": cmd_green_bound,
    "lempert-search": cmd_lempert_search,
    "chain-check": cmd_chain_check,
    "gap": cmd_gap,
    "ball-transfer": cmd_ball_transfer,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        rc = RunConfig.resolve(args)
        report, code = _HANDLERS[args.command](rc)
        _emit(report, rc)
        return code
    except UsageError as e:
        print(f"plurigap: error: {e}", file=sys.stderr)
        return 64
    except _DEGENERATE as e:
        print(f"plurigap: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except _CHECK_FAILED as e:
        print(f"plurigap: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
