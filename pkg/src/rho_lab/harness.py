"""Batch experiment driver: seeded collision runs with verified recovery.

Each trial draws a fresh target exponent, partition key and start from a
per-(n, trial) sub-seed, runs to the first collision, classifies it, and
cross-checks any recovered exponent against the baby-step giant-step
oracle.  Aggregation is keyed by (n, trial index), so serial and
process-pool executions produce identical reports byte for byte.
"""

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import rng
from .group import GroupParams, find_ambient_prime, multiplicative_order
from .primes import select_alternate_exponent
from .walk import CollisionMode, CollisionTimeout, RhoInstance, bsgs_oracle, run_until_collision

__all__ = [
    "SCHEMA",
    "ExperimentConfig",
    "TrialRow",
    "AggregateRow",
    "ExperimentReport",
    "OracleMismatch",
    "run_experiment",
    "emit_report",
    "parse_config_file",
]

SCHEMA = "rho-lab/1"

FIXED2 = "fixed2"
AUTO_REMARK_STEP = "auto"


class OracleMismatch(RuntimeError):
    """A recovered exponent disagreed with the independent oracle."""


@dataclass(frozen=True)
class ExperimentConfig:
    n_list: tuple[int, ...]
    trials: int
    mode: CollisionMode = CollisionMode.FULL_STORE
    exponent_step_policy: str = FIXED2
    c0: float = 1.0
    master_seed: int = 0
    max_steps_multiplier: float = 50.0

    def __post_init__(self):
        if not self.n_list:
            raise ValueError("n_list must be nonempty")
        if any(n % 2 == 0 for n in self.n_list):
            raise ValueError("group orders must be odd primes")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.exponent_step_policy not in (FIXED2, AUTO_REMARK_STEP):
            raise ValueError(f"unknown exponent step policy {self.exponent_step_policy!r}")


@dataclass(frozen=True)
class TrialRow:
    n: int
    trial: int
    y: int
    steps: int
    outcome: str  # ok | degenerate | timeout
    recovered_y: int | None


@dataclass(frozen=True)
class AggregateRow:
    n: int
    ord2: int
    ell: int
    trials: int
    steps_p10: int
    steps_p50: int
    steps_p90: int
    degenerate_count: int
    degeneracy_rate: float
    theorem_bound: float  # 3/2 * (p90 steps)^2 / n^2
    success_rate: float
    oracle_mismatches: int
    small_order_flag: bool  # ord2 below (log n)^3; reported, never fatal


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    trial_rows: list[TrialRow] = field(default_factory=list)
    aggregate_rows: list[AggregateRow] = field(default_factory=list)


def _trial_seed(master_seed: int, n: int, trial: int) -> int:
    return rng.derive_u64(master_seed, f"trial/{n}/{trial}")


def _run_trial(task) -> TrialRow:
    """One seeded trial; a pure function of its arguments (pool-safe)."""
    params, ell, mode_value, master_seed, n, trial, max_steps = task
    seed = _trial_seed(master_seed, n, trial)
    y = rng.uniform_below(seed, "target-y", n - 2) + 2  # uniform in [2, n-1]
    h = pow(params.g, y, params.p)
    instance = RhoInstance.from_seed(params, params.g, h, seed, exponent_step=ell)
    try:
        record = run_until_collision(instance, mode=CollisionMode(mode_value),
                                     max_steps=max_steps)
    except CollisionTimeout as exc:
        return TrialRow(n=n, trial=trial, y=y, steps=exc.steps,
                        outcome="timeout", recovered_y=None)
    if record.degenerate:
        return TrialRow(n=n, trial=trial, y=y, steps=record.l_idx,
                        outcome="degenerate", recovered_y=None)
    recovered = record.recovered_y
    if pow(params.g, recovered, params.p) != h or bsgs_oracle(params.g, h, params) != recovered:
        raise OracleMismatch(
            f"n={n} trial={trial}: recovered {recovered} fails the oracle check")
    return TrialRow(n=n, trial=trial, y=y, steps=record.l_idx,
                    outcome="ok", recovered_y=recovered)


def _quantile(sorted_values: list[int], q: float) -> int:
    # lower nearest-rank; keeps quantiles integral and replay-stable
    return sorted_values[int(q * (len(sorted_values) - 1))]


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    """Run the configured trials and aggregate per group order.

    workers > 1 fans trials out over a process pool; results are merged
    in (n, trial) order either way, so the report is identical.
    """
    trial_rows: list[TrialRow] = []
    aggregates: list[AggregateRow] = []
    for n in config.n_list:
        params = find_ambient_prime(n)
        if config.exponent_step_policy == AUTO_REMARK_STEP:
            ell = select_alternate_exponent(n, config.c0).ell
        else:
            ell = 2
        max_steps = max(1, math.ceil(config.max_steps_multiplier * math.sqrt(n)))
        tasks = [(params, ell, config.mode.value, config.master_seed, n, t, max_steps)
                 for t in range(config.trials)]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_run_trial, tasks, chunksize=64))
        else:
            rows = [_run_trial(t) for t in tasks]
        rows.sort(key=lambda r: r.trial)
        trial_rows.extend(rows)
        aggregates.append(_aggregate(n, ell, rows))
    return ExperimentReport(config=config, trial_rows=trial_rows,
                            aggregate_rows=aggregates)


def _aggregate(n: int, ell: int, rows: list[TrialRow]) -> AggregateRow:
    steps = sorted(r.steps for r in rows)
    p90 = _quantile(steps, 0.9)
    degenerate = sum(1 for r in rows if r.outcome == "degenerate")
    ok = sum(1 for r in rows if r.outcome == "ok")
    ord2 = multiplicative_order(2, n)
    return AggregateRow(
        n=n,
        ord2=ord2,
        ell=ell,
        trials=len(rows),
        steps_p10=_quantile(steps, 0.1),
        steps_p50=_quantile(steps, 0.5),
        steps_p90=p90,
        degenerate_count=degenerate,
        degeneracy_rate=degenerate / len(rows),
        theorem_bound=1.5 * p90 * p90 / (n * n),
        success_rate=ok / len(rows),
        oracle_mismatches=0,  # a mismatch aborts the run before aggregation
        small_order_flag=ord2 < math.log(n) ** 3,
    )


def emit_report(report: ExperimentReport, format: str, path) -> None:
    """Write the report deterministically.

    jsonl: a schema header record, then one record per (n, trial).
    csv: a schema comment line, a column header, one row per n.
    Re-emitting the same report yields byte-identical files.
    """
    if format == "jsonl":
        _emit_jsonl(report, path)
    elif format == "csv":
        _emit_csv(report, path)
    else:
        raise ValueError(f"unknown report format {format!r}")


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _emit_jsonl(report: ExperimentReport, path) -> None:
    cfg = report.config
    config_record = {
        "config": {
            "n_list": list(cfg.n_list),
            "trials": cfg.trials,
            "mode": cfg.mode.value,
            "exponent_step_policy": cfg.exponent_step_policy,
            "c0": cfg.c0,
            "master_seed": cfg.master_seed,
            "max_steps_multiplier": cfg.max_steps_multiplier,
        }
    }
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_dump({"schema": SCHEMA}) + "\n")
            fh.write(_dump(config_record) + "\n")
            for r in report.trial_rows:
                fh.write(_dump({
                    "n": r.n,
                    "trial": r.trial,
                    "y": r.y,
                    "steps": r.steps,
                    "outcome": r.outcome,
                    "recovered_y": r.recovered_y,
                }) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


_CSV_COLUMNS = [
    "n", "ord2", "ell", "trials", "steps_p10", "steps_p50", "steps_p90",
    "degenerate_count", "degeneracy_rate", "theorem_bound", "success_rate",
    "oracle_mismatches", "small_order_flag",
]


def _emit_csv(report: ExperimentReport, path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# schema={SCHEMA}\n")
            fh.write(",".join(_CSV_COLUMNS) + "\n")
            for row in report.aggregate_rows:
                values = [getattr(row, col) for col in _CSV_COLUMNS]
                fh.write(",".join(_csv_cell(v) for v in values) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_config_file(path) -> ExperimentConfig:
    """Flat key=value config, UTF-8, keys matching ExperimentConfig fields."""
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return config_from_strings(values, source=str(path))


def config_from_strings(values: dict, source: str = "config") -> ExperimentConfig:
    known = {"n_list", "trials", "mode", "exponent_step_policy", "c0",
             "master_seed", "max_steps_multiplier"}
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"{source}: unknown keys {sorted(unknown)}")
    if "n_list" not in values or "trials" not in values:
        raise ValueError(f"{source}: n_list and trials are required")
    kwargs = {
        "n_list": tuple(int(v) for v in str(values["n_list"]).replace(",", " ").split()),
        "trials": int(values["trials"]),
    }
    if "mode" in values:
        kwargs["mode"] = CollisionMode(str(values["mode"]).lower())
    if "exponent_step_policy" in values:
        kwargs["exponent_step_policy"] = str(values["exponent_step_policy"]).lower()
    if "c0" in values:
        kwargs["c0"] = float(values["c0"])
    if "master_seed" in values:
        kwargs["master_seed"] = int(values["master_seed"])
    if "max_steps_multiplier" in values:
        kwargs["max_steps_multiplier"] = float(values["max_steps_multiplier"])
    return ExperimentConfig(**kwargs)
