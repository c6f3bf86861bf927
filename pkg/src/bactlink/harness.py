"""Scenario layer: named parameter sweeps and CSV/JSON sweep tables.

Each scenario sweeps one variable and runs one or more population arms per
value: "coop" (all cooperators), "noncoop" (no cooperators), or "mixed"
(half/half, reported per class).  Where both pure arms run, a "delta" row
reports the relative gain of cooperation.  All arms and sweep values share
one master seed, so arms see common random numbers and differences between
them are driven by the cooperative machinery alone.
"""

import json
from dataclasses import dataclass, field
from typing import Optional

from .engine import (
    TrialConfig,
    UndefinedGainError,
    relative_gain_ci,
    run_replicated,
)
from .errors import ConfigError
from .motility import SimParams

CSV_HEADER = ("scenario,arm,variable,value,n_s,coop_fraction,trials,seed,"
              "mean_eta,ci95,mean_eta_coop,mean_eta_noncoop,delta_c")

# arm name -> cooperator fraction
PURE_ARMS = (("coop", 1.0), ("noncoop", 0.0))


@dataclass(frozen=True)
class Scenario:
    """A named sweep: variable, values, arm layout, and replication depth."""

    name: str
    variable: str  # SimParams field name, or "n_s"
    values: tuple
    arms: tuple = PURE_ARMS  # (arm_name, coop_fraction) pairs to report
    emit_delta: bool = True  # append a gain row per sweep value
    delta_only: bool = False  # report only the gain rows
    base: dict = field(default_factory=dict)  # SimParams overrides
    n_s: int = 100
    trials: int = 200
    seed: int = 0

    def __post_init__(self):
        if not self.values:
            raise ConfigError(f"scenario {self.name}: empty sweep values")
        if any(b >= a for a, b in zip(self.values[1:], self.values)):
            raise ConfigError(f"scenario {self.name}: values must be strictly increasing")


@dataclass
class SweepRow:
    """One output row; None fields render as blank CSV cells."""

    scenario: str
    arm: str
    variable: str
    value: float
    n_s: int
    coop_fraction: Optional[float]
    trials: int
    seed: int
    mean_eta: Optional[float]
    ci95: Optional[float]
    mean_eta_coop: Optional[float]
    mean_eta_noncoop: Optional[float]
    delta_c: Optional[float]


SCENARIOS = {
    # success rate vs source-destination distance (both arms + gain)
    "distance_sweep": Scenario(
        name="distance_sweep", variable="distance_l",
        values=(5.0, 10.0, 15.0, 20.0, 25.0, 30.0),
        base={"c0": 10.0}, trials=200),
    # relative gain vs population size at the 20 um operating point
    "population_sweep": Scenario(
        name="population_sweep", variable="n_s",
        values=(50, 100, 200, 300, 400, 500),
        base={"distance_l": 20.0, "c0": 10.0}, trials=200),
    # per-class success in a half-cooperator population (free-riding view)
    "coop_fraction_sweep": Scenario(
        name="coop_fraction_sweep", variable="c0",
        values=(10.0, 20.0), arms=(("mixed", 0.5),), emit_delta=False,
        base={"distance_l": 20.0}, trials=500),
    # success rate vs chemoattractant density (both arms + gain)
    "density_sweep": Scenario(
        name="density_sweep", variable="c0",
        values=(5.0, 10.0, 20.0, 40.0),
        base={"distance_l": 20.0}, trials=500),
    # gain-of-cooperation view of the density sweep
    "gain_vs_density": Scenario(
        name="gain_vs_density", variable="c0",
        values=(5.0, 10.0, 20.0, 40.0), delta_only=True,
        base={"distance_l": 20.0}, trials=500),
}


def _arm_row(scenario: Scenario, value, n_s: int, frac: float, trials: int,
             seed: int, arm_name: str, agg) -> SweepRow:
    return SweepRow(
        scenario=scenario.name, arm=arm_name, variable=scenario.variable,
        value=value, n_s=n_s, coop_fraction=frac, trials=trials, seed=seed,
        mean_eta=agg.mean_eta, ci95=agg.ci95_eta,
        mean_eta_coop=agg.mean_eta_coop,
        mean_eta_noncoop=agg.mean_eta_noncoop, delta_c=None)


def _delta_row(scenario: Scenario, value, n_s: int, trials: int, seed: int,
               agg_coop, agg_noncoop) -> SweepRow:
    try:
        gain, half = relative_gain_ci(agg_coop, agg_noncoop)
    except UndefinedGainError:
        gain, half = None, None
    return SweepRow(
        scenario=scenario.name, arm="delta", variable=scenario.variable,
        value=value, n_s=n_s, coop_fraction=None, trials=trials, seed=seed,
        mean_eta=None, ci95=half,
        mean_eta_coop=agg_coop.mean_eta, mean_eta_noncoop=agg_noncoop.mean_eta,
        delta_c=gain)


def run_scenario(scenario, *, seed: Optional[int] = None,
                 trials: Optional[int] = None, overrides: Optional[dict] = None,
                 jobs: int = 1, backend: Optional[str] = None) -> list:
    """Run one scenario (by name or Scenario) and return its SweepRows.

    `overrides` patches SimParams fields across the whole sweep; `seed` and
    `trials` replace the scenario defaults.  Output is deterministic for a
    fixed (scenario, seed, trials, overrides) regardless of `jobs`.
    """
    if isinstance(scenario, str):
        try:
            scenario = SCENARIOS[scenario]
        except KeyError:
            raise ConfigError(f"unknown scenario {scenario!r}; "
                              f"choose from {sorted(SCENARIOS)}") from None
    seed = scenario.seed if seed is None else seed
    trials = scenario.trials if trials is None else trials
    base = dict(scenario.base)
    base.update(overrides or {})

    rows = []
    for value in scenario.values:
        if scenario.variable == "n_s":
            n_s = int(value)
            params = SimParams(**base)
        else:
            n_s = scenario.n_s
            params = SimParams(**{**base, scenario.variable: value})

        # the gain rows need both pure arms even when they are not reported
        arm_fracs = dict(scenario.arms)
        if scenario.emit_delta or scenario.delta_only:
            arm_fracs.setdefault("coop", 1.0)
            arm_fracs.setdefault("noncoop", 0.0)

        aggs = {}
        for arm_name, frac in arm_fracs.items():
            cfg = TrialConfig(params=params, n_s=n_s, coop_fraction=frac,
                              seed=seed)
            aggs[arm_name] = run_replicated(cfg, trials, jobs=jobs,
                                            backend=backend)

        if not scenario.delta_only:
            for arm_name, frac in scenario.arms:
                rows.append(_arm_row(scenario, value, n_s, frac, trials, seed,
                                     arm_name, aggs[arm_name]))
        if scenario.emit_delta or scenario.delta_only:
            rows.append(_delta_row(scenario, value, n_s, trials, seed,
                                   aggs["coop"], aggs["noncoop"]))
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        raise ConfigError(f"unexpected boolean cell {v!r}")
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _row_cells(row: SweepRow) -> list:
    return [row.scenario, row.arm, row.variable, row.value, row.n_s,
            row.coop_fraction, row.trials, row.seed, row.mean_eta, row.ci95,
            row.mean_eta_coop, row.mean_eta_noncoop, row.delta_c]


def write_csv(rows, path) -> None:
    """Write SweepRows as CSV: fixed header, 6 significant digits, LF, UTF-8."""
    if not rows:
        raise ConfigError("refusing to write an empty sweep table")
    lines = [CSV_HEADER]
    lines.extend(",".join(_fmt(c) for c in _row_cells(r)) for r in rows)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as e:
        raise ConfigError(f"cannot write csv to {path}: {e}") from e


def write_json(rows, path) -> None:
    """Write SweepRows as a JSON array of objects mirroring the CSV columns."""
    if not rows:
        raise ConfigError("refusing to write an empty sweep table")
    cols = CSV_HEADER.split(",")
    payload = [dict(zip(cols, _row_cells(r))) for r in rows]
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    except OSError as e:
        raise ConfigError(f"cannot write json to {path}: {e}") from e
