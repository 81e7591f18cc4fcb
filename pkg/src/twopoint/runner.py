"""Suite definitions, result rows and output writers."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from . import reference as ref
from .errors import InvalidArgumentError
from .fluctuation import (
    dissipation_average,
    exp_neg_info_average,
    jarzynski_average,
    pointwise_mutual_information,
    thermo_record,
    total_mutual_information,
)
from .montecarlo import PROBABILITY_QUANTITIES, ShotPlan, Spam, replicate
from .protocol import EnergySpec, ProtocolConfig, joint_distribution, pulse_about_axis
from .qubit import O_AXIS, X_AXIS, Y_AXIS, Z_AXIS, BlochVector, PulseSpec, as_bloch

SUITES = ("table2", "table4", "fig2", "custom")
MODES = ("exact", "montecarlo", "both")
FORMATS = ("csv", "json", "text")
HEADER = ("suite", "alpha_or_betaE", "t_or_hf", "quantity", "exact", "mc_mean", "mc_rms", "flags")

TABLE4_AXES = {"Hf1": X_AXIS, "Hf2": Y_AXIS, "Hf3": O_AXIS}
# Gibbs-suite evolution: any rotation about the final axis; the value is arbitrary
TABLE4_THETA = ref.TAU_THETA

QUANTITIES = {
    "table2": ("sum_p_I", "exp_neg_I"),
    "table4": ("dissipation", "jarzynski"),
    "fig2": PROBABILITY_QUANTITIES,
}


@dataclass(frozen=True)
class SuiteSpec:
    suite: str
    mode: str = "exact"
    seed: Optional[int] = None
    shots: int = 40_000
    reps: int = 100
    spam: Optional[Spam] = None
    phi1: float = 0.0
    readout: str = "projector"
    workers: int = 1
    out: Optional[str] = None
    format: str = "csv"
    check: bool = False
    time_us: bool = False
    # custom suite only
    alpha: Optional[float] = None
    beta_e: Optional[float] = None
    p_axis: Optional[BlochVector] = None
    q_axis: Optional[BlochVector] = None
    theta: Optional[float] = None
    prep_phase: float = 0.0

    def __post_init__(self):
        if self.suite not in SUITES:
            raise InvalidArgumentError(f"unknown suite {self.suite!r}; choose from {SUITES}")
        if self.mode not in MODES:
            raise InvalidArgumentError(f"unknown mode {self.mode!r}; choose from {MODES}")
        if self.format not in FORMATS:
            raise InvalidArgumentError(f"unknown format {self.format!r}; choose from {FORMATS}")
        if self.mode != "exact" and self.seed is None:
            raise InvalidArgumentError("a --seed is required in montecarlo mode")
        if self.workers < 1:
            raise InvalidArgumentError("workers must be >= 1")
        if self.suite == "custom":
            if self.p_axis is None or self.q_axis is None or self.theta is None:
                raise InvalidArgumentError("custom suite needs p_axis, q_axis and theta")
            if (self.alpha is None) == (self.beta_e is None):
                raise InvalidArgumentError("custom suite needs exactly one of alpha and beta_e")
        if self.mc:
            self.plan()  # validates shots, reps, seed

    @property
    def exact(self) -> bool:
        return self.mode in ("exact", "both")

    @property
    def mc(self) -> bool:
        return self.mode in ("montecarlo", "both")

    def plan(self) -> ShotPlan:
        return ShotPlan(self.seed, self.shots, self.reps, self.spam, self.readout)


@dataclass(frozen=True)
class Cell:
    """One grid point of a suite."""

    coord: float
    label: str
    config: ProtocolConfig
    quantities: tuple
    time: Optional[float] = None


@dataclass
class ResultRow:
    suite: str
    alpha_or_betaE: float
    t_or_hf: str
    quantity: str
    exact: Optional[float] = None
    mc_mean: Optional[float] = None
    mc_rms: Optional[float] = None
    flags: str = ""
    t_us: Optional[float] = field(default=None, repr=False)


def _pure_cell(alpha, k, phi1, quantities):
    config = ProtocolConfig(
        p_axis=Z_AXIS, q_axis=Y_AXIS, evolution=PulseSpec(k * ref.TAU_THETA, phi1), alpha=alpha
    )
    return Cell(alpha, str(k), config, quantities, time=k)


def suite_cells(spec: SuiteSpec) -> list[Cell]:
    if spec.suite == "table2":
        return [
            _pure_cell(a, k, spec.phi1, QUANTITIES["table2"])
            for a in ref.TABLE2_ALPHAS for k in ref.TABLE2_TIMES
        ]
    if spec.suite == "fig2":
        return [_pure_cell(ref.FIG2_ALPHA, k, spec.phi1, QUANTITIES["fig2"]) for k in ref.TABLE2_TIMES]
    if spec.suite == "table4":
        cells = []
        for be in ref.TABLE4_BETA_E:
            for name, axis in TABLE4_AXES.items():
                config = ProtocolConfig(
                    p_axis=Z_AXIS, q_axis=axis, evolution=pulse_about_axis(axis, TABLE4_THETA),
                    beta_E=be, energy=EnergySpec(be),
                )
                cells.append(Cell(be, name, config, QUANTITIES["table4"]))
        return cells

    energy = EnergySpec(spec.beta_e) if spec.beta_e is not None else None
    config = ProtocolConfig(
        p_axis=spec.p_axis, q_axis=spec.q_axis, evolution=PulseSpec(spec.theta, spec.phi1),
        alpha=spec.alpha, beta_E=spec.beta_e, prep_phase=spec.prep_phase, energy=energy,
    )
    quantities = PROBABILITY_QUANTITIES + QUANTITIES["table2"]
    if energy is not None:
        quantities += QUANTITIES["table4"]
    coord = spec.alpha if spec.alpha is not None else spec.beta_e
    return [Cell(coord, f"{spec.theta / ref.TAU_THETA:.12g}", config, quantities,
                 time=spec.theta / ref.TAU_THETA)]


def exact_values(config: ProtocolConfig) -> dict:
    """Every reported quantity for one configuration, computed exactly."""
    dist = joint_distribution(config)
    info = pointwise_mutual_information(dist)
    out = {
        "p_-": dist.p_n[0], "p_+": dist.p_n[1], "q_-": dist.q_m[0], "q_+": dist.q_m[1],
        "p_-|-": dist.p_m_given_n[0, 0], "p_-|+": dist.p_m_given_n[1, 0],
        "p_+|-": dist.p_m_given_n[0, 1], "p_+|+": dist.p_m_given_n[1, 1],
        "sum_p_I": total_mutual_information(dist, info),
        "exp_neg_I": exp_neg_info_average(dist, info),
    }
    if config.energy is not None:
        thermo = thermo_record(config.energy, config.p_axis, config.q_axis)
        out["jarzynski"] = jarzynski_average(dist, thermo)
        out["dissipation"] = dissipation_average(dist, thermo)
    return {k: float(v) for k, v in out.items()}


def _run_cell(spec: SuiteSpec, index: int, cell: Cell) -> list[ResultRow]:
    exact = exact_values(cell.config) if spec.exact else {}
    mc = None
    if spec.mc:
        thermo = None
        if cell.config.energy is not None:
            thermo = thermo_record(cell.config.energy, cell.config.p_axis, cell.config.q_axis)
        mc = replicate(cell.config, spec.plan(), thermo, stream=index)
    rows = []
    for q in cell.quantities:
        row = ResultRow(spec.suite, cell.coord, cell.label, q)
        flags = []
        if spec.exact:
            row.exact = exact[q]
            if math.isnan(row.exact):
                flags.append("undefined")
        if mc is not None:
            report = mc.reports[q]
            row.mc_mean, row.mc_rms = report.point_estimate, report.rms_error
            if mc.invalid:
                flags.append(f"invalid_reps={mc.invalid}")
            if q == "sum_p_I" and mc.replications_with_negative_info:
                flags.append(f"neg_I_reps={mc.replications_with_negative_info}")
        row.flags = ";".join(flags)
        if spec.time_us and cell.time is not None:
            row.t_us = ref.time_us(cell.time)
        rows.append(row)
    return rows


def run_suite(spec: SuiteSpec) -> list[ResultRow]:
    """Evaluate every grid cell; rows come back in grid order."""
    cells = suite_cells(spec)
    jobs = [(spec, i, c) for i, c in enumerate(cells)]
    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            per_cell = list(pool.map(lambda a: _run_cell(*a), jobs))
    else:
        per_cell = [_run_cell(*a) for a in jobs]
    return [row for rows in per_cell for row in rows]


def format_number(x: Optional[float]) -> str:
    """12 significant digits; empty for missing, ``nan`` for undefined."""
    if x is None:
        return ""
    if math.isnan(x):
        return "nan"
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def _columns(rows, time_us):
    cols = list(HEADER) + (["t_us"] if time_us else [])
    numeric = {"alpha_or_betaE", "exact", "mc_mean", "mc_rms", "t_us"}
    table = []
    for row in rows:
        rec = {}
        for c in cols:
            v = getattr(row, c)
            rec[c] = format_number(v) if c in numeric else v
        table.append(rec)
    return cols, table


def render(rows: list[ResultRow], fmt: str = "csv", time_us: bool = False) -> str:
    cols, table = _columns(rows, time_us)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        writer.writerows(table)
        return buf.getvalue()
    if fmt == "json":
        def to_json(v, c):
            if c in ("suite", "t_or_hf", "quantity", "flags"):
                return v
            return None if v in ("", "nan") else float(v)
        objs = [{c: to_json(rec[c], c) for c in cols} for rec in table]
        return json.dumps(objs, indent=1) + "\n"
    widths = {c: max([len(c)] + [len(rec[c]) for rec in table]) for c in cols}
    lines = ["  ".join(c.ljust(widths[c]) for c in cols).rstrip()]
    lines.append("  ".join("-" * widths[c] for c in cols))
    for rec in table:
        lines.append("  ".join(rec[c].ljust(widths[c]) for c in cols).rstrip())
    return "\n".join(lines) + "\n"


def emit(rows: list[ResultRow], fmt: str = "csv", path: Optional[str] = None,
         time_us: bool = False) -> str:
    """Render ``rows`` and write them to ``path`` (UTF-8, LF) when given."""
    text = render(rows, fmt, time_us)
    if path is not None:
        try:
            with open(Path(path), "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write results to {path}: {exc.strerror or exc}") from exc
    return text


# ---- configuration ---------------------------------------------------------

CONFIG_KEYS = {f.name for f in fields(SuiteSpec)}


def _parse_axis(value) -> BlochVector:
    named = {"x": X_AXIS, "y": Y_AXIS, "z": Z_AXIS, "o": O_AXIS}
    if isinstance(value, str):
        if value.strip().lower() in named:
            return named[value.strip().lower()]
        value = value.split(",")
    try:
        return as_bloch([float(v) for v in value])
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"cannot parse Bloch axis {value!r}") from None


def _parse_spam(value) -> Optional[Spam]:
    if value is None or isinstance(value, Spam):
        return value
    if isinstance(value, str):
        value = value.split(",")
    try:
        p_prep, p_detect = (float(v) for v in value)
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"spam must be 'p_prep,p_detect', got {value!r}") from None
    return Spam(p_prep, p_detect)


def load_config(path: Optional[str] = None, **flags) -> SuiteSpec:
    """Merge a flat JSON config file with explicit flags (flags win).

    Flags set to ``None`` count as not given.
    """
    settings = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                settings = json.load(fh)
        except OSError as exc:
            raise InvalidArgumentError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InvalidArgumentError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(settings, dict):
            raise InvalidArgumentError(f"config {path} must hold a flat JSON object")
    settings.update({k: v for k, v in flags.items() if v is not None})
    unknown = sorted(set(settings) - CONFIG_KEYS)
    if unknown:
        raise InvalidArgumentError(f"unknown config keys: {', '.join(unknown)}")
    if "suite" not in settings:
        raise InvalidArgumentError("no suite given")
    if "spam" in settings:
        settings["spam"] = _parse_spam(settings["spam"])
    for key in ("p_axis", "q_axis"):
        if settings.get(key) is not None:
            settings[key] = _parse_axis(settings[key])
    spec = SuiteSpec(**settings)
    if spec.alpha is not None and not 0.0 <= spec.alpha <= 1.0:
        raise InvalidArgumentError(f"alpha must lie in [0, 1], got {spec.alpha}")
    if spec.beta_e is not None and spec.beta_e < 0:
        raise InvalidArgumentError(f"beta_e must be >= 0, got {spec.beta_e}")
    return spec

