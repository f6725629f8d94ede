"""Serialization of simulation runs: summary JSON plus timeseries/decision CSVs."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import fields
from pathlib import Path

from .adaptation import AdaptationDecision
from .numfmt import fmt_number, json_number
from .simulation import CellReconfiguration, SchedulerThrottling, SimulationReport, Strategy

TIMESERIES_COLUMNS = (
    "t", "capacity_bps", "required_bps", "access_bps", "active_rb", "active_layers", "outage", "utilization",
)
DECISION_COLUMNS = tuple(f.name for f in fields(AdaptationDecision))


def gbps(bps: float) -> str:
    """Rate in Gbps with three significant digits."""
    return f"{bps / 1e9:#.3g} Gbps"


def strategy_metadata(strategy: Strategy) -> dict:
    meta: dict = {"kind": strategy.name}
    if isinstance(strategy, CellReconfiguration):
        meta["dwell_s"] = json_number(strategy.dwell_s)
        meta["legal_configs"] = [list(p) for p in strategy.legal.pairs]
    elif isinstance(strategy, SchedulerThrottling):
        meta["extended"] = strategy.extended
    return meta


def _levels(table: dict[float, float]) -> list[dict]:
    return [{"level_bps": json_number(k), "fraction": v} for k, v in table.items()]


def summary_document(report: SimulationReport, strategy: Strategy) -> dict:
    n = len(report.decisions)
    return {
        "strategy": strategy_metadata(strategy),
        "samples": n,
        "step_s": json_number(report.step_s),
        "outage_fraction": report.outage_fraction,
        "outage_s": json_number(report.outage_fraction * n * report.step_s),
        "mean_access_bps": report.mean_access_bps,
        "min_access_bps": json_number(report.min_access_bps),
        "min_rate_bps": json_number(report.min_rate_bps),
        "mean_utilization": sum(report.utilization) / n,
        "peak_utilization": max(report.utilization),
        "reconfigurations": report.reconfigurations,
        "availability": _levels(report.availability),
        "access_availability": _levels(report.access_availability),
        "capacity_availability": _levels(report.capacity_availability),
    }


def timeseries_csv(report: SimulationReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TIMESERIES_COLUMNS)
    for d, u in zip(report.decisions, report.utilization):
        writer.writerow((
            fmt_number(d.t), fmt_number(d.capacity_bps), fmt_number(d.required_fh_bps),
            fmt_number(d.access_capacity_bps), d.active_rb, d.active_layers, fmt_number(d.outage), fmt_number(u),
        ))
    return out.getvalue()


def decisions_csv(report: SimulationReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(DECISION_COLUMNS)
    for d in report.decisions:
        writer.writerow(fmt_number(v) if not isinstance(v, str) else v
                        for v in (getattr(d, c) for c in DECISION_COLUMNS))
    return out.getvalue()


def write_atomic(path: Path, text: str) -> None:
    """Write ``text`` next to ``path`` and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_artifacts(out_dir: Path, report: SimulationReport, strategy: Strategy) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    payloads = {
        "summary.json": json.dumps(summary_document(report, strategy), indent=2) + "\n",
        "timeseries.csv": timeseries_csv(report),
        "decisions.csv": decisions_csv(report),
    }
    paths = {}
    for name, text in payloads.items():
        paths[name] = out_dir / name
        write_atomic(paths[name], text)
    return paths
