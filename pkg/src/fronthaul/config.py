"""JSON scenario documents.

A document has the sections ``cell``, ``split``, ``beamformer``, ``link``,
``strategy`` and optionally ``trace``. Keys starting with ``_`` are comments.
The packaged ``data/reference_scenario.json`` documents every field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .adaptation import DEFAULT_DWELL_S, LegalConfigSet
from .errors import ConfigError, InvalidParameterError
from .link import DEFAULT_MODULATIONS, FronthaulLink, Modulation, with_16qam
from .rates import BeamformerConfig, CellConfig, SplitChain, rb_count
from .simulation import CellReconfiguration, NoAdaptation, ScenarioConfig, SchedulerThrottling
from .traces import TraceSchema

STRATEGY_KINDS = ("none", "cr", "sbt")


def reference_scenario_path() -> Path:
    return Path(str(resources.files("fronthaul") / "data" / "reference_scenario.json"))


@dataclass(frozen=True)
class LoadedConfig:
    scenario: ScenarioConfig
    legal: LegalConfigSet
    schema: TraceSchema
    step_s: float
    document: dict

    def scenario_for(self, kind: str) -> ScenarioConfig:
        return self.scenario.with_strategy(build_strategy(kind, self.document.get("strategy", {}), self.legal))


def _section(doc: dict, name: str, allowed: set[str], required: bool = True) -> dict:
    if name not in doc:
        if required:
            raise ConfigError(f"missing section {name!r}")
        return {}
    section = doc[name]
    if not isinstance(section, dict):
        raise ConfigError(f"section {name!r} must be a JSON object")
    body = {k: v for k, v in section.items() if not k.startswith("_")}
    unknown = set(body) - allowed
    if unknown:
        raise ConfigError(f"unknown field(s) in {name!r}: {', '.join(sorted(unknown))}")
    return body


def _number(value: Any, where: str) -> float:
    """Accept JSON numbers and fraction strings such as ``"948/1024"``."""
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value))
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(f"{where}: expected a number, got {value!r}")


def _integer(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    return int(value)


_CELL_INT = {"n_rb", "n_mimo", "q_m", "n_iq", "n_sc"}
_CELL_FLOAT = {"scs_khz", "t_s", "r_max", "oh", "f_tdd_dl"}
_CELL_FIELDS = _CELL_INT | _CELL_FLOAT | {"duplex", "uplink", "bandwidth_mhz"}


def build_cell(body: dict, where: str = "cell") -> CellConfig:
    body = {k: v for k, v in body.items() if not k.startswith("_")}
    unknown = set(body) - _CELL_FIELDS
    if unknown:
        raise ConfigError(f"unknown field(s) in {where!r}: {', '.join(sorted(unknown))}")
    kw: dict[str, Any] = {}
    for key in _CELL_INT & body.keys():
        kw[key] = _integer(body[key], f"{where}.{key}")
    for key in _CELL_FLOAT & body.keys():
        kw[key] = None if body[key] is None else _number(body[key], f"{where}.{key}")
    if "duplex" in body:
        kw["duplex"] = str(body["duplex"]).lower()
    if "bandwidth_mhz" in body:
        if "n_rb" in kw:
            raise ConfigError(f"{where}: give either n_rb or bandwidth_mhz, not both")
        kw["n_rb"] = rb_count(_number(body["bandwidth_mhz"], f"{where}.bandwidth_mhz"), kw.get("scs_khz", 120))
    for key in ("n_rb", "n_mimo"):
        if key not in kw:
            raise ConfigError(f"{where}: missing required field {key!r}")
    if body.get("uplink") is not None:
        up = dict(body["uplink"])
        # the uplink inherits the numerology unless it overrides it
        for key in ("scs_khz", "t_s"):
            if key in body and key not in up:
                up[key] = body[key]
        kw["uplink"] = build_cell(up, f"{where}.uplink")
    return CellConfig(**kw)


def build_split(body: dict) -> SplitChain:
    kw = {k: _number(v, f"split.{k}") for k, v in body.items() if k != "split_point"}
    if "split_point" in body:
        kw["split_point"] = body["split_point"]
    try:
        return SplitChain(**kw)
    except ValueError as exc:
        raise ConfigError(f"split: {exc}") from None


def build_beamformer(body: dict) -> BeamformerConfig:
    kw: dict[str, Any] = {}
    for key, value in body.items():
        if key == "kind":
            kw["kind"] = str(value).lower()
        elif key == "switch_period_s":
            kw[key] = None if value is None else _number(value, f"beamformer.{key}")
        elif key == "n_fe" and value is None:
            kw[key] = None
        else:
            kw[key] = _integer(value, f"beamformer.{key}")
    try:
        return BeamformerConfig(**kw)
    except ValueError as exc:
        raise ConfigError(f"beamformer: {exc}") from None


def build_link(body: dict) -> FronthaulLink:
    kw: dict[str, Any] = {}
    for key in ("eirp_dbm", "rx_gain_dbi", "fspl_db", "distance_km", "noise_figure_db", "se_factor"):
        if key in body:
            kw[key] = _number(body[key], f"link.{key}")
    if "bandwidths_mhz" in body:
        kw["bandwidths_mhz"] = tuple(_number(b, "link.bandwidths_mhz") for b in body["bandwidths_mhz"])
    if "modulations" in body:
        mods = []
        for i, m in enumerate(body["modulations"]):
            where = f"link.modulations[{i}]"
            try:
                mods.append(Modulation(str(m["name"]), _integer(m["bits_per_symbol"], where),
                                       _number(m["min_snr_db"], where)))
            except (KeyError, TypeError):
                raise ConfigError(f"{where}: needs name, bits_per_symbol and min_snr_db") from None
        kw["modulations"] = tuple(mods)
    else:
        kw["modulations"] = DEFAULT_MODULATIONS
    link = FronthaulLink(**kw)
    return with_16qam(link) if body.get("include_16qam") else link


def build_legal_set(cell: CellConfig, body: dict) -> LegalConfigSet:
    if "legal_configs" in body:
        pairs = []
        for i, pair in enumerate(body["legal_configs"]):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ConfigError(f"strategy.legal_configs[{i}] must be [n_rb, n_mimo]")
            pairs.append((_integer(pair[0], "strategy.legal_configs"), _integer(pair[1], "strategy.legal_configs")))
        return LegalConfigSet(cell, tuple(pairs))
    if "legal_bandwidths_mhz" in body:
        layers = body.get("legal_layers", [cell.n_mimo])
        return LegalConfigSet.from_bandwidths(cell, body["legal_bandwidths_mhz"], layers)
    halves = {(cell.n_rb, cell.n_mimo), (cell.n_rb // 2, cell.n_mimo),
              (cell.n_rb, cell.n_mimo // 2), (cell.n_rb // 2, cell.n_mimo // 2)}
    pairs = sorted((p for p in halves if p[0] * p[1] > 0), reverse=True)
    return LegalConfigSet(cell, tuple(pairs))


def build_strategy(kind: str, body: dict, legal: LegalConfigSet):
    kind = kind.lower()
    if kind == "none":
        return NoAdaptation()
    if kind == "sbt":
        return SchedulerThrottling(extended=bool(body.get("extended", False)))
    if kind == "cr":
        return CellReconfiguration(legal, _number(body.get("dwell_s", DEFAULT_DWELL_S), "strategy.dwell_s"))
    raise ConfigError(f"strategy.kind must be one of {STRATEGY_KINDS}, got {kind!r}")


_STRATEGY_FIELDS = {"kind", "extended", "dwell_s", "legal_configs", "legal_bandwidths_mhz", "legal_layers"}
_TRACE_FIELDS = {"units", "step_s", "k_coeff", "alpha_coeff", "default_gas_db_per_km",
                 "t_column", "rain_column", "gas_column", "rain_mm_h_column"}


def build_schema(body: dict) -> tuple[TraceSchema, float]:
    kw: dict[str, Any] = {}
    if "units" in body:
        kw["units"] = body["units"]
    for src, dst in (("k_coeff", "k_coeff"), ("alpha_coeff", "alpha_coeff"), ("default_gas_db_per_km", "default_gas")):
        if src in body:
            kw[dst] = _number(body[src], f"trace.{src}")
    for src, dst in (("t_column", "t"), ("rain_column", "rain_db_per_km"), ("gas_column", "gas_db_per_km"),
                     ("rain_mm_h_column", "rain_mm_h")):
        if src in body:
            kw[dst] = body[src]
    step = _number(body.get("step_s", 1.0), "trace.step_s")
    if step <= 0:
        raise ConfigError(f"trace.step_s must be > 0, got {step}")
    return TraceSchema(**kw), step


def parse_config(doc: dict) -> LoadedConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = {k for k in doc if not k.startswith("_")} - {"cell", "split", "beamformer", "link", "strategy", "trace"}
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    try:
        cell = build_cell(_section(doc, "cell", _CELL_FIELDS))
        split = build_split(_section(doc, "split", {"split_point", "coding_factor", "f_rm", "f_ofdm"}, required=False))
        bf = build_beamformer(_section(
            doc, "beamformer", {"kind", "n_ant", "b_ps", "n_fe", "n_rfc", "b_w", "switch_period_s"}))
        link = build_link(_section(
            doc, "link", {"eirp_dbm", "rx_gain_dbi", "fspl_db", "distance_km", "noise_figure_db",
                          "bandwidths_mhz", "modulations", "se_factor", "include_16qam"}, required=False))
        strat = _section(doc, "strategy", _STRATEGY_FIELDS, required=False)
        legal = build_legal_set(cell, strat)
        strategy = build_strategy(str(strat.get("kind", "sbt")), strat, legal)
        schema, step = build_schema(_section(doc, "trace", _TRACE_FIELDS, required=False))
    except ConfigError:
        raise
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid value: {exc}") from None
    scenario = ScenarioConfig(cell, split, bf, link, strategy)
    return LoadedConfig(scenario, legal, schema, step, doc)


def load_config(path: str | Path) -> LoadedConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    return parse_config(doc)
