"""Time-stepped replay of an attenuation trace through an adaptation strategy."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

from .adaptation import (
    DEFAULT_DWELL_S,
    AdaptationDecision,
    LegalConfigSet,
    cr_decide,
    no_adaptation_decide,
    sbt_decide,
)
from .errors import InvalidParameterError, TraceValidationError
from .link import AttenuationSample, FronthaulLink, LinkMode, select_link_mode
from .rates import BeamformerConfig, CellConfig, SplitChain
from .traces import Trace


@dataclass(frozen=True)
class NoAdaptation:
    name: str = "none"


@dataclass(frozen=True)
class CellReconfiguration:
    legal: LegalConfigSet
    dwell_s: float = DEFAULT_DWELL_S
    name: str = "cr"

    def __post_init__(self) -> None:
        if self.dwell_s < 0:
            raise InvalidParameterError(f"dwell_s must be >= 0, got {self.dwell_s}")


@dataclass(frozen=True)
class SchedulerThrottling:
    extended: bool = False
    name: str = "sbt"


Strategy = Union[NoAdaptation, CellReconfiguration, SchedulerThrottling]


@dataclass(frozen=True)
class ScenarioConfig:
    cell: CellConfig
    chain: SplitChain
    beamformer: BeamformerConfig
    link: FronthaulLink
    strategy: Strategy = field(default_factory=SchedulerThrottling)
    trace: Trace | None = None

    def with_strategy(self, strategy: Strategy) -> ScenarioConfig:
        return ScenarioConfig(self.cell, self.chain, self.beamformer, self.link, strategy, self.trace)


@dataclass(frozen=True)
class SimulationReport:
    """Decision log and aggregate statistics of one run.

    The availability tables map a level (bit/s) to the fraction of samples
    spent at it; outage steps land on level 0.
    """

    strategy: str
    decisions: tuple[AdaptationDecision, ...]
    utilization: tuple[float, ...]
    availability: dict[float, float]
    access_availability: dict[float, float]
    capacity_availability: dict[float, float]
    outage_fraction: float
    mean_access_bps: float
    min_access_bps: float
    min_rate_bps: float
    reconfigurations: int
    step_s: float

    def cumulative_availability(self) -> list[tuple[float, float]]:
        """(rate, fraction of time the required rate is at least that level), descending."""
        acc, rows = 0.0, []
        for level in sorted(self.availability, reverse=True):
            acc += self.availability[level]
            rows.append((level, acc))
        return rows


@lru_cache(maxsize=4096)
def _link_mode(link: FronthaulLink, rain: float, gas: float, path_total: bool) -> LinkMode:
    return select_link_mode(link, AttenuationSample(0.0, rain, gas), path_total)


def _shares(values: Sequence[float]) -> dict[float, float]:
    n = len(values)
    return {level: count / n for level, count in sorted(Counter(values).items(), reverse=True)}


def decide(scenario: ScenarioConfig, strategy: Strategy, capacity_bps: float, t: float,
           prev: AdaptationDecision | None) -> AdaptationDecision:
    if isinstance(strategy, SchedulerThrottling):
        return sbt_decide(scenario.cell, scenario.chain, scenario.beamformer, capacity_bps,
                          extended=strategy.extended, t=t)
    if isinstance(strategy, CellReconfiguration):
        return cr_decide(strategy.legal, scenario.chain, scenario.beamformer, capacity_bps,
                         prev=prev, dwell_s=strategy.dwell_s, t=t)
    if isinstance(strategy, NoAdaptation):
        return no_adaptation_decide(scenario.cell, scenario.chain, scenario.beamformer, capacity_bps, t=t)
    raise InvalidParameterError(f"unknown strategy {strategy!r}")


def _full_units(scenario: ScenarioConfig, strategy: Strategy) -> int:
    if isinstance(strategy, CellReconfiguration):
        rb, layers = strategy.legal.full
    else:
        rb, layers = scenario.cell.n_rb, scenario.cell.n_mimo
    return rb * layers


def run(scenario: ScenarioConfig, trace: Trace | None = None) -> SimulationReport:
    """Replay ``trace`` (or ``scenario.trace``) one sample at a time."""
    trace = trace if trace is not None else scenario.trace
    if trace is None or len(trace) == 0:
        raise TraceValidationError("simulation needs a non-empty trace")
    strategy = scenario.strategy
    full_units = _full_units(scenario, strategy)

    decisions: list[AdaptationDecision] = []
    prev = None
    for sample in trace.samples:
        mode = _link_mode(scenario.link, sample.rain_db_per_km, sample.gas_db_per_km, trace.path_total)
        prev = decide(scenario, strategy, mode.capacity_bps, sample.t, prev)
        decisions.append(prev)

    utilization = tuple(
        0.0 if d.outage or full_units == 0 else d.active_rb * d.active_layers / full_units
        for d in decisions
    )
    served = [d for d in decisions if not d.outage]
    n = len(decisions)
    return SimulationReport(
        strategy=strategy.name,
        decisions=tuple(decisions),
        utilization=utilization,
        availability=_shares([d.required_fh_bps for d in decisions]),
        access_availability=_shares([d.access_capacity_bps for d in decisions]),
        capacity_availability=_shares([d.capacity_bps for d in decisions]),
        outage_fraction=(n - len(served)) / n,
        mean_access_bps=sum(d.access_capacity_bps for d in decisions) / n,
        min_access_bps=min((d.access_capacity_bps for d in served), default=0.0),
        min_rate_bps=min((d.required_fh_bps for d in served), default=0.0),
        reconfigurations=sum(d.reconfigured for d in decisions),
        step_s=trace.step_s,
    )


@dataclass(frozen=True)
class StrategySummary:
    strategy: str
    mean_access_bps: float
    min_access_bps: float
    outage_fraction: float
    reconfigurations: int
    mean_utilization: float


def summarize(report: SimulationReport) -> StrategySummary:
    return StrategySummary(
        report.strategy,
        report.mean_access_bps,
        report.min_access_bps,
        report.outage_fraction,
        report.reconfigurations,
        sum(report.utilization) / len(report.utilization),
    )


def compare_strategies(scenario: ScenarioConfig, strategies: Sequence[Strategy],
                       trace: Trace | None = None) -> list[StrategySummary]:
    """Run the same trace under each strategy, one summary row per strategy."""
    if len(strategies) < 2:
        raise InvalidParameterError("comparison needs at least two strategies")
    return [summarize(run(scenario.with_strategy(s), trace)) for s in strategies]
