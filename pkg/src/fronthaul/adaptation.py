"""Countermeasures that shrink the required fronthaul rate to the link capacity.

Cell Reconfiguration (CR) switches between a few legal (n_rb, n_mimo) cell
configurations and is slow to move back up. Scheduler-Based Throttling (SBT)
masks resource blocks (and optionally layers) at single-RB granularity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

from .errors import InvalidParameterError
from .rates import (
    BeamformerConfig,
    CellConfig,
    SplitChain,
    access_capacity,
    analog_control_rate,
    digital_control_rate,
    radio_access_rate,
    rb_count,
    total_fh_rate,
)

DEFAULT_DWELL_S = 300.0


@dataclass(frozen=True)
class ThrottleState:
    active_rb: int
    active_layers: int

    @property
    def units(self) -> int:
        return self.active_rb * self.active_layers


@dataclass(frozen=True)
class AdaptationDecision:
    """One timestep of an adaptation run.

    ``active_rb``/``active_layers`` hold the chosen cell configuration for CR
    and the scheduled share of the grid for SBT. ``last_reconfig_t`` is the
    time of the most recent configuration change, None if there was none.
    """

    t: float
    strategy: str
    active_rb: int
    active_layers: int
    required_fh_bps: float
    access_capacity_bps: float
    capacity_bps: float
    outage: bool
    reconfigured: bool = False
    last_reconfig_t: float | None = None

    @property
    def state(self) -> ThrottleState:
        return ThrottleState(self.active_rb, self.active_layers)


def _outage(t: float, strategy: str, capacity_bps: float, **kw) -> AdaptationDecision:
    return AdaptationDecision(t, strategy, 0, 0, 0.0, 0.0, capacity_bps, True, **kw)


# --- Cell Reconfiguration -------------------------------------------------


def reconfigure(cfg: CellConfig, n_rb: int, n_mimo: int) -> CellConfig:
    """Cell with a new downlink (n_rb, n_mimo).

    A TDD uplink shares the carrier, so it is clipped to the new values; an FDD
    uplink sits on its own carrier and is left untouched.
    """
    uplink = cfg.uplink
    if uplink is not None and cfg.duplex == "tdd":
        uplink = uplink.with_resources(min(uplink.n_rb, n_rb), min(uplink.n_mimo, n_mimo))
    return replace(cfg, n_rb=n_rb, n_mimo=n_mimo, uplink=uplink)


@dataclass(frozen=True)
class LegalConfigSet:
    base: CellConfig
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple(dict.fromkeys((int(r), int(m)) for r, m in self.pairs))
        if not pairs:
            raise InvalidParameterError("legal configuration set must not be empty")
        if any(r < 0 or m < 0 for r, m in pairs):
            raise InvalidParameterError("legal configurations need non-negative n_rb and n_mimo")
        full = (max(r for r, _ in pairs), max(m for _, m in pairs))
        if full not in pairs:
            raise InvalidParameterError(
                f"legal configuration set must contain the full configuration {full}"
            )
        object.__setattr__(self, "pairs", pairs)

    @property
    def full(self) -> tuple[int, int]:
        return max(r for r, _ in self.pairs), max(m for _, m in self.pairs)

    def cell(self, pair: tuple[int, int]) -> CellConfig:
        return reconfigure(self.base, *pair)

    @classmethod
    def from_bandwidths(cls, base: CellConfig, bandwidths_mhz, layers, table=None) -> LegalConfigSet:
        """Cartesian product of channel bandwidths (mapped to RBs) and layer counts."""
        scs = base.scs_khz
        if scs is None:
            raise InvalidParameterError("mapping bandwidths to RBs needs base.scs_khz")
        pairs = [(rb_count(bw, scs, table), int(m)) for bw in bandwidths_mhz for m in layers]
        return cls(base, tuple(sorted(set(pairs), reverse=True)))


@dataclass(frozen=True)
class _Candidate:
    pair: tuple[int, int]
    required_bps: float
    access_bps: float


@lru_cache(maxsize=64)
def _cr_candidates(legal: LegalConfigSet, chain: SplitChain, bf: BeamformerConfig) -> tuple[_Candidate, ...]:
    cands = []
    for pair in legal.pairs:
        cell = legal.cell(pair)
        cands.append(_Candidate(pair, total_fh_rate(cell, chain, bf).total_bps, access_capacity(cell)))
    # best access first; ties keep layers, then bandwidth
    cands.sort(key=lambda c: (c.access_bps, c.pair[1], c.pair[0]), reverse=True)
    return tuple(cands)


def cr_decide(
    legal: LegalConfigSet,
    chain: SplitChain,
    bf: BeamformerConfig,
    capacity_bps: float,
    prev: AdaptationDecision | None = None,
    dwell_s: float = DEFAULT_DWELL_S,
    t: float = 0.0,
) -> AdaptationDecision:
    """Pick the legal configuration with the best access capacity that fits.

    Within ``dwell_s`` of the last reconfiguration the previous configuration
    is kept as long as it still fits; a capacity violation downgrades at once.
    Leaving an outage is always immediate.
    """
    if dwell_s < 0:
        raise InvalidParameterError(f"dwell_s must be >= 0, got {dwell_s}")
    cands = _cr_candidates(legal, chain, bf)
    chosen = next((c for c in cands if c.required_bps <= capacity_bps), None)

    if prev is not None and not prev.outage and prev.last_reconfig_t is not None:
        if t - prev.last_reconfig_t < dwell_s:
            held = None
            for c in cands:
                if c.pair == (prev.active_rb, prev.active_layers):
                    held = c
                    break
            if held is not None and held.required_bps <= capacity_bps:
                chosen = held

    if prev is None:
        reconfigured, last = False, None
    else:
        prev_pair = None if prev.outage else (prev.active_rb, prev.active_layers)
        new_pair = None if chosen is None else chosen.pair
        reconfigured = prev_pair != new_pair
        last = t if reconfigured else prev.last_reconfig_t

    if chosen is None:
        return _outage(t, "cr", capacity_bps, reconfigured=reconfigured, last_reconfig_t=last)
    return AdaptationDecision(
        t, "cr", chosen.pair[0], chosen.pair[1], chosen.required_bps, chosen.access_bps,
        capacity_bps, False, reconfigured, last,
    )


# --- Scheduler-Based Throttling -------------------------------------------


@dataclass(frozen=True)
class _ThrottleModel:
    """Rate model of a cell whose grid is partially masked.

    Radio rate and digital beamforming weights shrink with the scheduled
    RB x layer share; analog phase coefficients do not.
    """

    n_rb: int
    n_mimo: int
    fixed_bps: float
    scalable_bps: float
    access_bps: float

    @classmethod
    def of(cls, cfg: CellConfig, chain: SplitChain, bf: BeamformerConfig) -> _ThrottleModel:
        scalable = radio_access_rate(cfg, chain) + digital_control_rate(bf, cfg)
        return cls(cfg.n_rb, cfg.n_mimo, analog_control_rate(bf, cfg), scalable, access_capacity(cfg))

    @property
    def total_units(self) -> int:
        return self.n_rb * self.n_mimo

    def _share(self, value: float, units: int) -> float:
        if units == self.total_units:
            return value
        return value * units / self.total_units

    def required(self, rb: int, layers: int) -> float:
        return self.fixed_bps + self._share(self.scalable_bps, rb * layers)

    def access(self, rb: int, layers: int) -> float:
        return self._share(self.access_bps, rb * layers)

    def max_rb(self, layers: int, capacity_bps: float) -> int:
        """Largest RB count that fits with ``layers`` active; -1 if none does."""
        if self.fixed_bps > capacity_bps:
            return -1
        if layers == 0 or self.required(self.n_rb, layers) <= capacity_bps:
            return self.n_rb
        per_rb = self.scalable_bps * layers / self.total_units
        rb = min(self.n_rb, max(0, math.floor((capacity_bps - self.fixed_bps) / per_rb)))
        # the closed form can be off by one ulp-sized step either way
        while rb < self.n_rb and self.required(rb + 1, layers) <= capacity_bps:
            rb += 1
        while rb >= 0 and self.required(rb, layers) > capacity_bps:
            rb -= 1
        return rb


@lru_cache(maxsize=64)
def _throttle_model(cfg: CellConfig, chain: SplitChain, bf: BeamformerConfig) -> _ThrottleModel:
    return _ThrottleModel.of(cfg, chain, bf)


def throttled_rate(cfg: CellConfig, chain: SplitChain, bf: BeamformerConfig, state: ThrottleState) -> float:
    """Fronthaul rate required when only ``state`` of the grid is scheduled."""
    return _throttle_model(cfg, chain, bf).required(state.active_rb, state.active_layers)


def _sbt_decision(model: _ThrottleModel, state: ThrottleState | None, capacity_bps: float, t: float):
    if state is None or state.units == 0:
        return _outage(t, "sbt", capacity_bps)
    return AdaptationDecision(
        t, "sbt", state.active_rb, state.active_layers,
        model.required(state.active_rb, state.active_layers),
        model.access(state.active_rb, state.active_layers),
        capacity_bps, False,
    )


def sbt_decide(
    cfg: CellConfig,
    chain: SplitChain,
    bf: BeamformerConfig,
    capacity_bps: float,
    extended: bool = False,
    t: float = 0.0,
) -> AdaptationDecision:
    """Schedule as many RBs as the capacity allows.

    By default all layers stay active and only RBs are masked. ``extended``
    also searches over the active layer count; equal RB x layer products
    prefer more layers. Zero scheduled resources counts as outage.
    """
    model = _throttle_model(cfg, chain, bf)
    layer_options = range(cfg.n_mimo, 0, -1) if extended else (cfg.n_mimo,)
    best: ThrottleState | None = None
    for layers in layer_options:
        rb = model.max_rb(layers, capacity_bps)
        if rb < 0:
            continue
        state = ThrottleState(rb, layers)
        if best is None or state.units > best.units:
            best = state
    return _sbt_decision(model, best, capacity_bps, t)


def sbt_oracle(
    cfg: CellConfig,
    chain: SplitChain,
    bf: BeamformerConfig,
    capacity_bps: float,
    extended: bool = False,
) -> ThrottleState | None:
    """Exhaustive search counterpart of :func:`sbt_decide`; None means nothing fits."""
    layer_options = range(0, cfg.n_mimo + 1) if extended else (cfg.n_mimo,)
    best = None
    best_key = None
    for layers in layer_options:
        for rb in range(cfg.n_rb + 1):
            state = ThrottleState(rb, layers)
            if throttled_rate(cfg, chain, bf, state) > capacity_bps:
                continue
            key = (state.units, layers, rb)
            if best_key is None or key > best_key:
                best, best_key = state, key
    return best


# --- No adaptation --------------------------------------------------------


def no_adaptation_decide(
    cfg: CellConfig, chain: SplitChain, bf: BeamformerConfig, capacity_bps: float, t: float = 0.0
) -> AdaptationDecision:
    """Baseline: the full cell runs if it fits, otherwise the cell drops."""
    rates = total_fh_rate(cfg, chain, bf)
    if rates.total_bps > capacity_bps or cfg.n_rb * cfg.n_mimo == 0:
        return _outage(t, "none", capacity_bps)
    return AdaptationDecision(
        t, "none", cfg.n_rb, cfg.n_mimo, rates.total_bps, access_capacity(cfg), capacity_bps, False
    )
