"""Fronthaul rate and cell capacity formulas.

Everything here is a pure function of frozen dataclasses. Rates are in bit/s,
durations in seconds. Counts are integers, so the only rounding comes from
dividing by the symbol duration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import InvalidParameterError

SUPPORTED_SCS_KHZ = (15, 30, 60, 120, 240)
SUPPORTED_QM = (2, 4, 6, 8, 10)
SYMBOLS_PER_SLOT = 14

# Maximum transmission bandwidth configuration N_RB, keyed by (SCS kHz, channel
# bandwidth MHz). 15/30 kHz from TS 38.101-1 Table 5.3.2-1 (FR1), 60/120 kHz from
# TS 38.101-2 Table 5.3.2-1 (FR2). Pass a custom table for FR1 at 60 kHz.
NR_RB_TABLE: dict[tuple[int, int], int] = {
    (15, 5): 25, (15, 10): 52, (15, 15): 79, (15, 20): 106, (15, 25): 133,
    (15, 30): 160, (15, 40): 216, (15, 50): 270,
    (30, 5): 11, (30, 10): 24, (30, 15): 38, (30, 20): 51, (30, 25): 65,
    (30, 30): 78, (30, 40): 106, (30, 50): 133, (30, 60): 162, (30, 70): 189,
    (30, 80): 217, (30, 90): 245, (30, 100): 273,
    (60, 50): 66, (60, 100): 132, (60, 200): 264,
    (120, 50): 32, (120, 100): 66, (120, 200): 132, (120, 400): 264,
}


def symbol_duration(scs_khz: float) -> float:
    """OFDM symbol duration with normal cyclic prefix for a numerology.

    A slot lasts 1 ms / 2**mu and holds 14 symbols, with mu = log2(scs / 15).
    """
    if scs_khz not in SUPPORTED_SCS_KHZ:
        raise InvalidParameterError(
            f"unsupported subcarrier spacing {scs_khz} kHz; expected one of {SUPPORTED_SCS_KHZ}"
        )
    mu = round(math.log2(scs_khz / 15))
    slot_s = 1e-3 / 2**mu
    return slot_s / SYMBOLS_PER_SLOT


def rb_count(bandwidth_mhz: float, scs_khz: float, table: dict | None = None) -> int:
    """Number of resource blocks for a channel bandwidth and numerology."""
    table = NR_RB_TABLE if table is None else table
    try:
        return table[(int(scs_khz), int(bandwidth_mhz))]
    except KeyError:
        raise InvalidParameterError(
            f"no RB count for {bandwidth_mhz} MHz at {scs_khz} kHz SCS"
        ) from None


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise InvalidParameterError(message)


@dataclass(frozen=True)
class CellConfig:
    """Radio-access cell parameters.

    ``t_s`` is derived from ``scs_khz`` when omitted. ``duplex`` is ``"tdd"``
    (with ``f_tdd_dl`` the downlink share of resources) or ``"fdd"``. ``uplink``
    optionally describes the uplink carrier; FDD needs it to size the fronthaul.
    """

    n_rb: int
    n_mimo: int
    q_m: int = 8
    n_iq: int = 16
    n_sc: int = 12
    scs_khz: float | None = 120
    t_s: float | None = None
    r_max: float = 948 / 1024
    oh: float = 0.18
    duplex: str = "tdd"
    f_tdd_dl: float = 1.0
    uplink: CellConfig | None = None

    def __post_init__(self) -> None:
        if self.t_s is None:
            _require(self.scs_khz is not None, "either t_s or scs_khz must be given")
            object.__setattr__(self, "t_s", symbol_duration(self.scs_khz))
        elif self.scs_khz is not None:
            expected = symbol_duration(self.scs_khz)
            # symbol times are commonly written with 5 significant digits
            _require(
                math.isclose(self.t_s, expected, rel_tol=1e-4),
                f"t_s={self.t_s} is inconsistent with scs_khz={self.scs_khz} (expected {expected:.6g})",
            )
        self.validate()

    def validate(self) -> None:
        for name in ("n_rb", "n_mimo", "n_sc", "q_m", "n_iq"):
            value = getattr(self, name)
            _require(isinstance(value, int) and not isinstance(value, bool),
                     f"{name} must be an integer, got {value!r}")
        _require(self.n_rb >= 0, f"n_rb must be >= 0, got {self.n_rb}")
        _require(self.n_sc >= 1, f"n_sc must be >= 1, got {self.n_sc}")
        _require(self.n_mimo >= 0, f"n_mimo must be >= 0, got {self.n_mimo}")
        _require(self.q_m in SUPPORTED_QM,
                 f"q_m must be one of {SUPPORTED_QM} bits per symbol, got {self.q_m}")
        _require(self.n_iq >= self.q_m, f"n_iq ({self.n_iq}) must be >= q_m ({self.q_m})")
        _require(self.t_s > 0, f"t_s must be > 0, got {self.t_s}")
        _require(0 < self.r_max <= 1, f"r_max must be in (0, 1], got {self.r_max}")
        _require(0 <= self.oh < 1, f"oh must be in [0, 1), got {self.oh}")
        _require(self.duplex in ("tdd", "fdd"), f"duplex must be 'tdd' or 'fdd', got {self.duplex!r}")
        _require(0 < self.f_tdd_dl <= 1, f"f_tdd_dl must be in (0, 1], got {self.f_tdd_dl}")

    @property
    def resource_elements(self) -> int:
        return self.n_rb * self.n_sc

    def with_resources(self, n_rb: int, n_mimo: int) -> CellConfig:
        return replace(self, n_rb=n_rb, n_mimo=n_mimo)


class SplitPoint(str, Enum):
    SPLIT_ID = "I_D"  # 3GPP option 7-3, codewords
    SPLIT_IID = "II_D"  # 3GPP option 7-2, antenna symbols
    BELOW_IID = "below_II_D"  # option 7-1 / 8-like, after OFDM


# Downlink blocks that change the payload size, top (MAC) to bottom (RF).
# Each split point sits after the listed number of blocks.
BLOCK_ORDER = ("coding", "rate_matching", "modulation", "ofdm")
_SPLIT_DEPTH = {
    "mac": 0,
    SplitPoint.SPLIT_ID: 2,
    SplitPoint.SPLIT_IID: 3,
    SplitPoint.BELOW_IID: 4,
}


@dataclass(frozen=True)
class SplitChain:
    split_point: SplitPoint = SplitPoint.SPLIT_IID
    coding_factor: float = 1.0
    f_rm: float = 1.0
    f_ofdm: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "split_point", SplitPoint(self.split_point))
        _require(self.coding_factor >= 1, f"coding_factor must be >= 1, got {self.coding_factor}")
        _require(self.f_rm > 0, f"f_rm must be > 0, got {self.f_rm}")
        _require(self.f_ofdm >= 1, f"f_ofdm must be >= 1, got {self.f_ofdm}")


def chain_factors(cfg: CellConfig, chain: SplitChain) -> list[tuple[str, float]]:
    """Payload multiplicative factor of every block, in top-to-bottom order."""
    return [
        ("coding", chain.coding_factor),
        ("rate_matching", chain.f_rm),
        ("modulation", cfg.n_iq / cfg.q_m),
        ("ofdm", chain.f_ofdm),
    ]


def payload_factor(cfg: CellConfig, chain: SplitChain, src, dst) -> float:
    """Size ratio of the payload at ``dst`` relative to ``src``.

    ``src``/``dst`` are split points or ``"mac"``. Crossing a block downward
    multiplies by its factor, crossing upward divides.
    """
    lo, hi = _SPLIT_DEPTH[_point(src)], _SPLIT_DEPTH[_point(dst)]
    factors = [f for _, f in chain_factors(cfg, chain)]
    ratio = 1.0
    if hi >= lo:
        for f in factors[lo:hi]:
            ratio *= f
    else:
        for f in factors[hi:lo]:
            ratio /= f
    return ratio


def _point(p):
    return p if p == "mac" else SplitPoint(p)


def fh_rate_split_iid(cfg: CellConfig) -> float:
    """Antenna-symbol split: one N_IQ-bit IQ sample per RE, layer and symbol."""
    return cfg.n_rb * cfg.n_sc * cfg.n_mimo * cfg.n_iq / cfg.t_s


def fh_rate_split_id(cfg: CellConfig) -> float:
    """Codeword split: Q_M bits per RE, layer and symbol."""
    return cfg.n_rb * cfg.n_sc * cfg.n_mimo * cfg.q_m / cfg.t_s


def fh_rate_generic(cfg: CellConfig, chain: SplitChain) -> float:
    """Radio-access fronthaul rate at the chain's split point (one direction)."""
    if chain.split_point is SplitPoint.SPLIT_ID:
        return fh_rate_split_id(cfg)
    if chain.split_point is SplitPoint.SPLIT_IID:
        return fh_rate_split_iid(cfg)
    return fh_rate_split_iid(cfg) * chain.f_ofdm


class BeamformKind(str, Enum):
    ANALOG = "analog"
    DIGITAL = "digital"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class BeamformerConfig:
    """Beamformer control-data parameters.

    ``n_fe`` defaults to the cell's RB count. ``switch_period_s`` defaults to
    the symbol duration, the most demanding (and most conservative) choice.
    """

    kind: BeamformKind = BeamformKind.ANALOG
    n_ant: int = 0
    b_ps: int = 0
    n_fe: int | None = None
    n_rfc: int = 0
    b_w: int = 0
    switch_period_s: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", BeamformKind(self.kind))
        for name in ("n_ant", "b_ps", "n_rfc", "b_w"):
            _require(getattr(self, name) >= 0, f"{name} must be >= 0")
        _require(self.n_fe is None or self.n_fe >= 0, "n_fe must be >= 0")
        _require(self.switch_period_s is None or self.switch_period_s > 0,
                 "switch_period_s must be > 0")
        if self.has_analog:
            _require(self.b_ps >= 1, f"{self.kind.value} beamforming needs b_ps >= 1")
        if self.has_digital:
            _require(self.n_rfc >= 1, f"{self.kind.value} beamforming needs n_rfc >= 1")
            _require(self.b_w >= 1, f"{self.kind.value} beamforming needs b_w >= 1")
            _require(self.n_fe is None or self.n_fe >= 1,
                     f"{self.kind.value} beamforming needs n_fe >= 1")

    @property
    def has_analog(self) -> bool:
        return self.kind in (BeamformKind.ANALOG, BeamformKind.HYBRID)

    @property
    def has_digital(self) -> bool:
        return self.kind in (BeamformKind.DIGITAL, BeamformKind.HYBRID)


def _switch_period(bf: BeamformerConfig, cfg: CellConfig) -> float:
    return cfg.t_s if bf.switch_period_s is None else bf.switch_period_s


def analog_control_rate(bf: BeamformerConfig, cfg: CellConfig) -> float:
    """One b_PS-bit phase coefficient per antenna element per switch period."""
    if not bf.has_analog:
        return 0.0
    return bf.n_ant * bf.b_ps / _switch_period(bf, cfg)


def digital_control_rate(bf: BeamformerConfig, cfg: CellConfig) -> float:
    """Precoding weights per frequency element, layer and RF chain."""
    if not bf.has_digital:
        return 0.0
    n_fe = cfg.n_rb if bf.n_fe is None else bf.n_fe
    return n_fe * cfg.n_mimo * bf.n_rfc * bf.b_w / _switch_period(bf, cfg)


def bf_control_rate(bf: BeamformerConfig, cfg: CellConfig) -> float:
    return analog_control_rate(bf, cfg) + digital_control_rate(bf, cfg)


@dataclass(frozen=True)
class RateBreakdown:
    radio_access_bps: float
    bf_control_bps: float
    total_bps: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "total_bps", self.radio_access_bps + self.bf_control_bps)


def radio_access_rate(cfg: CellConfig, chain: SplitChain) -> float:
    """Radio-access rate the link must carry after combining both directions.

    TDD links must carry the larger of the two directions, FDD links their sum.
    """
    downlink = fh_rate_generic(cfg, chain)
    if cfg.duplex == "fdd":
        if cfg.uplink is None:
            raise InvalidParameterError("FDD cell requires an uplink configuration")
        return downlink + fh_rate_generic(cfg.uplink, chain)
    if cfg.uplink is None:
        return downlink
    return max(downlink, fh_rate_generic(cfg.uplink, chain))


def total_fh_rate(cfg: CellConfig, chain: SplitChain, bf: BeamformerConfig) -> RateBreakdown:
    return RateBreakdown(radio_access_rate(cfg, chain), bf_control_rate(bf, cfg))


def access_capacity(cfg: CellConfig) -> float:
    """Peak downlink user throughput of the cell.

    Scales the codeword rate by the code rate, the control-channel overhead and,
    for TDD, the downlink share of time.
    """
    efficiency = cfg.r_max * (1 - cfg.oh)
    if cfg.duplex == "tdd":
        efficiency *= cfg.f_tdd_dl
    return fh_rate_split_id(cfg) * efficiency


def reference_cell(**overrides) -> CellConfig:
    """The 200 MHz / 120 kHz / 8-layer TDD mmWave cell used as reference scenario."""
    params = dict(n_rb=132, n_mimo=8, q_m=8, n_iq=16, n_sc=12, scs_khz=120,
                  r_max=948 / 1024, oh=0.18, duplex="tdd", f_tdd_dl=0.8)
    params.update(overrides)
    return CellConfig(**params)


def reference_beamformer() -> BeamformerConfig:
    return BeamformerConfig(kind=BeamformKind.ANALOG, n_ant=1024, b_ps=5)
