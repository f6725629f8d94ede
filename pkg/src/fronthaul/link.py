"""Wireless fronthaul link budget and adaptive (bandwidth, modulation) selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import InvalidParameterError

THERMAL_NOISE_DBM_HZ = -174.0


@dataclass(frozen=True)
class Modulation:
    name: str
    bits_per_symbol: int
    min_snr_db: float


# Thresholds are calibrated so that, under the D-band budget below, a deepening
# fade steps 27.2 -> 20.4 -> 13.6 Gbps. This needs the 256QAM threshold to sit
# less than 3.01 dB above 64QAM, otherwise halving the carrier never wins.
DEFAULT_MODULATIONS = (
    Modulation("QPSK", 2, 10.0),
    Modulation("64QAM", 6, 26.0),
    Modulation("256QAM", 8, 28.0),
)
OPTIONAL_16QAM = Modulation("16QAM", 4, 17.0)


@dataclass(frozen=True)
class FronthaulLink:
    """Link budget constants plus the adaptation table.

    ``se_factor`` converts Hz x modulation bits into bit/s; it bundles
    polarization reuse and coding efficiency.
    """

    eirp_dbm: float = 65.0
    rx_gain_dbi: float = 42.0
    fspl_db: float = 137.0
    distance_km: float = 1.0
    noise_figure_db: float = 7.0
    bandwidths_mhz: tuple[float, ...] = (250.0, 500.0, 1000.0, 2000.0)
    modulations: tuple[Modulation, ...] = DEFAULT_MODULATIONS
    se_factor: float = 1.7
    _modes: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "bandwidths_mhz", tuple(float(b) for b in self.bandwidths_mhz))
        mods = tuple(m if isinstance(m, Modulation) else Modulation(*m) for m in self.modulations)
        object.__setattr__(self, "modulations", mods)
        if self.distance_km <= 0:
            raise InvalidParameterError(f"distance_km must be > 0, got {self.distance_km}")
        if not self.bandwidths_mhz:
            raise InvalidParameterError("bandwidths_mhz must not be empty")
        if any(b <= 0 for b in self.bandwidths_mhz) or any(
            a >= b for a, b in zip(self.bandwidths_mhz, self.bandwidths_mhz[1:])
        ):
            raise InvalidParameterError("bandwidths_mhz must be positive and strictly increasing")
        if not mods:
            raise InvalidParameterError("modulations must not be empty")
        for a, b in zip(mods, mods[1:]):
            if a.bits_per_symbol >= b.bits_per_symbol or a.min_snr_db >= b.min_snr_db:
                raise InvalidParameterError(
                    "modulations must have strictly increasing bits_per_symbol and min_snr_db"
                )
        if mods[0].bits_per_symbol <= 0:
            raise InvalidParameterError("bits_per_symbol must be > 0")
        if self.se_factor <= 0:
            raise InvalidParameterError(f"se_factor must be > 0, got {self.se_factor}")
        # (bw, mod, capacity) sorted by capacity, then bandwidth, descending
        modes = sorted(
            ((bw, mod, self.capacity(bw, mod)) for bw in self.bandwidths_mhz for mod in mods),
            key=lambda m: (m[2], m[0]),
            reverse=True,
        )
        object.__setattr__(self, "_modes", tuple(modes))

    def capacity(self, bw_mhz: float, mod: Modulation) -> float:
        return bw_mhz * 1e6 * mod.bits_per_symbol * self.se_factor

    @property
    def modes(self) -> tuple[tuple[float, Modulation, float], ...]:
        """Every (bandwidth, modulation, capacity) entry, best first."""
        return self._modes

    def capacity_levels(self) -> list[float]:
        """Distinct reachable capacities, descending (outage excluded)."""
        return sorted({c for _, _, c in self._modes}, reverse=True)


def with_16qam(link: FronthaulLink) -> FronthaulLink:
    """Return a copy of ``link`` whose table also offers 16QAM."""
    mods = sorted(link.modulations + (OPTIONAL_16QAM,), key=lambda m: m.bits_per_symbol)
    return replace(link, modulations=tuple(mods))


@dataclass(frozen=True)
class AttenuationSample:
    t: float
    rain_db_per_km: float
    gas_db_per_km: float = 3.0

    def __post_init__(self) -> None:
        if not (self.rain_db_per_km >= 0 and self.gas_db_per_km >= 0):
            raise InvalidParameterError(
                f"attenuation must be >= 0 at t={self.t} "
                f"(rain={self.rain_db_per_km}, gas={self.gas_db_per_km})"
            )


@dataclass(frozen=True)
class LinkMode:
    bw_mhz: float | None
    modulation: Modulation | None
    capacity_bps: float

    @property
    def outage(self) -> bool:
        return self.modulation is None


OUTAGE = LinkMode(None, None, 0.0)


def path_attenuation_db(link: FronthaulLink, sample: AttenuationSample, path_total: bool = False) -> float:
    """Excess loss along the link; ``path_total`` means the sample already holds dB totals."""
    total = sample.rain_db_per_km + sample.gas_db_per_km
    return total if path_total else total * link.distance_km


def noise_power_dbm(link: FronthaulLink, bw_mhz: float) -> float:
    return THERMAL_NOISE_DBM_HZ + 10 * math.log10(bw_mhz * 1e6) + link.noise_figure_db


def snr_db(link: FronthaulLink, sample: AttenuationSample, bw_mhz: float, path_total: bool = False) -> float:
    if bw_mhz not in link.bandwidths_mhz:
        raise InvalidParameterError(f"bandwidth {bw_mhz} MHz is not in the link table {link.bandwidths_mhz}")
    received = link.eirp_dbm + link.rx_gain_dbi - link.fspl_db - path_attenuation_db(link, sample, path_total)
    return received - noise_power_dbm(link, bw_mhz)


def select_link_mode(link: FronthaulLink, sample: AttenuationSample, path_total: bool = False) -> LinkMode:
    """Highest-capacity feasible (bandwidth, modulation) pair, or outage.

    Equal capacities resolve toward the wider carrier.
    """
    snrs = {bw: snr_db(link, sample, bw, path_total) for bw in link.bandwidths_mhz}
    for bw, mod, cap in link.modes:
        if snrs[bw] >= mod.min_snr_db:
            return LinkMode(bw, mod, cap)
    return OUTAGE


def rain_specific_attenuation(rain_rate_mm_h: float, k_coeff: float, alpha_coeff: float) -> float:
    """Power-law specific rain attenuation k * R**alpha in dB/km."""
    if rain_rate_mm_h < 0:
        raise InvalidParameterError(f"rain rate must be >= 0, got {rain_rate_mm_h}")
    if k_coeff <= 0 or alpha_coeff <= 0:
        raise InvalidParameterError("k_coeff and alpha_coeff must be > 0")
    return k_coeff * rain_rate_mm_h**alpha_coeff
