"""Attenuation time series: CSV ingestion, resampling and synthetic rain events."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameterError, TraceParseError, TraceValidationError
from .link import AttenuationSample, rain_specific_attenuation
from .numfmt import fmt_number

DEFAULT_GAS_DB_PER_KM = 3.0
DEFAULT_STEP_S = 1.0
# Power-law coefficients for the demo traces. With the default D-band link they
# put the 34 mm/h peak of the triangular event inside the 13.6 Gbps region.
DEFAULT_K_COEFF = 1.14
DEFAULT_ALPHA_COEFF = 0.74

UNITS_SPECIFIC = "specific"  # dB/km, multiplied by the link distance
UNITS_TOTAL = "total"  # dB along the whole path

CSV_COLUMNS = ("t", "rain_db_per_km", "gas_db_per_km")


@dataclass(frozen=True)
class Trace:
    step_s: float
    samples: tuple[AttenuationSample, ...]
    source: str = ""
    units: str = UNITS_SPECIFIC

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", tuple(self.samples))
        if not self.samples:
            raise TraceValidationError("trace is empty")
        if not self.step_s > 0:
            raise TraceValidationError(f"step_s must be > 0, got {self.step_s}")
        if self.units not in (UNITS_SPECIFIC, UNITS_TOTAL):
            raise TraceValidationError(f"units must be {UNITS_SPECIFIC!r} or {UNITS_TOTAL!r}")
        t = self.times()
        if np.any(np.diff(t) <= 0):
            raise TraceValidationError("timestamps must be strictly increasing")
        if len(t) > 1 and not np.allclose(np.diff(t), self.step_s, rtol=0, atol=1e-6 * self.step_s):
            raise TraceValidationError(f"samples are not uniformly spaced at {self.step_s} s")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def path_total(self) -> bool:
        return self.units == UNITS_TOTAL

    @property
    def duration_s(self) -> float:
        return self.samples[-1].t - self.samples[0].t

    def times(self) -> np.ndarray:
        return np.fromiter((s.t for s in self.samples), float, len(self.samples))

    def rain(self) -> np.ndarray:
        return np.fromiter((s.rain_db_per_km for s in self.samples), float, len(self.samples))

    def gas(self) -> np.ndarray:
        return np.fromiter((s.gas_db_per_km for s in self.samples), float, len(self.samples))

    @classmethod
    def from_arrays(cls, t, rain, gas, step_s: float, source: str = "", units: str = UNITS_SPECIFIC) -> Trace:
        gas = np.broadcast_to(np.asarray(gas, float), np.shape(rain))
        samples = [AttenuationSample(float(a), float(b), float(c)) for a, b, c in zip(t, rain, gas)]
        return cls(step_s, tuple(samples), source, units)


@dataclass(frozen=True)
class TraceSchema:
    """Column mapping for :func:`parse_trace`.

    If ``rain_mm_h`` is set, rain is read as a rate and converted with the
    power-law coefficients. A missing gas column falls back to ``default_gas``.
    """

    t: str = "t"
    rain_db_per_km: str | None = "rain_db_per_km"
    gas_db_per_km: str | None = "gas_db_per_km"
    rain_mm_h: str | None = None
    k_coeff: float = DEFAULT_K_COEFF
    alpha_coeff: float = DEFAULT_ALPHA_COEFF
    default_gas: float = DEFAULT_GAS_DB_PER_KM
    units: str = UNITS_SPECIFIC

    @classmethod
    def infer(cls, header: Sequence[str], **overrides) -> TraceSchema:
        cols = set(header)
        kw = {}
        if "rain_db_per_km" not in cols and "rain_mm_h" in cols:
            kw["rain_db_per_km"] = None
            kw["rain_mm_h"] = "rain_mm_h"
        if "gas_db_per_km" not in cols:
            kw["gas_db_per_km"] = None
        kw.update(overrides)
        return cls(**kw)


def _parse_time(text: str) -> float:
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass
    stamp = datetime.fromisoformat(text.replace("Z", "+00:00"))
    return stamp.timestamp()


def _parse_float(text: str, column: str, line: int) -> float:
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise TraceParseError(f"column {column!r}: cannot parse {text!r} as a number", line) from None
    if not math.isfinite(value):
        raise TraceParseError(f"column {column!r}: non-finite value {text!r}", line)
    return value


def parse_trace(
    stream: str | io.TextIOBase | Iterable[str],
    schema: TraceSchema | None = None,
    step_s: float | None = DEFAULT_STEP_S,
    source: str = "",
) -> Trace:
    """Read a CSV attenuation trace and resample it to a uniform step.

    Timestamps may be epoch seconds, plain seconds or ISO-8601; they are stored
    relative to the first row. ``step_s=None`` keeps the native timestamps,
    which must then already be uniform.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        raise TraceValidationError("trace file is empty")
    header = [h.strip() for h in header]
    schema = schema or TraceSchema.infer(header)

    def index(name: str | None, required: bool) -> int | None:
        if name is None:
            return None
        if name not in header:
            if required:
                raise TraceValidationError(f"missing column {name!r} in header {header}")
            return None
        return header.index(name)

    t_idx = index(schema.t, True)
    rain_col = schema.rain_mm_h or schema.rain_db_per_km
    rain_idx = index(rain_col, True) if rain_col else None
    gas_idx = index(schema.gas_db_per_km, False)
    if rain_idx is None and gas_idx is None:
        raise TraceValidationError("trace needs at least one attenuation column")

    times, rain, gas = [], [], []
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise TraceParseError(f"expected {len(header)} fields, got {len(row)}", line)
        try:
            times.append(_parse_time(row[t_idx]))
        except ValueError:
            raise TraceParseError(f"cannot parse timestamp {row[t_idx]!r}", line) from None
        r = 0.0 if rain_idx is None else _parse_float(row[rain_idx], rain_col, line)
        g = schema.default_gas if gas_idx is None else _parse_float(row[gas_idx], schema.gas_db_per_km, line)
        if r < 0 or g < 0:
            raise TraceValidationError(f"line {line}: negative attenuation (rain={r}, gas={g})")
        if schema.rain_mm_h:
            r = rain_specific_attenuation(r, schema.k_coeff, schema.alpha_coeff)
        rain.append(r)
        gas.append(g)

    if not times:
        raise TraceValidationError("trace has no data rows")
    t = np.asarray(times) - times[0]
    if np.any(np.diff(t) <= 0):
        bad = int(np.argmax(np.diff(t) <= 0)) + 1
        raise TraceValidationError(f"timestamps are not strictly increasing at data row {bad + 1}")

    if step_s is None:
        step = float(t[1] - t[0]) if len(t) > 1 else DEFAULT_STEP_S
        return Trace.from_arrays(t, rain, gas, step, source, schema.units)
    grid, rain_r, gas_r = resample(t, np.asarray(rain), np.asarray(gas), step_s)
    return Trace.from_arrays(grid, rain_r, gas_r, step_s, source, schema.units)


def resample(t: np.ndarray, rain: np.ndarray, gas: np.ndarray, step_s: float):
    """Linear interpolation onto ``t[0] + k * step_s`` within ``[t[0], t[-1]]``.

    The grid never extends past the last timestamp, so nothing is
    extrapolated; the end point is kept whenever the span is a whole number
    of steps.
    """
    if not step_s > 0:
        raise InvalidParameterError(f"step_s must be > 0, got {step_s}")
    span = t[-1] - t[0]
    n = int(math.floor(span / step_s + 1e-9)) + 1
    grid = t[0] + step_s * np.arange(n)
    grid[-1] = min(grid[-1], t[-1])
    return grid, np.interp(grid, t, rain), np.interp(grid, t, gas)


def serialize_trace(trace: Trace) -> str:
    """CSV text with the canonical ``t,rain_db_per_km,gas_db_per_km`` header."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for s in trace.samples:
        writer.writerow((fmt_number(s.t), fmt_number(s.rain_db_per_km), fmt_number(s.gas_db_per_km)))
    return out.getvalue()


def _profile(shape, u: np.ndarray) -> np.ndarray:
    """Rain-rate profile in [0, 1] over normalized event time ``u`` in [0, 1]."""
    if isinstance(shape, str):
        if shape == "triangular":
            return 1.0 - np.abs(2.0 * u - 1.0)
        if shape == "burst":
            # fast rise, slow decay
            shape = ((0.0, 0.0), (0.15, 1.0), (0.4, 0.55), (1.0, 0.0))
        else:
            raise InvalidParameterError(f"unknown ramp shape {shape!r}")
    points = sorted((float(a), float(b)) for a, b in shape)
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    if xs[0] != 0.0 or xs[-1] != 1.0 or any(y < 0 or y > 1 for y in ys):
        raise InvalidParameterError("piecewise-linear breakpoints must span [0, 1] with levels in [0, 1]")
    return np.interp(u, xs, ys)


def rain_rate_series(
    duration_s: float,
    peak_rain_mm_h: float,
    ramp_shape="triangular",
    step_s: float = DEFAULT_STEP_S,
    event_start_s: float = 0.0,
    event_duration_s: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Sample times and rain rate (mm/h) of a single rain event."""
    if not duration_s > 0:
        raise TraceValidationError(f"duration_s must be > 0, got {duration_s}")
    if peak_rain_mm_h < 0:
        raise TraceValidationError(f"peak rain rate must be >= 0, got {peak_rain_mm_h}")
    if not step_s > 0:
        raise TraceValidationError(f"step_s must be > 0, got {step_s}")
    if event_duration_s is None:
        event_duration_s = duration_s - event_start_s
    if event_duration_s <= 0 or event_start_s < 0:
        raise TraceValidationError("rain event must have positive duration and non-negative start")
    n = max(1, int(round(duration_s / step_s)))
    t = step_s * np.arange(n)
    u = (t - event_start_s) / event_duration_s
    inside = (u >= 0) & (u <= 1)
    rate = np.zeros(n)
    rate[inside] = peak_rain_mm_h * _profile(ramp_shape, u[inside])
    return t, rate


def synth_rain_event(
    duration_s: float,
    peak_rain_mm_h: float,
    ramp_shape="triangular",
    k_coeff: float = DEFAULT_K_COEFF,
    alpha_coeff: float = DEFAULT_ALPHA_COEFF,
    gas_db_per_km: float = DEFAULT_GAS_DB_PER_KM,
    step_s: float = DEFAULT_STEP_S,
    event_start_s: float = 0.0,
    event_duration_s: float | None = None,
) -> Trace:
    """Synthetic trace with one rain event converted to dB/km.

    ``ramp_shape`` is ``"triangular"``, ``"burst"`` or a sequence of
    ``(time_fraction, peak_fraction)`` breakpoints. The event spans
    ``[event_start_s, event_start_s + event_duration_s]`` (whole trace by
    default); outside it only gas attenuation remains.
    """
    if gas_db_per_km < 0:
        raise TraceValidationError(f"gas attenuation must be >= 0, got {gas_db_per_km}")
    t, rate = rain_rate_series(duration_s, peak_rain_mm_h, ramp_shape, step_s,
                               event_start_s, event_duration_s)
    rain = [rain_specific_attenuation(r, k_coeff, alpha_coeff) for r in rate]
    return Trace.from_arrays(t, rain, gas_db_per_km, step_s, source="synthetic")


def piecewise_trace(segments: Sequence[tuple[int, float]], gas_db_per_km: float = DEFAULT_GAS_DB_PER_KM,
                    step_s: float = DEFAULT_STEP_S, source: str = "piecewise") -> Trace:
    """Trace built from ``(n_samples, rain_db_per_km)`` plateaus, in order."""
    rain = np.concatenate([np.full(int(n), float(level)) for n, level in segments])
    t = step_s * np.arange(len(rain))
    return Trace.from_arrays(t, rain, gas_db_per_km, step_s, source)


def write_trace_csv(trace: Trace, rain_mm_h: np.ndarray | None = None) -> str:
    """Like :func:`serialize_trace`, adding a ``rain_mm_h`` column when given."""
    if rain_mm_h is None:
        return serialize_trace(trace)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS + ("rain_mm_h",))
    for s, r in zip(trace.samples, rain_mm_h):
        writer.writerow((fmt_number(s.t), fmt_number(s.rain_db_per_km), fmt_number(s.gas_db_per_km), fmt_number(r)))
    return out.getvalue()
