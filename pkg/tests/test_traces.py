from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fronthaul.errors import InvalidParameterError, TraceError, TraceParseError, TraceValidationError
from fronthaul.link import AttenuationSample
from fronthaul.traces import (
    Trace,
    TraceSchema,
    parse_trace,
    piecewise_trace,
    rain_rate_series,
    resample,
    serialize_trace,
    synth_rain_event,
    write_trace_csv,
)


class TestParse:
    def test_three_rows(self):
        tr = parse_trace("t,rain_db_per_km,gas_db_per_km\n0,0,3\n1,5.5,3\n2,10,3.2\n")
        assert len(tr) == 3
        assert tr.times().tolist() == [0, 1, 2]
        assert tr.rain().tolist() == [0, 5.5, 10]
        assert tr.gas().tolist() == [3, 3, 3.2]

    def test_gap_is_interpolated(self):
        text = "t,rain_db_per_km,gas_db_per_km\n0,0,3\n1,2,3\n3,6,5\n4,4,5\n7,10,2\n"
        tr = parse_trace(text)
        # hand interpolation between the neighbouring rows
        assert tr.times().tolist() == [0, 1, 2, 3, 4, 5, 6, 7]
        assert tr.rain().tolist() == pytest.approx([0, 2, 4, 6, 4, 6, 8, 10])
        assert tr.gas().tolist() == pytest.approx([3, 3, 4, 5, 5, 4, 3, 2])

    def test_native_timestamps_kept(self):
        tr = parse_trace("t,rain_db_per_km\n10,1\n12,2\n14,3\n", step_s=None)
        assert tr.step_s == 2 and tr.times().tolist() == [0, 2, 4]

    def test_timestamps_relative_to_first_row(self):
        tr = parse_trace("t,rain_db_per_km\n1700000000,1\n1700000001,2\n")
        assert tr.times().tolist() == [0, 1]

    def test_iso_timestamps(self):
        text = "t,rain_db_per_km\n2024-05-01T12:00:00Z,1\n2024-05-01T12:00:02Z,3\n"
        tr = parse_trace(text)
        assert tr.times().tolist() == [0, 1, 2]
        assert tr.rain().tolist() == pytest.approx([1, 2, 3])

    def test_missing_gas_column_defaults(self):
        tr = parse_trace("t,rain_db_per_km\n0,1\n1,2\n")
        assert tr.gas().tolist() == [3.0, 3.0]

    def test_rain_rate_column_converted(self):
        tr = parse_trace("t,rain_mm_h\n0,0\n1,34\n")
        assert tr.rain()[1] == pytest.approx(1.14 * 34**0.74)

    def test_custom_coefficients(self):
        schema = TraceSchema(rain_db_per_km=None, rain_mm_h="R", gas_db_per_km=None, k_coeff=1.5, alpha_coeff=0.74)
        tr = parse_trace("t,R\n0,34\n", schema)
        assert tr.rain()[0] == pytest.approx(20.3886, abs=1e-3)

    def test_total_units_flag(self):
        tr = parse_trace("t,rain_db_per_km\n0,1\n", TraceSchema(gas_db_per_km=None, units="total"))
        assert tr.path_total

    def test_blank_lines_skipped(self):
        assert len(parse_trace("t,rain_db_per_km\n0,1\n\n1,2\n")) == 2

    def test_negative_value_rejected(self):
        with pytest.raises(TraceValidationError, match="line 3"):
            parse_trace("t,rain_db_per_km\n0,1\n1,-2\n")

    def test_malformed_line(self):
        with pytest.raises(TraceParseError) as err:
            parse_trace("t,rain_db_per_km\n0,1\n1,abc\n")
        assert err.value.line == 3 and "line 3" in str(err.value)

    def test_wrong_field_count(self):
        with pytest.raises(TraceParseError, match="line 2"):
            parse_trace("t,rain_db_per_km\n0,1,7\n")

    def test_bad_timestamp(self):
        with pytest.raises(TraceParseError):
            parse_trace("t,rain_db_per_km\nyesterday,1\n")

    def test_non_finite(self):
        with pytest.raises(TraceParseError):
            parse_trace("t,rain_db_per_km\n0,nan\n")

    @pytest.mark.parametrize("text", [
        "t,rain_db_per_km\n0,1\n2,1\n1,1\n",
        "t,rain_db_per_km\n0,1\n0,1\n",
    ])
    def test_non_monotonic(self, text):
        with pytest.raises(TraceValidationError, match="increasing"):
            parse_trace(text)

    @pytest.mark.parametrize("text", ["", "t,rain_db_per_km\n"])
    def test_empty(self, text):
        with pytest.raises(TraceValidationError):
            parse_trace(text)

    def test_missing_required_column(self):
        with pytest.raises(TraceValidationError, match="missing column"):
            parse_trace("time,rain_db_per_km\n0,1\n")

    def test_errors_share_a_base(self):
        assert issubclass(TraceParseError, TraceError) and issubclass(TraceValidationError, TraceError)


class TestResample:
    def test_endpoints_kept(self):
        grid, rain, _ = resample(np.array([0.0, 10.0]), np.array([0.0, 10.0]), np.zeros(2), 2.5)
        assert grid.tolist() == [0, 2.5, 5, 7.5, 10]
        assert rain.tolist() == [0, 2.5, 5, 7.5, 10]

    def test_never_extrapolates(self):
        grid, _, _ = resample(np.array([0.0, 10.0]), np.array([1.0, 1.0]), np.zeros(2), 3.0)
        assert grid.tolist() == [0, 3, 6, 9]
        assert grid[-1] <= 10

    def test_single_sample(self):
        grid, rain, _ = resample(np.array([5.0]), np.array([2.0]), np.array([3.0]), 1.0)
        assert grid.tolist() == [5.0] and rain.tolist() == [2.0]

    def test_step_must_be_positive(self):
        with pytest.raises(InvalidParameterError):
            resample(np.array([0.0, 1.0]), np.zeros(2), np.zeros(2), 0.0)


class TestTrace:
    def test_non_uniform_rejected(self):
        samples = [AttenuationSample(0, 0), AttenuationSample(1, 0), AttenuationSample(3, 0)]
        with pytest.raises(TraceValidationError, match="uniform"):
            Trace(1.0, tuple(samples))

    def test_empty_rejected(self):
        with pytest.raises(TraceValidationError):
            Trace(1.0, ())

    def test_units_checked(self):
        with pytest.raises(TraceValidationError):
            Trace(1.0, (AttenuationSample(0, 0),), units="furlongs")

    def test_duration(self):
        assert piecewise_trace([(10, 0.0)]).duration_s == 9


finite = st.floats(0, 1e4, allow_nan=False, allow_infinity=False)


@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=40), st.sampled_from([0.5, 1.0, 60.0]))
def test_round_trip(values, step):
    t = step * np.arange(len(values))
    rain = [v[0] for v in values]
    gas = [v[1] for v in values]
    tr = Trace.from_arrays(t, rain, gas, step)
    text = serialize_trace(tr)
    back = parse_trace(text, step_s=step)
    assert back.samples == tr.samples
    assert serialize_trace(back) == text


class TestSynth:
    def test_zero_peak_is_clear_sky(self):
        tr = synth_rain_event(3600, 0.0)
        assert np.all(tr.rain() == 0) and np.all(tr.gas() == 3.0)

    def test_triangular_peak(self):
        tr = synth_rain_event(3601, 34.0, "triangular", k_coeff=1.5, alpha_coeff=0.74,
                              event_start_s=0, event_duration_s=3600)
        rain = tr.rain()
        assert int(np.argmax(rain)) == 1800
        assert rain[1800] == pytest.approx(1.5 * 34**0.74)
        assert rain[0] == 0 and rain[3600] == 0
        assert np.all(np.diff(rain[:1801]) >= 0) and np.all(np.diff(rain[1800:]) <= 0)

    def test_event_window(self):
        t, rate = rain_rate_series(100, 10.0, "triangular", 1.0, event_start_s=20, event_duration_s=40)
        assert len(t) == 100
        assert np.all(rate[:20] == 0) and np.all(rate[61:] == 0)
        assert rate[40] == pytest.approx(10.0)

    def test_burst_peaks_early(self):
        _, rate = rain_rate_series(1000, 20.0, "burst")
        assert int(np.argmax(rate)) == 150

    def test_piecewise_shape(self):
        _, rate = rain_rate_series(101, 10.0, [(0, 0), (0.5, 1.0), (1.0, 1.0)], event_duration_s=100)
        assert rate[25] == pytest.approx(5.0) and rate[100] == pytest.approx(10.0)

    @pytest.mark.parametrize("shape", ["square", [(0.2, 0.0), (1.0, 1.0)], [(0, 0), (1, 2.0)]])
    def test_bad_shape(self, shape):
        with pytest.raises(InvalidParameterError):
            rain_rate_series(10, 1.0, shape)

    @pytest.mark.parametrize("kw", [
        {"duration_s": 0, "peak_rain_mm_h": 1.0},
        {"duration_s": -5, "peak_rain_mm_h": 1.0},
        {"duration_s": 10, "peak_rain_mm_h": -1.0},
        {"duration_s": 10, "peak_rain_mm_h": 1.0, "step_s": 0},
        {"duration_s": 10, "peak_rain_mm_h": 1.0, "event_duration_s": 0},
    ])
    def test_invalid_arguments(self, kw):
        with pytest.raises(TraceValidationError):
            synth_rain_event(**kw)

    def test_csv_with_rate_column_parses_back(self):
        t, rate = rain_rate_series(60, 20.0)
        tr = synth_rain_event(60, 20.0)
        back = parse_trace(write_trace_csv(tr, rate))
        assert back.samples == tr.samples

    def test_piecewise_trace(self):
        tr = piecewise_trace([(3, 0.0), (2, 14.0)], gas_db_per_km=1.0, step_s=2.0)
        assert tr.rain().tolist() == [0, 0, 0, 14, 14]
        assert tr.times().tolist() == [0, 2, 4, 6, 8]
        assert tr.gas().tolist() == [1.0] * 5
