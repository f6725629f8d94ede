"""Command-line front end: ``rate``, ``simulate``, ``sweep`` and ``synth``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .adaptation import cr_decide, sbt_decide
from .config import STRATEGY_KINDS, LoadedConfig, load_config
from .errors import ConfigError, InvalidParameterError, TraceError
from .numfmt import fmt_number, json_number
from .rates import access_capacity, total_fh_rate
from .report import gbps, write_artifacts, write_atomic
from .simulation import run
from .traces import (
    DEFAULT_ALPHA_COEFF,
    DEFAULT_GAS_DB_PER_KM,
    DEFAULT_K_COEFF,
    parse_trace,
    rain_rate_series,
    synth_rain_event,
    write_trace_csv,
)

log = logging.getLogger("fronthaul")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_TRACE = 4
EXIT_IO = 5


class _IOFailure(Exception):
    pass


def _load(path: str) -> LoadedConfig:
    try:
        return load_config(path)
    except OSError as exc:
        raise _IOFailure(f"cannot read config {path}: {exc.strerror or exc}") from None


def cmd_rate(args) -> int:
    cfg = _load(args.config)
    sc = cfg.scenario
    rates = total_fh_rate(sc.cell, sc.chain, sc.beamformer)
    access = access_capacity(sc.cell)
    if args.json:
        print(json.dumps({
            "radio_access_bps": json_number(rates.radio_access_bps),
            "bf_control_bps": json_number(rates.bf_control_bps),
            "total_bps": json_number(rates.total_bps),
            "access_capacity_bps": json_number(access),
        }, indent=2))
        return EXIT_OK
    cell = sc.cell
    print(f"cell:        {cell.n_rb} RB x {cell.n_sc} SC x {cell.n_mimo} layers, "
          f"Q_M={cell.q_m}, N_IQ={cell.n_iq}, T_S={cell.t_s * 1e6:.4g} us, {cell.duplex.upper()}")
    print(f"split:       {sc.chain.split_point.value}    beamformer: {sc.beamformer.kind.value}")
    print(f"radio rate:  {gbps(rates.radio_access_bps)}")
    print(f"bf control:  {gbps(rates.bf_control_bps)}")
    print(f"total rate:  {gbps(rates.total_bps)}")
    print(f"access cap.: {gbps(access)}")
    return EXIT_OK


def _read_trace(path: str, cfg: LoadedConfig, step_s: float | None):
    try:
        with open(path, newline="", encoding="utf-8") as f:
            return parse_trace(f, cfg.schema, step_s=step_s or cfg.step_s, source=Path(path).name)
    except OSError as exc:
        raise _IOFailure(f"cannot read trace {path}: {exc.strerror or exc}") from None


def cmd_simulate(args) -> int:
    cfg = _load(args.config)
    trace = _read_trace(args.trace, cfg, args.step)
    scenario = cfg.scenario_for(args.strategy) if args.strategy else cfg.scenario
    log.debug("running %s over %d samples from %s", scenario.strategy, len(trace), args.trace)
    report = run(scenario, trace)
    try:
        write_artifacts(Path(args.out), report, scenario.strategy)
    except OSError as exc:
        raise _IOFailure(f"cannot write outputs to {args.out}: {exc.strerror or exc}") from None
    print(f"{report.strategy}: {len(trace)} samples, outage {report.outage_fraction:.4%}, "
          f"mean access {gbps(report.mean_access_bps)}, peak utilization {max(report.utilization):.1%}, "
          f"{report.reconfigurations} reconfigurations -> {args.out}")
    return EXIT_OK


def sweep_rows(cfg: LoadedConfig, start_gbps: float, stop_gbps: float, step_gbps: float) -> list[dict]:
    """Stateless CR and SBT decisions over a capacity grid (no dwell)."""
    if step_gbps <= 0:
        raise InvalidParameterError(f"sweep step must be > 0, got {step_gbps}")
    if stop_gbps < start_gbps:
        raise InvalidParameterError(f"inverted sweep range {start_gbps} > {stop_gbps}")
    if start_gbps < 0:
        raise InvalidParameterError("sweep capacities must be >= 0")
    sc = cfg.scenario
    n = int(round((stop_gbps - start_gbps) / step_gbps)) + 1
    rows = []
    for i in range(n):
        cap = float(round((start_gbps + i * step_gbps) * 1e9))
        cr = cr_decide(cfg.legal, sc.chain, sc.beamformer, cap)
        sbt = sbt_decide(sc.cell, sc.chain, sc.beamformer, cap)
        rows.append({
            "capacity_bps": cap,
            "cr_n_rb": cr.active_rb, "cr_n_mimo": cr.active_layers,
            "cr_required_bps": cr.required_fh_bps, "cr_access_bps": cr.access_capacity_bps,
            "sbt_active_rb": sbt.active_rb, "sbt_active_layers": sbt.active_layers,
            "sbt_required_bps": sbt.required_fh_bps, "sbt_access_bps": sbt.access_capacity_bps,
        })
    return rows


def cmd_sweep(args) -> int:
    cfg = _load(args.config)
    rows = sweep_rows(cfg, args.start, args.stop, args.step)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(rows[0].keys())
    for row in rows:
        writer.writerow(fmt_number(v) for v in row.values())
    if args.out:
        try:
            write_atomic(Path(args.out), out.getvalue())
        except OSError as exc:
            raise _IOFailure(f"cannot write {args.out}: {exc.strerror or exc}") from None
    else:
        sys.stdout.write(out.getvalue())
    return EXIT_OK


def cmd_synth(args) -> int:
    shape = args.shape
    trace = synth_rain_event(
        args.duration, args.peak, shape, k_coeff=args.k, alpha_coeff=args.alpha, gas_db_per_km=args.gas,
        step_s=args.step, event_start_s=args.event_start, event_duration_s=args.event_duration,
    )
    _, rate = rain_rate_series(args.duration, args.peak, shape, args.step, args.event_start, args.event_duration)
    try:
        write_atomic(Path(args.out), write_trace_csv(trace, rate))
    except OSError as exc:
        raise _IOFailure(f"cannot write {args.out}: {exc.strerror or exc}") from None
    print(f"wrote {len(trace)} samples to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fronthaul", description="C-RAN wireless fronthaul dimensioning")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="static fronthaul rate and access capacity of a config")
    p.add_argument("config")
    p.add_argument("--json", action="store_true", help="print exact values in bit/s as JSON")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("simulate", help="replay an attenuation trace through a strategy")
    p.add_argument("config")
    p.add_argument("trace")
    p.add_argument("-o", "--out", required=True, help="output directory")
    p.add_argument("--strategy", choices=STRATEGY_KINDS, help="override the configured strategy")
    p.add_argument("--step", type=float, help="override the resampling step (s)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="CR vs SBT access capacity over a capacity range")
    p.add_argument("config")
    p.add_argument("--start", type=float, default=0.0, help="Gbps")
    p.add_argument("--stop", type=float, default=30.0, help="Gbps")
    p.add_argument("--step", type=float, default=0.1, help="Gbps")
    p.add_argument("-o", "--out", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("synth", help="write a synthetic rain-event trace")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--duration", type=float, default=86400.0, help="trace length (s)")
    p.add_argument("--step", type=float, default=1.0, help="sample spacing (s)")
    p.add_argument("--peak", type=float, default=34.0, help="peak rain rate (mm/h)")
    p.add_argument("--shape", default="triangular", choices=("triangular", "burst"))
    p.add_argument("--event-start", type=float, default=9 * 3600.0, help="event start (s)")
    p.add_argument("--event-duration", type=float, default=3600.0, help="event length (s)")
    p.add_argument("--k", type=float, default=DEFAULT_K_COEFF, help="power-law k coefficient")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA_COEFF, help="power-law alpha coefficient")
    p.add_argument("--gas", type=float, default=DEFAULT_GAS_DB_PER_KM, help="gas attenuation (dB/km)")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TraceError as exc:
        print(f"trace error: {exc}", file=sys.stderr)
        return EXIT_TRACE
    except (ConfigError, InvalidParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
