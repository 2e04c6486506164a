"""Command-line interface: simulate, baseline, analyze, campaign, apd.

All commands write their outputs into the ``--out`` directory (default
``./out``) under fixed names, so repeated runs on identical inputs produce
byte-identical output trees.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from enum import IntEnum
from pathlib import Path

from . import io
from .apd import apd_pair, compute_apd
from .baseline import compute_rms_level, derive_threshold, validate_wgn
from .bursts import detect_bursts
from .model import ConfigError, DomainError, FormatError, MeasurementMeta
from .stats import aggregate_campaign, main_burst, measurement_stats
from .synth import generate_wgn, inject_bursts


class ExitStatus(IntEnum):
    OK = 0
    VALIDATION_FAILED = 1  # WGN record contains impulses
    IO_ERROR = 2
    BAD_INPUT = 3  # malformed file or configuration


def _outdir(args: argparse.Namespace) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_baseline(args: argparse.Namespace) -> ExitStatus:
    record = io.read_record(args.wgn_file)
    rms = compute_rms_level(record)
    base = derive_threshold(rms, args.offset_db, source_record_id=str(args.wgn_file))
    validation = validate_wgn(record, base, args.max_exceed_fraction)
    out = _outdir(args)
    io.write_baseline_report(base, validation, out / "baseline.json")
    verdict = "PASS" if validation.passed else f"FAIL ({validation.exceed_count} exceedances)"
    print(
        f"baseline: rms {rms:.2f} dBm, threshold {base.threshold_dbm:.2f} dBm "
        f"(+{base.offset_db:g} dB), WGN check {verdict}"
    )
    return ExitStatus.OK if validation.passed else ExitStatus.VALIDATION_FAILED


def cmd_analyze(args: argparse.Namespace) -> ExitStatus:
    base, _ = io.read_baseline_report(args.baseline)
    record = io.read_record(args.in_file)
    burst_set = detect_bursts(record, base, record_id=str(args.in_file))
    stats = measurement_stats(burst_set)
    stats_excluding = None
    if args.main_burst:
        analysis = main_burst(burst_set)
        if analysis is not None:
            stats = replace(stats, main_burst=analysis.main)
            stats_excluding = analysis.stats_excluding
    out = _outdir(args)
    io.write_measurement_report(
        stats, burst_set, out / "measurement.json", stats_excluding_main=stats_excluding
    )
    if args.plot_data:
        io.write_plot_data(record, burst_set, out / "plot.csv")
    print(f"analyze: {stats.n_bursts} bursts in {args.in_file}")
    return ExitStatus.OK


def _merged_meta(record_meta: MeasurementMeta, manifest: io.CampaignManifest) -> MeasurementMeta:
    """Fill gaps in a record's metadata from the campaign manifest."""
    return MeasurementMeta(
        frequency_khz=(
            record_meta.frequency_khz
            if record_meta.frequency_khz is not None
            else manifest.frequency_khz
        ),
        event=record_meta.event or manifest.event,
        location=record_meta.location or manifest.location,
        source=record_meta.source or manifest.source,
        started_at=record_meta.started_at,
    )


def cmd_campaign(args: argparse.Namespace) -> ExitStatus:
    manifest = io.read_manifest(args.manifest)
    out = _outdir(args)
    wgn = io.read_record(manifest.wgn_path())
    base = derive_threshold(
        compute_rms_level(wgn), manifest.offset_db, source_record_id=manifest.wgn_record
    )
    validation = validate_wgn(wgn, base)
    io.write_baseline_report(base, validation, out / "baseline.json")
    if not validation.passed:
        print(
            f"campaign: WGN record {manifest.wgn_record} failed the impulse check "
            f"({validation.exceed_count} samples above threshold); not analyzing IN records",
            file=sys.stderr,
        )
        return ExitStatus.VALIDATION_FAILED

    all_stats = []
    metas = []
    for index, (name, path) in enumerate(zip(manifest.in_records, manifest.in_paths()), start=1):
        record = io.read_record(path)
        burst_set = detect_bursts(record, base, record_id=name)
        stats = measurement_stats(burst_set)
        io.write_measurement_report(stats, burst_set, out / f"measurement_{index:03d}.json")
        all_stats.append(stats)
        metas.append(_merged_meta(record.meta, manifest))
    characterization = aggregate_campaign(all_stats, metas)
    io.write_campaign_report(characterization, out / "campaign.json")
    print(
        f"campaign: {characterization.n_measurements} measurements, "
        f"mean {characterization.mean_n_bursts:.2f} bursts"
    )
    return ExitStatus.OK


def cmd_apd(args: argparse.Namespace) -> ExitStatus:
    first = io.read_record(args.file)
    out = _outdir(args)
    if args.file2 is not None:
        curves = apd_pair(first, io.read_record(args.file2), grid_db=args.grid_db)
        io.write_apd_csv(curves, out / "apd.csv")
    else:
        io.write_apd_csv([compute_apd(first, grid_db=args.grid_db)], out / "apd.csv")
    print(f"apd: wrote {out / 'apd.csv'}")
    return ExitStatus.OK


def cmd_simulate(args: argparse.Namespace) -> ExitStatus:
    record = generate_wgn(args.n, args.mean_dbm, args.seed, sample_rate_hz=args.sample_rate_hz)
    out = _outdir(args)
    if args.events is not None:
        events = io.read_event_specs(args.events)
        record, spans = inject_bursts(record, events)
        io.write_ground_truth(spans, out / "ground_truth.json", events=events)
    io.write_record(record, out / "record.csv")
    print(f"simulate: wrote {len(record)} samples to {out / 'record.csv'}")
    return ExitStatus.OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="innoise",
        description="Measure and characterize radio impulsive noise from a specific source.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("baseline", help="derive the detection threshold from a WGN record")
    p.add_argument("wgn_file", help="record CSV taken with the source off")
    p.add_argument("--offset-db", type=float, default=13.0, help="threshold offset above r.m.s.")
    p.add_argument(
        "--max-exceed-fraction",
        type=float,
        default=0.0,
        help="tolerated fraction of above-threshold samples in the WGN record",
    )
    p.add_argument("--out", default="out", help="output directory")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("analyze", help="detect bursts in one IN record")
    p.add_argument("in_file", help="record CSV taken with the source on")
    p.add_argument("--baseline", required=True, help="baseline JSON from the baseline command")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--plot-data", action="store_true", help="also write per-sample plot CSV")
    p.add_argument(
        "--main-burst",
        action="store_true",
        help="report the longest burst separately and the stats without it",
    )
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("campaign", help="run baseline + analyze + aggregation from a manifest")
    p.add_argument("manifest", help="campaign manifest JSON")
    p.add_argument("--out", default="out", help="output directory")
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("apd", help="amplitude probability distribution of one or two records")
    p.add_argument("file", help="record CSV (WGN record when pairing)")
    p.add_argument("file2", nargs="?", default=None, help="optional IN record CSV to overlay")
    p.add_argument(
        "--grid-db",
        type=float,
        nargs="?",
        const=0.1,
        default=None,
        help="evaluate on a uniform dB grid (default spacing 0.1 when no value given)",
    )
    p.add_argument("--out", default="out", help="output directory")
    p.set_defaults(func=cmd_apd)

    p = sub.add_parser("simulate", help="generate a synthetic record, optionally with bursts")
    p.add_argument("--n", type=int, required=True, help="number of samples")
    p.add_argument("--mean-dbm", type=float, required=True, help="mean noise level in dBm")
    p.add_argument("--seed", type=int, required=True, help="generator seed")
    p.add_argument("--sample-rate-hz", type=float, default=8001.0, help="sample rate")
    p.add_argument("--events", default=None, help="JSON file of burst events to inject")
    p.add_argument("--out", default="out", help="output directory")
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return int(args.func(args))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitStatus.IO_ERROR)
    except (FormatError, ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitStatus.BAD_INPUT)


if __name__ == "__main__":
    sys.exit(main())
