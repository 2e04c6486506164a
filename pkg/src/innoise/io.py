"""File formats and their readers/writers.

Formats
-------
record CSV       ``# key=value`` comment header (sample_rate_hz required;
                 kind, frequency_khz, event, location, source, started_at
                 optional), then one dBm level per line.
manifest JSON    one campaign: a WGN record, the IN records of one event at
                 one frequency, scenario text, threshold offset.
baseline JSON    r.m.s. level, threshold and the WGN validation verdict.
measurement      JSON report with per-burst rows and the summary averages,
                 plus a sibling CSV with the summary rounded to 2 decimals.
campaign         JSON + CSV with cross-measurement means and deviations.
plot CSV         time_ms, level_dbm, burst_id per sample, for replotting.
APD CSV          level_dbm plus one exceedance column per curve.

All writers are deterministic (identical inputs give byte-identical files)
and JSON numbers use the shortest round-trip representation, so a read of
what was written reproduces the in-memory values exactly. The human-facing
CSV tables round to 2 decimals; the JSON keeps full precision.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Sequence

import numpy as np

from .apd import ApdCurve
from .baseline import Baseline, WgnValidation
from .bursts import BurstSet
from .model import (
    RECORD_KINDS,
    FormatError,
    ConfigError,
    IN,
    MeasurementMeta,
    SampleRecord,
)
from .stats import MainBurst, MeasurementStats, SourceCharacterization
from .synth import BurstEventSpec

DEFAULT_MANIFEST_OFFSET_DB = 13.0

_META_HEADER_KEYS = ("frequency_khz", "event", "location", "source", "started_at")


@dataclass(frozen=True)
class CampaignManifest:
    """File layout of one measurement campaign.

    Record paths are stored as written in the manifest and resolve
    relative to the manifest's own directory (``base_dir``).
    """

    wgn_record: str
    in_records: tuple[str, ...]
    event: str
    frequency_khz: float
    location: str = ""
    source: str = ""
    offset_db: float = DEFAULT_MANIFEST_OFFSET_DB
    base_dir: Path = field(default=Path("."), compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "in_records", tuple(self.in_records))
        object.__setattr__(self, "frequency_khz", float(self.frequency_khz))
        object.__setattr__(self, "offset_db", float(self.offset_db))
        if not self.in_records:
            raise FormatError("manifest needs at least one IN record")
        paths = (self.wgn_record, *self.in_records)
        if len(set(paths)) != len(paths):
            raise FormatError("manifest record paths must be distinct")

    def wgn_path(self) -> Path:
        return self.base_dir / self.wgn_record

    def in_paths(self) -> list[Path]:
        return [self.base_dir / p for p in self.in_records]


def _write_text(path: Path | str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _write_json(payload: dict, path: Path | str) -> None:
    _write_text(path, json.dumps(payload, indent=2) + "\n")


def _read_json(path: Path | str) -> dict | list:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path.name}: invalid JSON: {exc}") from exc
    if not isinstance(data, (dict, list)):
        raise FormatError(f"{path.name}: expected a JSON object")
    return data


def _fmt2(value: float | None) -> str:
    # round the shortest decimal form half-up, so e.g. a mean whose nearest
    # double sits just below x.xx5 still prints the way the number reads
    if value is None:
        return ""
    return str(Decimal(repr(float(value))).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


# ---------------------------------------------------------------------------
# sample records


def read_record(path: Path | str) -> SampleRecord:
    """Parse a record CSV file into a SampleRecord.

    Raises FileNotFoundError for a missing file and FormatError (naming the
    offending line) for malformed content. ``kind`` defaults to IN when the
    header does not say otherwise.
    """
    path = Path(path)
    header: dict[str, str] = {}
    levels: list[float] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    header[key.strip()] = value.strip()
                continue
            try:
                value = float(line)
            except ValueError:
                raise FormatError(f"{path.name}: malformed line {lineno}: {line!r}") from None
            if not math.isfinite(value):
                raise FormatError(f"{path.name}: non-finite sample at line {lineno}")
            levels.append(value)
    if "sample_rate_hz" not in header:
        raise FormatError(f"{path.name}: missing '# sample_rate_hz=...' header")
    if not levels:
        raise FormatError(f"{path.name}: empty record")

    def header_float(key: str) -> float | None:
        if key not in header:
            return None
        try:
            return float(header[key])
        except ValueError:
            raise FormatError(f"{path.name}: header {key}={header[key]!r} is not a number") from None

    rate = header_float("sample_rate_hz")
    if not rate > 0:
        raise FormatError(f"{path.name}: sample_rate_hz must be > 0, got {rate}")
    kind = header.get("kind", IN)
    if kind not in RECORD_KINDS:
        raise FormatError(f"{path.name}: kind must be one of {RECORD_KINDS}, got {kind!r}")
    meta = MeasurementMeta(
        frequency_khz=header_float("frequency_khz"),
        event=header.get("event", ""),
        location=header.get("location", ""),
        source=header.get("source", ""),
        started_at=header.get("started_at"),
    )
    return SampleRecord(levels=levels, sample_rate_hz=rate, kind=kind, meta=meta)


def write_record(record: SampleRecord, path: Path | str) -> None:
    """Write a SampleRecord as a record CSV file."""
    lines = [f"# sample_rate_hz={record.sample_rate_hz!r}", f"# kind={record.kind}"]
    meta = record.meta
    for key in _META_HEADER_KEYS:
        value = getattr(meta, key)
        if value is None or value == "":
            continue
        lines.append(f"# {key}={value!r}" if isinstance(value, float) else f"# {key}={value}")
    lines.extend(repr(float(v)) for v in record.levels)
    _write_text(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# campaign manifests


def read_manifest(path: Path | str) -> CampaignManifest:
    """Parse a campaign manifest JSON file.

    ``offset_db`` defaults to 13 dB when absent; ``location`` and
    ``source`` default to empty text.
    """
    path = Path(path)
    data = _read_json(path)
    if not isinstance(data, dict):
        raise FormatError(f"{path.name}: expected a JSON object")
    for key in ("wgn_record", "in_records", "event", "frequency_khz"):
        if key not in data:
            raise FormatError(f"{path.name}: missing required key {key!r}")
    in_records = data["in_records"]
    if not isinstance(in_records, list) or not all(isinstance(p, str) for p in in_records):
        raise FormatError(f"{path.name}: in_records must be a list of paths")
    if not in_records:
        raise FormatError(f"{path.name}: in_records must not be empty")
    if not isinstance(data["wgn_record"], str):
        raise FormatError(f"{path.name}: wgn_record must be a path string")
    if not isinstance(data["event"], str):
        raise FormatError(f"{path.name}: event must be text")
    if not isinstance(data["frequency_khz"], (int, float)) or not data["frequency_khz"] > 0:
        raise FormatError(f"{path.name}: frequency_khz must be a positive number")
    return CampaignManifest(
        wgn_record=data["wgn_record"],
        in_records=tuple(in_records),
        event=data["event"],
        frequency_khz=float(data["frequency_khz"]),
        location=data.get("location", ""),
        source=data.get("source", ""),
        offset_db=float(data.get("offset_db", DEFAULT_MANIFEST_OFFSET_DB)),
        base_dir=path.parent,
    )


def write_manifest(manifest: CampaignManifest, path: Path | str) -> None:
    _write_json(
        {
            "wgn_record": manifest.wgn_record,
            "in_records": list(manifest.in_records),
            "event": manifest.event,
            "frequency_khz": manifest.frequency_khz,
            "location": manifest.location,
            "source": manifest.source,
            "offset_db": manifest.offset_db,
        },
        path,
    )


# ---------------------------------------------------------------------------
# baseline reports


def write_baseline_report(
    baseline: Baseline,
    validation: WgnValidation | None,
    path: Path | str,
) -> None:
    payload: dict = {
        "rms_dbm": baseline.rms_dbm,
        "threshold_dbm": baseline.threshold_dbm,
        "offset_db": baseline.offset_db,
        "source_record_id": baseline.source_record_id,
    }
    if validation is not None:
        payload["validation"] = {
            "passed": validation.passed,
            "exceed_count": validation.exceed_count,
            "exceed_indices": list(validation.exceed_indices),
            "max_level_dbm": validation.max_level_dbm,
        }
    _write_json(payload, path)


def read_baseline_report(path: Path | str) -> tuple[Baseline, WgnValidation | None]:
    path = Path(path)
    data = _read_json(path)
    for key in ("rms_dbm", "threshold_dbm", "offset_db"):
        if key not in data:
            raise FormatError(f"{path.name}: missing required key {key!r}")
    try:
        baseline = Baseline(
            rms_dbm=float(data["rms_dbm"]),
            threshold_dbm=float(data["threshold_dbm"]),
            offset_db=float(data["offset_db"]),
            source_record_id=str(data.get("source_record_id", "")),
        )
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{path.name}: {exc}") from exc
    validation = None
    if "validation" in data:
        v = data["validation"]
        validation = WgnValidation(
            passed=bool(v["passed"]),
            exceed_count=int(v["exceed_count"]),
            exceed_indices=tuple(int(i) for i in v["exceed_indices"]),
            max_level_dbm=float(v["max_level_dbm"]),
        )
    return baseline, validation


# ---------------------------------------------------------------------------
# measurement reports


def _stats_payload(stats: MeasurementStats) -> dict:
    payload: dict = {"n_bursts": stats.n_bursts}
    if stats.avg_duration_ms is not None:
        payload["avg_duration_ms"] = stats.avg_duration_ms
    if stats.avg_amplitude_dbm is not None:
        payload["avg_amplitude_dbm"] = stats.avg_amplitude_dbm
    if stats.avg_separation_ms is not None:
        payload["avg_separation_ms"] = stats.avg_separation_ms
    if stats.main_burst is not None:
        mb = stats.main_burst
        main: dict = {
            "index": mb.index,
            "duration_ms": mb.duration_ms,
            "amplitude_dbm": mb.amplitude_dbm,
        }
        if mb.ratio_to_second_longest is not None:
            main["ratio_to_second_longest"] = mb.ratio_to_second_longest
        payload["main_burst"] = main
    return payload


def _stats_from_payload(data: dict) -> MeasurementStats:
    main = None
    if "main_burst" in data:
        mb = data["main_burst"]
        main = MainBurst(
            index=int(mb["index"]),
            duration_ms=float(mb["duration_ms"]),
            amplitude_dbm=float(mb["amplitude_dbm"]),
            ratio_to_second_longest=(
                float(mb["ratio_to_second_longest"])
                if "ratio_to_second_longest" in mb
                else None
            ),
        )
    return MeasurementStats(
        n_bursts=int(data["n_bursts"]),
        avg_duration_ms=data.get("avg_duration_ms"),
        avg_amplitude_dbm=data.get("avg_amplitude_dbm"),
        avg_separation_ms=data.get("avg_separation_ms"),
        main_burst=main,
    )


def write_measurement_report(
    stats: MeasurementStats,
    burst_set: BurstSet,
    path: Path | str,
    stats_excluding_main: MeasurementStats | None = None,
) -> None:
    """Write one measurement's report as JSON plus a sibling summary CSV.

    The JSON carries full precision and one row per burst (start_ms,
    duration_ms, amplitude_dbm); the CSV mirrors the summary table
    rounded to 2 decimals.
    """
    path = Path(path)
    period_ms = 1000.0 / burst_set.sample_rate_hz
    payload: dict = {
        "record_id": burst_set.record_id,
        "threshold_dbm": burst_set.threshold_dbm,
        "sample_rate_hz": burst_set.sample_rate_hz,
    }
    payload.update(_stats_payload(stats))
    if stats_excluding_main is not None:
        payload["stats_excluding_main"] = _stats_payload(stats_excluding_main)
    payload["bursts"] = [
        {
            "start_ms": b.start_idx * period_ms,
            "duration_ms": b.duration_ms,
            "amplitude_dbm": b.amplitude_dbm,
        }
        for b in burst_set.bursts
    ]
    _write_json(payload, path)

    lines = [
        "parameter,value",
        f"Number of Bursts,{stats.n_bursts}",
        f"Average Burst Duration (ms),{_fmt2(stats.avg_duration_ms)}",
        f"Average Burst Amplitude (dBm),{_fmt2(stats.avg_amplitude_dbm)}",
        f"Average Burst Separation (ms),{_fmt2(stats.avg_separation_ms)}",
    ]
    _write_text(path.with_suffix(".csv"), "\n".join(lines) + "\n")


def read_measurement_report(path: Path | str) -> MeasurementStats:
    """Re-parse the summary statistics from a measurement report JSON."""
    path = Path(path)
    data = _read_json(path)
    if "n_bursts" not in data:
        raise FormatError(f"{path.name}: missing required key 'n_bursts'")
    return _stats_from_payload(data)


# ---------------------------------------------------------------------------
# campaign reports


def write_campaign_report(char: SourceCharacterization, path: Path | str) -> None:
    """Write a source characterization as JSON plus a sibling summary CSV."""
    path = Path(path)
    payload: dict = {
        "event": char.event,
        "frequency_khz": char.frequency_khz,
        "n_measurements": char.n_measurements,
        "n_with_bursts": char.n_with_bursts,
        "n_with_separation": char.n_with_separation,
        "mean_n_bursts": char.mean_n_bursts,
    }
    for key in (
        "mean_duration_ms",
        "sd_duration_ms",
        "mean_amplitude_dbm",
        "sd_amplitude_db",
        "mean_separation_ms",
        "sd_separation_ms",
    ):
        value = getattr(char, key)
        if value is not None:
            payload[key] = value
    _write_json(payload, path)

    lines = [
        "parameter,value",
        f"Number of Bursts,{_fmt2(char.mean_n_bursts)}",
        f"Average Burst Duration (ms),{_fmt2(char.mean_duration_ms)}",
        f"Standard Deviation of Duration (ms),{_fmt2(char.sd_duration_ms)}",
        f"Average Burst Amplitude (dBm),{_fmt2(char.mean_amplitude_dbm)}",
        f"Standard Deviation of Amplitude (dBm),{_fmt2(char.sd_amplitude_db)}",
        f"Average Burst Separation (ms),{_fmt2(char.mean_separation_ms)}",
        f"Standard Deviation of Separation (ms),{_fmt2(char.sd_separation_ms)}",
    ]
    _write_text(path.with_suffix(".csv"), "\n".join(lines) + "\n")


def read_campaign_report(path: Path | str) -> SourceCharacterization:
    path = Path(path)
    data = _read_json(path)
    for key in ("event", "frequency_khz", "n_measurements", "mean_n_bursts"):
        if key not in data:
            raise FormatError(f"{path.name}: missing required key {key!r}")
    return SourceCharacterization(
        n_measurements=int(data["n_measurements"]),
        mean_n_bursts=float(data["mean_n_bursts"]),
        mean_duration_ms=data.get("mean_duration_ms"),
        sd_duration_ms=data.get("sd_duration_ms"),
        mean_amplitude_dbm=data.get("mean_amplitude_dbm"),
        sd_amplitude_db=data.get("sd_amplitude_db"),
        mean_separation_ms=data.get("mean_separation_ms"),
        sd_separation_ms=data.get("sd_separation_ms"),
        n_with_bursts=int(data.get("n_with_bursts", data["n_measurements"])),
        n_with_separation=int(data.get("n_with_separation", data["n_measurements"])),
        event=str(data["event"]),
        frequency_khz=float(data["frequency_khz"]),
    )


# ---------------------------------------------------------------------------
# plot data


def write_plot_data(record: SampleRecord, burst_set: BurstSet, path: Path | str) -> None:
    """Write per-sample plot data: time_ms, level_dbm, burst_id.

    ``burst_id`` is the 1-based burst number where the sample falls inside
    a burst span and empty elsewhere — enough to redraw the record with
    its detected bursts highlighted.
    """
    n = len(record)
    burst_id = np.zeros(n, dtype=np.int64)
    for i, burst in enumerate(burst_set.bursts, start=1):
        if burst.start_idx < 0 or burst.end_idx >= n:
            raise ConfigError(
                f"burst span [{burst.start_idx}, {burst.end_idx}] does not fit "
                f"the record ({n} samples); was the set derived from this record?"
            )
        burst_id[burst.start_idx : burst.end_idx + 1] = i
    period_ms = 1000.0 / record.sample_rate_hz
    lines = ["time_ms,level_dbm,burst_id"]
    for i in range(n):
        tag = str(int(burst_id[i])) if burst_id[i] else ""
        lines.append(f"{i * period_ms!r},{float(record.levels[i])!r},{tag}")
    _write_text(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# APD curves


def write_apd_csv(curves: Sequence[ApdCurve], path: Path | str) -> None:
    """Write one APD curve (level_dbm,exceedance) or an overlayable pair
    (level_dbm,exceedance_wgn,exceedance_in). A pair must share its grid.
    """
    curves = list(curves)
    if len(curves) == 1:
        header = "level_dbm,exceedance"
        columns = [curves[0].exceedance]
        levels = curves[0].levels_dbm
    elif len(curves) == 2:
        if not np.array_equal(curves[0].levels_dbm, curves[1].levels_dbm):
            raise ConfigError("paired APD curves must share one level grid")
        header = "level_dbm,exceedance_wgn,exceedance_in"
        columns = [curves[0].exceedance, curves[1].exceedance]
        levels = curves[0].levels_dbm
    else:
        raise ConfigError(f"expected 1 or 2 curves, got {len(curves)}")
    lines = [header]
    for i in range(levels.size):
        row = [repr(float(levels[i]))] + [repr(float(col[i])) for col in columns]
        lines.append(",".join(row))
    _write_text(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# synthetic event specs and ground truth


def read_event_specs(path: Path | str) -> list[BurstEventSpec]:
    """Parse a JSON list of burst event specs for the simulator."""
    path = Path(path)
    data = _read_json(path)
    if not isinstance(data, list):
        raise FormatError(f"{path.name}: expected a JSON list of events")
    events = []
    for i, entry in enumerate(data):
        if not isinstance(entry, dict):
            raise FormatError(f"{path.name}: events[{i}] must be an object")
        for key in ("start_idx", "length_samples", "level_offset_db"):
            if key not in entry:
                raise FormatError(f"{path.name}: events[{i}] missing key {key!r}")
        try:
            events.append(
                BurstEventSpec(
                    start_idx=int(entry["start_idx"]),
                    length_samples=int(entry["length_samples"]),
                    level_offset_db=float(entry["level_offset_db"]),
                    shape=entry.get("shape", "constant"),
                )
            )
        except (TypeError, ValueError) as exc:
            raise FormatError(f"{path.name}: events[{i}]: {exc}") from exc
    return events


def write_ground_truth(
    spans: Sequence[tuple[int, int]],
    path: Path | str,
    events: Sequence[BurstEventSpec] | None = None,
) -> None:
    """Record the exact injected spans (and the events) of a simulation."""
    payload: dict = {
        "n_events": len(spans),
        "spans": [[int(s), int(e)] for s, e in spans],
    }
    if events is not None:
        payload["events"] = [
            {
                "start_idx": e.start_idx,
                "length_samples": e.length_samples,
                "level_offset_db": e.level_offset_db,
                "shape": e.shape,
            }
            for e in events
        ]
    _write_json(payload, path)
