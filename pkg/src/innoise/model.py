"""Core data model: dBm level records, scenario metadata, unit conversions.

Levels travel through the pipeline in dBm (receiver-native). Wherever a
"linear average" is required it is taken over linear power in milliwatts
and converted back to dB, never over the dB values themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

WGN = "WGN"
IN = "IN"
RECORD_KINDS = (WGN, IN)

# Semantic aliases: a level in dBm, a linear power in milliwatts (> 0).
LevelDbm = float
PowerMw = float


class DomainError(ValueError):
    """Input outside an operation's mathematical or physical domain."""


class ConfigError(ValueError):
    """Inconsistent or out-of-range configuration value."""


class FormatError(ValueError):
    """Malformed input file."""


class InvalidRecordError(DomainError):
    """Raised by validate_record; carries one message per violation."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


@dataclass(frozen=True)
class MeasurementMeta:
    """Scenario description attached to a record.

    Free text apart from the carrier frequency; the point is to describe the
    measured scenario (which source, which operational change, where) in
    enough detail that results from different sources stay comparable.
    """

    frequency_khz: float | None = None
    event: str = ""
    location: str = ""
    source: str = ""
    started_at: str | None = None


@dataclass(frozen=True, eq=False)
class SampleRecord:
    """A time series of receiver level samples in dBm.

    Samples are envelope level readings from a zero-span sample detector;
    no phase information is carried. The array is copied and frozen at
    construction so records are safe to share between threads.
    """

    levels: np.ndarray
    sample_rate_hz: float
    kind: str = IN
    meta: MeasurementMeta = field(default_factory=MeasurementMeta)

    def __post_init__(self) -> None:
        levels = np.array(self.levels, dtype=np.float64, copy=True).reshape(-1)
        levels.setflags(write=False)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    def __len__(self) -> int:
        return int(self.levels.size)

    @property
    def duration_s(self) -> float:
        return self.levels.size / self.sample_rate_hz


def dbm_to_mw(level: LevelDbm) -> PowerMw:
    """Convert a dBm level to linear power in milliwatts: 10^(level/10)."""
    level = float(level)
    if not math.isfinite(level):
        raise DomainError(f"level must be finite, got {level!r}")
    return 10.0 ** (level / 10.0)


def mw_to_dbm(power: PowerMw) -> LevelDbm:
    """Convert linear milliwatt power to a dBm level: 10*log10(power)."""
    power = float(power)
    if not power > 0.0:
        raise DomainError(f"power must be > 0 mW, got {power!r}")
    return 10.0 * math.log10(power)


def mean_power_dbm(levels: np.ndarray) -> LevelDbm:
    """dB value of the mean linear power of ``levels``.

    The sum is accumulated exactly (math.fsum), so the result is invariant
    under sample permutation down to the last bit.
    """
    levels = np.asarray(levels, dtype=np.float64)
    if levels.size == 0:
        raise DomainError("empty record")
    total = math.fsum(np.power(10.0, levels / 10.0).tolist())
    return mw_to_dbm(total / levels.size)


def record_errors(record: SampleRecord) -> list[str]:
    """Collect every invariant violation of ``record``; empty when valid."""
    errors: list[str] = []
    if record.levels.size == 0:
        errors.append("empty record")
    if not record.sample_rate_hz > 0:
        errors.append(f"sample_rate_hz must be > 0, got {record.sample_rate_hz}")
    if record.kind not in RECORD_KINDS:
        errors.append(f"kind must be one of {RECORD_KINDS}, got {record.kind!r}")
    bad = np.flatnonzero(~np.isfinite(record.levels))
    for i in bad[:100]:
        errors.append(f"non-finite sample at index {int(i)}")
    if bad.size > 100:
        errors.append(f"... and {int(bad.size) - 100} more non-finite samples")
    freq = record.meta.frequency_khz
    if freq is not None and not freq > 0:
        errors.append(f"frequency_khz must be > 0 when present, got {freq}")
    return errors


def validate_record(record: SampleRecord) -> SampleRecord:
    """Return ``record`` unchanged if valid, else raise InvalidRecordError."""
    errors = record_errors(record)
    if errors:
        raise InvalidRecordError(errors)
    return record
