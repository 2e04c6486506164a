"""WGN baseline: r.m.s. level, detection threshold, impulse-free validation.

A baseline is established once per location and frequency from a record
taken while the studied source is off. All impulse decisions elsewhere in
the pipeline compare strictly against ``threshold_dbm`` from this module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ConfigError, DomainError, LevelDbm, SampleRecord, mean_power_dbm

# Crest factor of white Gaussian noise: peaks sit ~13 dB above the r.m.s.
# level, so anything higher must come from impulses.
DEFAULT_OFFSET_DB = 13.0


@dataclass(frozen=True)
class Baseline:
    """r.m.s. level and the impulse detection threshold derived from it."""

    rms_dbm: float
    threshold_dbm: float
    offset_db: float = DEFAULT_OFFSET_DB
    source_record_id: str = ""

    def __post_init__(self) -> None:
        if not self.offset_db > 0:
            raise ConfigError(f"offset_db must be > 0, got {self.offset_db}")
        if self.threshold_dbm != self.rms_dbm + self.offset_db:
            raise ConfigError(
                f"threshold_dbm must equal rms_dbm + offset_db "
                f"({self.rms_dbm} + {self.offset_db} != {self.threshold_dbm})"
            )


@dataclass(frozen=True)
class WgnValidation:
    """Outcome of checking a WGN record for residual impulses."""

    passed: bool
    exceed_count: int
    exceed_indices: tuple[int, ...]
    max_level_dbm: float


def compute_rms_level(record: SampleRecord) -> LevelDbm:
    """r.m.s. level of a record in dBm.

    Evaluated on linear power: the dB value of the mean milliwatt power of
    all samples. For envelope level data this is the self-consistent
    reading of the usual sqrt(1/N * sum(v_i^2)) definition.
    """
    if len(record) == 0:
        raise DomainError("empty record")
    return mean_power_dbm(record.levels)


def derive_threshold(
    rms: LevelDbm,
    offset_db: float = DEFAULT_OFFSET_DB,
    source_record_id: str = "",
) -> Baseline:
    """Place the impulse detection threshold ``offset_db`` above ``rms``."""
    rms = float(rms)
    offset_db = float(offset_db)
    return Baseline(
        rms_dbm=rms,
        threshold_dbm=rms + offset_db,
        offset_db=offset_db,
        source_record_id=source_record_id,
    )


def validate_wgn(
    record: SampleRecord,
    baseline: Baseline,
    max_exceed_fraction: float = 0.0,
) -> WgnValidation:
    """Check that a WGN record contains no samples above the threshold.

    "Above" is strict: a sample exactly at the threshold is not an
    exceedance. By default a single exceedance fails the record;
    ``max_exceed_fraction`` relaxes that for noisy sites.
    """
    if len(record) == 0:
        raise DomainError("empty record")
    if max_exceed_fraction < 0:
        raise ConfigError(f"max_exceed_fraction must be >= 0, got {max_exceed_fraction}")
    exceed = np.flatnonzero(record.levels > baseline.threshold_dbm)
    passed = exceed.size <= max_exceed_fraction * len(record)
    return WgnValidation(
        passed=bool(passed),
        exceed_count=int(exceed.size),
        exceed_indices=tuple(int(i) for i in exceed),
        max_level_dbm=float(record.levels.max()),
    )
