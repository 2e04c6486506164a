"""Measurement and characterization of radio impulsive noise (IN).

Workflow: establish a white-noise baseline with the source off, place the
detection threshold 13 dB above its r.m.s. level, extract above-threshold
pulses from records taken with the source on, combine them into bursts
(>50% of a burst's samples must exceed the threshold), then average burst
parameters per measurement and across a campaign. APD curves complement
the burst view.
"""

from .apd import ApdCurve, apd_pair, compute_apd
from .baseline import (
    Baseline,
    WgnValidation,
    compute_rms_level,
    derive_threshold,
    validate_wgn,
)
from .bursts import (
    Burst,
    BurstSet,
    Pulse,
    combine_pulses,
    detect_bursts,
    extract_pulses,
    parameterize_burst,
)
from .io import CampaignManifest, read_manifest, read_record, write_record
from .model import (
    ConfigError,
    DomainError,
    FormatError,
    InvalidRecordError,
    MeasurementMeta,
    SampleRecord,
    dbm_to_mw,
    mw_to_dbm,
    validate_record,
)
from .stats import (
    MainBurst,
    MainBurstAnalysis,
    MeasurementStats,
    SourceCharacterization,
    aggregate_campaign,
    main_burst,
    measurement_stats,
    std_dev,
)
from .synth import BurstEventSpec, brute_force_segment, generate_wgn, inject_bursts

__version__ = "0.1.0"

__all__ = [
    "ApdCurve",
    "Baseline",
    "Burst",
    "BurstEventSpec",
    "BurstSet",
    "CampaignManifest",
    "ConfigError",
    "DomainError",
    "FormatError",
    "InvalidRecordError",
    "MainBurst",
    "MainBurstAnalysis",
    "MeasurementMeta",
    "MeasurementStats",
    "Pulse",
    "SampleRecord",
    "SourceCharacterization",
    "WgnValidation",
    "aggregate_campaign",
    "apd_pair",
    "brute_force_segment",
    "combine_pulses",
    "compute_apd",
    "compute_rms_level",
    "dbm_to_mw",
    "derive_threshold",
    "detect_bursts",
    "extract_pulses",
    "generate_wgn",
    "inject_bursts",
    "main_burst",
    "measurement_stats",
    "mw_to_dbm",
    "parameterize_burst",
    "read_manifest",
    "read_record",
    "std_dev",
    "validate_record",
    "validate_wgn",
    "write_record",
]
