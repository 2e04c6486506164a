"""Amplitude probability distribution: exceedance probability vs level.

The APD of a record gives, for each level, the fraction of samples
strictly above that level. Plotted with probability on a log axis, white
noise shows up as a sloping line while impulses lift the left edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ConfigError, DomainError, SampleRecord

# Default spacing when evaluation on a uniform dB grid is requested.
DEFAULT_GRID_DB = 0.1

# Presentation hint for plotting tools; probabilities are stored linearly.
PROB_SCALE_HINT = "log"


@dataclass(frozen=True, eq=False)
class ApdCurve:
    """Exceedance probability evaluated at an ascending set of levels.

    The underlying exceedance function is a right-continuous step function
    that only changes at sample values, so evaluating at every distinct
    sample level (the default) represents it exactly: 1 below the minimum
    sample, 0 at and above the maximum.
    """

    levels_dbm: np.ndarray
    exceedance: np.ndarray
    n_samples: int

    def __post_init__(self) -> None:
        levels = np.asarray(self.levels_dbm, dtype=np.float64)
        probs = np.asarray(self.exceedance, dtype=np.float64)
        if levels.size == 0 or levels.shape != probs.shape:
            raise DomainError("curve needs matching, non-empty level/probability arrays")
        if not np.all(np.diff(levels) > 0):
            raise DomainError("curve levels must be strictly increasing")
        if not (np.all(probs >= 0.0) and np.all(probs <= 1.0)):
            raise DomainError("probabilities must lie in [0, 1]")
        if not np.all(np.diff(probs) <= 0.0):
            raise DomainError("exceedance must be non-increasing in level")
        levels.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "levels_dbm", levels)
        object.__setattr__(self, "exceedance", probs)
        object.__setattr__(self, "n_samples", int(self.n_samples))

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.levels_dbm.tolist(), self.exceedance.tolist()))

    def exceedance_at(self, level: float) -> float:
        """Exceedance probability at an arbitrary level (step evaluation)."""
        i = int(np.searchsorted(self.levels_dbm, float(level), side="right")) - 1
        if i < 0:
            return 1.0
        return float(self.exceedance[i])


def _uniform_grid(lo: float, hi: float, spacing: float) -> np.ndarray:
    if not (math.isfinite(spacing) and spacing > 0):
        raise ConfigError(f"grid spacing must be a positive number, got {spacing!r}")
    steps = int(math.ceil((hi - lo) / spacing)) if hi > lo else 0
    grid = lo + spacing * np.arange(steps + 1)
    if grid[-1] < hi:  # float fuzz in the ceil
        grid = np.append(grid, grid[-1] + spacing)
    return grid


def _exceedance(sorted_levels: np.ndarray, grid: np.ndarray) -> np.ndarray:
    n = sorted_levels.size
    return (n - np.searchsorted(sorted_levels, grid, side="right")) / n


def compute_apd(record: SampleRecord, grid_db: float | None = None) -> ApdCurve:
    """Compute the APD of one record.

    By default the curve is evaluated at every distinct sample level, which
    is exact. Pass ``grid_db`` to evaluate on a uniform grid with that dB
    spacing instead (anchored at the minimum sample, extended to cover the
    maximum).
    """
    if len(record) == 0:
        raise DomainError("empty record")
    sorted_levels = np.sort(record.levels)
    if grid_db is None:
        grid = np.unique(sorted_levels)
    else:
        grid = _uniform_grid(float(sorted_levels[0]), float(sorted_levels[-1]), float(grid_db))
    return ApdCurve(
        levels_dbm=grid,
        exceedance=_exceedance(sorted_levels, grid),
        n_samples=int(sorted_levels.size),
    )


def apd_pair(
    wgn: SampleRecord,
    in_rec: SampleRecord,
    grid_db: float | None = None,
) -> tuple[ApdCurve, ApdCurve]:
    """APDs of a WGN record and an IN record on one shared level grid.

    Sharing the grid makes the two curves directly overlayable. The
    default grid is the union of both records' distinct sample levels.
    """
    if len(wgn) == 0 or len(in_rec) == 0:
        raise DomainError("empty record")
    wgn_sorted = np.sort(wgn.levels)
    in_sorted = np.sort(in_rec.levels)
    if grid_db is None:
        grid = np.union1d(wgn_sorted, in_sorted)
    else:
        lo = min(float(wgn_sorted[0]), float(in_sorted[0]))
        hi = max(float(wgn_sorted[-1]), float(in_sorted[-1]))
        grid = _uniform_grid(lo, hi, float(grid_db))
    return (
        ApdCurve(grid, _exceedance(wgn_sorted, grid), int(wgn_sorted.size)),
        ApdCurve(grid, _exceedance(in_sorted, grid), int(in_sorted.size)),
    )
