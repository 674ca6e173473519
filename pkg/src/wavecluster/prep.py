"""Ingestion, daily regularization, gap imputation and standardization."""

from __future__ import annotations

import csv
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from datetime import date, timedelta
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

SAMPLE_TYPES = ("influent", "solids")
RAW_COLUMNS = ("date", "site", "sample_type", "n_gene", "pmmov")
RATIO_COLUMNS = ("date", "site", "sample_type", "ratio")


class DataError(ValueError):
    """Input data cannot be processed (bad record, degenerate series, ...)."""


@dataclass(frozen=True)
class RawSample:
    date: date
    site: str
    sample_type: str
    ratio: float
    n_gene: float | None = None
    pmmov: float | None = None

    @property
    def key(self) -> tuple[str, str]:
        return (self.site, self.sample_type)


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A signal on a daily grid; ``observed_mask[i]`` is False for filled days."""

    key: tuple[str, str]
    start_date: date
    values: np.ndarray
    observed_mask: np.ndarray = field(default=None)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        mask = (np.isfinite(values) if self.observed_mask is None
                else np.asarray(self.observed_mask, dtype=bool))
        if values.ndim != 1 or mask.shape != values.shape:
            raise ValueError("values and observed_mask must be 1-D and the same length")
        if not mask.any():
            raise DataError(f"series {self.key} has no observed points")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "observed_mask", mask)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end_date(self) -> date:
        return self.start_date + timedelta(days=len(self.values) - 1)

    @property
    def dates(self) -> list[date]:
        return [self.start_date + timedelta(days=i) for i in range(len(self.values))]

    @property
    def label(self) -> str:
        return series_label(self.key)


def series_label(key) -> str:
    """``("Turlock", "influent") -> "Turlock(I)"``."""
    site, sample_type = key
    return f"{site}({sample_type[:1].upper()})"


def site_slug(site: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in site)


def series_slug(key) -> str:
    site, sample_type = key
    return f"{site_slug(site)}_{sample_type}"


def normalize_pmmov(n_gene: float, pmmov: float, record: str = "") -> float:
    """N-gene concentration divided by the PMMoV fecal-strength marker."""
    where = f" ({record})" if record else ""
    if not pmmov > 0:
        raise DataError(f"PMMoV must be positive, got {pmmov!r}{where}")
    if not n_gene >= 0:
        raise DataError(f"N-gene concentration must be non-negative, got {n_gene!r}{where}")
    return n_gene / pmmov


def _parse_row(row: dict, has_ratio: bool, where: str) -> RawSample:
    try:
        day = date.fromisoformat(row["date"].strip())
    except (ValueError, AttributeError):
        raise DataError(f"{where}: unparseable date {row.get('date')!r}") from None
    site = (row.get("site") or "").strip()
    if not site:
        raise DataError(f"{where}: empty site")
    sample_type = (row.get("sample_type") or "").strip().lower()
    if sample_type not in SAMPLE_TYPES:
        raise DataError(f"{where}: sample_type must be one of {SAMPLE_TYPES}, "
                        f"got {row.get('sample_type')!r}")
    try:
        if has_ratio:
            ratio = float(row["ratio"])
            if not (math.isfinite(ratio) and ratio >= 0):
                raise DataError(f"{where}: ratio must be a finite non-negative number")
            return RawSample(day, site, sample_type, ratio)
        n_gene, pmmov = float(row["n_gene"]), float(row["pmmov"])
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DataError):
            raise
        raise DataError(f"{where}: non-numeric measurement") from None
    ratio = normalize_pmmov(n_gene, pmmov, where)
    return RawSample(day, site, sample_type, ratio, n_gene, pmmov)


def read_samples(path, lenient: bool = False) -> list[RawSample]:
    """Parse a measurement CSV.

    Accepts either ``date,site,sample_type,n_gene,pmmov`` or
    ``date,site,sample_type,ratio``. Bad rows raise :class:`DataError` with
    their line number, or are logged and skipped when ``lenient``.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        header = tuple(c.strip() for c in (reader.fieldnames or ()))
        reader.fieldnames = list(header)
        if set(RATIO_COLUMNS) <= set(header):
            has_ratio = True
        elif set(RAW_COLUMNS) <= set(header):
            has_ratio = False
        else:
            raise DataError(f"{path}: header must contain {','.join(RAW_COLUMNS)} "
                            f"or {','.join(RATIO_COLUMNS)}; got {','.join(header)}")
        samples = []
        for row in reader:
            where = f"{path.name} line {reader.line_num}"
            try:
                samples.append(_parse_row(row, has_ratio, where))
            except DataError as exc:
                if not lenient:
                    raise
                logger.warning("skipping row: %s", exc)
    if not samples:
        raise DataError(f"{path}: no valid rows")
    return samples


def group_keys(samples) -> list[tuple[str, str]]:
    return sorted({s.key for s in samples})


def regularize(samples, key) -> TimeSeries:
    """Place one series' samples on a daily grid, averaging same-day duplicates."""
    key = tuple(key)
    by_day: dict[date, list[float]] = defaultdict(list)
    for s in samples:
        if s.key == key:
            by_day[s.date].append(s.ratio)
    if not by_day:
        raise DataError(f"no samples for {key}")
    start, end = min(by_day), max(by_day)
    n = (end - start).days + 1
    values = np.full(n, np.nan)
    for day, ratios in by_day.items():
        values[(day - start).days] = sum(ratios) / len(ratios)
    return TimeSeries(key, start, values, np.isfinite(values))


def _window_bounds(window_days: int) -> tuple[int, int]:
    back = window_days // 2
    return back, window_days - back - 1


def impute(ts: TimeSeries, window_days: int = 10) -> TimeSeries:
    """Fill unobserved days with a centered moving average of observed values.

    For an even window the span is ``window_days // 2`` days back through
    ``window_days // 2 - 1`` days forward (5 back, 4 forward for 10). Days
    whose window holds no observation take the nearest observed value,
    preferring the earlier one on ties. Observed days are never changed.
    """
    if window_days < 1:
        raise ValueError(f"window must be at least one day, got {window_days}")
    obs = ts.observed_mask
    if obs.all():
        return ts
    back, fwd = _window_bounds(window_days)
    vals = np.where(obs, ts.values, 0.0)
    csum = np.concatenate([[0.0], np.cumsum(vals)])
    ccount = np.concatenate([[0], np.cumsum(obs)])
    obs_idx = np.flatnonzero(obs)
    out = ts.values.copy()
    n = len(out)
    for i in np.flatnonzero(~obs):
        lo, hi = max(0, i - back), min(n, i + fwd + 1)
        count = ccount[hi] - ccount[lo]
        if count:
            out[i] = (csum[hi] - csum[lo]) / count
        else:
            j = np.searchsorted(obs_idx, i)
            before = obs_idx[j - 1] if j > 0 else None
            after = obs_idx[j] if j < len(obs_idx) else None
            if after is None or (before is not None and i - before <= after - i):
                out[i] = ts.values[before]
            else:
                out[i] = ts.values[after]
    return replace(ts, values=out, observed_mask=obs.copy())


def _values_of(ts) -> np.ndarray:
    values = ts.values if isinstance(ts, TimeSeries) else ts
    return np.asarray(values, dtype=float)


def zscore(values) -> np.ndarray:
    """Center and scale to unit sample (n-1) standard deviation."""
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        raise DataError("need at least two values to standardize")
    sd = v.std(ddof=1)
    if not sd > 0 or not np.isfinite(sd):
        raise DataError("zero variance, correlation distance undefined")
    z = (v - v.mean()) / sd
    # one more pass absorbs the rounding left by the first
    return (z - z.mean()) / z.std(ddof=1)


def prepare_for_clustering(ts) -> np.ndarray:
    """Scale by the series maximum, then z-score."""
    v = _values_of(ts)
    if not np.all(np.isfinite(v)):
        raise DataError("series contains missing values; impute first")
    peak = v.max()
    if not peak > 0:
        raise DataError("max-normalization undefined (series maximum is not positive)")
    return zscore(v / peak)
