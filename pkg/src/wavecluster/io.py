"""On-disk formats shared by the command-line tools.

Floats are written with ``repr`` so every file reproduces the in-memory
values exactly.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .prep import DataError, TimeSeries, series_slug

MANIFEST = "manifest.json"


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def write_json(path: Path, obj) -> None:
    write_text(path, json.dumps(obj, indent=1, sort_keys=False) + "\n")


def samples_csv(samples) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["date", "site", "sample_type", "ratio"])
    for s in samples:
        w.writerow([s.date.isoformat(), s.site, s.sample_type, repr(float(s.ratio))])
    return buf.getvalue()


def series_csv(ts: TimeSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["date", "value", "observed"])
    for i, (v, obs) in enumerate(zip(ts.values, ts.observed_mask)):
        day = ts.start_date + timedelta(days=i)
        w.writerow([day.isoformat(), repr(float(v)), int(bool(obs))])
    return buf.getvalue()


def values_csv(start: date, values) -> str:
    """``date,value`` rows for a derived signal on a daily grid."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["date", "value"])
    for i, v in enumerate(values):
        w.writerow([(start + timedelta(days=i)).isoformat(), repr(float(v))])
    return buf.getvalue()


def read_values_csv(path) -> tuple[date, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise DataError(f"{path}: no rows")
    return date.fromisoformat(rows[0]["date"]), np.array([float(r["value"]) for r in rows])


def read_series_csv(path, key) -> TimeSeries:
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = list(csv.DictReader(fh))
        if not rows:
            raise DataError(f"{path}: no rows")
        start = date.fromisoformat(rows[0]["date"])
        values = np.array([float(r["value"]) for r in rows])
        observed = np.array([r.get("observed", "1").strip() in ("1", "true", "True")
                             for r in rows])
    except (KeyError, ValueError) as exc:
        if isinstance(exc, DataError):
            raise
        raise DataError(f"{path}: malformed series file ({exc})") from None
    for i, r in enumerate(rows):
        if date.fromisoformat(r["date"]) != start + timedelta(days=i):
            raise DataError(f"{path}: row {i + 2} breaks the daily grid")
    if not np.all(np.isfinite(values)):
        raise DataError(f"{path}: series has missing values")
    return TimeSeries(tuple(key), start, values, observed)


def manifest_entry(ts: TimeSeries, filename: str) -> dict:
    site, sample_type = ts.key
    return {
        "site": site,
        "sample_type": sample_type,
        "file": filename,
        "start_date": ts.start_date.isoformat(),
        "end_date": ts.end_date.isoformat(),
        "n_days": len(ts),
        "n_observed": int(ts.observed_mask.sum()),
    }


def series_filename(key) -> str:
    return series_slug(key) + ".csv"


def load_manifest(path) -> tuple[Path, dict]:
    """Accept a manifest file or the directory holding one."""
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST
    if not path.exists():
        raise DataError(f"no manifest at {path}")
    with path.open() as fh:
        return path.parent, json.load(fh)


def load_series_dir(path) -> list[TimeSeries]:
    base, manifest = load_manifest(path)
    return [read_series_csv(base / e["file"], (e["site"], e["sample_type"]))
            for e in manifest["series"]]
