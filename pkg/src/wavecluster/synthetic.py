"""Seeded synthetic paired influent/solids datasets.

Every site draws a smooth trend that blends a regional curve shared by all
sites with a site-specific curve. Both sample types of a site follow that
trend through their own gain and offset, plus independent white noise, and
both are observed on the same collection days (with a little extra
per-type dropout).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from datetime import date, timedelta
from importlib import resources

import numpy as np

from .prep import SAMPLE_TYPES, RawSample, TimeSeries


@dataclass(frozen=True)
class TrendFamily:
    """Random sum of sinusoids and Gaussian peaks."""

    n_sinusoids: tuple[int, int] = (2, 4)
    period_days: tuple[float, float] = (60.0, 240.0)
    n_peaks: tuple[int, int] = (1, 3)
    peak_width_days: tuple[float, float] = (20.0, 60.0)

    def validate(self, where: str) -> None:
        lo, hi = self.n_sinusoids
        if not 0 <= lo <= hi:
            raise ValueError(f"{where}.n_sinusoids must satisfy 0 <= lo <= hi")
        lo, hi = self.n_peaks
        if not 0 <= lo <= hi:
            raise ValueError(f"{where}.n_peaks must satisfy 0 <= lo <= hi")
        if self.n_sinusoids[1] + self.n_peaks[1] == 0:
            raise ValueError(f"{where} has no components")
        lo, hi = self.period_days
        if not 2 <= lo <= hi:
            raise ValueError(f"{where}.period_days must satisfy 2 <= lo <= hi")
        lo, hi = self.peak_width_days
        if not 0 < lo <= hi:
            raise ValueError(f"{where}.peak_width_days must satisfy 0 < lo <= hi")

    def draw(self, rng: np.random.Generator, n_days: int) -> np.ndarray:
        t = np.arange(n_days, dtype=float)
        out = np.zeros(n_days)
        for _ in range(rng.integers(self.n_sinusoids[0], self.n_sinusoids[1] + 1)):
            period = rng.uniform(*self.period_days)
            amp = rng.uniform(0.5, 1.0)
            out += amp * np.sin(2 * np.pi * t / period + rng.uniform(0, 2 * np.pi))
        for _ in range(rng.integers(self.n_peaks[0], self.n_peaks[1] + 1)):
            center = rng.uniform(0, n_days - 1)
            # width is the full width at half maximum
            sigma = rng.uniform(*self.peak_width_days) / (2 * np.sqrt(2 * np.log(2)))
            out += rng.uniform(0.5, 1.5) * np.exp(-0.5 * ((t - center) / sigma) ** 2)
        return out


def _standardize(x: np.ndarray) -> np.ndarray:
    sd = x.std()
    return (x - x.mean()) / sd if sd > 0 else x - x.mean()


@dataclass(frozen=True)
class SyntheticConfig:
    n_sites: int = 5
    n_days: int = 224
    start_date: str = "2022-04-21"
    site_names: tuple[str, ...] = ()
    shared_fraction: float = 0.7
    regional: TrendFamily = field(default_factory=TrendFamily)
    site: TrendFamily = field(default_factory=TrendFamily)
    baseline: float = 5.0
    noise_ratio: dict = field(default_factory=lambda: {"influent": 0.8, "solids": 0.8})
    gain: dict = field(default_factory=lambda: {"influent": 1.0, "solids": 3.0})
    offset: dict = field(default_factory=lambda: {"influent": 0.0, "solids": 0.5})
    missing_rate: float = 0.4
    type_dropout: float = 0.02
    seed: int | None = None

    def __post_init__(self):
        for name in ("regional", "site"):
            fam = getattr(self, name)
            if isinstance(fam, dict):
                fam = TrendFamily(**{k: tuple(v) for k, v in fam.items()})
                object.__setattr__(self, name, fam)
        object.__setattr__(self, "site_names", tuple(self.site_names))
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.n_sites, int) or self.n_sites < 2:
            raise ValueError("n_sites must be an integer >= 2")
        if not isinstance(self.n_days, int) or self.n_days < 16:
            raise ValueError("n_days must be an integer >= 16")
        date.fromisoformat(self.start_date)
        if self.site_names and len(self.site_names) != self.n_sites:
            raise ValueError("site_names must list exactly n_sites names")
        if len(set(self.names)) != self.n_sites:
            raise ValueError("site names must be unique")
        if not 0 <= self.shared_fraction <= 1:
            raise ValueError("shared_fraction must lie in [0, 1]")
        if not 0 <= self.missing_rate < 1:
            raise ValueError("missing_rate must lie in [0, 1)")
        if not 0 <= self.type_dropout < 1:
            raise ValueError("type_dropout must lie in [0, 1)")
        if self.baseline < 0:
            raise ValueError("baseline must be non-negative")
        for name in ("noise_ratio", "gain", "offset"):
            table = getattr(self, name)
            if set(table) != set(SAMPLE_TYPES):
                raise ValueError(f"{name} must give a value for each of {SAMPLE_TYPES}")
        if any(v < 0 for v in self.noise_ratio.values()):
            raise ValueError("noise_ratio must be non-negative")
        if any(v <= 0 for v in self.gain.values()):
            raise ValueError("gain must be positive")
        if any(v < 0 for v in self.offset.values()):
            raise ValueError("offset must be non-negative")
        self.regional.validate("regional")
        self.site.validate("site")

    @property
    def names(self) -> tuple[str, ...]:
        return self.site_names or tuple(f"Site{chr(ord('A') + i)}" if i < 26 else f"Site{i}"
                                        for i in range(self.n_sites))

    def with_sites(self, n_sites: int) -> "SyntheticConfig":
        d = self.to_dict()
        d["n_sites"] = n_sites
        if d["site_names"]:
            d["site_names"] = d["site_names"][:n_sites]
        return SyntheticConfig.from_dict(d)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["site_names"] = list(self.site_names)
        for fam in ("regional", "site"):
            d[fam] = {k: list(v) for k, v in d[fam].items()}
        return d

    @classmethod
    def from_dict(cls, obj: dict) -> "SyntheticConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(obj) - known - {"description"}
        if extra:
            raise ValueError(f"unknown synthetic config fields: {sorted(extra)}")
        return cls(**{k: v for k, v in obj.items() if k in known})

    @classmethod
    def from_json(cls, path) -> "SyntheticConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def shipped_config(name: str = "default") -> SyntheticConfig:
    """Load a bundled config: ``"default"`` or ``"fine_trend"``."""
    text = resources.files("wavecluster.data").joinpath(f"{name}_synthetic.json").read_text()
    return SyntheticConfig.from_dict(json.loads(text))


def site_trends(config: SyntheticConfig, seed: int) -> dict[str, np.ndarray]:
    """Noise-free trend per site (before type gain/offset)."""
    return {site: trend for site, trend, _, _ in _site_draws(config, seed)}


def _site_draws(config: SyntheticConfig, seed: int):
    root = np.random.SeedSequence(int(seed))
    region_seq, *site_seqs = root.spawn(config.n_sites + 1)
    regional = _standardize(config.regional.draw(np.random.default_rng(region_seq), config.n_days))
    w = config.shared_fraction
    for site, seq in zip(config.names, site_seqs):
        trend_seq, mask_seq, *type_seqs = seq.spawn(2 + len(SAMPLE_TYPES))
        own = _standardize(config.site.draw(np.random.default_rng(trend_seq), config.n_days))
        shape = _standardize(w * regional + (1 - w) * own)
        trend = config.baseline + shape - min(0.0, config.baseline + shape.min())
        mask_rng = np.random.default_rng(mask_seq)
        collected = mask_rng.random(config.n_days) >= config.missing_rate
        collected[[0, -1]] = True
        yield site, trend, collected, type_seqs


def generate_synthetic(config: SyntheticConfig, seed: int) -> list[TimeSeries]:
    """Two gappy series per site, ordered site by site (influent, then solids).

    Unobserved days hold NaN; run :func:`wavecluster.prep.impute` before use.
    """
    if seed is None:
        raise ValueError("a seed is required")
    out = []
    start = date.fromisoformat(config.start_date)
    for site, trend, collected, type_seqs in _site_draws(config, seed):
        scale = trend.std()
        for sample_type, seq in zip(SAMPLE_TYPES, type_seqs):
            rng = np.random.default_rng(seq)
            noise = rng.normal(0.0, config.noise_ratio[sample_type] * scale, config.n_days)
            dropout = rng.random(config.n_days) < config.type_dropout
            dropout[[0, -1]] = False
            observed = collected & ~dropout
            # ratios are non-negative; with the shipped configs the clip never binds
            values = np.maximum(
                config.gain[sample_type] * (trend + noise) + config.offset[sample_type], 0.0)
            out.append(TimeSeries((site, sample_type), start,
                                  np.where(observed, values, np.nan), observed))
    return out


def to_samples(series) -> list[RawSample]:
    """Observed points as ratio-only samples, sorted by date, site, type."""
    rows = []
    for ts in series:
        site, sample_type = ts.key
        for i in np.flatnonzero(ts.observed_mask):
            rows.append(RawSample(ts.start_date + timedelta(days=int(i)), site, sample_type,
                                  float(ts.values[i])))
    rows.sort(key=lambda s: (s.date, s.site, SAMPLE_TYPES.index(s.sample_type)))
    return rows
