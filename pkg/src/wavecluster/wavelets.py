"""Daubechies filter banks and discrete wavelet transforms.

Two boundary modes are supported:

``periodization``
    The signal is treated as circular. Each level halves the length
    (rounding up), so an ``N``-sample signal gives ``ceil(N / 2**l)``
    coefficients at level ``l``. Odd-length inputs are first padded by
    repeating the last sample. This is the default.

``symmetric``
    Half-point symmetric extension. The transform is redundant near the
    edges and each level yields ``floor((n + F - 1) / 2)`` coefficients for
    a filter of length ``F``.

Sign convention: the high-pass filter is ``h[k] = (-1)**k * g[F-1-k]`` where
``g`` is the minimum-phase Daubechies low-pass filter (largest taps first
for db2, i.e. ``[0.48296, 0.83652, 0.22414, -0.12941]``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from math import comb, sqrt

import numpy as np

MODES = ("periodization", "symmetric")
DEFAULT_MODE = "periodization"

_SUM_TOL = 1e-12
_ORTHO_TOL = 1e-10
_MOMENT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class WaveletFilter:
    """An orthogonal quadrature-mirror filter bank."""

    name: str
    dec_lo: np.ndarray
    dec_hi: np.ndarray
    rec_lo: np.ndarray
    rec_hi: np.ndarray
    vanishing_moments: int

    def __len__(self) -> int:
        return len(self.dec_lo)

    def __repr__(self) -> str:
        return f"WaveletFilter({self.name!r}, taps={len(self)})"


@dataclass(frozen=True, eq=False)
class CoefficientSet:
    """Output of a multilevel decomposition.

    ``details[0]`` is the finest band (cD_1) and ``details[-1]`` the coarsest
    (cD_L); ``approx`` is cA_L.
    """

    approx: np.ndarray
    details: tuple[np.ndarray, ...]
    original_length: int
    level: int
    wavelet: str
    mode: str = DEFAULT_MODE

    def __post_init__(self):
        if self.level < 1:
            raise ValueError(f"level must be >= 1, got {self.level}")
        if len(self.details) != self.level:
            raise ValueError(
                f"expected {self.level} detail bands, got {len(self.details)}")
        if self.mode not in MODES:
            raise ValueError(f"unknown boundary mode {self.mode!r}")

    def bands(self) -> dict[str, np.ndarray]:
        """Coefficient vectors keyed ``cD1..cDL`` and ``cAL``."""
        out = {f"cD{i + 1}": d for i, d in enumerate(self.details)}
        out[f"cA{self.level}"] = self.approx
        return out

    def to_dict(self) -> dict:
        return {
            "wavelet": self.wavelet,
            "mode": self.mode,
            "level": self.level,
            "original_length": self.original_length,
            "approx": [float(v) for v in self.approx],
            "details": [[float(v) for v in d] for d in self.details],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "CoefficientSet":
        try:
            return cls(
                approx=np.asarray(obj["approx"], dtype=float),
                details=tuple(np.asarray(d, dtype=float) for d in obj["details"]),
                original_length=int(obj["original_length"]),
                level=int(obj["level"]),
                wavelet=str(obj["wavelet"]),
                mode=str(obj["mode"]),
            )
        except KeyError as exc:
            raise ValueError(f"coefficient record missing field {exc}") from None

    def to_json(self) -> str:
        # float repr is shortest round-trip, so the file reproduces values exactly
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_json(cls, text: str) -> "CoefficientSet":
        return cls.from_dict(json.loads(text))


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown boundary mode {mode!r}; expected one of {MODES}")


def _daubechies_lowpass(M: int) -> np.ndarray:
    """Minimum-phase Daubechies low-pass filter by spectral factorization.

    The squared magnitude response factors as ``((1+z)/2)**(2M)`` times
    ``P(y)`` with ``y = (2 - z - 1/z) / 4`` and
    ``P(y) = sum_k C(M-1+k, k) y**k``. Each root of ``P`` maps to a
    reciprocal pair of ``z`` roots; keeping the one inside the unit circle
    gives the minimum-phase factor.
    """
    poly = np.array([1.0])
    for _ in range(M):
        poly = np.convolve(poly, [1.0, 1.0])
    if M > 1:
        p_coeffs = [comb(M - 1 + k, k) for k in range(M)]
        for y in np.roots(p_coeffs[::-1]):
            z_pair = np.roots([1.0, -(2.0 - 4.0 * y), 1.0])
            z = z_pair[np.argmin(np.abs(z_pair))]
            poly = np.convolve(poly, [1.0, -z])
    g = np.real(poly)
    return g * sqrt(2.0) / g.sum()


def filter_violations(g: np.ndarray, h: np.ndarray, M: int) -> list[str]:
    """Return a description of every filter-bank invariant ``g``/``h`` break."""
    problems = []
    F = len(g)
    if F != 2 * M or len(h) != F:
        problems.append(f"filter length {F}/{len(h)} != {2 * M}")
        return problems
    if abs(g.sum() - sqrt(2.0)) > _SUM_TOL:
        problems.append(f"sum(g) = {g.sum()!r}, expected sqrt(2)")
    if abs(h.sum()) > _SUM_TOL:
        problems.append(f"sum(h) = {h.sum()!r}, expected 0")
    for m in range(M):
        acf = float(np.dot(g[: F - 2 * m], g[2 * m:]))
        if abs(acf - (1.0 if m == 0 else 0.0)) > _ORTHO_TOL:
            problems.append(f"even-shift autocorrelation at m={m} is {acf!r}")
    k = np.arange(F)
    if not np.array_equal(h, (-1.0) ** k * g[::-1]):
        problems.append("high-pass filter breaks the quadrature-mirror relation")
    # moments on a unit-scaled grid so p up to 9 stays well conditioned
    t = k / (F - 1) if F > 1 else k.astype(float)
    for p in range(M):
        moment = float(np.sum(h * t ** p))
        if abs(moment) > _MOMENT_TOL:
            problems.append(f"moment of order {p} is {moment!r}")
    return problems


def make_daubechies(M: int) -> WaveletFilter:
    """Build ``dbM`` for ``M`` in 1..10 and verify it before returning.

    Raises ``ValueError`` for ``M`` out of range and ``RuntimeError`` if the
    computed taps fail the invariant checks.
    """
    if isinstance(M, bool) or not isinstance(M, (int, np.integer)) or not 1 <= M <= 10:
        raise ValueError(f"vanishing moments must be an integer in 1..10, got {M!r}")
    M = int(M)
    if M == 1:
        g = np.array([1.0, 1.0]) / sqrt(2.0)
    else:
        g = _daubechies_lowpass(M)
    F = len(g)
    h = (-1.0) ** np.arange(F) * g[::-1]
    problems = filter_violations(g, h, M)
    if problems:
        raise RuntimeError(f"db{M} construction failed: " + "; ".join(problems))
    for arr in (g, h):
        arr.setflags(write=False)
    rec_lo, rec_hi = g[::-1].copy(), h[::-1].copy()
    rec_lo.setflags(write=False)
    rec_hi.setflags(write=False)
    return WaveletFilter(f"db{M}", g, h, rec_lo, rec_hi, M)


_FILTER_CACHE: dict[str, WaveletFilter] = {}


def get_wavelet(wavelet: str | WaveletFilter) -> WaveletFilter:
    """Resolve ``"db4"``/``"haar"`` style names to a filter bank."""
    if isinstance(wavelet, WaveletFilter):
        return wavelet
    name = str(wavelet).lower()
    if name == "haar":
        name = "db1"
    if not name.startswith("db") or not name[2:].isdigit():
        raise ValueError(f"unsupported wavelet {wavelet!r}; expected db1..db10")
    if name not in _FILTER_CACHE:
        _FILTER_CACHE[name] = make_daubechies(int(name[2:]))
    return _FILTER_CACHE[name]


def _as_signal(signal) -> np.ndarray:
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"signal must be one-dimensional, got shape {x.shape}")
    if x.size == 0:
        raise ValueError("signal is empty")
    return x


def _periodic_index(n_out: int, taps: int, period: int) -> np.ndarray:
    # row n holds (2n - k) mod period for k = 0..taps-1
    return (2 * np.arange(n_out)[:, None] - np.arange(taps)[None, :]) % period


def dwt_single(signal, wavelet, mode: str = DEFAULT_MODE):
    """One analysis step: return ``(cA, cD)``.

    Under periodization ``cA[n] = sum_k g[k] x[(2n - k) mod N']`` where
    ``N'`` is the length after padding odd inputs to even.
    """
    w = get_wavelet(wavelet)
    _check_mode(mode)
    x = _as_signal(signal)
    g, h = w.dec_lo, w.dec_hi
    F = len(g)
    if mode == "periodization":
        if x.size % 2:
            x = np.append(x, x[-1])
        idx = _periodic_index(x.size // 2, F, x.size)
        segs = x[idx]
        return segs @ g, segs @ h
    n_out = (x.size + F - 1) // 2
    xe = np.pad(x, F - 1, mode="symmetric")
    return (np.convolve(xe, g)[F::2][:n_out],
            np.convolve(xe, h)[F::2][:n_out])


def idwt_single(cA, cD, wavelet, mode: str = DEFAULT_MODE,
                target_length: int | None = None) -> np.ndarray:
    """Invert :func:`dwt_single`.

    ``target_length`` is the length of the signal that was analysed. For
    periodization it must be ``2n`` or ``2n - 1`` (``n = len(cA)``); for
    symmetric mode ``2n - F + 2`` or ``2n - F + 1``. ``None`` picks the
    larger value.
    """
    w = get_wavelet(wavelet)
    _check_mode(mode)
    a = np.asarray(cA, dtype=float)
    d = np.asarray(cD, dtype=float)
    if a.ndim != 1 or d.ndim != 1 or a.shape != d.shape:
        raise ValueError(
            f"approximation and detail lengths differ: {a.shape} vs {d.shape}")
    if a.size == 0:
        raise ValueError("empty coefficient vectors")
    n = a.size
    F = len(w)
    full = 2 * n if mode == "periodization" else 2 * n - F + 2
    if target_length is None:
        target_length = full
    if target_length not in (full - 1, full) or target_length < 1:
        raise ValueError(
            f"target_length {target_length} not admissible for {n} coefficients "
            f"under {mode}; expected {full - 1} or {full}")

    if mode == "periodization":
        # transpose of the orthogonal analysis operator
        idx = _periodic_index(n, F, full)
        out = np.zeros(full)
        np.add.at(out, idx, a[:, None] * w.dec_lo[None, :] + d[:, None] * w.dec_hi[None, :])
        return out[:target_length]

    up_a = np.zeros(2 * n)
    up_a[::2] = a
    up_d = np.zeros(2 * n)
    up_d[::2] = d
    y = np.convolve(up_a, w.rec_lo) + np.convolve(up_d, w.rec_hi)
    return y[F - 2: F - 2 + target_length]


def max_level(signal_length: int, wavelet) -> int:
    """Largest ``L`` with ``ceil(N / 2**L) >= len(filter)``; 0 if none."""
    F = len(get_wavelet(wavelet))
    N = int(signal_length)
    if N < 1:
        raise ValueError(f"signal length must be positive, got {N}")
    level = 0
    n = N
    while True:
        n = -(-n // 2)
        if n < F:
            return level
        level += 1


def wavedec(signal, wavelet, level: int, mode: str = DEFAULT_MODE) -> CoefficientSet:
    """Multilevel decomposition down to ``level``."""
    w = get_wavelet(wavelet)
    _check_mode(mode)
    x = _as_signal(signal)
    top = max_level(x.size, w)
    if not isinstance(level, (int, np.integer)) or level < 1 or level > top:
        raise ValueError(
            f"level {level} invalid for length {x.size} with {w.name}; "
            f"max level is {top}")
    details = []
    a = x
    for _ in range(int(level)):
        a, d = dwt_single(a, w, mode)
        details.append(d)
    return CoefficientSet(a, tuple(details), x.size, int(level), w.name, mode)


def waverec(coeffs: CoefficientSet, wavelet=None) -> np.ndarray:
    """Reconstruct a signal of ``coeffs.original_length`` samples."""
    w = get_wavelet(coeffs.wavelet if wavelet is None else wavelet)
    a = np.asarray(coeffs.approx, dtype=float)
    for l in range(coeffs.level, 0, -1):
        d = np.asarray(coeffs.details[l - 1], dtype=float)
        if d.shape != a.shape:
            raise ValueError(
                f"level {l}: approximation has {a.size} coefficients but "
                f"cD{l} has {d.size}")
        target = coeffs.original_length if l == 1 else len(coeffs.details[l - 2])
        a = idwt_single(a, d, w, coeffs.mode, target)
    return a


def map_coefficients(coeffs: CoefficientSet, fn) -> CoefficientSet:
    """Apply ``fn`` to every coefficient vector, returning a new set."""
    return replace(
        coeffs,
        approx=np.asarray(fn(coeffs.approx), dtype=float),
        details=tuple(np.asarray(fn(d), dtype=float) for d in coeffs.details),
    )


def boundary_margin(wavelet, level: int) -> int:
    """Samples at each end of an ``level``-deep reconstruction that can see the wrap."""
    return (len(get_wavelet(wavelet)) - 1) * (2 ** level - 1)
