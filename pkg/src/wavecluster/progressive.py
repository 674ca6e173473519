"""Band zeroing, progressive smoothing and per-band reconstruction."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .wavelets import DEFAULT_MODE, CoefficientSet, get_wavelet, wavedec, waverec


@dataclass(frozen=True, eq=False)
class SmoothingResult:
    level_removed: int
    signal: np.ndarray
    source_key: object = None


def zero_details(coeffs: CoefficientSet, l: int) -> CoefficientSet:
    """Copy of ``coeffs`` with detail bands 1..l set to zero (lengths kept).

    ``l = 0`` returns an unmodified copy.
    """
    if not 0 <= l <= coeffs.level:
        raise ValueError(f"cannot zero {l} detail bands of a level-{coeffs.level} set")
    details = tuple(
        np.zeros_like(d, dtype=float) if i < l else np.array(d, dtype=float)
        for i, d in enumerate(coeffs.details)
    )
    return replace(coeffs, approx=np.array(coeffs.approx, dtype=float), details=details)


def smooth(signal, wavelet="db4", L: int = 3, l: int = 3,
           mode: str = DEFAULT_MODE, key=None) -> SmoothingResult:
    """Reconstruct after removing the ``l`` finest detail bands of an ``L``-level DWT.

    ``l = L`` keeps only the approximation; ``l = 0`` is the plain round trip.
    """
    if not 0 <= l <= L:
        raise ValueError(f"smoothing level {l} must lie in 0..{L}")
    w = get_wavelet(wavelet)
    coeffs = wavedec(signal, w, L, mode)
    return SmoothingResult(l, waverec(zero_details(coeffs, l), w), key)


def band_names(L: int) -> list[str]:
    return [f"D{i}" for i in range(1, L + 1)] + ["A"]


def _keep_band(coeffs: CoefficientSet, which: str) -> CoefficientSet:
    L = coeffs.level
    if which not in band_names(L):
        raise ValueError(f"unknown band {which!r}; expected one of {band_names(L)}")
    keep = None if which == "A" else int(which[1:]) - 1
    return replace(
        coeffs,
        approx=np.array(coeffs.approx, dtype=float) if which == "A"
        else np.zeros_like(coeffs.approx, dtype=float),
        details=tuple(
            np.array(d, dtype=float) if i == keep else np.zeros_like(d, dtype=float)
            for i, d in enumerate(coeffs.details)
        ),
    )


def component(signal, wavelet="db4", L: int = 3, which: str = "A",
              mode: str = DEFAULT_MODE) -> np.ndarray:
    """Time-domain contribution of one band (``"D1".."DL"`` or ``"A"``)."""
    w = get_wavelet(wavelet)
    coeffs = wavedec(signal, w, L, mode)
    return waverec(_keep_band(coeffs, which), w)


def components(signal, wavelet="db4", L: int = 3,
               mode: str = DEFAULT_MODE) -> dict[str, np.ndarray]:
    """All band reconstructions from a single decomposition."""
    w = get_wavelet(wavelet)
    coeffs = wavedec(signal, w, L, mode)
    return {b: waverec(_keep_band(coeffs, b), w) for b in band_names(L)}


def smoothing_ladder(signal, wavelet="db4", L: int = 3,
                     mode: str = DEFAULT_MODE) -> list[np.ndarray]:
    """``[S_0, S_1, ..., S_L]`` from a single decomposition; ``S_0`` is the round trip."""
    w = get_wavelet(wavelet)
    coeffs = wavedec(signal, w, L, mode)
    return [waverec(zero_details(coeffs, l), w) for l in range(L + 1)]
