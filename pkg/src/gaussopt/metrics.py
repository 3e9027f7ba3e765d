"""Power, MSE and signal-to-noise ratios.

All ratios are linear power ratios; ``to_db`` converts for reporting.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from gaussopt.errors import InvalidArgumentError


def _as_pair(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise InvalidArgumentError("sequences must be nonempty")
    if a.shape != b.shape:
        raise InvalidArgumentError(f"length mismatch: {a.size} vs {b.size}")
    return a, b


def power(x) -> float:
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise InvalidArgumentError("power of an empty sequence is undefined")
    return float(np.mean(x * x))


def mse(clean, estimate) -> float:
    clean, estimate = _as_pair(clean, estimate)
    d = clean - estimate
    return float(np.mean(d * d))


def snr_in(clean, noise) -> float:
    """``P_signal / P_noise``. Raises ZeroDivisionError for zero noise power."""
    clean, noise = _as_pair(clean, noise)
    p_noise = power(noise)
    if p_noise == 0.0:
        raise ZeroDivisionError("noise power is zero (noiseless input)")
    return power(clean) / p_noise


def snr_out(clean, estimate) -> float:
    """``P_signal / MSE``. Raises ZeroDivisionError on perfect reconstruction."""
    err = mse(clean, estimate)
    if err == 0.0:
        raise ZeroDivisionError("error power is zero (perfect reconstruction)")
    return power(clean) / err


def to_db(ratio: float) -> float:
    return 10.0 * math.log10(ratio)


def from_db(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class SnrReport:
    s_i_linear: float
    s_o_linear: float
    s_i_db: float
    s_o_db: float
    mse: float
    p_signal: float
    p_noise: float
    p_error: float

    def to_dict(self) -> dict:
        return asdict(self)


def snr_report(clean, noise, estimate) -> SnrReport:
    """Collect every power and SNR figure for one filtered estimate."""
    p_signal = power(clean)
    p_noise = power(noise)
    err = mse(clean, estimate)
    s_i = snr_in(clean, noise)
    s_o = snr_out(clean, estimate)
    return SnrReport(
        s_i_linear=s_i,
        s_o_linear=s_o,
        s_i_db=to_db(s_i),
        s_o_db=to_db(s_o),
        mse=err,
        p_signal=p_signal,
        p_noise=p_noise,
        p_error=err,
    )


def spectral_error_power(clean, estimate) -> float:
    """Error power computed from DFT bins via Parseval (``sum|E_k|^2 / L^2``)."""
    clean, estimate = _as_pair(clean, estimate)
    spectrum = np.fft.fft(clean - estimate)
    return float(np.sum(np.abs(spectrum) ** 2) / clean.size**2)


def error_components(clean, noise, taps: np.ndarray) -> tuple[float, float, float]:
    """Split the smoothing error into signal distortion and residual noise powers.

    With ``H`` the DFT of the circularly centered kernel, the error spectrum is
    ``X (1 - H) - N H``. Returns ``(distortion, residual_noise, total)`` powers,
    where ``total`` is the power of the combined error spectrum and so matches
    the time-domain MSE of the smoothed estimate.
    """
    clean, noise = _as_pair(clean, noise)
    n = clean.size
    taps = np.asarray(taps, dtype=float)
    r = taps.size // 2
    placed = np.zeros(n)
    offsets = np.arange(-r, r + 1) % n
    np.add.at(placed, offsets, taps)
    h = np.fft.fft(placed)
    distortion = np.fft.fft(clean) * (1.0 - h)
    residual = np.fft.fft(noise) * h
    scale = float(n) ** 2
    return (
        float(np.sum(np.abs(distortion) ** 2) / scale),
        float(np.sum(np.abs(residual) ** 2) / scale),
        float(np.sum(np.abs(distortion - residual) ** 2) / scale),
    )
