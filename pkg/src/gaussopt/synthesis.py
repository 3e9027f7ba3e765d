"""Band-limited test signal synthesis.

A white Gaussian sequence is smoothed by a unit-tap boxcar of length ``m`` and
then brick-wall low-passed in the DFT domain, giving a signal whose spectrum
is confined to bins ``k < ceil(L/m)`` (and their mirror images).

DFT convention: ``numpy.fft`` (unnormalized forward, ``1/L`` inverse).
Parseval then reads ``mean(x**2) == sum(abs(X)**2) / L**2``.

Boundary handling is circular throughout, which is consistent with the DFT
truncation making the signal implicitly periodic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from gaussopt.errors import InvalidArgumentError

_SEED_MASK = (1 << 64) - 1


def make_rng(seed: int) -> np.random.Generator:
    """Fresh PCG64 generator for a 64-bit seed (negative seeds wrap modulo 2**64)."""
    return np.random.default_rng(int(seed) & _SEED_MASK)


def cutoff_bin(length: int, m: int) -> int:
    """First zeroed DFT bin, ``ceil(length / m)``."""
    return -(-length // m)


def generate_white_sequence(seed: int, length: int) -> np.ndarray:
    """Zero-mean, unit-variance Gaussian samples, deterministic in ``seed``."""
    if length < 1:
        raise InvalidArgumentError(f"length must be >= 1, got {length}")
    return make_rng(seed).standard_normal(length)


def boxcar_smooth(x, m: int) -> np.ndarray:
    """Circular convolution with the unit-tap boxcar ``h = [1]*m``.

    ``out[k] = sum_{j=0}^{m-1} x[(k - j) mod L]``. DC gain is ``m``.
    """
    x = np.asarray(x, dtype=float)
    if m < 1:
        raise InvalidArgumentError(f"m must be >= 1, got {m}")
    if m > x.size:
        raise InvalidArgumentError(f"m={m} exceeds signal length {x.size}")
    out = np.zeros_like(x)
    for j in range(m):
        out += np.roll(x, j)
    return out


def lowpass_truncate(x, m: int) -> np.ndarray:
    """Zero DFT bins ``ceil(L/m) <= k <= L - ceil(L/m)`` and return the real inverse."""
    x = np.asarray(x, dtype=float)
    if x.size < 4:
        raise InvalidArgumentError(f"signal length must be >= 4, got {x.size}")
    if m < 2:
        raise InvalidArgumentError(f"m must be >= 2, got {m}")
    n = x.size
    spectrum = np.fft.fft(x)
    c = cutoff_bin(n, m)
    spectrum[c : n - c + 1] = 0.0
    return np.fft.ifft(spectrum).real


@dataclass(frozen=True)
class TestSignal:
    """Clean band-limited samples and the parameters that produced them."""

    __test__ = False  # not a pytest class

    samples: np.ndarray = field(repr=False)
    seed: int
    length: int
    smoothing_length: int
    amplitude_scale: float = 1.0

    def __post_init__(self):
        if len(self.samples) != self.length:
            raise InvalidArgumentError(
                f"samples has {len(self.samples)} entries, expected {self.length}"
            )

    @property
    def f_max_norm(self) -> float:
        """Maximum frequency as a fraction of the sampling rate (``1/m``)."""
        return 1.0 / self.smoothing_length

    @property
    def cutoff_bin(self) -> int:
        return cutoff_bin(self.length, self.smoothing_length)

    def provenance(self) -> dict:
        return {
            "seed": int(self.seed),
            "length": int(self.length),
            "m": int(self.smoothing_length),
            "amplitude_scale": float(self.amplitude_scale),
            "f_max_norm": self.f_max_norm,
        }


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def synthesize(seed: int, length: int, m: int, amplitude_scale: float = 1.0) -> TestSignal:
    """Build a band-limited test signal.

    Parameters
    ----------
    seed
        Seed of the underlying white sequence.
    length
        Number of samples ``L``; must be a power of two.
    m
        Boxcar length; sets the band edge at ``fs/m``.
    amplitude_scale
        Final multiplicative gain. Power scales with its square.
    """
    if not _is_power_of_two(length):
        raise InvalidArgumentError(f"length must be a power of two, got {length}")
    if m < 2:
        raise InvalidArgumentError(f"m must be >= 2, got {m}")
    if m > length:
        raise InvalidArgumentError(f"m={m} exceeds length {length}")
    if not amplitude_scale > 0:
        raise InvalidArgumentError(f"amplitude_scale must be positive, got {amplitude_scale}")
    white = generate_white_sequence(seed, length)
    band_limited = lowpass_truncate(boxcar_smooth(white, m), m)
    samples = band_limited * amplitude_scale
    samples.setflags(write=False)
    return TestSignal(
        samples=samples,
        seed=int(seed),
        length=int(length),
        smoothing_length=int(m),
        amplitude_scale=float(amplitude_scale),
    )
