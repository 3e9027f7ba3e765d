"""Truncated discrete Gaussian kernel and circular smoothing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from gaussopt.errors import InvalidArgumentError


def gaussian_density(t, sigma: float, mean: float = 0.0):
    """Continuous Gaussian ``exp(-(t-mean)^2 / (2 sigma^2)) / sqrt(2 pi sigma^2)``."""
    t = np.asarray(t, dtype=float)
    return np.exp(-((t - mean) ** 2) / (2.0 * sigma * sigma)) / math.sqrt(2.0 * math.pi * sigma * sigma)


def kernel_radius(sigma: float) -> int:
    """``ceil(3*sigma)``, robust to float noise in the product."""
    return math.ceil(round(3.0 * sigma, 9))


@dataclass(frozen=True)
class Kernel:
    """Centered Gaussian taps on ``[-radius, radius]``, renormalized to unit sum."""

    sigma: float
    radius: int
    taps: np.ndarray = field(repr=False)
    normalized: bool = True

    def to_dict(self) -> dict:
        return {"sigma": self.sigma, "radius": self.radius, "taps": self.taps.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Kernel":
        taps = np.asarray(data["taps"], dtype=float)
        if taps.size != 2 * int(data["radius"]) + 1:
            raise InvalidArgumentError("kernel taps length does not match radius")
        taps.setflags(write=False)
        return cls(sigma=float(data["sigma"]), radius=int(data["radius"]), taps=taps)


def build_kernel(sigma: float) -> Kernel:
    """Sample ``exp(-t**2 / (2 sigma**2))`` at integer ``t`` within ``±ceil(3 sigma)``.

    The sampled values are rescaled to sum to one so the DC gain is exactly 1
    after truncation. Taps at ``±t`` are bitwise equal since ``(-t)**2 == t**2``.
    For very small sigma the outer taps underflow to 0.0.
    """
    if not sigma > 0:
        raise InvalidArgumentError(f"sigma must be positive, got {sigma}")
    r = kernel_radius(sigma)
    taps = gaussian_density(np.arange(-r, r + 1), sigma)
    taps /= taps.sum()
    taps.setflags(write=False)
    return Kernel(sigma=float(sigma), radius=r, taps=taps)


def smooth(noisy, kernel: Kernel) -> np.ndarray:
    """Circular correlation ``out[k] = sum_j noisy[(k+j) mod L] * taps[r+j]``.

    The kernel is symmetric, so this equals convolution.
    """
    x = np.asarray(noisy, dtype=float)
    if kernel.taps.size > x.size:
        raise InvalidArgumentError(
            f"kernel length {kernel.taps.size} exceeds signal length {x.size}"
        )
    r = kernel.radius
    out = np.zeros_like(x)
    for j in range(-r, r + 1):
        out += kernel.taps[r + j] * np.roll(x, -j)
    return out


def frequency_response(kernel: Kernel, omega: float) -> float:
    """Real DTFT of the symmetric kernel at ``omega`` radians/sample."""
    offsets = np.arange(-kernel.radius, kernel.radius + 1, dtype=float)
    return float(np.sum(kernel.taps * np.cos(omega * offsets)))


def continuous_response(sigma: float, omega: float) -> float:
    """Frequency response of the untruncated continuous Gaussian."""
    return math.exp(-(omega**2) * sigma**2 / 2.0)
