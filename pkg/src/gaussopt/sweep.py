"""Kernel-width sweep: S_o as a function of sigma and its empirical peak."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from gaussopt.errors import InvalidArgumentError
from gaussopt.gfilter import build_kernel, smooth
from gaussopt.metrics import snr_in, snr_out
from gaussopt.noise import NoisySignal


@dataclass(frozen=True)
class SweepGrid:
    sigma_min: float = 0.3
    sigma_max: float = 3.5
    step: float = 0.01

    def __post_init__(self):
        if not self.sigma_min > 0:
            raise InvalidArgumentError(f"sigma_min must be positive, got {self.sigma_min}")
        if not self.step > 0:
            raise InvalidArgumentError(f"step must be positive, got {self.step}")
        if not self.sigma_min < self.sigma_max:
            raise InvalidArgumentError(
                f"sigma_min ({self.sigma_min}) must be below sigma_max ({self.sigma_max})"
            )

    @property
    def count(self) -> int:
        # Both endpoints included; the epsilon absorbs float error in the span.
        return math.floor((self.sigma_max - self.sigma_min) / self.step + 1e-9) + 1

    def sigmas(self) -> np.ndarray:
        values = self.sigma_min + self.step * np.arange(self.count)
        return np.round(values, 12)


@dataclass(frozen=True)
class SweepCurve:
    sigmas: np.ndarray = field(repr=False)
    s_o: np.ndarray = field(repr=False)
    s_i: float
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.sigmas) == 0:
            raise InvalidArgumentError("sweep curve is empty")
        if len(self.sigmas) != len(self.s_o):
            raise InvalidArgumentError("sigmas and s_o differ in length")
        if np.any(np.diff(self.sigmas) <= 0):
            raise InvalidArgumentError("sweep sigmas must be strictly increasing")

    @property
    def points(self) -> list[tuple[float, float]]:
        return [(float(s), float(v)) for s, v in zip(self.sigmas, self.s_o)]

    def __len__(self) -> int:
        return len(self.sigmas)


def evaluate_sigma(noisy: NoisySignal, sigma: float) -> float:
    """Output SNR after smoothing ``noisy`` with a width-``sigma`` kernel."""
    estimate = smooth(noisy.noisy, build_kernel(sigma))
    return snr_out(noisy.clean.samples, estimate)


def run_sweep(noisy: NoisySignal, grid: SweepGrid | None = None) -> SweepCurve:
    grid = grid or SweepGrid()
    sigmas = grid.sigmas()
    s_o = np.array([evaluate_sigma(noisy, s) for s in sigmas])
    s_i = snr_in(noisy.clean.samples, noisy.noise)
    provenance = {"signal": noisy.clean.provenance(), "noise": noisy.spec.to_dict()}
    return SweepCurve(sigmas=sigmas, s_o=s_o, s_i=s_i, provenance=provenance)


def empirical_optimum(curve: SweepCurve) -> tuple[float, float]:
    """Grid argmax of S_o; ``np.argmax`` returns the first, i.e. smallest-sigma, tie."""
    if len(curve) == 0:
        raise InvalidArgumentError("cannot take the optimum of an empty curve")
    i = int(np.argmax(curve.s_o))
    return float(curve.sigmas[i]), float(curve.s_o[i])
