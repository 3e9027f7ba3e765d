"""Seeded AWGN and additive contamination."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from gaussopt.errors import InvalidArgumentError
from gaussopt.synthesis import TestSignal, make_rng


@dataclass(frozen=True)
class NoiseSpec:
    seed: int
    variance: float
    length: int
    mean: float = 0.0

    def __post_init__(self):
        if not self.variance > 0:
            raise InvalidArgumentError(f"noise variance must be positive, got {self.variance}")
        if self.length < 1:
            raise InvalidArgumentError(f"noise length must be >= 1, got {self.length}")

    def to_dict(self) -> dict:
        return {
            "seed": int(self.seed),
            "mean": float(self.mean),
            "noise_variance": float(self.variance),
            "length": int(self.length),
        }


@dataclass(frozen=True)
class NoisySignal:
    """A clean signal, the exact noise realization added to it, and their sum."""

    clean: TestSignal
    noise: np.ndarray = field(repr=False)
    noisy: np.ndarray = field(repr=False)
    spec: NoiseSpec


def generate_awgn(spec: NoiseSpec) -> np.ndarray:
    """Draw ``spec.length`` samples of N(mean, variance)."""
    draws = make_rng(spec.seed).standard_normal(spec.length)
    return spec.mean + math.sqrt(spec.variance) * draws


def contaminate(clean: TestSignal, spec: NoiseSpec) -> NoisySignal:
    if spec.length != clean.length:
        raise InvalidArgumentError(
            f"noise length {spec.length} does not match signal length {clean.length}"
        )
    noise = generate_awgn(spec)
    noisy = np.asarray(clean.samples, dtype=float) + noise
    noise.setflags(write=False)
    noisy.setflags(write=False)
    return NoisySignal(clean=clean, noise=noise, noisy=noisy, spec=spec)
