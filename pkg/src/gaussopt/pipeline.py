"""End-to-end experiment: training bed, surface fits, and holdout validation."""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterator

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from gaussopt.errors import InvalidArgumentError, OutOfDomainError
from gaussopt.fitting import (
    BwModel,
    FitSample,
    fit_bw_polynomials,
    fit_surface,
    predict_sigma_opt,
    predict_so_max,
)
from gaussopt.noise import NoiseSpec, NoisySignal, contaminate
from gaussopt.sweep import SweepCurve, SweepGrid, empirical_optimum, run_sweep
from gaussopt.synthesis import synthesize

log = logging.getLogger(__name__)

_ROLE_SIGNAL = 0
_ROLE_TRAIN_NOISE = 1
_ROLE_HOLDOUT_NOISE = 2
# Derived seeds ignore m and the variance: every bandwidth is cut from the same
# white sequence, and each noise level is the same unit-variance draw scaled by
# its standard deviation.
SHARED_M = 0


def _derive_seed(base: int, role: int, m: int, variance: float = 0.0) -> int:
    state = np.random.SeedSequence([base & (2**64 - 1), role, m, round(variance * 1000)])
    return int(state.generate_state(1, dtype=np.uint64)[0])


def _noise_key(m: int, variance: float) -> str:
    return f"{m}:{variance:g}"


@dataclass
class SeedSet:
    """Seeds for every signal and noise realization.

    Any seed not listed explicitly is derived from ``base``; holdout noise
    seeds use a separate derivation so they never repeat training noise.
    """

    base: int = 2012
    signal: dict[int, int] = field(default_factory=dict)
    noise: dict[str, int] = field(default_factory=dict)
    holdout_noise: dict[str, int] = field(default_factory=dict)

    def signal_seed(self, m: int) -> int:
        return self.signal.get(m, _derive_seed(self.base, _ROLE_SIGNAL, SHARED_M))

    def noise_seed(self, m: int, variance: float, holdout: bool = False) -> int:
        table = self.holdout_noise if holdout else self.noise
        role = _ROLE_HOLDOUT_NOISE if holdout else _ROLE_TRAIN_NOISE
        return table.get(_noise_key(m, variance), _derive_seed(self.base, role, SHARED_M))

    def to_dict(self) -> dict:
        return {
            "base": self.base,
            "signal": {str(k): v for k, v in sorted(self.signal.items())},
            "noise": dict(sorted(self.noise.items())),
            "holdout_noise": dict(sorted(self.holdout_noise.items())),
        }


@dataclass
class ExperimentConfig:
    length: int = 1024
    training_m: list[int] = field(default_factory=lambda: [5, 7, 10])
    training_variances: list[float] = field(default_factory=lambda: [30.0, 35.0, 40.0])
    holdout_m: list[int] = field(default_factory=lambda: [8, 4, 12])
    holdout_variances: list[float] = field(default_factory=lambda: [30.0, 35.0, 40.0])
    grid: SweepGrid = field(default_factory=SweepGrid)
    seeds: SeedSet = field(default_factory=SeedSet)
    amplitude_scale: float = 20.0

    def validate(self) -> None:
        if len(set(self.training_m)) < 3:
            raise InvalidArgumentError(
                f"training_m needs at least 3 distinct bandwidths to fit the BW quadratics, "
                f"got {self.training_m}"
            )
        if not self.training_variances:
            raise InvalidArgumentError("training_variances is empty")
        if not self.amplitude_scale > 0:
            raise InvalidArgumentError("amplitude_scale must be positive")
        for v in [*self.training_variances, *self.holdout_variances]:
            if not v > 0:
                raise InvalidArgumentError(f"noise variance must be positive, got {v}")

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        exp = data.get("experiment", {})
        grid = data.get("grid", {})
        seeds = data.get("seeds", {})
        defaults = cls()
        config = cls(
            length=int(exp.get("length", defaults.length)),
            training_m=[int(m) for m in exp.get("training_m", defaults.training_m)],
            training_variances=[
                float(v) for v in exp.get("training_variances", defaults.training_variances)
            ],
            holdout_m=[int(m) for m in exp.get("holdout_m", defaults.holdout_m)],
            holdout_variances=[
                float(v) for v in exp.get("holdout_variances", defaults.holdout_variances)
            ],
            amplitude_scale=float(exp.get("amplitude_scale", defaults.amplitude_scale)),
            grid=SweepGrid(
                sigma_min=float(grid.get("sigma_min", 0.3)),
                sigma_max=float(grid.get("sigma_max", 3.5)),
                step=float(grid.get("step", 0.01)),
            ),
            seeds=SeedSet(
                base=int(seeds.get("base", SeedSet.base)),
                signal={int(k): int(v) for k, v in seeds.get("signal", {}).items()},
                noise={str(k): int(v) for k, v in seeds.get("noise", {}).items()},
                holdout_noise={str(k): int(v) for k, v in seeds.get("holdout_noise", {}).items()},
            ),
        )
        config.validate()
        return config

    @classmethod
    def from_toml(cls, path) -> "ExperimentConfig":
        with open(path, "rb") as fh:
            return cls.from_mapping(tomllib.load(fh))

    @classmethod
    def default(cls) -> "ExperimentConfig":
        with resources.files("gaussopt").joinpath("data/default.toml").open("rb") as fh:
            return cls.from_mapping(tomllib.load(fh))

    def to_dict(self) -> dict:
        return {
            "experiment": {
                "length": self.length,
                "training_m": list(self.training_m),
                "training_variances": list(self.training_variances),
                "holdout_m": list(self.holdout_m),
                "holdout_variances": list(self.holdout_variances),
                "amplitude_scale": self.amplitude_scale,
            },
            "grid": {
                "sigma_min": self.grid.sigma_min,
                "sigma_max": self.grid.sigma_max,
                "step": self.grid.step,
            },
            "seeds": self.seeds.to_dict(),
        }


@dataclass(frozen=True)
class ReportRow:
    bw: float
    noise_variance: float
    s_i: float
    sigma_opt_pred: float | None
    sigma_opt_emp: float
    s_o_max_pred: float | None
    s_o_max_emp: float
    fit_converged: bool = True
    error: str | None = None

    @property
    def sigma_deviation(self) -> float | None:
        if self.sigma_opt_pred is None:
            return None
        return abs(self.sigma_opt_pred - self.sigma_opt_emp)


def make_noisy(config: ExperimentConfig, m: int, variance: float, holdout: bool = False) -> NoisySignal:
    clean = synthesize(config.seeds.signal_seed(m), config.length, m, config.amplitude_scale)
    spec = NoiseSpec(
        seed=config.seeds.noise_seed(m, variance, holdout=holdout),
        variance=variance,
        length=config.length,
    )
    return contaminate(clean, spec)


def sweep_bed(
    config: ExperimentConfig, ms, variances, holdout: bool = False
) -> Iterator[tuple[int, float, SweepCurve]]:
    for m in ms:
        for v in variances:
            yield m, v, run_sweep(make_noisy(config, m, v, holdout=holdout), config.grid)


def _compare(model: BwModel, m: int, variance: float, curve: SweepCurve, converged: bool = True) -> ReportRow:
    sigma_emp, so_emp = empirical_optimum(curve)
    try:
        sigma_pred = predict_sigma_opt(model, m, curve.s_i)
        so_pred = predict_so_max(model, m, curve.s_i)
        error = None
    except OutOfDomainError as exc:
        sigma_pred = so_pred = None
        error = str(exc)
        log.warning("bw=%s variance=%s: %s", m, variance, exc)
    return ReportRow(
        bw=float(m),
        noise_variance=float(variance),
        s_i=curve.s_i,
        sigma_opt_pred=sigma_pred,
        sigma_opt_emp=sigma_emp,
        s_o_max_pred=so_pred,
        s_o_max_emp=so_emp,
        fit_converged=converged,
        error=error,
    )


def run_training(config: ExperimentConfig) -> tuple[BwModel, list[ReportRow]]:
    """Sweep every training (m, variance) pair, fit, and compare to the empirical optima."""
    config.validate()
    curves: dict[int, list[tuple[float, SweepCurve]]] = {}
    for m, v, curve in sweep_bed(config, config.training_m, config.training_variances):
        curves.setdefault(m, []).append((v, curve))

    surfaces = []
    for m, entries in curves.items():
        samples = [
            FitSample(sigma_g=s, s_i=curve.s_i, s_o=so, bw=m)
            for _, curve in entries
            for s, so in curve.points
        ]
        coeffs = fit_surface(samples, m)
        if not coeffs.converged:
            log.warning("surface fit for bw=%s did not converge", m)
        surfaces.append((m, coeffs))

    model = fit_bw_polynomials(surfaces)
    model.provenance = {"s_i_units": "linear", "config": config.to_dict()}
    converged = {s.bw: s.converged for s in model.surfaces}
    rows = [
        _compare(model, m, v, curve, converged[float(m)])
        for m, entries in curves.items()
        for v, curve in entries
    ]
    return model, rows


def run_holdout(model: BwModel, config: ExperimentConfig) -> list[ReportRow]:
    """Compare predictions to empirical optima on configurations never used for fitting."""
    return [
        _compare(model, m, v, curve)
        for m, v, curve in sweep_bed(config, config.holdout_m, config.holdout_variances, holdout=True)
    ]
