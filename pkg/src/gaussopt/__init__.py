"""Optimal Gaussian smoothing for signals contaminated by additive white Gaussian noise."""

from gaussopt.errors import (
    DegenerateDataError,
    InvalidArgumentError,
    ModelFileError,
    OutOfDomainError,
)
from gaussopt.fitting import (
    BwModel,
    FitSample,
    SurfaceCoeffs,
    fit_bw_polynomials,
    fit_surface,
    paper_coefficients,
    predict_sigma_opt,
    predict_so_max,
)
from gaussopt.gfilter import Kernel, build_kernel, frequency_response, smooth
from gaussopt.metrics import SnrReport, mse, power, snr_in, snr_out, snr_report
from gaussopt.noise import NoiseSpec, NoisySignal, contaminate, generate_awgn
from gaussopt.pipeline import ExperimentConfig, ReportRow, SeedSet, run_holdout, run_training
from gaussopt.sweep import SweepCurve, SweepGrid, empirical_optimum, run_sweep
from gaussopt.synthesis import (
    TestSignal,
    boxcar_smooth,
    generate_white_sequence,
    lowpass_truncate,
    synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "BwModel",
    "DegenerateDataError",
    "ExperimentConfig",
    "FitSample",
    "InvalidArgumentError",
    "Kernel",
    "ModelFileError",
    "NoiseSpec",
    "NoisySignal",
    "OutOfDomainError",
    "ReportRow",
    "SeedSet",
    "SnrReport",
    "SurfaceCoeffs",
    "SweepCurve",
    "SweepGrid",
    "TestSignal",
    "boxcar_smooth",
    "build_kernel",
    "contaminate",
    "empirical_optimum",
    "fit_bw_polynomials",
    "fit_surface",
    "frequency_response",
    "generate_awgn",
    "generate_white_sequence",
    "lowpass_truncate",
    "mse",
    "paper_coefficients",
    "power",
    "predict_sigma_opt",
    "predict_so_max",
    "run_holdout",
    "run_sweep",
    "run_training",
    "smooth",
    "snr_in",
    "snr_out",
    "snr_report",
    "synthesize",
]
