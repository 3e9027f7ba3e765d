"""Command-line front end.

Exit codes: 0 success, 2 usage, 3 validation (bad values, bad files),
4 numeric failure (degenerate fit, out-of-domain prediction).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from gaussopt import io
from gaussopt.errors import (
    DegenerateDataError,
    InvalidArgumentError,
    ModelFileError,
    OutOfDomainError,
)
from gaussopt.fitting import predict_sigma_opt, predict_so_max
from gaussopt.gfilter import build_kernel, smooth
from gaussopt.metrics import snr_report
from gaussopt.noise import NoiseSpec, generate_awgn
from gaussopt.pipeline import ExperimentConfig, make_noisy, run_holdout, run_training, tomllib
from gaussopt.sweep import run_sweep
from gaussopt.synthesis import synthesize

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_NUMERIC = 4

log = logging.getLogger("gaussopt")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="experiment TOML file (default: bundled config)")
    p.add_argument("--length", type=int, help="override experiment length L")
    p.add_argument("--amplitude-scale", type=float, help="override signal amplitude scale")
    p.add_argument("--seed-base", type=int, help="override the base seed")
    p.add_argument("--sigma-min", type=float, help="override sweep start")
    p.add_argument("--sigma-max", type=float, help="override sweep end")
    p.add_argument("--sigma-step", type=float, help="override sweep step")


def load_config(args) -> ExperimentConfig:
    """Read the config file (or the bundled default) and apply flag overrides."""
    if args.config is not None:
        try:
            with open(args.config, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise InvalidArgumentError(f"cannot read config {args.config}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise InvalidArgumentError(f"config {args.config} is not valid TOML: {exc}") from exc
    else:
        data = ExperimentConfig.default().to_dict()
    exp = data.setdefault("experiment", {})
    grid = data.setdefault("grid", {})
    seeds = data.setdefault("seeds", {})
    if args.length is not None:
        exp["length"] = args.length
    if args.amplitude_scale is not None:
        exp["amplitude_scale"] = args.amplitude_scale
    if args.seed_base is not None:
        seeds["base"] = args.seed_base
    for flag, key in (("sigma_min", "sigma_min"), ("sigma_max", "sigma_max"), ("sigma_step", "step")):
        value = getattr(args, flag)
        if value is not None:
            grid[key] = value
    return ExperimentConfig.from_mapping(data)


def cmd_synth(args) -> int:
    signal = synthesize(args.seed, args.length, args.m, args.scale)
    io.write_signal_csv(args.output, signal.samples)
    io.write_json(io.sidecar_path(args.output), signal.provenance())
    print(f"wrote {args.output} ({signal.length} samples, cutoff bin {signal.cutoff_bin})")
    return EXIT_OK


def cmd_noise(args) -> int:
    clean = io.read_signal_csv(args.signal)
    spec = NoiseSpec(seed=args.seed, variance=args.variance, length=clean.size, mean=args.mean)
    noise = generate_awgn(spec)
    noisy = clean + noise
    out = Path(args.output)
    noise_path = out.with_suffix(".noise.csv")
    io.write_signal_csv(out, noisy)
    io.write_signal_csv(noise_path, noise)
    meta = {"noise": spec.to_dict(), "clean_file": str(args.signal), "noise_file": str(noise_path)}
    signal_meta = io.sidecar_path(args.signal)
    if signal_meta.is_file():
        meta["signal"] = io.read_json(signal_meta)
    io.write_json(io.sidecar_path(out), meta)
    print(f"wrote {out} and {noise_path}")
    return EXIT_OK


def cmd_filter(args) -> int:
    noisy = io.read_signal_csv(args.input)
    kernel = build_kernel(args.sigma)
    estimate = smooth(noisy, kernel)
    io.write_signal_csv(args.output, estimate)
    if args.kernel_json is not None:
        io.write_json(args.kernel_json, kernel.to_dict())
    if args.clean is not None:
        clean = io.read_signal_csv(args.clean)
        noise = io.read_signal_csv(args.noise) if args.noise is not None else noisy - clean
        report = snr_report(clean, noise, estimate).to_dict()
        io.write_json(io.sidecar_path(args.output), report)
        print(json.dumps(report, sort_keys=True))
    else:
        print(f"wrote {args.output}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = load_config(args)
    noisy = make_noisy(config, args.m, args.variance)
    curve = run_sweep(noisy, config.grid)
    io.write_curve_csv(args.output, curve)
    print(f"wrote {args.output} ({len(curve)} points, s_i={curve.s_i:.6g})")
    return EXIT_OK


def cmd_fit(args) -> int:
    config = load_config(args)
    model, rows = run_training(config)
    args.output.mkdir(parents=True, exist_ok=True)
    io.save_model(args.output / "model.json", model)
    io.write_report_csv(args.output / "training_report.csv", rows)
    print(f"wrote {args.output / 'model.json'} and {args.output / 'training_report.csv'}")
    return EXIT_OK


def cmd_predict(args) -> int:
    model = io.load_model(args.model)
    sigma = predict_sigma_opt(model, args.bw, args.si)
    so_max = predict_so_max(model, args.bw, args.si)
    print(json.dumps({"bw": args.bw, "s_i": args.si, "sigma_opt": sigma, "so_max": so_max}))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    config = load_config(args)
    model, training = run_training(config)
    holdout = run_holdout(model, config)
    out = args.output
    out.mkdir(parents=True, exist_ok=True)
    io.save_model(out / "model.json", model)
    io.write_report_csv(out / "table1_training.csv", training)
    io.write_report_csv(out / "table2_holdout.csv", holdout)
    io.write_json(out / "config.json", config.to_dict())
    print(f"wrote model.json, table1_training.csv ({len(training)} rows), "
          f"table2_holdout.csv ({len(holdout)} rows) to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussopt",
        description="Optimal Gaussian smoothing of band-limited signals in AWGN.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a band-limited test signal")
    p.add_argument("--seed", type=int, default=0, help="64-bit seed (default 0)")
    p.add_argument("--length", type=int, default=1024, help="signal length, a power of two")
    p.add_argument("--m", type=int, required=True, help="boxcar length; band edge is fs/m")
    p.add_argument("--scale", type=float, default=1.0, help="amplitude scale (default 1)")
    p.add_argument("-o", "--output", type=Path, required=True, help="signal CSV path")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("noise", help="add seeded AWGN to a signal CSV")
    p.add_argument("--signal", type=Path, required=True, help="clean signal CSV")
    p.add_argument("--variance", type=float, required=True, help="noise variance")
    p.add_argument("--mean", type=float, default=0.0, help="noise mean (default 0)")
    p.add_argument("--seed", type=int, default=0, help="64-bit seed (default 0)")
    p.add_argument("-o", "--output", type=Path, required=True,
                   help="noisy CSV path; the noise goes to <stem>.noise.csv")
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("filter", help="smooth a signal CSV with a Gaussian kernel")
    p.add_argument("--input", type=Path, required=True, help="noisy signal CSV")
    p.add_argument("--sigma", type=float, required=True, help="kernel sigma in samples")
    p.add_argument("--clean", type=Path, help="clean signal CSV; enables the SNR report")
    p.add_argument("--noise", type=Path, help="noise CSV (default: input minus clean)")
    p.add_argument("--kernel-json", type=Path, help="also write the kernel taps as JSON")
    p.add_argument("-o", "--output", type=Path, required=True, help="filtered CSV path")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("sweep", help="S_o versus sigma curve for one configuration")
    _add_config_flags(p)
    p.add_argument("--m", type=int, default=5, help="bandwidth parameter (default 5)")
    p.add_argument("--variance", type=float, default=35.0, help="noise variance (default 35)")
    p.add_argument("-o", "--output", type=Path, required=True, help="curve CSV path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="run the training bed and fit the surface model")
    _add_config_flags(p)
    p.add_argument("-o", "--output", type=Path, required=True, help="output directory")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="closed-form optimum for (bw, S_i) from a model file")
    p.add_argument("--model", type=Path, required=True, help="model JSON from 'fit'")
    p.add_argument("--bw", type=float, required=True, help="bandwidth parameter m")
    p.add_argument("--si", type=float, required=True, help="input SNR (linear)")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("reproduce", help="training and holdout tables in one run")
    _add_config_flags(p)
    p.add_argument("-o", "--output", type=Path, required=True, help="output directory")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.ERROR,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ModelFileError as exc:
        print(f"error: model file: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InvalidArgumentError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (DegenerateDataError, OutOfDomainError, ZeroDivisionError, np.linalg.LinAlgError) as exc:
        print(f"error: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
