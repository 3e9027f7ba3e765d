"""CSV / JSON persistence for signals, curves, reports and models.

Floats are written with 17 significant digits so values round-trip exactly.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable

import numpy as np

from gaussopt.errors import InvalidArgumentError, ModelFileError
from gaussopt.fitting import BwModel
from gaussopt.metrics import to_db
from gaussopt.sweep import SweepCurve

OUT_OF_DOMAIN = "out_of_domain"
REPORT_COLUMNS = (
    "bw",
    "noise_variance",
    "s_i",
    "sigma_opt_pred",
    "sigma_opt_emp",
    "so_max_pred",
    "so_max_emp",
)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_json(path, data: dict) -> None:
    text = json.dumps(data, indent=2, sort_keys=True, allow_nan=False)
    Path(path).write_text(text + "\n")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def write_signal_csv(path, values: Iterable[float]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("index,value\n")
        for i, v in enumerate(values):
            fh.write(f"{i},{fmt(v)}\n")


def read_signal_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["index", "value"]:
            raise InvalidArgumentError(f"{path}: expected header 'index,value', got {header}")
        values = []
        for row in reader:
            if not row:
                continue
            if int(row[0]) != len(values):
                raise InvalidArgumentError(f"{path}: non-contiguous index {row[0]}")
            values.append(float(row[1]))
    return np.array(values)


def write_curve_csv(path, curve: SweepCurve) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# s_i_linear={fmt(curve.s_i)}\n")
        fh.write("sigma_g,s_o_linear,s_o_db\n")
        for sigma, s_o in curve.points:
            fh.write(f"{fmt(sigma)},{fmt(s_o)},{fmt(to_db(s_o))}\n")


def read_curve_csv(path) -> tuple[float, np.ndarray]:
    """Return ``(s_i_linear, rows)`` where rows has columns sigma_g, s_o_linear, s_o_db."""
    s_i = math.nan
    rows = []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("# s_i_linear="):
                s_i = float(line.split("=", 1)[1])
            elif line and not line.startswith("#") and not line.startswith("sigma_g"):
                rows.append([float(v) for v in line.split(",")])
    return s_i, np.array(rows)


def _cell(value) -> str:
    return OUT_OF_DOMAIN if value is None else fmt(value)


def write_report_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(REPORT_COLUMNS) + "\n")
        for row in rows:
            cells = [
                fmt(row.bw),
                fmt(row.noise_variance),
                fmt(row.s_i),
                _cell(row.sigma_opt_pred),
                fmt(row.sigma_opt_emp),
                _cell(row.s_o_max_pred),
                fmt(row.s_o_max_emp),
            ]
            fh.write(",".join(cells) + "\n")


def read_report_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def save_model(path, model: BwModel) -> None:
    write_json(path, model.to_dict())


def load_model(path) -> BwModel:
    path = Path(path)
    if not path.is_file():
        raise ModelFileError(f"model file not found: {path}")
    try:
        return BwModel.from_dict(read_json(path))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ModelFileError(f"model file {path} is not valid JSON: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFileError(f"model file {path} is malformed: {exc!r}") from exc
