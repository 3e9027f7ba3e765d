"""Reciprocal full quadratic surface fits and closed-form optimum predictors.

For a fixed bandwidth ``BW`` the output SNR is modelled as

    S_o = 1 / (a + b*s + c*S_i + d*s**2 + f*S_i**2 + g*s*S_i)

with ``s`` the kernel sigma. Each of the six coefficients is then expressed
as a quadratic in ``BW``. Setting ``dS_o/ds = 0`` gives the optimum sigma
``-(g*S_i + b) / (2d)``; substituting back gives the peak S_o.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from decimal import Decimal
from typing import Iterable, Sequence

import numpy as np

from gaussopt.errors import DegenerateDataError, InvalidArgumentError, OutOfDomainError

COEFF_NAMES = ("a", "b", "c", "d", "f", "g")

MAX_ITERATIONS = 200
REL_TOL = 1e-10


@dataclass(frozen=True)
class FitSample:
    sigma_g: float
    s_i: float
    s_o: float
    bw: float

    def __post_init__(self):
        if not (self.sigma_g > 0 and self.s_i > 0 and self.s_o > 0 and self.bw > 0):
            raise InvalidArgumentError(f"fit sample fields must be positive: {self}")


@dataclass(frozen=True)
class SurfaceCoeffs:
    bw: float
    a: float
    b: float
    c: float
    d: float
    f: float
    g: float
    iterations: int = 0
    converged: bool = True

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, k) for k in COEFF_NAMES])

    @classmethod
    def from_array(cls, bw: float, values: Sequence[float], **extra) -> "SurfaceCoeffs":
        return cls(bw=float(bw), **{k: float(v) for k, v in zip(COEFF_NAMES, values)}, **extra)

    def denominator(self, sigma, s_i):
        sigma = np.asarray(sigma, dtype=float)
        s_i = np.asarray(s_i, dtype=float)
        return (
            self.a
            + self.b * sigma
            + self.c * s_i
            + self.d * sigma**2
            + self.f * s_i**2
            + self.g * sigma * s_i
        )

    def value(self, sigma, s_i):
        return 1.0 / self.denominator(sigma, s_i)

    def to_dict(self) -> dict:
        return {"bw": self.bw, **{k: getattr(self, k) for k in COEFF_NAMES}}


def _design(sigma: np.ndarray, s_i: np.ndarray) -> np.ndarray:
    return np.column_stack(
        [np.ones_like(sigma), sigma, s_i, sigma**2, s_i**2, sigma * s_i]
    )


def _check_samples(samples: Sequence[FitSample]) -> None:
    if len(samples) < 12:
        raise DegenerateDataError(f"need at least 12 samples, got {len(samples)}")
    if len({s.s_i for s in samples}) < 2:
        raise DegenerateDataError("samples span fewer than 2 distinct S_i values")
    if len({s.sigma_g for s in samples}) < 6:
        raise DegenerateDataError("samples span fewer than 6 distinct sigma values")


def fit_surface(samples: Sequence[FitSample], bw: float) -> SurfaceCoeffs:
    """Least-squares fit of the reciprocal quadratic to ``(sigma, S_i) -> S_o``.

    The denominator is linear in the coefficients, so a linear least-squares
    fit of ``1/S_o`` gives the starting point. A damped Gauss-Newton
    (Levenberg-Marquardt) iteration then minimizes the squared error in
    ``S_o`` itself, stopping when the relative decrease of the objective falls
    below 1e-10 or after 200 iterations. When the iteration limit is hit the
    best coefficients so far are returned with ``converged=False`` and a
    ``RuntimeWarning``.
    """
    samples = list(samples)
    _check_samples(samples)
    sigma = np.array([s.sigma_g for s in samples], dtype=float)
    s_i = np.array([s.s_i for s in samples], dtype=float)
    s_o = np.array([s.s_o for s in samples], dtype=float)

    design = _design(sigma, s_i)
    # Column scaling keeps S_i**2 (~1e3) and the constant column comparable.
    col_scale = np.max(np.abs(design), axis=0)
    scaled = design / col_scale
    if np.linalg.matrix_rank(scaled) < scaled.shape[1]:
        raise DegenerateDataError("design matrix is rank deficient; coefficients unidentifiable")

    p, *_ = np.linalg.lstsq(scaled, 1.0 / s_o, rcond=None)
    if np.any(scaled @ p <= 0):
        # Relative-error weighting tends to keep the denominator positive.
        p, *_ = np.linalg.lstsq(scaled * s_o[:, None], np.ones_like(s_o), rcond=None)
        if np.any(scaled @ p <= 0):
            raise DegenerateDataError("no positive-denominator starting point found")

    def objective(q: np.ndarray) -> float:
        den = scaled @ q
        if np.any(den <= 0):
            return np.inf
        return float(np.sum((s_o - 1.0 / den) ** 2))

    obj = objective(p)
    damping = 1e-3
    iterations = 0
    converged = False
    while iterations < MAX_ITERATIONS:
        if obj == 0.0:
            converged = True
            break
        iterations += 1
        den = scaled @ p
        resid = s_o - 1.0 / den
        jac = -scaled / den[:, None] ** 2
        jtj = jac.T @ jac
        jtr = jac.T @ resid
        diag = np.diag(np.diag(jtj))
        improved = False
        while damping < 1e16:
            try:
                step = np.linalg.solve(jtj + damping * diag, jtr)
            except np.linalg.LinAlgError:
                damping *= 10.0
                continue
            candidate = p + step
            new_obj = objective(candidate)
            if new_obj < obj:
                improved = True
                break
            damping *= 10.0
        if not improved:
            # No descent step exists at any damping: stationary to working precision.
            converged = True
            break
        rel = (obj - new_obj) / obj
        p, obj = candidate, new_obj
        damping = max(damping / 10.0, 1e-15)
        if rel < REL_TOL:
            converged = True
            break

    if not converged:
        warnings.warn(
            f"surface fit for bw={bw} did not converge in {MAX_ITERATIONS} iterations",
            RuntimeWarning,
            stacklevel=2,
        )
    return SurfaceCoeffs.from_array(
        bw, p / col_scale, iterations=iterations, converged=converged
    )


def _quadratic_eval(alphas: Sequence[float], bw: float) -> float:
    a1, a2, a3 = alphas
    return a1 + a2 * bw + a3 * bw * bw


@dataclass
class BwModel:
    """Per-coefficient quadratics in bandwidth plus the surface fits behind them."""

    quadratics: dict[str, tuple[float, float, float]]
    surfaces: list[SurfaceCoeffs] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)
    solver: dict | None = None

    @property
    def bw_values(self) -> list[float]:
        return [s.bw for s in self.surfaces]

    def coeffs_at(self, bw: float) -> SurfaceCoeffs:
        values = [_quadratic_eval(self.quadratics[k], bw) for k in COEFF_NAMES]
        return SurfaceCoeffs.from_array(bw, values)

    def solver_summary(self) -> dict:
        if self.solver is not None:
            return dict(self.solver)
        return {
            "iterations": int(sum(s.iterations for s in self.surfaces)),
            "converged": all(s.converged for s in self.surfaces),
        }

    def to_dict(self) -> dict:
        return {
            "bw_values": self.bw_values,
            "surface": [s.to_dict() for s in self.surfaces],
            "quadratics": {k: list(self.quadratics[k]) for k in COEFF_NAMES},
            "solver": self.solver_summary(),
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BwModel":
        quadratics = {}
        for k in COEFF_NAMES:
            alphas = data["quadratics"][k]
            if len(alphas) != 3:
                raise ValueError(f"quadratic for {k!r} needs 3 values, got {len(alphas)}")
            quadratics[k] = tuple(float(v) for v in alphas)
        surfaces = [
            SurfaceCoeffs(bw=float(s["bw"]), **{k: float(s[k]) for k in COEFF_NAMES})
            for s in data.get("surface", [])
        ]
        return cls(
            quadratics=quadratics,
            surfaces=surfaces,
            provenance=dict(data.get("provenance", {})),
            solver=data.get("solver"),
        )


def fit_bw_polynomials(per_bw: Iterable[tuple[float, SurfaceCoeffs]]) -> BwModel:
    """Fit ``coeff(BW) = α1 + α2 BW + α3 BW²`` for each of the six coefficients.

    Exactly three bandwidths interpolate; more use least squares.
    """
    pairs = sorted(((float(bw), c) for bw, c in per_bw), key=lambda t: t[0])
    bws = np.array([bw for bw, _ in pairs])
    if len(set(bws.tolist())) < 3 or len(set(bws.tolist())) != len(bws):
        raise InvalidArgumentError(
            f"need at least 3 distinct bandwidths (one surface each), got {bws.tolist()}"
        )
    vander = np.column_stack([np.ones_like(bws), bws, bws**2])
    values = np.array([c.as_array() for _, c in pairs])
    if len(bws) == 3:
        alphas = np.linalg.solve(vander, values)
    else:
        alphas, *_ = np.linalg.lstsq(vander, values, rcond=None)
    quadratics = {k: tuple(float(v) for v in alphas[:, i]) for i, k in enumerate(COEFF_NAMES)}
    surfaces = [replace(c, bw=bw) for bw, c in pairs]
    return BwModel(quadratics=quadratics, surfaces=surfaces)


def stationary_sigma(coeffs: SurfaceCoeffs, s_i: float) -> float:
    """Sigma where the denominator's derivative ``b + 2 d s + g S_i`` vanishes."""
    if not coeffs.d > 0:
        raise OutOfDomainError(
            f"d={coeffs.d:.6g} at bw={coeffs.bw} is not positive; the surface has no interior maximum"
        )
    sigma = -(coeffs.g * s_i + coeffs.b) / (2.0 * coeffs.d)
    if not sigma > 0:
        raise OutOfDomainError(f"predicted optimum sigma {sigma:.6g} is not positive")
    return float(sigma)


def predict_sigma_opt(model: BwModel, bw: float, s_i: float) -> float:
    return stationary_sigma(model.coeffs_at(bw), s_i)


def predict_so_max(model: BwModel, bw: float, s_i: float) -> float:
    coeffs = model.coeffs_at(bw)
    sigma = stationary_sigma(coeffs, s_i)
    den = float(coeffs.denominator(sigma, s_i))
    if not den > 0:
        raise OutOfDomainError(f"surface denominator {den:.6g} is not positive at the optimum")
    return 1.0 / den


# Printed constants: coefficient -> ((α1, α2, α3), decimal exponent).
PAPER_QUADRATICS: dict[str, tuple[tuple[float, float, float], int]] = {
    "a": ((0.8364, -1.504, 4.017), -1),
    "b": ((-0.1790, -2.572, -4.164), -1),
    "c": ((-0.4596, 3.313, -7.653), -2),
    "d": ((0.7983, -8.658, 1.575), -2),
    "f": ((0.7481, -6.817, 17.04), -4),
    "g": ((0.5562, -2.510, 6.352), -3),
}


def paper_coefficients() -> BwModel:
    """Published bandwidth quadratics, for diagnostics only.

    These constants do not reproduce the published optima through the
    closed-form predictor (e.g. bw=10, S_i=28.6 gives sigma of about 18.7),
    so pipelines always refit instead of using them.
    """
    quadratics = {
        k: tuple(float(Decimal(repr(v)).scaleb(exp)) for v in alphas)
        for k, (alphas, exp) in PAPER_QUADRATICS.items()
    }
    return BwModel(quadratics=quadratics, provenance={"source": "published constants"})
