import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussopt import fitting
from gaussopt.errors import DegenerateDataError, InvalidArgumentError, OutOfDomainError
from gaussopt.fitting import (
    COEFF_NAMES,
    PAPER_QUADRATICS,
    BwModel,
    FitSample,
    SurfaceCoeffs,
    fit_bw_polynomials,
    fit_surface,
    paper_coefficients,
    predict_sigma_opt,
    predict_so_max,
    stationary_sigma,
)

SIGMA_GRID = np.linspace(0.3, 3.5, 20)
S_I_LEVELS = (10.0, 30.0, 50.0)
PLANTED = (0.1, -0.05, 0.002, 0.03, 1e-4, 5e-4)


def reciprocal_quadratic(p, sigma, s_i):
    a, b, c, d, f, g = p
    return 1.0 / (a + b * sigma + c * s_i + d * sigma**2 + f * s_i**2 + g * sigma * s_i)


def planted_samples(p, bw=7.0, sigmas=SIGMA_GRID, levels=S_I_LEVELS):
    return [
        FitSample(sigma_g=float(s), s_i=si, s_o=float(reciprocal_quadratic(p, s, si)), bw=bw)
        for si in levels
        for s in sigmas
    ]


def random_valid_coeffs(rng):
    """Draw coefficients with d > 0 and a positive denominator on the grid."""
    sg, si = np.meshgrid(SIGMA_GRID, S_I_LEVELS)
    while True:
        sign = rng.choice([-1.0, 1.0], size=3)
        p = (
            rng.uniform(0.05, 0.3),
            -rng.uniform(0.01, 0.2),
            sign[0] * rng.uniform(1e-3, 5e-3),
            rng.uniform(0.01, 0.08),
            sign[1] * rng.uniform(2e-5, 2e-4),
            sign[2] * rng.uniform(1e-4, 1e-3),
        )
        den = 1.0 / reciprocal_quadratic(p, sg, si)
        if np.all(den > 1e-3):
            return p


def max_rel_err(got: SurfaceCoeffs, want):
    return max(abs(x - y) / abs(y) for x, y in zip(got.as_array(), want))


class TestFitSurface:
    def test_recovers_planted(self):
        got = fit_surface(planted_samples(PLANTED), 7.0)
        assert got.converged
        assert max_rel_err(got, PLANTED) <= 1e-6

    def test_single_s_i_degenerate(self):
        samples = planted_samples(PLANTED, levels=(30.0,))
        with pytest.raises(DegenerateDataError):
            fit_surface(samples, 7.0)

    def test_two_s_i_levels_rank_deficient(self):
        samples = planted_samples(PLANTED, levels=(20.0, 40.0))
        with pytest.raises(DegenerateDataError):
            fit_surface(samples, 7.0)

    def test_too_few_samples(self):
        with pytest.raises(DegenerateDataError):
            fit_surface(planted_samples(PLANTED)[:11], 7.0)

    def test_refit_is_fixed_point(self):
        first = fit_surface(planted_samples(PLANTED), 7.0)
        again = fit_surface(planted_samples(first.as_array()), 7.0)
        assert max_rel_err(again, first.as_array()) <= 1e-9

    def test_noisy_data_improves_on_linear_start(self):
        rng = np.random.default_rng(0)
        samples = [
            FitSample(s.sigma_g, s.s_i, s.s_o * (1 + 0.01 * rng.standard_normal()), s.bw)
            for s in planted_samples(PLANTED)
        ]
        sigma = np.array([s.sigma_g for s in samples])
        s_i = np.array([s.s_i for s in samples])
        s_o = np.array([s.s_o for s in samples])
        design = fitting._design(sigma, s_i)
        linear, *_ = np.linalg.lstsq(design, 1 / s_o, rcond=None)
        fit = fit_surface(samples, 7.0)
        sse = lambda p: np.sum((s_o - reciprocal_quadratic(p, sigma, s_i)) ** 2)
        assert fit.converged
        assert sse(fit.as_array()) <= sse(linear)
        assert max_rel_err(fit, PLANTED) < 0.5

    def test_non_convergence_flagged(self, monkeypatch):
        rng = np.random.default_rng(1)
        samples = [
            FitSample(s.sigma_g, s.s_i, s.s_o * (1 + 0.05 * rng.standard_normal()), s.bw)
            for s in planted_samples(PLANTED)
        ]
        monkeypatch.setattr(fitting, "MAX_ITERATIONS", 1)
        with pytest.warns(RuntimeWarning, match="did not converge"):
            fit = fit_surface(samples, 7.0)
        assert not fit.converged and fit.iterations == 1

    @pytest.mark.parametrize("seed", range(10))
    def test_random_recovery(self, seed):
        p = random_valid_coeffs(np.random.default_rng(seed))
        assert max_rel_err(fit_surface(planted_samples(p), 5.0), p) <= 1e-6


class TestBwPolynomials:
    def surfaces(self, values_by_bw):
        return [
            (bw, SurfaceCoeffs.from_array(bw, [v] * 6)) for bw, v in values_by_bw.items()
        ]

    def test_constant(self):
        model = fit_bw_polynomials(self.surfaces({5: 1.0, 7: 1.0, 10: 1.0}))
        for k in COEFF_NAMES:
            assert model.quadratics[k] == pytest.approx((1.0, 0.0, 0.0), abs=1e-12)

    def test_square_law(self):
        model = fit_bw_polynomials(self.surfaces({5: 25.0, 7: 49.0, 10: 100.0}))
        assert model.quadratics["a"] == pytest.approx((0.0, 0.0, 1.0), abs=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(
        bws=st.lists(st.floats(1.0, 20.0), min_size=3, max_size=3, unique=True).filter(
            lambda b: min(abs(x - y) for i, x in enumerate(b) for y in b[i + 1 :]) > 0.5
        ),
        values=st.lists(st.floats(-10, 10), min_size=3, max_size=3),
    )
    def test_three_point_interpolation(self, bws, values):
        model = fit_bw_polynomials(self.surfaces(dict(zip(bws, values))))
        for bw, v in zip(bws, values):
            assert model.coeffs_at(bw).a == pytest.approx(v, abs=1e-9)

    def test_least_squares_with_more_points(self):
        bws = [4.0, 5.0, 7.0, 10.0]
        model = fit_bw_polynomials(self.surfaces({b: 2 + 0.5 * b - 0.1 * b * b for b in bws}))
        assert model.quadratics["g"] == pytest.approx((2.0, 0.5, -0.1), abs=1e-10)

    def test_reproduces_training_surfaces(self):
        per_bw = [
            (bw, SurfaceCoeffs.from_array(bw, random_valid_coeffs(np.random.default_rng(int(bw)))))
            for bw in (5.0, 7.0, 10.0)
        ]
        model = fit_bw_polynomials(per_bw)
        for bw, coeffs in per_bw:
            assert np.allclose(model.coeffs_at(bw).as_array(), coeffs.as_array(), rtol=0, atol=1e-9)

    @pytest.mark.parametrize("bws", [(5.0, 7.0), (5.0, 5.0, 7.0)])
    def test_needs_three_distinct(self, bws):
        with pytest.raises(InvalidArgumentError, match="3 distinct"):
            fit_bw_polynomials([(b, SurfaceCoeffs.from_array(b, [1.0] * 6)) for b in bws])


def constant_model(**values):
    coeffs = {k: 0.0 for k in COEFF_NAMES}
    coeffs.update(values)
    return BwModel(quadratics={k: (v, 0.0, 0.0) for k, v in coeffs.items()})


class TestPredictors:
    @pytest.mark.parametrize("s_i", [1.0, 28.6, 1e3])
    def test_hand_built_sigma(self, s_i):
        assert predict_sigma_opt(constant_model(b=-2.0, d=1.0, a=2.0), 10, s_i) == 1.0

    def test_negative_denominator(self):
        model = constant_model(a=0.01, b=-2.0, d=1.0)
        assert predict_sigma_opt(model, 10, 5.0) == 1.0
        with pytest.raises(OutOfDomainError):
            predict_so_max(model, 10, 5.0)

    def test_nonpositive_d(self):
        with pytest.raises(OutOfDomainError):
            predict_sigma_opt(constant_model(a=1.0, b=-2.0, d=-1.0), 10, 5.0)
        with pytest.raises(OutOfDomainError):
            predict_sigma_opt(constant_model(a=1.0, b=-2.0), 10, 5.0)

    def test_nonpositive_sigma(self):
        with pytest.raises(OutOfDomainError):
            predict_sigma_opt(constant_model(a=1.0, b=2.0, d=1.0), 10, 5.0)

    def test_stationary_point_and_grid_argmax(self):
        coeffs = SurfaceCoeffs.from_array(7.0, PLANTED)
        for s_i in S_I_LEVELS:
            s = stationary_sigma(coeffs, s_i)
            assert abs(coeffs.b + 2 * coeffs.d * s + coeffs.g * s_i) <= 1e-9
            grid = np.round(np.arange(0.3, 3.5 + 1e-9, 0.001), 3)
            assert abs(grid[np.argmax(coeffs.value(grid, s_i))] - s) <= 0.001

    def test_so_max_is_surface_value(self):
        model = fit_bw_polynomials(
            [(bw, SurfaceCoeffs.from_array(bw, PLANTED)) for bw in (5.0, 7.0, 10.0)]
        )
        s = predict_sigma_opt(model, 7.0, 30.0)
        assert predict_so_max(model, 7.0, 30.0) == pytest.approx(
            reciprocal_quadratic(PLANTED, s, 30.0), rel=1e-12
        )


class TestPaperFixture:
    def test_printed_constants(self):
        assert PAPER_QUADRATICS["a"] == ((0.8364, -1.504, 4.017), -1)
        assert PAPER_QUADRATICS["g"] == ((0.5562, -2.510, 6.352), -3)

    def test_a_at_one(self):
        assert paper_coefficients().coeffs_at(1.0).a == pytest.approx(0.33494, abs=1e-12)

    def test_g_at_ten(self):
        assert paper_coefficients().coeffs_at(10.0).g == pytest.approx(0.6107, abs=1e-4)

    def test_roundtrip(self):
        model = paper_coefficients()
        back = BwModel.from_dict(json.loads(json.dumps(model.to_dict())))
        assert back.quadratics == model.quadratics

    def test_model_json_schema(self):
        model = fit_bw_polynomials(
            [(bw, SurfaceCoeffs.from_array(bw, PLANTED, iterations=3)) for bw in (5.0, 7.0, 10.0)]
        )
        data = model.to_dict()
        assert data["bw_values"] == [5.0, 7.0, 10.0]
        assert set(data["surface"][0]) == {"bw", *COEFF_NAMES}
        assert set(data["quadratics"]) == set(COEFF_NAMES)
        assert data["solver"] == {"iterations": 9, "converged": True}
        back = BwModel.from_dict(json.loads(json.dumps(data)))
        assert back.to_dict() == data
