import numpy as np
import pytest

from gaussopt.errors import InvalidArgumentError
from gaussopt.pipeline import ExperimentConfig, SeedSet, make_noisy, run_holdout, run_training
from gaussopt.sweep import SweepGrid


def test_default_config_matches_bundled_file(default_config):
    assert default_config == ExperimentConfig()
    assert default_config.training_m == [5, 7, 10]
    assert default_config.training_variances == [30.0, 35.0, 40.0]
    assert default_config.holdout_m == [8, 4, 12]


def test_training_cardinality(trained):
    model, rows, _ = trained
    assert len(rows) == 9
    assert len(model.surfaces) == 3
    assert model.bw_values == [5.0, 7.0, 10.0]
    assert model.provenance["s_i_units"] == "linear"


def test_training_rows_are_ordered(trained):
    _, rows, _ = trained
    assert [(r.bw, r.noise_variance) for r in rows] == [
        (m, v) for m in (5.0, 7.0, 10.0) for v in (30.0, 35.0, 40.0)
    ]


def test_filtering_helps_every_row(trained):
    _, rows, holdout = trained
    assert all(r.s_o_max_emp > r.s_i for r in rows + holdout)


def test_seed_overrides():
    seeds = SeedSet(base=1, signal={5: 99}, noise={"5:30": 7}, holdout_noise={"8:30": 8})
    assert seeds.signal_seed(5) == 99
    assert seeds.noise_seed(5, 30.0) == 7
    assert seeds.noise_seed(8, 30.0, holdout=True) == 8
    assert seeds.signal_seed(7) == seeds.signal_seed(10)
    assert seeds.noise_seed(7, 30.0) != seeds.noise_seed(7, 30.0, holdout=True)
    assert seeds.signal_seed(7) != SeedSet(base=2).signal_seed(7)


def test_shared_noise_draw_scales_with_variance(default_config):
    a = make_noisy(default_config, 5, 30.0)
    b = make_noisy(default_config, 7, 40.0)
    assert np.allclose(b.noise, a.noise * np.sqrt(40.0 / 30.0), rtol=1e-12)


def test_holdout_noise_is_fresh(default_config):
    train = make_noisy(default_config, 8, 30.0)
    held = make_noisy(default_config, 8, 30.0, holdout=True)
    assert np.array_equal(train.clean.samples, held.clean.samples)
    assert not np.allclose(train.noise, held.noise)


def test_empty_holdout(trained, default_config):
    model, _, _ = trained
    config = ExperimentConfig(holdout_m=[])
    assert run_holdout(model, config) == []


def test_holdout_out_of_domain_rows_not_fatal(trained):
    from gaussopt.fitting import BwModel

    model, _, _ = trained
    broken = BwModel(quadratics={**model.quadratics, "d": (-1.0, 0.0, 0.0)})
    config = ExperimentConfig(holdout_m=[8], holdout_variances=[30.0], grid=SweepGrid(0.5, 1.5, 0.1))
    (row,) = run_holdout(broken, config)
    assert row.sigma_opt_pred is None and row.s_o_max_pred is None
    assert "not positive" in row.error
    assert row.sigma_opt_emp > 0


def test_requires_three_training_bandwidths():
    with pytest.raises(InvalidArgumentError, match="3 distinct"):
        run_training(ExperimentConfig(training_m=[5, 10]))


def test_from_mapping_overrides():
    config = ExperimentConfig.from_mapping(
        {
            "experiment": {"length": 512, "training_m": [4, 6, 9], "amplitude_scale": 5},
            "grid": {"sigma_min": 0.5, "sigma_max": 2.0, "step": 0.05},
            "seeds": {"base": 3, "signal": {"4": 11}, "noise": {"4:30": 12}},
        }
    )
    assert config.length == 512 and config.training_m == [4, 6, 9]
    assert config.grid.count == 31
    assert config.seeds.signal_seed(4) == 11 and config.seeds.noise_seed(4, 30) == 12


def test_full_determinism(default_config):
    small = ExperimentConfig(grid=SweepGrid(0.4, 2.0, 0.05))
    m1, r1 = run_training(small)
    m2, r2 = run_training(small)
    assert m1.to_dict() == m2.to_dict() and r1 == r2
