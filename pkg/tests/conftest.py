import pytest

from gaussopt.pipeline import ExperimentConfig, run_holdout, run_training


@pytest.fixture(scope="session")
def default_config():
    return ExperimentConfig.default()


@pytest.fixture(scope="session")
def trained(default_config):
    """(model, training rows, holdout rows) for the bundled configuration."""
    model, rows = run_training(default_config)
    holdout = run_holdout(model, default_config)
    return model, rows, holdout
