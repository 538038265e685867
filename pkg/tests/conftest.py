"""
Shared fixtures: toy graphs for the numerical tests and a reduced
synthetic experiment that trains in seconds.
"""
import json

import numpy as np
import pytest

from config.experiment import ExperimentConfig, KernelConfig, build_experiment_config
from config.settings import reset_settings
from core.models import ModelKind

from .helpers import make_prepared, small_config_payload


@pytest.fixture(autouse=True)
def _fresh_settings():
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def small_config() -> ExperimentConfig:
    return build_experiment_config(small_config_payload())


@pytest.fixture
def small_config_file(tmp_path):
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(small_config_payload()), encoding="utf-8")
    return path


@pytest.fixture
def kernel_cfg() -> KernelConfig:
    return KernelConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def toy_batch(rng):
    return [make_prepared(rng, graph_id=f"toy#{i}") for i in range(2)]


@pytest.fixture(params=[ModelKind.GWAE, ModelKind.GWVAE], ids=["gwae", "gwvae"])
def model_kind(request):
    return request.param
