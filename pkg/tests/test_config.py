"""
Tests for experiment configuration, runtime settings and the error table.
"""
import json

import pytest

from config.experiment import (
    BandwidthMode,
    DataSource,
    ExperimentConfig,
    build_experiment_config,
    config_hash,
    load_experiment_config,
)
from config.settings import get_settings
from core.errors import ConfigError, DataError, GwSpectraError, NumericError
from core.models import ModelKind


class TestDefaults:
    def test_published_values(self):
        cfg = load_experiment_config(None)
        assert cfg.window.window_len == 1024
        assert cfg.window.graph_size == 10
        assert cfg.kernel.n_scales == 2
        assert cfg.model.latent_dim == 512
        assert cfg.train.epochs == 100
        assert cfg.train.lr == pytest.approx(1e-3)
        assert cfg.train.kl_weight == pytest.approx(0.5)
        assert cfg.detection.delta == pytest.approx(0.1)
        assert cfg.detection.bandwidth_mode == BandwidthMode.SCALED
        assert cfg.seeds == [0, 1, 2, 3, 4]
        assert cfg.data.train_frac == pytest.approx(0.4)
        assert cfg.data.val_frac == pytest.approx(0.4)

    def test_empty_file_reproduces_defaults(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text("{}", encoding="utf-8")
        assert config_hash(load_experiment_config(path)) == config_hash(ExperimentConfig())

    def test_default_fixture_counts(self):
        synth = ExperimentConfig().data.synthetic
        assert synth.n_normal == 100
        assert synth.n_abnormal == 160


class TestValidation:
    def test_fractions_over_one(self):
        with pytest.raises(ConfigError, match="exceeds 1"):
            build_experiment_config({"data": {"train_frac": 0.7, "val_frac": 0.5}})

    def test_synthetic_window_mismatch(self):
        with pytest.raises(ConfigError, match="window_len"):
            build_experiment_config({"window": {"window_len": 512}})

    def test_manifest_needs_path(self):
        with pytest.raises(ConfigError, match="manifest_path"):
            build_experiment_config({"data": {"source": "manifest"}})

    def test_scale_count_positive(self):
        with pytest.raises(ConfigError):
            build_experiment_config({"kernel": {"n_scales": 0}})

    def test_seeds_non_empty(self):
        with pytest.raises(ConfigError):
            build_experiment_config({"seeds": []})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_experiment_config(tmp_path / "nope.json")

    def test_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigError, match="not valid JSON"):
            load_experiment_config(path)


class TestOverrides:
    def test_dotted_override(self):
        cfg = ExperimentConfig().with_overrides(**{"train.epochs": 0, "model.kind": ModelKind.GWVAE})
        assert cfg.train.epochs == 0
        assert cfg.model.kind == ModelKind.GWVAE

    def test_override_revalidates(self):
        with pytest.raises(ConfigError):
            ExperimentConfig().with_overrides(**{"data.source": DataSource.MANIFEST})

    def test_hash_changes_with_content(self):
        base = ExperimentConfig()
        assert config_hash(base) != config_hash(base.with_overrides(**{"detection.delta": 0.05}))

    def test_hash_is_stable(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"train": {"epochs": 3}}), encoding="utf-8")
        assert config_hash(load_experiment_config(path)) == config_hash(load_experiment_config(path))


class TestSettings:
    def test_env_prefix(self, monkeypatch, tmp_path):
        monkeypatch.setenv("GWSPECTRA_LOG_LEVEL", "DEBUG")
        monkeypatch.setenv("GWSPECTRA_OUTPUT_DIR", str(tmp_path / "out"))
        settings = get_settings()
        assert settings.log_level == "DEBUG"
        assert settings.ensure_directories() == tmp_path / "out"
        assert (tmp_path / "out").is_dir()

    def test_singleton(self):
        assert get_settings() is get_settings()


class TestErrors:
    @pytest.mark.parametrize(
        "error, code",
        [(ConfigError, 2), (DataError, 3), (NumericError, 4)],
    )
    def test_exit_codes(self, error, code):
        assert error("x").exit_code == code
        assert issubclass(error, GwSpectraError)

    def test_value_error_contract(self):
        assert issubclass(ConfigError, ValueError)
        assert issubclass(DataError, ValueError)
