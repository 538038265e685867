"""
Tests for the training loop and the learning-rate schedule.
"""
import numpy as np
import pytest

import training.trainer as trainer_module
from config.experiment import DecayMode, ModelConfig, TrainConfig
from core.errors import DataError, NumericError
from core.models import Activation, ModelKind
from training.trainer import lr_at_epoch, mean_reconstruction_error, train

from .helpers import make_params, make_prepared


@pytest.fixture
def graphs(rng):
    return [make_prepared(rng, graph_id=f"t#{i}") for i in range(7)]


def _cfg(**overrides):
    base = {"epochs": 5, "lr": 0.01, "batch_size": 3, "seed": 0}
    return TrainConfig(**{**base, **overrides})


SMALL_MODEL = ModelConfig(latent_dim=2)


class TestSchedule:
    def test_step_decay(self):
        cfg = TrainConfig()
        assert lr_at_epoch(cfg, 1) == pytest.approx(1e-3)
        assert lr_at_epoch(cfg, 50) == pytest.approx(1e-3)
        assert lr_at_epoch(cfg, 51) == pytest.approx(1e-4)
        assert lr_at_epoch(cfg, 101) == pytest.approx(1e-5)

    def test_l2_mode_keeps_rate(self):
        cfg = TrainConfig(decay_mode=DecayMode.L2, weight_decay=1e-4)
        assert lr_at_epoch(cfg, 1) == lr_at_epoch(cfg, 99) == cfg.lr

    def test_one_based(self):
        with pytest.raises(ValueError):
            lr_at_epoch(TrainConfig(), 0)


class TestTrain:
    def test_zero_epochs_returns_init(self, graphs, caplog):
        result = train(ModelKind.GWAE, graphs, [], _cfg(epochs=0), SMALL_MODEL)
        assert result.epochs_completed == 0
        assert result.history == []
        np.testing.assert_array_equal(result.params.tensors["enc1.theta"], np.ones(9))
        assert "epochs = 0" in caplog.text

    def test_loss_decreases(self, graphs, model_kind):
        result = train(model_kind, graphs, graphs[:2], _cfg(epochs=60), SMALL_MODEL)
        assert len(result.history) == 60
        assert result.loss_history[-1] < result.loss_history[0]
        assert all(v is not None for v in result.val_history)

    def test_one_update_per_batch(self, graphs, monkeypatch):
        calls = []
        real_step = trainer_module.adam_step

        def counting_step(*args, **kwargs):
            calls.append(1)
            return real_step(*args, **kwargs)

        monkeypatch.setattr(trainer_module, "adam_step", counting_step)
        train(ModelKind.GWAE, graphs, [], _cfg(epochs=4, batch_size=3), SMALL_MODEL)
        # 7 graphs in batches of 3 -> 3 updates per epoch
        assert len(calls) == 12

    def test_history_records_schedule(self, graphs):
        cfg = _cfg(epochs=4, lr_decay_every=2, lr_decay_factor=0.5)
        result = train(ModelKind.GWAE, graphs, [], cfg, SMALL_MODEL)
        assert [r.lr for r in result.history] == pytest.approx([0.01, 0.01, 0.005, 0.005])
        assert result.final_lr == pytest.approx(0.005)
        assert all(r.val_recon is None for r in result.history)

    def test_same_seed_same_params(self, graphs, model_kind):
        a = train(model_kind, graphs, [], _cfg(epochs=3), SMALL_MODEL)
        b = train(model_kind, graphs, [], _cfg(epochs=3), SMALL_MODEL)
        for name in a.params.names():
            np.testing.assert_array_equal(a.params.tensors[name], b.params.tensors[name])

    def test_different_seed_different_params(self, graphs):
        a = train(ModelKind.GWAE, graphs, [], _cfg(epochs=1, seed=0), SMALL_MODEL)
        b = train(ModelKind.GWAE, graphs, [], _cfg(epochs=1, seed=1), SMALL_MODEL)
        assert not np.array_equal(a.params.tensors["enc1.weight"], b.params.tensors["enc1.weight"])

    def test_weight_decay_changes_trajectory(self, graphs):
        plain = train(ModelKind.GWAE, graphs, [], _cfg(epochs=2, decay_mode=DecayMode.L2), SMALL_MODEL)
        decayed = train(
            ModelKind.GWAE, graphs, [], _cfg(epochs=2, decay_mode=DecayMode.L2, weight_decay=0.1), SMALL_MODEL,
        )
        assert not np.allclose(plain.params.tensors["dec_fc2.weight"], decayed.params.tensors["dec_fc2.weight"])

    def test_noiseless_gwvae_trains_like_linear_gwae(self, graphs, rng):
        gwae = make_params(ModelKind.GWAE, rng, activation=Activation.IDENTITY)
        gwvae = make_params(ModelKind.GWVAE, rng)
        for suffix in ("theta", "weight", "bias"):
            gwvae.tensors[f"enc1.{suffix}"] = gwae.tensors[f"enc1.{suffix}"].copy()
            gwvae.tensors[f"head_mu.{suffix}"] = gwae.tensors[f"enc2.{suffix}"].copy()
        for name in ("dec_fc1.weight", "dec_fc1.bias", "dec_fc2.weight", "dec_fc2.bias"):
            gwvae.tensors[name] = gwae.tensors[name].copy()
        logsigma_before = gwvae.tensors["head_logsigma.weight"].copy()

        cfg = _cfg(epochs=3, kl_weight=0.0, latent_noise_scale=0.0)
        a = train(ModelKind.GWAE, graphs, [], cfg, params=gwae)
        b = train(ModelKind.GWVAE, graphs, [], cfg, params=gwvae)

        np.testing.assert_allclose(b.loss_history, a.loss_history, rtol=1e-10)
        np.testing.assert_allclose(b.params.tensors["head_mu.weight"], a.params.tensors["enc2.weight"], atol=1e-12)
        np.testing.assert_array_equal(b.params.tensors["head_logsigma.weight"], logsigma_before)

    def test_divergence_reports_epoch(self, graphs, monkeypatch):
        def exploding(*args, **kwargs):
            raise NumericError("non-finite values in H1 (graph t#0)")

        monkeypatch.setattr(trainer_module, "gradients", exploding)
        with pytest.raises(NumericError, match="diverged at epoch 1"):
            train(ModelKind.GWAE, graphs, [], _cfg(), SMALL_MODEL)

    def test_non_finite_params_diverge(self, rng):
        good = make_prepared(rng)
        params = make_params(ModelKind.GWAE, rng)
        params.tensors["enc1.theta"][0] = np.inf
        with pytest.raises(NumericError, match="diverged"):
            train(ModelKind.GWAE, [good], [], _cfg(epochs=1), params=params)

    def test_empty_training_set(self):
        with pytest.raises(DataError, match="empty"):
            train(ModelKind.GWAE, [], [], _cfg(), SMALL_MODEL)

    def test_mixed_shapes_rejected(self, rng):
        graphs = [make_prepared(rng, n_nodes=3), make_prepared(rng, n_nodes=4)]
        with pytest.raises(DataError, match="expected"):
            train(ModelKind.GWAE, graphs, [], _cfg(), SMALL_MODEL)

    def test_params_kind_must_match(self, graphs, rng):
        with pytest.raises(DataError, match="gwvae"):
            train(ModelKind.GWVAE, graphs, [], _cfg(), params=make_params(ModelKind.GWAE, rng))


def test_mean_reconstruction_error(rng, graphs):
    params = make_params(ModelKind.GWAE, rng)
    assert mean_reconstruction_error(params, []) is None
    value = mean_reconstruction_error(params, graphs[:2])
    assert value > 0.0
