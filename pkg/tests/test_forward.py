"""
Tests for the SGWConv layer and the GWAE / GWVAE forward passes.
"""
import math

import numpy as np
import pytest

from core.errors import DataError
from core.models import Activation, ModelKind
from gwae.forward import (
    decode,
    encode_gwae,
    encode_gwvae,
    filter_matrix,
    forward,
    reconstruct,
    reparameterize,
    sgwconv_forward,
)
from gwae.params import ModelParams, SGWConvLayer, init_params, parameter_shapes

from .helpers import make_params, make_prepared


class TestSGWConv:
    def test_unit_filter_is_gram_of_operator(self, rng):
        item = make_prepared(rng, n_nodes=5, dim=3)
        P = item.op.P
        layer = SGWConvLayer(theta=np.ones(P.shape[0]), weight=np.eye(3))
        out = sgwconv_forward(layer, item.X, item.op, Activation.IDENTITY)
        np.testing.assert_allclose(out, P.T @ P @ item.X, atol=1e-12)

    def test_filter_matrix_symmetric(self, rng):
        item = make_prepared(rng, n_nodes=4)
        theta = rng.normal(size=item.op.n_rows)
        M = filter_matrix(theta, item.op)
        np.testing.assert_allclose(M, M.T, atol=1e-12)
        np.testing.assert_allclose(M, item.op.P.T @ np.diag(theta) @ item.op.P, atol=1e-12)

    def test_relu_and_bias(self, rng):
        item = make_prepared(rng, n_nodes=3, dim=2)
        layer = SGWConvLayer(
            theta=np.zeros(item.op.n_rows),
            weight=np.eye(2),
            bias=np.array([-1.0, 2.0]),
        )
        out = sgwconv_forward(layer, item.X, item.op)
        np.testing.assert_array_equal(out, np.tile([0.0, 2.0], (3, 1)))

    def test_theta_length_checked(self, rng):
        item = make_prepared(rng)
        with pytest.raises(DataError, match="theta"):
            filter_matrix(np.ones(item.op.n_rows + 1), item.op)

    def test_node_count_checked(self, rng):
        item = make_prepared(rng, n_nodes=3, dim=2)
        layer = SGWConvLayer(theta=np.ones(item.op.n_rows), weight=np.eye(2))
        with pytest.raises(DataError, match="nodes"):
            sgwconv_forward(layer, np.ones((4, 2)), item.op)

    def test_feature_count_checked(self, rng):
        item = make_prepared(rng, n_nodes=3, dim=2)
        layer = SGWConvLayer(theta=np.ones(item.op.n_rows), weight=np.eye(3))
        with pytest.raises(DataError, match="d_in"):
            sgwconv_forward(layer, item.X, item.op)


class TestParams:
    def test_gwae_shapes(self):
        shapes = parameter_shapes(ModelKind.GWAE, 1024, 512, 30)
        assert shapes["enc1.theta"] == (30,)
        assert shapes["enc1.weight"] == (1024, 1024)
        assert shapes["enc2.weight"] == (1024, 512)
        assert shapes["dec_fc1.weight"] == (512, 1024)
        assert shapes["dec_fc2.weight"] == (1024, 1024)

    def test_default_gwae_parameter_count(self):
        shapes = parameter_shapes(ModelKind.GWAE, 1024, 512, 30)
        assert shapes["enc1.bias"] == (1024,)
        assert shapes["enc2.bias"] == (512,)
        assert shapes["dec_fc1.bias"] == shapes["dec_fc2.bias"] == (1024,)
        weights = 1024 * 1024 + 1024 * 512 + 512 * 1024 + 1024 * 1024
        thetas = 2 * 30
        biases = 1024 + 512 + 1024 + 1024
        assert sum(math.prod(s) for s in shapes.values()) == weights + thetas + biases == 3_149_372
        params = init_params(ModelKind.GWAE, 1024, 512, 10, 2, np.random.default_rng(0))
        assert params.count() == 3_149_372

    def test_gwvae_heads(self):
        shapes = parameter_shapes(ModelKind.GWVAE, 8, 4, 6, use_bias=False)
        assert "enc2.weight" not in shapes
        assert shapes["head_mu.weight"] == shapes["head_logsigma.weight"] == (8, 4)
        assert not any(k.startswith("head") and k.endswith(".bias") for k in shapes)

    def test_init(self, rng):
        params = init_params(ModelKind.GWAE, 4, 2, 3, 2, rng)
        assert params.n_rows == 9
        np.testing.assert_array_equal(params.tensors["enc1.theta"], np.ones(9))
        np.testing.assert_array_equal(params.tensors["enc1.bias"], np.zeros(4))
        assert np.all(np.abs(params.tensors["enc1.weight"]) <= 0.5)

    def test_init_is_seeded(self):
        a = init_params(ModelKind.GWVAE, 4, 2, 3, 2, np.random.default_rng(3))
        b = init_params(ModelKind.GWVAE, 4, 2, 3, 2, np.random.default_rng(3))
        for name in a.names():
            np.testing.assert_array_equal(a.tensors[name], b.tensors[name])

    def test_copy_is_deep(self, rng):
        params = make_params(ModelKind.GWAE, rng)
        clone = params.copy()
        clone.tensors["enc1.weight"][0, 0] += 1.0
        assert params.tensors["enc1.weight"][0, 0] != clone.tensors["enc1.weight"][0, 0]


class TestForward:
    def test_shapes(self, rng, model_kind):
        item = make_prepared(rng, n_nodes=3, dim=4)
        params = make_params(model_kind, rng)
        cache = forward(params, item.X, item.op)
        assert cache.Z.shape == (3, 2)
        assert cache.X_hat.shape == (3, 4)
        np.testing.assert_array_equal(reconstruct(params, item.X, item.op), cache.X_hat)

    def test_gwae_encoder_matches_cache(self, rng):
        item = make_prepared(rng)
        params = make_params(ModelKind.GWAE, rng)
        np.testing.assert_allclose(encode_gwae(params, item.X, item.op).Z, forward(params, item.X, item.op).Z)

    def test_gwvae_mean_latent_without_epsilon(self, rng):
        item = make_prepared(rng)
        params = make_params(ModelKind.GWVAE, rng)
        mu, logsigma = encode_gwvae(params, item.X, item.op)
        cache = forward(params, item.X, item.op)
        np.testing.assert_allclose(cache.Z, mu)
        np.testing.assert_allclose(cache.logsigma, logsigma)
        np.testing.assert_allclose(decode(params, mu), cache.X_hat)

    def test_gwvae_sample_uses_epsilon(self, rng):
        item = make_prepared(rng)
        params = make_params(ModelKind.GWVAE, rng)
        eps = rng.normal(size=(3, 2))
        cache = forward(params, item.X, item.op, eps)
        np.testing.assert_allclose(cache.Z, cache.mu + np.exp(cache.logsigma) * eps)

    def test_gwvae_without_noise_matches_linear_gwae(self, rng):
        item = make_prepared(rng)
        gwae = make_params(ModelKind.GWAE, rng, activation=Activation.IDENTITY)
        gwvae = make_params(ModelKind.GWVAE, rng)
        for suffix in ("theta", "weight", "bias"):
            gwvae.tensors[f"enc1.{suffix}"] = gwae.tensors[f"enc1.{suffix}"].copy()
            gwvae.tensors[f"head_mu.{suffix}"] = gwae.tensors[f"enc2.{suffix}"].copy()
        for name in ("dec_fc1.weight", "dec_fc1.bias", "dec_fc2.weight", "dec_fc2.bias"):
            gwvae.tensors[name] = gwae.tensors[name].copy()
        np.testing.assert_allclose(
            reconstruct(gwvae, item.X, item.op),
            reconstruct(gwae, item.X, item.op),
            atol=1e-12,
        )


class TestReparameterize:
    def test_clamps_logsigma(self):
        mu = np.zeros((1, 2))
        z = reparameterize(mu, np.array([[20.0, -20.0]]), np.ones((1, 2)))
        np.testing.assert_allclose(z, [[np.exp(10.0), np.exp(-10.0)]])

    def test_shape_mismatch(self):
        with pytest.raises(DataError, match="shape mismatch"):
            reparameterize(np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 3)))

    def test_standard_normal_draws(self):
        epsilon = np.random.default_rng(0).standard_normal((100_000, 1))
        z = reparameterize(np.zeros_like(epsilon), np.zeros_like(epsilon), epsilon)
        assert abs(z.mean()) <= 0.02
        assert abs(z.var() - 1.0) <= 0.05

    def test_decode_is_row_local(self, rng):
        params = make_params(ModelKind.GWAE, rng, dim=8, latent=4)
        Z = rng.normal(size=(5, 4))
        moved = Z.copy()
        moved[2] += 1.0
        before, after = decode(params, Z), decode(params, moved)
        untouched = [0, 1, 3, 4]
        np.testing.assert_allclose(after[untouched], before[untouched], rtol=0, atol=1e-12)
        assert not np.allclose(after[2], before[2])

    def test_decode_checks_latent_width(self, rng):
        params = make_params(ModelKind.GWAE, rng)
        with pytest.raises(DataError, match="decoder expects"):
            decode(params, np.zeros((3, 5)))


def test_params_need_a_graph(rng):
    with pytest.raises(ValueError):
        ModelParams(kind=ModelKind.GWAE, input_dim=2, latent_dim=1, n_nodes=1, n_scales=1, tensors={})
