"""
Training loop: seeded shuffles, mini-batch Adam, stepwise lr decay.
"""
import logging
import math
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from config.defaults import UNPUBLISHED_DEFAULTS
from config.experiment import DecayMode, ModelConfig, TrainConfig
from core.errors import DataError, NumericError
from core.models import ModelKind
from core.rng import RngStreams
from graphs.wavelets import PreparedGraph
from gwae.forward import reconstruct
from gwae.params import ModelParams, init_params

from .backprop import gradients
from .losses import reconstruction_error
from .optimizer import OptimizerState, adam_step

logger = logging.getLogger(__name__)


class EpochRecord(BaseModel):
    epoch: int
    train_loss: float
    val_recon: Optional[float] = None
    lr: float


class TrainResult(BaseModel):
    """Trained parameters plus the per-epoch loss / validation history."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    params: ModelParams
    history: list[EpochRecord]
    epochs_completed: int
    final_lr: float
    seed: int

    @property
    def loss_history(self) -> list[float]:
        return [r.train_loss for r in self.history]

    @property
    def val_history(self) -> list[Optional[float]]:
        return [r.val_recon for r in self.history]


def lr_at_epoch(cfg: TrainConfig, epoch: int) -> float:
    """
    Learning rate used during ``epoch`` (1-based).

    In step mode the rate is multiplied by ``lr_decay_factor`` once every
    ``lr_decay_every`` epochs, so with the defaults epochs 1-50 run at 1e-3
    and epoch 51 at 1e-4. L2 mode keeps the rate fixed.
    """
    if epoch < 1:
        raise ValueError(f"epochs are 1-based, got {epoch}")
    if cfg.decay_mode == DecayMode.L2:
        return cfg.lr
    return cfg.lr * cfg.lr_decay_factor ** ((epoch - 1) // cfg.lr_decay_every)


def mean_reconstruction_error(params: ModelParams, graphs: list[PreparedGraph]) -> Optional[float]:
    """Mean ||X - X_hat||_F^2 over graphs (mean latent for GWVAE); None when empty."""
    if not graphs:
        return None
    return float(np.mean([reconstruction_error(g.X, reconstruct(params, g.X, g.op)) for g in graphs]))


def _draw_epsilons(
    params: ModelParams,
    batch: list[PreparedGraph],
    rng: np.random.Generator,
    scale: float,
) -> Optional[list[np.ndarray]]:
    if params.kind != ModelKind.GWVAE:
        return None
    return [scale * rng.standard_normal((g.graph.n_nodes, params.latent_dim)) for g in batch]


def _check_shapes(train_graphs: list[PreparedGraph]) -> tuple[int, int, int]:
    first = train_graphs[0]
    n_nodes, input_dim = first.X.shape
    n_scales = first.op.n_scales
    for g in train_graphs[1:]:
        if g.X.shape != (n_nodes, input_dim) or g.op.n_scales != n_scales:
            raise DataError(
                f"graph {g.graph_id} has shape {g.X.shape} / J={g.op.n_scales}, "
                f"expected {(n_nodes, input_dim)} / J={n_scales}"
            )
    return n_nodes, input_dim, n_scales


def train(
    model_kind: ModelKind,
    train_graphs: list[PreparedGraph],
    val_graphs: list[PreparedGraph],
    cfg: TrainConfig,
    model_cfg: Optional[ModelConfig] = None,
    params: Optional[ModelParams] = None,
    on_epoch: Optional[Callable[[EpochRecord], None]] = None,
) -> TrainResult:
    """
    Fit a GWAE or GWVAE on normal graphs.

    Args:
        model_kind: GWAE or GWVAE
        train_graphs: Normal training graphs with operators
        val_graphs: Normal validation graphs, only read for monitoring
        cfg: Training hyperparameters; ``cfg.seed`` roots every random stream
        model_cfg: Latent size / bias / latent activation (defaults if None)
        params: Start from these parameters instead of a fresh init
        on_epoch: Called with each EpochRecord (progress display hook)

    Returns:
        TrainResult with the final parameters and per-epoch history
    """
    if not train_graphs:
        raise DataError("training set is empty")
    model_cfg = model_cfg or ModelConfig(kind=model_kind)
    n_nodes, input_dim, n_scales = _check_shapes(train_graphs)
    streams = RngStreams(cfg.seed)

    if params is None:
        params = init_params(
            model_kind,
            input_dim=input_dim,
            latent_dim=model_cfg.latent_dim,
            n_nodes=n_nodes,
            n_scales=n_scales,
            rng=streams.stream("init"),
            use_bias=model_cfg.use_bias,
            latent_activation=model_cfg.latent_activation,
        )
    elif params.kind != model_kind:
        raise DataError(f"initial params are {params.kind.value}, asked to train {model_kind.value}")

    if cfg.epochs == 0:
        logger.warning("[TRAIN] epochs = 0: returning the initial parameters untrained")
        return TrainResult(params=params, history=[], epochs_completed=0, final_lr=cfg.lr, seed=cfg.seed)

    logger.info("[TRAIN] defaults not fixed by the published protocol: %s", UNPUBLISHED_DEFAULTS)
    logger.info(
        "[TRAIN] %s: %d train / %d val graphs, %d parameters, %d epochs, decay=%s",
        model_kind.value, len(train_graphs), len(val_graphs), params.count(), cfg.epochs, cfg.decay_mode.value,
    )

    batching = streams.stream("batching")
    eps_rng = streams.stream("epsilon")
    state = OptimizerState.for_params(params, cfg.beta1, cfg.beta2, cfg.eps_adam)
    n_batches = math.ceil(len(train_graphs) / cfg.batch_size)
    history: list[EpochRecord] = []
    lr = cfg.lr

    for epoch in range(1, cfg.epochs + 1):
        lr = lr_at_epoch(cfg, epoch)
        order = batching.permutation(len(train_graphs))
        weighted_loss = 0.0
        for b in range(n_batches):
            batch = [train_graphs[i] for i in order[b * cfg.batch_size:(b + 1) * cfg.batch_size]]
            epsilons = _draw_epsilons(params, batch, eps_rng, cfg.latent_noise_scale)
            try:
                loss, grads = gradients(params, batch, cfg.kl_weight, epsilons)
            except NumericError as e:
                raise NumericError(f"training diverged at epoch {epoch}: {e}") from e
            except ValidationError as e:
                raise NumericError(f"training diverged at epoch {epoch}: {e}") from e
            if cfg.decay_mode == DecayMode.L2 and cfg.weight_decay > 0:
                for name, g in grads.items():
                    g += cfg.weight_decay * params.tensors[name]
            params = adam_step(state, params, grads, lr)
            weighted_loss += loss.total * len(batch)

        record = EpochRecord(
            epoch=epoch,
            train_loss=weighted_loss / len(train_graphs),
            val_recon=mean_reconstruction_error(params, val_graphs),
            lr=lr,
        )
        if not math.isfinite(record.train_loss):
            raise NumericError(f"training diverged at epoch {epoch}: non-finite train loss")
        history.append(record)
        logger.debug("[TRAIN] epoch %d loss=%.6g val=%s lr=%.3g", epoch, record.train_loss, record.val_recon, lr)
        if on_epoch is not None:
            on_epoch(record)

    logger.info(
        "[TRAIN] done: loss %.6g -> %.6g after %d epochs",
        history[0].train_loss, history[-1].train_loss, cfg.epochs,
    )
    return TrainResult(params=params, history=history, epochs_completed=cfg.epochs, final_lr=lr, seed=cfg.seed)
