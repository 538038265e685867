# Training module
from .losses import reconstruction_error, kl_divergence, loss_gwae, loss_gwvae
from .backprop import gradients, graph_gradients
from .optimizer import OptimizerState, adam_step
from .trainer import EpochRecord, TrainResult, lr_at_epoch, mean_reconstruction_error, train

__all__ = [
    "reconstruction_error",
    "kl_divergence",
    "loss_gwae",
    "loss_gwvae",
    "gradients",
    "graph_gradients",
    "OptimizerState",
    "adam_step",
    "EpochRecord",
    "TrainResult",
    "lr_at_epoch",
    "mean_reconstruction_error",
    "train",
]
