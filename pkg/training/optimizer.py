"""
Adam with bias correction over the flat name -> tensor mapping.
"""
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import defaults
from gwae.params import ModelParams


class OptimizerState(BaseModel):
    """First / second moment accumulators keyed like the parameters."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]
    step: int = Field(default=0, ge=0)
    beta1: float = defaults.ADAM_BETA1
    beta2: float = defaults.ADAM_BETA2
    eps: float = defaults.ADAM_EPS

    @classmethod
    def for_params(
        cls,
        params: ModelParams,
        beta1: float = defaults.ADAM_BETA1,
        beta2: float = defaults.ADAM_BETA2,
        eps: float = defaults.ADAM_EPS,
    ) -> "OptimizerState":
        return cls(m=params.zeros_like(), v=params.zeros_like(), beta1=beta1, beta2=beta2, eps=eps)


def adam_step(
    state: OptimizerState,
    params: ModelParams,
    grads: dict[str, np.ndarray],
    lr: float,
) -> ModelParams:
    """
    One Adam update. ``state`` is advanced in place; a new ModelParams is returned.

    Args:
        state: Moment accumulators (mutated)
        params: Current parameters (left untouched)
        grads: Gradient per tensor name
        lr: Step size for this update

    Returns:
        Updated parameters
    """
    if set(grads) != set(params.tensors):
        raise ValueError(f"gradient names {sorted(grads)} do not match parameters {sorted(params.tensors)}")
    state.step += 1
    b1, b2 = state.beta1, state.beta2
    correction1 = 1.0 - b1 ** state.step
    correction2 = 1.0 - b2 ** state.step

    updated = params.copy()
    for name, p in updated.tensors.items():
        g = grads[name]
        if g.shape != p.shape:
            raise ValueError(f"gradient '{name}' has shape {g.shape}, parameter has {p.shape}")
        state.m[name] = b1 * state.m[name] + (1.0 - b1) * g
        state.v[name] = b2 * state.v[name] + (1.0 - b2) * g * g
        m_hat = state.m[name] / correction1
        v_hat = state.v[name] / correction2
        p -= lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return updated
