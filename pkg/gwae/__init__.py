# GWAE module
from .params import (
    AffineLayer,
    ModelParams,
    SGWConvLayer,
    init_params,
    parameter_shapes,
)
from .forward import (
    ForwardCache,
    LatentState,
    clamp_logsigma,
    decode,
    encode_gwae,
    encode_gwvae,
    filter_matrix,
    forward,
    reconstruct,
    reparameterize,
    sgwconv_forward,
)

__all__ = [
    "AffineLayer",
    "ModelParams",
    "SGWConvLayer",
    "init_params",
    "parameter_shapes",
    "ForwardCache",
    "LatentState",
    "clamp_logsigma",
    "decode",
    "encode_gwae",
    "encode_gwvae",
    "filter_matrix",
    "forward",
    "reconstruct",
    "reparameterize",
    "sgwconv_forward",
]
