"""Exact-arithmetic toolkit for concave-function group schemes, their big
cells, special fibers and wonderful embeddings, at desk scale."""

from wondercell.fieldarith import (
    FieldConfig,
    FieldElem,
    PrecisionError,
    QuadExt,
    H0Elem,
    arith,
    h0_compose,
    h0_identity,
    h0_inverse,
    mu_constant,
    gamma_constant,
    quad_ops,
)

__all__ = [
    "FieldConfig",
    "FieldElem",
    "PrecisionError",
    "QuadExt",
    "H0Elem",
    "arith",
    "h0_compose",
    "h0_identity",
    "h0_inverse",
    "mu_constant",
    "gamma_constant",
    "quad_ops",
]
