"""Attributed unfolded adjacency spectral embedding for dynamic networks."""

from ._core import (
    NumericalError,
    ValidationError,
    adjusted_rand_index,
    auc_roc,
    dense_svd,
    embed,
    procrustes,
    select_dimension,
    simulate,
    truncated_svd,
)

__all__ = [
    "NumericalError",
    "ValidationError",
    "adjusted_rand_index",
    "auc_roc",
    "dense_svd",
    "embed",
    "procrustes",
    "select_dimension",
    "simulate",
    "truncated_svd",
]

__version__ = "0.1.0"
