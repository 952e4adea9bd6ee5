import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from ..exceptions import ShapeMismatch
from ..settings import Activation, Precision
from .lookup import Query, lookup_concat
from .store import EmbeddingStore

Layer = Tuple[np.ndarray, np.ndarray]

INT16_MAX = (1 << 15) - 1
LOGIT_LIMIT = 36.0


@dataclass(frozen=True)
class MlpWeights:
    """Weight matrix (in, out) and bias (out,) of every fully connected layer."""

    layers: Tuple[Layer, ...]

    def __post_init__(self):
        if not self.layers:
            raise ShapeMismatch("MLP needs at least one layer.")
        for position, (weight, bias) in enumerate(self.layers):
            if weight.ndim != 2 or bias.shape != (weight.shape[1],):
                raise ShapeMismatch(
                    f"Layer {position} has weight {weight.shape} and bias {bias.shape}."
                )
            if position and weight.shape[0] != self.layers[position - 1][0].shape[1]:
                raise ShapeMismatch(
                    f"Layer {position} takes {weight.shape[0]} inputs, previous "
                    f"layer gives {self.layers[position - 1][0].shape[1]}."
                )
        if self.layers[-1][0].shape[1] != 1:
            raise ShapeMismatch("Output layer must be 1 wide.")

    @property
    def in_dim(self) -> int:
        return self.layers[0][0].shape[0]

    @staticmethod
    def widths(concat_length: int, hidden_dims: Sequence[int]) -> List[int]:
        return [concat_length, *hidden_dims, 1]

    @classmethod
    def random(
        cls, concat_length: int, hidden_dims: Sequence[int], seed: int = 0
    ) -> "MlpWeights":
        rng = np.random.default_rng(seed)
        widths = cls.widths(concat_length, hidden_dims)
        layers = []
        for fan_in, fan_out in zip(widths[:-1], widths[1:]):
            limit = 1.0 / math.sqrt(fan_in)
            weight = rng.uniform(-1.0, 1.0, (fan_in, fan_out)) * limit
            bias = rng.uniform(-1.0, 1.0, fan_out) * limit
            layers.append((weight.astype(np.float32), bias.astype(np.float32)))
        return cls(layers=tuple(layers))

    @classmethod
    def zeros(cls, concat_length: int, hidden_dims: Sequence[int]) -> "MlpWeights":
        widths = cls.widths(concat_length, hidden_dims)
        return cls(
            layers=tuple(
                (
                    np.zeros((fan_in, fan_out), dtype=np.float32),
                    np.zeros(fan_out, dtype=np.float32),
                )
                for fan_in, fan_out in zip(widths[:-1], widths[1:])
            )
        )


def symmetric_scale(values: np.ndarray) -> float:
    peak = float(np.max(np.abs(values))) if values.size else 0.0
    return peak / INT16_MAX if peak else 1.0


def quantize_int16(values: np.ndarray, scale: float) -> np.ndarray:
    return np.clip(np.rint(values / scale), -INT16_MAX, INT16_MAX).astype(np.int64)


def dense_full(vector: np.ndarray, weight: np.ndarray, bias: np.ndarray) -> np.ndarray:
    return vector @ weight + bias


def dense_half(vector: np.ndarray, weight: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """Dense layer with int16 inputs and weights and an int64 accumulator."""
    vector_scale = symmetric_scale(vector)
    weight_scale = symmetric_scale(weight)
    accumulator_scale = vector_scale * weight_scale
    accumulated = quantize_int16(vector, vector_scale) @ quantize_int16(
        weight, weight_scale
    )
    bias_q = np.rint(bias.astype(np.float64) / accumulator_scale).astype(np.int64)
    return ((accumulated + bias_q) * accumulator_scale).astype(np.float32)


def activate(values: np.ndarray, activation: Activation) -> np.ndarray:
    if activation == Activation.RELU:
        return np.maximum(values, np.float32(0.0))
    return values


def logistic(logit: float) -> float:
    """Logistic of a clipped logit, strictly inside (0, 1)."""
    clipped = min(max(float(logit), -LOGIT_LIMIT), LOGIT_LIMIT)
    return float(1.0 / (1.0 + np.exp(-np.float64(clipped))))


def mlp_forward(
    weights: MlpWeights,
    vector: np.ndarray,
    precision: Precision = Precision.FULL,
    activation: Activation = Activation.RELU,
) -> float:
    """Click-through rate predicted from a concatenated embedding vector."""
    if vector.shape != (weights.in_dim,):
        raise ShapeMismatch(
            f"Vector has shape {vector.shape}, MLP expects ({weights.in_dim},)."
        )
    dense = dense_half if Precision(precision) == Precision.HALF else dense_full
    hidden = vector.astype(np.float32)
    *hidden_layers, (out_weight, out_bias) = weights.layers
    for weight, bias in hidden_layers:
        hidden = activate(dense(hidden, weight, bias), Activation(activation))
    return logistic(dense(hidden, out_weight, out_bias)[0])


def predict(
    store: EmbeddingStore,
    weights: MlpWeights,
    queries: Iterable[Query],
    precision: Precision = Precision.FULL,
    activation: Activation = Activation.RELU,
    parallel: bool = False,
) -> List[float]:
    return [
        mlp_forward(
            weights, lookup_concat(store, query, parallel), precision, activation
        )
        for query in queries
    ]
