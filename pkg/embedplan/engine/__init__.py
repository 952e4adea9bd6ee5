from .lookup import Query, lookup_concat
from .mlp import MlpWeights, mlp_forward, predict
from .queries import read_queries, write_ctrs
from .store import EmbeddingStore, build_store

__all__ = [
    "EmbeddingStore",
    "MlpWeights",
    "Query",
    "build_store",
    "lookup_concat",
    "mlp_forward",
    "predict",
    "read_queries",
    "write_ctrs",
]
