from .cartesian import CartesianGroup, PhysicalTable, combine, materialize
from .loader import load_spec
from .model import MemoryHierarchySpec, ModelSpec, TableSpec
from .planner import brute_force_plan, cost, heuristic_plan
from .synthetic import generate_synthetic

__all__ = [
    "CartesianGroup",
    "MemoryHierarchySpec",
    "ModelSpec",
    "PhysicalTable",
    "TableSpec",
    "brute_force_plan",
    "combine",
    "cost",
    "generate_synthetic",
    "heuristic_plan",
    "load_spec",
    "materialize",
]
