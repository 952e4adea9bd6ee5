import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Tuple

from pydantic import ValidationError

from .exceptions import SpecParsingError, SpecValidationError
from .model import MemoryHierarchySpec, ModelSpec

MEMORY_KEY = "memory"


def load_spec(document: str) -> Tuple[ModelSpec, MemoryHierarchySpec]:
    """Parse JSON spec document and return validated model and hierarchy."""
    try:
        data = json.loads(document)
    except ValueError as exc:
        raise SpecParsingError(f"Spec is not a valid json: {exc}") from exc

    if not isinstance(data, dict):
        raise SpecParsingError("Spec must be a json object.")

    model_data = {key: value for key, value in data.items() if key != MEMORY_KEY}
    memory_data = data.get(MEMORY_KEY)
    if memory_data is None:
        memory_data = {}
    if not isinstance(memory_data, dict):
        raise SpecValidationError("must be an object", field_path=MEMORY_KEY)

    model = validate(ModelSpec, model_data)
    hierarchy = validate(MemoryHierarchySpec, memory_data, prefix=MEMORY_KEY)
    return model, hierarchy


def validate(model_class, data: Dict[str, Any], prefix: str = ""):
    try:
        return model_class.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        path = ".".join(str(part) for part in (prefix, *error["loc"]) if part != "")
        raise SpecValidationError(error["msg"], field_path=path) from exc


def spec_to_dict(model: ModelSpec, hierarchy: MemoryHierarchySpec) -> Dict[str, Any]:
    return {
        "tables": [
            {"rows": t.rows, "dim": t.dim, "elem_bits": t.elem_bits}
            for t in model.tables
        ],
        "hidden_dims": list(model.hidden_dims),
        "lookups_per_table": model.lookups_per_table,
        MEMORY_KEY: hierarchy.model_dump(),
    }


def dump_spec(model: ModelSpec, hierarchy: MemoryHierarchySpec) -> str:
    """Serialize spec into canonical json document."""
    return json.dumps(spec_to_dict(model, hierarchy), indent=2) + "\n"


def spec_digest(model: ModelSpec, hierarchy: MemoryHierarchySpec) -> str:
    canonical = json.dumps(
        spec_to_dict(model, hierarchy), sort_keys=True, separators=(",", ":")
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def read_spec_file(path: Path) -> Tuple[ModelSpec, MemoryHierarchySpec]:
    with open(path, "r", encoding="utf-8") as spec_file:
        return load_spec(spec_file.read())


def write_spec_file(
    path: Path, model: ModelSpec, hierarchy: MemoryHierarchySpec
) -> None:
    path.write_text(dump_spec(model, hierarchy), encoding="utf-8")
