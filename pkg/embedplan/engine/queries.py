import json
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

from ..exceptions import EmbedPlanException, QueryParsingError
from ..model import ModelSpec
from .lookup import Query


def parse_query_line(line: str, line_number: int) -> Query:
    try:
        data = json.loads(line)
    except ValueError as exc:
        raise QueryParsingError(f"not a valid json: {exc}", line_number) from exc
    if not isinstance(data, list) or any(
        isinstance(index, bool) or not isinstance(index, int) for index in data
    ):
        raise QueryParsingError("query must be an array of integers", line_number)
    return Query(indices=tuple(data))


def parse_queries(
    lines: Iterable[str], model: Optional[ModelSpec] = None
) -> List[Query]:
    """Queries from JSON lines, blank lines skipped."""
    queries = []
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        query = parse_query_line(line, line_number)
        if model is not None:
            try:
                query.validate(model)
            except EmbedPlanException as exc:
                raise QueryParsingError(str(exc), line_number) from exc
        queries.append(query)
    return queries


def read_queries(path: Path, model: Optional[ModelSpec] = None) -> List[Query]:
    with open(path, "r", encoding="utf-8") as queries_file:
        return parse_queries(queries_file, model)


def format_ctr(score: float) -> str:
    """Shortest text that parses back to the same float."""
    return repr(float(score))


def write_ctrs(scores: Sequence[float], path: Path) -> None:
    path.write_text(
        "".join(f"{format_ctr(score)}\n" for score in scores), encoding="utf-8"
    )
