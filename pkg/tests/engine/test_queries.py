import pytest

from embedplan.engine.queries import (
    format_ctr,
    parse_queries,
    read_queries,
    write_ctrs,
)
from embedplan.exceptions import QueryParsingError

from ..utils import make_model


@pytest.fixture
def query_model():
    return make_model([(4, 2), (8, 2)])


def test_parse_queries_skips_blank_lines(query_model):
    queries = parse_queries(["[1, 2]\n", "\n", "  \n", "[3, 7]\n"], query_model)

    assert [q.indices for q in queries] == [(1, 2), (3, 7)]


def test_parse_queries_of_empty_input():
    assert not parse_queries([])


@pytest.mark.parametrize(
    "line", ["[1, 2", '{"a": 1}', "[1, 2.5]", "[true, 1]", '["1", 2]']
)
def test_malformed_line_reports_line_number(line):
    with pytest.raises(QueryParsingError) as exc:
        parse_queries(["[0, 0]", line])

    assert exc.value.line_number == 2
    assert "line 2" in str(exc.value)


@pytest.mark.parametrize("line", ["[4, 0]", "[0]", "[0, 0, 0]", "[-1, 0]"])
def test_invalid_query_reports_line_number(query_model, line):
    with pytest.raises(QueryParsingError) as exc:
        parse_queries(["[0, 0]", "", line], query_model)

    assert exc.value.line_number == 3


def test_read_queries(tmp_path, query_model):
    path = tmp_path / "queries.jsonl"
    path.write_text("[0, 1]\n[3, 7]\n", encoding="utf-8")

    assert len(read_queries(path, query_model)) == 2


def test_write_ctrs(tmp_path):
    path = tmp_path / "ctr.txt"

    write_ctrs([0.5, 0.123456789123], path)

    assert path.read_text(encoding="utf-8") == "0.5\n0.123456789123\n"


def test_format_ctr_round_trips_float32_precision():
    assert float(format_ctr(0.25)) == 0.25


@pytest.mark.parametrize("score", [1 - 1e-12, 1e-12, 0.1 + 0.2])
def test_format_ctr_is_exact_inside_unit_interval(score):
    text = format_ctr(score)

    assert float(text) == score
    assert 0 < float(text) < 1
