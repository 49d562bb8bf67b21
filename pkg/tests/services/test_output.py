import json
import math

import pytest
from pydantic import ValidationError

from afcsim.schemas.command import OutputTable
from afcsim.services.output import format_value, render, to_csv, to_json, write_table


@pytest.fixture
def table():
    return OutputTable(
        columns=["k", "p", "regime"],
        rows=[[0, 1.0, "PreThreshold"], [1, 0.1, "PostThreshold"]],
        metadata={"n_star": math.inf, "seed": 42},
        passed=True,
    )


def test_format_value():
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(math.inf) == "inf"
    assert format_value(-math.inf) == "-inf"
    assert format_value(math.nan) == "nan"
    assert format_value(True) == "true"
    assert format_value(3) == "3"


def test_csv_layout(table):
    lines = to_csv(table).splitlines()
    assert lines[0] == '# n_star: "inf"'
    assert lines[1] == "# seed: 42"
    assert lines[2] == "k,p,regime"
    assert lines[3] == "0,1,PreThreshold"
    assert lines[4] == "1,0.10000000000000001,PostThreshold"


def test_json_document(table):
    document = json.loads(to_json(table))
    assert document["columns"] == ["k", "p", "regime"]
    assert document["rows"][1] == [1, 0.1, "PostThreshold"]
    assert document["metadata"]["n_star"] == "inf"
    assert document["passed"] is True


def test_render_rejects_unknown_format(table):
    with pytest.raises(ValueError):
        render(table, "xml")


def test_write_table(table, tmp_path):
    path = tmp_path / "out.csv"
    text = write_table(table, "csv", str(path))
    assert path.read_text() == text


def test_rows_must_match_columns():
    with pytest.raises(ValidationError):
        OutputTable(columns=["a", "b"], rows=[[1]], metadata={})
