"""Tests for CSV ingestion and output rendering."""

import json
import math

import numpy as np
import pandas as pd
import pytest

from src.cli.io import emit, read_dataset, render_csv, render_json, sanitize_record
from src.exceptions import MalformedInputError
from src.geometry.regions import RegionSpec


class TestReadDataset:
    """Reading y, r1, r2 [, d] CSV files."""

    def test_reads_flagged_file(self, data_csv):
        data = read_dataset(data_csv)

        assert data.n == 2000
        assert data.r.shape == (2000, 2)
        assert set(np.unique(data.d)) == {False, True}
        assert np.array_equal(data.d, data.r[:, 1] >= 0.0)

    def test_region_derives_flags(self, unflagged_csv):
        data = read_dataset(unflagged_csv, RegionSpec.parse("half-plane"))

        assert np.array_equal(data.d, data.r[:, 1] > 0.0)

    def test_missing_flags_without_region(self, unflagged_csv):
        with pytest.raises(MalformedInputError) as exc_info:
            read_dataset(unflagged_csv)

        assert exc_info.value.column == "d"

    def test_malformed_row_is_located(self, bad_row_csv):
        with pytest.raises(MalformedInputError) as exc_info:
            read_dataset(bad_row_csv)

        assert exc_info.value.row == 17
        assert exc_info.value.column == "r1"
        assert "row 17" in str(exc_info.value)

    def test_missing_column(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("y,r1\n1.0,0.5\n")

        with pytest.raises(MalformedInputError) as exc_info:
            read_dataset(path)

        assert exc_info.value.column == "r2"

    def test_flag_outside_zero_one(self, tmp_path):
        path = tmp_path / "flags.csv"
        path.write_text("y,r1,r2,d\n1,0,0,1\n2,0,0,0\n3,0,0,2\n")

        with pytest.raises(MalformedInputError) as exc_info:
            read_dataset(path)

        assert exc_info.value.row == 3
        assert exc_info.value.column == "d"

    def test_infinite_value_rejected(self, tmp_path):
        path = tmp_path / "inf.csv"
        path.write_text("y,r1,r2,d\ninf,0,0,1\n")

        with pytest.raises(MalformedInputError) as exc_info:
            read_dataset(path)

        assert exc_info.value.row == 1
        assert exc_info.value.column == "y"

    def test_missing_file(self, tmp_path):
        with pytest.raises(MalformedInputError, match="not found"):
            read_dataset(tmp_path / "absent.csv")

    def test_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("y,r1,r2,d\n")

        with pytest.raises(MalformedInputError, match="no data rows"):
            read_dataset(path)

    def test_whitespace_around_values(self, tmp_path):
        path = tmp_path / "spaced.csv"
        path.write_text("y, r1, r2, d\n 1.5 , 0.25 ,-0.5, 0\n")

        data = read_dataset(path)

        assert data.y[0] == 1.5
        assert data.r[0].tolist() == [0.25, -0.5]
        assert not data.d[0]


class TestSanitizeRecord:
    """Non-finite values become null plus a reason."""

    @pytest.mark.parametrize(
        "value,reason",
        [
            (math.nan, "not a number"),
            (math.inf, "positive infinity"),
            (-math.inf, "negative infinity"),
        ],
    )
    def test_non_finite(self, value, reason):
        clean = sanitize_record({"theta": value})

        assert clean == {"theta": None, "theta_reason": reason}

    def test_numpy_scalars_become_builtins(self):
        clean = sanitize_record(
            {"n": np.int64(3), "ok": np.bool_(True), "x": np.float64(0.5)}
        )

        assert clean == {"n": 3, "ok": True, "x": 0.5}
        assert type(clean["n"]) is int
        assert type(clean["ok"]) is bool

    def test_nested_mapping(self):
        clean = sanitize_record({"design": {"theta": np.nan, "id": 2}})

        assert clean["design"] == {
            "theta": None,
            "theta_reason": "not a number",
            "id": 2,
        }


def test_render_json_carries_schema():
    text = render_json({"command": "estimate", "records": [{"se": np.inf}]})
    body = json.loads(text)

    assert body["schema"] == "mrd/1"
    assert body["command"] == "estimate"
    assert body["records"] == [{"se": None, "se_reason": "positive infinity"}]


def test_render_csv_flattens_nested():
    text = render_csv([{"a": 1, "b": {"c": 2.5}}, {"a": 2, "b": {"c": np.nan}}])
    lines = text.strip().split("\n")

    assert lines[0].split(",")[:2] == ["a", "b_c"]
    assert lines[1].startswith("1,2.5")


class TestEmit:
    """Writing payloads to stdout or a file."""

    def test_json_to_stdout(self, capsys):
        emit({"command": "designs", "records": [{"id": 1}]})

        body = json.loads(capsys.readouterr().out)
        assert body["schema"] == "mrd/1"
        assert body["records"] == [{"id": 1}]

    def test_csv_to_file(self, tmp_path, capsys):
        target = tmp_path / "out.csv"

        emit(
            {"command": "designs", "records": [{"id": 1}, {"id": 2}]},
            fmt="csv",
            output=target,
        )

        assert capsys.readouterr().out == ""
        frame = pd.read_csv(target)
        assert frame["id"].tolist() == [1, 2]

    def test_csv_without_records_writes_payload(self, capsys):
        emit({"theta": 0.25}, fmt="csv")

        assert capsys.readouterr().out.split("\n")[:2] == ["theta", "0.25"]
