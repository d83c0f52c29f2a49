import numpy as np
import pytest

from tsnmf import ValidationError, time_vector
from tsnmf.dataio import (
    format_number,
    ingest_csv,
    read_matrix_csv,
    write_matrix_csv,
    write_trace_csv,
)


class TestIngest:
    def test_plain_grid_defaults_dt(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("1,2\n3,4\n5,6\n")
        ts = ingest_csv(path)
        assert np.array_equal(ts.values, [[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        assert ts.dt_source == "default"
        assert ts.grid.dt == 1.0

    def test_header_fixes_dt(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("t=0,t=5\n1,2\n")
        ts = ingest_csv(path)
        assert ts.dt_source == "header"
        assert ts.grid.dt == 5.0
        assert np.array_equal(ts.values, [[1.0, 2.0]])

    def test_flag_used_without_header(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("1,2\n")
        ts = ingest_csv(path, dt=2.5)
        assert ts.dt_source == "flag"
        assert ts.grid.dt == 2.5

    def test_round_trip_is_bit_identical(self, tmp_path):
        rng = np.random.default_rng(0)
        matrix = rng.random((540, 32)) * 800.0
        grid = time_vector(32, 5.0)
        path = tmp_path / "export.csv"
        write_matrix_csv(path, matrix, grid=grid)
        ts = ingest_csv(path)
        assert np.array_equal(ts.values, matrix)
        assert ts.grid.dt == 5.0

    def test_ragged_row_reports_line(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("1,2\n3,4,5\n")
        with pytest.raises(ValidationError, match="line 2"):
            ingest_csv(path)

    def test_negative_value_reports_coordinates(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("1,2\n3,-4\n")
        with pytest.raises(ValidationError, match="line 2, column 2"):
            ingest_csv(path)

    def test_non_numeric_cell_reports_coordinates(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("1,x\n")
        with pytest.raises(ValidationError, match="line 1, column 2"):
            ingest_csv(path)

    def test_header_width_mismatch(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("t=0,t=5,t=10\n1,2\n")
        with pytest.raises(ValidationError, match="header"):
            ingest_csv(path)

    def test_non_uniform_header_rejected(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("t=0,t=5,t=11\n1,2,3\n")
        with pytest.raises(ValidationError, match="uniform"):
            ingest_csv(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("\n\n")
        with pytest.raises(ValidationError, match="no data"):
            ingest_csv(path)

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            ingest_csv(tmp_path / "absent.csv")


def test_format_number_round_trips():
    rng = np.random.default_rng(1)
    for value in rng.random(200) * rng.choice([1e-8, 1.0, 1e8], size=200):
        assert float(format_number(value)) == value


def test_read_matrix_csv(tmp_path):
    path = tmp_path / "m.csv"
    matrix = np.random.default_rng(2).random((4, 3))
    write_matrix_csv(path, matrix)
    assert np.array_equal(read_matrix_csv(path), matrix)


def test_read_matrix_csv_ragged(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1,2\n3\n")
    with pytest.raises(ValidationError, match="line 2"):
        read_matrix_csv(path)


def test_trace_csv(tmp_path):
    path = tmp_path / "trace.csv"
    write_trace_csv(path, [4.0, 2.0, 1.5])
    lines = path.read_text().splitlines()
    assert lines[0] == "iteration,cost"
    assert lines[1] == "1,4.0"
    assert lines[3] == "3,1.5"
