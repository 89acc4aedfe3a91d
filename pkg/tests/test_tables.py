"""Tests for grid parsing and CSV output."""

import pytest

from pathlike.errors import ConfigError
from pathlike.tables import CsvTable, GridSpecError, format_real, parse_point, parse_range


def test_parse_range_keeps_endpoint():
    """Test that 0:10:0.1 has 101 points ending at 10."""
    values = parse_range("0:10:0.1")
    assert len(values) == 101
    assert values[0] == 0.0
    assert values[-1] == pytest.approx(10.0)


def test_parse_range_descending_and_single():
    """Test negative steps and bare numbers."""
    assert parse_range("2:0:-1") == [2.0, 1.0, 0.0]
    assert parse_range("3.5") == [3.5]


@pytest.mark.parametrize("spec", ["", "a:b:c", "0:1", "0:1:0", "0:1:-0.1", "0:inf:1", "1:2:3:4"])
def test_parse_range_errors(spec):
    """Test malformed ranges."""
    with pytest.raises(GridSpecError):
        parse_range(spec)


def test_grid_errors_are_config_errors():
    """Test that grid errors share the usage exit path."""
    assert issubclass(GridSpecError, ConfigError)


def test_parse_point():
    """Test x,y parsing."""
    assert parse_point("1,2.5") == (1.0, 2.5)
    with pytest.raises(GridSpecError, match="expected x,y"):
        parse_point("1")
    with pytest.raises(GridSpecError):
        parse_point("1,y")


def test_format_real():
    """Test 17 significant digits."""
    assert format_real(0.1) == "0.10000000000000001"
    assert format_real(2.0) == "2"


def test_to_csv_format():
    """Test header first and %.17g values."""
    table = CsvTable(["t", "a", "value"])
    table.add_row(1, 0.5, 2.0)
    assert table.to_csv() == "t,a,value\n1,0.5,2\n"


def test_row_arity_is_checked():
    """Test that rows must match the header."""
    table = CsvTable(["t", "value"])
    with pytest.raises(ValueError, match="header has 2"):
        table.add_row(1.0)


def test_from_csv_reads_back_values():
    """Test that written digits are parsed exactly."""
    table = CsvTable(["z", "value"])
    table.add_row(0.1, 1.0 / 3.0)
    parsed = CsvTable.from_csv(table.to_csv())
    assert parsed.header == ["z", "value"]
    assert parsed.rows == [(0.1, 1.0 / 3.0)]


def test_write(tmp_path):
    """Test writing and replacing a file."""
    path = tmp_path / "table.csv"
    path.write_text("stale", encoding="utf-8")
    table = CsvTable(["x", "value"])
    table.add_row(1.0, 2.0)
    table.write(str(path))
    assert path.read_text(encoding="utf-8") == "x,value\n1,2\n"


def test_write_to_missing_directory(tmp_path):
    """Test that unwritable paths raise OSError."""
    table = CsvTable(["x", "value"])
    with pytest.raises(OSError):
        table.write(str(tmp_path / "missing" / "table.csv"))
