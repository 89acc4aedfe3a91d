"""CSV tables of evaluated quantities and the start:stop:step grid syntax."""

import csv
import io
import math
from dataclasses import dataclass, field

from pathlike.errors import ConfigError


class GridSpecError(ConfigError):
    """A malformed start:stop:step range or x,y point."""


def format_real(value):
    """17 significant digits, locale independent."""
    return "%.17g" % value


def parse_range(spec):
    """
    Parse an inclusive ``start:stop:step`` range.

    A bare number is a one-row range. Points are start + i * step for
    i in 0..round((stop - start) / step), so the endpoint is not lost to rounding.

    Args:
        spec (str): Range text such as ``0:10:0.1``

    Returns:
        list: The grid values

    Raises:
        GridSpecError: If the text is malformed or the step points away from stop
    """
    parts = spec.split(":")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise GridSpecError(f"Invalid range {spec!r}: expected start:stop:step")
    if len(values) == 1:
        return values
    if len(values) != 3:
        raise GridSpecError(f"Invalid range {spec!r}: expected start:stop:step")

    start, stop, step = values
    if not all(math.isfinite(v) for v in values):
        raise GridSpecError(f"Invalid range {spec!r}: values must be finite")
    if step == 0 or (stop - start) * step < 0:
        raise GridSpecError(f"Invalid range {spec!r}: step {step} never reaches {stop}")
    count = round((stop - start) / step) + 1
    return [start + i * step for i in range(count)]


def parse_point(text):
    """Parse ``x,y`` into a pair of floats."""
    parts = text.split(",")
    try:
        if len(parts) != 2:
            raise ValueError
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise GridSpecError(f"Invalid point {text!r}: expected x,y")


@dataclass
class CsvTable:
    """
    Header plus rows of reals; grid variables first, the value last.

    Attributes:
        header (list): Column names
        rows (list): Tuples of reals, each as long as the header
    """

    header: list
    rows: list = field(default_factory=list)

    def add_row(self, *values):
        if len(values) != len(self.header):
            raise ValueError(
                f"Row has {len(values)} values but the header has {len(self.header)}"
            )
        self.rows.append(tuple(float(v) for v in values))

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([format_real(v) for v in row])
        return buffer.getvalue()

    def write(self, path):
        """
        Write the table to ``path``, replacing any existing file.

        Raises:
            OSError: If the path cannot be written
        """
        with open(path, "w", encoding="utf-8", newline="") as stream:
            stream.write(self.to_csv())

    @classmethod
    def from_csv(cls, text):
        """Parse text produced by to_csv."""
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        table = cls(list(header))
        for row in reader:
            table.add_row(*(float(v) for v in row))
        return table
