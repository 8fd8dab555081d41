"""Flat result tables and their CSV form.

Layout of an emitted file::

    # tool_version: 0.1.0
    # config_hash: <sha256>
    # flagged: <axis value> | <error label>
    col_a,col_b
    1.0000000000000000e+00,2.5000000000000000e-01

Floats are written with 17 significant digits so parsing restores them
bit-for-bit. Lines end with '\\n'.
"""

from dataclasses import dataclass, field
import io
import math
import os
from pathlib import Path
import tempfile

from . import __version__

FLOAT_FORMAT = ".16e"


@dataclass(frozen=True)
class ResultTable:
    columns: tuple
    rows: tuple = ()
    flagged: tuple = ()
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        columns = tuple(str(c) for c in self.columns)
        rows = tuple(tuple(float(v) for v in row) for row in self.rows)
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(f"row has {len(row)} entries, expected {len(columns)}")
            if not all(math.isfinite(v) for v in row):
                raise ValueError("non-finite entries belong in the flagged section")
        flagged = tuple((float(value), str(label)) for value, label in self.flagged)
        provenance = {"tool_version": __version__, **dict(self.provenance)}
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "flagged", flagged)
        object.__setattr__(self, "provenance", provenance)

    def column(self, name):
        k = self.columns.index(name)
        return [row[k] for row in self.rows]


def _fmt(value):
    return format(value, FLOAT_FORMAT)


def _one_line(text):
    return " ".join(str(text).split())


def format_csv(table):
    out = io.StringIO(newline="")
    for key, value in table.provenance.items():
        out.write(f"# {key}: {_one_line(value)}\n")
    for value, label in table.flagged:
        out.write(f"# flagged: {_fmt(value)} | {_one_line(label)}\n")
    out.write(",".join(table.columns) + "\n")
    for row in table.rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")
    return out.getvalue()


def parse_csv(text):
    """Inverse of :func:`format_csv`."""
    provenance = {}
    flagged = []
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        key, _, value = lines[i][1:].strip().partition(": ")
        if key == "flagged":
            number, _, label = value.partition(" | ")
            flagged.append((float(number), label))
        else:
            provenance[key] = value
        i += 1
    if i >= len(lines):
        raise ValueError("missing header row")
    header = lines[i]
    columns = tuple(header.split(",")) if header else ()
    rows = [tuple(float(v) for v in line.split(",")) for line in lines[i + 1:]]
    return ResultTable(columns, tuple(rows), tuple(flagged), provenance)


def emit_csv(table, destination):
    """Write ``table`` to a path (atomically) or to an open text stream.

    Returns the encoded bytes that were written.
    """
    text = format_csv(table)
    if hasattr(destination, "write"):
        destination.write(text)
        destination.flush()
        return text.encode()
    write_atomic(destination, text)
    return text.encode()


def write_atomic(path, text):
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
