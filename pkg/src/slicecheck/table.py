"""Column-oriented record table.

A :class:`Table` is an immutable, ordered collection of equally long
:class:`Column` objects.  Each column has one cell kind (``text``,
``integer``, ``real`` or ``boolean``); ``None`` marks a missing cell in
any column.  Kinds are inferred column-globally when loading text files:
a single non-numeric value makes the whole column text.
"""

from __future__ import annotations

import csv
import io
import json
import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any, BinaryIO, Literal

from ._io import atomic_write_text, csv_text
from .errors import BoundsError, ColumnError, FormatError, KindError, ParseError, SchemaError

CellKind = Literal["text", "integer", "real", "boolean"]
KINDS: tuple[str, ...] = ("text", "integer", "real", "boolean")

_INT_RE = re.compile(r"[+-]?\d+\Z")
_REAL_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")
_BOOLS = {"true": True, "false": False}


class _Missing:
    """Group key under which rows with a missing cell are collected."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "<missing>"

    __str__ = __repr__

    def __reduce__(self):
        return (_Missing, ())


MISSING = _Missing()


def format_cell(value: Any) -> str:
    """Canonical text form of a cell, as written to CSV."""
    if value is None or value is MISSING:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def slice_label(value: Any) -> str:
    """Display label for a group key (``<missing>`` for missing cells)."""
    if value is None or value is MISSING:
        return str(MISSING)
    return format_cell(value)


def _kind_of(value: Any) -> str:
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, float):
        return "real"
    if isinstance(value, str):
        return "text"
    raise KindError(f"unsupported cell type {type(value).__name__}")


def infer_kind(values: Iterable[Any]) -> str:
    """Infer the kind of a column of Python values (``None`` ignored)."""
    kinds = {_kind_of(v) for v in values if v is not None}
    if not kinds:
        return "text"
    if len(kinds) == 1:
        return kinds.pop()
    if kinds == {"integer", "real"}:
        return "real"
    raise KindError(f"mixed cell kinds {sorted(kinds)} in one column")


def parse_cells(raw: Sequence[str | None]) -> Column:
    """Build a column from text cells, inferring a single kind.

    Empty strings and ``None`` become missing cells.
    """
    cells = [None if r is None or r == "" else r for r in raw]
    present = [c for c in cells if c is not None]
    if present and all(_INT_RE.match(c) for c in present):
        return Column("integer", tuple(None if c is None else int(c) for c in cells))
    if present and all(_REAL_RE.match(c) for c in present):
        return Column("real", tuple(None if c is None else float(c) for c in cells))
    if present and all(c.lower() in _BOOLS for c in present):
        return Column("boolean", tuple(None if c is None else _BOOLS[c.lower()] for c in cells))
    return Column("text", tuple(cells))


@dataclass(frozen=True)
class Column:
    kind: str
    values: tuple

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise KindError(f"unknown cell kind {self.kind!r}")
        if not isinstance(self.values, tuple):
            object.__setattr__(self, "values", tuple(self.values))
        for v in self.values:
            if v is None:
                continue
            k = _kind_of(v)
            if k != self.kind and not (self.kind == "real" and k == "integer"):
                raise KindError(f"{k} cell {v!r} in {self.kind} column")

    @classmethod
    def of(cls, values: Iterable[Any], kind: str | None = None) -> Column:
        values = tuple(values)
        return cls(kind or infer_kind(values), values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Any]:
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def has_missing(self) -> bool:
        return any(v is None for v in self.values)


class Table:
    """Immutable table of named columns with equal lengths."""

    __slots__ = ("_columns", "_row_count")

    def __init__(self, columns: Mapping[str, Column | Iterable[Any]], row_count: int | None = None):
        cols: dict[str, Column] = {}
        for name, col in columns.items():
            if not isinstance(name, str) or not name:
                raise SchemaError(f"invalid column name {name!r}")
            cols[name] = col if isinstance(col, Column) else Column.of(col)
        lengths = {len(c) for c in cols.values()}
        if row_count is None:
            if len(lengths) > 1:
                raise SchemaError(f"columns have unequal lengths {sorted(lengths)}")
            row_count = lengths.pop() if lengths else 0
        elif lengths and lengths != {row_count}:
            raise SchemaError(f"columns do not all have {row_count} rows")
        self._columns = cols
        self._row_count = row_count

    @property
    def row_count(self) -> int:
        return self._row_count

    @property
    def column_names(self) -> list[str]:
        return list(self._columns)

    @property
    def columns(self) -> Mapping[str, Column]:
        return dict(self._columns)

    def __len__(self) -> int:
        return self._row_count

    def __contains__(self, name: object) -> bool:
        return name in self._columns

    def __getitem__(self, name: str) -> Column:
        return self.column(name)

    def column(self, name: str) -> Column:
        try:
            return self._columns[name]
        except KeyError:
            raise ColumnError(f"unknown column {name!r}") from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Table):
            return NotImplemented
        return self._row_count == other._row_count and self._columns == other._columns

    def __repr__(self) -> str:
        cols = ", ".join(f"{n}:{c.kind}" for n, c in self._columns.items())
        return f"Table({self._row_count} rows; {cols})"

    def rows(self) -> Iterator[dict[str, Any]]:
        names = self.column_names
        for i in range(self._row_count):
            yield {n: self._columns[n].values[i] for n in names}

    def select_rows(self, indices: Sequence[int]) -> Table:
        return select_rows(self, indices)

    def with_column(self, name: str, values: Column | Iterable[Any]) -> Table:
        """Return a new table with ``name`` added (or replaced)."""
        cols = dict(self._columns)
        cols[name] = values if isinstance(values, Column) else Column.of(values)
        return Table(cols, self._row_count)

    def to_csv(self) -> str:
        header = [self.column_names]
        return csv_text(header + [[format_cell(v) for v in row.values()] for row in self.rows()])


def _read_csv(text: io.TextIOBase) -> Table:
    reader = csv.reader(text)
    header = None
    raw_rows: list[list[str]] = []
    for fields in reader:
        if not fields:
            continue
        if header is None:
            header = fields
            seen = set()
            for name in header:
                if not name:
                    raise SchemaError("empty column name in header")
                if name in seen:
                    raise SchemaError(f"duplicate column {name!r} in header")
                seen.add(name)
            continue
        if len(fields) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, found {len(fields)}", line=reader.line_num
            )
        raw_rows.append(fields)
    if header is None:
        raise ParseError("missing header row", line=1)
    return Table(
        {name: parse_cells([r[j] for r in raw_rows]) for j, name in enumerate(header)},
        len(raw_rows),
    )


def _read_jsonl(text: io.TextIOBase) -> Table:
    order: dict[str, None] = {}
    records: list[dict[str, Any]] = []
    for lineno, line in enumerate(text, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", line=lineno) from None
        if not isinstance(obj, dict):
            raise FormatError("each line must be a JSON object", line=lineno)
        for key, value in obj.items():
            if not key:
                raise SchemaError(f"empty field name on line {lineno}")
            if isinstance(value, (dict, list)):
                raise FormatError(f"field {key!r} is not a scalar", line=lineno)
            order.setdefault(key)
        records.append(obj)
    columns = {}
    for key in order:
        raw = [None if r.get(key) is None else format_cell(r[key]) for r in records]
        columns[key] = parse_cells(raw)
    return Table(columns, len(records))


def load_table(source: BinaryIO | bytes, format: str = "csv") -> Table:
    """Load a CSV (header row required) or JSONL byte stream."""
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    text = io.TextIOWrapper(source, encoding="utf-8-sig", newline="")
    try:
        if format == "csv":
            return _read_csv(text)
        if format == "jsonl":
            return _read_jsonl(text)
        raise ValueError(f"unsupported format {format!r}")
    finally:
        text.detach()


def format_for_path(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    return "jsonl" if suffix in (".jsonl", ".json", ".ndjson") else "csv"


def read_table(path: str | Path) -> Table:
    """Load a table from disk, choosing the format from the file extension."""
    with open(path, "rb") as fh:
        return load_table(fh, format_for_path(path))


def select_rows(table: Table, indices: Sequence[int]) -> Table:
    n = table.row_count
    for i in indices:
        if not 0 <= i < n:
            raise BoundsError(f"row index {i} out of range for {n} rows")
    return Table(
        {
            name: Column(col.kind, tuple(col.values[i] for i in indices))
            for name, col in table.columns.items()
        },
        len(indices),
    )


def group_rows(table: Table, column: str) -> dict[Any, list[int]]:
    """Partition row indices by the value of a categorical column.

    Groups are ordered by first appearance; missing cells are grouped
    under :data:`MISSING`.
    """
    col = table.column(column)
    if col.kind == "real":
        raise KindError(f"column {column!r} is real-valued and cannot be grouped")
    groups: dict[Any, list[int]] = {}
    for i, v in enumerate(col.values):
        groups.setdefault(MISSING if v is None else v, []).append(i)
    return groups


def to_jsonl(table: Table) -> str:
    lines = []
    for row in table.rows():
        lines.append(json.dumps({k: v for k, v in row.items() if v is not None}, ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


def write_table(table: Table, path: str | Path) -> Path:
    """Write CSV or JSONL depending on the file extension (atomically)."""
    text = to_jsonl(table) if format_for_path(path) == "jsonl" else table.to_csv()
    return atomic_write_text(path, text)
