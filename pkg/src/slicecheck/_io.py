from __future__ import annotations

import csv
import io
import os
import tempfile
from collections.abc import Iterable, Sequence
from pathlib import Path


def atomic_write_text(path: str | Path, text: str) -> Path:
    """Write ``text`` to ``path`` via a temp file in the same directory."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def csv_text(rows: Iterable[Sequence[object]]) -> str:
    """Render rows as CSV with ``\\n`` line endings.

    The csv module only quotes characters that appear in the line
    terminator, so a field holding a bare ``\\r`` would come back as a
    line break.  Such rows are written fully quoted instead.
    """
    buf = io.StringIO()
    plain = csv.writer(buf, lineterminator="\n")
    quoted = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_ALL)
    for row in rows:
        needs_quotes = any(isinstance(f, str) and "\r" in f for f in row)
        (quoted if needs_quotes else plain).writerow(row)
    return buf.getvalue()
