"""Dataset descriptors, loading, batching and remote fetch.

Descriptors are declared in INI files, one section per dataset::

    [olid]
    text_column = Text             ; required
    gold_column = label            ; required
    features = Text, label_id      ; comma separated, may span lines
    annotators.Off = Off1, Off2    ; one key per annotator group (>= 2 columns)
    label_domain = NOT, OFF        ; optional; gold values must belong to it
    path = olid.csv                ; local file, relative to the data root
    url = https://example.org/olid.csv   ; optional remote source
    sha256 = <hex digest>          ; optional integrity check for url
    format = csv                   ; optional, csv or jsonl (default: by extension)

The built-in ``cold``, ``hatecheck`` and ``olid`` descriptors ship in the
same format.  The data root defaults to ``$SLICECHECK_DATA_DIR`` or the
working directory.
"""

from __future__ import annotations

import configparser
import hashlib
import logging
import os
import tempfile
import urllib.error
import urllib.request
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from urllib.parse import urlparse

from .errors import ArgumentError, DomainError, FetchError, IntegrityError, SchemaError
from .table import Column, Table, format_cell, format_for_path, load_table, select_rows

logger = logging.getLogger(__name__)

DATA_DIR_ENV = "SLICECHECK_DATA_DIR"


@dataclass(frozen=True)
class DataSource:
    path: str | None = None
    url: str | None = None
    sha256: str | None = None
    format: str | None = None


@dataclass(frozen=True)
class DatasetDescriptor:
    name: str
    text_column: str
    gold_column: str
    feature_columns: tuple[str, ...] = ()
    annotator_groups: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    label_domain: tuple[str, ...] | None = None
    source: DataSource = DataSource()

    def __post_init__(self) -> None:
        if not self.text_column or not self.gold_column:
            raise SchemaError(f"{self.name}: text_column and gold_column are required")
        for group, cols in self.annotator_groups.items():
            if len(cols) < 2:
                raise SchemaError(f"{self.name}: annotator group {group!r} needs at least 2 columns")
        if self.label_domain is not None and not self.label_domain:
            raise SchemaError(f"{self.name}: label_domain must not be empty")

    @property
    def required_columns(self) -> list[str]:
        cols = [self.text_column, self.gold_column, *self.feature_columns]
        for group in self.annotator_groups.values():
            cols.extend(group)
        return list(dict.fromkeys(cols))


def _split(value: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in value.replace("\n", ",").split(",") if v.strip())


def parse_descriptors(text: str, origin: str = "<config>") -> dict[str, DatasetDescriptor]:
    """Parse descriptor config text into ``{name: descriptor}``."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";",), interpolation=None)
    parser.optionxform = str  # column names are case sensitive
    try:
        parser.read_string(text, source=origin)
    except configparser.Error as exc:
        raise SchemaError(f"{origin}: {exc}") from None
    out = {}
    for name in parser.sections():
        sec = parser[name]
        missing = [k for k in ("text_column", "gold_column") if k not in sec]
        if missing:
            raise SchemaError(f"{origin} [{name}]: missing key(s) {', '.join(missing)}")
        groups = {k.split(".", 1)[1]: _split(v) for k, v in sec.items() if k.startswith("annotators.")}
        domain = _split(sec["label_domain"]) if sec.get("label_domain") else None
        out[name] = DatasetDescriptor(
            name=name,
            text_column=sec["text_column"].strip(),
            gold_column=sec["gold_column"].strip(),
            feature_columns=_split(sec.get("features", "")),
            annotator_groups=groups,
            label_domain=domain,
            source=DataSource(
                path=sec.get("path") or None,
                url=sec.get("url") or None,
                sha256=(sec.get("sha256") or "").lower() or None,
                format=sec.get("format") or None,
            ),
        )
    return out


def load_descriptors(path: str | Path) -> dict[str, DatasetDescriptor]:
    return parse_descriptors(Path(path).read_text(encoding="utf-8"), origin=str(path))


def builtin_descriptors() -> dict[str, DatasetDescriptor]:
    text = resources.files("slicecheck").joinpath("data/builtin.ini").read_text("utf-8")
    return parse_descriptors(text, origin="builtin.ini")


BUILTINS = builtin_descriptors()
COLD = BUILTINS["cold"]
HATECHECK = BUILTINS["hatecheck"]
OLID = BUILTINS["olid"]


def resolve_descriptor(spec: str, extra: Mapping[str, DatasetDescriptor] | None = None) -> DatasetDescriptor:
    """Look up a descriptor by built-in name, or load it from a config file.

    ``spec`` may be ``NAME``, ``FILE`` (single-section file) or ``FILE#NAME``.
    """
    registry = {**BUILTINS, **(extra or {})}
    if spec in registry:
        return registry[spec]
    path, _, section = spec.partition("#")
    if not Path(path).is_file():
        raise SchemaError(f"unknown dataset schema {spec!r} (built-ins: {', '.join(sorted(BUILTINS))})")
    found = load_descriptors(path)
    if section:
        if section not in found:
            raise SchemaError(f"{path} has no section [{section}]")
        return found[section]
    if len(found) != 1:
        raise SchemaError(f"{path} defines {len(found)} datasets; select one with {path}#NAME")
    return next(iter(found.values()))


def resolve_data_root(explicit: str | Path | None = None) -> Path:
    if explicit is not None:
        return Path(explicit)
    return Path(os.environ.get(DATA_DIR_ENV) or ".")


def validate_table(descriptor: DatasetDescriptor, table: Table, coerce_case: bool = False) -> Table:
    """Check required columns and the gold label domain.

    With ``coerce_case`` gold labels that differ from a domain label only
    by case are rewritten to the domain spelling.
    """
    missing = [c for c in descriptor.required_columns if c not in table]
    if missing:
        raise SchemaError(f"{descriptor.name}: missing column {', '.join(missing)}")
    if descriptor.label_domain is None:
        return table

    domain = set(descriptor.label_domain)
    folded = {d.casefold(): d for d in descriptor.label_domain}
    gold = table[descriptor.gold_column]
    fixed = []
    changed = False
    for i, value in enumerate(gold.values):
        text = format_cell(value)
        if value is not None and text in domain:
            fixed.append(value)
            continue
        if coerce_case and value is not None and text.casefold() in folded:
            fixed.append(folded[text.casefold()])
            changed = True
            continue
        shown = "<missing>" if value is None else repr(value)
        raise DomainError(
            f"{descriptor.name}: gold value {shown} at row {i} is outside label domain "
            f"{{{', '.join(descriptor.label_domain)}}}"
        )
    if changed:
        table = table.with_column(descriptor.gold_column, Column("text", tuple(fixed)))
    return table


def load_dataset(
    descriptor: DatasetDescriptor,
    data_root: str | Path | None = None,
    *,
    cache_dir: str | Path | None = None,
    coerce_case: bool = False,
) -> Table:
    """Load and validate the data a descriptor points at."""
    root = resolve_data_root(data_root)
    src = descriptor.source
    path: Path | None = None
    if src.path:
        candidate = Path(src.path)
        if not candidate.is_absolute():
            candidate = root / candidate
        if candidate.is_file():
            path = candidate
    if path is None and src.url:
        path = fetch_remote(src.url, cache_dir or root / ".cache", sha256=src.sha256)
    if path is None:
        where = src.path and str(root / src.path)
        raise FileNotFoundError(f"{descriptor.name}: data file not found: {where or '(no source)'}")
    fmt = src.format or format_for_path(src.path or path)
    with open(path, "rb") as fh:
        table = load_table(fh, fmt)
    logger.debug("loaded %s: %d rows from %s", descriptor.name, table.row_count, path)
    return validate_table(descriptor, table, coerce_case=coerce_case)


def batch_iter(table: Table, batch_size: int) -> Iterator[Table]:
    """Consecutive row slices of at most ``batch_size`` rows."""
    if batch_size < 1:
        raise ArgumentError(f"batch_size must be >= 1, got {batch_size}")

    def gen() -> Iterator[Table]:
        for start in range(0, table.row_count, batch_size):
            yield select_rows(table, range(start, min(start + batch_size, table.row_count)))

    return gen()


def cache_path(url: str, cache_dir: str | Path) -> Path:
    digest = hashlib.sha256(url.encode("utf-8")).hexdigest()
    suffix = Path(urlparse(url).path).suffix
    if not suffix.isascii() or not suffix[1:].isalnum() or len(suffix) > 8:
        suffix = ""
    return Path(cache_dir) / f"{digest}{suffix}"


def _file_sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def fetch_remote(url: str, cache_dir: str | Path, sha256: str | None = None, timeout: float = 30.0) -> Path:
    """Download ``url`` into ``cache_dir`` once; later calls hit the cache."""
    target = cache_path(url, cache_dir)
    if target.is_file():
        if sha256 and _file_sha256(target) != sha256.lower():
            raise IntegrityError(f"cached copy of {url} does not match sha256 {sha256}")
        return target

    Path(cache_dir).mkdir(parents=True, exist_ok=True)
    logger.info("fetching %s", url)
    fd, tmp = tempfile.mkstemp(dir=cache_dir, prefix=".part-")
    try:
        h = hashlib.sha256()
        with os.fdopen(fd, "wb") as out:
            try:
                with urllib.request.urlopen(url, timeout=timeout) as resp:
                    for chunk in iter(lambda: resp.read(1 << 16), b""):
                        out.write(chunk)
                        h.update(chunk)
            except (urllib.error.URLError, OSError, ValueError) as exc:
                raise FetchError(f"could not fetch {url}: {exc}") from exc
        if sha256 and h.hexdigest() != sha256.lower():
            raise IntegrityError(f"{url}: sha256 {h.hexdigest()} does not match declared {sha256}")
        os.replace(tmp, target)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return target
