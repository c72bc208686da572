"""Command line interface.

    slicecheck analyze --data cold.csv --schema cold --predictions preds.csv \\
        --map LABEL_0=N --map LABEL_1=Y --on anno-agreement:Off1,Off2,Off3 \\
        --plot agreement.svg --plot-info agreement.csv --show-examples

Exit codes: 0 on success, 1 for usage and validation errors, 2 for I/O
errors.  Diagnostics go to stderr; the plot-info table goes to stdout.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Hashable, Iterable, Sequence

from . import __version__
from ._io import atomic_write_text
from .analysis import (
    ANALYSES,
    AnalysisOptions,
    SelectorContext,
    compare_models,
    run_selector,
)
from .datasets import (
    BUILTINS,
    DatasetDescriptor,
    batch_iter,
    fetch_remote,
    load_dataset,
    resolve_data_root,
    resolve_descriptor,
    validate_table,
)
from .dialect import load_dialect_model
from .errors import ArgumentError, CountError, SchemaError, SliceCheckError
from .plot import write_comparison, write_plot_info, write_reports
from .preprocess import NormalizationRules, preprocess_many
from .submission import SubmissionObject, submit
from .table import Column, Table, format_cell, read_table, write_table

logger = logging.getLogger("slicecheck")


class UsageError(SliceCheckError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--schema", required=True, help="built-in dataset name or descriptor file (FILE or FILE#NAME)")
    p.add_argument("--data", help="dataset file (CSV/JSONL); defaults to the descriptor's source")
    p.add_argument("--data-dir", help="data root for relative paths (default: $SLICECHECK_DATA_DIR or .)")
    p.add_argument("--coerce-case", action="store_true", help="fold the case of gold labels onto the label domain")
    p.add_argument("--fold-case", action="store_true", help="match label-map entries case-insensitively")
    p.add_argument("--preprocess-text", action="store_true", help="normalize the text column before analysis")
    p.add_argument("--prediction-field", default="prediction", help="column holding predictions (default: prediction)")
    p.add_argument("--dialect-model", help="word/topic likelihood TSV for the aave analysis")
    p.add_argument("--case-insensitive", action="store_true", help="substring matching ignores case")
    p.add_argument("--seed", type=int, default=AnalysisOptions().seed)
    p.add_argument("--show-examples", action="store_true", help="include one misclassified example per slice")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slicecheck", description="Slice-based error analysis for offensive-language classifiers.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    kinds = ", ".join(ANALYSES)
    a = sub.add_parser("analyze", help="run one analysis on one model's predictions")
    _add_data_args(a)
    a.add_argument("--predictions", required=True, help="predictions file (CSV column or JSONL field)")
    a.add_argument("--map", action="append", required=True, metavar="PRED=GOLD", help="label map entry (repeatable)")
    a.add_argument("--on", required=True, metavar="KIND[:ARG]", help=f"analysis selector; kinds: {kinds}")
    a.add_argument("--plot", help="write an SVG chart here")
    a.add_argument("--report", help="write per-slice classification reports (CSV) here")
    a.add_argument("--report-json", help="write the overall classification report (JSON) here")
    a.add_argument("--plot-info", help="write the plot-info table (CSV) here")
    a.add_argument("--batch-size", type=int, help="analyze one batch of this many rows")
    a.add_argument("--batch-index", type=int, default=0, help="which batch to analyze (default: 0)")

    c = sub.add_parser("compare", help="compare two models on the same dataset")
    _add_data_args(c)
    c.add_argument("--predictions-a", required=True)
    c.add_argument("--predictions-b", required=True)
    c.add_argument("--map-a", action="append", required=True, metavar="PRED=GOLD")
    c.add_argument("--map-b", action="append", required=True, metavar="PRED=GOLD")
    c.add_argument("--name-a", default="A")
    c.add_argument("--name-b", default="B")
    c.add_argument("--on", required=True, metavar="KIND[:ARG]")
    c.add_argument("--plot", help="write a grouped-bar SVG here")
    c.add_argument("--output", help="write the comparison table (CSV) here")

    p = sub.add_parser("preprocess", help="add a normalized text column to a data file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--column", help="text column (default: the schema's text column, else Text)")
    p.add_argument("--schema", help="take the text column from this dataset schema")
    p.add_argument("--target", default="preprocessed_text", help="name of the added column")
    p.add_argument("--mention-token", default="USER")
    p.add_argument("--url-token", default="HTML")
    p.add_argument("--keep-case", action="store_true")

    f = sub.add_parser("fetch", help="download a dataset file into the local cache")
    f.add_argument("--schema", help="dataset whose url to fetch")
    f.add_argument("--url")
    f.add_argument("--sha256")
    f.add_argument("--cache-dir", help="default: <data root>/.cache")
    f.add_argument("--data-dir")

    s = sub.add_parser("schemas", help="list built-in dataset schemas or show one")
    s.add_argument("name", nargs="?", help="schema name or descriptor file to show")
    return parser


# -- helpers ------------------------------------------------------------------


def _coerce_label(token: str, candidates: Iterable[Hashable]) -> Hashable:
    """Turn a CLI token into the matching label value (e.g. ``"1"`` -> ``1``)."""
    candidates = list(candidates)
    for c in candidates:
        if format_cell(c) == token:
            return c
    try:
        number = float(token)
    except ValueError:
        return token
    for c in candidates:
        if isinstance(c, (int, float)) and not isinstance(c, bool) and c == number:
            return c
    return token


def parse_map(entries: Sequence[str], candidates: Iterable[Hashable]) -> dict:
    candidates = list(candidates)
    out = {}
    for entry in entries:
        key, sep, value = entry.partition("=")
        if not sep or not key or not value:
            raise UsageError(f"label map entry must look like PRED=GOLD, got {entry!r}")
        k = _coerce_label(key, candidates)
        if k in out:
            raise UsageError(f"label {key!r} is mapped twice")
        out[k] = _coerce_label(value, candidates)
    return out


def _load_predictions(path: str, field: str) -> Column:
    table = read_table(path)
    if field in table:
        return table[field]
    if len(table.column_names) == 1:
        return table[table.column_names[0]]
    raise SchemaError(f"{path}: no {field!r} column (found {', '.join(table.column_names)})")


def _load_data(args, descriptor: DatasetDescriptor) -> Table:
    if args.data:
        table = validate_table(descriptor, read_table(args.data), coerce_case=args.coerce_case)
    else:
        table = load_dataset(descriptor, args.data_dir, coerce_case=args.coerce_case)
    if args.preprocess_text:
        rules = NormalizationRules()
        col = table[descriptor.text_column]
        table = table.with_column(
            descriptor.text_column, Column("text", tuple(preprocess_many(map(_text_or_none, col), rules)))
        )
    return table


def _text_or_none(v):
    return None if v is None else format_cell(v)


def _submission(args, table, descriptor, preds: Column, map_entries) -> SubmissionObject:
    gold = table[descriptor.gold_column].values
    candidates = [c for c in dict.fromkeys([*preds.values, *gold, *(descriptor.label_domain or ())]) if c is not None]
    return submit(table, descriptor, preds, parse_map(map_entries, candidates), fold_case=args.fold_case)


def _select_batch(table: Table, preds: Column, size: int, index: int) -> tuple[Table, Column]:
    """Pick one batch; predictions may cover the batch or the whole table."""
    batches = list(batch_iter(table, size))
    if not 0 <= index < len(batches):
        raise ArgumentError(f"batch index {index} out of range ({len(batches)} batches)")
    batch = batches[index]
    if len(preds) == table.row_count:
        start = index * size
        return batch, Column(preds.kind, preds.values[start:start + batch.row_count])
    if len(preds) != batch.row_count:
        raise CountError("prediction count matches neither the batch nor the dataset", batch.row_count, len(preds))
    return batch, preds


def _options(args, plot_path=None) -> tuple[AnalysisOptions, SelectorContext]:
    model = load_dialect_model(args.dialect_model) if args.dialect_model else None
    opts = AnalysisOptions(show_examples=args.show_examples, plot_path=plot_path, seed=args.seed)
    return opts, SelectorContext(dialect_model=model, case_sensitive=not args.case_insensitive)


# -- commands -------------------------------------------------------------------


def cmd_analyze(args) -> int:
    descriptor = resolve_descriptor(args.schema)
    table = _load_data(args, descriptor)
    preds = _load_predictions(args.predictions, args.prediction_field)
    if args.batch_size is not None:
        table, preds = _select_batch(table, preds, args.batch_size, args.batch_index)
    sub = _submission(args, table, descriptor, preds, args.map)

    opts, ctx = _options(args, plot_path=args.plot)
    result = run_selector(sub, args.on, opts, ctx)
    if args.plot_info:
        write_plot_info(result, args.plot_info)
    if args.report:
        write_reports(result, args.report)
    if args.report_json:
        atomic_write_text(args.report_json, result.overall.to_json() + "\n")
    sys.stdout.write(result.plot_info_csv())
    for key, value in result.diagnostics.items():
        if value:
            logger.info("%s: %s", key, value)
    return 0


def cmd_compare(args) -> int:
    descriptor = resolve_descriptor(args.schema)
    table = _load_data(args, descriptor)
    preds_a = _load_predictions(args.predictions_a, args.prediction_field)
    preds_b = _load_predictions(args.predictions_b, args.prediction_field)
    sub_a = _submission(args, table, descriptor, preds_a, args.map_a)
    sub_b = _submission(args, table, descriptor, preds_b, args.map_b)
    opts, ctx = _options(args, plot_path=args.plot)

    def run(sub, o):
        return run_selector(sub, args.on, o, ctx)

    result = compare_models(sub_a, sub_b, run, opts, names=(args.name_a, args.name_b))
    if args.output:
        write_comparison(result, args.output)
    sys.stdout.write(result.to_csv())
    return 0


def cmd_preprocess(args) -> int:
    column = args.column
    if column is None:
        column = resolve_descriptor(args.schema).text_column if args.schema else "Text"
    table = read_table(args.input)
    rules = NormalizationRules(
        mention_token=args.mention_token, url_token=args.url_token, lowercase=not args.keep_case
    )
    values = preprocess_many(map(_text_or_none, table.column(column)), rules)
    write_table(table.with_column(args.target, Column("text", tuple(values))), args.output)
    return 0


def cmd_fetch(args) -> int:
    url, sha = args.url, args.sha256
    if args.schema:
        desc = resolve_descriptor(args.schema)
        url = url or desc.source.url
        sha = sha or desc.source.sha256
    if not url:
        raise UsageError("nothing to fetch: pass --url or a --schema with a url")
    cache = args.cache_dir or resolve_data_root(args.data_dir) / ".cache"
    print(fetch_remote(url, cache, sha256=sha))
    return 0


def format_descriptor(d: DatasetDescriptor) -> str:
    lines = [f"[{d.name}]", f"text_column = {d.text_column}", f"gold_column = {d.gold_column}"]
    if d.feature_columns:
        lines.append(f"features = {', '.join(d.feature_columns)}")
    for group, cols in d.annotator_groups.items():
        lines.append(f"annotators.{group} = {', '.join(cols)}")
    if d.label_domain:
        lines.append(f"label_domain = {', '.join(d.label_domain)}")
    for key in ("path", "url", "sha256", "format"):
        value = getattr(d.source, key)
        if value:
            lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def cmd_schemas(args) -> int:
    if args.name:
        sys.stdout.write(format_descriptor(resolve_descriptor(args.name)))
        return 0
    for name, d in BUILTINS.items():
        print(f"{name}\ttext={d.text_column}\tgold={d.gold_column}\tlabels={','.join(d.label_domain or ())}")
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "compare": cmd_compare,
    "preprocess": cmd_preprocess,
    "fetch": cmd_fetch,
    "schemas": cmd_schemas,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"slicecheck: error: {exc}", file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except OSError as exc:
        print(f"slicecheck: error: {_oserror_text(exc)}", file=sys.stderr)
        return 2
    except SliceCheckError as exc:
        print(f"slicecheck: error: {exc}", file=sys.stderr)
        return 1


def _oserror_text(exc: OSError) -> str:
    if exc.filename and exc.strerror:
        return f"{exc.strerror}: {exc.filename}"
    return str(exc)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
