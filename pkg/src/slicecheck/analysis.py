"""Slice-based error analyses over a :class:`SubmissionObject`.

Every analysis partitions the submission's rows into named slices and
returns an :class:`AnalysisResult` holding one :class:`PlotInfoRow` per
slice (totals, correct counts, accuracy and optionally one random
misclassified example) plus a classification report per slice.

New analyses only need to compute the partition and call
:func:`analyze_slices`; registering them with :func:`register_analysis`
makes them available to the command line ``--on`` selector.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Hashable, Sequence
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from . import plot
from ._io import csv_text
from .dialect import DialectModel, score_message
from .errors import AlignmentError, ArgumentError, ColumnError, DomainError, KindError, SchemaError
from .metrics import METRIC_COLUMNS, ClassificationReport, classification_report
from .preprocess import tokenize
from .submission import SubmissionObject
from .table import MISSING, Column, Table, format_cell, group_rows, slice_label

DEFAULT_SEED = 1234

PLOT_INFO_COLUMNS = (
    "slice",
    "total",
    "total_correct",
    "accuracy",
    "example_text",
    "example_pred",
    "example_gold",
)
REPORT_COLUMNS = ("category", "Metrics", *METRIC_COLUMNS)


@dataclass(frozen=True)
class ErrorExample:
    text: Any
    predicted_label: Hashable
    gold_label: Hashable
    row: int


@dataclass(frozen=True)
class PlotInfoRow:
    slice_label: str
    total: int
    total_correct: int
    accuracy: float
    example: ErrorExample | None = None

    @property
    def empty(self) -> bool:
        return self.total == 0


@dataclass(frozen=True)
class AnalysisOptions:
    show_examples: bool = False
    plot_path: str | None = None
    seed: int = DEFAULT_SEED


@dataclass
class AnalysisResult:
    dimension: str
    rows: list[PlotInfoRow]
    reports: dict[str, ClassificationReport]
    overall: ClassificationReport
    kind: str = "bar"
    diagnostics: dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(r.total for r in self.rows)

    @property
    def labels(self) -> list[str]:
        return [r.slice_label for r in self.rows]

    def row(self, label: str) -> PlotInfoRow:
        for r in self.rows:
            if r.slice_label == label:
                return r
        raise KeyError(label)

    def plot_info_csv(self) -> str:
        out = [list(PLOT_INFO_COLUMNS)]
        for r in self.rows:
            ex = r.example
            out.append(
                [
                    r.slice_label,
                    r.total,
                    r.total_correct,
                    repr(float(r.accuracy)),
                    "" if ex is None else format_cell(ex.text),
                    "" if ex is None else format_cell(ex.predicted_label),
                    "" if ex is None else format_cell(ex.gold_label),
                ]
            )
        return csv_text(out)

    def reports_csv(self, digits: int | None = 3, include_overall: bool = True) -> str:
        """Per-slice reports, one row per (slice, class or average)."""
        out = [list(REPORT_COLUMNS)]
        items = list(self.reports.items())
        if include_overall:
            items.append(("overall", self.overall))
        for category, report in items:
            for name, m in report.rows():
                if digits is None:
                    vals = [repr(float(m.precision)), repr(float(m.recall)), repr(float(m.f1))]
                else:
                    vals = [f"{v:.{digits}f}" for v in (m.precision, m.recall, m.f1)]
                out.append([category, name, *vals, m.support])
        return csv_text(out)


def _child_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{index}")


def sample_error_example(
    sub: SubmissionObject, slice_indices: Sequence[int], rng: random.Random
) -> ErrorExample | None:
    """Uniformly draw one misclassified row from the slice, if any."""
    gold, pred, texts = sub.gold, sub.predicted, sub.texts
    n = sub.row_count
    wrong = []
    for i in slice_indices:
        if not 0 <= i < n:
            raise IndexError(f"row index {i} out of range for {n} rows")
        if gold[i] != pred[i]:
            wrong.append(i)
    if not wrong:
        return None
    i = wrong[rng.randrange(len(wrong))]
    return ErrorExample(texts[i], pred[i], gold[i], i)


def _label_set(domain: list, *observed: Sequence) -> list:
    labels = list(domain)
    seen = set(labels)
    for seq in observed:
        for v in seq:
            if v not in seen:
                seen.add(v)
                labels.append(v)
    return labels


def analyze_slices(
    sub: SubmissionObject,
    dimension: str,
    slices: Sequence[tuple[str, Sequence[int]]],
    opts: AnalysisOptions | None = None,
    *,
    kind: str = "bar",
    diagnostics: dict[str, int] | None = None,
) -> AnalysisResult:
    """Build an :class:`AnalysisResult` from an explicit row partition.

    This is the building block for custom analyses: compute
    ``[(label, row_indices), ...]`` and hand it over.
    """
    opts = opts or AnalysisOptions()
    gold, pred = sub.gold, sub.predicted
    domain = _label_set(sub.gold_domain, gold, pred)
    rows: list[PlotInfoRow] = []
    reports: dict[str, ClassificationReport] = {}
    for index, (label, indices) in enumerate(slices):
        g = [gold[i] for i in indices]
        p = [pred[i] for i in indices]
        correct = sum(a == b for a, b in zip(g, p))
        total = len(indices)
        example = None
        if opts.show_examples:
            example = sample_error_example(sub, indices, _child_rng(opts.seed, index))
        rows.append(PlotInfoRow(label, total, correct, correct / total if total else 0.0, example))
        reports[label] = classification_report(g, p, label_set=domain)
    result = AnalysisResult(
        dimension=dimension,
        rows=rows,
        reports=reports,
        overall=classification_report(gold, pred, label_set=domain),
        kind=kind,
        diagnostics=dict(diagnostics or {}),
    )
    if opts.plot_path:
        if kind == "histogram":
            plot.render_length_histogram(result, opts.plot_path)
        else:
            plot.render_bar_chart(result, opts.plot_path)
    return result


# -- generic analyses ---------------------------------------------------------


def analyze_on(sub: SubmissionObject, column: str, opts: AnalysisOptions | None = None) -> AnalysisResult:
    """One slice per distinct value of a categorical column."""
    col = sub.table.column(column)
    if col.kind == "real":
        raise KindError(
            f"column {column!r} holds real numbers; bin it with str_len_analysis "
            "or convert it to categories first"
        )
    groups = group_rows(sub.table, column)
    return analyze_slices(sub, column, [(slice_label(k), idx) for k, idx in groups.items()], opts)


def check_anno_agreement(
    sub: SubmissionObject,
    annotator_columns: Sequence[str] | str,
    opts: AnalysisOptions | None = None,
) -> AnalysisResult:
    """Compare rows where all annotators agree (``full``) with the rest (``partial``).

    ``annotator_columns`` may also name an annotator group of the
    submission's descriptor (e.g. ``"Off"`` for COLD).
    """
    if isinstance(annotator_columns, str):
        groups = sub.descriptor.annotator_groups
        if annotator_columns not in groups:
            raise ColumnError(f"no annotator group {annotator_columns!r}")
        annotator_columns = groups[annotator_columns]
    cols = list(annotator_columns)
    if len(cols) < 2:
        raise ArgumentError("annotator agreement needs at least two annotator columns")
    columns = [sub.table.column(c) for c in cols]
    kinds = {c.kind for c in columns if not all(v is None for v in c.values)}
    if len(kinds) > 1:
        raise SchemaError(f"annotator columns have different kinds: {sorted(kinds)}")

    full, partial = [], []
    incomplete = 0
    for i in range(sub.row_count):
        labels = [c.values[i] for c in columns]
        if any(v is None for v in labels):
            incomplete += 1
            partial.append(i)
        elif len(set(labels)) == 1:
            full.append(i)
        else:
            partial.append(i)
    return analyze_slices(
        sub,
        "annotator agreement",
        [("full", full), ("partial", partial)],
        opts,
        diagnostics={"rows_missing_annotator_label": incomplete},
    )


def check_substring(
    sub: SubmissionObject,
    substring: str,
    opts: AnalysisOptions | None = None,
    *,
    case_sensitive: bool = True,
) -> AnalysisResult:
    """Split rows by whether their text contains ``substring`` literally."""
    if not substring:
        raise ArgumentError("substring must not be empty")
    needle = substring if case_sensitive else substring.casefold()
    contains, other = [], []
    for i, text in enumerate(sub.texts):
        hay = format_cell(text)
        if not case_sensitive:
            hay = hay.casefold()
        (contains if needle in hay else other).append(i)
    return analyze_slices(
        sub,
        f"substring {substring!r}",
        [("contains", contains), ("not-contains", other)],
        opts,
        diagnostics={"empty_slices": int(not contains) + int(not other)},
    )


def _fmt_edge(x: float) -> str:
    return f"{x:g}"


def length_bins(lengths: Sequence[int], bins: int) -> tuple[list[float], list[int]]:
    """Equal-width bins over [min, max]; the maximum falls in the last bin.

    Returns the ``bins + 1`` edges and each value's bin index.
    """
    if bins < 1:
        raise ArgumentError(f"bins must be >= 1, got {bins}")
    if not lengths:
        return [], []
    lo, hi = min(lengths), max(lengths)
    if lo == hi:
        return [lo, hi], [0] * len(lengths)
    edges = [lo + k * (hi - lo) / bins for k in range(bins)] + [hi]
    idx = [min(int((x - lo) * bins / (hi - lo)), bins - 1) for x in lengths]
    return edges, idx


def str_len_analysis(
    sub: SubmissionObject,
    unit: str = "characters",
    bins: int = 10,
    opts: AnalysisOptions | None = None,
) -> AnalysisResult:
    """Accuracy per text-length bin (characters or whitespace tokens)."""
    if unit in ("chars", "char", "characters"):
        unit = "characters"
        lengths = [len(format_cell(t)) for t in sub.texts]
    elif unit in ("words", "word", "tokens"):
        unit = "words"
        lengths = [len(tokenize(format_cell(t))) for t in sub.texts]
    else:
        raise ArgumentError(f"unit must be 'characters' or 'words', got {unit!r}")
    edges, idx = length_bins(lengths, bins)
    n_bins = len(edges) - 1
    members: list[list[int]] = [[] for _ in range(n_bins)]
    for row, b in enumerate(idx):
        members[b].append(row)
    slices = [
        (f"{_fmt_edge(edges[b])}–{_fmt_edge(edges[b + 1])}", members[b]) for b in range(n_bins)
    ]
    diagnostics = {"degenerate_range": int(n_bins == 1 and bins > 1)}
    return analyze_slices(sub, f"length ({unit})", slices, opts, kind="histogram", diagnostics=diagnostics)


def aave_analysis(
    sub: SubmissionObject,
    model: DialectModel,
    threshold: float = 0.5,
    opts: AnalysisOptions | None = None,
) -> AnalysisResult:
    """Split rows by their topic-0 dialect proportion.

    Rows scoring at least ``threshold`` go to the high slice.  Rows with
    no in-vocabulary token form a separate ``no-evidence`` slice.
    """
    if not 0 < threshold < 1:
        raise ArgumentError(f"threshold must lie in (0, 1), got {threshold}")
    high, low, none = [], [], []
    for i, text in enumerate(sub.texts):
        score = score_message(tokenize(format_cell(text)), model)
        if score.uninformative:
            none.append(i)
        elif score.proportions[0] >= threshold:
            high.append(i)
        else:
            low.append(i)
    slices = []
    if high or low:
        slices += [(f"score >= {threshold:g}", high), (f"score < {threshold:g}", low)]
    if none:
        slices.append(("no-evidence", none))
    return analyze_slices(
        sub, f"{model.topics[0]} dialect score", slices, opts, diagnostics={"no_evidence_rows": len(none)}
    )


# -- COLD ---------------------------------------------------------------------

COLD_MAJORITY_COLUMNS = ("Off", "Slur", "Nom", "Dist")


def cold_category(off: str, slur: str, nom: str, dist: str) -> str:
    """Fine-grained COLD category from the four majority-vote Y/N features."""
    for name, v in zip(COLD_MAJORITY_COLUMNS, (off, slur, nom, dist)):
        if v not in ("Y", "N"):
            raise DomainError(f"{name} must be 'Y' or 'N', got {v!r}")
    if slur == "Y":
        return "off-slur" if off == "Y" else "reclaimed"
    if off == "Y" and nom == "Y":
        return "off-nom"
    return f"Off={off}|Slur={slur}|Nom={nom}|Dist={dist}"


def cold_analyze(sub: SubmissionObject, opts: AnalysisOptions | None = None) -> AnalysisResult:
    """Analyze COLD's fine-grained categories.

    Uses the ``Cat`` column when present, otherwise derives categories
    from the Off/Slur/Nom/Dist majority votes.
    """
    table = sub.table
    if "Cat" in table:
        return analyze_on(sub, "Cat", opts)
    absent = [c for c in COLD_MAJORITY_COLUMNS if c not in table]
    if absent:
        raise SchemaError(f"COLD analysis needs a Cat column or the columns {', '.join(absent)}")
    cols = [table[c].values for c in COLD_MAJORITY_COLUMNS]
    groups: dict[str, list[int]] = {}
    for i in range(table.row_count):
        vals = [c[i] for c in cols]
        label = str(MISSING) if any(v is None for v in vals) else cold_category(*vals)
        groups.setdefault(label, []).append(i)
    return analyze_slices(sub, "category", list(groups.items()), opts)


# -- HateCheck ----------------------------------------------------------------

# functionality prefix -> display name, in report order
HATECHECK_CATEGORIES = {
    "counter": "counter",
    "derog": "derogation",
    "ident": "identity",
    "negate": "negation",
    "target": "nonhateful-abuse",
    "phrase": "phrasing",
    "profanity": "profanity",
    "ref": "pronoun-references",
    "slur": "slurs",
    "spell": "spelling changes",
    "threat": "threats",
}


class HateCheckCategory(NamedTuple):
    category: str
    prefix: str


def hatecheck_category(functionality: str) -> HateCheckCategory:
    """Map a functionality code such as ``derog_neg_emote_h`` to its category."""
    if not functionality:
        raise ArgumentError("functionality code must not be empty")
    prefix = functionality.split("_", 1)[0]
    return HateCheckCategory(HATECHECK_CATEGORIES.get(prefix, prefix), prefix)


def hatecheck_analyze(
    sub: SubmissionObject,
    opts: AnalysisOptions | None = None,
    *,
    functionality_column: str = "functionality",
    hateful: Hashable = "hateful",
    non_hateful: Hashable = "non-hateful",
) -> AnalysisResult:
    """Analyze HateCheck's coarse functionality categories.

    Labels get a `` (h)`` suffix when every gold label in the slice is
    hateful and `` (nh)`` when every one is non-hateful.
    """
    if functionality_column not in sub.table:
        raise SchemaError(f"missing column {functionality_column}")
    groups: dict[str, list[int]] = {}
    for i, code in enumerate(sub.table[functionality_column].values):
        key = str(MISSING) if code is None else hatecheck_category(format_cell(code)).category
        groups.setdefault(key, []).append(i)

    order = {name: n for n, name in enumerate(HATECHECK_CATEGORIES.values())}
    known = sorted((k for k in groups if k in order), key=order.__getitem__)
    unknown = [k for k in groups if k not in order and k != str(MISSING)]
    keys = known + unknown + ([str(MISSING)] if str(MISSING) in groups else [])

    gold = sub.gold
    slices = []
    for key in keys:
        labels = {gold[i] for i in groups[key]}
        if labels == {hateful}:
            key_label = f"{key} (h)"
        elif labels == {non_hateful}:
            key_label = f"{key} (nh)"
        else:
            key_label = key
        slices.append((key_label, groups[key]))
    return analyze_slices(sub, "category", slices, opts)


# -- model comparison ---------------------------------------------------------


@dataclass(frozen=True)
class ComparisonRow:
    slice_label: str
    total: int
    correct_a: int
    correct_b: int
    accuracy_a: float
    accuracy_b: float

    @property
    def delta(self) -> float:
        return self.accuracy_a - self.accuracy_b


@dataclass
class ComparisonResult:
    dimension: str
    name_a: str
    name_b: str
    rows: list[ComparisonRow]
    result_a: AnalysisResult
    result_b: AnalysisResult

    def to_csv(self) -> str:
        out = [["slice", "total", f"accuracy_{self.name_a}", f"accuracy_{self.name_b}", "delta"]]
        for r in self.rows:
            out.append([r.slice_label, r.total, repr(r.accuracy_a), repr(r.accuracy_b), repr(r.delta)])
        return csv_text(out)


Analysis = Callable[[SubmissionObject, AnalysisOptions], AnalysisResult]


def compare_models(
    sub_a: SubmissionObject,
    sub_b: SubmissionObject,
    on: str | Analysis,
    opts: AnalysisOptions | None = None,
    names: tuple[str, str] = ("A", "B"),
) -> ComparisonResult:
    """Run the same analysis for two models over the same gold data.

    ``on`` is a column name (as for :func:`analyze_on`) or any analysis
    callable taking ``(submission, options)``.
    """
    if sub_a.row_count != sub_b.row_count:
        raise AlignmentError(f"submissions have {sub_a.row_count} and {sub_b.row_count} rows")
    if list(sub_a.gold) != list(sub_b.gold):
        first = next(i for i, (a, b) in enumerate(zip(sub_a.gold, sub_b.gold)) if a != b)
        raise AlignmentError(f"gold labels differ between submissions (first at row {first})")
    opts = opts or AnalysisOptions()
    inner = AnalysisOptions(show_examples=opts.show_examples, seed=opts.seed)
    if isinstance(on, str):
        column = on
        run: Analysis = lambda s, o: analyze_on(s, column, o)  # noqa: E731
    else:
        run = on
    res_a, res_b = run(sub_a, inner), run(sub_b, inner)

    by_a = {r.slice_label: r for r in res_a.rows}
    by_b = {r.slice_label: r for r in res_b.rows}
    labels = list(dict.fromkeys(res_a.labels + res_b.labels))
    rows = []
    for label in labels:
        ra, rb = by_a.get(label), by_b.get(label)
        rows.append(
            ComparisonRow(
                label,
                (ra or rb).total,
                ra.total_correct if ra else 0,
                rb.total_correct if rb else 0,
                ra.accuracy if ra else 0.0,
                rb.accuracy if rb else 0.0,
            )
        )
    result = ComparisonResult(res_a.dimension, names[0], names[1], rows, res_a, res_b)
    if opts.plot_path:
        plot.render_grouped_bars(result, opts.plot_path)
    return result


# -- selector registry ----------------------------------------------------------


@dataclass(frozen=True)
class SelectorContext:
    dialect_model: DialectModel | None = None
    case_sensitive: bool = True


AnalysisFn = Callable[[SubmissionObject, "str | None", AnalysisOptions, SelectorContext], AnalysisResult]
ANALYSES: dict[str, AnalysisFn] = {}


def register_analysis(kind: str) -> Callable[[AnalysisFn], AnalysisFn]:
    """Decorator registering ``fn(sub, arg, opts, ctx)`` under ``--on kind[:arg]``."""

    def deco(fn: AnalysisFn) -> AnalysisFn:
        ANALYSES[kind] = fn
        return fn

    return deco


def _need(arg: str | None, kind: str) -> str:
    if not arg:
        raise ArgumentError(f"analysis {kind!r} needs an argument ({kind}:<value>)")
    return arg


@register_analysis("column")
def _column(sub, arg, opts, ctx):
    return analyze_on(sub, _need(arg, "column"), opts)


@register_analysis("anno-agreement")
def _agreement(sub, arg, opts, ctx):
    cols = [c.strip() for c in _need(arg, "anno-agreement").split(",") if c.strip()]
    return check_anno_agreement(sub, cols[0] if len(cols) == 1 else cols, opts)


@register_analysis("substring")
def _substring(sub, arg, opts, ctx):
    return check_substring(sub, _need(arg, "substring"), opts, case_sensitive=ctx.case_sensitive)


@register_analysis("length")
def _length(sub, arg, opts, ctx):
    unit, bins = "characters", 10
    if arg:
        parts = [p.strip() for p in arg.split(",")]
        unit = parts[0] or unit
        if len(parts) > 1:
            try:
                bins = int(parts[1])
            except ValueError:
                raise ArgumentError(f"bins must be an integer, got {parts[1]!r}") from None
    return str_len_analysis(sub, unit, bins, opts)


@register_analysis("aave")
def _aave(sub, arg, opts, ctx):
    if ctx.dialect_model is None:
        raise ArgumentError("the aave analysis needs a dialect model (--dialect-model PATH)")
    try:
        threshold = float(arg) if arg else 0.5
    except ValueError:
        raise ArgumentError(f"threshold must be a number, got {arg!r}") from None
    return aave_analysis(sub, ctx.dialect_model, threshold, opts)


@register_analysis("cold-cat")
def _cold(sub, arg, opts, ctx):
    return cold_analyze(sub, opts)


@register_analysis("hatecheck-cat")
def _hatecheck(sub, arg, opts, ctx):
    return hatecheck_analyze(sub, opts)


def run_selector(
    sub: SubmissionObject,
    selector: str,
    opts: AnalysisOptions | None = None,
    ctx: SelectorContext | None = None,
) -> AnalysisResult:
    """Run the analysis named by ``kind[:arg]``."""
    kind, _, arg = selector.partition(":")
    if kind not in ANALYSES:
        raise ArgumentError(f"unknown analysis {kind!r} (choose from {', '.join(ANALYSES)})")
    return ANALYSES[kind](sub, arg or None, opts or AnalysisOptions(), ctx or SelectorContext())


def plot_info_table(result: AnalysisResult) -> Table:
    """Plot-info rows as a :class:`Table`."""
    ex = [r.example for r in result.rows]
    return Table(
        {
            "slice": Column("text", tuple(r.slice_label for r in result.rows)),
            "total": Column("integer", tuple(r.total for r in result.rows)),
            "total_correct": Column("integer", tuple(r.total_correct for r in result.rows)),
            "accuracy": Column("real", tuple(float(r.accuracy) for r in result.rows)),
            "example_text": Column("text", tuple(None if e is None else format_cell(e.text) for e in ex)),
            "example_pred": Column("text", tuple(None if e is None else format_cell(e.predicted_label) for e in ex)),
            "example_gold": Column("text", tuple(None if e is None else format_cell(e.gold_label) for e in ex)),
        },
        len(result.rows),
    )
