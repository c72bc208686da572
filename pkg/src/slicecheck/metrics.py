"""Hard-label classification reports.

Zero-division policy: a class that is never predicted has precision 0,
a class with no gold support has recall 0, and F1 is 0 whenever
precision + recall is 0.  Such classes are marked ``degenerate`` rather
than raising or warning.
"""

from __future__ import annotations

import json
import warnings
from collections import Counter
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import asdict, dataclass, field

from ._io import csv_text
from .errors import CountError, LabelError

METRIC_COLUMNS = ("precision", "recall", "f1-score", "support")


class EmptyInputWarning(UserWarning):
    """Accuracy or a report was requested over zero instances."""


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    degenerate: bool = False


@dataclass(frozen=True)
class ClassificationReport:
    per_class: dict[Hashable, ClassMetrics]
    macro_avg: ClassMetrics
    weighted_avg: ClassMetrics
    accuracy: float
    total: int = 0
    empty: bool = field(default=False)

    @property
    def labels(self) -> list[Hashable]:
        return list(self.per_class)

    def rows(self) -> list[tuple[str, ClassMetrics]]:
        """Rows in display order: each class, then macro and weighted averages."""
        out = [(str(label), m) for label, m in self.per_class.items()]
        out.append(("macro avg", self.macro_avg))
        out.append(("weighted avg", self.weighted_avg))
        return out

    def to_csv(self, digits: int | None = 3) -> str:
        rows = [["", *METRIC_COLUMNS]]
        rows += [[name, *_metric_cells(m, digits)] for name, m in self.rows()]
        return csv_text(rows)

    def to_dict(self) -> dict:
        return {
            "per_class": {str(k): asdict(v) for k, v in self.per_class.items()},
            "macro avg": asdict(self.macro_avg),
            "weighted avg": asdict(self.weighted_avg),
            "accuracy": self.accuracy,
            "total": self.total,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)


def _metric_cells(m: ClassMetrics, digits: int | None) -> list[str]:
    if digits is None:
        vals = [repr(float(m.precision)), repr(float(m.recall)), repr(float(m.f1))]
    else:
        vals = [f"{m.precision:.{digits}f}", f"{m.recall:.{digits}f}", f"{m.f1:.{digits}f}"]
    return [*vals, str(m.support)]


def _check_lengths(gold: Sequence, pred: Sequence) -> None:
    if len(gold) != len(pred):
        raise CountError("gold and predicted label counts differ", len(gold), len(pred))


def _sort_key(label: Hashable):
    return (type(label).__name__, label)


def confusion_counts(gold: Sequence[Hashable], pred: Sequence[Hashable]) -> dict[tuple, int]:
    """Count (gold, predicted) label pairs."""
    _check_lengths(gold, pred)
    return dict(Counter(zip(gold, pred)))


def accuracy(gold: Sequence[Hashable], pred: Sequence[Hashable]) -> float:
    """Fraction of matching labels; 0.0 (with a warning) for empty input."""
    _check_lengths(gold, pred)
    if not gold:
        warnings.warn("accuracy of an empty sequence is defined as 0", EmptyInputWarning, stacklevel=2)
        return 0.0
    return sum(g == p for g, p in zip(gold, pred)) / len(gold)


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _average(metrics: Iterable[ClassMetrics], weighted: bool) -> ClassMetrics:
    metrics = list(metrics)
    total = sum(m.support for m in metrics)
    if not metrics:
        return ClassMetrics(0.0, 0.0, 0.0, 0)
    if weighted:
        if total == 0:
            return ClassMetrics(0.0, 0.0, 0.0, 0)
        return ClassMetrics(
            sum(m.support * m.precision for m in metrics) / total,
            sum(m.support * m.recall for m in metrics) / total,
            sum(m.support * m.f1 for m in metrics) / total,
            total,
        )
    k = len(metrics)
    return ClassMetrics(
        sum(m.precision for m in metrics) / k,
        sum(m.recall for m in metrics) / k,
        sum(m.f1 for m in metrics) / k,
        total,
    )


def classification_report(
    gold: Sequence[Hashable],
    pred: Sequence[Hashable],
    label_set: Sequence[Hashable] | None = None,
) -> ClassificationReport:
    """Per-class precision/recall/F1/support with macro and weighted averages.

    ``label_set`` fixes the row order and may include labels that never
    occur (they get an all-zero row); by default the sorted union of the
    observed gold and predicted labels is used.
    """
    gold = list(gold)
    pred = list(pred)
    _check_lengths(gold, pred)
    observed = set(gold) | set(pred)
    if label_set is None:
        labels = sorted(observed, key=_sort_key)
    else:
        labels = list(dict.fromkeys(label_set))
        unknown = observed - set(labels)
        if unknown:
            raise LabelError(
                "label set is missing observed labels: "
                + ", ".join(map(str, sorted(unknown, key=_sort_key)))
            )

    support = Counter(gold)
    predicted = Counter(pred)
    hits = Counter(g for g, p in zip(gold, pred) if g == p)

    per_class: dict[Hashable, ClassMetrics] = {}
    for label in labels:
        tp, n_pred, n_gold = hits[label], predicted[label], support[label]
        precision = tp / n_pred if n_pred else 0.0
        recall = tp / n_gold if n_gold else 0.0
        per_class[label] = ClassMetrics(
            precision, recall, _f1(precision, recall), n_gold, degenerate=not (n_pred and n_gold)
        )

    n = len(gold)
    return ClassificationReport(
        per_class=per_class,
        macro_avg=_average(per_class.values(), weighted=False),
        weighted_avg=_average(per_class.values(), weighted=True),
        accuracy=sum(hits.values()) / n if n else 0.0,
        total=n,
        empty=n == 0,
    )
