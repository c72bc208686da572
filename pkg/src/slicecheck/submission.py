"""Bind model predictions to a dataset.

The canonical label map direction is prediction -> gold, which allows
many-to-one maps (e.g. two "offensive"-like model labels onto one gold
label).  A gold -> prediction map is accepted only when it is a
bijection, and is inverted.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any

from .datasets import DatasetDescriptor, validate_table
from .errors import CountError, CoverageError, DomainError, InversionError, OrientationError
from .table import Column, Table, format_cell


@dataclass(frozen=True)
class LabelMap:
    pairs: Mapping[Hashable, Hashable]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", MappingProxyType(dict(self.pairs)))

    def __getitem__(self, pred: Hashable) -> Hashable:
        return self.pairs[pred]

    def __contains__(self, pred: object) -> bool:
        return pred in self.pairs

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LabelMap):
            return dict(self.pairs) == dict(other.pairs)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.pairs.items()))

    def apply(self, predictions: Iterable[Hashable]) -> list[Hashable]:
        return [self.pairs[p] for p in predictions]


def _sorted(values: Iterable[Any]) -> list[Any]:
    return sorted(values, key=lambda v: (type(v).__name__, format_cell(v)))


def _fold(value: Any) -> Any:
    return value.casefold() if isinstance(value, str) else value


def resolve_label_map(
    user_map: Mapping[Hashable, Hashable] | LabelMap,
    prediction_values: Iterable[Hashable],
    gold_values: Iterable[Hashable],
    fold_case: bool = False,
) -> LabelMap:
    """Canonicalize a user label map to prediction -> gold.

    The map is kept as given when its keys are prediction labels and its
    values gold labels, and inverted when it is a bijection in the other
    direction.  Maps with keys that never occur in ``prediction_values``
    (common for small batches) are accepted as long as every observed
    prediction is covered.
    """
    if isinstance(user_map, LabelMap):
        user_map = user_map.pairs
    if not user_map:
        raise OrientationError("label map is empty")
    preds = set(prediction_values)
    gold = set(gold_values)

    if fold_case:
        gold_spelling = {_fold(g): g for g in gold}
        pred_spelling = {_fold(p): p for p in preds}
        folded: dict[Hashable, Hashable] = {}
        for k, v in user_map.items():
            fk, fv = _fold(k), _fold(v)
            folded[pred_spelling.get(fk, gold_spelling.get(fk, k))] = gold_spelling.get(
                fv, pred_spelling.get(fv, v)
            )
        user_map = folded

    keys, values = set(user_map), set(user_map.values())
    forward = keys <= preds and values <= gold
    backward = keys <= gold and values <= preds
    if not (forward or backward):
        # maps may name labels this batch never predicted
        forward = values <= gold and preds <= keys
        backward = keys <= gold and preds <= values and not forward

    inverse = {v: k for k, v in user_map.items()}
    is_bijection = len(inverse) == len(user_map)

    if forward and backward:
        if not (is_bijection and inverse == dict(user_map)):
            raise OrientationError(
                "label map is valid in both directions; pass it as prediction=gold "
                "with keys that are not gold labels"
            )
        pairs = dict(user_map)
    elif forward:
        pairs = dict(user_map)
    elif backward:
        if not is_bijection:
            raise InversionError(
                "gold->prediction label map is many-to-one and cannot be inverted; "
                "pass it as prediction=gold"
            )
        pairs = inverse
    elif values <= gold:
        pairs = dict(user_map)  # coverage check below reports the gap
    else:
        stray = _sorted(values - gold) if not keys <= gold else _sorted(keys - gold)
        raise OrientationError(
            "label map does not connect predictions to gold labels "
            f"(not gold labels: {', '.join(map(format_cell, stray))})"
        )

    unmapped = _sorted(preds - set(pairs))
    if unmapped:
        raise CoverageError("predicted labels missing from the label map", unmapped)
    return LabelMap(pairs)


@dataclass(frozen=True)
class SubmissionObject:
    table: Table
    descriptor: DatasetDescriptor
    prediction_column: str
    mapped_column: str
    label_map: LabelMap

    @property
    def gold(self) -> tuple:
        return self.table[self.descriptor.gold_column].values

    @property
    def predicted(self) -> tuple:
        """Predictions mapped into the gold label domain."""
        return self.table[self.mapped_column].values

    @property
    def raw_predictions(self) -> tuple:
        return self.table[self.prediction_column].values

    @property
    def texts(self) -> tuple:
        return self.table[self.descriptor.text_column].values

    @property
    def row_count(self) -> int:
        return self.table.row_count

    @property
    def gold_domain(self) -> list:
        """Declared label domain (in declared order) plus any observed gold labels."""
        declared = list(self.descriptor.label_domain or ())
        by_text = {format_cell(g): g for g in self.gold}
        labels = [by_text.get(d, d) for d in declared]
        labels += _sorted(set(self.gold) - set(labels))
        return labels

    def correct(self) -> list[bool]:
        return [g == p for g, p in zip(self.gold, self.predicted)]


def _free_name(table: Table, base: str) -> str:
    name, n = base, 1
    while name in table:
        name = f"{base}_{n}"
        n += 1
    return name


def submit(
    table: Table,
    descriptor: DatasetDescriptor,
    predictions: Sequence[Hashable] | Column,
    user_map: Mapping[Hashable, Hashable] | LabelMap,
    *,
    fold_case: bool = False,
    coerce_case: bool = False,
) -> SubmissionObject:
    """Validate predictions against ``table`` and map them into the gold domain."""
    table = validate_table(descriptor, table, coerce_case=coerce_case)
    preds = predictions if isinstance(predictions, Column) else Column.of(predictions)
    if len(preds) != table.row_count:
        raise CountError("prediction count does not match dataset rows", table.row_count, len(preds))
    missing_at = [i for i, p in enumerate(preds.values) if p is None]
    if missing_at:
        raise CoverageError("missing predictions at rows", missing_at[:10])
    gold = table[descriptor.gold_column].values
    missing_gold = [i for i, g in enumerate(gold) if g is None]
    if missing_gold:
        raise DomainError(f"missing gold labels at rows {missing_gold[:10]}")

    gold_values = set(gold)
    by_text = {format_cell(g): g for g in gold_values}
    for d in descriptor.label_domain or ():
        gold_values.add(by_text.get(d, d))

    label_map = resolve_label_map(user_map, preds.values, gold_values, fold_case=fold_case)
    mapped = label_map.apply(preds.values)

    pred_col = _free_name(table, "prediction")
    out = table.with_column(pred_col, preds)
    mapped_col = _free_name(out, "prediction_gold")
    out = out.with_column(mapped_col, Column.of(mapped, kind=table[descriptor.gold_column].kind))
    return SubmissionObject(out, descriptor, pred_col, mapped_col, label_map)
