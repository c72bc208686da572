"""Fixture builders shared by the test modules."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from slicecheck.datasets import DatasetDescriptor
from slicecheck.submission import submit
from slicecheck.table import Table

TOY = Path(str(resources.files("slicecheck").joinpath("data/toy")))

BINARY = DatasetDescriptor(
    name="binary", text_column="text", gold_column="gold", label_domain=("N", "Y")
)


def make_submission(texts, gold, pred, descriptor=BINARY, extra=None, label_map=None):
    """Build a submission whose predictions already use the gold labels."""
    cols = {descriptor.text_column: list(texts), descriptor.gold_column: list(gold)}
    cols.update(extra or {})
    labels = set(pred) | set(gold) | set(descriptor.label_domain or ())
    return submit(Table(cols), descriptor, list(pred), label_map or {v: v for v in labels})
