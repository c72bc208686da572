"""Slice-based error analysis for binary offensive-language classifiers."""

__version__ = "0.1.0"

from .analysis import (
    AnalysisOptions,
    AnalysisResult,
    PlotInfoRow,
    aave_analysis,
    analyze_on,
    analyze_slices,
    check_anno_agreement,
    check_substring,
    cold_analyze,
    cold_category,
    compare_models,
    hatecheck_analyze,
    hatecheck_category,
    register_analysis,
    run_selector,
    str_len_analysis,
)
from .datasets import (
    BUILTINS,
    DatasetDescriptor,
    batch_iter,
    fetch_remote,
    load_dataset,
    load_descriptors,
    resolve_descriptor,
)
from .dialect import DialectModel, load_dialect_model, score_message
from .errors import SliceCheckError
from .metrics import ClassificationReport, accuracy, classification_report, confusion_counts
from .plot import render_bar_chart, render_grouped_bars, render_length_histogram, write_plot_info
from .preprocess import NormalizationRules, preprocess_text, tokenize
from .submission import LabelMap, SubmissionObject, resolve_label_map, submit
from .table import MISSING, Column, Table, group_rows, load_table, read_table, select_rows

__all__ = [
    "AnalysisOptions",
    "AnalysisResult",
    "BUILTINS",
    "ClassificationReport",
    "Column",
    "DatasetDescriptor",
    "DialectModel",
    "LabelMap",
    "MISSING",
    "NormalizationRules",
    "PlotInfoRow",
    "SliceCheckError",
    "SubmissionObject",
    "Table",
    "aave_analysis",
    "accuracy",
    "analyze_on",
    "analyze_slices",
    "batch_iter",
    "check_anno_agreement",
    "check_substring",
    "classification_report",
    "cold_analyze",
    "cold_category",
    "compare_models",
    "confusion_counts",
    "fetch_remote",
    "group_rows",
    "hatecheck_analyze",
    "hatecheck_category",
    "load_dataset",
    "load_descriptors",
    "load_dialect_model",
    "load_table",
    "preprocess_text",
    "read_table",
    "register_analysis",
    "render_bar_chart",
    "render_grouped_bars",
    "render_length_histogram",
    "resolve_descriptor",
    "resolve_label_map",
    "run_selector",
    "score_message",
    "select_rows",
    "str_len_analysis",
    "submit",
    "tokenize",
    "write_plot_info",
]
