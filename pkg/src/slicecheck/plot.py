"""Standalone SVG charts and plot-info files.

Charts are written as plain SVG 1.1 without a plotting library so the
output is byte-stable and easy to inspect in tests.  Every data bar is a
``<rect class="bar ...">`` and every percent label a
``<text class="pct">``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING
from xml.sax.saxutils import escape, quoteattr

from ._io import atomic_write_text
from .errors import ArgumentError

if TYPE_CHECKING:
    from .analysis import AnalysisResult, ComparisonResult

ROTATE_AFTER = 6
COLORS = ("#4C72B0", "#DD8452")
FONT = 'font-family="sans-serif"'


def percent_label(accuracy: float) -> str:
    """``0.702 -> "70%"``; uses Python's round(), so exact halves go to even."""
    return f"{round(accuracy * 100)}%"


@dataclass
class ChartSpec:
    title: str
    kind: str  # bar, grouped-bar or histogram
    labels: list[str]
    series: list[list[float]]
    series_names: list[str] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    width: int = 0
    height: int = 380


class _Svg:
    def __init__(self, width: int, height: int):
        self.width, self.height = width, height
        self.parts: list[str] = []

    def add(self, s: str) -> None:
        self.parts.append(s)

    def text(self, x: float, y: float, s: str, cls: str, anchor: str = "middle", size: int = 11, extra: str = "") -> None:
        self.add(
            f'<text class="{cls}" x="{x:.2f}" y="{y:.2f}" text-anchor="{anchor}" '
            f'font-size="{size}" {FONT}{extra}>{escape(s)}</text>'
        )

    def render(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
        )
        return head + "\n".join(self.parts) + "\n</svg>\n"


def _render(spec: ChartSpec) -> str:
    n = len(spec.labels)
    if n == 0:
        raise ArgumentError("cannot plot a result with no slices")
    groups = len(spec.series)
    rotate = n > ROTATE_AFTER
    slot = {"grouped-bar": 96, "histogram": 70}.get(spec.kind, 64)
    left, right, top = 56, 20, 44
    bottom = 130 if rotate else 64
    if spec.series_names:
        top += 18
    plot_w = slot * n
    width = spec.width or max(360, left + plot_w + right)
    height = spec.height
    plot_h = height - top - bottom
    svg = _Svg(width, height)
    svg.add(f'<rect class="background" x="0" y="0" width="{width}" height="{height}" fill="white"/>')
    svg.text(width / 2, 22, spec.title, "title", size=14)

    # y axis: accuracy in [0, 1]
    for tick in range(0, 5):
        frac = tick / 4
        y = top + plot_h * (1 - frac)
        svg.add(f'<line class="grid" x1="{left}" y1="{y:.2f}" x2="{left + plot_w}" y2="{y:.2f}" stroke="#dddddd"/>')
        svg.text(left - 6, y + 4, f"{tick * 25}%", "ytick", anchor="end", size=10)
    svg.add(f'<line class="axis" x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>')
    svg.add(
        f'<line class="axis" x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" stroke="black"/>'
    )
    svg.text(14, top + plot_h / 2, "accuracy", "ylabel", size=11,
             extra=f' transform="rotate(-90 14 {top + plot_h / 2:.2f})"')

    if spec.kind == "histogram":
        bar_w, gap = slot, 0.0
    else:
        bar_w = slot * 0.72 / groups
        gap = (slot - bar_w * groups) / 2
    for i, label in enumerate(spec.labels):
        x0 = left + i * slot
        svg.add(f'<g class="slice" data-slice={quoteattr(label)}>')
        for g in range(groups):
            acc = min(max(spec.series[g][i], 0.0), 1.0)
            h = plot_h * acc
            x = x0 + gap + g * bar_w
            y = top + plot_h - h
            series_cls = f" bar-{'ab'[g]}" if groups > 1 else ""
            title = f"{label}: {percent_label(acc)}"
            if spec.series_names:
                title = f"{spec.series_names[g]} {title}"
            svg.add(
                f'<rect class="bar{series_cls}" x="{x:.2f}" y="{y:.2f}" width="{bar_w:.2f}" '
                f'height="{h:.2f}" fill="{COLORS[g % len(COLORS)]}" stroke="white">'
                f"<title>{escape(title)}</title></rect>"
            )
            svg.text(x + bar_w / 2, y - 4, percent_label(acc), "pct", size=10 if groups > 1 else 11)
        if spec.flags and spec.flags[i]:
            svg.text(x0 + slot / 2, top + plot_h - 18, spec.flags[i], "flag", size=10)
        if spec.notes and spec.notes[i]:
            svg.text(x0 + slot / 2, top - 6, spec.notes[i], "delta", size=10)
        lx, ly = x0 + slot / 2, top + plot_h + 16
        if rotate:
            svg.text(lx, ly, label, "xlabel", anchor="end", size=10,
                     extra=f' transform="rotate(-45 {lx:.2f} {ly:.2f})"')
        else:
            svg.text(lx, ly, label, "xlabel", size=10)
        svg.add("</g>")

    if spec.series_names:
        lx = left
        for g, name in enumerate(spec.series_names):
            svg.add(
                f'<rect class="legend-swatch" x="{lx}" y="{top - 30}" width="12" height="12" '
                f'fill="{COLORS[g % len(COLORS)]}"/>'
            )
            svg.text(lx + 16, top - 20, name, "legend", anchor="start", size=11)
            lx += 24 + 8 * len(name)
    return svg.render()


def _write_svg(spec: ChartSpec, path: str | Path) -> Path:
    return atomic_write_text(path, _render(spec))


def bar_chart_spec(result: AnalysisResult, title: str | None = None) -> ChartSpec:
    return ChartSpec(
        title=title or f"Accuracy by {result.dimension}",
        kind="bar",
        labels=result.labels,
        series=[[r.accuracy for r in result.rows]],
        flags=["empty" if r.total == 0 else "" for r in result.rows],
    )


def render_bar_chart(result: AnalysisResult, path: str | Path, title: str | None = None) -> Path:
    """One bar per slice, height proportional to accuracy."""
    return _write_svg(bar_chart_spec(result, title), path)


def render_length_histogram(result: AnalysisResult, path: str | Path, title: str | None = None) -> Path:
    """Contiguous bars over the length bins of a length analysis."""
    spec = bar_chart_spec(result, title)
    spec.kind = "histogram"
    spec.flags = ["empty (n=0)" if r.total == 0 else "" for r in result.rows]
    return _write_svg(spec, path)


def render_grouped_bars(comparison: ComparisonResult, path: str | Path, title: str | None = None) -> Path:
    """Two bars per slice (model A, model B) with a legend and accuracy deltas."""
    rows = comparison.rows
    spec = ChartSpec(
        title=title or f"{comparison.name_a} vs {comparison.name_b} by {comparison.dimension}",
        kind="grouped-bar",
        labels=[r.slice_label for r in rows],
        series=[[r.accuracy_a for r in rows], [r.accuracy_b for r in rows]],
        series_names=[comparison.name_a, comparison.name_b],
        notes=[f"Δ {r.delta:+.2f}" for r in rows],
    )
    return _write_svg(spec, path)


def write_plot_info(result: AnalysisResult, path: str | Path) -> Path:
    """Write the plot-info CSV (slice, totals, accuracy, optional example)."""
    return atomic_write_text(path, result.plot_info_csv())


def write_reports(result: AnalysisResult, path: str | Path, digits: int | None = 3) -> Path:
    """Write per-slice classification reports plus the overall report."""
    return atomic_write_text(path, result.reports_csv(digits=digits))


def write_comparison(comparison: ComparisonResult, path: str | Path) -> Path:
    return atomic_write_text(path, comparison.to_csv())
