"""Minimal static SVG line charts (no plotting dependency)."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 800, 500
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 40, 60
PALETTE = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#ff9da7", "#9c755f"]


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def line_chart(
    steps: Sequence[int],
    bold: Sequence[float],
    *,
    background: Sequence[Sequence[float]] = (),
    threshold: float | None = None,
    title: str = "System reliability forecast",
    bold_label: str = "forecast",
) -> str:
    """Reliability-vs-step chart: thin ``background`` lines under one bold line."""
    x0, x1 = LEFT, WIDTH - RIGHT
    y0, y1 = HEIGHT - BOTTOM, TOP
    lo, hi = (min(steps), max(steps)) if steps else (0, 1)
    span = (hi - lo) or 1

    def px(step):
        return x0 + (step - lo) / span * (x1 - x0)

    def py(value):
        return y0 - value * (y0 - y1)

    def points(values):
        return " ".join(f"{_fmt(px(s))},{_fmt(py(v))}" for s, v in zip(steps, values))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:g}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
    ]
    for k in range(11):
        v = k / 10
        out.append(f'<line x1="{x0 - 4}" y1="{_fmt(py(v))}" x2="{x0}" y2="{_fmt(py(v))}" stroke="black"/>')
        out.append(
            f'<text x="{x0 - 8}" y="{_fmt(py(v) + 4)}" text-anchor="end">{v:.1f}</text>'
        )
    n_ticks = min(10, span)
    for k in range(n_ticks + 1):
        s = lo + round(k * span / n_ticks)
        out.append(f'<line x1="{_fmt(px(s))}" y1="{y0}" x2="{_fmt(px(s))}" y2="{y0 + 4}" stroke="black"/>')
        out.append(f'<text x="{_fmt(px(s))}" y="{y0 + 18}" text-anchor="middle">{s}</text>')
    out.append(f'<text x="{(x0 + x1) / 2:g}" y="{HEIGHT - 18}" text-anchor="middle">step</text>')
    out.append(
        f'<text x="18" y="{(y0 + y1) / 2:g}" text-anchor="middle" '
        f'transform="rotate(-90 18 {(y0 + y1) / 2:g})">reliability</text>'
    )
    for i, values in enumerate(background):
        colour = PALETTE[i % len(PALETTE)]
        out.append(
            f'<polyline fill="none" stroke="{colour}" stroke-width="1" '
            f'stroke-opacity="0.6" points="{points(values)}"/>'
        )
    if threshold is not None:
        out.append(
            f'<line x1="{x0}" y1="{_fmt(py(threshold))}" x2="{x1}" y2="{_fmt(py(threshold))}" '
            f'stroke="#c00" stroke-dasharray="6 4"/>'
        )
        out.append(
            f'<text x="{x1 - 4}" y="{_fmt(py(threshold) - 6)}" text-anchor="end" fill="#c00">'
            f"threshold {threshold:g}</text>"
        )
    out.append(f'<polyline fill="none" stroke="black" stroke-width="3" points="{points(bold)}"/>')
    out.append(f'<text x="{x1 - 4}" y="{y1 + 14}" text-anchor="end">{escape(bold_label)} (bold)</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
