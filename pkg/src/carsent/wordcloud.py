"""Deterministic SVG word clouds: row-packed layout, no randomness."""

from __future__ import annotations

from xml.sax.saxutils import escape

# fixed palette cycled by rank
_COLORS = ("#1b6ca8", "#d1495b", "#2e933c", "#6a4c93", "#e07a1f",
           "#11707e", "#8c5383", "#556b2f")

_CHAR_WIDTH = 0.62   # em width per character for sans-serif sizing


def merge_topic_words(model, per_topic: int = 10) -> list[tuple[str, float]]:
    """Union of every topic's top words, each at its best weight."""
    from . import topics

    best: dict[str, float] = {}
    for k in range(model.n_topics):
        for term, weight in topics.top_words(model, k, per_topic):
            if weight > best.get(term, -1.0):
                best[term] = weight
    return sorted(best.items(), key=lambda item: (-item[1], item[0]))


def render_svg(words: list[tuple[str, float]], width: int = 800,
               min_font: int = 12, max_font: int = 48, padding: int = 10) -> str:
    """Lay words out left-to-right in rows, font size linear in weight."""
    ordered = sorted(words, key=lambda item: (-item[1], item[0]))
    if ordered:
        weights = [w for _, w in ordered]
        lo, hi = min(weights), max(weights)
        span = hi - lo
    texts = []
    x = float(padding)
    y = float(padding)
    row_height = 0.0
    for rank, (term, weight) in enumerate(ordered):
        if span > 0:
            size = min_font + (weight - lo) / span * (max_font - min_font)
        else:
            size = float(max_font)
        text_width = len(term) * size * _CHAR_WIDTH
        if x > padding and x + text_width > width - padding:
            x = float(padding)
            y += row_height
            row_height = 0.0
        baseline = y + size
        color = _COLORS[rank % len(_COLORS)]
        texts.append(
            f'<text x="{x:.1f}" y="{baseline:.1f}" font-size="{size:.1f}" '
            f'font-family="sans-serif" fill="{color}">{escape(term)}</text>'
        )
        x += text_width + padding
        row_height = max(row_height, size * 1.3)
    height = int(y + row_height + padding)
    body = "\n  ".join(texts)
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">\n'
        f'  <rect width="{width}" height="{height}" fill="#ffffff"/>\n'
        f"  {body}\n"
        "</svg>\n"
    )
