"""SVG plot emission and fixed-width text tables for result sets.

SVG is the sole plot format: textual, diffable, and byte-deterministic for
a given result set.
"""

from __future__ import annotations

from .errors import EmptyResult, MissingActuals, TooFewFeatures
from .results import ResultSet
from .table import NUMERIC, Table, format_cell

WIDTH = 640
HEIGHT = 480
MARGIN_LEFT = 64
MARGIN_RIGHT = 20
MARGIN_TOP = 20
MARGIN_BOTTOM = 56

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
)


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _tick(v: float) -> str:
    return f"{v:g}"


def _document(body: list[str], title: str) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">'
    )
    parts = [head,
             f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
             f'<text x="{WIDTH // 2}" y="14" text-anchor="middle" '
             f'font-family="monospace" font-size="12">{title}</text>']
    parts.extend(body)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


class _Scale:
    def __init__(self, lo: float, hi: float, pixel_lo: float, pixel_hi: float):
        if hi == lo:
            hi = lo + 1.0
        self.lo, self.hi = lo, hi
        self.pixel_lo, self.pixel_hi = pixel_lo, pixel_hi

    def __call__(self, v: float) -> float:
        frac = (v - self.lo) / (self.hi - self.lo)
        return self.pixel_lo + frac * (self.pixel_hi - self.pixel_lo)

    def ticks(self, n: int = 5) -> list[float]:
        step = (self.hi - self.lo) / (n - 1)
        return [self.lo + i * step for i in range(n)]


def _axes(xs: _Scale, ys: _Scale, x_name: str, y_name: str) -> list[str]:
    left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    top, bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM
    parts = [
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>',
    ]
    for v in ys.ticks():
        y = _fmt(ys(v))
        parts.append(
            f'<line x1="{left - 4}" y1="{y}" x2="{left}" y2="{y}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{left - 8}" y="{y}" text-anchor="end" dominant-baseline="middle" '
            f'font-family="monospace" font-size="10">{_tick(v)}</text>'
        )
    for v in xs.ticks():
        x = _fmt(xs(v))
        parts.append(
            f'<line x1="{x}" y1="{bottom}" x2="{x}" y2="{bottom + 4}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x}" y="{bottom + 16}" text-anchor="middle" '
            f'font-family="monospace" font-size="10">{_tick(v)}</text>'
        )
    parts.append(
        f'<text x="{(left + right) // 2}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-family="monospace" font-size="11">{x_name}</text>'
    )
    parts.append(
        f'<text x="14" y="{(top + bottom) // 2}" text-anchor="middle" '
        f'font-family="monospace" font-size="11" '
        f'transform="rotate(-90 14 {(top + bottom) // 2})">{y_name}</text>'
    )
    return parts


def render_bar(r: ResultSet) -> str:
    """One bar per row; x labels from the label columns, y from 0."""
    if r.row_count == 0:
        raise EmptyResult("nothing to plot")
    values = [float(v) for v in r.outputs]
    if r.labels:
        names = [format_cell(v) for v in r.labels[0]]
    else:
        names = [str(i + 1) for i in range(r.row_count)]
    lo = min(0.0, min(values))
    hi = max(0.0, max(values))
    ys = _Scale(lo, hi, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP)
    left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    slot = (right - left) / len(values)
    body = []
    baseline = ys(0.0)
    for v in ys.ticks():
        y = _fmt(ys(v))
        body.append(
            f'<line x1="{left - 4}" y1="{y}" x2="{left}" y2="{y}" stroke="black"/>'
        )
        body.append(
            f'<text x="{left - 8}" y="{y}" text-anchor="end" dominant-baseline="middle" '
            f'font-family="monospace" font-size="10">{_tick(v)}</text>'
        )
    body.append(
        f'<line x1="{left}" y1="{MARGIN_TOP}" x2="{left}" '
        f'y2="{HEIGHT - MARGIN_BOTTOM}" stroke="black"/>'
    )
    body.append(
        f'<line x1="{left}" y1="{_fmt(baseline)}" x2="{right}" '
        f'y2="{_fmt(baseline)}" stroke="black"/>'
    )
    for i, (name, v) in enumerate(zip(names, values)):
        x0 = left + slot * (i + 0.1)
        bar_w = slot * 0.8
        y_v = ys(v)
        y0 = min(y_v, baseline)
        h = abs(y_v - baseline)
        body.append(
            f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(bar_w)}" '
            f'height="{_fmt(h)}" fill="{PALETTE[0]}"/>'
        )
        body.append(
            f'<text x="{_fmt(x0 + bar_w / 2)}" y="{HEIGHT - MARGIN_BOTTOM + 16}" '
            f'text-anchor="middle" font-family="monospace" font-size="10">{name}</text>'
        )
    label_name = r.label_columns[0] if r.label_columns else "row"
    body.append(
        f'<text x="{(left + right) // 2}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-family="monospace" font-size="11">{label_name}</text>'
    )
    body.append(
        f'<text x="14" y="{(MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) // 2}" '
        f'text-anchor="middle" font-family="monospace" font-size="11" '
        f'transform="rotate(-90 14 {(MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) // 2})">'
        f'{r.target_name}</text>'
    )
    return _document(body, f"{r.target_name} ({r.output_kind})")


def render_scatter(r: ResultSet) -> str:
    """Predicted against actual, with the y=x reference line."""
    if r.row_count == 0:
        raise EmptyResult("nothing to plot")
    if r.actuals is None:
        raise MissingActuals("scatter needs actual values")
    predicted = [float(v) for v in r.outputs]
    actual = [float(v) for v in r.actuals]
    lo = min(actual + predicted)
    hi = max(actual + predicted)
    pad = 0.05 * (hi - lo if hi > lo else 1.0)
    xs = _Scale(lo - pad, hi + pad, MARGIN_LEFT, WIDTH - MARGIN_RIGHT)
    ys = _Scale(lo - pad, hi + pad, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP)
    body = _axes(xs, ys, "actual", "predicted")
    body.append(
        f'<line x1="{_fmt(xs(lo - pad))}" y1="{_fmt(ys(lo - pad))}" '
        f'x2="{_fmt(xs(hi + pad))}" y2="{_fmt(ys(hi + pad))}" '
        f'stroke="#888888" stroke-dasharray="4 3"/>'
    )
    for a, p in zip(actual, predicted):
        body.append(
            f'<circle cx="{_fmt(xs(a))}" cy="{_fmt(ys(p))}" r="3" '
            f'fill="{PALETTE[0]}" fill-opacity="0.7"/>'
        )
    return _document(body, f"{r.target_name}: predicted vs actual")


def render_clusters(r: ResultSet, t: Table, centroids: list | None = None) -> str:
    """First two numeric feature columns, colored by cluster id."""
    numeric = [c for c in t.columns if c.dtype == NUMERIC]
    if len(numeric) < 2:
        raise TooFewFeatures("cluster plot needs at least two numeric features")
    if r.row_count == 0:
        raise EmptyResult("nothing to plot")
    col_x, col_y = numeric[0], numeric[1]
    x_vals = [float(v) for v in col_x.cells]
    y_vals = [float(v) for v in col_y.cells]
    cx = [float(c[0]) for c in centroids] if centroids else []
    cy = [float(c[1]) for c in centroids] if centroids else []
    lo_x, hi_x = min(x_vals + cx), max(x_vals + cx)
    lo_y, hi_y = min(y_vals + cy), max(y_vals + cy)
    pad_x = 0.05 * (hi_x - lo_x if hi_x > lo_x else 1.0)
    pad_y = 0.05 * (hi_y - lo_y if hi_y > lo_y else 1.0)
    xs = _Scale(lo_x - pad_x, hi_x + pad_x, MARGIN_LEFT, WIDTH - MARGIN_RIGHT)
    ys = _Scale(lo_y - pad_y, hi_y + pad_y, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP)
    body = _axes(xs, ys, col_x.name, col_y.name)
    for x, y, cluster in zip(x_vals, y_vals, r.outputs):
        color = PALETTE[int(cluster) % len(PALETTE)]
        body.append(
            f'<circle cx="{_fmt(xs(x))}" cy="{_fmt(ys(y))}" r="3" '
            f'fill="{color}" fill-opacity="0.8"/>'
        )
    for x, y in zip(cx, cy):
        px, py = xs(x), ys(y)
        body.append(
            f'<line x1="{_fmt(px - 6)}" y1="{_fmt(py)}" x2="{_fmt(px + 6)}" '
            f'y2="{_fmt(py)}" stroke="black" stroke-width="2"/>'
        )
        body.append(
            f'<line x1="{_fmt(px)}" y1="{_fmt(py - 6)}" x2="{_fmt(px)}" '
            f'y2="{_fmt(py + 6)}" stroke="black" stroke-width="2"/>'
        )
    return _document(body, "clusters")


def render_class_bar(r: ResultSet) -> str:
    """Bar of per-class output counts (classification DISPLAY OF)."""
    if r.row_count == 0:
        raise EmptyResult("nothing to plot")
    counts: dict[str, int] = {}
    for v in r.outputs:
        key = format_cell(v if not isinstance(v, int) else float(v))
        counts[key] = counts.get(key, 0) + 1
    ordered = sorted(counts)
    synthetic = ResultSet(
        outputs=tuple(float(counts[k]) for k in ordered),
        output_kind="count",
        target_name="count",
        label_columns=("class",),
        labels=(tuple(ordered),),
    )
    return render_bar(synthetic)


def text_table(header: list[str], rows: list[list[str]]) -> str:
    """Fixed-width table with a header rule."""
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def line(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    out = [line(header), "  ".join("-" * w for w in widths)]
    out.extend(line(row) for row in rows)
    return "\n".join(out) + "\n"
