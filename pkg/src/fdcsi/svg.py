"""Standalone SVG line charts for sweep results.

Output is a pure function of the input rows, so identical results give
identical bytes.
"""

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 720, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 190, 30, 55
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")

Y_LABELS = {
    "throughput_mnats": "Throughput at 1 MHz [Mnats/s]",
    "pout": "Outage probability",
    "mc_throughput": "Monte Carlo throughput [Mnats/s]",
    "mc_pout": "Monte Carlo outage probability",
}


def nice_ticks(lo, hi, target=6):
    """Round tick positions (1, 2 or 5 times a power of ten) covering [lo, hi]."""
    if hi <= lo:
        hi = lo + (abs(lo) or 1.0)
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    start = math.floor(lo / step + 1e-9) * step
    stop = math.ceil(hi / step - 1e-9) * step
    n = int(round((stop - start) / step))
    return [round(start + i * step, 12) for i in range(n + 1)]


def _num(v):
    return format(v, ".2f")


def _tick_label(v):
    return format(v, ".6g")


def default_column(result):
    if any(r.throughput_mnats is not None for r in result.rows):
        return "throughput_mnats"
    return "pout"


def render_svg(result, axis_label, column=None):
    if not result.rows:
        raise ValueError("cannot plot an empty result")
    column = column or default_column(result)
    series = []
    for label in result.labels():
        xs, ys = result.series(label, column)
        pts = [(x, y) for x, y in zip(xs, ys) if y is not None]
        if pts:
            series.append((label, pts))
    if not series:
        raise ValueError(f"column {column!r} has no values to plot")

    all_x = [x for _, pts in series for x, _ in pts]
    all_y = [y for _, pts in series for _, y in pts]
    xt = nice_ticks(min(all_x), max(all_x))
    yt = nice_ticks(min(0.0, min(all_y)), max(all_y))
    x0, x1, y0, y1 = xt[0], xt[-1], yt[0], yt[-1]
    pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(x):
        return MARGIN_LEFT + (x - x0) / (x1 - x0) * pw

    def py(y):
        return MARGIN_TOP + ph - (y - y0) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}" '
        'fill="none" stroke="black"/>',
    ]
    for t in xt:
        x = _num(px(t))
        out.append(f'<line x1="{x}" y1="{MARGIN_TOP}" x2="{x}" y2="{MARGIN_TOP + ph}" stroke="#dddddd"/>')
        out.append(f'<text x="{x}" y="{MARGIN_TOP + ph + 18}" text-anchor="middle">{_tick_label(t)}</text>')
    for t in yt:
        y = _num(py(t))
        out.append(f'<line x1="{MARGIN_LEFT}" y1="{y}" x2="{MARGIN_LEFT + pw}" y2="{y}" stroke="#dddddd"/>')
        out.append(f'<text x="{MARGIN_LEFT - 6}" y="{y}" text-anchor="end" dominant-baseline="middle">{_tick_label(t)}</text>')
    out.append(
        f'<text x="{_num(MARGIN_LEFT + pw / 2)}" y="{HEIGHT - 12}" text-anchor="middle">{escape(axis_label)}</text>'
    )
    ylab = escape(Y_LABELS.get(column, column))
    out.append(
        f'<text x="16" y="{_num(MARGIN_TOP + ph / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_num(MARGIN_TOP + ph / 2)})">{ylab}</text>'
    )
    for i, (label, pts) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        path = " ".join(f"{_num(px(x))},{_num(py(y))}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{path}"/>')
        ly = MARGIN_TOP + 14 + 20 * i
        lx = MARGIN_LEFT + pw + 14
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 30}" y="{ly}" dominant-baseline="middle">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(result, axis_label, path, column=None):
    text = render_svg(result, axis_label, column)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
