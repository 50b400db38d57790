"""Minimal self-contained SVG line plots.

A plot is a single file with a framed data box, tick labels, one
polyline per series, and an inline legend.  No renderer beyond a
browser is needed and the output is deterministic (coordinates are
formatted with %.6g), so plots can be diffed between runs.
"""

import numpy as np

__all__ = ["line_plot"]

# muted qualitative palette, repeats after six series
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf")

WIDTH = 640
HEIGHT = 420
MARGIN = {"left": 62.0, "right": 18.0, "top": 34.0, "bottom": 46.0}


def _fmt(x):
    return "%.6g" % float(x)


def _ticks(lo, hi, n=5):
    """n round-ish tick positions covering [lo, hi]."""
    if not np.isfinite(lo) or not np.isfinite(hi) or hi <= lo:
        return [lo]
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10.0 ** np.floor(np.log10(raw))
    step = min(s for s in (1.0, 2.0, 2.5, 5.0, 10.0) if s * mag >= raw) * mag
    first = np.ceil(lo / step) * step
    ticks = np.arange(first, hi + 0.5 * step, step)
    return [float(t) for t in ticks if lo - 1e-12 <= t <= hi + 1e-12]


def _escape(s):
    return (str(s).replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;"))


def line_plot(path, series, title="", xlabel="", ylabel=""):
    """Write a line plot to ``path``.

    Parameters
    ----------
    series : sequence of (label, x, y)
        Each entry draws one polyline; non-finite samples split the line.
    """
    series = [(str(lab), np.asarray(x, float).ravel(),
               np.asarray(y, float).ravel()) for lab, x, y in series]
    xs = [x[np.isfinite(x) & np.isfinite(y)] for _, x, y in series]
    ys = [y[np.isfinite(x) & np.isfinite(y)] for _, x, y in series]
    allx = np.concatenate([x for x in xs if x.size] or [np.zeros(1)])
    ally = np.concatenate([y for y in ys if y.size] or [np.zeros(1)])
    x0, x1 = float(allx.min()), float(allx.max())
    y0, y1 = float(ally.min()), float(ally.max())
    if x1 <= x0:
        x0, x1 = x0 - 0.5, x0 + 0.5
    if y1 <= y0:
        y0, y1 = y0 - 0.5, y0 + 0.5
    pad = 0.04 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    bx0, bx1 = MARGIN["left"], WIDTH - MARGIN["right"]
    by0, by1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]

    def px(x):
        return bx0 + (x - x0) / (x1 - x0) * (bx1 - bx0)

    def py(y):
        return by0 + (y - y0) / (y1 - y0) * (by1 - by0)

    out = []
    out.append('<svg xmlns="http://www.w3.org/2000/svg" '
               'width="%d" height="%d" viewBox="0 0 %d %d">'
               % (WIDTH, HEIGHT, WIDTH, HEIGHT))
    out.append('<rect width="%d" height="%d" fill="white"/>' % (WIDTH, HEIGHT))
    out.append('<rect x="%s" y="%s" width="%s" height="%s" fill="none" '
               'stroke="#444" stroke-width="1"/>'
               % (_fmt(bx0), _fmt(by1), _fmt(bx1 - bx0), _fmt(by0 - by1)))
    if title:
        out.append('<text x="%s" y="20" font-family="sans-serif" '
                   'font-size="14" text-anchor="middle">%s</text>'
                   % (_fmt(0.5 * (bx0 + bx1)), _escape(title)))
    for t in _ticks(x0, x1):
        out.append('<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="#444"/>'
                   % (_fmt(px(t)), _fmt(by0), _fmt(px(t)), _fmt(by0 + 4)))
        out.append('<text x="%s" y="%s" font-family="sans-serif" '
                   'font-size="11" text-anchor="middle">%s</text>'
                   % (_fmt(px(t)), _fmt(by0 + 17), _fmt(t)))
    for t in _ticks(y0, y1):
        out.append('<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="#444"/>'
                   % (_fmt(bx0 - 4), _fmt(py(t)), _fmt(bx0), _fmt(py(t))))
        out.append('<text x="%s" y="%s" font-family="sans-serif" '
                   'font-size="11" text-anchor="end">%s</text>'
                   % (_fmt(bx0 - 7), _fmt(py(t) + 3.5), _fmt(t)))
    if xlabel:
        out.append('<text x="%s" y="%s" font-family="sans-serif" '
                   'font-size="12" text-anchor="middle">%s</text>'
                   % (_fmt(0.5 * (bx0 + bx1)), _fmt(HEIGHT - 10),
                      _escape(xlabel)))
    if ylabel:
        cx, cy = 16.0, 0.5 * (by0 + by1)
        out.append('<text x="%s" y="%s" font-family="sans-serif" '
                   'font-size="12" text-anchor="middle" '
                   'transform="rotate(-90 %s %s)">%s</text>'
                   % (_fmt(cx), _fmt(cy), _fmt(cx), _fmt(cy),
                      _escape(ylabel)))
    for i, (label, x, y) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        ok = np.isfinite(x) & np.isfinite(y)
        run = []
        segs = []
        for j in range(x.size):
            if ok[j]:
                run.append("%s,%s" % (_fmt(px(x[j])), _fmt(py(y[j]))))
            elif run:
                segs.append(run)
                run = []
        if run:
            segs.append(run)
        for seg in segs:
            out.append('<polyline fill="none" stroke="%s" stroke-width="1.5"'
                       ' points="%s"/>' % (color, " ".join(seg)))
        ly = by1 + 14 + 15 * i
        out.append('<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="%s" '
                   'stroke-width="2"/>'
                   % (_fmt(bx1 - 118), _fmt(ly - 4), _fmt(bx1 - 98),
                      _fmt(ly - 4), color))
        out.append('<text x="%s" y="%s" font-family="sans-serif" '
                   'font-size="11">%s</text>'
                   % (_fmt(bx1 - 93), _fmt(ly), _escape(label)))
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
