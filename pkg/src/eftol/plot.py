"""Minimal deterministic SVG line charts for tolerance curves."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .tolerance import ToleranceCurve

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 60, 170, 20, 50
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


class PlotError(ValueError):
    pass


def _xy(p: float, t: float) -> tuple[float, float]:
    w = WIDTH - LEFT - RIGHT
    h = HEIGHT - TOP - BOTTOM
    return LEFT + p * w, TOP + (1.0 - t) * h


def _polyline(points, color: str, dash: str | None) -> str:
    coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
    style = f' stroke-dasharray="{dash}"' if dash else ""
    return f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{style} points="{coords}"/>'


def render_svg(curves: list[tuple[str, ToleranceCurve]], show_bound: bool = False) -> str:
    """Solid lines for t_e, dashed for t_e^M, dotted for the bound when requested."""
    if not curves:
        raise PlotError("need at least one tolerance curve")
    grid = curves[0][1].grid
    for label, c in curves[1:]:
        if c.grid != grid:
            raise PlotError(f"{label}: p-grid differs from {curves[0][0]}")
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    x0, y0 = _xy(0, 0)
    x1, y1 = _xy(1, 1)
    out.append(f'<path d="M{x0:.2f},{y1:.2f} V{y0:.2f} H{x1:.2f}" fill="none" stroke="black"/>')
    for k in range(6):
        v = k / 5
        x, _ = _xy(v, 0)
        _, y = _xy(0, v)
        out.append(f'<text x="{x:.2f}" y="{y0 + 16:.2f}" font-size="11" text-anchor="middle">{v:.1f}</text>')
        out.append(f'<text x="{x0 - 6:.2f}" y="{y + 4:.2f}" font-size="11" text-anchor="end">{v:.1f}</text>')
    out.append(f'<text x="{(x0 + x1) / 2:.2f}" y="{HEIGHT - 12}" font-size="12" text-anchor="middle">p</text>')

    legend_y = TOP + 10
    for idx, (label, c) in enumerate(curves):
        color = COLORS[idx % len(COLORS)]
        series = [("t_e", [r.t_e for r in c.rows], None), ("t_e^M", [r.t_e_sm for r in c.rows], "6,4")]
        if show_bound and all(r.bound is not None for r in c.rows):
            series.append(("bound", [r.bound for r in c.rows], "1,3"))
        for name, values, dash in series:
            out.append(_polyline([_xy(p, t) for p, t in zip(grid, values)], color, dash))
            lx = WIDTH - RIGHT + 15
            style = f' stroke-dasharray="{dash}"' if dash else ""
            out.append(
                f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 25}" y2="{legend_y}" stroke="{color}" stroke-width="1.5"{style}/>'
            )
            out.append(f'<text x="{lx + 30}" y="{legend_y + 4}" font-size="11">{escape(label)} {name}</text>')
            legend_y += 16
    out.append("</svg>")
    return "\n".join(out) + "\n"
