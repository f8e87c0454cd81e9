"""Static small-multiples SVG export of a TopicGridSet: five aligned heatmaps.

Pure string construction with fixed float formatting, so the same grid set
always renders to the same bytes.
"""

from __future__ import annotations

from .risk import TopicGridSet

PANELS = ("current", "self_history", "self_risk", "peer_history", "peer_risk")
PANEL_TITLES = {
    "current": "current",
    "self_history": "self history",
    "self_risk": "self risk",
    "peer_history": "peer history",
    "peer_risk": "peer risk",
}
_ACTIVITY_COLOR = "31,119,180"  # blue ramp for activity panels
_RISK_COLOR = "214,39,40"  # red ramp for risk panels

CELL = 34
GAP = 26
TOP = 34


def render_grid_svg(grids: TopicGridSet) -> str:
    side = grids.placement.side
    panel_w = side * CELL
    width = 5 * panel_w + 4 * GAP
    height = TOP + panel_w + 10
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for p, name in enumerate(PANELS):
        values = getattr(grids, name)
        vmax = float(max(values.max(), 0.0))
        x0 = p * (panel_w + GAP)
        rgb = _RISK_COLOR if name.endswith("risk") else _ACTIVITY_COLOR
        out.append(
            f'<text x="{x0 + panel_w / 2:.1f}" y="{TOP - 12}" text-anchor="middle" '
            f'font-size="13">{PANEL_TITLES[name]}</text>'
        )
        for k in range(len(grids.placement)):
            col, row = (int(v) for v in grids.placement.cells[k])
            x = x0 + col * CELL
            y = TOP + row * CELL
            intensity = float(values[k]) / vmax if vmax > 0 else 0.0
            out.append(
                f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" '
                f'fill="rgb({rgb})" fill-opacity="{intensity:.6f}" '
                f'stroke="#cccccc" stroke-width="1"/>'
            )
            text_fill = "#000000" if intensity < 0.55 else "#ffffff"
            out.append(
                f'<text x="{x + CELL / 2:.1f}" y="{y + CELL / 2 + 4:.1f}" text-anchor="middle" '
                f'font-size="10" fill="{text_fill}">{grids.labels[k]}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
