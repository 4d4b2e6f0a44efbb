"""SVG plots: one 2-D domain projection per figure, both perspectives.

Each domain maps to a fixed axis pair: Territory CTR x FLO, Force
MOB x SPA (with MAT rendered as stroke width), Conflict PRS x VUL.
Concept regions that declare a dimension of the pair appear as
rectangles (undeclared axes span the whole unit range). Raw trajectory
values are plotted; output bytes are deterministic.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from .dimensions import DimensionId, Domain
from .space import ConceptSpec, SpaceConfig
from .trajectory import DualTrajectories, Trajectory

PANEL_AXES: Dict[Domain, Tuple[DimensionId, DimensionId]] = {
    Domain.TERRITORY: (DimensionId.CTR, DimensionId.FLO),
    Domain.FORCE: (DimensionId.MOB, DimensionId.SPA),
    Domain.CONFLICT: (DimensionId.PRS, DimensionId.VUL),
}

WIDTH = 560
HEIGHT = 560
MARGIN_LEFT = 70
MARGIN_TOP = 50
PLOT = 440

PERSPECTIVE_COLORS = {"white": "#1f77b4", "black": "#d62728"}
REGION_COLORS = ["#e6a817", "#7a4fb3", "#2a9d8f", "#c0392b", "#5d6d7e"]

# Stroke width range used when MAT modulates the force-panel segments.
WIDTH_BASE = 0.6
WIDTH_SPAN = 2.8


def _px(value: float) -> str:
    return f"{MARGIN_LEFT + value * PLOT:.2f}"


def _py(value: float) -> str:
    return f"{MARGIN_TOP + (1.0 - value) * PLOT:.2f}"


def _axes(x_dim: DimensionId, y_dim: DimensionId, title: str) -> List[str]:
    parts = [
        f'<text x="{MARGIN_LEFT}" y="28" font-size="15" font-weight="bold" '
        f'fill="#222222">{title}</text>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{PLOT}" height="{PLOT}" '
        'fill="#ffffff" stroke="#444444" stroke-width="1"/>',
    ]
    for i in range(5):
        v = i / 4.0
        label = f"{v:.2f}"
        parts.append(
            f'<line x1="{_px(v)}" y1="{_py(0.0)}" x2="{_px(v)}" y2="{_py(1.0)}" '
            'stroke="#dddddd" stroke-width="0.5"/>'
        )
        parts.append(
            f'<line x1="{_px(0.0)}" y1="{_py(v)}" x2="{_px(1.0)}" y2="{_py(v)}" '
            'stroke="#dddddd" stroke-width="0.5"/>'
        )
        parts.append(
            f'<text x="{_px(v)}" y="{MARGIN_TOP + PLOT + 18}" font-size="10" '
            f'text-anchor="middle" fill="#444444">{label}</text>'
        )
        parts.append(
            f'<text x="{MARGIN_LEFT - 8}" y="{_py(v)}" font-size="10" '
            f'text-anchor="end" dominant-baseline="middle" fill="#444444">{label}</text>'
        )
    parts.append(
        f'<text x="{MARGIN_LEFT + PLOT / 2:.0f}" y="{MARGIN_TOP + PLOT + 38}" '
        f'font-size="12" text-anchor="middle" fill="#222222">{x_dim.name}</text>'
    )
    parts.append(
        f'<text x="20" y="{MARGIN_TOP + PLOT / 2:.0f}" font-size="12" '
        f'text-anchor="middle" fill="#222222" '
        f'transform="rotate(-90 20 {MARGIN_TOP + PLOT / 2:.0f})">{y_dim.name}</text>'
    )
    return parts


def _region_rect(concept: ConceptSpec, x_dim: DimensionId, y_dim: DimensionId,
                 color: str) -> List[str]:
    bounds = concept.declared_bounds()
    if x_dim not in bounds and y_dim not in bounds:
        return []
    x_lo, x_hi = bounds.get(x_dim, (0.0, 1.0))
    y_lo, y_hi = bounds.get(y_dim, (0.0, 1.0))
    left = _px(x_lo)
    top = _py(y_hi)
    width = f"{(x_hi - x_lo) * PLOT:.2f}"
    height = f"{(y_hi - y_lo) * PLOT:.2f}"
    return [
        f'<rect id="region-{concept.name}" x="{left}" y="{top}" width="{width}" '
        f'height="{height}" fill="{color}" fill-opacity="0.12" stroke="{color}" '
        'stroke-width="1.2" stroke-dasharray="5,3"/>',
        f'<text x="{float(left) + 4:.2f}" y="{float(top) + 13:.2f}" font-size="10" '
        f'fill="{color}">{concept.name}</text>',
    ]


def _polyline(t: Trajectory, x_dim: DimensionId, y_dim: DimensionId,
              color: str, ident: str) -> str:
    points = " ".join(
        f"{_px(t.values[i, x_dim])},{_py(t.values[i, y_dim])}" for i in range(len(t))
    )
    return (
        f'<polyline id="{ident}" points="{points}" fill="none" stroke="{color}" '
        'stroke-width="1.5" stroke-linejoin="round"/>'
    )


def _weighted_segments(t: Trajectory, x_dim: DimensionId, y_dim: DimensionId,
                       color: str, ident: str) -> List[str]:
    parts = [f'<g id="{ident}">']
    for i in range(len(t) - 1):
        width = WIDTH_BASE + WIDTH_SPAN * float(t.values[i, DimensionId.MAT])
        parts.append(
            f'<polyline points="{_px(t.values[i, x_dim])},{_py(t.values[i, y_dim])} '
            f'{_px(t.values[i + 1, x_dim])},{_py(t.values[i + 1, y_dim])}" '
            f'fill="none" stroke="{color}" stroke-width="{width:.2f}" '
            'stroke-linecap="round"/>'
        )
    parts.append("</g>")
    return parts


def _endpoints(t: Trajectory, x_dim: DimensionId, y_dim: DimensionId,
               color: str) -> List[str]:
    if len(t) == 0:
        return []
    first = (
        f'<circle cx="{_px(t.values[0, x_dim])}" cy="{_py(t.values[0, y_dim])}" '
        f'r="3.5" fill="#ffffff" stroke="{color}" stroke-width="1.5"/>'
    )
    last = (
        f'<circle cx="{_px(t.values[-1, x_dim])}" cy="{_py(t.values[-1, y_dim])}" '
        f'r="3.5" fill="{color}"/>'
    )
    return [first, last]


def render_domain_svg(dual: DualTrajectories, cfg: SpaceConfig, domain: Domain) -> str:
    """Render one domain projection of a game as a standalone SVG document."""
    x_dim, y_dim = PANEL_AXES[domain]
    title = f"{dual.white.game_id} | {domain.value} ({x_dim.name} x {y_dim.name})"
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="Helvetica, Arial, sans-serif">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#fafafa"/>',
    ]
    parts.extend(_axes(x_dim, y_dim, title))
    for i, concept in enumerate(cfg.concepts):
        color = REGION_COLORS[i % len(REGION_COLORS)]
        parts.extend(_region_rect(concept, x_dim, y_dim, color))
    for t in (dual.white, dual.black):
        color = PERSPECTIVE_COLORS[str(t.perspective)]
        ident = f"traj-{t.perspective}"
        if domain is Domain.FORCE:
            parts.extend(_weighted_segments(t, x_dim, y_dim, color, ident))
        else:
            parts.append(_polyline(t, x_dim, y_dim, color, ident))
        parts.extend(_endpoints(t, x_dim, y_dim, color))
    legend_y = 28
    for name, color in PERSPECTIVE_COLORS.items():
        parts.append(
            f'<line x1="{WIDTH - 150}" y1="{legend_y - 4}" x2="{WIDTH - 120}" '
            f'y2="{legend_y - 4}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{WIDTH - 114}" y="{legend_y}" font-size="11" '
            f'fill="#222222">{name}</text>'
        )
        legend_y += 16
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_game_svgs(dual: DualTrajectories, cfg: SpaceConfig) -> Dict[str, str]:
    """All three domain projections, keyed by domain value."""
    return {
        domain.value: render_domain_svg(dual, cfg, domain) for domain in PANEL_AXES
    }
