"""Self-contained SVG scatter and curve plots, no plotting dependency."""

from __future__ import annotations

import numpy as np

__all__ = ["scatter_svg", "curves_svg", "project_2d"]

WIDTH = 800
HEIGHT = 600
MARGIN = 50
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b")


def project_2d(data) -> tuple[np.ndarray, tuple[int, int]]:
    """Pick the two highest-variance coordinates; returns (n x 2 view, axes)."""
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[1] == 1:
        x = np.column_stack([x[:, 0], np.zeros(x.shape[0])])
        return x, (0, 0)
    if x.shape[1] == 2:
        return x, (0, 1)
    order = np.argsort(x.var(axis=0))[::-1][:2]
    i, j = sorted(int(v) for v in order)
    return x[:, (i, j)], (i, j)


def _scale(values: np.ndarray, lo_px: float, hi_px: float):
    vmin = float(values.min())
    vmax = float(values.max())
    span = vmax - vmin or 1.0

    def to_px(v):
        return lo_px + (np.asarray(v) - vmin) / span * (hi_px - lo_px)

    return to_px


def _header(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.2f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>',
    ]


def scatter_svg(data, labels, title: str = "clusters") -> str:
    """Scatter plot colored by label; d>2 data projects to its two widest axes."""
    pts, axes = project_2d(data)
    lab = np.asarray(labels)
    if len(lab) != pts.shape[0]:
        raise ValueError("labels length must match number of points")
    xs = _scale(pts[:, 0], MARGIN, WIDTH - MARGIN)
    ys = _scale(pts[:, 1], HEIGHT - MARGIN, MARGIN)
    parts = _header(title)
    if axes != (0, 1):
        parts.append(
            f'<text x="{MARGIN}" y="{HEIGHT - 12}" font-family="sans-serif" '
            f'font-size="12">axes: coordinates {axes[0]} and {axes[1]} '
            f"(highest variance)</text>"
        )
    uniq = {v: k for k, v in enumerate(sorted(set(int(v) for v in lab)))}
    px = xs(pts[:, 0])
    py = ys(pts[:, 1])
    for i in range(pts.shape[0]):
        color = PALETTE[uniq[int(lab[i])] % len(PALETTE)]
        parts.append(
            f'<circle cx="{px[i]:.2f}" cy="{py[i]:.2f}" r="3" '
            f'fill="{color}" fill-opacity="0.7"/>'
        )
    for v, k in uniq.items():
        color = PALETTE[k % len(PALETTE)]
        y = MARGIN + 16 * k
        parts.append(f'<circle cx="{WIDTH - 120:.2f}" cy="{y - 4}" r="4" fill="{color}"/>')
        parts.append(
            f'<text x="{WIDTH - 110}" y="{y}" font-family="sans-serif" '
            f'font-size="12">cluster {v}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def curves_svg(x, curves: dict[str, np.ndarray], title: str = "density") -> str:
    """Overlaid polyline curves sharing an x grid, one palette color each."""
    gx = np.asarray(x, dtype=float)
    if gx.size == 0:
        raise ValueError("empty grid")
    ymax = max(float(np.max(c)) for c in curves.values())
    ymin = min(0.0, min(float(np.min(c)) for c in curves.values()))
    xs = _scale(gx, MARGIN, WIDTH - MARGIN)
    ys = _scale(np.asarray([ymin, ymax or 1.0]), HEIGHT - MARGIN, MARGIN)
    parts = _header(title)
    for k, (name, c) in enumerate(curves.items()):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(
            f"{float(xv):.2f},{float(yv):.2f}" for xv, yv in zip(xs(gx), ys(np.asarray(c)))
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        y = MARGIN + 16 * k
        parts.append(
            f'<rect x="{WIDTH - 150}" y="{y - 9}" width="12" height="4" fill="{color}"/>'
        )
        parts.append(
            f'<text x="{WIDTH - 132}" y="{y}" font-family="sans-serif" '
            f'font-size="12">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)
