"""SVG rendering of region JSON (the JSON is always the source of truth)."""

from __future__ import annotations

from typing import Optional
from xml.sax.saxutils import escape

import numpy as np

from hypolevel.geodesic import geodesic_through, segment_sample
from hypolevel.io import region_from_dict


def _xy(z: complex, size: int):
    s = size / 2.0
    return s + z.real * s * 0.95, s - z.imag * s * 0.95


def _path(points, size: int, close: bool = False) -> str:
    parts = []
    for k, z in enumerate(points):
        x, y = _xy(complex(z), size)
        parts.append(f"{'M' if k == 0 else 'L'}{x:.3f},{y:.3f}")
    return " ".join(parts) + (" Z" if close else "")


def _fill_rects(bitmap: np.ndarray, size: int) -> list:
    """One rect per horizontal run of In cells."""
    n = bitmap.shape[0]
    cell = size * 0.95 / n
    x0 = size / 2.0 - size * 0.95 / 2
    out = []
    for r in range(n):
        row = np.concatenate([[False], bitmap[r], [False]]).astype(np.int8)
        d = np.diff(row)
        starts, ends = np.flatnonzero(d == 1), np.flatnonzero(d == -1)
        y = x0 + (n - 1 - r) * cell  # row index runs along +y
        for a, b in zip(starts, ends):
            out.append(f'<rect x="{x0 + a * cell:.3f}" y="{y:.3f}" '
                       f'width="{(b - a) * cell:.3f}" height="{cell:.3f}"/>')
    return out


def render_svg(region_json: dict, size: int = 512, witness: Optional[dict] = None,
               show_geodesic: bool = True) -> str:
    region = region_from_dict(region_json)
    s = size / 2.0
    body = [f'<circle cx="{s}" cy="{s}" r="{s * 0.95}" fill="none" stroke="black" '
            f'stroke-width="1"/>']
    if region.in_count():
        body.append('<g fill="#9ecae1" stroke="none">')
        body += _fill_rects(region.bitmap, size)
        body.append("</g>")
    for c in region.contours:
        body.append(f'<path d="{_path(c, size)}" fill="none" stroke="#08519c" '
                    f'stroke-width="1.2"/>')
    if witness:
        z1, z2, p = (complex(*witness[k]) for k in ("z1", "z2", "p"))
        if show_geodesic:
            line = geodesic_through(z1, z2)
            ends = segment_sample(z1, z2, 200)
            body.append(f'<path class="geodesic" data-kind="{line.to_dict()["kind"]}" '
                        f'd="{_path(ends, size)}" fill="none" stroke="#d62728" '
                        f'stroke-width="1.5"/>')
        for z, col in ((z1, "#2ca02c"), (z2, "#2ca02c"), (p, "#d62728")):
            x, y = _xy(z, size)
            body.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="{col}"/>')
    title = escape(f"{region.spec.label} of {region.map_text}")
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">\n<title>{title}</title>\n'
            + "\n".join(body) + "\n</svg>\n")
