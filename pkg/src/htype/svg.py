"""Minimal deterministic SVG plots of planar geodesic projections."""
from __future__ import annotations

import numpy as np

from .geodesic import GeodesicSolution, block_solution, horizontal

SIZE = 360
MARGIN = 36
_TITLES = {"real": "hyperbola branch", "imaginary": "circle",
           "spiral+": "logarithmic spiral (growing)", "spiral-": "logarithmic spiral (shrinking)"}


def _fmt(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def _plot(curve: np.ndarray, points: np.ndarray, title: str, labels) -> str:
    allpts = np.vstack([curve, points, [[0.0, 0.0]]])
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = max(float(np.max(hi - lo)), 1e-12)
    centre = 0.5 * (lo + hi)
    scale = (SIZE - 2 * MARGIN) / span

    def tx(p):
        x = SIZE / 2 + (p[0] - centre[0]) * scale
        y = SIZE / 2 - (p[1] - centre[1]) * scale
        return _fmt(x), _fmt(y)

    ox, oy = tx((0.0, 0.0))
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}">',
           f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
           f'<text x="{MARGIN}" y="20" font-family="sans-serif" font-size="12">{title}</text>',
           f'<line x1="{MARGIN / 2}" y1="{oy}" x2="{SIZE - MARGIN / 2}" y2="{oy}" stroke="#999" stroke-width="0.8"/>',
           f'<line x1="{ox}" y1="{MARGIN / 2}" x2="{ox}" y2="{SIZE - MARGIN / 2}" stroke="#999" stroke-width="0.8"/>',
           f'<text x="{SIZE - MARGIN}" y="{oy}" dy="-4" font-family="sans-serif" font-size="10">{labels[0]}</text>',
           f'<text x="{ox}" y="{MARGIN}" dx="4" font-family="sans-serif" font-size="10">{labels[1]}</text>']
    path = " ".join(",".join(tx(p)) for p in curve)
    out.append(f'<polyline points="{path}" fill="none" stroke="#1f5fa8" stroke-width="1.2"/>')
    for p in points:
        x, y = tx(p)
        out.append(f'<circle cx="{x}" cy="{y}" r="2.2" fill="#c0392b"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def projection_svgs(sol: GeodesicSolution, t0: float = 0.0, t1: float = 1.0, samples: int = 21) -> dict:
    """One SVG per 2x2 block, keyed by file name.

    The curve is the analytic block solution on a fine grid; the dots are
    solver samples mapped back into block coordinates.
    """
    spec = sol.spec
    fine = np.linspace(t0, t1, 400)
    coarse = np.linspace(t0, t1, samples)
    V, _ = horizontal(sol, coarse)
    C = V @ spec.transform.T
    files = {}
    for k, blk in enumerate(spec.blocks):
        i = blk.start
        curve, _ = block_solution(blk.kind, blk.a, blk.b, spec.u_norm,
                                  sol.transformed_v0dot[i:i + 2], fine)
        name = f"block{k + 1}_{blk.kind.replace('+', 'plus').replace('-', 'minus')}.svg"
        title = f"block {k + 1}: {_TITLES[blk.kind]}"
        files[name] = _plot(curve, C[:, i:i + 2], title, (f"c{i + 1}", f"c{i + 2}"))
    return files
