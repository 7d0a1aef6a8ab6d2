"""Minimal SVG rendering of polygons, query segments and overlay regions."""

from __future__ import annotations

from typing import Iterable, Optional, Sequence


def _path_of(ring, close=True) -> str:
    cmds = []
    for i, p in enumerate(ring):
        x, y = float(p.x), float(p.y)
        cmds.append(f"{'M' if i == 0 else 'L'} {x:.6g} {y:.6g}")
    if close:
        cmds.append("Z")
    return " ".join(cmds)


def render_svg(
    rings: Sequence,
    extras: Iterable[dict] = (),
    width: int = 640,
) -> str:
    """Render boundary rings plus overlay items to an SVG document string.

    `rings` is [outer, hole, hole, ...] point sequences.  Each extra is a dict
    with "kind" in {"polygon", "segment", "point"}, a "points" sequence and
    optional "color", "opacity", "label".
    """
    pts = [p for ring in rings for p in ring]
    for item in extras:
        pts.extend(item.get("points", ()))
    if not pts:
        raise ValueError("nothing to render")
    xs = [float(p.x) for p in pts]
    ys = [float(p.y) for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-9)
    margin = 0.05 * span
    vb = (x0 - margin, y0 - margin, (x1 - x0) + 2 * margin, (y1 - y0) + 2 * margin)
    stroke_w = span / 200.0

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'viewBox="{vb[0]:.6g} {vb[1]:.6g} {vb[2]:.6g} {vb[3]:.6g}">'
    )
    # flip y so the mathematical orientation renders upright
    cy = vb[1] + vb[3] / 2
    out.append(f'<g transform="translate(0 {2 * cy:.6g}) scale(1 -1)">')
    out.append(
        "<defs><pattern id='hatch' width='%g' height='%g' patternUnits='userSpaceOnUse' "
        "patternTransform='rotate(45)'><line x1='0' y1='0' x2='0' y2='%g' "
        "stroke='#777' stroke-width='%g'/></pattern></defs>"
        % (span / 40, span / 40, span / 40, stroke_w)
    )
    if rings:
        d = " ".join(_path_of(r) for r in rings)
        out.append(
            f'<path d="{d}" fill="#f4f4f4" fill-rule="evenodd" '
            f'stroke="black" stroke-width="{stroke_w:.6g}"/>'
        )
        for hole in rings[1:]:
            out.append(f'<path d="{_path_of(hole)}" fill="url(#hatch)" stroke="none"/>')
    for item in extras:
        kind = item.get("kind", "polygon")
        color = item.get("color", "#1f77b4")
        opacity = item.get("opacity", 0.4)
        ipts = item["points"]
        if kind == "polygon":
            out.append(
                f'<path d="{_path_of(ipts)}" fill="{color}" fill-opacity="{opacity}" '
                f'stroke="{color}" stroke-width="{stroke_w:.6g}"/>'
            )
        elif kind == "segment":
            for a, b in zip(ipts, ipts[1:]):
                out.append(
                    f'<line x1="{float(a.x):.6g}" y1="{float(a.y):.6g}" '
                    f'x2="{float(b.x):.6g}" y2="{float(b.y):.6g}" '
                    f'stroke="{color}" stroke-width="{2 * stroke_w:.6g}"/>'
                )
        elif kind == "point":
            for p in ipts:
                out.append(
                    f'<circle cx="{float(p.x):.6g}" cy="{float(p.y):.6g}" '
                    f'r="{2 * stroke_w:.6g}" fill="{color}"/>'
                )
    out.append("</g></svg>")
    return "\n".join(out)


def write_svg(path: str, rings, extras=(), width: int = 640) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(render_svg(rings, extras, width) + "\n")
