"""SVG 1.1 rendering of an instance, its shrinkings and an optional solution."""

from __future__ import annotations

from xml.sax.saxutils import quoteattr

from .geom import shrink

VIEW = 1000
MARGIN = 20

HEADER = """\
<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN"
  "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
<svg xmlns="http://www.w3.org/2000/svg" version="1.1"
     width="{v}" height="{v}" viewBox="0 0 {v} {v}">
<style>
  .outline {{ fill: none; stroke: #555555; stroke-width: 1 }}
  .shrunk {{ fill: #9ecae1; fill-opacity: 0.5; stroke: none }}
  .solution {{ fill: #fdae6b; fill-opacity: 0.8; stroke: #d94801; stroke-width: 2 }}
</style>
"""


def _scaler(rects):
    x0 = min(r.x1 for r in rects)
    y0 = min(r.y1 for r in rects)
    span = max(max(r.x2 for r in rects) - x0, max(r.y2 for r in rects) - y0)
    k = (VIEW - 2 * MARGIN) / span

    def box(b):
        # flip y so larger coordinates point up
        x = MARGIN + float(b.x1 - x0) * k
        y = VIEW - MARGIN - float(b.y2 - y0) * k
        return x, y, float(b.x2 - b.x1) * k, float(b.y2 - b.y1) * k

    return box


def _rect(cls, rid, x, y, w, h):
    return (f'<rect class="{cls}" data-id={quoteattr(str(rid))} '
            f'x="{x:.3f}" y="{y:.3f}" width="{w:.3f}" height="{h:.3f}"/>')


def render_svg(rects, delta, solution=()) -> str:
    """Outline per member, filled shrinking inside it; solution shrinkings get ``solution``."""
    rects = list(rects)
    chosen = set(solution)
    out = [HEADER.format(v=VIEW)]
    if rects:
        box = _scaler(rects)
        for r in rects:
            out.append(_rect("outline", r.id, *box(r)))
            cls = "solution" if r.id in chosen else "shrunk"
            out.append(_rect(cls, r.id, *box(shrink(r, delta))))
    out.append("</svg>\n")
    return "\n".join(out)
