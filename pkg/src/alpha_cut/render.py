"""Planar SVG scenes: colored points, the certificate and optional trace wedges.

Coordinates are converted to floats only for drawing; no predicate runs here.
"""

from xml.sax.saxutils import escape

from .instance import Instance, PointRef

PALETTE = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"]
SIZE = 480


class UnsupportedDimension(ValueError):
    pass


def _box(pts):
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y, 1.0)
    pad = 0.15 * span
    return lo_x - pad, lo_y - pad, span + 2 * pad


def _fmt(v):
    return f"{v:.3f}"


def _line_segment(normal, offset, box):
    """Endpoints of {normal·v = offset} across the square viewing box."""
    x0, y0, side = box
    a, b = float(normal[0]), float(normal[1])
    c = float(offset)
    reach = 2 * side
    mx, my = x0 + side / 2, y0 + side / 2
    # foot of the perpendicular from the box center, then run along the line
    n2 = a * a + b * b
    t = (c - a * mx - b * my) / n2
    fx, fy = mx + t * a, my + t * b
    ux, uy = -b / n2**0.5, a / n2**0.5
    return (fx - reach * ux, fy - reach * uy), (fx + reach * ux, fy + reach * uy)


def _wedge_polygons(inst, wedge, box):
    """The two triangles of a planar double-wedge, clipped by the viewport later."""
    a = [float(c) for c in inst.point(PointRef(*wedge["anchor"][0]))]
    p = [float(c) for c in inst.point(PointRef(*wedge["p"]))]
    q = [float(c) for c in inst.point(PointRef(*wedge["q"]))]
    up = (p[0] - a[0], p[1] - a[1])
    uq = (q[0] - a[0], q[1] - a[1])

    def cross(u, v):
        return u[0] * v[1] - u[1] * v[0]

    # of the two double cones between the lines, the wedge is the empty one
    def strictly_inside(u, v):
        base = cross(u, v)
        for r in inst.all_refs:
            w = inst.point(r)
            rel = (float(w[0]) - a[0], float(w[1]) - a[1])
            s, t = cross(rel, v) / base, cross(u, rel) / base
            if (s > 1e-12 and t > 1e-12) or (s < -1e-12 and t < -1e-12):
                return True
        return False

    first, second = up, uq
    if cross(up, uq) == 0 or strictly_inside(up, uq):
        second = (-uq[0], -uq[1])
    reach = 4 * box[2]
    out = []
    for sgn in (1, -1):
        pts = [a]
        for u in (first, second):
            norm = (u[0] ** 2 + u[1] ** 2) ** 0.5 or 1.0
            pts.append([a[0] + sgn * reach * u[0] / norm, a[1] + sgn * reach * u[1] / norm])
        out.append(pts)
    return out


def render_svg(inst: Instance, certificate=None, trace=()):
    """SVG text for a planar instance with an optional certificate document and trace."""
    if inst.d != 2:
        raise UnsupportedDimension("rendering supports dimension 2 only")
    pts = [[float(c) for c in inst.point(r)] for r in inst.all_refs]
    box = _box(pts)
    x0, y0, side = box

    def sx(x):
        return (x - x0) / side * SIZE

    def sy(y):
        return SIZE - (y - y0) / side * SIZE

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for rec in trace:
        wedge = rec.get("wedge")
        if not wedge:
            continue
        for poly in _wedge_polygons(inst, wedge, box):
            coords = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in poly)
            out.append(f'<polygon class="wedge" points="{coords}" fill="#999999" fill-opacity="0.12" stroke="none"/>')
    if certificate is not None:
        kind = certificate["kind"]
        if kind in ("G1", "GV1"):
            (ax, ay), (bx, by) = _line_segment(certificate["normal"], certificate["offset"], box)
            color = "#000000" if kind == "G1" else "#8c564b"
            out.append(
                f'<line class="{kind.lower()}" x1="{_fmt(sx(ax))}" y1="{_fmt(sy(ay))}" '
                f'x2="{_fmt(sx(bx))}" y2="{_fmt(sy(by))}" stroke="{color}" stroke-width="2"/>'
            )
        elif kind == "GV2":
            from fractions import Fraction

            cx, cy = (float(Fraction(c)) for c in certificate["point"])
            out.append(
                f'<circle class="gv2" cx="{_fmt(sx(cx))}" cy="{_fmt(sy(cy))}" r="8" fill="none" '
                'stroke="#000000" stroke-width="2"/>'
            )
    for r in inst.all_refs:
        x, y = (float(c) for c in inst.point(r))
        color = PALETTE[(r.color - 1) % len(PALETTE)]
        out.append(
            f'<circle class="point" cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="5" fill="{color}">'
            f"<title>{escape(repr(r))}</title></circle>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
