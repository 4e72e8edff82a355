"""Oriented hyperplanes through anchors, missing-color witnesses and the rotation sweep.

A plane is stored as an affine functional ``value(v) = <normal, v> - offset``.
For a colorful plane the functional is the cofactor expansion of the
orientation determinant along the query column, with the defining points in
color order, so ``sign(value(v))`` is exactly the determinant sign test.
Planes that miss one color are oriented from the anchor plus the crossing
point z of the missing-color witness segment, placed in the missing slot.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exact import affine_rank, det, dot, lcm, lerp, norm_sq, normalize, sign, sub
from .instance import Instance, PointRef


class DegeneracyError(Exception):
    """A predicate hit a degenerate configuration.

    ``refs`` names the input points involved; ``points`` may carry extra
    constructed coordinates (such as a crossing point) that explain the
    failure. These are seeds for violation certificates.
    """

    def __init__(self, message, refs=(), points=(), kind="degenerate"):
        super().__init__(message)
        self.refs = tuple(refs)
        self.points = tuple(points)
        self.kind = kind


class OrientationError(DegeneracyError):
    pass


class OutOfRange(Exception):
    """The missing color lies entirely on one closed side of the plane."""


def _homogeneous(pt):
    den = 1
    for c in pt:
        if isinstance(c, Fraction):
            den = lcm(den, c.denominator)
    if den == 1:
        return [int(c) for c in pt] + [1]
    return [int(c * den) for c in pt] + [den]


def affine_functional(points):
    """Coefficients (a, c) with orient(points + [v]) = <a, v> + c, up to a positive factor.

    ``points`` holds d points in R^d in slot order. Rational points are
    scaled to integer homogeneous columns, which only multiplies the
    determinant by positive denominators.
    """
    d = len(points)
    cols = [_homogeneous(p) for p in points]
    rows = [[cols[j][i] for j in range(d)] for i in range(d + 1)]
    coef = []
    for r in range(d + 1):
        minor = rows[:r] + rows[r + 1 :]
        c = det(minor)
        coef.append(c if (r + d) % 2 == 0 else -c)
    # (r + 1) + (d + 1) has the parity of r + d
    return tuple(coef[:d]), coef[d]


@dataclass(frozen=True)
class OrientedHyperplane:
    normal: tuple
    offset: object
    incident: tuple = ()
    anchor: tuple = ()
    pivot: PointRef = None
    missing: int = None  # missing color, None for colorful planes
    slot_point: tuple = None  # the point occupying the missing slot of the frame
    witness: object = field(default=None, compare=False)

    @property
    def colorful(self):
        return self.missing is None

    def value(self, pt):
        return dot(self.normal, pt) - self.offset

    def side(self, pt):
        return sign(self.value(pt))


def side_of(h: OrientedHyperplane, pt) -> int:
    return h.side(pt)


def _plane_from_frame(inst, frame_pts):
    normal, const = affine_functional(frame_pts)
    if all(c == 0 for c in normal):
        return None
    offset = -const
    incident = tuple(r for r in inst.all_refs if dot(normal, inst.point(r)) == offset)
    return normal, offset, incident


def plane_through(inst: Instance, refs) -> OrientedHyperplane:
    """Oriented plane through d points of distinct colors.

    With fewer colors the plane is still returned but carries the orientation
    of the given order; callers wanting the natural orientation of a
    non-colorful plane use ``natural_plane``.
    """
    refs = sorted(refs)
    if len(refs) != inst.d:
        raise ValueError("plane_through needs exactly d points")
    got = _plane_from_frame(inst, [inst.point(r) for r in refs])
    if got is None:
        raise DegeneracyError("points do not span a hyperplane", refs=refs, kind="rank")
    normal, offset, incident = got
    colors = {r.color for r in refs}
    missing = None
    if len(colors) < inst.d:
        missing = next(c for c in range(1, inst.d + 1) if c not in colors)
    return OrientedHyperplane(normal, offset, incident, tuple(refs), None, missing, None)


def alpha_vector_of(h: OrientedHyperplane, inst: Instance):
    """Per-color counts of points in the closed positive halfspace."""
    counts = [0] * inst.d
    for r in inst.all_refs:
        if h.value(inst.point(r)) >= 0:
            counts[r.color - 1] += 1
    return tuple(counts)


@dataclass(frozen=True)
class MissingColorWitness:
    x: PointRef
    y: PointRef
    z: tuple
    lam: object
    dist_sq: object


def _missing_color(inst, anchor):
    colors = {r.color for r in anchor}
    missing = [c for c in range(1, inst.d + 1) if c not in colors]
    if len(missing) != 1 or len(colors) != len(anchor):
        raise ValueError("anchor must carry d-1 distinct colors")
    return missing[0]


def _strict_witness(inst, value, color):
    """Highest-ranked points of ``color`` strictly on each side of a functional."""
    pos = neg = None
    for r in inst.all_refs:
        if r.color != color:
            continue
        v = value(inst.point(r))
        if v > 0:
            pos = r
        elif v < 0:
            neg = r
    return pos, neg


@lru_cache(maxsize=500_000)
def natural_plane(inst: Instance, anchor: tuple, pivot: PointRef) -> OrientedHyperplane:
    """The plane through ``anchor`` and ``pivot`` with its natural orientation.

    ``anchor`` is a color-sorted tuple of d-1 refs of distinct colors.
    Raises OrientationError when the orientation is undefined.
    """
    t1 = _missing_color(inst, anchor)
    anchor_pts = [inst.point(r) for r in anchor]
    if pivot.color == t1:
        frame = sorted(anchor + (pivot,))
        got = _plane_from_frame(inst, [inst.point(r) for r in frame])
        if got is None:
            raise OrientationError("colorful tuple is rank deficient", refs=frame, kind="rank")
        normal, offset, incident = got
        return OrientedHyperplane(normal, offset, incident, anchor, pivot, None, inst.point(pivot))

    # unoriented functional first, any sign
    raw = _plane_from_frame(inst, anchor_pts + [inst.point(pivot)])
    if raw is None:
        raise OrientationError("anchor and pivot are rank deficient", refs=anchor + (pivot,), kind="rank")
    normal, offset, _ = raw
    value = lambda v: dot(normal, v) - offset  # noqa: E731
    pos, neg = _strict_witness(inst, value, t1)
    if pos is None or neg is None:
        raise OrientationError(
            f"plane misses the hull of color {t1}", refs=anchor + (pivot,), kind="misses-color"
        )
    xa, yb = inst.point(pos), inst.point(neg)
    fa, fb = value(xa), value(yb)
    lam = Fraction(fa, 1) / (fa - fb)
    z = lerp(xa, yb, lam)
    frame = []
    for c in range(1, inst.d + 1):
        frame.append(z if c == t1 else inst.point(next(r for r in anchor if r.color == c)))
    got = _plane_from_frame(inst, frame)
    if got is None:
        raise OrientationError(
            "witness segment meets the anchor flat", refs=anchor + (pos, neg), points=(z,), kind="flat"
        )
    normal, offset, incident = got
    return OrientedHyperplane(normal, offset, incident, anchor, pivot, t1, z)


def missing_color_witness(h: OrientedHyperplane, inst: Instance, color=None) -> MissingColorWitness:
    """x, y, z, λ and dist_sq of a plane that misses one color."""
    color = h.missing if color is None else color
    if color is None:
        raise ValueError("plane is colorful")
    pos, neg = _strict_witness(inst, h.value, color)
    if pos is None or neg is None:
        raise OutOfRange(f"color {color} lies on one side")
    x, y = inst.point(pos), inst.point(neg)
    fx, fy = h.value(x), h.value(y)
    lam = normalize(Fraction(fx, 1) / (fx - fy))
    z = lerp(x, y, lam)
    if h.anchor and affine_rank([inst.point(r) for r in h.anchor] + [x, y]) < inst.d:
        raise DegeneracyError(
            "witness segment meets the anchor flat", refs=tuple(h.anchor) + (pos, neg), points=(z,), kind="flat"
        )
    return MissingColorWitness(pos, neg, z, lam, normalize(lam * lam * norm_sq(sub(y, x))))


def dist_value(h: OrientedHyperplane, inst: Instance):
    """Squared distance from x to the crossing point z."""
    return missing_color_witness(h, inst).dist_sq


# --- the sweep -------------------------------------------------------------


@dataclass(frozen=True)
class Hit:
    t: object  # None stands for the parameter at infinity
    hits: tuple


def _key(t, t_current, direction):
    if t is None:
        return (1, 0)
    if direction > 0:
        return (0, t) if t > t_current else (2, t)
    return (0, -t) if t < t_current else (2, -t)


def first_hit(anchor, x, y, t_current, inst: Instance, direction=1, skip=()) -> Hit:
    """First points met when the pencil plane through ``anchor`` and x + t(y - x) moves.

    Forward means increasing t; the projective line wraps through t = ∞ (the
    plane parallel to xy) and back in from the other end. Points already on
    the starting plane are passed in ``skip``.
    """
    anchor = tuple(anchor)
    anchor_pts = [inst.point(r) for r in anchor]
    gx = affine_functional(anchor_pts + [x])
    gy = affine_functional(anchor_pts + [y])
    skip = set(skip) | set(anchor)
    best_key, best_t, hits = None, None, []
    for r in inst.all_refs:
        if r in skip:
            continue
        v = inst.point(r)
        d0 = dot(gx[0], v) + gx[1]
        d1 = dot(gy[0], v) + gy[1]
        if d0 == d1:
            if d0 == 0:
                raise DegeneracyError("point lies in the anchor flat", refs=anchor + (r,), kind="in-anchor-flat")
            t = None
        else:
            t = normalize(Fraction(d0, d0 - d1))
        key = _key(t, t_current, direction)
        if best_key is None or key < best_key:
            best_key, best_t, hits = key, t, [r]
        elif key == best_key:
            hits.append(r)
    if best_key is None:
        raise RuntimeError("no candidate point to hit")
    return Hit(best_t, tuple(hits))


def sweep_line(inst: Instance, h: OrientedHyperplane):
    """Segment (x, y) that parametrizes the rotation of ``h``.

    x is the highest-ranked missing-color point in the closed positive side
    and y the highest-ranked one strictly negative. When no such y exists the
    segment is replaced by u ± normal through the frame's slot point u. Both
    segments cross the plane inside the missing color's hull, which is what
    fixes the rotational sense, so the substitution keeps the direction.
    Returns (xp, yp, pseudo).
    """
    t1 = h.missing if h.missing is not None else h.pivot.color
    x = y = None
    for r in inst.all_refs:
        if r.color != t1:
            continue
        if h.value(inst.point(r)) >= 0:
            x = r
        else:
            y = r
    if x is not None and y is not None:
        xp, yp = inst.point(x), inst.point(y)
        anchor_pts = [inst.point(r) for r in h.anchor]
        g = affine_functional(anchor_pts + [xp])
        if dot(g[0], yp) + g[1] == 0:
            raise DegeneracyError(
                "witness segment meets the anchor flat", refs=tuple(h.anchor) + (x, y), kind="flat"
            )
        return xp, yp, False
    u = h.slot_point
    return tuple(a + b for a, b in zip(u, h.normal)), tuple(a - b for a, b in zip(u, h.normal)), True


def sweep(inst: Instance, anchor: tuple, pivot: PointRef, direction=1):
    """Rotate the natural plane through anchor and pivot to its first hit."""
    h = natural_plane(inst, anchor, pivot)
    xp, yp, pseudo = sweep_line(inst, h)
    if direction > 0 and pseudo:
        raise OutOfRange("missing color lies in the closed positive side")
    fx, fy = h.value(xp), h.value(yp)
    t_cur = normalize(Fraction(fx, 1) / (fx - fy))
    hit = first_hit(anchor, xp, yp, t_cur, inst, direction, skip=h.incident)
    return h, hit


# --- NextRotate ------------------------------------------------------------


@dataclass(frozen=True)
class Rotated:
    anchor: tuple
    pivot: PointRef
    hit: PointRef


@dataclass(frozen=True)
class ViolationSeed:
    kind: str
    refs: tuple
    points: tuple = ()
    message: str = ""


def seed_from(exc: DegeneracyError) -> ViolationSeed:
    return ViolationSeed(exc.kind, exc.refs, exc.points, str(exc))


def swap_in(anchor, hit, t1):
    """Anchor after the sweep hit ``hit``: (new anchor, new pivot)."""
    if hit.color == t1:
        return anchor, hit
    out = next(r for r in anchor if r.color == hit.color)
    return tuple(sorted(r for r in anchor if r != out) + [hit]), out


def next_rotate(anchor, pivot: PointRef, inst: Instance, direction=1):
    """One rotation step around the anchor.

    Returns ``Rotated``, ``OutOfRange`` or a ``ViolationSeed``.
    """
    anchor = tuple(sorted(anchor))
    t1 = _missing_color(inst, anchor)
    try:
        h, hit = sweep(inst, anchor, pivot, direction)
    except OutOfRange as exc:
        return exc
    except DegeneracyError as exc:
        return seed_from(exc)
    if len(hit.hits) > 1:
        return ViolationSeed(
            "coplanar", anchor + tuple(hit.hits[:2]), (), "several points hit simultaneously"
        )
    q = hit.hits[0]
    new_anchor, new_pivot = swap_in(anchor, q, t1)
    return Rotated(new_anchor, new_pivot, q)


def pencil_plane(inst: Instance, anchor, x, y, t):
    """Unoriented functional of the pencil plane through anchor and x + t(y - x)."""
    anchor_pts = [inst.point(r) for r in anchor]
    pt = tuple(y[i] - x[i] for i in range(len(x))) if t is None else lerp(x, y, t)
    if t is None:
        # parallel plane: through the anchor, containing direction y - x
        base = anchor_pts[0]
        pt = tuple(base[i] + pt[i] for i in range(len(x)))
    normal, const = affine_functional(anchor_pts + [pt])
    return normal, -const
