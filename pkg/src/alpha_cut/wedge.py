"""Double-wedges: validity, representative plane, upper/lower planes and neighbor steps."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import affine_rank, lerp, norm_sq, normalize, sub
from .instance import Instance, PointRef
from .rotation import (
    DegeneracyError,
    OrientedHyperplane,
    OutOfRange,
    _plane_from_frame,
    alpha_vector_of,
    natural_plane,
    sweep,
)

NON_COLORFUL, COLORFUL, VERY_COLORFUL = "non-colorful", "colorful", "very-colorful"


@dataclass(frozen=True)
class WedgeFailure:
    reason: str
    seed: object = None

    def __bool__(self):
        return False


@dataclass(frozen=True)
class WedgeInfo:
    anchor: tuple
    p: PointRef
    q: PointRef
    t1: int
    hp: OrientedHyperplane
    hq: OrientedHyperplane
    hw: OrientedHyperplane
    x: PointRef  # missing-color witness on the positive side of the representative
    y: PointRef
    t_p: object  # where H_p and H_q cross the directed segment x -> y
    t_q: object
    t_mid: object
    dist_sq: object
    alpha: tuple
    consistent: bool
    klass: str

    @property
    def triple(self):
        return (self.anchor, self.p, self.q)

    def extras_p(self):
        return _extras(self.hp, self.anchor, self.p)

    def extras_q(self):
        return _extras(self.hq, self.anchor, self.q)


def _extras(h, anchor, pivot):
    skip = set(anchor) | {pivot}
    return tuple(r for r in h.incident if r not in skip)


def _valid_ref(inst, r):
    return 1 <= r.color <= inst.d and 0 <= r.index < inst.sizes[r.color - 1]


@lru_cache(maxsize=500_000)
def analyze_wedge(inst: Instance, anchor: tuple, p: PointRef, q: PointRef):
    """Full analysis of a candidate (anchor, p, q); a WedgeFailure when it is no double-wedge.

    Orientation consistency is reported in the result rather than failing,
    since the reduction treats inconsistent wedges separately.
    """
    d = inst.d
    if len(anchor) != d - 1 or not all(_valid_ref(inst, r) for r in anchor + (p, q)):
        return WedgeFailure("invalid index")
    colors = [r.color for r in anchor]
    if len(set(colors)) != len(colors):
        return WedgeFailure("not colorful")
    if list(anchor) != sorted(anchor):
        return WedgeFailure("anchor not in color order")
    if p in anchor or q in anchor:
        return WedgeFailure("pivot inside anchor")
    if p == q:
        return WedgeFailure("p equals q")
    t1 = next(c for c in range(1, d + 1) if c not in colors)
    anchor_pts = [inst.point(r) for r in anchor]
    if affine_rank(anchor_pts) != d - 2:
        return WedgeFailure("anchor rank")
    try:
        hp = natural_plane(inst, anchor, p)
    except DegeneracyError as exc:
        return WedgeFailure("orientation of H_p undefined", exc)
    try:
        hq = natural_plane(inst, anchor, q)
    except DegeneracyError as exc:
        return WedgeFailure("orientation of H_q undefined", exc)
    if hp.value(inst.point(q)) == 0:
        return WedgeFailure("q on H_p")

    skip = set(anchor)
    pos, neg = None, None
    for r in inst.all_refs:
        if r in skip:
            continue
        v = inst.point(r)
        fp, fq = hp.value(v), hq.value(v)
        if (fp > 0 and fq < 0) or (fp < 0 and fq > 0):
            return WedgeFailure("wedge not empty")
        if r.color == t1:
            s = fp + fq  # both share a sign here, so only the sign matters
            if s > 0:
                pos = r
            elif s < 0:
                neg = r
            else:
                return WedgeFailure("missing-color point on anchor flat", anchor + (r,))
    if pos is None or neg is None:
        return WedgeFailure("representative misses the missing color")
    xa, yb = inst.point(pos), inst.point(neg)
    if affine_rank(anchor_pts + [xa, yb]) != d:
        return WedgeFailure("anchor and witness coplanar", anchor + (pos, neg))

    def crossing(h):
        fa, fb = h.value(xa), h.value(yb)
        return Fraction(fa, 1) / (fa - fb)

    t_p, t_q = crossing(hp), crossing(hq)
    t_mid = (t_p + t_q) / 2
    z = lerp(xa, yb, t_mid)
    frame = [z if c == t1 else anchor_pts[colors.index(c)] for c in range(1, d + 1)]
    normal, offset, incident = _plane_from_frame(inst, frame)
    hw = OrientedHyperplane(normal, offset, incident, anchor, None, t1, z)
    consistent = hw.value(xa) > 0
    if consistent:
        x, y = pos, neg
    else:
        x, y = neg, pos
        t_p, t_q, t_mid = 1 - t_p, 1 - t_q, 1 - t_mid
    if not t_p < t_q:
        return WedgeFailure("p not on upper hyperplane")
    dist_sq = normalize(t_mid * t_mid * norm_sq(sub(inst.point(y), inst.point(x))))
    n_colorful = (p.color == t1) + (q.color == t1)
    klass = (NON_COLORFUL, COLORFUL, VERY_COLORFUL)[n_colorful]
    return WedgeInfo(
        anchor, p, q, t1, hp, hq, hw, x, y,
        normalize(t_p), normalize(t_q), normalize(t_mid), dist_sq,
        alpha_vector_of(hw, inst), consistent, klass,
    )


def is_double_wedge(anchor, p, q, inst: Instance):
    """(True, "") for a valid wedge, else (False, reason)."""
    info = analyze_wedge(inst, tuple(anchor), p, q)
    if isinstance(info, WedgeFailure):
        return False, info.reason
    return True, ""


def _require(anchor, p, q, inst):
    info = analyze_wedge(inst, tuple(anchor), p, q)
    if isinstance(info, WedgeFailure):
        raise ValueError(f"not a double-wedge: {info.reason}")
    return info


def representative(anchor, p, q, inst: Instance) -> OrientedHyperplane:
    return _require(anchor, p, q, inst).hw


def upper_lower(anchor, p, q, inst: Instance):
    info = _require(anchor, p, q, inst)
    return info.hp, info.hq


# --- neighbor steps --------------------------------------------------------


@dataclass(frozen=True)
class StepFailure:
    reason: str
    seed: object = None

    def __bool__(self):
        return False


def _swap(anchor, out, incoming):
    return tuple(sorted([r for r in anchor if r != out] + [incoming]))


def _rotate_to_hit(inst, anchor, pivot, direction):
    try:
        _, hit = sweep(inst, anchor, pivot, direction)
    except OutOfRange:
        return StepFailure("out of range")
    except DegeneracyError as exc:
        return StepFailure("degenerate sweep", exc)
    if len(hit.hits) > 1:
        return StepFailure("simultaneous hits", anchor + tuple(hit.hits[:2]))
    return hit.hits[0]


def next_neighbor(info: WedgeInfo, target, inst: Instance):
    """Rotate the lower plane onward; returns (anchor', p', q') or a StepFailure."""
    anchor, q, t1 = info.anchor, info.q, info.t1
    if q.color != t1:
        r = next(a for a in anchor if a.color == q.color)
        new_anchor, new_p = _swap(anchor, r, q), r
    else:
        b = alpha_vector_of(info.hq, inst)[t1 - 1]
        if b < target[t1 - 1]:
            new_anchor, new_p = anchor, q
        elif t1 == inst.d:
            return StepFailure("no color after the last")
        else:
            r = next(a for a in anchor if a.color == t1 + 1)
            new_anchor, new_p = _swap(anchor, r, q), r
    hit = _rotate_to_hit(inst, new_anchor, new_p, +1)
    if isinstance(hit, StepFailure):
        return hit
    return new_anchor, new_p, hit


def prev_neighbor(info: WedgeInfo, inst: Instance):
    """Rotate the upper plane back; returns (anchor', p', q') or a StepFailure."""
    anchor, p, t1 = info.anchor, info.p, info.t1
    if p.color != t1:
        r = next(a for a in anchor if a.color == p.color)
        new_anchor, new_q = _swap(anchor, r, p), r
    else:
        b = alpha_vector_of(info.hp, inst)[t1 - 1]
        if b > 1:
            new_anchor, new_q = anchor, p
        elif t1 == 1:
            return StepFailure("no color before the first")
        else:
            r = next(a for a in anchor if a.color == t1 - 1)
            new_anchor, new_q = _swap(anchor, r, p), r
    hit = _rotate_to_hit(inst, new_anchor, new_q, -1)
    if isinstance(hit, StepFailure):
        return hit
    return new_anchor, hit, new_q


def neighbors(anchor, p, q, inst: Instance):
    """Every valid double-wedge sharing H_p or H_q with the given one.

    Found by exhaustive search, so this is a testing and visualization aid.
    """
    info = _require(anchor, p, q, inst)
    planes = []
    for h in (info.hp, info.hq):
        planes.append((h.normal, h.offset))
    out = []
    for cand in all_wedges(inst):
        if cand.triple == info.triple:
            continue
        mine = {(cand.hp.normal, cand.hp.offset), (cand.hq.normal, cand.hq.offset)}
        if any(_same_plane(a, b) for a in mine for b in planes):
            out.append(cand.triple)
    return out


def _same_plane(a, b):
    (n1, o1), (n2, o2) = a, b
    # proportional with a positive or negative factor
    k = next(i for i, c in enumerate(n1) if c != 0)
    if n2[k] == 0:
        return False
    f = Fraction(n2[k], 1) / n1[k]
    return all(f * c == c2 for c, c2 in zip(n1, n2)) and f * o1 == o2


def all_wedges(inst: Instance):
    """Every valid double-wedge of the instance, in encoding order."""
    from itertools import product

    d = inst.d
    out = []
    for t1 in range(1, d + 1):
        others = [c for c in range(1, d + 1) if c != t1]
        for idx in product(*[range(inst.sizes[c - 1]) for c in others]):
            anchor = tuple(PointRef(c, i) for c, i in zip(others, idx))
            for p in inst.all_refs:
                for q in inst.all_refs:
                    info = analyze_wedge(inst, anchor, p, q)
                    if not isinstance(info, WedgeFailure):
                        out.append(info)
    return out
