"""Cut and violation certificates, and the constructions that extract them.

A GV1 certificate is d+1 input points with at least d-1 colors on one
hyperplane. A GV2 certificate is a pair of disjoint color sets (I, J) whose
unions have intersecting hulls, with the LP witness attached. Every emitted
certificate is re-checked against the instance before it is returned.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from .exact import (
    affine_rank,
    det,
    flat_from_points,
    format_rational,
    lcm,
    lerp,
    normalize,
    null_vector,
    segment_flat_intersection,
    sign,
)
from .instance import Instance, PointRef
from .lp import common_point
from .oracle import check_weak_general_position
from .rotation import (
    DegeneracyError,
    OrientedHyperplane,
    _strict_witness,
    affine_functional,
    alpha_vector_of,
    missing_color_witness,
    plane_through,
)


class PreconditionError(ValueError):
    pass


class InternalError(RuntimeError):
    """No certificate could be found although the walk failed."""


@dataclass(frozen=True)
class Certificate:
    kind: str  # "G1", "GV1" or "GV2"
    refs: tuple = ()  # G1: the colorful tuple; GV1: the d+1 coplanar points
    normal: tuple = ()
    offset: object = None
    alpha: tuple = ()
    i_set: tuple = ()
    j_set: tuple = ()
    point: tuple = ()
    lam: tuple = ()  # GV2: (ref, coefficient) pairs over the I side
    mu: tuple = ()
    reason: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    def to_doc(self):
        doc = {"kind": self.kind}
        if self.kind in ("G1", "GV1"):
            doc["points"] = [[r.color, r.index] for r in self.refs]
            doc["normal"] = [format_rational(c) for c in self.normal]
            doc["offset"] = format_rational(self.offset)
            if self.kind == "G1":
                doc["alpha"] = list(self.alpha)
        else:
            doc["I"] = list(self.i_set)
            doc["J"] = list(self.j_set)
            doc["point"] = [format_rational(c) for c in self.point]
            doc["lambda"] = [{"point": [r.color, r.index], "coef": format_rational(c)} for r, c in self.lam]
            doc["mu"] = [{"point": [r.color, r.index], "coef": format_rational(c)} for r, c in self.mu]
        if self.reason:
            doc["reason"] = self.reason
        for k, v in self.extra.items():
            doc[k] = v
        return doc


# --- Radon and Carathéodory ------------------------------------------------


@dataclass(frozen=True)
class RadonWitness:
    i_set: tuple  # positions into the input list, 0-based
    j_set: tuple
    lam: tuple  # convex coefficients aligned with i_set
    mu: tuple
    point: tuple


def _affine_dependence(pts):
    rows = [[p[k] for p in pts] for k in range(len(pts[0]))] + [[1] * len(pts)]
    return null_vector(rows)


def radon_partition(pts) -> RadonWitness:
    """Split an affinely dependent list into two parts with a common hull point.

    The smaller part is reported as I; on a tie, the part holding the first
    point.
    """
    pts = [tuple(p) for p in pts]
    if len(pts) < 2 or affine_rank(pts) >= len(pts) - 1:
        raise PreconditionError("points are affinely independent")
    c = _affine_dependence(pts)
    pos = tuple(i for i, v in enumerate(c) if v > 0)
    neg = tuple(i for i, v in enumerate(c) if v < 0)
    if len(neg) < len(pos) or (len(neg) == len(pos) and neg[0] < pos[0]):
        pos, neg = neg, pos
        c = [-v for v in c]
    total = sum(c[i] for i in pos)
    lam = tuple(normalize(c[i] / total) for i in pos)
    mu = tuple(normalize(-c[j] / total) for j in neg)
    point = tuple(normalize(sum(Fraction(l) * pts[i][k] for l, i in zip(lam, pos))) for k in range(len(pts[0])))
    return RadonWitness(pos, neg, lam, mu, point)


def caratheodory(pts, coefs):
    """Reduce a convex combination to an affinely independent support.

    Returns {position: coefficient} with the same combined point.
    """
    support = {i: Fraction(c) for i, c in enumerate(coefs) if c != 0}
    while len(support) > 1:
        keys = sorted(support)
        sub_pts = [pts[i] for i in keys]
        if affine_rank(sub_pts) == len(sub_pts) - 1:
            break
        c = _affine_dependence(sub_pts)
        if not any(v > 0 for v in c):
            c = [-v for v in c]
        t = min(support[k] / v for k, v in zip(keys, c) if v > 0)
        for k, v in zip(keys, c):
            support[k] -= t * v
        # drop exactly one vanishing coefficient so the loop strictly shrinks
        zero = next(k for k in keys if support[k] == 0)
        del support[zero]
        for k in [k for k in support if support[k] == 0]:
            del support[k]
    return {k: normalize(v) for k, v in support.items()}


# --- certificate builders --------------------------------------------------


def _integer_plane(a, c):
    """Scale the functional a·v + c to coprime integers."""
    den = 1
    for v in list(a) + [c]:
        den = lcm(den, Fraction(v).denominator)
    vals = [int(Fraction(v) * den) for v in list(a) + [c]]
    g = 0
    for v in vals:
        g = gcd(g, abs(v))
    vals = [v // g for v in vals] if g else vals
    return tuple(vals[:-1]), -vals[-1]


def containing_plane(pts):
    """(normal, offset) of some hyperplane through all the points, or None."""
    d = len(pts[0])
    rows = [list(p) + [1] for p in pts]
    vec = null_vector(rows)
    if vec is None:
        return None
    return _integer_plane(vec[:d], vec[d])


def gv1_certificate(inst: Instance, refs, reason=""):
    """A verified GV1 from a set of refs known to hold a degenerate subset.

    ``refs`` may be d points of rank at most d-2 (padded with the first other
    point) or d+1 or more points; a valid (d+1)-subset is chosen.
    """
    d = inst.d
    refs = tuple(dict.fromkeys(refs))
    if len(refs) == d:
        other = next(r for r in inst.all_refs if r not in refs)
        refs = refs + (other,)
    for subset in combinations(refs, d + 1):
        if len({r.color for r in subset}) < d - 1:
            continue
        pts = [inst.point(r) for r in subset]
        if affine_rank(pts) <= d - 1:
            normal, offset = containing_plane(pts)
            cert = Certificate("GV1", tuple(sorted(subset)), normal, offset, reason=reason)
            if verify_certificate(cert, inst)[0]:
                return cert
    return None


def gv2_certificate(inst: Instance, i_set, j_set, seed=0, reason="", extra=None):
    """The LP witness for (I, J), or None when the hulls are disjoint."""
    i_set, j_set = tuple(sorted(i_set)), tuple(sorted(j_set))
    a_refs = [r for c in i_set for r in inst.refs(c)]
    b_refs = [r for c in j_set for r in inst.refs(c)]
    got = common_point([inst.point(r) for r in a_refs], [inst.point(r) for r in b_refs], seed)
    if got is None:
        return None
    point, lam, mu = got
    cert = Certificate(
        "GV2",
        i_set=i_set,
        j_set=j_set,
        point=point,
        lam=tuple((r, c) for r, c in zip(a_refs, lam) if c != 0),
        mu=tuple((r, c) for r, c in zip(b_refs, mu) if c != 0),
        reason=reason,
        extra=dict(extra or {}),
    )
    if not verify_certificate(cert, inst)[0]:
        raise InternalError("LP witness failed re-substitution")
    return cert


def g1_certificate(inst: Instance, refs, target):
    refs = tuple(sorted(refs))
    h = plane_through(inst, refs)
    return Certificate("G1", refs, h.normal, h.offset, alpha_vector_of(h, inst))


def verify_certificate(cert: Certificate, inst: Instance, target=None):
    """(ok, reason) by direct exact re-check."""
    d = inst.d
    try:
        for r in cert.refs:
            inst.check_ref(r)
    except ValueError as exc:
        return False, str(exc)
    if cert.kind == "G1":
        if len(cert.refs) != d or sorted(r.color for r in cert.refs) != list(range(1, d + 1)):
            return False, "G1 needs one point per color"
        try:
            h = plane_through(inst, cert.refs)
        except DegeneracyError:
            return False, "G1 tuple is rank deficient"
        if tuple(h.normal) != tuple(cert.normal) or h.offset != cert.offset:
            return False, "G1 plane does not match its tuple"
        want = inst.alpha if target is None else tuple(target)
        if alpha_vector_of(h, inst) != tuple(want):
            return False, "G1 α-vector differs from the target"
        return True, ""
    if cert.kind == "GV1":
        if len(set(cert.refs)) != d + 1:
            return False, "GV1 needs d+1 distinct points"
        if len({r.color for r in cert.refs}) < d - 1:
            return False, "GV1 needs at least d-1 colors"
        pts = [inst.point(r) for r in cert.refs]
        if affine_rank(pts) > d - 1:
            return False, "GV1 points span the space"
        if not any(c != 0 for c in cert.normal):
            return False, "GV1 plane has a zero normal"
        if any(sum(a * b for a, b in zip(cert.normal, p)) != cert.offset for p in pts):
            return False, "GV1 points are off the stated plane"
        return True, ""
    if cert.kind == "GV2":
        i_set, j_set = set(cert.i_set), set(cert.j_set)
        if not i_set or not j_set or i_set & j_set or not (i_set | j_set) <= set(range(1, d + 1)):
            return False, "GV2 needs disjoint nonempty color sets"
        for side, colors in ((cert.lam, i_set), (cert.mu, j_set)):
            if any(c < 0 for _, c in side) or sum(Fraction(c) for _, c in side) != 1:
                return False, "GV2 coefficients are not convex"
            if any(r.color not in colors for r, _ in side):
                return False, "GV2 coefficient on a point of the wrong side"
            try:
                for r, _ in side:
                    inst.check_ref(r)
            except ValueError as exc:
                return False, str(exc)
            got = tuple(sum(Fraction(c) * inst.point(r)[k] for r, c in side) for k in range(d))
            if got != tuple(Fraction(v) for v in cert.point):
                return False, "GV2 combination misses the common point"
        return True, ""
    return False, f"unknown certificate kind {cert.kind!r}"


# --- colorful sets versus partitions --------------------------------------


def colorful_to_partition(inst: Instance, colorful_pts, seed=0, reason=""):
    """GV2 from d points, point i in the hull of color i+1, of affine rank at most d-2."""
    d = inst.d
    pts = [tuple(p) for p in colorful_pts]
    if len(pts) != d or affine_rank(pts) > d - 2:
        raise PreconditionError("colorful set must hold d points of affine rank at most d-2")
    rw = radon_partition(pts)
    i_set = tuple(i + 1 for i in rw.i_set)
    j_set = tuple(j + 1 for j in rw.j_set)
    extra = {"colorful_set": [[format_rational(c) for c in p] for p in pts]}
    cert = gv2_certificate(inst, i_set, j_set, seed, reason, extra)
    if cert is None:
        raise PreconditionError("a colorful point lies outside its color's hull")
    return cert


def partition_to_colorful(inst: Instance, i_set, j_set, seed=0):
    """d points, one in each color's hull, of joint affine rank at most d-2.

    Takes the LP point z of the two unions, reduces each side to an affinely
    independent support, then merges the points of each color into their
    weighted average. The merged points still put z in both sides' hulls,
    so those m points have rank at most m-2; every other color contributes
    its first point, adding at most one to the rank each.
    """
    i_set, j_set = tuple(sorted(i_set)), tuple(sorted(j_set))
    if not i_set or not j_set or set(i_set) & set(j_set):
        raise PreconditionError("I and J must be disjoint and nonempty")
    a_refs = [r for c in i_set for r in inst.refs(c)]
    b_refs = [r for c in j_set for r in inst.refs(c)]
    a_pts = [inst.point(r) for r in a_refs]
    b_pts = [inst.point(r) for r in b_refs]
    got = common_point(a_pts, b_pts, seed)
    if got is None:
        raise PreconditionError("the partition is separable")
    _, lam, mu = got
    merged = {}
    for refs, pts, coefs in ((a_refs, a_pts, lam), (b_refs, b_pts, mu)):
        support = caratheodory(pts, coefs)
        by_color = {}
        for k, c in support.items():
            by_color.setdefault(refs[k].color, []).append((c, pts[k]))
        for color, items in by_color.items():
            w = sum(Fraction(c) for c, _ in items)
            merged[color] = tuple(
                normalize(sum(Fraction(c) * p[axis] for c, p in items) / w) for axis in range(inst.d)
            )
    out = []
    for color in range(1, inst.d + 1):
        out.append(merged.get(color, inst.point(PointRef(color, 0))))
    return out


# --- violation constructions -----------------------------------------------


def _colorful_refs(h):
    if isinstance(h, OrientedHyperplane):
        refs = tuple(h.anchor) + ((h.pivot,) if h.pivot is not None else ())
        return tuple(sorted(refs))
    return tuple(sorted(h))


def inconsistent_orientation_witness(inst: Instance, anchor, h1: OrientedHyperplane, x, y, seed=0):
    """GV2 from a colorful plane whose orientation disagrees with the rotating one.

    ``x`` and ``y`` are the missing-color points strictly on the two sides
    of the intermediate plane. z_p is where xy crosses h1; when the frame
    through the anchor and z_p orients h1 the other way than the frame
    through the anchor and the pivot, the segment from the pivot to z_p
    crosses the anchor flat at a point x' of the missing color's hull.
    """
    anchor = tuple(sorted(anchor))
    pivot = h1.pivot
    if pivot is None or not h1.colorful:
        raise PreconditionError("h1 must be a colorful plane with a pivot")
    xp, yp = inst.point(x), inst.point(y)
    fx, fy = h1.value(xp), h1.value(yp)
    if fx * fy >= 0:
        raise PreconditionError("x and y must lie strictly on opposite sides of h1")
    z_p = lerp(xp, yp, Fraction(fx, 1) / (fx - fy))
    t1 = pivot.color
    anchor_pts = [inst.point(r) for r in anchor]

    def frame(pt):
        pts = []
        for c in range(1, inst.d + 1):
            pts.append(pt if c == t1 else anchor_pts[[r.color for r in anchor].index(c)])
        return affine_functional(pts)

    by_pivot, by_cross = frame(inst.point(pivot)), frame(z_p)
    k = next(i for i, c in enumerate(by_pivot[0]) if c != 0)
    if (by_pivot[0][k] > 0) == (by_cross[0][k] > 0):
        raise PreconditionError("orientations are consistent")
    got = segment_flat_intersection(inst.point(pivot), z_p, flat_from_points(anchor_pts))
    if not isinstance(got, tuple):
        raise InternalError("pivot segment misses the anchor flat")
    x_prime = got[0]
    pts = []
    for c in range(1, inst.d + 1):
        pts.append(x_prime if c == t1 else anchor_pts[[r.color for r in anchor].index(c)])
    return colorful_to_partition(inst, pts, seed, reason="inconsistent orientation")


def search_partition(inst: Instance, seed=0, reason="", extra=None):
    """First disjoint (I, J) with intersecting hulls, smallest sets first."""
    colors = range(1, inst.d + 1)
    pairs = []
    for size in range(2, inst.d + 1):
        for chosen in combinations(colors, size):
            rest = chosen[1:]
            for k in range(len(rest)):
                for extra_i in combinations(rest, k):
                    i_set = (chosen[0],) + extra_i
                    j_set = tuple(c for c in rest if c not in extra_i)
                    pairs.append((i_set, j_set))
    for i_set, j_set in pairs:
        cert = gv2_certificate(inst, i_set, j_set, seed, reason, extra)
        if cert is not None:
            return cert
    return None


# The binary search on the pencil parameter stops at width 1/(4N^4), below
# the separation between distinct combinatorial events of the instance.
def _resolution(inst):
    return Fraction(1, 4 * inst.integral().big_n ** 4)


def two_colorful_same_alpha(inst: Instance, hp, hq, seed=0):
    """GV2 from two distinct colorful planes with the same α-vector.

    Interpolates z_i(s) on each segment p_i q_i so that all z_i lie on the
    pencil plane (1-s)f_p + σ s f_q, with σ fixed by the sides the two
    tuples take on each other's planes. It locates the sign change of the
    orientation determinant against a point r off every pencil plane, and
    reads the partition off the near-degenerate colorful set. The partition
    is confirmed by exact LP; when the sign pattern is inconclusive the
    bipartitions are searched directly.
    """
    p_refs, q_refs = _colorful_refs(hp), _colorful_refs(hq)
    fp_plane, fq_plane = plane_through(inst, p_refs), plane_through(inst, q_refs)
    if alpha_vector_of(fp_plane, inst) != alpha_vector_of(fq_plane, inst):
        raise PreconditionError("α-vectors differ")
    if _same_oriented(fp_plane, fq_plane):
        raise PreconditionError("the two planes are equal")
    d = inst.d
    P = [inst.point(r) for r in p_refs]
    Q = [inst.point(r) for r in q_refs]
    a = [fp_plane.value(q) for q in Q]
    b = [fq_plane.value(p) for p in P]
    extra = {"method": "interpolation"}
    # the pencil crosses segment p_i q_i when σ b_i and a_i have opposite signs
    signs = {(x > 0) == (y > 0) for x, y in zip(a, b) if x != 0 and y != 0}
    sigma = -1 if signs == {True} else 1
    r_pt = _between_point(fp_plane, fq_plane, sigma)
    if r_pt is None or len(signs) != 1:
        extra["method"] = "search"
        return _finish_search(inst, seed, extra)

    def zs(s):
        out = []
        for pi, qi, ai, bi in zip(P, Q, a, b):
            den = (1 - s) * ai - sigma * s * bi
            out.append(pi if den == 0 else lerp(pi, qi, -sigma * s * bi / den))
        return out

    def det_at(s):
        return _orient(zs(s) + [r_pt])

    lo, hi = Fraction(0), Fraction(1)
    start = sign(det_at(lo))
    if start == 0 or sign(det_at(hi)) != -start:
        extra["method"] = "search"
        return _finish_search(inst, seed, extra)
    eps = _resolution(inst)
    while hi - lo > eps:
        mid = (lo + hi) / 2
        v = det_at(mid)
        if v == 0:
            pts = zs(mid)
            if affine_rank(pts) <= d - 2:
                cert = colorful_to_partition(inst, pts, seed, reason="two colorful planes share an α-vector")
                return _with_extra(cert, extra)
            break
        if sign(v) == start:
            lo = mid
        else:
            hi = mid
    extra["interval"] = [format_rational(lo), format_rational(hi)]
    for s in (hi, lo):
        pts = zs(s)
        extra["colorful_set"] = [[format_rational(c) for c in p] for p in pts]
        for i_set, j_set in _sign_patterns(pts):
            cert = gv2_certificate(inst, i_set, j_set, seed, "two colorful planes share an α-vector", extra)
            if cert is not None:
                return cert
    extra["method"] = "search"
    return _finish_search(inst, seed, extra)


def _finish_search(inst, seed, extra):
    cert = search_partition(inst, seed, "two planes share a key", extra)
    if cert is None:
        raise PreconditionError("no violating partition exists for these planes")
    return cert


def _with_extra(cert, extra):
    merged = dict(cert.extra)
    merged.update(extra)
    return Certificate(**{**cert.__dict__, "extra": merged})


def _same_oriented(h1, h2):
    k = next(i for i, c in enumerate(h1.normal) if c != 0)
    if h2.normal[k] == 0:
        return False
    f = Fraction(h2.normal[k], 1) / h1.normal[k]
    return all(f * c == c2 for c, c2 in zip(h1.normal, h2.normal)) and f * h1.offset == h2.offset


def _between_point(h1, h2, v2=-1):
    """A point with h1 = 1 and h2 = v2, or None when the planes are parallel."""
    d = len(h1.normal)
    for i, j in combinations(range(d), 2) if d > 1 else []:
        m = [[h1.normal[i], h1.normal[j]], [h2.normal[i], h2.normal[j]]]
        dt = det(m)
        if dt == 0:
            continue
        rhs = [Fraction(h1.offset) + 1, Fraction(h2.offset) + v2]
        u = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / dt
        v = (m[0][0] * rhs[1] - rhs[0] * m[1][0]) / dt
        pt = [0] * d
        pt[i], pt[j] = normalize(u), normalize(v)
        return tuple(pt)
    return None


def _orient(pts):
    n = len(pts)
    m = [[pts[j][i] for j in range(n)] for i in range(len(pts[0]))]
    m.append([1] * n)
    return det(m)


def _sign_patterns(pts):
    """Candidate (I, J) from approximate affine dependences of a colorful set.

    At an exact root the d vectors (z_i, 1) have a one-dimensional kernel;
    near it every adjugate column of a d×d row-minor approximates that
    kernel and carries its sign pattern.
    """
    d = len(pts)
    cols = [list(p) + [1] for p in pts]
    seen = []
    for drop in range(d + 1):
        a = [[cols[j][i] for j in range(d)] for i in range(d + 1) if i != drop]
        for col in range(d):
            vec = _adjugate_column(a, col)
            i_set = tuple(k + 1 for k, v in enumerate(vec) if v > 0)
            j_set = tuple(k + 1 for k, v in enumerate(vec) if v < 0)
            if i_set and j_set and (i_set, j_set) not in seen and (j_set, i_set) not in seen:
                seen.append((i_set, j_set))
    return seen


def _adjugate_column(a, col):
    """Column ``col`` of adj(a): the cofactors of row ``col``."""
    n = len(a)
    out = []
    for k in range(n):
        minor = [[a[i][j] for j in range(n) if j != k] for i in range(n) if i != col]
        c = det(minor) if minor else 1
        out.append(c if (k + col) % 2 == 0 else -c)
    return out


def _noncolorful_key(h, inst):
    witness = missing_color_witness(h, inst)
    return h.missing, alpha_vector_of(h, inst), witness.dist_sq


def two_noncolorful_same_key(inst: Instance, hp, hq, seed=0):
    """GV2 from two distinct non-colorful planes with equal missing color, α-vector and dist_sq.

    The preconditions are validated exactly; the violating partition is then
    located by exact LP over the color bipartitions.
    """
    if hp.colorful or hq.colorful:
        raise PreconditionError("both planes must miss a color")
    if _noncolorful_key(hp, inst) != _noncolorful_key(hq, inst):
        raise PreconditionError("key mismatch")
    if _same_oriented(hp, hq):
        raise PreconditionError("the two planes are equal")
    return _finish_search(inst, seed, {"method": "search"})


def wedge_vs_far_hyperplane(inst: Instance, w, h, seed=0):
    """GV2 from a wedge with colorful lower plane and a farther non-colorful plane sharing its key."""
    if w.q.color != w.t1:
        raise PreconditionError("the wedge's lower plane must be colorful")
    if h.colorful or h.missing != w.t1:
        raise PreconditionError("the plane must miss the wedge's missing color")
    if alpha_vector_of(h, inst) != tuple(w.alpha):
        raise PreconditionError("α-vectors differ")
    if missing_color_witness(h, inst).dist_sq <= w.dist_sq:
        raise PreconditionError("the plane is not farther than the wedge")
    return _finish_search(inst, seed, {"method": "search"})


# --- walk outcome conversion ----------------------------------------------


@dataclass(frozen=True)
class Finding:
    """A certificate found in working coordinates, before mapping back."""

    kind: str  # G1, GV1 or GV2-colorful
    refs: tuple = ()
    points: tuple = ()
    reason: str = ""


def _degeneracy_finding(exc, reason):
    if exc is None:
        return None
    if isinstance(exc, DegeneracyError):
        kind, refs = exc.kind, exc.refs
    else:
        kind, refs = getattr(exc, "kind", ""), getattr(exc, "refs", ())
    if kind in ("in-anchor-flat", "flat", "rank", "coplanar") and refs:
        return Finding("GV1", tuple(refs), (), reason)
    return None


def _wedge_findings(proc, w, reason):
    for pivot, extras in ((w.p, w.extras_p()), (w.q, w.extras_q())):
        if extras:
            yield Finding("GV1", w.anchor + (pivot, extras[0]), (), reason + ": extra point on a wedge plane")


def _step_findings(proc, step, reason):
    """Findings from a neighbor step that left the line."""
    from .wedge import StepFailure, WedgeFailure, analyze_wedge

    inst = proc.inst
    if isinstance(step, StepFailure):
        refs = step.seed
        if step.reason == "simultaneous hits" and refs:
            yield Finding("GV1", tuple(refs), (), reason + ": simultaneous hits")
        got = _degeneracy_finding(refs if isinstance(refs, DegeneracyError) else None, reason + ": " + step.reason)
        if got:
            yield got
        return
    got = analyze_wedge(inst, *step)
    if isinstance(got, WedgeFailure):
        seed = got.seed
        if isinstance(seed, DegeneracyError):
            f = _degeneracy_finding(seed, reason + ": " + got.reason)
            if f:
                yield f
        elif seed:
            yield Finding("GV1", tuple(seed), (), reason + ": " + got.reason)
        return
    yield from _wedge_findings(proc, got, reason + " (next wedge)")
    if not got.consistent:
        pos, neg = _strict_witness(inst, got.hw.value, got.t1)
        if pos is not None and neg is not None:
            for h1 in (got.hp, got.hq):
                if h1.colorful:
                    yield Finding("GV2-inconsistent", got.anchor, (h1, pos, neg), reason + ": inconsistent orientation")


def diagnose_vertex(proc, v, forward_first=True):
    """Findings at a vertex where the line ended or misbehaved."""
    from .wedge import next_neighbor, prev_neighbor

    w = proc.info(v) if v else None
    if w is None:
        return []
    if proc.reverse:
        target_line = "bootstrap"
    else:
        target_line = "line"
    findings = list(_wedge_findings(proc, w, target_line))
    steps = [next_neighbor(w, proc.target, proc.inst), prev_neighbor(w, proc.inst)]
    if proc.reverse:
        steps.reverse()
    if not forward_first:
        steps.reverse()
    for step in steps:
        findings.extend(_step_findings(proc, step, target_line))
    return findings


def _map_refs(frame, refs):
    return tuple(frame.to_original(r) for r in refs) if frame else tuple(refs)


def finalize(finding, inst: Instance, frame=None, seed=0):
    """Turn a working-coordinate finding into a verified certificate on ``inst``."""
    if finding.kind == "GV1":
        return gv1_certificate(inst, _map_refs(frame, finding.refs), finding.reason)
    if finding.kind == "GV2-inconsistent":
        work = frame.working if frame else inst
        h1, pos, neg = finding.points
        try:
            cert = inconsistent_orientation_witness(work, finding.refs, h1, pos, neg, seed)
        except (PreconditionError, InternalError):
            return None
        # the working copy is a scaled and relabeled image; re-derive on the original
        i_set = tuple(frame.order[c - 1] for c in cert.i_set) if frame else cert.i_set
        j_set = tuple(frame.order[c - 1] for c in cert.j_set) if frame else cert.j_set
        return gv2_certificate(inst, i_set, j_set, seed, finding.reason)
    return None


def fallback_certificate(inst: Instance, seed=0, reason="exhaustive check"):
    """GV1 by exhaustive scan, else GV2 by bipartition LP; None if the input is clean."""
    refs = check_weak_general_position(inst, budget=10**8)
    if refs is not None:
        return gv1_certificate(inst, refs, reason)
    return search_partition(inst, seed, reason)


def convert_findings(findings, inst, frame=None, seed=0):
    """GV1 findings take priority over GV2 ones."""
    ordered = [f for f in findings if f.kind == "GV1"] + [f for f in findings if f.kind != "GV1"]
    for f in ordered:
        cert = finalize(f, inst, frame, seed)
        if cert is not None:
            return cert
    return None


def convert_walk_outcome(outcome, proc, inst: Instance, frame=None, seed=0):
    """Certificate for a walk outcome of ``proc`` (run on ``frame.working``)."""
    if outcome.kind not in ("U1", "UV1", "UV2", "UV3"):
        raise InternalError(f"unrecognized outcome {outcome.kind!r}")
    v = outcome.vertices[0]
    findings = []
    if outcome.kind == "U1" and not proc.reverse and v != 0:
        w = proc.info(v)
        if w is not None and w.q.color == w.t1 and alpha_vector_of(w.hq, proc.inst) == proc.target:
            findings = list(_wedge_findings(proc, w, "line end"))
            if not findings:
                refs = _map_refs(frame, w.anchor + (w.q,))
                cert = g1_certificate(inst, refs, inst.alpha)
                if verify_certificate(cert, inst)[0]:
                    return cert
    for u in outcome.vertices:
        findings.extend(diagnose_vertex(proc, u))
        if u != 0:
            s = proc.successor(u)
            if s != u:
                findings.extend(diagnose_vertex(proc, s))
    cert = convert_findings(findings, inst, frame, seed)
    if cert is not None:
        return cert
    cert = fallback_certificate(inst, seed, reason=f"{outcome.kind} at the line end")
    if cert is None:
        raise InternalError(f"{outcome.kind} outcome without a detectable violation")
    return cert
