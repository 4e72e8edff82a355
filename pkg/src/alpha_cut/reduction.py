"""Vertex encoding, successor/predecessor/potential circuits and the line walk.

Forward lines start at a colorful plane with α-vector (1, ..., 1) and walk
to the target. The bootstrap line runs the same machinery with S and P
exchanged, from a wedge next to an arbitrary colorful plane back to the
(1, ..., 1) plane.
"""

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import isqrt

from .exact import affine_rank, format_rational
from .instance import ColorFrame, Instance, PointRef
from .rotation import DegeneracyError, alpha_vector_of, natural_plane
from .wedge import StepFailure, WedgeFailure, analyze_wedge, next_neighbor, prev_neighbor


def ceil_log2(x):
    return (x - 1).bit_length() if x > 1 else 0


def kappa(d, n0):
    return 3 * ceil_log2(d) + (d + 1) * ceil_log2(n0)


@dataclass(frozen=True)
class Codec:
    """Fixed-width bit layout of a vertex, most significant field first.

    Fields: missing color, the anchor indices in color order, then color and
    index of p and of q. Colors are stored minus one.
    """

    d: int
    sizes: tuple

    @property
    def n0(self):
        return max(self.sizes)

    @property
    def color_bits(self):
        return ceil_log2(self.d)

    @property
    def index_bits(self):
        return ceil_log2(self.n0)

    @property
    def kappa(self):
        return kappa(self.d, self.n0)

    def widths(self):
        cb, ib = self.color_bits, self.index_bits
        return [cb] + [ib] * (self.d - 1) + [cb, ib, cb, ib]

    def encode(self, anchor, p, q) -> int:
        colors = [r.color for r in anchor]
        t1 = next(c for c in range(1, self.d + 1) if c not in colors)
        fields = [t1 - 1] + [r.index for r in sorted(anchor)] + [p.color - 1, p.index, q.color - 1, q.index]
        v = 0
        for f, w in zip(fields, self.widths()):
            if not 0 <= f < (1 << w) and not (w == 0 and f == 0):
                raise ValueError("field out of range for its width")
            v = (v << w) | f
        return v

    def fields(self, v):
        out = []
        for w in reversed(self.widths()):
            out.append(v & ((1 << w) - 1))
            v >>= w
        return out[::-1]

    def decode(self, v):
        """(anchor, p, q) or None for bitstrings naming no valid tuple."""
        if not 0 <= v < (1 << self.kappa):
            return None
        f = self.fields(v)
        t1 = f[0] + 1
        if t1 > self.d:
            return None
        others = [c for c in range(1, self.d + 1) if c != t1]
        anchor = []
        for c, idx in zip(others, f[1 : self.d]):
            if idx >= self.sizes[c - 1]:
                return None
            anchor.append(PointRef(c, idx))
        pc, pi, qc, qi = f[self.d :]
        refs = []
        for c, i in ((pc + 1, pi), (qc + 1, qi)):
            if c > self.d or i >= self.sizes[c - 1]:
                return None
            refs.append(PointRef(c, i))
        return tuple(anchor), refs[0], refs[1]

    def bits(self, v):
        return format(v, f"0{self.kappa}b") if self.kappa else ""


def alpha_rank(alpha, n0):
    d = len(alpha)
    return sum(n0 ** (d - i) * (a - 1) for i, a in enumerate(alpha, start=1))


def on_path_form(alpha, t1, target):
    """(target_1, ..., target_{t1-1}, b, 1, ..., 1) with b < target_{t1}."""
    i = t1 - 1
    return (
        tuple(alpha[:i]) == tuple(target[:i])
        and alpha[i] < target[i]
        and all(a == 1 for a in alpha[i + 1 :])
    )


def _cycle_next(extras, current):
    ordered = sorted(extras + (current,))
    return ordered[(ordered.index(current) + 1) % len(ordered)]


def _cycle_prev(extras, current):
    ordered = sorted(extras + (current,))
    return ordered[(ordered.index(current) - 1) % len(ordered)]


class LineProcedures:
    """S, P and V for one line over a working instance.

    ``start`` is the wedge the source points at. In forward mode its upper
    plane has α-vector (1, ..., 1) and the line heads for ``target``. In
    reversed mode its lower plane is an arbitrary colorful plane with
    α-vector ``target``, and S and P trade places so the line runs back
    toward a (1, ..., 1) plane.
    """

    def __init__(self, inst: Instance, target, start, reverse=False):
        self.inst = inst
        self.target = tuple(target)
        self.start = (tuple(start[0]), start[1], start[2])
        self.reverse = reverse
        self.codec = Codec(inst.d, inst.sizes)
        self.start_code = self.codec.encode(*self.start)
        self.big_n = inst.big_n
        self.big_m = inst.big_m
        self.n0 = inst.n0
        self._s, self._p, self._v, self._info = {}, {}, {}, {}
        if reverse:
            self.offset = self.big_m * self.big_n**2 * (alpha_rank(self.target, self.n0) + 1)

    # -- shared helpers
    def info(self, v):
        if v not in self._info:
            tri = self.codec.decode(v)
            out = None
            if tri is not None:
                got = analyze_wedge(self.inst, *tri)
                if not isinstance(got, WedgeFailure):
                    out = got
            self._info[v] = out
        return self._info[v]

    def enc(self, anchor, p, q):
        return self.codec.encode(anchor, p, q)

    def _validated(self, step):
        if isinstance(step, StepFailure):
            return None
        got = analyze_wedge(self.inst, *step)
        if isinstance(got, WedgeFailure) or not got.consistent:
            return None
        return self.enc(*step)

    def _is_second_head(self, w):
        return w.p.color == w.t1 and w.t1 == 1 and alpha_vector_of(w.hp, self.inst) == (1,) * self.inst.d

    def _advance(self, v, w):
        """Forward-line S steps S4 onward."""
        if not on_path_form(w.alpha, w.t1, self.target):
            return v
        if alpha_vector_of(w.hq, self.inst) == self.target:
            return v
        ex = w.extras_p()
        if ex:
            return self.enc(w.anchor, _cycle_next(ex, w.p), w.q)
        ex = w.extras_q()
        if ex:
            return self.enc(w.anchor, w.p, _cycle_next(ex, w.q))
        got = self._validated(next_neighbor(w, self.target, self.inst))
        return v if got is None else got

    def _retreat(self, v, w):
        """Forward-line P steps P5 onward."""
        if self._is_second_head(w):
            return v
        if not on_path_form(w.alpha, w.t1, self.target):
            return v
        ex = w.extras_p()
        if ex:
            return self.enc(w.anchor, _cycle_prev(ex, w.p), w.q)
        ex = w.extras_q()
        if ex:
            return self.enc(w.anchor, w.p, _cycle_prev(ex, w.q))
        got = self._validated(prev_neighbor(w, self.inst))
        return v if got is None else got

    # -- the three circuits
    def successor(self, v):
        if v in self._s:
            return self._s[v]
        if v == 0:
            out = self.start_code
        else:
            w = self.info(v)
            if w is None or not w.consistent:
                out = v
            elif not self.reverse:
                out = self._advance(v, w)
            else:
                out = self._retreat(v, w)
        self._s[v] = out
        return out

    def predecessor(self, v):
        if v in self._p:
            return self._p[v]
        if v == 0:
            out = 0
        else:
            w = self.info(v)
            s_anchor, s_p, _ = self.start
            if w is None or not w.consistent:
                out = v
            elif w.anchor == s_anchor and w.p == s_p:
                out = 0
            elif not self.reverse:
                out = self._retreat(v, w)
            else:
                out = self._advance(v, w)
        self._p[v] = out
        return out

    def delta(self, w):
        n2 = self.big_n**2
        return self.big_m * n2 * alpha_rank(w.alpha, self.n0) + floor_dist(w.dist_sq, self.big_n)

    def potential(self, v):
        if v in self._v:
            return self._v[v]
        w = None if v == 0 else self.info(v)
        if w is None or (self.successor(v) == v and self.predecessor(v) == v):
            out = 0
        else:
            out = self.offset - self.delta(w) if self.reverse else self.delta(w)
        self._v[v] = out
        return out


def floor_dist(dist_sq, big_n):
    """⌊D·N²⌋ for D = sqrt(dist_sq), exactly."""
    q = Fraction(dist_sq) * big_n**4
    return isqrt(q.numerator // q.denominator)


# --- walking ---------------------------------------------------------------


@dataclass
class WalkOutcome:
    kind: str  # U1, UV1, UV2 or UV3
    vertices: tuple
    steps: int
    trace: list = field(default_factory=list)
    reason: str = ""


def step_budget(inst: Instance):
    return inst.n0**inst.d * inst.n * inst.d


def trace_record(proc: LineProcedures, v, step, phase="forward", frame=None):
    w = None if v == 0 else proc.info(v)
    alpha = dist = klass = wedge = None
    if w is not None:
        alpha = list(frame.alpha_to_original(w.alpha) if frame else w.alpha)
        dist = format_rational(w.dist_sq)
        klass = w.klass
        back = frame.to_original if frame else (lambda r: r)
        wedge = {
            "anchor": sorted([list(back(r)) for r in w.anchor]),
            "p": list(back(w.p)),
            "q": list(back(w.q)),
        }
    return {
        "step": step,
        "vertex_bits": proc.codec.bits(v),
        "alpha": alpha,
        "dist_sq": dist,
        "potential": proc.potential(v),
        "phase": phase,
        "class": klass,
        "wedge": wedge,
    }


def walk_line(proc: LineProcedures, budget=None, trace=False, phase="forward", frame=None):
    """Follow S from the source until the line breaks; report the break."""
    budget = step_budget(proc.inst) if budget is None else budget
    v, steps, records = 0, 0, []
    while True:
        if trace:
            records.append(trace_record(proc, v, steps, phase, frame))
        s = proc.successor(v)
        if proc.predecessor(s) != v:
            return WalkOutcome("U1", (v,), steps, records)
        if proc.potential(s) <= proc.potential(v):
            return WalkOutcome("UV1", (v, s), steps, records, "potential did not increase")
        v = s
        steps += 1
        if steps > budget:
            return WalkOutcome("UV1", (v, proc.successor(v)), steps, records, "step budget exceeded")


# --- bootstrap and start wedges -------------------------------------------


@dataclass(frozen=True)
class Seed:
    """A failure before any line could be walked."""

    kind: str
    refs: tuple = ()
    points: tuple = ()
    message: str = ""


def greedy_colorful_tuple(inst: Instance):
    """First full-rank colorful tuple in index order, or None."""
    for idx in product(*[range(s) for s in inst.sizes]):
        refs = tuple(PointRef(c, i) for c, i in enumerate(idx, start=1))
        if affine_rank([inst.point(r) for r in refs]) == inst.d - 1:
            return refs
    return None


def first_partner(inst: Instance, anchor, p):
    """≺-minimal q making (anchor, p, q) a consistent wedge with p upper."""
    for q in inst.all_refs:
        w = analyze_wedge(inst, anchor, p, q)
        if not isinstance(w, WedgeFailure) and w.consistent:
            return q
    return None


def first_upper_partner(inst: Instance, anchor, q):
    """≺-minimal p making (anchor, p, q) a consistent wedge with q lower."""
    for p in inst.all_refs:
        w = analyze_wedge(inst, anchor, p, q)
        if not isinstance(w, WedgeFailure) and w.consistent:
            return p
    return None


def split_tuple(refs, color):
    """(anchor, pivot) for a colorful tuple, the pivot being the point of ``color``."""
    pivot = next(r for r in refs if r.color == color)
    return tuple(sorted(r for r in refs if r != pivot)), pivot


@dataclass
class Bootstrap:
    h0: tuple = None  # colorful tuple in original colors
    seed: Seed = None
    outcome: WalkOutcome = None
    proc: LineProcedures = None
    frame: ColorFrame = None
    start_tuple: tuple = None


_BOOT_CACHE = {}


def bootstrap_H0(inst: Instance, budget=None, trace=False) -> Bootstrap:
    """Find a colorful plane with α-vector (1, ..., 1) by a reversed line walk."""
    key = (inst, budget, trace)
    if key in _BOOT_CACHE:
        return _BOOT_CACHE[key]
    out = _bootstrap(inst, budget, trace)
    _BOOT_CACHE[key] = out
    return out


def _bootstrap(inst, budget, trace):
    d = inst.d
    start = greedy_colorful_tuple(inst)
    if start is None:
        first = tuple(PointRef(c, 0) for c in range(1, d + 1))
        return Bootstrap(seed=Seed("rank", first, (), "every colorful tuple is rank deficient"))
    try:
        h = natural_plane(inst, *split_tuple(start, d))
    except DegeneracyError as exc:
        return Bootstrap(seed=Seed(exc.kind, exc.refs, exc.points, str(exc)))
    b = alpha_vector_of(h, inst)
    if b == (1,) * d:
        return Bootstrap(h0=start, start_tuple=start)
    frame = ColorFrame.leading_non_unit(inst, b)
    work = frame.working
    b_w = frame.alpha_to_working(b)
    k = sum(1 for x in b_w if x != 1)
    tup = tuple(sorted(frame.to_working(r) for r in start))
    anchor, pivot = split_tuple(tup, k)
    p = first_upper_partner(work, anchor, pivot)
    if p is None:
        return Bootstrap(
            seed=Seed("no-start-wedge", start, (), "no wedge below the starting plane"),
            frame=frame,
            start_tuple=start,
        )
    proc = LineProcedures(work, b_w, (anchor, p, pivot), reverse=True)
    outcome = walk_line(proc, budget, trace, phase="bootstrap", frame=frame)
    result = Bootstrap(outcome=outcome, proc=proc, frame=frame, start_tuple=start)
    if outcome.kind == "U1":
        w = proc.info(outcome.vertices[0])
        if w is not None and proc._is_second_head(w):
            result.h0 = tuple(sorted(frame.to_original(r) for r in w.anchor + (w.p,)))
    return result


# --- exhaustive scan (tests and diagnostics) -------------------------------


def scan_line(proc: LineProcedures):
    """Classify every vertex of the line graph.

    Returns a dict with the starts (S(P(v)) ≠ v, which includes the
    source), the U1, UV1 and UV2 vertices and the UV3 pairs.
    """
    size = 1 << proc.codec.kappa
    u1, uv1, uv2, starts = [], [], [], []
    active = []
    for v in range(size):
        s = proc.successor(v)
        p = proc.predecessor(v)
        if proc.successor(p) != v:
            starts.append(v)
        if proc.predecessor(s) != v:
            u1.append(v)
        elif s != v and proc.potential(s) <= proc.potential(v):
            uv1.append(v)
        if v != 0 and proc.successor(p) != v:
            uv2.append(v)
        if s != v:
            active.append(v)
    uv3 = []
    pots = sorted((proc.potential(v), v) for v in active)
    values = [pv for pv, _ in pots]
    for i in range(1, len(pots)):
        if pots[i][0] == pots[i - 1][0]:
            uv3.append((pots[i - 1][1], pots[i][1]))
    for v in active:
        lo, hi = proc.potential(v), proc.potential(proc.successor(v))
        if hi <= lo:
            continue
        j = bisect_left(values, lo + 1)
        if j < len(values) and values[j] < hi:
            uv3.append((v, pots[j][1]))
    return {"starts": starts, "U1": u1, "UV1": uv1, "UV2": uv2, "UV3": uv3}
