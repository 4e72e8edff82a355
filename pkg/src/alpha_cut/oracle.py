"""Exhaustive ground truth at desk scale: all colorful cuts and both input promises."""

from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb, prod

from .exact import affine_rank, format_rational
from .instance import Instance, PointRef
from .lp import common_point
from .rotation import DegeneracyError, alpha_vector_of, plane_through

DEFAULT_BUDGET = 10**6


class BudgetExceeded(ValueError):
    def __init__(self, what, required, budget, unit="checks"):
        super().__init__(f"{what} needs {required} {unit}, budget is {budget}")
        self.required = required
        self.budget = budget


@dataclass
class CutTable:
    sizes: tuple
    cuts: dict = field(default_factory=dict)  # colorful tuple -> (alpha, normal, offset)
    degenerate: list = field(default_factory=list)  # rank deficient tuples
    multi_incident: list = field(default_factory=list)  # planes holding more than d points

    def alphas(self):
        return [a for a, _, _ in self.cuts.values()]

    def by_alpha(self, alpha):
        alpha = tuple(alpha)
        return [t for t, (a, _, _) in self.cuts.items() if a == alpha]

    def is_bijection(self):
        """α-vectors pairwise distinct and covering the whole grid."""
        if self.degenerate:
            return False
        alphas = self.alphas()
        grid = set(product(*[range(1, s + 1) for s in self.sizes]))
        return len(set(alphas)) == len(alphas) and set(alphas) == grid

    def to_doc(self):
        def refs(t):
            return [[r.color, r.index] for r in t]

        return {
            "cuts": [
                {
                    "points": refs(t),
                    "alpha": list(a),
                    "normal": [format_rational(c) for c in n],
                    "offset": format_rational(o),
                }
                for t, (a, n, o) in self.cuts.items()
            ],
            "degenerate": [refs(t) for t in self.degenerate],
            "multi_incident": [refs(t) for t in self.multi_incident],
        }


def enumerate_cuts(inst: Instance, budget=DEFAULT_BUDGET) -> CutTable:
    total = prod(inst.sizes)
    if total > budget:
        raise BudgetExceeded("enumerate_cuts", total, budget)
    table = CutTable(inst.sizes)
    for idx in product(*[range(s) for s in inst.sizes]):
        refs = tuple(PointRef(c, i) for c, i in enumerate(idx, start=1))
        try:
            h = plane_through(inst, refs)
        except DegeneracyError:
            table.degenerate.append(refs)
            continue
        if len(h.incident) > inst.d:
            table.multi_incident.append(refs)
        table.cuts[refs] = (alpha_vector_of(h, inst), h.normal, h.offset)
    return table


def check_weak_general_position(inst: Instance, budget=DEFAULT_BUDGET):
    """None when no d+1 points with at least d-1 colors share a hyperplane, else such refs."""
    d = inst.d
    refs = inst.all_refs
    if d + 1 > len(refs):
        return None
    total = comb(len(refs), d + 1)
    if total > budget:
        raise BudgetExceeded("check_weak_general_position", total, budget)
    for subset in combinations(refs, d + 1):
        if len({r.color for r in subset}) < d - 1:
            continue
        if affine_rank([inst.point(r) for r in subset]) <= d - 1:
            return subset
    return None


def bipartitions(d):
    """(I, J) with I holding color 1 and J its nonempty complement."""
    rest = list(range(2, d + 1))
    for k in range(len(rest)):
        for extra in combinations(rest, k):
            i_set = (1,) + extra
            j_set = tuple(c for c in rest if c not in extra)
            yield i_set, j_set


def union_points(inst: Instance, colors):
    return [inst.point(r) for c in colors for r in inst.refs(c)]


def check_well_separation(inst: Instance, seed=0, budget=DEFAULT_BUDGET):
    """None when every bipartition of the colors is hull-separable, else (I, J, point)."""
    d = inst.d
    if d < 2:
        return None
    if 2 ** (d - 1) > budget:
        raise BudgetExceeded("check_well_separation", 2 ** (d - 1), budget)
    for i_set, j_set in bipartitions(d):
        got = common_point(union_points(inst, i_set), union_points(inst, j_set), seed)
        if got is not None:
            return i_set, j_set, got[0]
    return None


def find_cut_bruteforce(inst: Instance, target=None, budget=DEFAULT_BUDGET):
    """All colorful tuples whose plane realizes the target, plus the table as evidence."""
    table = enumerate_cuts(inst, budget)
    target = inst.alpha if target is None else tuple(target)
    return table.by_alpha(target), table
