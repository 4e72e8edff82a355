"""Named instances and the seeded corpus shared by the test modules."""

import random
from functools import lru_cache

from alpha_cut import Instance
from alpha_cut.generate import generate_instance
from alpha_cut.oracle import enumerate_cuts
from alpha_cut.solver import solve

# two separated columns of two points
INST4 = Instance(2, (((0, 0), (0, 2)), ((3, 0), (3, 2))), (2, 1))
# three points of two colors on y = 0
DEGEN = Instance(2, (((0, 0), (1, 0)), ((2, 0), (0, 1))), (1, 1))
# the blue triangle sits inside the red one
NOSEP = Instance(2, (((0, 0), (6, 0), (0, 6)), ((1, 1), (2, 1), (1, 2))), (1, 1))

CORPUS_SIZE = 200


def all_targets(sizes):
    out = [()]
    for n in sizes:
        out = [t + (a,) for t in out for a in range(1, n + 1)]
    return out


@lru_cache(maxsize=None)
def corpus():
    """Well-separated instances with d in {2, 3} and at most 6 points per color."""
    rnd = random.Random(20240611)
    out = []
    for k in range(CORPUS_SIZE):
        d = rnd.choice((2, 3))
        sizes = tuple(rnd.randint(1, 6) for _ in range(d))
        out.append(generate_instance(d, sizes, margin=1, seed=k))
    return tuple(out)


@lru_cache(maxsize=None)
def cut_tables():
    return tuple(enumerate_cuts(inst) for inst in corpus())


@lru_cache(maxsize=None)
def corpus_solutions():
    """(instance index, target) -> traced SolveResult over the whole corpus."""
    out = {}
    for i, inst in enumerate(corpus()):
        for target in all_targets(inst.sizes):
            out[(i, target)] = solve(inst.with_alpha(target), seed=i, trace=True)
    return out
