"""Seeded generator for well-separated instances in weak general position."""

from math import isqrt

import numpy as np

from .instance import Instance
from .oracle import check_weak_general_position, check_well_separation

RADIUS = 1000  # sampling radius per color, in grid units


def _scale(d, margin):
    # faces of the simplex {S e_i} for disjoint color sets are at least
    # 2S/sqrt(d) apart; the sampling balls eat 2R of that
    need = margin + 2 * RADIUS
    root = isqrt(d)
    root = root if root * root == d else root + 1
    return (need * root + 1) // 2 + 1


def generate_instance(d, sizes, margin=1, seed=0, alpha=None, max_tries=1000) -> Instance:
    """Colors sampled in balls around scaled unit vectors, on the integer grid.

    Colliding points (any weak-general-position witness) are resampled. The
    result is checked for well-separation by exact LP before it is returned.
    """
    if not isinstance(d, int) or d < 1:
        raise ValueError("dimension must be a positive integer")
    sizes = tuple(sizes)
    if len(sizes) != d or any(s < 1 for s in sizes):
        raise ValueError("sizes must give d positive counts")
    if margin <= 0:
        raise ValueError("margin must be positive")
    rng = np.random.default_rng(seed)
    scale = _scale(d, margin)
    centers = [[scale if k == i else 0 for k in range(d)] for i in range(d)]

    def sample(color):
        while True:
            offset = rng.integers(-RADIUS, RADIUS + 1, size=d)
            if int(np.dot(offset, offset)) <= RADIUS * RADIUS:
                return tuple(int(c) + int(o) for c, o in zip(centers[color], offset))

    colors = [[sample(c) for _ in range(sizes[c])] for c in range(d)]
    for _ in range(max_tries):
        inst = Instance(d, tuple(tuple(pts) for pts in colors), (1,) * d)
        witness = check_weak_general_position(inst)
        if witness is None:
            break
        r = max(witness)
        colors[r.color - 1][r.index] = sample(r.color - 1)
    else:
        raise ValueError("could not reach weak general position")
    if check_well_separation(inst) is not None:
        raise ValueError("sampled colors are not well separated")
    if alpha is None:
        alpha = tuple(int(rng.integers(1, s + 1)) for s in sizes)
    return inst.with_alpha(alpha)
