"""Exact rational scalars, vectors and the linear-algebra predicates built on them.

Everything here works on ``int`` and ``fractions.Fraction`` only. Integer
inputs stay integers where possible (Bareiss elimination divides exactly),
which keeps the hot predicates cheap.
"""

from fractions import Fraction
from math import gcd


class DimensionError(ValueError):
    pass


def to_rational(value):
    """Parse an int, Fraction or "p/q" string into an exact rational."""
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            num, den = int(num), int(den)
            if den == 0:
                raise ValueError(f"zero denominator in {value!r}")
            out = Fraction(num, den)
        else:
            out = Fraction(int(text))
        return out.numerator if out.denominator == 1 else out
    raise ValueError(f"not a rational: {value!r}")


def format_rational(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return a // b
    return Fraction(a) / b


def det(m):
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise DimensionError("det needs a square matrix")
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _exact_div(a[i][j] * pivot - a[i][k] * a[k][j], prev)
        prev = pivot
    out = sign * a[n - 1][n - 1]
    if isinstance(out, Fraction) and out.denominator == 1:
        return out.numerator
    return out


def sign(x):
    return (x > 0) - (x < 0)


def rank(rows):
    """Rank of a rectangular matrix given as a list of rows."""
    a = [[Fraction(v) for v in row] for row in rows]
    if not a:
        return 0
    r = 0
    ncols = len(a[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def affine_rank(pts):
    """Dimension of the affine hull of a nonempty point list."""
    pts = list(pts)
    if not pts:
        raise ValueError("affine_rank of an empty point list")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise DimensionError("points of unequal dimension")
    base = pts[0]
    return rank([[a - b for a, b in zip(p, base)] for p in pts[1:]])


def solve_linear(a, b):
    """Solve a·λ = b exactly; None when singular or inconsistent.

    Square systems only need a nonzero determinant. Rectangular ones are
    accepted when they have a unique solution.
    """
    if len(a) != len(b):
        raise DimensionError("row count of a must match b")
    rows = [[Fraction(v) for v in row] + [Fraction(bv)] for row, bv in zip(a, b)]
    if not rows:
        return []
    ncols = len(rows[0]) - 1
    r = 0
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            return None
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(rows[i][-1] != 0 for i in range(r, len(rows))):
        return None
    return [normalize(rows[i][-1]) for i in range(ncols)]


def null_vector(rows):
    """A nonzero rational vector in the kernel of the matrix, or None."""
    a = [[Fraction(v) for v in row] for row in rows]
    ncols = len(a[0])
    pivot_cols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivot_cols.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivot_cols]
    if not free:
        return None
    f = free[0]
    vec = [Fraction(0)] * ncols
    vec[f] = Fraction(1)
    for i, c in enumerate(pivot_cols):
        vec[c] = -a[i][f]
    return vec


def normalize(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def scale(c, u):
    return tuple(c * a for a in u)


def lerp(x, y, t):
    """x + t(y - x) with exact coordinates."""
    return tuple(normalize(a + t * (b - a)) for a, b in zip(x, y))


def norm_sq(u):
    return dot(u, u)


def orient(cols):
    """det of the (d+1)x(d+1) matrix whose columns are (pt, 1)."""
    n = len(cols)
    m = [[cols[j][i] for j in range(n)] for i in range(len(cols[0]))]
    m.append([1] * n)
    return det(m)


def flat_from_points(pts):
    """Affine flat as (base point, spanning vectors)."""
    base = pts[0]
    return base, [sub(p, base) for p in pts[1:]]


def segment_flat_intersection(x, y, flat):
    """Intersect segment xy with an affine flat given as (base, spans).

    Returns (z, λ) with z = x + λ(y - x), λ in [0, 1], when the segment
    meets the flat in one point; None when it misses; the string
    "contained" when the segment lies inside the flat. A segment meeting the
    flat in a single point while its line lies in a larger common flat is
    reported as "degenerate".
    """
    if tuple(x) == tuple(y):
        raise ValueError("segment endpoints coincide")
    base, spans = flat
    d = len(x)
    direction = sub(y, x)
    # x + λ·dir = base + Σ μ_i span_i  ⇔  λ·dir − Σ μ_i span_i = base − x
    cols = [direction] + [scale(-1, s) for s in spans]
    a = [[cols[j][i] for j in range(len(cols))] for i in range(d)]
    rhs = sub(base, x)
    sol = solve_linear(a, rhs)
    if sol is None:
        if _in_flat(x, flat) and _in_flat(y, flat):
            return "contained"
        # Either parallel-and-disjoint or the line meets the flat along a
        # dependent direction; distinguish by solving the least structured
        # system over the combined spans.
        if rank(cols) < len(cols):
            consistent = rank(cols + [rhs]) == rank(cols)
            if consistent:
                return "degenerate"
        return None
    lam = sol[0]
    if lam < 0 or lam > 1:
        return None
    return lerp(x, y, lam), lam


def _in_flat(p, flat):
    base, spans = flat
    if not spans:
        return tuple(p) == tuple(base)
    return rank(spans + [sub(p, base)]) == rank(spans)


def lcm(a, b):
    return a * b // gcd(a, b)
