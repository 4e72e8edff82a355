"""Colored point sets, orders, α-vectors and the instance JSON format."""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial, isqrt
from typing import NamedTuple

from .exact import format_rational, lcm, to_rational


class ParseError(ValueError):
    pass


class PointRef(NamedTuple):
    """A point named by (color, index); colors are 1-based, indices 0-based."""

    color: int
    index: int

    def __repr__(self):
        return f"({self.color},{self.index})"


def order_compare(a: PointRef, b: PointRef, inst=None) -> int:
    """Global order: by color, then by position in the input file."""
    if inst is not None:
        inst.check_ref(a)
        inst.check_ref(b)
    ka, kb = (a.color, a.index), (b.color, b.index)
    return (ka > kb) - (ka < kb)


@dataclass(frozen=True, eq=False)
class Instance:
    dimension: int
    colors: tuple  # tuple of tuples of points; each point a tuple of rationals
    alpha: tuple

    def __post_init__(self):
        d = self.dimension
        if not isinstance(d, int) or d < 1:
            raise ParseError("dimension must be a positive integer")
        if len(self.colors) != d:
            raise ParseError(f"expected {d} colors, got {len(self.colors)}")
        for ci, pts in enumerate(self.colors, start=1):
            if len(pts) == 0:
                raise ParseError(f"color {ci} is empty")
            for pi, p in enumerate(pts):
                if len(p) != d:
                    raise ParseError(f"colors[{ci - 1}][{pi}]: dimension mismatch")
        if len(self.alpha) != d:
            raise ParseError("alpha has wrong length")
        for ci, (a, pts) in enumerate(zip(self.alpha, self.colors), start=1):
            if not isinstance(a, int) or not 1 <= a <= len(pts):
                raise ParseError(f"alpha out of range at color {ci}")

    # identity is structural so instances can key caches
    def _key(self):
        return (self.dimension, self.colors, self.alpha)

    def __eq__(self, other):
        return isinstance(other, Instance) and self._key() == other._key()

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash(self._key())

    @property
    def d(self):
        return self.dimension

    @property
    def sizes(self):
        return tuple(len(c) for c in self.colors)

    @property
    def n0(self):
        return max(self.sizes)

    @property
    def n(self):
        return sum(self.sizes)

    @property
    def k(self):
        return sum(1 for a in self.alpha if a != 1)

    def point(self, ref: PointRef):
        return self.colors[ref.color - 1][ref.index]

    def refs(self, color=None):
        if color is not None:
            return [PointRef(color, i) for i in range(len(self.colors[color - 1]))]
        return [PointRef(c, i) for c in range(1, self.d + 1) for i in range(len(self.colors[c - 1]))]

    @cached_property
    def all_refs(self):
        return tuple(self.refs())

    def check_ref(self, ref: PointRef):
        if not (1 <= ref.color <= self.d and 0 <= ref.index < len(self.colors[ref.color - 1])):
            raise ValueError(f"invalid point reference {ref}")

    def with_alpha(self, alpha):
        return Instance(self.dimension, self.colors, tuple(alpha))

    @cached_property
    def is_integral(self):
        return all(isinstance(c, int) for pts in self.colors for p in pts for c in p)

    def integral(self):
        """Per-axis positive scaling to integer coordinates.

        The map is diagonal with positive entries, so incidences, sides and
        orientation signs are all preserved.
        """
        if self.is_integral:
            return self
        dens = [1] * self.d
        for pts in self.colors:
            for p in pts:
                for i, c in enumerate(p):
                    dens[i] = lcm(dens[i], Fraction(c).denominator)
        colors = tuple(
            tuple(tuple(int(Fraction(c) * dens[i]) for i, c in enumerate(p)) for p in pts)
            for pts in self.colors
        )
        return Instance(self.dimension, colors, self.alpha)

    @cached_property
    def m0(self):
        """Bit width for coordinates of the integral copy.

        One bit more than the widest magnitude, so that every coordinate
        difference also fits in m0 bits.
        """
        inst = self.integral()
        widest = max(abs(c).bit_length() for pts in inst.colors for p in pts for c in p)
        return widest + 1

    @cached_property
    def big_n(self):
        return factorial(self.d) * 2 ** (self.d * self.m0)

    @cached_property
    def big_m(self):
        target = self.d * 4**self.m0
        r = isqrt(target)
        return r if r * r == target else r + 1


def parse_instance(text) -> Instance:
    try:
        doc = json.loads(text) if isinstance(text, (str, bytes)) else text
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    for key in ("dimension", "colors", "alpha"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}")
    d = doc["dimension"]
    if not isinstance(d, int) or isinstance(d, bool):
        raise ParseError("dimension must be an integer")
    if not isinstance(doc["colors"], list):
        raise ParseError("colors must be a list")
    colors = []
    for ci, pts in enumerate(doc["colors"]):
        if not isinstance(pts, list):
            raise ParseError(f"colors[{ci}] must be a list")
        parsed = []
        for pi, p in enumerate(pts):
            if not isinstance(p, list):
                raise ParseError(f"colors[{ci}][{pi}] must be a list")
            if len(p) != d:
                raise ParseError(f"colors[{ci}][{pi}]: dimension mismatch")
            try:
                parsed.append(tuple(to_rational(c) for c in p))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"colors[{ci}][{pi}]: {exc}") from None
        colors.append(tuple(parsed))
    alpha = doc["alpha"]
    if not isinstance(alpha, list) or not all(isinstance(a, int) and not isinstance(a, bool) for a in alpha):
        raise ParseError("alpha must be a list of integers")
    return Instance(d, tuple(colors), tuple(alpha))


def instance_to_doc(inst: Instance):
    return {
        "dimension": inst.dimension,
        "colors": [[[_coord(c) for c in p] for p in pts] for pts in inst.colors],
        "alpha": list(inst.alpha),
    }


def _coord(c):
    return c if isinstance(c, int) else format_rational(c)


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_doc(inst), separators=(",", ":"))


@dataclass(frozen=True)
class ColorFrame:
    """A working color order for an instance.

    ``order[i]`` is the original color placed at working color i+1. When the
    permutation is odd the first axis is mirrored, which flips every
    orientation determinant back, so sides and α-vectors agree with the
    original instance.
    """

    original: Instance
    order: tuple
    working: Instance = field(compare=False)
    mirrored: bool = False

    @staticmethod
    def build(inst: Instance, order):
        order = tuple(order)
        if sorted(order) != list(range(1, inst.d + 1)):
            raise ValueError("order must be a permutation of the colors")
        odd = _parity(order)
        colors = []
        for c in order:
            pts = inst.colors[c - 1]
            if odd:
                pts = tuple((-p[0],) + tuple(p[1:]) for p in pts)
            colors.append(pts)
        alpha = tuple(inst.alpha[c - 1] for c in order)
        return ColorFrame(inst, order, Instance(inst.d, tuple(colors), alpha), odd)

    @staticmethod
    def leading_non_unit(inst: Instance, vector):
        """Order that puts the non-unit entries of ``vector`` first."""
        colors = range(1, inst.d + 1)
        lead = [c for c in colors if vector[c - 1] != 1]
        rest = [c for c in colors if vector[c - 1] == 1]
        return ColorFrame.build(inst, lead + rest)

    def to_original(self, ref: PointRef) -> PointRef:
        return PointRef(self.order[ref.color - 1], ref.index)

    def to_working(self, ref: PointRef) -> PointRef:
        return PointRef(self.order.index(ref.color) + 1, ref.index)

    def alpha_to_original(self, vec):
        out = [0] * len(vec)
        for i, c in enumerate(self.order):
            out[c - 1] = vec[i]
        return tuple(out)

    def alpha_to_working(self, vec):
        return tuple(vec[c - 1] for c in self.order)


def _parity(perm):
    perm = list(perm)
    odd = False
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j] - 1
            length += 1
        if length % 2 == 0:
            odd = not odd
    return odd
