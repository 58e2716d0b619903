"""Exact primitives for open axis-parallel rectangles.

Every coordinate of an input rectangle is a Python ``int`` and every derived
coordinate is a :class:`fractions.Fraction`, so all comparisons below are
exact.  Rectangles are open sets: two rectangles that only share boundary
points do not overlap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Iterable

from .errors import InputError, ParameterError


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions, decimal strings, ``"p/q"`` strings and floats exactly.

    Floats go through their shortest ``repr`` so that ``0.3`` means 3/10
    rather than the nearest binary double.
    """
    if isinstance(value, bool):
        raise InputError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not an exact number: {value!r}") from exc
    raise InputError(f"unsupported numeric type {type(value).__name__}")


def check_delta(delta) -> Fraction:
    """Return ``delta`` as a Fraction after checking 0 < delta < 1."""
    d = to_fraction(delta)
    if not 0 < d < 1:
        raise ParameterError(f"delta must lie strictly between 0 and 1, got {d}")
    return d


class _Box:
    """Shared read-only geometry for the rectangle classes."""

    @property
    def width(self):
        return self.x2 - self.x1

    @property
    def height(self):
        return self.y2 - self.y1

    @property
    def corners(self):
        return (self.x1, self.y1, self.x2, self.y2)


@dataclass(frozen=True)
class Rect(_Box):
    """Open rectangle ``(x1, x2) x (y1, y2)`` with integer corners."""

    id: object
    x1: int
    y1: int
    x2: int
    y2: int
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("x1", "y1", "x2", "y2"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise InputError(f"rectangle {self.id!r}: {name} must be an integer, got {v!r}")
        if not (self.x1 < self.x2 and self.y1 < self.y2):
            raise InputError(f"rectangle {self.id!r} is empty: {self.corners}")
        w = to_fraction(self.weight)
        if w < 0:
            raise InputError(f"rectangle {self.id!r} has negative weight {w}")
        object.__setattr__(self, "weight", w)


@dataclass(frozen=True)
class ShrunkRect(_Box):
    """Open rectangle with rational corners; keeps the id of its source."""

    id: object
    x1: Fraction
    y1: Fraction
    x2: Fraction
    y2: Fraction
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("x1", "y1", "x2", "y2"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))
        if not (self.x1 < self.x2 and self.y1 < self.y2):
            raise InputError(f"rectangle {self.id!r} is empty: {self.corners}")
        w = to_fraction(self.weight)
        if w < 0:
            raise InputError(f"rectangle {self.id!r} has negative weight {w}")
        object.__setattr__(self, "weight", w)


@dataclass(frozen=True)
class Point:
    x: Fraction
    y: Fraction


def shrink(r, delta) -> ShrunkRect:
    """Concentric copy of ``r`` with both side lengths scaled by ``1 - delta``."""
    d = check_delta(delta)
    dx = d * r.width / 2
    dy = d * r.height / 2
    return ShrunkRect(r.id, r.x1 + dx, r.y1 + dy, r.x2 - dx, r.y2 - dy, r.weight)


def shrink_all(family, delta) -> list[ShrunkRect]:
    d = check_delta(delta)
    return [shrink(r, d) for r in family]


def overlaps(a, b) -> bool:
    """True iff the open interiors of ``a`` and ``b`` intersect."""
    return max(a.x1, b.x1) < min(a.x2, b.x2) and max(a.y1, b.y1) < min(a.y2, b.y2)


def contains(outer, inner) -> bool:
    """Closed containment of ``inner`` in ``outer`` (reflexive)."""
    return (outer.x1 <= inner.x1 and inner.x2 <= outer.x2
            and outer.y1 <= inner.y1 and inner.y2 <= outer.y2)


def center(r) -> Point:
    return Point(Fraction(r.x1 + r.x2, 2), Fraction(r.y1 + r.y2, 2))


def linf_dist(p: Point, q: Point) -> Fraction:
    return Fraction(max(abs(p.x - q.x), abs(p.y - q.y)))


def is_independent(family: Iterable) -> bool:
    items = list(family)
    return not any(overlaps(a, b) for a, b in combinations(items, 2))


def first_overlap(family: Iterable):
    """Return the first overlapping pair found, or ``None``."""
    items = list(family)
    for a, b in combinations(items, 2):
        if overlaps(a, b):
            return a, b
    return None


def total_weight(family: Iterable) -> Fraction:
    return sum((r.weight for r in family), Fraction(0))


def translate(r: Rect, dx: int, dy: int) -> Rect:
    return Rect(r.id, r.x1 + dx, r.y1 + dy, r.x2 + dx, r.y2 + dy, r.weight)
