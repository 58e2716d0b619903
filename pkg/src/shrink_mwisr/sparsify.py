"""Randomised reduction to a well-separated, non-abusive, grid-snapped family.

Pipeline for one trial::

    params = normalize_params(delta, epsilon, family)
    framed, _ = frame(family)
    kept, ws = sample_well_separated(framed, params, rng)
    grid = make_grid(ws, params, sample_shift(params, rng))
    snapped = [snap(r, ws.levels(r.id), grid) for r in filter_abusive(kept, ws, grid)]

Grids are never materialised.  A level-``t`` grid line is any coordinate
``a + j * u_t`` with integer ``j``, and every query below reduces to a floor
division.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError, InvariantError, ParameterError
from .geom import ShrunkRect, contains, shrink, to_fraction, translate


def _even_reciprocal(value, name) -> Fraction:
    v = to_fraction(value)
    if not 0 < v < 1:
        raise ParameterError(f"{name} must lie strictly between 0 and 1, got {v}")
    q = max(6, 2 * math.ceil(1 / (2 * v)))
    return Fraction(1, q)


@dataclass(frozen=True)
class Params:
    """Normalised accuracy parameters and the size of the bounding frame.

    ``base`` is 1/(delta*epsilon), ``period`` is 1/epsilon and ``L`` is
    ``base ** ell``.
    """

    delta: Fraction
    epsilon: Fraction
    ell: int
    L: int

    @property
    def base(self) -> int:
        return int(1 / (self.delta * self.epsilon))

    @property
    def period(self) -> int:
        return int(1 / self.epsilon)

    @property
    def grid_dim(self) -> int:
        """Cells per side of a subproblem: ``base ** period``."""
        return self.base ** self.period


def frame(family):
    """Translate so the smallest corner coordinates become 1 on both axes.

    Returns the translated rectangles (same ids) and the ``(dx, dy)`` used.
    """
    items = list(family)
    if not items:
        return [], (0, 0)
    dx = 1 - min(r.x1 for r in items)
    dy = 1 - min(r.y1 for r in items)
    return [translate(r, dx, dy) for r in items], (dx, dy)


def normalize_params(delta_user, epsilon_user, family=()) -> Params:
    """Round both parameters down to 1/(even integer >= 6) and size the frame.

    ``ell`` is the smallest positive exponent for which the translated
    family fits in ``[1, L] x [1, L]``.
    """
    delta = _even_reciprocal(delta_user, "delta")
    epsilon = _even_reciprocal(epsilon_user, "epsilon")
    framed, _ = frame(family)
    extent = max([max(r.x2, r.y2) for r in framed], default=1)
    base = int(1 / (delta * epsilon))
    ell, L = 1, base
    while L < extent:
        ell += 1
        L *= base
    return Params(delta, epsilon, ell, L)


def _layer(length, base) -> int:
    j, hi = 1, base
    while hi <= length:
        j += 1
        hi *= base
    return j


def assign_layers(family, params: Params):
    """Layer index per rectangle on both axes, as two lists aligned with ``family``."""
    vl, hl = [], []
    for r in family:
        if min(r.x1, r.y1) < 1 or max(r.x2, r.y2) > params.L:
            raise InputError(f"rectangle {r.id!r} lies outside [1, {params.L}]^2")
        vl.append(_layer(r.width, params.base))
        hl.append(_layer(r.height, params.base))
    return vl, hl


@dataclass(frozen=True)
class WellSeparated:
    """Level partition produced by one offset ``b``.

    ``nu[t-1]`` and ``mu[t-1]`` are the limits of level ``t``;
    ``vlevel`` and ``hlevel`` map rectangle ids to levels.
    """

    p: int
    nu: tuple
    mu: tuple
    vlevel: dict = field(repr=False)
    hlevel: dict = field(repr=False)
    offset: int = 0

    def levels(self, rid):
        return self.vlevel[rid], self.hlevel[rid]


def _first_block(offset, period):
    return -((offset + period - 1) // period) if offset else 0


def well_separated_for_offset(family, params: Params, offset: int):
    """Deterministic core of :func:`sample_well_separated` for a fixed offset."""
    r, m, ell = params.base, params.period, params.ell
    if not 0 <= offset < m:
        raise ParameterError(f"offset must lie in [0, {m - 1}]")
    vl, hl = assign_layers(family, params)
    c_lo = _first_block(offset, m)
    c_hi = -((offset + m - 1 - ell) // m)
    p = c_hi - c_lo + 1

    def level_of_layer(j):
        return (j - offset - 1) // m - c_lo + 1

    kept, vlev, hlev = [], {}, {}
    for rect, jv, jh in zip(family, vl, hl):
        if (jv - offset) % m == 0 or (jh - offset) % m == 0:
            continue
        kept.append(rect)
        vlev[rect.id] = level_of_layer(jv)
        hlev[rect.id] = level_of_layer(jh)
    nu, mu = [], []
    for c in range(c_lo, c_hi + 1):
        e = offset + c * m
        nu.append(Fraction(r) ** e)
        mu.append(r ** (e + m - 1))
    return kept, WellSeparated(p, tuple(nu), tuple(mu), vlev, hlev, offset)


def sample_well_separated(family, params: Params, rng: random.Random):
    """Drop every rectangle whose layer on either axis is congruent to a random offset."""
    return well_separated_for_offset(family, params, rng.randrange(params.period))


def check_well_separated(family, ws: WellSeparated, params: Params) -> None:
    """Raise :class:`InvariantError` unless every level identity holds exactly."""
    r, m = params.base, params.period
    if not ws.nu[0] <= 1:
        raise InvariantError(f"first lower limit {ws.nu[0]} exceeds 1")
    if not ws.mu[-1] >= params.L:
        raise InvariantError(f"top upper limit {ws.mu[-1]} is below L={params.L}")
    for t in range(ws.p):
        if Fraction(ws.mu[t]) / ws.nu[t] != Fraction(r) ** (m - 1):
            raise InvariantError(f"level {t + 1}: span ratio is not base^(period-1)")
        if t and ws.nu[t] / Fraction(ws.mu[t - 1]) != r:
            raise InvariantError(f"level {t + 1}: gap ratio is not base")
        if t and ws.nu[t].denominator != 1:
            raise InvariantError(f"level {t + 1}: lower limit is not an integer")
        if not isinstance(ws.mu[t], int):
            raise InvariantError(f"level {t + 1}: upper limit is not an integer")
    for rect in family:
        s, t = ws.levels(rect.id)
        if not (ws.nu[s - 1] <= rect.width < ws.mu[s - 1]):
            raise InvariantError(f"{rect.id!r}: width outside its level")
        if not (ws.nu[t - 1] <= rect.height < ws.mu[t - 1]):
            raise InvariantError(f"{rect.id!r}: height outside its level")


@dataclass(frozen=True)
class GridSystem:
    """Shifted hierarchical grid: level ``t`` lines sit at ``a + j * units[t-1]``."""

    a: int
    units: tuple
    delta: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(Fraction(u) for u in self.units))
        if any(u <= 0 for u in self.units):
            raise ParameterError("grid units must be positive")
        if any(hi <= lo for lo, hi in zip(self.units, self.units[1:])):
            raise ParameterError("grid units must increase with the level")

    @property
    def p(self) -> int:
        return len(self.units)

    def unit(self, level: int) -> Fraction:
        return self.units[level - 1]

    def line(self, level: int, j: int) -> Fraction:
        return self.a + j * self.units[level - 1]

    def index_floor(self, level: int, x) -> int:
        """Largest ``j`` with ``line(level, j) <= x``."""
        return math.floor((x - self.a) / self.units[level - 1])

    def index_ceil(self, level: int, x) -> int:
        return math.ceil((x - self.a) / self.units[level - 1])

    def on_line(self, level: int, x) -> bool:
        return ((x - self.a) / self.units[level - 1]).denominator == 1

    def ratio(self, level: int) -> int:
        """``units[level-1] / units[level-2]``; an integer for hierarchical grids."""
        q = self.units[level - 1] / self.units[level - 2]
        if q.denominator != 1:
            raise InvariantError(f"grid levels {level - 1} and {level} are not nested")
        return int(q)


def sample_shift(params: Params, rng: random.Random) -> int:
    return rng.randrange(params.L)


def make_grid(ws: WellSeparated, params: Params, a: int) -> GridSystem:
    """Units are ``delta * nu_t / 2``; integral above the first level."""
    units = tuple(params.delta * nu / 2 for nu in ws.nu)
    for t, u in enumerate(units[1:], start=2):
        if u.denominator != 1 or u != Fraction(ws.mu[t - 2]) / (2 * params.epsilon):
            raise InvariantError(f"unit of level {t} is not mu_(t-1) / (2 epsilon)")
    return GridSystem(a, units, params.delta)


def _crossed(lo, hi, grid: GridSystem, level: int) -> bool:
    nxt = grid.line(level, grid.index_floor(level, lo) + 1)
    return nxt < hi


def is_abusive(rect, levels, grid: GridSystem) -> bool:
    """True iff a grid line of a higher level cuts the open rectangle."""
    s, t = levels
    if s < grid.p and _crossed(rect.x1, rect.x2, grid, s + 1):
        return True
    if t < grid.p and _crossed(rect.y1, rect.y2, grid, t + 1):
        return True
    return False


def filter_abusive(family, ws: WellSeparated, grid: GridSystem):
    return [r for r in family if not is_abusive(r, ws.levels(r.id), grid)]


@dataclass(frozen=True)
class SnappedRect(ShrunkRect):
    """Grid-aligned rectangle with the levels used to align it."""

    source_id: object = None
    level: tuple = (1, 1)


def _interior_lines(lo, hi, grid: GridSystem, level: int):
    first = grid.line(level, grid.index_floor(level, lo) + 1)
    last = grid.line(level, grid.index_ceil(level, hi) - 1)
    return first, last


def snap(rect, levels, grid: GridSystem) -> SnappedRect:
    """Shrink ``rect`` to the outermost grid lines of its own levels that cut it."""
    s, t = levels
    x1, x2 = _interior_lines(rect.x1, rect.x2, grid, s)
    y1, y2 = _interior_lines(rect.y1, rect.y2, grid, t)
    if not (x1 < x2 and y1 < y2):
        raise InvariantError(f"{rect.id!r}: fewer than two grid lines cross it")
    q = SnappedRect(rect.id, x1, y1, x2, y2, rect.weight, source_id=rect.id, level=(s, t))
    if not contains(rect, q):
        raise InvariantError(f"{rect.id!r}: snapped rectangle leaves its source")
    if grid.delta is not None and not contains(q, shrink(rect, grid.delta)):
        raise InvariantError(f"{rect.id!r}: snapped rectangle misses the shrinking")
    return q


@dataclass
class Sparsified:
    """Everything one trial of the reduction produces."""

    params: Params
    framed: list
    shift_xy: tuple
    kept: list
    ws: WellSeparated
    grid: GridSystem
    non_abusive: list
    snapped: list


def sparsify(family, params: Params, rng: random.Random) -> Sparsified:
    """One randomised trial: sample, shift, filter, snap."""
    framed, dxy = frame(family)
    kept, ws = sample_well_separated(framed, params, rng)
    grid = make_grid(ws, params, sample_shift(params, rng))
    good = filter_abusive(kept, ws, grid)
    snapped = [snap(r, ws.levels(r.id), grid) for r in good]
    return Sparsified(params, framed, dxy, kept, ws, grid, good, snapped)


def hierarchical_grid(unit, ratio: int, levels: int, a: int = 0) -> GridSystem:
    """Grid whose consecutive units differ by exactly ``ratio``."""
    if levels < 1 or ratio < 1 or (levels > 1 and ratio < 2):
        raise ParameterError("need ratio >= 2 whenever there is more than one level")
    u = Fraction(unit)
    return GridSystem(a, tuple(u * ratio ** i for i in range(levels)))


def random_snapped_family(rng: random.Random, n: int, ratio: int, levels: int,
                          unit=1, weights=(1, 9)):
    """Random family that already satisfies every structural property the DP needs.

    Each member of vertical level ``s`` spans between 2 and ``ratio`` level-``s``
    columns (a single column is allowed on level 1) and sits inside one
    level-``s+1`` column, so no higher line cuts it.  Everything lies inside
    the root area of a subproblem of ``ratio`` cells per side.  Returns
    ``(grid, family)``.
    """
    a = rng.randrange(int(Fraction(unit) * ratio ** (levels - 1)))
    grid = hierarchical_grid(unit, ratio, levels, a)
    z1 = grid.index_floor(levels, 0)

    def span(level):
        lo_w = 1 if level == 1 else 2
        w = rng.randint(lo_w, ratio)
        if level == levels:
            start = z1 + rng.randint(0, ratio - w)
            return start, start + w
        outer = rng.randrange(z1 * ratio ** (levels - level - 1),
                              (z1 + ratio) * ratio ** (levels - level - 1))
        start = outer * ratio + rng.randint(0, ratio - w)
        return start, start + w

    fam = []
    for i in range(n):
        s, t = rng.randint(1, levels), rng.randint(1, levels)
        xs, ys = span(s), span(t)
        w = rng.randint(*weights)
        fam.append(SnappedRect(i, grid.line(s, xs[0]), grid.line(t, ys[0]),
                               grid.line(s, xs[1]), grid.line(t, ys[1]), w,
                               source_id=i, level=(s, t)))
    return grid, fam
