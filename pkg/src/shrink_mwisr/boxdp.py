"""Memoised dynamic program over grid-aligned subproblems and box partitions.

A subproblem ``(s, t, x1, x2, y1, y2)`` covers the open area
``(a + x1*u_s, a + x2*u_s) x (a + y1*u_t, a + y2*u_t)``; its cells are the
level-``s`` columns times the level-``t`` rows inside it.  The value of a
subproblem is the best total over all partitions of its cells into typed
boxes:

* ``LARGE``: any block of cells, worth the heaviest rectangle equal to it;
* ``HORIZONTAL``: a run inside one row, solved one level lower on the y axis;
* ``VERTICAL``: a run inside one column, one level lower on the x axis;
* ``SMALL``: a single cell, one level lower on both axes.

Two search strategies compute that maximum.  ``"enumerate"`` walks every
partition produced by :func:`enumerate_partitions` and is only usable on
tiny grids.  ``"compressed"`` (the default) searches the same space on a
grid that keeps only the lines touching some rectangle of the subproblem,
memoises on the set of covered cells and skips boxes that are dominated by a
shorter box plus empty filler.  Both return identical values; the tests
check this.
"""

from __future__ import annotations

import math
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple

from .errors import ContractError, InvariantError, ParameterError, ResourceError
from .geom import contains, is_independent, shrink_all, to_fraction, total_weight
from .sparsify import GridSystem, normalize_params, sparsify

LARGE, HORIZONTAL, VERTICAL, SMALL = "L", "H", "V", "S"
KINDS = (LARGE, HORIZONTAL, VERTICAL, SMALL)


class SubproblemKey(NamedTuple):
    s: int
    t: int
    x1: int
    x2: int
    y1: int
    y2: int
    budget: int | None = None

    def with_budget(self, budget):
        return self._replace(budget=budget)


class TypedBox(NamedTuple):
    """Cells ``[c1, c2) x [r1, r2)`` of a subproblem, counted from its corner."""

    kind: str
    c1: int
    c2: int
    r1: int
    r2: int


def area(key: SubproblemKey, grid: GridSystem):
    return (grid.line(key.s, key.x1), grid.line(key.t, key.y1),
            grid.line(key.s, key.x2), grid.line(key.t, key.y2))


class _Area(NamedTuple):
    x1: Fraction
    y1: Fraction
    x2: Fraction
    y2: Fraction


def rects_in(family, key: SubproblemKey, grid: GridSystem):
    """Members of ``family`` lying inside the area of ``key``."""
    box = _Area(*area(key, grid))
    return [q for q in family if contains(box, q)]


def level_filter_check(members, key: SubproblemKey) -> bool:
    """True iff no member has a level above the subproblem's levels."""
    return all(q.level[0] <= key.s and q.level[1] <= key.t for q in members)


def root_subproblem(grid: GridSystem, grid_cap: int, L: int | None = None) -> SubproblemKey:
    """Top-level key ``(p, p, z1, z1 + D, z1, z1 + D)``.

    ``z1`` is the largest integer with ``a + z1*u_p <= 0``.  When ``L`` is
    given the area must contain ``(1, L) x (1, L)``.
    """
    p = grid.p
    z1 = grid.index_floor(p, 0)
    z2 = z1 + grid_cap
    if L is not None and grid.line(p, z2) < L:
        need = math.ceil((L - grid.line(p, z1)) / grid.unit(p))
        raise ResourceError(
            f"grid cap {grid_cap} leaves the root short of L={L}; need at least {need}")
    return SubproblemKey(p, p, z1, z2, z1, z2)


def enumerate_partitions(x: int, y: int, cap: int = 16, large_ok=None) -> Iterator[tuple]:
    """Every partition of an ``x`` by ``y`` cell grid into typed boxes.

    The first uncovered cell in ``(column, row)`` order is always covered
    next, which makes the stream duplicate free.  ``large_ok(c1, c2, r1, r2)``
    may veto large boxes early.
    """
    if x < 1 or y < 1:
        raise ContractError("grid must have at least one cell")
    if x * y > cap:
        raise ResourceError(f"{x}x{y} grid exceeds the enumeration cap of {cap} cells")
    covered = [[False] * y for _ in range(x)]
    boxes = []

    def first_free():
        for i in range(x):
            for j in range(y):
                if not covered[i][j]:
                    return i, j
        return None

    def mark(b, flag):
        for i in range(b.c1, b.c2):
            for j in range(b.r1, b.r2):
                covered[i][j] = flag

    def free(c1, c2, r1, r2):
        return all(not covered[i][j] for i in range(c1, c2) for j in range(r1, r2))

    def options(i, j):
        yield TypedBox(SMALL, i, i + 1, j, j + 1)
        i2 = i + 1
        while i2 <= x and not covered[i2 - 1][j]:
            yield TypedBox(HORIZONTAL, i, i2, j, j + 1)
            i2 += 1
        j2 = j + 1
        while j2 <= y and not covered[i][j2 - 1]:
            yield TypedBox(VERTICAL, i, i + 1, j, j2)
            j2 += 1
        for i2 in range(i + 1, x + 1):
            if covered[i2 - 1][j]:
                break
            for j2 in range(j + 1, y + 1):
                if not free(i, i2, j, j2):
                    break
                if large_ok is None or large_ok(i, i2, j, j2):
                    yield TypedBox(LARGE, i, i2, j, j2)

    def go():
        cell = first_free()
        if cell is None:
            yield tuple(boxes)
            return
        for b in list(options(*cell)):
            mark(b, True)
            boxes.append(b)
            yield from go()
            boxes.pop()
            mark(b, False)

    yield from go()


@dataclass
class Counters:
    keys_solved: int = 0
    partitions_enumerated: int = 0
    box_options: int = 0
    max_depth: int = 0

    def as_dict(self):
        return dict(self.__dict__)


@dataclass
class Entry:
    """Memo entry: value plus the winning boxes.

    Each element of ``boxes`` is ``(TypedBox, payload)`` where the payload is
    the chosen rectangle for a large box, a child key for a recursive box,
    or ``None`` for empty filler.
    """

    value: Fraction
    boxes: list = field(default_factory=list)


class BoxDP:
    """Memo table plus solver for one snapped family on one grid.

    Parameters
    ----------
    family : list of SnappedRect
        Grid-aligned rectangles carrying ``level = (s, t)``.
    grid : GridSystem
        Hierarchical grid the family was snapped to.
    grid_cap : int
        Maximum number of cells per side of any subproblem.
    strategy : {"compressed", "enumerate"}
        How the maximum over partitions is searched.
    enum_cap : int
        Cell limit for the ``"enumerate"`` strategy.
    """

    def __init__(self, family, grid: GridSystem, grid_cap: int,
                 strategy: str = "compressed", enum_cap: int = 16):
        if strategy not in ("compressed", "enumerate"):
            raise ContractError(f"unknown strategy {strategy!r}")
        if grid_cap < 1:
            raise ParameterError("grid cap must be positive")
        self.family = list(family)
        self.grid = grid
        self.D = grid_cap
        self.strategy = strategy
        self.enum_cap = enum_cap
        self.table: dict[SubproblemKey, Entry] = {}
        self.counters = Counters()
        self._depth = 0
        for t in range(2, grid.p + 1):
            if grid.ratio(t) > grid_cap:
                raise ResourceError(
                    f"grid cap {grid_cap} is below the level ratio {grid.ratio(t)}; "
                    f"need at least {grid.ratio(t)}")

    def _check_key(self, key):
        if not (key.x1 < key.x2 <= key.x1 + self.D and key.y1 < key.y2 <= key.y1 + self.D):
            raise InvariantError(f"key {key} violates the grid cap {self.D}")
        if not (1 <= key.s <= self.grid.p and 1 <= key.t <= self.grid.p):
            raise InvariantError(f"key {key} has levels outside 1..{self.grid.p}")
        if key.budget is not None and key.budget < 0:
            raise InvariantError("negative budget")

    def solve(self, key: SubproblemKey, pool=None) -> Fraction:
        """Value of ``key``: best weight of an independent subfamily of its rectangles."""
        self._check_key(key)
        if key.budget == 0:
            return Fraction(0)
        members = rects_in(self.family if pool is None else pool, key, self.grid)
        if not members:
            return Fraction(0)
        hit = self.table.get(key)
        if hit is not None:
            return hit.value
        if not level_filter_check(members, key):
            raise InvariantError(f"subproblem {key} holds a rectangle of a higher level")
        self.counters.keys_solved += 1
        self._depth += 1
        self.counters.max_depth = max(self.counters.max_depth, self._depth)
        try:
            if self.strategy == "enumerate":
                entry = self._solve_enumerate(key, members)
            else:
                entry = self._solve_compressed(key, members)
        finally:
            self._depth -= 1
        self.table[key] = entry
        return entry.value

    # -- child keys ---------------------------------------------------------

    def _child(self, key, kind, xa, xb, ya, yb, budget):
        """Key for a recursive box given in absolute level-(s, t) line indices."""
        g = self.grid
        s, t = key.s, key.t
        if kind == HORIZONTAL:
            q = g.ratio(t)
            return SubproblemKey(s, t - 1, xa, xb, ya * q, yb * q, budget)
        if kind == VERTICAL:
            q = g.ratio(s)
            return SubproblemKey(s - 1, t, xa * q, xb * q, ya, yb, budget)
        qs, qt = g.ratio(s), g.ratio(t)
        return SubproblemKey(s - 1, t - 1, xa * qs, xb * qs, ya * qt, yb * qt, budget)

    @staticmethod
    def _allowed(kind, key):
        if kind == HORIZONTAL:
            return key.t > 1
        if kind == VERTICAL:
            return key.s > 1
        return key.s > 1 and key.t > 1

    def _large_lookup(self, key, members):
        """Map absolute cell blocks to the heaviest member equal to them."""
        g = self.grid
        best = {}
        for q in members:
            if not (g.on_line(key.s, q.x1) and g.on_line(key.s, q.x2)
                    and g.on_line(key.t, q.y1) and g.on_line(key.t, q.y2)):
                continue
            blk = (g.index_floor(key.s, q.x1), g.index_floor(key.s, q.x2),
                   g.index_floor(key.t, q.y1), g.index_floor(key.t, q.y2))
            cur = best.get(blk)
            if cur is None or q.weight > cur.weight or (q.weight == cur.weight and q.id < cur.id):
                best[blk] = q
        return best

    # -- literal strategy -----------------------------------------------------

    def _solve_enumerate(self, key, members):
        large = self._large_lookup(key, members)
        x0, y0 = key.x1, key.y1

        def large_ok(c1, c2, r1, r2):
            return (x0 + c1, x0 + c2, y0 + r1, y0 + r2) in large

        lam = key.budget
        best = None
        for part in enumerate_partitions(key.x2 - key.x1, key.y2 - key.y1,
                                         self.enum_cap, large_ok):
            self.counters.partitions_enumerated += 1
            fixed = Fraction(0)
            used = 0
            rest = []
            labelled = []
            for b in part:
                xa, xb, ya, yb = x0 + b.c1, x0 + b.c2, y0 + b.r1, y0 + b.r2
                if b.kind == LARGE:
                    q = large[(xa, xb, ya, yb)]
                    fixed += q.weight
                    used += 1
                    labelled.append((b, q))
                elif self._allowed(b.kind, key):
                    rest.append((b, xa, xb, ya, yb))
                else:
                    labelled.append((b, None))
            if lam is not None and used > lam:
                continue
            value, chosen = self._split_budget(key, members, rest,
                                               None if lam is None else lam - used)
            value += fixed
            if best is None or value > best.value:
                best = Entry(value, labelled + chosen)
        return best

    def _split_budget(self, key, members, rest, budget):
        """Best sum over recursive boxes; with a budget, the best composition of it."""
        if budget is None:
            total, chosen = Fraction(0), []
            for b, xa, xb, ya, yb in rest:
                ck = self._child(key, b.kind, xa, xb, ya, yb, None)
                total += self.solve(ck, members)
                chosen.append((b, ck))
            return total, chosen
        # knapsack over boxes: table[j] = best value using budget j
        table = {0: (Fraction(0), [])}
        for b, xa, xb, ya, yb in rest:
            nxt = {}
            for used, (val, ch) in table.items():
                for share in range(0, budget - used + 1):
                    ck = self._child(key, b.kind, xa, xb, ya, yb, share)
                    v = val + self.solve(ck, members)
                    u = used + share
                    if u not in nxt or v > nxt[u][0]:
                        nxt[u] = (v, ch + [(b, ck)])
            table = nxt
        return max(table.values(), key=lambda e: e[0])

    # -- compressed strategy --------------------------------------------------

    def _solve_compressed(self, key, members):
        g = self.grid
        s, t = key.s, key.t
        xs = {key.x1, key.x2}
        ys = {key.y1, key.y2}
        for q in members:
            for v in (q.x1, q.x2):
                xs.add(g.index_floor(s, v))
                xs.add(g.index_ceil(s, v))
            for v in (q.y1, q.y2):
                ys.add(g.index_floor(t, v))
                ys.add(g.index_ceil(t, v))
        cols = sorted(c for c in xs if key.x1 <= c <= key.x2)
        rows = sorted(r for r in ys if key.y1 <= r <= key.y2)
        nc, nr = len(cols) - 1, len(rows) - 1
        ncell = nc * nr
        large = self._large_lookup(key, members)
        col_of = {c: i for i, c in enumerate(cols)}
        row_of = {r: j for j, r in enumerate(rows)}
        starts = {}
        for (xa, xb, ya, yb), q in large.items():
            i, j = col_of[xa], row_of[ya]
            starts.setdefault(i * nr + j, []).append((col_of[xb], row_of[yb], q))
        X = [g.line(s, c) for c in cols]
        Y = [g.line(t, r) for r in rows]

        def inside(q, xa, xb, ya, yb):
            return X[xa] <= q.x1 and q.x2 <= X[xb] and Y[ya] <= q.y1 and q.y2 <= Y[yb]

        def block_mask(i1, i2, j1, j2):
            m = 0
            for i in range(i1, i2):
                for j in range(j1, j2):
                    m |= 1 << (i * nr + j)
            return m

        options = {}

        def cell_options(cell):
            """Candidate boxes anchored at a cell, ignoring what is covered."""
            if cell in options:
                return options[cell]
            i, j = divmod(cell, nr)
            out = []
            for i2, j2, q in starts.get(cell, ()):
                out.append((block_mask(i, i2, j, j2), LARGE, (i, i2, j, j2), q))
            one_row = rows[j + 1] - rows[j] == 1
            one_col = cols[i + 1] - cols[i] == 1
            if one_row and self._allowed(HORIZONTAL, key):
                for i2 in range(i + 1, nc + 1):
                    sub = [q for q in members if inside(q, i, i2, j, j + 1)]
                    if (sub and min(q.x1 for q in sub) < X[i + 1]
                            and max(q.x2 for q in sub) > X[i2 - 1]):
                        out.append((block_mask(i, i2, j, j + 1), HORIZONTAL,
                                    (i, i2, j, j + 1), sub))
            if one_col and self._allowed(VERTICAL, key):
                for j2 in range(j + 1, nr + 1):
                    sub = [q for q in members if inside(q, i, i + 1, j, j2)]
                    if (sub and min(q.y1 for q in sub) < Y[j + 1]
                            and max(q.y2 for q in sub) > Y[j2 - 1]):
                        out.append((block_mask(i, i + 1, j, j2), VERTICAL,
                                    (i, i + 1, j, j2), sub))
            if one_row and one_col and self._allowed(SMALL, key):
                sub = [q for q in members if inside(q, i, i + 1, j, j + 1)]
                if sub:
                    out.append((1 << cell, SMALL, (i, i + 1, j, j + 1), sub))
            options[cell] = out
            return out

        full = (1 << ncell) - 1
        lam = key.budget
        memo = {}

        def child_value(kind, span, sub, share):
            i1, i2, j1, j2 = span
            ck = self._child(key, kind, cols[i1], cols[i2], rows[j1], rows[j2], share)
            return self.solve(ck, sub), ck

        def best(mask, room):
            # skip cells that only filler can cover
            while mask != full:
                low = ~mask & (mask + 1)
                cell = low.bit_length() - 1
                if cell_options(cell):
                    break
                mask |= low
            if mask == full:
                return Fraction(0)
            state = (mask, room)
            if state in memo:
                return memo[state][0]
            low = ~mask & (mask + 1)
            cell = low.bit_length() - 1
            top = best(mask | low, room)
            choice = None
            for bm, kind, span, payload in cell_options(cell):
                if bm & mask:
                    continue
                self.counters.box_options += 1
                if kind == LARGE:
                    if room is not None and room < 1:
                        continue
                    v = payload.weight + best(mask | bm, None if room is None else room - 1)
                    if v > top:
                        top, choice = v, (bm, kind, span, payload, None)
                    continue
                shares = [None] if room is None else range(1, room + 1)
                for share in shares:
                    cv, ck = child_value(kind, span, payload, share)
                    if cv == 0:
                        continue
                    v = cv + best(mask | bm, None if room is None else room - share)
                    if v > top:
                        top, choice = v, (bm, kind, span, ck, share)
            memo[state] = (top, choice)
            return top

        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 50000))
        value = best(0, lam)
        boxes = self._walk(memo, full, lam, nr, cols, rows, key, cell_options)
        return Entry(value, boxes)

    @staticmethod
    def _walk(memo, full, lam, nr, cols, rows, key, cell_options):
        """Replay the memo to list the winning boxes (filler cells omitted)."""
        boxes = []
        mask, room = 0, lam
        while True:
            while mask != full:
                low = ~mask & (mask + 1)
                if cell_options(low.bit_length() - 1):
                    break
                mask |= low
            if mask == full:
                return boxes
            low = ~mask & (mask + 1)
            entry = memo.get((mask, room))
            choice = None if entry is None else entry[1]
            if choice is None:
                mask |= low
                continue
            bm, kind, (i1, i2, j1, j2), payload, share = choice
            tb = TypedBox(kind, cols[i1] - key.x1, cols[i2] - key.x1,
                          rows[j1] - key.y1, rows[j2] - key.y1)
            boxes.append((tb, payload))
            mask |= bm
            if room is not None:
                room -= 1 if kind == LARGE else share

    # -- witnesses ------------------------------------------------------------

    def extract(self, key: SubproblemKey):
        """Rectangles realising ``solve(key)``; call :meth:`solve` first."""
        if key.budget == 0:
            return []
        entry = self.table.get(key)
        if entry is None:
            return []
        out = []
        for box, payload in entry.boxes:
            if payload is None:
                continue
            if box.kind == LARGE:
                out.append(payload)
            else:
                out.extend(self.extract(payload))
        return out


def subproblem_bound(grid_cap: int, n_rects: int, levels: int) -> int:
    """Upper bound on the number of non-empty keys a single solve may touch."""
    return 81 * grid_cap ** 4 * n_rects * levels ** 2


@dataclass
class SolveResult:
    """Outcome of :func:`eptas` or :func:`fpt` in original coordinates."""

    solution: list
    value: Fraction
    trial_values: list
    delta: Fraction
    epsilon: Fraction
    grid_cap: int
    grid_cap_overridden: bool
    counters: dict


def _run_trials(family, delta_user, eps_internal, trials, seed, grid_cap, budget):
    fam = list(family)
    by_id = {r.id: r for r in fam}
    if len(by_id) != len(fam):
        raise ContractError("rectangle ids must be unique")
    params = normalize_params(delta_user, eps_internal, fam)
    D = params.grid_dim if grid_cap is None else grid_cap
    if grid_cap is not None and grid_cap > params.grid_dim:
        raise ParameterError("the grid cap may only be lowered")
    best, best_val, values = [], Fraction(0), []
    totals = Counters()
    for i in range(trials):
        rng = random.Random(seed ^ i)
        sp = sparsify(fam, params, rng)
        root = root_subproblem(sp.grid, D, params.L)
        if budget is not None:
            root = root.with_budget(budget)
        dp = BoxDP(sp.snapped, sp.grid, D)
        value = dp.solve(root)
        picked = dp.extract(root)
        if dp.counters.keys_solved > subproblem_bound(D, len(sp.snapped), sp.grid.p):
            raise InvariantError("subproblem count exceeds its bound")
        chosen = [by_id[q.source_id] for q in picked]
        if total_weight(chosen) != value:
            raise InvariantError("extracted solution does not match the DP value")
        if not is_independent(shrink_all(chosen, params.delta)):
            raise InvariantError("shrunk solution is not independent")
        if budget is not None and len(chosen) > budget:
            raise InvariantError("budgeted solution exceeds its budget")
        values.append(value)
        for k, v in dp.counters.as_dict().items():
            if k == "max_depth":
                totals.max_depth = max(totals.max_depth, v)
            else:
                setattr(totals, k, getattr(totals, k) + v)
        if i == 0 or value > best_val:
            best, best_val = chosen, value
    return SolveResult(sorted(best, key=lambda r: r.id), best_val, values, params.delta,
                       params.epsilon, D, grid_cap is not None, totals.as_dict())


def eptas(family, delta_user, epsilon_user, trials: int = 7, seed: int = 0,
          grid_cap: int | None = None) -> SolveResult:
    """Best of ``trials`` runs of sparsify-then-solve.

    The accuracy parameter is divided by 40 before normalisation, so a
    single trial targets ``(1 - epsilon_user) * OPT``.
    """
    if trials < 1:
        raise ParameterError("need at least one trial")
    eps = to_fraction(epsilon_user)
    if not 0 < eps < 1:
        raise ParameterError(f"epsilon must lie strictly between 0 and 1, got {eps}")
    return _run_trials(family, delta_user, eps / 40, trials, seed, grid_cap, None)


def fpt(family, delta_user, k: int, trials: int = 7, seed: int = 0,
        grid_cap: int | None = None) -> SolveResult:
    """At most ``k`` rectangles with independent shrinkings, via the budgeted DP."""
    if k < 0:
        raise ParameterError("k must be non-negative")
    if trials < 1:
        raise ParameterError("need at least one trial")
    if k == 0:
        d = normalize_params(delta_user, Fraction(1, 2), ()).delta
        return SolveResult([], Fraction(0), [Fraction(0)] * trials, d, Fraction(0),
                           0, grid_cap is not None, Counters().as_dict())
    return _run_trials(family, delta_user, Fraction(1, 20 * k), trials, seed, grid_cap, k)


__all__ = [
    "SubproblemKey", "TypedBox", "BoxDP", "Entry", "Counters", "SolveResult",
    "LARGE", "HORIZONTAL", "VERTICAL", "SMALL", "KINDS",
    "area", "rects_in", "level_filter_check", "root_subproblem",
    "enumerate_partitions", "subproblem_bound", "eptas", "fpt",
]
