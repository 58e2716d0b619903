"""Text instance files, solution files and seeded generators.

Instance file::

    # comments and blank lines are ignored
    shrink-mwisr-instance 1 rectangles
    a 0 0 4 4 1
    b 2 1 7 3 5/2

Each record is ``id x1 y1 x2 y2 weight``.  Coordinates are integers;
weights may be integers, decimals or ``p/q`` fractions.  The kind is one of
``rectangles``, ``squares`` or ``unit-squares``.  A solution file is a
``shrink-mwisr-solution 1`` header followed by one id per line.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .geom import Rect, to_fraction

FORMAT_VERSION = 1
KINDS = ("rectangles", "squares", "unit-squares")
INSTANCE_TAG = "shrink-mwisr-instance"
SOLUTION_TAG = "shrink-mwisr-solution"


@dataclass(frozen=True)
class Instance:
    kind: str
    rects: tuple

    def __post_init__(self):
        object.__setattr__(self, "rects", tuple(self.rects))
        validate(self)

    def by_id(self):
        return {r.id: r for r in self.rects}


def validate(inst: Instance) -> None:
    if inst.kind not in KINDS:
        raise InputError(f"unknown kind {inst.kind!r}; expected one of {', '.join(KINDS)}")
    seen = set()
    for r in inst.rects:
        if r.id in seen:
            raise InputError(f"duplicate id {r.id!r}")
        seen.add(r.id)
        if inst.kind != "rectangles" and r.width != r.height:
            raise InputError(f"{r.id!r} is not a square")
    if inst.kind == "unit-squares" and len({r.width for r in inst.rects}) > 1:
        raise InputError("unit-squares instance has more than one side length")


def _fmt_num(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _normalise_ids(raw):
    try:
        return [int(x) for x in raw]
    except ValueError:
        return list(raw)


def render(inst: Instance) -> str:
    lines = [f"{INSTANCE_TAG} {FORMAT_VERSION} {inst.kind}"]
    for r in inst.rects:
        lines.append(f"{r.id} {r.x1} {r.y1} {r.x2} {r.y2} {_fmt_num(r.weight)}")
    return "\n".join(lines) + "\n"


def _content_lines(text):
    for no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def parse(text: str) -> Instance:
    rows = list(_content_lines(text))
    if not rows:
        raise InputError("empty instance file")
    no, head = rows[0]
    if len(head) != 3 or head[0] != INSTANCE_TAG:
        raise InputError(f"line {no}: expected '{INSTANCE_TAG} <version> <kind>'")
    if head[1] != str(FORMAT_VERSION):
        raise InputError(f"line {no}: unsupported format version {head[1]}")
    raw_ids, recs = [], []
    for no, fields in rows[1:]:
        if len(fields) != 6:
            raise InputError(f"line {no}: expected 6 fields, found {len(fields)}")
        try:
            coords = [int(v) for v in fields[1:5]]
        except ValueError as exc:
            raise InputError(f"line {no}: coordinates must be integers") from exc
        raw_ids.append(fields[0])
        recs.append((coords, fields[5], no))
    ids = _normalise_ids(raw_ids)
    rects = []
    for rid, (c, w, no) in zip(ids, recs):
        try:
            rects.append(Rect(rid, c[0], c[1], c[2], c[3], to_fraction(w)))
        except InputError as exc:
            raise InputError(f"line {no}: {exc}") from exc
    return Instance(head[2], rects)


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write_instance(path, inst: Instance) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render(inst))


def render_solution(ids) -> str:
    return "\n".join([f"{SOLUTION_TAG} {FORMAT_VERSION}", *map(str, ids)]) + "\n"


def parse_solution(text: str) -> list:
    rows = list(_content_lines(text))
    if not rows or rows[0][1][:1] != [SOLUTION_TAG]:
        raise InputError(f"solution file must start with '{SOLUTION_TAG} {FORMAT_VERSION}'")
    ids = []
    for no, fields in rows[1:]:
        if len(fields) != 1:
            raise InputError(f"line {no}: expected a single id")
        ids.append(fields[0])
    return _normalise_ids(ids)


# -- generators ---------------------------------------------------------------

def random_instance(rng: random.Random, n: int, kind: str = "rectangles", coord: int = 100,
                    sizes=(1, 20), weights=(1, 10)) -> Instance:
    """Uniform positions and sizes inside ``[0, coord]``; integer weights."""
    if n < 0 or coord < 1:
        raise InputError("need n >= 0 and a positive coordinate range")
    lo, hi = sizes
    if not 1 <= lo <= hi:
        raise InputError("size range must satisfy 1 <= lo <= hi")
    unit = rng.randint(lo, hi)
    rects = []
    for i in range(n):
        w = unit if kind == "unit-squares" else rng.randint(lo, hi)
        h = w if kind != "rectangles" else rng.randint(lo, hi)
        x = rng.randint(0, max(0, coord - w))
        y = rng.randint(0, max(0, coord - h))
        rects.append(Rect(i, x, y, x + w, y + h, rng.randint(*weights)))
    return Instance(kind, rects)


def clustered_unit_squares(rng: random.Random, n: int, clusters: int, side: int = 8,
                           spread: int = 3, coord: int = 200, weights=(1, 1)) -> Instance:
    """Unit squares whose corners jitter around a few cluster centres."""
    if clusters < 1:
        raise InputError("need at least one cluster")
    centres = [(rng.randint(0, coord), rng.randint(0, coord)) for _ in range(clusters)]
    rects = []
    for i in range(n):
        cx, cy = rng.choice(centres)
        x = cx + rng.randint(-spread, spread)
        y = cy + rng.randint(-spread, spread)
        rects.append(Rect(i, x, y, x + side, y + side, rng.randint(*weights)))
    return Instance("unit-squares", rects)


def geometric_squares(levels: int, delta, gap: int = 1) -> Instance:
    """One square on each of ``levels`` distinct size classes, laid out side by side.

    Side lengths are the smallest integers landing in consecutive classes
    ``[(1+delta)^l, (1+delta)^(l+1))`` that integers can reach.
    """
    from .squareskernel import level_of

    d = to_fraction(delta)
    sides, seen, lv = [], set(), 0
    while len(sides) < levels:
        s = math.ceil((1 + d) ** lv)
        cls = level_of(s, d)
        if cls not in seen:
            seen.add(cls)
            sides.append(s)
        lv += 1
    rects, x = [], 0
    for i, s in enumerate(sides):
        rects.append(Rect(i, x, 0, x + s, s, 1))
        x += s + gap
    return Instance("squares", rects)
