"""Regenerate tests/data/frozen.json from solvers that share no code with the package.

* unbudgeted optima: networkx maximum-weight clique on the complement graph
* budgeted optima: plain scan over all subsets of size <= k
* partition counts: every tiling of the grid by rectangles, times the
  number of kinds each tile may take

Instances are drawn here and written out in full, so the tests never depend
on the package's own generators staying stable.

    python tools/freeze_values.py
"""

import itertools
import json
import random
from pathlib import Path

import networkx as nx

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "frozen.json"


def overlap(a, b):
    return max(a[0], b[0]) < min(a[2], b[2]) and max(a[1], b[1]) < min(a[3], b[3])


def optimum(boxes, weights):
    g = nx.Graph()
    g.add_nodes_from((i, {"w": w}) for i, w in enumerate(weights))
    g.add_edges_from((i, j) for i, j in itertools.combinations(range(len(boxes)), 2)
                     if not overlap(boxes[i], boxes[j]))
    if not boxes:
        return 0
    _, val = nx.max_weight_clique(g, weight="w")
    return val


def optimum_k(boxes, weights, k):
    best = 0
    for size in range(1, min(k, len(boxes)) + 1):
        for pick in itertools.combinations(range(len(boxes)), size):
            if all(not overlap(boxes[i], boxes[j]) for i, j in itertools.combinations(pick, 2)):
                best = max(best, sum(weights[i] for i in pick))
    return best


def rect_cases(rng, count):
    cases = []
    for _ in range(count):
        n = rng.randint(0, 13)
        C = rng.choice([10, 20, 40])
        boxes, weights = [], []
        for _ in range(n):
            x, y = rng.randint(0, C), rng.randint(0, C)
            boxes.append((x, y, x + rng.randint(1, 12), y + rng.randint(1, 12)))
            weights.append(rng.randint(1, 9))
        cases.append({"rects": [[i, *b, w] for i, (b, w) in enumerate(zip(boxes, weights))],
                      "opt": optimum(boxes, weights),
                      "opt_k": [optimum_k(boxes, weights, k) for k in (1, 2, 3)]})
    return cases


def snapped_cases(rng, count):
    """Members of vertical level s span 2..ratio level-s columns (1.. on level 1)
    inside one level-(s+1) column, and the same on the other axis."""
    cases = []
    for _ in range(count):
        ratio, levels = rng.choice([2, 3, 4]), rng.randint(1, 3)
        units = [ratio ** i for i in range(levels)]
        a = rng.randrange(units[-1])
        z1 = (0 - a) // units[-1]

        def span(level):
            w = rng.randint(1 if level == 1 else 2, ratio)
            if level == levels:
                st = z1 + rng.randint(0, ratio - w)
            else:
                scale = ratio ** (levels - level - 1)
                outer = rng.randrange(z1 * scale, (z1 + ratio) * scale)
                st = outer * ratio + rng.randint(0, ratio - w)
            u = units[level - 1]
            return a + st * u, a + (st + w) * u

        members, boxes, weights = [], [], []
        for i in range(rng.randint(1, 12)):
            s, t = rng.randint(1, levels), rng.randint(1, levels)
            (x1, x2), (y1, y2) = span(s), span(t)
            w = rng.randint(1, 9)
            members.append([i, x1, y1, x2, y2, w, s, t])
            boxes.append((x1, y1, x2, y2))
            weights.append(w)
        cases.append({"ratio": ratio, "levels": levels, "a": a, "members": members,
                      "opt": optimum(boxes, weights),
                      "opt_k": [optimum_k(boxes, weights, k) for k in (1, 2, 3)]})
    return cases


def tilings(x, y):
    tiles = [(c1, c2, r1, r2) for c1 in range(x) for c2 in range(c1 + 1, x + 1)
             for r1 in range(y) for r2 in range(r1 + 1, y + 1)]
    cells = {(i, j) for i in range(x) for j in range(y)}

    def go(free):
        if not free:
            yield []
            return
        i, j = min(free)
        for t in tiles:
            if t[0] == i and t[2] == j:
                cover = {(a, b) for a in range(t[0], t[1]) for b in range(t[2], t[3])}
                if cover <= free:
                    for rest in go(free - cover):
                        yield [t, *rest]

    yield from go(frozenset(cells))


def kinds(tile):
    w, h = tile[1] - tile[0], tile[3] - tile[2]
    if w == h == 1:
        return 4
    return 2 if w == 1 or h == 1 else 1


def partition_count(x, y):
    total = 0
    for tiling in tilings(x, y):
        prod = 1
        for t in tiling:
            prod *= kinds(t)
        total += prod
    return total


def main():
    rng = random.Random(20240611)
    data = {
        "rect_cases": rect_cases(rng, 40),
        "snapped_cases": snapped_cases(rng, 40),
        "partition_counts": [[x, y, partition_count(x, y)]
                             for x, y in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1),
                                          (1, 3), (3, 2), (2, 3), (4, 1)]],
    }
    OUT.write_text(json.dumps(data, indent=1) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
