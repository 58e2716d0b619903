"""Intersection graphs and the two graph-level reductions used by the kernels."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError, InvariantError
from .geom import overlaps
from .oracle import mwis_k


@dataclass(frozen=True)
class IGraph:
    """Undirected graph on vertices ``0..n-1``.

    ``ids[v]`` and ``weights[v]`` describe vertex ``v`` and ``adj[v]`` is a
    sorted tuple of its neighbours.  ``items`` optionally keeps the objects
    the vertices stand for.
    """

    ids: tuple
    weights: tuple
    adj: tuple
    items: tuple = ()

    def __post_init__(self):
        for v, nb in enumerate(self.adj):
            if v in nb:
                raise ContractError(f"self-loop at vertex {v}")
            for u in nb:
                if v not in self.adj[u]:
                    raise ContractError(f"edge {v}-{u} is not symmetric")

    def __len__(self):
        return len(self.ids)

    @classmethod
    def from_edges(cls, n, edges, weights=None, ids=None):
        nb = [set() for _ in range(n)]
        for u, v in edges:
            if u != v:
                nb[u].add(v)
                nb[v].add(u)
        w = tuple(Fraction(x) for x in (weights or [1] * n))
        return cls(tuple(ids or range(n)), w, tuple(tuple(sorted(s)) for s in nb))

    def edges(self):
        return [(v, u) for v, nb in enumerate(self.adj) for u in nb if v < u]

    def induced(self, keep):
        """Subgraph on the vertex set ``keep``, renumbered in increasing order."""
        keep = sorted(keep)
        pos = {v: i for i, v in enumerate(keep)}
        adj = tuple(tuple(pos[u] for u in self.adj[v] if u in pos) for v in keep)
        items = tuple(self.items[v] for v in keep) if self.items else ()
        return IGraph(tuple(self.ids[v] for v in keep), tuple(self.weights[v] for v in keep),
                      adj, items)


def intersection_graph(family) -> IGraph:
    items = tuple(family)
    n = len(items)
    nb = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if overlaps(items[i], items[j]):
                nb[i].append(j)
                nb[j].append(i)
    return IGraph(tuple(r.id for r in items), tuple(r.weight for r in items),
                  tuple(tuple(x) for x in nb), items)


def closed_nbhd(graph: IGraph, v: int, radius: int, alive=None) -> set:
    """Vertices within ``radius`` hops of ``v``; ``alive`` restricts the graph."""
    seen = {v}
    frontier = deque([(v, 0)])
    while frontier:
        u, d = frontier.popleft()
        if d == radius:
            continue
        for x in graph.adj[u]:
            if x not in seen and (alive is None or x in alive):
                seen.add(x)
                frontier.append((x, d + 1))
    return seen


def max_ball(graph: IGraph, radius: int) -> int:
    return max((len(closed_nbhd(graph, v, radius)) for v in range(len(graph))), default=0)


def greedy_is(graph: IGraph, k: int) -> list:
    """``k`` pairwise non-adjacent vertices, taking the smallest id each round.

    Requires ``|V| > k * max_ball(graph, 1)``, which guarantees the greedy
    never runs out of vertices.
    """
    if k < 0:
        raise ContractError("k must be non-negative")
    if not len(graph) > k * max_ball(graph, 1):
        raise ContractError("greedy_is needs |V| > k * (max closed degree)")
    alive = set(range(len(graph)))
    out = []
    for _ in range(k):
        v = min(alive, key=lambda x: graph.ids[x])
        out.append(v)
        alive -= closed_nbhd(graph, v, 1)
    chosen = set(out)
    if len(out) != k or any(u in chosen for v in out for u in graph.adj[v]):
        raise InvariantError("greedy selection is not an independent k-set")
    return out


def reduce_weighted(graph: IGraph, k: int) -> list:
    """Vertices kept by ``k`` rounds of "take the heaviest, delete its radius-2 ball".

    Returns the sorted vertex list of ``G'``: everything deleted in some
    round.  Once the graph is empty the remaining rounds repeat the last
    pick, which deletes nothing new.
    """
    if k < 0:
        raise ContractError("k must be non-negative")
    alive = set(range(len(graph)))
    for _ in range(k):
        if not alive:
            break
        v = min(alive, key=lambda x: (-graph.weights[x], graph.ids[x]))
        alive -= closed_nbhd(graph, v, 2, alive)
    kept = sorted(set(range(len(graph))) - alive)
    if len(kept) > k * max_ball(graph, 2):
        raise InvariantError("reduced graph exceeds k * (radius-2 ball size)")
    return kept


def graph_opt_k(graph: IGraph, k: int):
    """Best weight of at most ``k`` independent vertices (brute force)."""
    masks = []
    for nb in graph.adj:
        m = 0
        for u in nb:
            m |= 1 << u
        masks.append(m)
    return mwis_k(list(graph.weights), masks, list(graph.ids), k)
