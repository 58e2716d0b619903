"""Brute-force ground truth for small instances.

Two independent solvers live here.  :func:`opt_exact` is a branch and bound
over the intersection graph and :func:`opt_k_exact` enumerates small
independent sets; :func:`opt_exhaustive` scans every subset and exists only
to cross-check the other two.

Witness rule: members of weight zero never change the optimum, so they are
left out; among the remaining optimal sets the one whose sorted id tuple is
lexicographically smallest is reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError, ResourceError
from .geom import overlaps


@dataclass(frozen=True)
class OracleConfig:
    max_n: int = 24
    max_k: int = 4

    def __post_init__(self):
        if self.max_n < 1 or self.max_k < 1:
            raise ContractError("oracle caps must be positive")


DEFAULT_CONFIG = OracleConfig()


def _adjacency(family):
    n = len(family)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if overlaps(family[i], family[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def _prepare(weights, adj, keys):
    """Drop zero-weight vertices and sort the rest by key."""
    order = sorted((i for i, w in enumerate(weights) if w > 0), key=lambda i: keys[i])
    pos = {v: p for p, v in enumerate(order)}
    w = [weights[v] for v in order]
    a = []
    for v in order:
        m = 0
        rest = adj[v]
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            rest ^= low
            if u in pos:
                m |= 1 << pos[u]
        a.append(m)
    return order, w, a


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mwis_bnb(weights, adj, keys):
    """Maximum weight independent set on a graph given by bitmask adjacency.

    Returns ``(value, sorted list of vertex indices)``.
    """
    order, w, a = _prepare(weights, adj, keys)
    n = len(order)
    best = [Fraction(0), ()]

    def wsum(mask):
        return sum((w[i] for i in _bits(mask)), Fraction(0))

    def better(val, chosen):
        if val != best[0]:
            return val > best[0]
        return chosen < best[1]

    def go(cand, val, chosen_mask):
        if not cand:
            chosen = tuple(_bits(chosen_mask))
            if better(val, chosen):
                best[0], best[1] = val, chosen
            return
        if val + wsum(cand) < best[0]:
            return
        pick, pick_deg = -1, -1
        for v in _bits(cand):
            d = bin(a[v] & cand).count("1")
            if d > pick_deg:
                pick, pick_deg = v, d
        if pick_deg == 0:
            go(0, val + wsum(cand), chosen_mask | cand)
            return
        go(cand & ~a[pick] & ~(1 << pick), val + w[pick], chosen_mask | (1 << pick))
        go(cand & ~(1 << pick), val, chosen_mask)

    go((1 << n) - 1, Fraction(0), 0)
    return best[0], sorted(order[i] for i in best[1])


def mwis_k(weights, adj, keys, k):
    """Best independent set with at most ``k`` members, by pruned enumeration."""
    if k < 0:
        raise ContractError("k must be non-negative")
    order, w, a = _prepare(weights, adj, keys)
    n = len(order)
    best = [Fraction(0), ()]

    def go(start, cand, val, chosen, room):
        if val > best[0]:
            best[0], best[1] = val, chosen
        if room == 0:
            return
        rest = sorted((w[i] for i in _bits(cand) if i >= start), reverse=True)
        if val + sum(rest[:room], Fraction(0)) <= best[0]:
            return
        for v in range(start, n):
            if cand >> v & 1:
                go(v + 1, cand & ~a[v], val + w[v], chosen + (v,), room - 1)

    go(0, (1 << n) - 1, Fraction(0), (), k)
    return best[0], sorted(order[i] for i in best[1])


def mwis_exhaustive(weights, adj, keys, k=None):
    """Scan all subsets.  Slow on purpose: it is the check on the checkers."""
    order, w, a = _prepare(weights, adj, keys)
    n = len(order)
    best_val, best_set = Fraction(0), ()
    for mask in range(1, 1 << n):
        members = tuple(_bits(mask))
        if k is not None and len(members) > k:
            continue
        if any(a[v] & mask for v in members):
            continue
        val = sum((w[v] for v in members), Fraction(0))
        if val > best_val or (val == best_val and members < best_set):
            best_val, best_set = val, members
    return best_val, sorted(order[i] for i in best_set)


def _family_call(family, solver, *extra):
    items = list(family)
    weights = [r.weight for r in items]
    keys = [r.id for r in items]
    value, idx = solver(weights, _adjacency(items), keys, *extra)
    return value, [items[i] for i in idx]


def opt_exact(family, config: OracleConfig = DEFAULT_CONFIG):
    """Maximum weight of an independent subfamily, with a witness."""
    items = list(family)
    if len(items) > config.max_n:
        raise ResourceError(f"oracle cap exceeded: n={len(items)} > max_n={config.max_n}")
    return _family_call(items, mwis_bnb)


def opt_k_exact(family, k: int, config: OracleConfig = DEFAULT_CONFIG):
    """Maximum weight of an independent subfamily with at most ``k`` members."""
    items = list(family)
    if k < 0:
        raise ContractError("k must be non-negative")
    if len(items) > config.max_n and k > config.max_k:
        raise ResourceError(
            f"oracle caps exceeded: n={len(items)} > {config.max_n} and k={k} > {config.max_k}")
    if k >= len(items) and len(items) <= config.max_n:
        return _family_call(items, mwis_bnb)
    return _family_call(items, mwis_k, k)


def opt_exhaustive(family, k=None, limit: int = 20):
    items = list(family)
    if len(items) > limit:
        raise ResourceError(f"exhaustive scan limited to n <= {limit}")
    return _family_call(items, mwis_exhaustive, k)
