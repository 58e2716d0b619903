"""Kernels for independent sets of squares under shrinking.

Each kernel either finds ``k`` squares whose shrinkings are pairwise
disjoint, or returns a small subfamily ``Q`` such that the best ``k``
shrunk members of ``Q`` weigh at least as much as the best ``k``
independent members of the input.  The reported ``size_bound`` is a hard
limit on ``|Q|``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError, InputError, InvariantError
from .geom import (center, check_delta, contains, is_independent, linf_dist, shrink,
                   shrink_all, to_fraction)
from .graphkernel import greedy_is, intersection_graph, max_ball, reduce_weighted

CONTAINED, SHRUNK_DISJOINT, RATIO_SMALL = "contained", "shrunk-disjoint", "ratio-small"


@dataclass(frozen=True)
class CloseMapping:
    """``phi[id]`` is the id of the retained square that ``id`` is sent to."""

    phi: dict
    radius: Fraction


@dataclass(frozen=True)
class KernelResult:
    """Either a found solution (``found=True``) or a kernel family."""

    found: bool
    members: tuple
    mapping: CloseMapping | None = None
    size_bound: Fraction | None = None

    def __len__(self):
        return len(self.members)


def _side(r):
    if r.width != r.height:
        raise ContractError(f"{r.id!r} is not a square")
    return r.width


def _require_uniform_weight(family):
    if len({r.weight for r in family}) > 1:
        raise ContractError("this kernel needs all weights equal")


def _require_unit(family):
    sides = {_side(r) for r in family}
    if len(sides) > 1:
        raise ContractError("unit-square kernels need all side lengths equal")
    return sides.pop() if sides else Fraction(1)


def verify_distant(family, radius) -> bool:
    """True iff all centre pairs are at least ``radius`` apart in the max norm."""
    lam = to_fraction(radius)
    cs = [center(r) for r in family]
    return all(linf_dist(cs[i], cs[j]) >= lam
               for i in range(len(cs)) for j in range(i + 1, len(cs)))


def _cluster(family, radius, order_key):
    lam = to_fraction(radius)
    rest = sorted(family, key=order_key)
    kept, phi = [], {}
    while rest:
        head = rest[0]
        c = center(head)
        kept.append(head)
        nxt = []
        for r in rest:
            if linf_dist(center(r), c) < lam:
                phi[r.id] = head.id
            else:
                nxt.append(r)
        rest = nxt
    return kept, CloseMapping(phi, lam)


def cluster_by_weight(family, radius):
    """Greedy by decreasing weight; absorbs every centre closer than ``radius``."""
    fam = list(family)
    _require_unit(fam)
    return _cluster(fam, radius, lambda r: (-r.weight, r.id))


def cluster_by_size(family, radius):
    """Greedy by increasing side length on a family of equal weights."""
    fam = list(family)
    _require_uniform_weight(fam)
    for r in fam:
        _side(r)
    return _cluster(fam, radius, lambda r: (r.width, r.id))


def check_close(family, mapping: CloseMapping) -> bool:
    """Closeness conditions: no larger, no lighter, centre within the radius."""
    by_id = {r.id: r for r in family}
    for r in family:
        tgt = by_id[mapping.phi[r.id]]
        if mapping.phi[tgt.id] != tgt.id:
            return False
        if not (tgt.width <= r.width and tgt.weight >= r.weight
                and linf_dist(center(r), center(tgt)) <= mapping.radius):
            return False
    return True


def shrink_containment_check(family, mapping: CloseMapping, delta) -> bool:
    """True iff the shrinking of every image lies inside its preimage."""
    d = check_delta(delta)
    by_id = {r.id: r for r in family}
    return all(contains(r, shrink(by_id[mapping.phi[r.id]], d)) for r in family)


def _dichotomy_kernel(fam, kept, mapping, k, d, bound):
    shrunk = shrink_all(kept, d)
    g = intersection_graph(shrunk)
    if len(g) > k * max_ball(g, 1):
        picked = [kept[v] for v in greedy_is(g, k)]
        _assert_solution(picked, k, d)
        return KernelResult(True, tuple(picked), mapping, None)
    if len(kept) > bound:
        raise InvariantError(f"kernel of size {len(kept)} exceeds its bound {bound}")
    return KernelResult(False, tuple(kept), mapping, bound)


def _assert_solution(picked, k, d):
    if len(picked) != k or not is_independent(shrink_all(picked, d)):
        raise InvariantError("found solution is not k squares with disjoint shrinkings")


def kernel_unit_uniform(family, k: int, delta) -> KernelResult:
    """Equal squares, equal weights: bound ``16k / delta^2``."""
    d = check_delta(delta)
    fam = list(family)
    if k < 0:
        raise ContractError("k must be non-negative")
    side = _require_unit(fam)
    _require_uniform_weight(fam)
    bound = Fraction(16 * k) / d ** 2
    if k == 0:
        return KernelResult(False, (), None, bound)
    kept, mapping = cluster_by_weight(fam, d * side / 2)
    return _dichotomy_kernel(fam, kept, mapping, k, d, bound)


def kernel_unit_weighted(family, k: int, delta) -> KernelResult:
    """Equal squares, arbitrary weights: bound ``64k / delta^2``.

    The mapping returned is the clustering step's; the kernel is the part of
    its image that survives the radius-2 reduction.
    """
    d = check_delta(delta)
    fam = list(family)
    if k < 0:
        raise ContractError("k must be non-negative")
    side = _require_unit(fam)
    bound = Fraction(64 * k) / d ** 2
    if k == 0:
        return KernelResult(False, (), None, bound)
    kept, mapping = cluster_by_weight(fam, d * side / 2)
    g = intersection_graph(shrink_all(kept, d))
    survivors = tuple(kept[v] for v in reduce_weighted(g, k))
    if len(survivors) > bound:
        raise InvariantError(f"kernel of size {len(survivors)} exceeds its bound {bound}")
    return KernelResult(False, survivors, mapping, bound)


def kernel_bounded(family, k: int, delta, m1, m2) -> KernelResult:
    """Equal weights, sides in ``[m1, m2]``: bound ``16k/delta^2 * (m2/m1)^2``."""
    d = check_delta(delta)
    lo, hi = to_fraction(m1), to_fraction(m2)
    if not 1 <= lo <= hi:
        raise ContractError("need 1 <= m1 <= m2")
    if k < 0:
        raise ContractError("k must be non-negative")
    fam = list(family)
    for r in fam:
        if not lo <= _side(r) <= hi:
            raise InputError(f"{r.id!r} has side {r.width} outside [{lo}, {hi}]")
    _require_uniform_weight(fam)
    bound = Fraction(16 * k) / d ** 2 * (hi / lo) ** 2
    if k == 0:
        return KernelResult(False, (), None, bound)
    kept, mapping = cluster_by_size(fam, d * lo / 2)
    return _dichotomy_kernel(fam, kept, mapping, k, d, bound)


def remove_contained(family):
    """Drop every square that contains another one (identical copies keep the smallest id)."""
    fam = list(family)
    _require_uniform_weight(fam)
    out = []
    for r in fam:
        beaten = any(o is not r and contains(r, o)
                     and (o.corners != r.corners or o.id < r.id) for o in fam)
        if not beaten:
            out.append(r)
    return out


def size_dichotomy(small, big, delta) -> str:
    """Classify a pair with ``side(small) <= side(big)``.

    Returns the first of ``contained``, ``shrunk-disjoint`` and
    ``ratio-small`` that holds; at least one always does.
    """
    d = check_delta(delta)
    gi, gj = _side(small), _side(big)
    if gi > gj:
        raise ContractError("first square must not be larger than the second")
    if contains(big, small):
        return CONTAINED
    if not is_independent([shrink(small, d), shrink(big, d)]):
        if Fraction(gj) / gi < 2 / d:
            return RATIO_SMALL
        raise InvariantError(f"size dichotomy fails for {small.id!r}, {big.id!r}")
    return SHRUNK_DISJOINT


def level_of(side, delta) -> int:
    """The ``l >= 0`` with ``(1+delta)^l <= side < (1+delta)^(l+1)``."""
    d = to_fraction(delta)
    if d <= 0:
        raise ContractError("delta must be positive")
    g = to_fraction(side)
    if g < 1:
        raise ContractError("side length must be at least 1")
    lvl, nxt = 0, 1 + d
    while nxt <= g:
        lvl += 1
        nxt *= 1 + d
    return lvl


def gamma_int(delta) -> int:
    """Smallest ``m >= 1`` with ``(1+delta)^(m-1) >= 2/delta``."""
    d = to_fraction(delta)
    m, p = 1, Fraction(1)
    while p < 2 / d:
        m += 1
        p *= 1 + d
    return m


def ply_constant(delta) -> Fraction:
    """Soft ply bound ``(2*g + 1) * (4(1+delta)/delta)^2`` with ``(1+delta)^g >= 2/delta``."""
    d = to_fraction(delta)
    g = gamma_int(d) - 1
    return (2 * g + 1) * (4 * (1 + d) / d) ** 2


def kernel_arb_uniform(family, k: int, delta) -> KernelResult:
    """Equal weights, arbitrary sizes.

    Squares are grouped into levels ``[(1+delta)^l, (1+delta)^(l+1))``.  With
    many active levels one square from each of ``k`` well-separated levels is
    already a solution; otherwise each level is kernelised on its own.
    """
    d = check_delta(delta)
    if k < 0:
        raise ContractError("k must be non-negative")
    fam = list(family)
    _require_uniform_weight(fam)
    for r in fam:
        _side(r)
    gam = gamma_int(d)
    per_level = Fraction(16 * k) * (1 + d) ** 2 / d ** 2
    bound = gam * k * per_level
    if k == 0:
        return KernelResult(False, (), None, bound)
    reduced = remove_contained(fam)
    levels = {}
    for r in reduced:
        levels.setdefault(level_of(r.width, d), []).append(r)
    active = sorted(levels)
    if len(active) >= gam * k:
        picks, last = [], None
        for lv in active:
            if last is None or lv - last >= gam:
                picks.append(min(levels[lv], key=lambda r: r.id))
                last = lv
            if len(picks) == k:
                break
        if len(picks) < k:
            raise InvariantError("could not find k separated levels")
        _assert_solution(picks, k, d)
        return KernelResult(True, tuple(picks), None, None)
    union = []
    for lv in active:
        lo = (1 + d) ** lv
        res = kernel_bounded(levels[lv], k, d, lo, lo * (1 + d))
        if res.found:
            return res
        union.extend(res.members)
    if len(union) > bound:
        raise InvariantError(f"kernel of size {len(union)} exceeds its bound {bound}")
    return KernelResult(False, tuple(union), None, bound)


def ply(family) -> int:
    """Largest number of open rectangles sharing a point."""
    fam = list(family)
    if not fam:
        return 0
    xs = sorted({v for r in fam for v in (r.x1, r.x2)})
    ys = sorted({v for r in fam for v in (r.y1, r.y2)})
    best = 0
    for xa, xb in zip(xs, xs[1:]):
        mx = Fraction(xa + xb) / 2
        col = [r for r in fam if r.x1 < mx < r.x2]
        if len(col) <= best:
            continue
        for ya, yb in zip(ys, ys[1:]):
            my = Fraction(ya + yb) / 2
            best = max(best, sum(1 for r in col if r.y1 < my < r.y2))
    return best
