"""Pareto domains for cost-damage analysis.

Points are (cost, damage, reach) triples: reach is a 0/1 int in the
deterministic domain and a probability in [0, 1] in the probabilistic one.
A point dominates another when it costs no more, does at least as much
damage, and reaches at least as surely; fronts keep the non-dominated
points, sorted by cost ascending, damage descending, reach descending.

The gate combinators pair every point of one operand with every point of
the other: costs and damages add, the reach bits combine by AND/OR (their
probabilistic counterparts: product and inclusion-exclusion), and the
gate's own damage is earned in proportion to the combined reach.
Minimization, cost filtering and the combinators obey the usual exchange
identities (filtering or minimizing an operand early changes nothing),
which is what makes the bottom-up engine correct.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from typing import Iterable, Sequence

from .model import NodeKind

Triple = tuple[float, float, float]

CLOSE_TOL = 1e-9


def dominates(p: Sequence[float], q: Sequence[float]) -> bool:
    """Strict Pareto improvement: p at least ties q everywhere, beats it somewhere."""
    return (
        p[0] <= q[0]
        and all(a >= b for a, b in zip(p[1:], q[1:]))
        and tuple(p) != tuple(q)
    )


def or_star(p: float, q: float) -> float:
    """Probability that at least one of two independent events happens.

    A certain operand must stay certain: p + q - p*q rounds 1 + q down to
    1 - ulp for most fractional q, and a sure reach that drifts below 1 no
    longer dominates its reach ties, bloating fronts with noise points.
    """
    if p == 1:
        return p
    if q == 1:
        return q
    return p + q - p * q


def and_point(a: Triple, b: Triple, gate_damage: float = 0.0) -> Triple:
    """Combine two triples below an AND gate carrying ``gate_damage``."""
    r = a[2] * b[2]
    return (a[0] + b[0], a[1] + b[1] + r * gate_damage, r)


def or_point(a: Triple, b: Triple, gate_damage: float = 0.0) -> Triple:
    """Combine two triples below an OR gate carrying ``gate_damage``."""
    r = or_star(a[2], b[2])
    return (a[0] + b[0], a[1] + b[1] + r * gate_damage, r)


def and_set(xs: Iterable[Triple], ys: Iterable[Triple], gate_damage: float = 0.0) -> set[Triple]:
    ys = list(ys)
    return {and_point(x, y, gate_damage) for x in xs for y in ys}


def or_set(xs: Iterable[Triple], ys: Iterable[Triple], gate_damage: float = 0.0) -> set[Triple]:
    ys = list(ys)
    return {or_point(x, y, gate_damage) for x in xs for y in ys}


def cost_filter(points: Iterable, budget: float) -> list:
    """Drop every point costing more than ``budget``."""
    return [p for p in points if p[0] <= budget]


def minimal_pair_indices(points: Sequence) -> list[int]:
    """Indices of the Pareto-minimal (cost, damage) pairs, in front order.

    Exact sweep: sort by cost ascending / damage descending, keep a point
    iff it strictly raises the best damage seen so far.  Ties keep the
    earliest input occurrence.
    """
    order = sorted(range(len(points)), key=lambda i: (points[i][0], -points[i][1], i))
    kept: list[int] = []
    best = -math.inf
    for i in order:
        if points[i][1] > best:
            kept.append(i)
            best = points[i][1]
    return kept


def pareto_min_pairs(points: Iterable) -> list:
    pts = list(points)
    return [pts[i] for i in minimal_pair_indices(pts)]


def minimal_triple_indices(points: Sequence) -> list[int]:
    """Indices of the Pareto-minimal triples, in front order.

    Sweep in (cost asc, damage desc, reach desc) order while maintaining the
    staircase of maximal (damage, reach) pairs already kept: a new point is
    dominated iff some staircase entry ties or beats it in both coordinates.
    Exact arithmetic-free comparisons; duplicates keep the earliest index.
    """
    order = sorted(
        range(len(points)),
        key=lambda i: (points[i][0], -points[i][1], -points[i][2], i),
    )
    kept: list[int] = []
    ds: list[float] = []  # staircase damages, ascending
    rs: list[float] = []  # matching reaches, descending
    last = None
    for i in order:
        c, d, r = points[i][0], points[i][1], points[i][2]
        if (c, d, r) == last:
            continue
        last = (c, d, r)
        pos = bisect_left(ds, d)
        if pos < len(ds) and rs[pos] >= r:
            continue
        kept.append(i)
        hi = pos + 1 if pos < len(ds) and ds[pos] == d else pos
        lo = pos
        while lo > 0 and rs[lo - 1] <= r:
            lo -= 1
        ds[lo:hi] = [d]
        rs[lo:hi] = [r]
    return kept


def pareto_min(points: Iterable[Triple]) -> list[Triple]:
    """Pareto-minimal subset of a set of triples (exact, sorted front order)."""
    pts = list(points)
    return [pts[i] for i in minimal_triple_indices(pts)]


def _merge_indices(points: Sequence, kept: list[int], tol: float) -> list[int]:
    """Collapse runs of near-identical front points (every coordinate within
    ``tol``), keeping the lexicographically smallest representative."""
    out: list[int] = []
    anchor = None
    for i in kept:
        p = tuple(points[i])
        if anchor is not None and all(abs(a - b) < tol for a, b in zip(anchor, p)):
            if p < tuple(points[out[-1]]):
                out[-1] = i
            continue
        anchor = p
        out.append(i)
    return out


def merge_close(points: Iterable, tol: float = CLOSE_TOL) -> list:
    """Fuzzy dedup of an already sorted front."""
    pts = list(points)
    return [pts[i] for i in _merge_indices(pts, list(range(len(pts))), tol)]


def m_u_indices(points: Sequence, budget: float = math.inf, tol: float = CLOSE_TOL) -> list[int]:
    """Indices surviving the engine's per-node front reduction:
    cost filter, exact Pareto minimization, then fuzzy dedup."""
    affordable = [i for i in range(len(points)) if points[i][0] <= budget]
    sub = [points[i] for i in affordable]
    kept = [affordable[i] for i in minimal_triple_indices(sub)]
    return _merge_indices(points, kept, tol)


def m_u(points: Sequence[Triple], budget: float = math.inf) -> list[Triple]:
    """Front reduction used at every node of the bottom-up engine."""
    return [points[i] for i in m_u_indices(points, budget)]


def _kind(kind) -> NodeKind:
    return NodeKind(kind) if not isinstance(kind, NodeKind) else kind


def combine_det(kind, left: Sequence[Triple], right: Sequence[Triple],
                gate_damage: float = 0.0, budget: float = math.inf) -> list[Triple]:
    """Front of a two-child gate from its children's deterministic fronts.

    Reach values are 0/1 ints; the gate's damage is earned exactly when the
    combined reach bit is set.
    """
    fn = and_point if _kind(kind) is NodeKind.AND else or_point
    cand = [fn(a, b, gate_damage) for a in left for b in right]
    return m_u(cand, budget)


def combine_prob(kind, left: Sequence[Triple], right: Sequence[Triple],
                 gate_damage: float = 0.0, budget: float = math.inf) -> list[Triple]:
    """Probabilistic counterpart of combine_det; on 0/1 reach values the two
    agree exactly."""
    return combine_det(kind, left, right, gate_damage, budget)
