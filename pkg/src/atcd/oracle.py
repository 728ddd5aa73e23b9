"""Brute-force reference analyses.

Everything here enumerates attacks (and, for the probabilistic queries,
their actualizations) directly from the definitions, with no front algebra
and no branch-and-bound, so results can be trusted as ground truth when
cross-checking the fast engines.  Guards refuse instance sizes where
enumeration stops being a sane idea.

Attack vectors are mapped to integers little-endian: bit i of the integer
is the i-th BAS in document order.
"""

from __future__ import annotations

import numpy as np

from . import pareto
from .errors import InfeasibleDamageThreshold, TooManyActiveBas, TooManyBas
from .model import Attack, AttackTree, NodeKind, total_damage

MAX_ENUM_BAS = 24
MAX_PROB_BAS = 14
_CHUNK = 1 << 16

__all__ = [
    "MAX_ENUM_BAS",
    "MAX_PROB_BAS",
    "cdpf_enum",
    "dgc_enum",
    "cgd_enum",
    "distribution",
    "expected_damage_enum",
    "cedpf_enum",
]


def _chunk_cost_damage(tree: AttackTree, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Total cost and damage of every attack index in [lo, hi)."""
    idx = np.arange(lo, hi, dtype=np.int64)
    cost = np.zeros(len(idx))
    damage = np.zeros(len(idx))
    cols: list[np.ndarray | None] = [None] * len(tree.nodes)
    pos = tree.bas_pos
    for v in tree.topo:
        node = tree.nodes[v]
        if node.kind is NodeKind.BAS:
            col = (idx >> pos[v] & 1).astype(bool)
            if node.cost:
                cost += node.cost * col
        else:
            children = node.children
            col = cols[children[0]].copy()
            if node.kind is NodeKind.OR:
                for w in children[1:]:
                    col |= cols[w]
            else:
                for w in children[1:]:
                    col &= cols[w]
        cols[v] = col
        if node.damage:
            damage += node.damage * col
    return cost, damage


def _chunk_front(cost: np.ndarray, damage: np.ndarray) -> list[tuple[float, float]]:
    """Pareto-minimal (cost, damage) pairs of one enumerated chunk."""
    order = np.lexsort((-damage, cost))
    d = damage[order]
    run = np.maximum.accumulate(d)
    keep = np.ones(len(d), dtype=bool)
    keep[1:] = d[1:] > run[:-1]
    c = cost[order]
    return list(zip(c[keep].tolist(), d[keep].tolist()))


def _guard(tree: AttackTree, limit: int, exc) -> int:
    n = len(tree.bas)
    if n > limit:
        raise exc(f"{n} basic attack steps; enumeration accepts at most {limit}")
    return n


def cdpf_enum(tree: AttackTree) -> list[tuple]:
    """Cost-damage Pareto front by enumerating all 2^|BAS| attacks."""
    n = _guard(tree, MAX_ENUM_BAS, TooManyBas)
    total = 1 << n
    candidates: list[tuple[float, float]] = []
    for lo in range(0, total, _CHUNK):
        cost, damage = _chunk_cost_damage(tree, lo, min(lo + _CHUNK, total))
        candidates.extend(_chunk_front(cost, damage))
    return pareto.merge_close(pareto.pareto_min_pairs(candidates))


def dgc_enum(tree: AttackTree, budget: float) -> float:
    """Maximum damage with cost at most ``budget``, by full enumeration."""
    if budget < 0:
        raise ValueError("budget must be >= 0")
    n = _guard(tree, MAX_ENUM_BAS, TooManyBas)
    total = 1 << n
    best = 0.0
    for lo in range(0, total, _CHUNK):
        cost, damage = _chunk_cost_damage(tree, lo, min(lo + _CHUNK, total))
        ok = cost <= budget
        if ok.any():
            best = max(best, float(damage[ok].max()))
    return best


def cgd_enum(tree: AttackTree, threshold: float) -> float:
    """Minimum cost reaching damage ``threshold``, by full enumeration."""
    n = _guard(tree, MAX_ENUM_BAS, TooManyBas)
    total = 1 << n
    best = None
    for lo in range(0, total, _CHUNK):
        cost, damage = _chunk_cost_damage(tree, lo, min(lo + _CHUNK, total))
        ok = damage >= threshold
        if ok.any():
            c = float(cost[ok].min())
            best = c if best is None else min(best, c)
    if best is None:
        raise InfeasibleDamageThreshold(f"no attack does damage >= {threshold}")
    return best


def _actualizations(tree: AttackTree, attack: Attack) -> list[tuple[int, float]]:
    """(submask, probability) pairs of the attack's actualization, zero-probability
    outcomes dropped."""
    active = [i for i, bit in enumerate(attack) if bit]
    if len(active) > MAX_ENUM_BAS:
        raise TooManyActiveBas(
            f"{len(active)} active steps; actualization enumeration accepts at most {MAX_ENUM_BAS}"
        )
    entries: list[tuple[int, float]] = [(0, 1.0)]
    for i in active:
        p = tree.prob_of(tree.bas[i])
        bit = 1 << i
        nxt: list[tuple[int, float]] = []
        for mask, q in entries:
            if q * (1.0 - p):
                nxt.append((mask, q * (1.0 - p)))
            if q * p:
                nxt.append((mask | bit, q * p))
        entries = nxt
    return entries


def distribution(tree: AttackTree, attack: Attack) -> list[tuple[Attack, float]]:
    """Support of the actualized attack: which steps actually succeed, with
    what probability.  Succeeding steps are always a subset of the chosen
    ones; unchosen steps never fire."""
    n = len(tree.bas)
    if len(attack) != n:
        raise ValueError(f"attack has {len(attack)} bits, tree has {n} BASs")
    return [
        (tuple(mask >> i & 1 for i in range(n)), q)
        for mask, q in _actualizations(tree, attack)
    ]


def expected_damage_enum(tree: AttackTree, attack: Attack) -> float:
    """Expected damage of an attack: the damage of every possible outcome of
    the chosen steps, weighted by its probability."""
    return float(
        sum(q * total_damage(tree, bits) for bits, q in distribution(tree, attack))
    )


def cedpf_enum(tree: AttackTree) -> list[tuple]:
    """Cost vs expected-damage Pareto front by enumerating every attack and
    every actualization outcome (3^|BAS| work in total)."""
    n = _guard(tree, MAX_PROB_BAS, TooManyBas)
    total = 1 << n
    cost, dhat = _chunk_cost_damage(tree, 0, total)
    points: list[tuple[float, float]] = []
    for x in range(total):
        attack = tuple(x >> i & 1 for i in range(n))
        expected = sum(q * dhat[mask] for mask, q in _actualizations(tree, attack))
        points.append((float(cost[x]), float(expected)))
    return pareto.merge_close(pareto.pareto_min_pairs(points))
