"""Reference constructions tying the analyses to known problems.

from_knapsack embeds a 0/1 knapsack instance as a depth-one AND tree, which
is what makes budgeted damage maximization NP-hard even on trees.
realize_monotone builds, for any nondecreasing set function f with
f(empty) = 0, a DAG-shaped tree whose damage function is exactly f, showing
that DAG damage functions are exactly the monotone ones.
exponential_pf_instance produces a family whose Pareto front has 2^n
points, so no output-insensitive algorithm can stay polynomial.
"""

from __future__ import annotations

from typing import Sequence

from .errors import (
    LengthMismatch,
    NegativeCoefficient,
    NotMonotone,
    OutOfRange,
    TooLarge,
)
from .model import AttackTree, parse_and_validate


def from_knapsack(values: Sequence, weights: Sequence) -> AttackTree:
    """Tree whose damage function is sum(values[i] * x_i) and whose cost
    function is sum(weights[i] * x_i): one BAS per item (damage = value,
    cost = weight) under a zero-damage AND root."""
    if len(values) != len(weights):
        raise LengthMismatch(f"{len(values)} values vs {len(weights)} weights")
    if not values:
        raise LengthMismatch("need at least one item")
    if any(v < 0 for v in values) or any(w < 0 for w in weights):
        raise NegativeCoefficient("knapsack coefficients must be >= 0")
    nodes = [
        {"id": f"v{i + 1}", "type": "BAS", "cost": w, "damage": v}
        for i, (v, w) in enumerate(zip(values, weights))
    ]
    nodes.append({"id": "R", "type": "AND", "children": [n["id"] for n in nodes]})
    return parse_and_validate({"nodes": nodes})


def _popcount(x: int) -> int:
    return bin(x).count("1")


def realize_monotone(table: Sequence) -> AttackTree:
    """DAG-shaped tree whose total damage equals the given set function.

    ``table`` lists f over all subsets of n ground elements, indexed by the
    little-endian subset bitmask; f must be nondecreasing with f(empty) = 0,
    and n is capped at 4 (the construction has a node per subset).

    Subsets are laid out in an order compatible with both f and inclusion.
    Each nonempty subset gets an AND over its elements; position j in the
    order gets an OR over all ANDs from j onward carrying the f-increment at
    j, so an attack collects exactly the increments up to the largest
    reached position, summing to f.  The last OR would have a single child
    and is folded into its AND.  BAS costs are zero; only damage matters.
    """
    size = len(table)
    n = size.bit_length() - 1
    if size < 2 or (1 << n) != size:
        raise LengthMismatch(f"table length {size} is not 2^n for n >= 1")
    if n > 4:
        raise TooLarge(f"{n} ground elements; the construction accepts at most 4")
    if table[0] != 0:
        raise NotMonotone("f(empty set) must be 0")
    for x in range(size):
        for i in range(n):
            if not x >> i & 1 and table[x] > table[x | 1 << i]:
                raise NotMonotone("f must be nondecreasing under set inclusion")

    order = sorted(range(size), key=lambda x: (table[x], _popcount(x), x))
    nodes: list[dict] = [
        {"id": f"x{i}", "type": "BAS", "cost": 0} for i in range(n)
    ]
    and_specs: dict[int, dict] = {}
    for x in order[1:]:
        spec = {
            "id": f"A{x}",
            "type": "AND",
            "children": [f"x{i}" for i in range(n) if x >> i & 1],
        }
        and_specs[x] = spec
        nodes.append(spec)
    root_children: list[str] = []
    for j in range(1, size):
        increment = table[order[j]] - table[order[j - 1]]
        if j == size - 1:
            # single-child OR folded away: the increment rides on the AND itself
            and_specs[order[j]]["damage"] = increment
            root_children.append(and_specs[order[j]]["id"])
        else:
            oid = f"O{j}"
            nodes.append(
                {
                    "id": oid,
                    "type": "OR",
                    "children": [and_specs[x]["id"] for x in order[j:]],
                    "damage": increment,
                }
            )
            root_children.append(oid)
    nodes.append({"id": "R", "type": "AND", "children": root_children})
    return parse_and_validate({"nodes": nodes})


def exponential_pf_instance(n: int) -> AttackTree:
    """OR of n BASs with cost = damage = 2^i: every subset hits a distinct
    (k, k) point, so the Pareto front has all 2^n of them."""
    if not 1 <= n <= 20:
        raise OutOfRange(f"n must be in 1..20, got {n}")
    nodes = [
        {"id": f"v{i}", "type": "BAS", "cost": 1 << i, "damage": 1 << i}
        for i in range(n)
    ]
    nodes.append({"id": "R", "type": "OR", "children": [s["id"] for s in nodes]})
    return parse_and_validate({"nodes": nodes})
