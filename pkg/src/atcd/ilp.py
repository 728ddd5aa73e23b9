"""Exact 0/1 programming backend for DAG-shaped attack trees.

The encoding gives every node a binary variable: a gate may be 1 only if
its children allow it (y_g <= y_w for each AND child, y_g <= sum of
children for OR), cost sums over BAS variables and damage over all
variables.  Setting every gate to the reach value of the chosen steps is
always feasible and never lowers damage, so optimizing over the encoding
solves the attack problems on arbitrary DAGs, where the bottom-up engine
does not apply.

Attribute arithmetic is exact: decimal attribute spellings are scaled by
10**6 onto an integer grid (rejecting more than six fractional digits) and
all solver arithmetic is unbounded-integer.  The solver itself is a small
depth-first branch-and-bound over BAS variables with reach-monotone damage
and cost bounds; the Pareto front is recovered by alternating
max-damage/min-cost solves while stepping the cost budget just below the
last optimum (one grid unit at a time).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from decimal import Decimal

from .errors import (
    BudgetExceeded,
    InfeasibleDamageThreshold,
    NonFiniteAttribute,
    TooLarge,
    UnscalableAttribute,
)
from .model import Attack, AttackTree, NodeKind

SCALE = 10**6
DEFAULT_NODE_LIMIT = 10**8
NODE_LIMIT_ENV = "ATCD_BB_NODE_LIMIT"

__all__ = [
    "SCALE",
    "IlpModel",
    "SolveResult",
    "encode_bilp",
    "with_bounds",
    "solve_single",
    "dgc_dag",
    "cgd_dag",
    "cdpf_dag",
    "export_lp",
]


@dataclass(frozen=True)
class IlpModel:
    """Scaled-integer 0/1 model of one attack tree.

    ``cost`` and ``damage`` are per-node coefficients on the 10**6 grid
    (cost is zero on gates).  ``and_rows`` holds (gate, child) pairs meaning
    y_gate <= y_child; ``or_rows`` holds (gate, children) meaning
    y_gate <= sum(children).  ``max_cost`` / ``min_damage`` are optional
    scaled side constraints on the two objective rows.
    """

    tree: AttackTree
    cost: tuple[int, ...]
    damage: tuple[int, ...]
    and_rows: tuple[tuple[int, int], ...]
    or_rows: tuple[tuple[int, tuple[int, ...]], ...]
    max_cost: int | None = None
    min_damage: int | None = None


@dataclass(frozen=True)
class SolveResult:
    status: str                            # "optimal" or "infeasible"
    assignment: tuple[int, ...] | None     # y over all nodes, document order
    cost: float | None
    damage: float | None
    cost_scaled: int | None
    damage_scaled: int | None
    explored: int


def _scaled_int(text: str, node_id: str, field: str) -> int:
    value = Decimal(text) * SCALE
    whole = int(value)
    if value != whole:
        raise UnscalableAttribute(
            f"node {node_id!r}: {field} {text} has more than six fractional digits"
        )
    return whole


def encode_bilp(tree: AttackTree) -> IlpModel:
    """Encode a validated tree; works for treelike and DAG-shaped inputs."""
    if len(tree.nodes) > 65536:
        raise TooLarge(f"{len(tree.nodes)} variables; the encoder accepts at most 65536")
    cost: list[int] = []
    damage: list[int] = []
    and_rows: list[tuple[int, int]] = []
    or_rows: list[tuple[int, tuple[int, ...]]] = []
    for v, node in enumerate(tree.nodes):
        if not math.isfinite(node.damage) or (
            node.cost is not None and not math.isfinite(node.cost)
        ):
            raise NonFiniteAttribute(f"node {node.id!r} has a non-finite attribute")
        damage.append(_scaled_int(node.damage_text, node.id, "damage"))
        if node.kind is NodeKind.BAS:
            cost.append(_scaled_int(node.cost_text, node.id, "cost"))
        else:
            cost.append(0)
            if node.kind is NodeKind.AND:
                and_rows.extend((v, w) for w in node.children)
            else:
                or_rows.append((v, node.children))
    return IlpModel(tree, tuple(cost), tuple(damage), tuple(and_rows), tuple(or_rows))


def _scale_bound(value, rounding: str) -> int:
    dec = Decimal(str(value)) * SCALE
    return int(dec.to_integral_value(rounding="ROUND_FLOOR" if rounding == "floor" else "ROUND_CEILING"))


def with_bounds(model: IlpModel, max_cost: float | None = None,
                min_damage: float | None = None) -> IlpModel:
    """Copy of the model with unscaled side constraints attached: a cost
    ceiling rounds down onto the integer grid, a damage floor rounds up, so
    the feasible attack set is unchanged."""
    updates: dict = {}
    if max_cost is not None and max_cost != math.inf:
        updates["max_cost"] = _scale_bound(max_cost, "floor")
    if min_damage is not None:
        updates["min_damage"] = _scale_bound(min_damage, "ceil")
    return replace(model, **updates) if updates else model


def _node_limit(node_limit: int | None) -> int:
    if node_limit is not None:
        return node_limit
    return int(os.environ.get(NODE_LIMIT_ENV, DEFAULT_NODE_LIMIT))


def _branch_order(model: IlpModel) -> list[int]:
    """BAS attack-vector positions, most damage-dense first.

    A step's pull is the damage of everything at or above it (all nodes that
    can only fire once it does, plus itself) relative to its cost; ties fall
    back to document order.  Any order is correct, this one just finds good
    incumbents early.
    """
    tree = model.tree
    parents: list[list[int]] = [[] for _ in tree.nodes]
    for i, node in enumerate(tree.nodes):
        for w in node.children:
            parents[w].append(i)
    scores: list[tuple[float, int]] = []
    for pos, v in enumerate(tree.bas):
        seen = {v}
        queue = [v]
        while queue:
            u = queue.pop()
            for w in parents[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        pull = sum(model.damage[u] for u in seen)
        scores.append((-pull / (model.cost[v] + SCALE), pos))
    scores.sort()
    return [pos for _, pos in scores]


class _Evaluator:
    """Scaled damage of the reach closure of a BAS subset (given as a bitmask
    over attack-vector positions)."""

    def __init__(self, model: IlpModel):
        tree = model.tree
        self.topo = tree.topo
        self.kinds = [n.kind for n in tree.nodes]
        self.children = [n.children for n in tree.nodes]
        self.damage = model.damage
        self.bit_of = {v: pos for pos, v in enumerate(tree.bas)}
        self.n_nodes = len(tree.nodes)

    def reach(self, mask: int) -> list[bool]:
        vals = [False] * self.n_nodes
        bit_of = self.bit_of
        kinds = self.kinds
        children = self.children
        for v in self.topo:
            kind = kinds[v]
            if kind is NodeKind.BAS:
                vals[v] = bool(mask >> bit_of[v] & 1)
            elif kind is NodeKind.OR:
                vals[v] = any(vals[w] for w in children[v])
            else:
                vals[v] = all(vals[w] for w in children[v])
        return vals

    def damage_of(self, mask: int) -> int:
        vals = self.reach(mask)
        damage = self.damage
        return sum(damage[v] for v in range(self.n_nodes) if vals[v] and damage[v])


def solve_single(model: IlpModel, objective: str, node_limit: int | None = None) -> SolveResult:
    """Prove one single-objective optimum of the encoded model.

    ``objective`` is "cost" (minimize total cost) or "neg_damage" (maximize
    total damage); side constraints of the model apply either way.  Branches
    over BAS variables only, with gates set greedily to the reach closure,
    which is always optimal.  Raises BudgetExceeded past the node limit
    (ATCD_BB_NODE_LIMIT overrides the default of 10**8 explored nodes).
    """
    if objective not in ("cost", "neg_damage"):
        raise ValueError("objective must be 'cost' or 'neg_damage'")
    limit = _node_limit(node_limit)
    tree = model.tree
    order = _branch_order(model)
    n = len(order)
    ev = _Evaluator(model)
    bas_cost = [model.cost[tree.bas[pos]] for pos in order]
    tail_cost = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        tail_cost[i] = tail_cost[i + 1] + bas_cost[i]
    tail_mask = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        tail_mask[i] = tail_mask[i + 1] | (1 << order[i])

    max_cost = model.max_cost
    min_damage = model.min_damage
    best_mask: int | None = None
    best_cost = 0
    best_damage = 0
    explored = 0

    if not (max_cost is not None and max_cost < 0):
        root_hi = ev.damage_of(tail_mask[0])
        if objective == "cost":
            # state: (depth, ones mask, cost of ones, damage of ones, damage upper bound)
            stack = [(0, 0, 0, 0, root_hi)]
            while stack:
                depth, ones, cost1, dlo, dhi = stack.pop()
                explored += 1
                if explored > limit:
                    raise BudgetExceeded(f"branch-and-bound exceeded {limit} nodes")
                if min_damage is not None and dhi < min_damage:
                    continue
                if best_mask is not None and cost1 >= best_cost:
                    continue
                if min_damage is None or dlo >= min_damage:
                    best_mask, best_cost, best_damage = ones, cost1, dlo
                    continue
                if depth == n:
                    continue
                pos = order[depth]
                take_cost = cost1 + bas_cost[depth]
                if max_cost is None or take_cost <= max_cost:
                    taken = ones | (1 << pos)
                    stack.append((depth + 1, taken, take_cost, ev.damage_of(taken), dhi))
                rest = ones | tail_mask[depth + 1]
                stack.append((depth + 1, ones, cost1, dlo, ev.damage_of(rest)))
        else:
            # state: (depth, ones mask, cost of ones, damage of ones + undecided)
            stack = [(0, 0, 0, root_hi)]
            while stack:
                depth, ones, cost1, dhi = stack.pop()
                explored += 1
                if explored > limit:
                    raise BudgetExceeded(f"branch-and-bound exceeded {limit} nodes")
                if min_damage is not None and dhi < min_damage:
                    continue
                if best_mask is not None and dhi <= best_damage:
                    continue
                take_all = cost1 + tail_cost[depth]
                if max_cost is None or take_all <= max_cost:
                    best_mask, best_cost, best_damage = ones | tail_mask[depth], take_all, dhi
                    continue
                if depth == n:
                    continue
                pos = order[depth]
                rest = ones | tail_mask[depth + 1]
                stack.append((depth + 1, ones, cost1, ev.damage_of(rest)))
                take_cost = cost1 + bas_cost[depth]
                if max_cost is None or take_cost <= max_cost:
                    stack.append((depth + 1, ones | (1 << pos), take_cost, dhi))

    if best_mask is None:
        return SolveResult("infeasible", None, None, None, None, None, explored)
    reached = ev.reach(best_mask)
    assignment = tuple(1 if r else 0 for r in reached)
    return SolveResult(
        "optimal",
        assignment,
        best_cost / SCALE,
        best_damage / SCALE,
        best_cost,
        best_damage,
        explored,
    )


def _attack_of(model: IlpModel, result: SolveResult) -> Attack:
    return tuple(result.assignment[v] for v in model.tree.bas)


def dgc_dag(tree: AttackTree, budget: float, node_limit: int | None = None) -> tuple[float, Attack]:
    """Maximum damage within ``budget`` on an arbitrary DAG, with witness."""
    if budget < 0:
        raise ValueError("budget must be >= 0")
    model = encode_bilp(tree)
    result = solve_single(with_bounds(model, max_cost=budget), "neg_damage", node_limit)
    return result.damage, _attack_of(model, result)


def cgd_dag(tree: AttackTree, threshold: float, node_limit: int | None = None) -> tuple[float, Attack]:
    """Minimum cost reaching damage ``threshold`` on an arbitrary DAG, with witness."""
    model = encode_bilp(tree)
    result = solve_single(with_bounds(model, min_damage=threshold), "cost", node_limit)
    if result.status != "optimal":
        raise InfeasibleDamageThreshold(f"no attack does damage >= {threshold}")
    return result.cost, _attack_of(model, result)


def cdpf_dag(tree: AttackTree, node_limit: int | None = None) -> list[tuple]:
    """Cost-damage Pareto front of an arbitrary DAG.

    Alternates a max-damage solve under a shrinking cost cap with a min-cost
    solve at the damage just proven, emitting one front point per round; the
    cap then steps one scaled unit below the point's cost.  Terminates after
    at most one round per distinct attack cost.
    """
    model = encode_bilp(tree)
    points: list[tuple[int, int]] = []
    cap: int | None = None
    while True:
        probe = solve_single(replace(model, max_cost=cap), "neg_damage", node_limit)
        if probe.status != "optimal":
            break
        cheapest = solve_single(
            replace(model, min_damage=probe.damage_scaled), "cost", node_limit
        )
        points.append((cheapest.cost_scaled, probe.damage_scaled))
        if cheapest.cost_scaled == 0:
            break
        cap = cheapest.cost_scaled - 1
    if not points or points[-1][0] > 0:
        points.append((0, 0))
    return [(c / SCALE, d / SCALE) for c, d in reversed(points)]


def _lp_names(tree: AttackTree) -> list[str]:
    names: list[str] = []
    taken: set[str] = set()
    for node in tree.nodes:
        safe = "".join(ch if ch.isalnum() or ch == "_" else "_" for ch in node.id)
        name = f"y_{safe}"
        k = 2
        while name in taken:
            name = f"y_{safe}_{k}"
            k += 1
        taken.add(name)
        names.append(name)
    return names


def _coeff_text(scaled: int) -> str:
    text = format(Decimal(scaled) / SCALE, "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text or "0"


def _lp_sum(terms: list[tuple[int, str]]) -> str:
    """Render a linear expression from (scaled coefficient, variable) terms."""
    parts: list[str] = []
    for coeff, name in terms:
        if coeff == 0:
            continue
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        body = name if mag == SCALE else f"{_coeff_text(mag)} {name}"
        if not parts:
            parts.append(body if sign == "+" else f"- {body}")
        else:
            parts.append(f"{sign} {body}")
    if not parts:
        return f"0 {terms[0][1]}" if terms else "0"
    return " ".join(parts)


def export_lp(model: IlpModel, objective: str = "neg_damage") -> str:
    """Serialize the model to CPLEX LP format.

    Variables are named y_<node id> (non-alphanumeric characters mapped to
    underscores, deduplicated in document order); constraint rows keep
    document order too, so output is reproducible byte for byte.
    """
    if objective not in ("cost", "neg_damage"):
        raise ValueError("objective must be 'cost' or 'neg_damage'")
    tree = model.tree
    names = _lp_names(tree)
    if objective == "cost":
        obj_terms = [(model.cost[v], names[v]) for v in tree.bas]
    else:
        obj_terms = [
            (-model.damage[v], names[v])
            for v in range(len(tree.nodes))
            if model.damage[v]
        ]
        if not obj_terms:
            obj_terms = [(0, names[0])]

    rows: list[str] = []
    k = 0
    for v, node in enumerate(tree.nodes):
        if node.kind is NodeKind.AND:
            for w in node.children:
                k += 1
                rows.append(f" c{k}: {names[v]} - {names[w]} <= 0")
        elif node.kind is NodeKind.OR:
            k += 1
            gathered = " - ".join(names[w] for w in node.children)
            rows.append(f" c{k}: {names[v]} - {gathered} <= 0")
    if model.max_cost is not None:
        cost_terms = [(model.cost[v], names[v]) for v in tree.bas if model.cost[v]]
        rows.append(f" budget: {_lp_sum(cost_terms)} <= {_coeff_text(model.max_cost)}")
    if model.min_damage is not None:
        dmg_terms = [
            (model.damage[v], names[v]) for v in range(len(tree.nodes)) if model.damage[v]
        ]
        rows.append(f" damage: {_lp_sum(dmg_terms)} >= {_coeff_text(model.min_damage)}")

    lines = ["\\ 0/1 encoding of an attack tree cost-damage model", "Minimize"]
    lines.append(f" obj: {_lp_sum(obj_terms)}")
    if rows:
        lines.append("Subject To")
        lines.extend(rows)
    lines.append("Bounds")
    lines.append("Binary")
    for start in range(0, len(names), 10):
        lines.append(" " + " ".join(names[start : start + 10]))
    lines.append("End")
    return "\n".join(lines) + "\n"
