"""Attack tree data model.

An attack tree is a rooted DAG whose leaves are basic attack steps (BAS) and
whose internal nodes are AND/OR gates.  Every node carries a damage value,
every BAS carries a cost and optionally a success probability.  An attack is
a subset of the BASs, encoded as a 0/1 tuple in document order.  The reach
(structure) function says which nodes an attack activates; cost sums over the
chosen steps, damage sums over every reached node, whether or not the root is
among them.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from decimal import Decimal
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    CycleDetected,
    DanglingChildRef,
    DuplicateId,
    InternalBAS,
    KeyIsNotGate,
    LeafGate,
    MissingCost,
    MultipleRoots,
    NegativeAttribute,
    NoRoot,
    NotTreelike,
    ProbOutOfRange,
    ValidationError,
)

Attack = tuple[int, ...]


class NodeKind(enum.Enum):
    BAS = "BAS"
    AND = "AND"
    OR = "OR"


@dataclass(frozen=True)
class Node:
    """One tree node.  ``children`` holds node indices (gates only); ``cost``
    and ``prob`` are set on BASs only.  The ``*_text`` fields keep the exact
    decimal source spelling so downstream integer scaling stays exact."""

    id: str
    kind: NodeKind
    children: tuple[int, ...]
    cost: float | None
    damage: float
    prob: float | None
    cost_text: str | None = None
    damage_text: str = "0"


@dataclass(frozen=True)
class AttackTree:
    nodes: tuple[Node, ...]
    root: int

    @cached_property
    def index_of(self) -> dict[str, int]:
        return {n.id: i for i, n in enumerate(self.nodes)}

    @cached_property
    def bas(self) -> tuple[int, ...]:
        """Node indices of the basic attack steps, in document order."""
        return tuple(i for i, n in enumerate(self.nodes) if n.kind is NodeKind.BAS)

    @cached_property
    def bas_pos(self) -> dict[int, int]:
        """Node index -> position of that BAS in an attack vector."""
        return {v: k for k, v in enumerate(self.bas)}

    @cached_property
    def parent_count(self) -> tuple[int, ...]:
        count = [0] * len(self.nodes)
        for n in self.nodes:
            for w in n.children:
                count[w] += 1
        return tuple(count)

    @cached_property
    def treelike(self) -> bool:
        """True when no node is shared between two parents."""
        return all(c <= 1 for c in self.parent_count)

    @cached_property
    def topo(self) -> tuple[int, ...]:
        """Node indices ordered so children always precede parents."""
        parents: list[list[int]] = [[] for _ in self.nodes]
        for i, n in enumerate(self.nodes):
            for w in n.children:
                parents[w].append(i)
        missing = [len(n.children) for n in self.nodes]
        order = [i for i, m in enumerate(missing) if m == 0]
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            for u in parents[v]:
                missing[u] -= 1
                if missing[u] == 0:
                    order.append(u)
        return tuple(order)

    @cached_property
    def has_probs(self) -> bool:
        return any(self.nodes[v].prob is not None for v in self.bas)

    def prob_of(self, v: int) -> float:
        """Success probability of BAS ``v``; 1.0 when the tree has none."""
        p = self.nodes[v].prob
        return 1.0 if p is None else p

    def bas_ids(self) -> tuple[str, ...]:
        return tuple(self.nodes[v].id for v in self.bas)


_ALLOWED_KEYS = {"id", "type", "children", "cost", "damage", "prob"}


def _number(value, field: str, node_id: str) -> tuple[float, str]:
    """Return (float value, exact decimal text) for a JSON number."""
    if isinstance(value, bool) or not isinstance(value, (int, float, Decimal)):
        raise ValidationError(f"node {node_id!r}: {field} must be a number")
    if isinstance(value, int):
        return float(value), str(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise ValidationError(f"node {node_id!r}: {field} must be finite")
        return float(value), str(value)
    if not math.isfinite(value):
        raise ValidationError(f"node {node_id!r}: {field} must be finite")
    return value, repr(value)


def parse_and_validate(document: Mapping) -> AttackTree:
    """Build an AttackTree from a document of the bundled JSON schema.

    Checks well-formedness (unique ids, resolvable child references, gates
    with children, leaves that are BASs, required cost, attribute ranges),
    acyclicity, and single-rootedness.  Numbers may be int, float or Decimal;
    decimal spellings are retained verbatim.
    """
    if not isinstance(document, Mapping) or "nodes" not in document:
        raise ValidationError("document must be an object with a 'nodes' list")
    specs = document["nodes"]
    if not isinstance(specs, Sequence) or isinstance(specs, (str, bytes)):
        raise ValidationError("'nodes' must be a list of node objects")

    ids: list[str] = []
    seen: set[str] = set()
    for spec in specs:
        if not isinstance(spec, Mapping):
            raise ValidationError("each node must be an object")
        nid = spec.get("id")
        if not isinstance(nid, str) or not nid:
            raise ValidationError("every node needs a non-empty string 'id'")
        if nid in seen:
            raise DuplicateId(f"node id {nid!r} appears more than once")
        seen.add(nid)
        ids.append(nid)
    if not ids:
        raise NoRoot("document contains no nodes")
    index = {nid: i for i, nid in enumerate(ids)}

    nodes: list[Node] = []
    for spec, nid in zip(specs, ids):
        extra = set(spec) - _ALLOWED_KEYS
        if extra:
            raise ValidationError(f"node {nid!r}: unknown keys {sorted(extra)}")
        kind_text = spec.get("type")
        try:
            kind = NodeKind(kind_text)
        except ValueError:
            raise ValidationError(
                f"node {nid!r}: type must be one of BAS, AND, OR, got {kind_text!r}"
            ) from None

        raw_children = spec.get("children", [])
        if not isinstance(raw_children, Sequence) or isinstance(raw_children, (str, bytes)):
            raise ValidationError(f"node {nid!r}: children must be a list of ids")
        children: list[int] = []
        for ref in raw_children:
            if ref not in index:
                raise DanglingChildRef(f"node {nid!r} references undefined node {ref!r}")
            children.append(index[ref])
        if len(set(children)) != len(children):
            raise ValidationError(f"node {nid!r}: duplicate child reference")

        damage, damage_text = 0.0, "0"
        if "damage" in spec:
            damage, damage_text = _number(spec["damage"], "damage", nid)
            if damage < 0:
                raise NegativeAttribute(f"node {nid!r}: damage must be >= 0")

        if kind is NodeKind.BAS:
            if children:
                raise InternalBAS(f"BAS {nid!r} must not have children")
            if "cost" not in spec:
                raise MissingCost(f"BAS {nid!r} has no cost")
            cost, cost_text = _number(spec["cost"], "cost", nid)
            if cost < 0:
                raise NegativeAttribute(f"node {nid!r}: cost must be >= 0")
            prob = None
            if "prob" in spec:
                prob, _ = _number(spec["prob"], "prob", nid)
                if not 0.0 <= prob <= 1.0:
                    raise ProbOutOfRange(f"BAS {nid!r}: prob must lie in [0, 1]")
            nodes.append(Node(nid, kind, (), cost, damage, prob, cost_text, damage_text))
        else:
            if "cost" in spec:
                raise ValidationError(f"gate {nid!r} must not carry a cost")
            if "prob" in spec:
                raise ValidationError(f"gate {nid!r} must not carry a prob")
            if not children:
                raise LeafGate(f"gate {nid!r} has no children")
            nodes.append(Node(nid, kind, tuple(children), None, damage, None, None, damage_text))

    bas_with_prob = [n for n in nodes if n.kind is NodeKind.BAS and n.prob is not None]
    if bas_with_prob and len(bas_with_prob) != sum(
        1 for n in nodes if n.kind is NodeKind.BAS
    ):
        raise ValidationError("prob must be set on every BAS or on none")

    # cycle check: peel nodes whose children are all peeled
    missing = [len(n.children) for n in nodes]
    parents: list[list[int]] = [[] for _ in nodes]
    for i, n in enumerate(nodes):
        for w in n.children:
            parents[w].append(i)
    queue = [i for i, m in enumerate(missing) if m == 0]
    done = 0
    while queue:
        v = queue.pop()
        done += 1
        for u in parents[v]:
            missing[u] -= 1
            if missing[u] == 0:
                queue.append(u)
    if done != len(nodes):
        bad = [nodes[i].id for i, m in enumerate(missing) if m > 0]
        raise CycleDetected(f"cycle through nodes {bad}")

    roots = [i for i, ps in enumerate(parents) if not ps]
    if not roots:
        raise NoRoot("no root node found")
    if len(roots) > 1:
        raise MultipleRoots(f"multiple roots: {[nodes[i].id for i in roots]}")

    return AttackTree(tuple(nodes), roots[0])


def load_tree(path) -> AttackTree:
    """Read a tree document from a JSON file, keeping decimal spellings."""
    with open(path, "r", encoding="utf-8") as fh:
        document = json.load(fh, parse_float=Decimal)
    return parse_and_validate(document)


def _plain_number(text: str):
    value = float(text)
    return int(value) if value.is_integer() and abs(value) < 2**53 else value


def to_document(tree: AttackTree) -> dict:
    """Serialize back to the JSON schema accepted by parse_and_validate."""
    out = []
    for node in tree.nodes:
        spec: dict = {"id": node.id, "type": node.kind.value}
        if node.kind is not NodeKind.BAS:
            spec["children"] = [tree.nodes[w].id for w in node.children]
        else:
            spec["cost"] = _plain_number(node.cost_text)
            if node.prob is not None:
                spec["prob"] = node.prob
        if node.damage != 0:
            spec["damage"] = _plain_number(node.damage_text)
        out.append(spec)
    return {"nodes": out}


def save_tree(tree: AttackTree, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_document(tree), fh, indent=2)
        fh.write("\n")


def _check_attack(tree: AttackTree, attack: Sequence[int]) -> None:
    if len(attack) != len(tree.bas):
        raise ValueError(
            f"attack has {len(attack)} bits, tree has {len(tree.bas)} BASs"
        )


def attack_from_ids(tree: AttackTree, ids: Iterable[str]) -> Attack:
    """Attack vector activating exactly the named BASs."""
    want = set(ids)
    known = {tree.nodes[v].id for v in tree.bas}
    unknown = want - known
    if unknown:
        raise ValueError(f"not a BAS id: {sorted(unknown)}")
    return tuple(1 if tree.nodes[v].id in want else 0 for v in tree.bas)


def attack_ids(tree: AttackTree, attack: Sequence[int]) -> list[str]:
    """Ids of the BASs activated by an attack vector, in document order."""
    _check_attack(tree, attack)
    return [tree.nodes[v].id for v, bit in zip(tree.bas, attack) if bit]


def reach(tree: AttackTree, attack: Sequence[int]) -> tuple[bool, ...]:
    """Reach value of every node under ``attack``.

    One bottom-up pass over the DAG, so each node is evaluated exactly once
    even when it is shared by many parents.
    """
    _check_attack(tree, attack)
    vals = [False] * len(tree.nodes)
    pos = tree.bas_pos
    for v in tree.topo:
        node = tree.nodes[v]
        if node.kind is NodeKind.BAS:
            vals[v] = bool(attack[pos[v]])
        elif node.kind is NodeKind.OR:
            vals[v] = any(vals[w] for w in node.children)
        else:
            vals[v] = all(vals[w] for w in node.children)
    return tuple(vals)


def _node_index(tree: AttackTree, node) -> int:
    if isinstance(node, str):
        try:
            return tree.index_of[node]
        except KeyError:
            raise ValueError(f"unknown node id {node!r}") from None
    return node


def structure(tree: AttackTree, attack: Sequence[int], node) -> bool:
    """Does ``attack`` reach ``node`` (index or id)?"""
    return reach(tree, attack)[_node_index(tree, node)]


def total_cost(tree: AttackTree, attack: Sequence[int]) -> float:
    """Sum of the costs of the activated BASs."""
    _check_attack(tree, attack)
    return float(sum(tree.nodes[v].cost for v, bit in zip(tree.bas, attack) if bit))


def total_damage(tree: AttackTree, attack: Sequence[int]) -> float:
    """Sum of the damage of every node the attack reaches."""
    reached = reach(tree, attack)
    return float(sum(n.damage for n, r in zip(tree.nodes, reached) if r and n.damage))


def prob_structure(tree: AttackTree, attack: Sequence[int], node) -> float:
    """Probability that the actualization of ``attack`` reaches ``node``.

    Treelike trees only: independence of sibling subtrees lets the value be
    computed by one bottom-up pass (product at AND, inclusion-exclusion at
    OR).  Trees without prob annotations behave as if every prob were 1.
    """
    if not tree.treelike:
        raise NotTreelike("prob_structure requires a treelike attack tree")
    _check_attack(tree, attack)
    vals = [0.0] * len(tree.nodes)
    pos = tree.bas_pos
    for v in tree.topo:
        nd = tree.nodes[v]
        if nd.kind is NodeKind.BAS:
            vals[v] = tree.prob_of(v) if attack[pos[v]] else 0.0
        elif nd.kind is NodeKind.AND:
            p = 1.0
            for w in nd.children:
                p *= vals[w]
            vals[v] = p
        else:
            p = 0.0
            for w in nd.children:
                p = p + vals[w] - p * vals[w]
            vals[v] = p
    return vals[_node_index(tree, node)]


def _dec(text: str) -> Decimal:
    return Decimal(text)


def binarize(tree: AttackTree) -> AttackTree:
    """Equivalent tree whose gates all have exactly two children.

    Single-child gates are collapsed into their child (the gate's damage
    moves onto the child); wider gates become right-leaning chains of
    two-child gates of the same kind, with the original node keeping its
    damage and the fresh chain nodes carrying none.  Cost, damage and reach
    of every surviving node are preserved for every attack.
    """
    kinds = [n.kind for n in tree.nodes]

    # collapse unary gates: map each node to its survivor, push damage down
    target: dict[int, int] = {}
    extra: dict[int, Decimal] = {}

    def resolve(v: int) -> int:
        chain = []
        while kinds[v] is not NodeKind.BAS and len(tree.nodes[v].children) == 1:
            chain.append(v)
            if v in target:
                v = target[v]
                break
            v = tree.nodes[v].children[0]
        for u in chain:
            target[u] = v
        return v

    for v in range(len(tree.nodes)):
        final = resolve(v)
        if final != v:
            extra[final] = extra.get(final, Decimal(0)) + _dec(tree.nodes[v].damage_text)

    survivors = [v for v in range(len(tree.nodes)) if resolve(v) == v]
    remap = {v: i for i, v in enumerate(survivors)}

    new_nodes: list[Node] = []
    used_ids = {tree.nodes[v].id for v in survivors}
    pending: list[tuple[int, list[int]]] = []  # (new index of gate, child new-indices)
    for v in survivors:
        node = tree.nodes[v]
        damage_text = node.damage_text
        damage = node.damage
        if v in extra and extra[v]:
            total = _dec(damage_text) + extra[v]
            damage_text = str(total)
            damage = float(total)
        children = [remap[resolve(w)] for w in node.children]
        if node.kind is not NodeKind.BAS and len(children) > 2:
            pending.append((len(new_nodes), children))
            children = []
        new_nodes.append(replace(node, children=tuple(children),
                                 damage=damage, damage_text=damage_text))

    for gate_idx, children in pending:
        gate = new_nodes[gate_idx]
        # right-leaning chain: gate keeps the first child, fresh nodes take the rest
        tail = children[-2:]
        links: list[int] = []
        for k in range(len(children) - 2, 0, -1):
            name = f"{gate.id}#{k}"
            while name in used_ids:
                name += "x"
            used_ids.add(name)
            new_nodes.append(Node(name, gate.kind, tuple(tail), None, 0.0, None, None, "0"))
            links.append(len(new_nodes) - 1)
            tail = [children[k - 1], len(new_nodes) - 1]
        new_nodes[gate_idx] = replace(gate, children=(children[0], links[-1]))

    return AttackTree(tuple(new_nodes), remap[resolve(tree.root)])


def with_internal_costs(tree: AttackTree, extra_costs: Mapping) -> AttackTree:
    """Model costs on AND gates by adding a zero-damage BAS child per gate.

    ``extra_costs`` maps AND-gate ids (or indices) to a cost.  Reaching such
    a gate then requires paying its cost through the fresh child, which
    changes no damage value and no reach of the original nodes.
    """
    resolved: list[tuple[int, float, str]] = []
    for key, value in extra_costs.items():
        v = _node_index(tree, key)
        if tree.nodes[v].kind is not NodeKind.AND:
            raise KeyIsNotGate(f"node {tree.nodes[v].id!r} is not an AND gate")
        cost, cost_text = _number(value, "cost", tree.nodes[v].id)
        if cost < 0:
            raise NegativeAttribute(f"extra cost for {tree.nodes[v].id!r} must be >= 0")
        resolved.append((v, cost, cost_text))

    nodes = list(tree.nodes)
    used_ids = {n.id for n in nodes}
    prob = 1.0 if tree.has_probs else None
    for v, cost, cost_text in resolved:
        name = f"{nodes[v].id}__cost"
        while name in used_ids:
            name += "x"
        used_ids.add(name)
        nodes.append(Node(name, NodeKind.BAS, (), cost, 0.0, prob, cost_text, "0"))
        nodes[v] = replace(nodes[v], children=nodes[v].children + (len(nodes) - 1,))
    return AttackTree(tuple(nodes), tree.root)
