"""Bottom-up Pareto-front engine for treelike attack trees.

Each node of the (binarized) tree gets a front of (cost, damage, reach)
triples describing every useful way of attacking its subtree under the cost
budget; gates merge their children's fronts with the AND/OR combinators and
the front is filtered and minimized at every step.  Because subtrees of a
treelike tree share no steps, the root front projects exactly onto the
cost-damage Pareto front, and single-objective optima fall out of it.

Every front point remembers one generating choice per gate, so an optimal
attack (witness) can be read back by walking those choices down the tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import pareto
from .errors import InfeasibleDamageThreshold, NotTreelike
from .model import Attack, AttackTree, NodeKind, binarize

__all__ = [
    "det_front",
    "prob_front",
    "cdpf_tree",
    "cedpf_tree",
    "dgc_tree",
    "cgd_tree",
    "edgc_tree",
    "cged_tree",
]


@dataclass
class _Analysis:
    tree: AttackTree                  # binarized working copy
    base: AttackTree                  # tree the caller handed in
    fronts: list[list[tuple]]
    choices: list[list]               # parallel to fronts: None/True for BAS, (i, j) for gates

    @property
    def root_front(self) -> list[tuple]:
        return self.fronts[self.tree.root]

    def witness(self, point_index: int) -> Attack:
        """Attack on the base tree that realizes the given root front point."""
        active: set[str] = set()
        stack = [(self.tree.root, point_index)]
        while stack:
            v, k = stack.pop()
            node = self.tree.nodes[v]
            tag = self.choices[v][k]
            if node.kind is NodeKind.BAS:
                if tag:
                    active.add(node.id)
            else:
                left, right = node.children
                stack.append((left, tag[0]))
                stack.append((right, tag[1]))
        return tuple(1 if self.base.nodes[v].id in active else 0 for v in self.base.bas)


def _analyze(tree: AttackTree, budget: float, probabilistic: bool) -> _Analysis:
    if not tree.treelike:
        raise NotTreelike("the bottom-up engine requires a treelike attack tree")
    if budget < 0:
        raise ValueError("budget must be >= 0")
    work = binarize(tree)
    fronts: list[list[tuple]] = [[] for _ in work.nodes]
    choices: list[list] = [[] for _ in work.nodes]
    for v in work.topo:
        node = work.nodes[v]
        if node.kind is NodeKind.BAS:
            pts: list[tuple] = [(0.0, 0.0, 0.0 if probabilistic else 0)]
            tags: list = [None]
            if node.cost <= budget:
                if probabilistic:
                    p = work.prob_of(v)
                    pts.append((node.cost, p * node.damage, p))
                else:
                    pts.append((node.cost, node.damage, 1))
                tags.append(True)
        else:
            left, right = node.children
            fn = pareto.and_point if node.kind is NodeKind.AND else pareto.or_point
            pts = []
            tags = []
            for i, a in enumerate(fronts[left]):
                for j, b in enumerate(fronts[right]):
                    pts.append(fn(a, b, node.damage))
                    tags.append((i, j))
        keep = pareto.m_u_indices(pts, budget)
        fronts[v] = [pts[k] for k in keep]
        choices[v] = [tags[k] for k in keep]
    return _Analysis(work, tree, fronts, choices)


def det_front(tree: AttackTree, budget: float = math.inf) -> list[tuple]:
    """Budget-filtered front of (cost, damage, root reached) triples."""
    return _analyze(tree, budget, False).root_front


def prob_front(tree: AttackTree, budget: float = math.inf) -> list[tuple]:
    """Budget-filtered front of (cost, expected damage, reach probability)."""
    return _analyze(tree, budget, True).root_front


def _project(front: list[tuple]) -> list[tuple]:
    pairs = [(c, d) for c, d, _ in front]
    return pareto.merge_close(pareto.pareto_min_pairs(pairs))


def cdpf_tree(tree: AttackTree) -> list[tuple]:
    """Cost-damage Pareto front: minimal (cost, damage) pairs over all attacks."""
    return _project(det_front(tree))


def cedpf_tree(tree: AttackTree) -> list[tuple]:
    """Cost vs expected-damage Pareto front under per-step success probabilities."""
    return _project(prob_front(tree))


def _max_damage(analysis: _Analysis) -> tuple[float, Attack]:
    front = analysis.root_front
    best = max(p[1] for p in front)
    witnesses = [analysis.witness(k) for k, p in enumerate(front) if p[1] == best]
    return best, min(witnesses)


def _min_cost(analysis: _Analysis, threshold: float) -> tuple[float, Attack]:
    front = analysis.root_front
    feasible = [(p, k) for k, p in enumerate(front) if p[1] >= threshold]
    if not feasible:
        raise InfeasibleDamageThreshold(
            f"no attack does damage >= {threshold}; maximum is {max(p[1] for p in front)}"
        )
    best = min(p[0] for p, _ in feasible)
    witnesses = [analysis.witness(k) for p, k in feasible if p[0] == best]
    return best, min(witnesses)


def dgc_tree(tree: AttackTree, budget: float) -> tuple[float, Attack]:
    """Maximum damage achievable with total cost at most ``budget``, plus a
    lexicographically smallest optimal attack."""
    return _max_damage(_analyze(tree, budget, False))


def cgd_tree(tree: AttackTree, threshold: float) -> tuple[float, Attack]:
    """Minimum cost of any attack doing damage at least ``threshold``, plus a
    lexicographically smallest optimal attack."""
    return _min_cost(_analyze(tree, math.inf, False), threshold)


def edgc_tree(tree: AttackTree, budget: float) -> tuple[float, Attack]:
    """Maximum expected damage within ``budget``; mirrors dgc_tree."""
    return _max_damage(_analyze(tree, budget, True))


def cged_tree(tree: AttackTree, threshold: float) -> tuple[float, Attack]:
    """Minimum cost for expected damage at least ``threshold``; mirrors cgd_tree."""
    return _min_cost(_analyze(tree, math.inf, True), threshold)
