"""Seeded random attack tree generation.

Suites are grown by repeatedly combining small hand-made building blocks
until a node-count target is met, then randomizing the attributes.  Three
combination methods are drawn uniformly: (1) replace a random BAS of the
first tree by the whole second tree, (2) join both trees under a fresh
random gate, (3) method 2 followed by identifying one random BAS of each
operand, which makes the result DAG-shaped.  Treelike-only suites restrict
to methods 1 and 2 and to treelike blocks.

All randomness flows through a self-contained 64-bit generator (the
splitmix64 step: a Weyl sequence on 0x9E3779B97F4A7C15 whose state is
finalized by two xor-shift-multiply rounds), so byte-identical suites come
out of a given seed on every platform and Python version.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyTree, NoBlocks
from .model import AttackTree, parse_and_validate, to_document

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Tiny deterministic RNG; not for cryptography."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def randrange(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        return self.next_u64() % n

    def randint(self, lo: int, hi: int) -> int:
        return lo + self.randrange(hi - lo + 1)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]


@dataclass(frozen=True)
class GenConfig:
    seed: int
    min_nodes: int = 1
    count: int = 1
    treelike_only: bool = False
    cost_range: tuple[int, int] = (1, 10)
    damage_range: tuple[int, int] = (0, 10)
    prob_choices: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


@dataclass
class Suite:
    trees: list[AttackTree]
    manifest: dict = field(default_factory=dict)


def _block(spec_nodes: list[dict]) -> AttackTree:
    return parse_and_validate({"nodes": spec_nodes})


def default_blocks() -> list[AttackTree]:
    """Hand-made seed trees: the two-gate sample tree, five small balanced
    AND/OR shapes of four to eight BASs, and one diamond-shaped DAG."""
    factory = _block([
        {"id": "ps", "type": "OR", "children": ["ca", "dr"], "damage": 200},
        {"id": "ca", "type": "BAS", "cost": 1},
        {"id": "dr", "type": "AND", "children": ["pb", "fd"], "damage": 100},
        {"id": "pb", "type": "BAS", "cost": 3},
        {"id": "fd", "type": "BAS", "cost": 2, "damage": 10},
    ])
    and4 = _block([
        {"id": "g", "type": "AND", "children": ["l", "r"], "damage": 6},
        {"id": "l", "type": "OR", "children": ["a", "b"], "damage": 2},
        {"id": "r", "type": "OR", "children": ["c", "d"], "damage": 3},
        {"id": "a", "type": "BAS", "cost": 1, "damage": 1},
        {"id": "b", "type": "BAS", "cost": 2},
        {"id": "c", "type": "BAS", "cost": 3, "damage": 2},
        {"id": "d", "type": "BAS", "cost": 4},
    ])
    or4 = _block([
        {"id": "g", "type": "OR", "children": ["l", "r"], "damage": 8},
        {"id": "l", "type": "AND", "children": ["a", "b"], "damage": 1},
        {"id": "r", "type": "AND", "children": ["c", "d"]},
        {"id": "a", "type": "BAS", "cost": 2, "damage": 1},
        {"id": "b", "type": "BAS", "cost": 1},
        {"id": "c", "type": "BAS", "cost": 2, "damage": 3},
        {"id": "d", "type": "BAS", "cost": 5},
    ])
    mix5 = _block([
        {"id": "g", "type": "OR", "children": ["l", "c", "r"], "damage": 9},
        {"id": "l", "type": "AND", "children": ["a", "b"], "damage": 4},
        {"id": "r", "type": "AND", "children": ["d", "e"]},
        {"id": "a", "type": "BAS", "cost": 1},
        {"id": "b", "type": "BAS", "cost": 3, "damage": 2},
        {"id": "c", "type": "BAS", "cost": 4, "damage": 5},
        {"id": "d", "type": "BAS", "cost": 2, "damage": 1},
        {"id": "e", "type": "BAS", "cost": 2},
    ])
    and6 = _block([
        {"id": "g", "type": "AND", "children": ["l", "r"], "damage": 10},
        {"id": "l", "type": "OR", "children": ["a", "b", "c"], "damage": 1},
        {"id": "r", "type": "OR", "children": ["d", "e", "f"], "damage": 2},
        {"id": "a", "type": "BAS", "cost": 1, "damage": 1},
        {"id": "b", "type": "BAS", "cost": 2},
        {"id": "c", "type": "BAS", "cost": 3, "damage": 3},
        {"id": "d", "type": "BAS", "cost": 1},
        {"id": "e", "type": "BAS", "cost": 4, "damage": 2},
        {"id": "f", "type": "BAS", "cost": 2},
    ])
    deep8 = _block([
        {"id": "g", "type": "OR", "children": ["p", "q"], "damage": 12},
        {"id": "p", "type": "AND", "children": ["pl", "pr"], "damage": 3},
        {"id": "q", "type": "AND", "children": ["ql", "qr"], "damage": 5},
        {"id": "pl", "type": "OR", "children": ["a", "b"]},
        {"id": "pr", "type": "OR", "children": ["c", "d"], "damage": 1},
        {"id": "ql", "type": "OR", "children": ["e", "f"], "damage": 2},
        {"id": "qr", "type": "OR", "children": ["h", "i"]},
        {"id": "a", "type": "BAS", "cost": 1},
        {"id": "b", "type": "BAS", "cost": 2, "damage": 1},
        {"id": "c", "type": "BAS", "cost": 3},
        {"id": "d", "type": "BAS", "cost": 1, "damage": 2},
        {"id": "e", "type": "BAS", "cost": 2},
        {"id": "f", "type": "BAS", "cost": 4, "damage": 1},
        {"id": "h", "type": "BAS", "cost": 2},
        {"id": "i", "type": "BAS", "cost": 3, "damage": 4},
    ])
    diamond = _block([
        {"id": "g", "type": "OR", "children": ["l", "r"], "damage": 7},
        {"id": "l", "type": "AND", "children": ["s", "x"], "damage": 2},
        {"id": "r", "type": "AND", "children": ["s", "y"], "damage": 3},
        {"id": "s", "type": "BAS", "cost": 2, "damage": 1},
        {"id": "x", "type": "BAS", "cost": 1},
        {"id": "y", "type": "BAS", "cost": 3, "damage": 1},
    ])
    return [factory, and4, or4, mix5, and6, deep8, diamond]


def _renamed_to_avoid(specs: list[dict], taken: set[str]) -> list[dict]:
    """Rename colliding node ids with a numeric suffix, consistently."""
    mapping: dict[str, str] = {}
    for spec in specs:
        nid = spec["id"]
        new = nid
        k = 2
        while new in taken:
            new = f"{nid}.{k}"
            k += 1
        taken.add(new)
        mapping[nid] = new
    out = []
    for spec in specs:
        spec = dict(spec)
        spec["id"] = mapping[spec["id"]]
        if "children" in spec:
            spec["children"] = [mapping[c] for c in spec["children"]]
        out.append(spec)
    return out


def combine(first: AttackTree, second: AttackTree, method: int, rng: SplitMix64) -> AttackTree:
    """Stitch two attack trees together; ``method`` is 1, 2 or 3 (see module
    docstring).  Colliding ids in the second tree get a numeric suffix."""
    if not first.nodes or not second.nodes:
        raise EmptyTree("cannot combine an empty tree")
    if method not in (1, 2, 3):
        raise ValueError(f"method must be 1, 2 or 3, got {method}")
    a = to_document(first)["nodes"]
    taken = {spec["id"] for spec in a}
    b = _renamed_to_avoid(to_document(second)["nodes"], taken)
    b_root = b[second.root]["id"]

    if method == 1:
        victim = first.nodes[rng.choice(first.bas)].id
        merged = []
        for spec in a:
            if spec["id"] == victim:
                continue
            if "children" in spec:
                spec = dict(spec)
                spec["children"] = [b_root if c == victim else c for c in spec["children"]]
            merged.append(spec)
        merged.extend(b)
        return parse_and_validate({"nodes": merged})

    kind = "AND" if rng.randrange(2) == 0 else "OR"
    root_id = "root"
    k = 2
    while root_id in taken or root_id in {s["id"] for s in b}:
        root_id = f"root.{k}"
        k += 1
    a_root = a[first.root]["id"]
    merged = [{"id": root_id, "type": kind, "children": [a_root, b_root]}]
    merged.extend(a)
    merged.extend(b)
    if method == 3:
        keep = first.nodes[rng.choice(first.bas)].id
        drop = rng.choice([b[i]["id"] for i in second.bas])
        merged = [spec for spec in merged if spec["id"] != drop]
        for spec in merged:
            if "children" in spec:
                spec["children"] = [keep if c == drop else c for c in spec["children"]]
    return parse_and_validate({"nodes": merged})


def randomize_attributes(tree: AttackTree, cfg: GenConfig, rng: SplitMix64) -> AttackTree:
    """Fresh integer costs and damages and grid probabilities for every node,
    drawn in document order (damage, then cost and prob on BASs)."""
    specs = to_document(tree)["nodes"]
    for spec in specs:
        damage = rng.randint(*cfg.damage_range)
        if damage:
            spec["damage"] = damage
        else:
            spec.pop("damage", None)
        if spec["type"] == "BAS":
            spec["cost"] = rng.randint(*cfg.cost_range)
            spec["prob"] = cfg.prob_choices[rng.randrange(len(cfg.prob_choices))]
    return parse_and_validate({"nodes": specs})


def generate_suite(cfg: GenConfig, blocks: list[AttackTree] | None = None) -> Suite:
    """Generate ``cfg.count`` trees of at least ``cfg.min_nodes`` nodes each.

    The manifest records the seed, the configuration and, per tree, the
    block and method draws plus the node/BAS counts, so a suite can be
    audited or regenerated exactly.
    """
    if blocks is None:
        blocks = default_blocks()
    if cfg.treelike_only:
        blocks = [b for b in blocks if b.treelike]
    if not blocks:
        raise NoBlocks("no building blocks available")
    rng = SplitMix64(cfg.seed)
    methods = (1, 2) if cfg.treelike_only else (1, 2, 3)
    trees: list[AttackTree] = []
    records: list[dict] = []
    for i in range(cfg.count):
        picked = rng.randrange(len(blocks))
        tree = blocks[picked]
        used_blocks = [picked]
        used_methods: list[int] = []
        while len(tree.nodes) < cfg.min_nodes:
            method = methods[rng.randrange(len(methods))]
            picked = rng.randrange(len(blocks))
            grown = combine(tree, blocks[picked], method, rng)
            if len(grown.nodes) <= len(tree.nodes):
                raise NoBlocks("building blocks too small to ever reach min_nodes")
            tree = grown
            used_blocks.append(picked)
            used_methods.append(method)
        tree = randomize_attributes(tree, cfg, rng)
        trees.append(tree)
        records.append(
            {
                "name": f"at_{i:03d}",
                "nodes": len(tree.nodes),
                "bas": len(tree.bas),
                "treelike": tree.treelike,
                "blocks": used_blocks,
                "methods": used_methods,
            }
        )
    manifest = {
        "seed": cfg.seed,
        "config": {
            "min_nodes": cfg.min_nodes,
            "count": cfg.count,
            "treelike_only": cfg.treelike_only,
            "cost_range": list(cfg.cost_range),
            "damage_range": list(cfg.damage_range),
            "prob_choices": list(cfg.prob_choices),
        },
        "trees": records,
    }
    return Suite(trees, manifest)
