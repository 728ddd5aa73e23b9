"""Shared fixtures: bundled trees and seeded random-tree samplers."""

import json
from pathlib import Path

import pytest

from atcd import AttackTree, GenConfig, generate_suite, parse_and_validate, to_document

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name: str) -> AttackTree:
    with open(FIXTURES / name) as fh:
        return parse_and_validate(json.load(fh))


@pytest.fixture(scope="session")
def factory() -> AttackTree:
    return load_fixture("factory.json")


@pytest.fixture(scope="session")
def factory_probs() -> AttackTree:
    return load_fixture("factory_probs.json")


@pytest.fixture(scope="session")
def example12() -> AttackTree:
    return load_fixture("example12.json")


@pytest.fixture(scope="session")
def diamond() -> AttackTree:
    return load_fixture("diamond.json")


def sample_trees(
    seed: int,
    count: int,
    max_bas: int,
    treelike: bool | None = None,
    min_nodes: int = 6,
    exact_bas: int | None = None,
) -> list[AttackTree]:
    """Draw `count` random trees matching the filter, scanning seeds from `seed`.

    Each candidate comes from its own single-tree suite so that acceptance
    or rejection of one tree never shifts the RNG stream of the next.
    """
    out: list[AttackTree] = []
    offset = 0
    while len(out) < count:
        cfg = GenConfig(
            seed=seed + offset,
            min_nodes=min_nodes,
            count=1,
            treelike_only=bool(treelike),
        )
        offset += 1
        if offset > 200 * count + 10_000:
            raise RuntimeError("seed scan exhausted; filters too strict")
        tree = generate_suite(cfg).trees[0]
        n_bas = len(tree.bas)
        if n_bas > max_bas:
            continue
        if exact_bas is not None and n_bas != exact_bas:
            continue
        if treelike is not None and tree.treelike != treelike:
            continue
        out.append(tree)
    return out


def with_unit_probs(tree: AttackTree) -> AttackTree:
    """Copy of the tree with every success probability forced to 1."""
    doc = to_document(tree)
    for node in doc["nodes"]:
        if "prob" in node:
            node["prob"] = 1.0
    return parse_and_validate(doc)
