"""Binary-program backend: encoding, branch and bound, fronts, LP export."""

import math
from decimal import Decimal
from itertools import product

import pytest

from atcd import (
    cdpf_dag,
    cdpf_enum,
    cdpf_tree,
    cgd_dag,
    dgc_dag,
    encode_bilp,
    export_lp,
    parse_and_validate,
    reach,
    total_cost,
    total_damage,
)
from atcd.errors import (
    BudgetExceeded,
    InfeasibleDamageThreshold,
    NonFiniteAttribute,
    TooLarge,
    UnscalableAttribute,
)
from atcd.ilp import SCALE, IlpModel, solve_single, with_bounds
from atcd.model import Node, NodeKind
from conftest import sample_trees

FACTORY_LP = """\\ 0/1 encoding of an attack tree cost-damage model
Minimize
 obj: - 200 y_ps - 100 y_dr - 10 y_fd
Subject To
 c1: y_ps - y_ca - y_dr <= 0
 c2: y_dr - y_pb <= 0
 c3: y_dr - y_fd <= 0
Bounds
Binary
 y_ps y_ca y_dr y_pb y_fd
End
"""


def test_encode_factory(factory):
    model = encode_bilp(factory)
    assert model.cost == (0, 10**6, 0, 3 * 10**6, 2 * 10**6)
    assert model.damage == (200 * 10**6, 0, 100 * 10**6, 0, 10 * 10**6)
    assert model.and_rows == ((2, 3), (2, 4))
    assert model.or_rows == ((0, (1, 2)),)
    assert model.max_cost is None and model.min_damage is None


def test_encode_diamond(diamond):
    model = encode_bilp(diamond)
    assert model.and_rows == ((1, 3), (1, 4), (2, 3), (2, 5))
    assert model.or_rows == ((0, (1, 2)),)


def test_encode_single_bas():
    tree = parse_and_validate(
        {"nodes": [{"id": "a", "type": "BAS", "cost": Decimal("1.5"), "damage": 4}]}
    )
    model = encode_bilp(tree)
    assert model.cost == (1_500_000,)
    assert model.damage == (4_000_000,)
    assert model.and_rows == () and model.or_rows == ()


def test_encode_rejects_fine_fractions():
    tree = parse_and_validate(
        {"nodes": [{"id": "a", "type": "BAS", "cost": Decimal("0.1234567")}]}
    )
    with pytest.raises(UnscalableAttribute):
        encode_bilp(tree)


def test_encode_rejects_non_finite():
    bad = Node("a", NodeKind.BAS, (), math.inf, 0.0, None, None, "0")
    tree = parse_and_validate({"nodes": [{"id": "a", "type": "BAS", "cost": 1}]})
    patched = type(tree)((bad,), 0)
    with pytest.raises(NonFiniteAttribute):
        encode_bilp(patched)


def test_encode_rejects_huge_trees():
    leaves = [{"id": f"b{i}", "type": "BAS", "cost": 1} for i in range(65536)]
    doc = {
        "nodes": [
            {"id": "r", "type": "OR", "children": [leaf["id"] for leaf in leaves]}
        ]
        + leaves
    }
    with pytest.raises(TooLarge):
        encode_bilp(parse_and_validate(doc))


def test_solve_single_goldens(factory):
    model = with_bounds(encode_bilp(factory), max_cost=2)
    result = solve_single(model, "neg_damage")
    assert result.status == "optimal"
    assert result.damage == 200 and result.cost == 1
    assert result.assignment == (1, 1, 0, 0, 0)

    free = solve_single(encode_bilp(factory), "cost")
    assert free.status == "optimal"
    assert free.cost == 0 and free.assignment == (0, 0, 0, 0, 0)

    capped = with_bounds(encode_bilp(factory), min_damage=205)
    result = solve_single(capped, "cost")
    assert result.cost == 3 and result.damage == 210

    impossible = with_bounds(encode_bilp(factory), min_damage=311)
    assert solve_single(impossible, "cost").status == "infeasible"


def test_dgc_dag_goldens(factory, diamond):
    assert dgc_dag(factory, 2) == (200, (1, 0, 0))
    assert dgc_dag(factory, 0) == (0, (0, 0, 0))
    assert dgc_dag(diamond, 2) == (1, (1, 0, 0))
    assert dgc_dag(diamond, 3) == (9, (1, 1, 0))
    with pytest.raises(ValueError):
        dgc_dag(factory, -1)


def test_cgd_dag_goldens(factory, diamond):
    assert cgd_dag(factory, 205) == (3, (1, 0, 1))
    assert cgd_dag(factory, 0) == (0, (0, 0, 0))
    assert cgd_dag(diamond, 10) == (5, (1, 0, 1))
    with pytest.raises(InfeasibleDamageThreshold):
        cgd_dag(factory, 311)


def test_cdpf_dag_goldens(factory, diamond):
    assert cdpf_dag(factory) == [(0.0, 0.0), (1.0, 200.0), (3.0, 210.0), (5.0, 310.0)]
    assert cdpf_dag(diamond) == [(0.0, 0.0), (2.0, 1.0), (3.0, 9.0), (5.0, 12.0), (6.0, 15.0)]


def test_budget_grid_rounding(factory):
    assert dgc_dag(factory, 2.4) == dgc_dag(factory, 2)
    assert dgc_dag(factory, Decimal("2.9999999"))[0] == 200


def test_matches_other_engines():
    for tree in sample_trees(seed=911, count=15, max_bas=10, treelike=True):
        assert cdpf_dag(tree) == cdpf_tree(tree)
    for tree in sample_trees(seed=912, count=15, max_bas=10, treelike=False):
        assert cdpf_dag(tree) == cdpf_enum(tree)


def test_witnesses_are_consistent():
    for tree in sample_trees(seed=913, count=10, max_bas=10):
        top = sum(tree.nodes[v].cost for v in tree.bas)
        value, witness = dgc_dag(tree, top / 2)
        assert total_cost(tree, witness) <= top / 2
        assert total_damage(tree, witness) == value
        dmax, _ = dgc_dag(tree, top)
        if dmax > 0:
            value, witness = cgd_dag(tree, dmax)
            assert total_damage(tree, witness) >= dmax
            assert total_cost(tree, witness) == value


def test_front_size_bounded_by_cost_levels():
    for tree in sample_trees(seed=914, count=10, max_bas=9):
        costs = {total_cost(tree, x) for x in product((0, 1), repeat=len(tree.bas))}
        assert len(cdpf_dag(tree)) <= len(costs)


def test_solution_is_reach_closure(factory, diamond):
    for tree in (factory, diamond):
        model = with_bounds(encode_bilp(tree), max_cost=10)
        result = solve_single(model, "neg_damage")
        attack = tuple(result.assignment[v] for v in tree.bas)
        reached = reach(tree, attack)
        assert result.assignment == tuple(int(b) for b in reached)


def test_assignment_satisfies_rows():
    for tree in sample_trees(seed=915, count=8, max_bas=8):
        model = encode_bilp(tree)
        result = solve_single(with_bounds(model, max_cost=12), "neg_damage")
        y = result.assignment
        for gate, child in model.and_rows:
            assert y[gate] <= y[child]
        for gate, children in model.or_rows:
            assert y[gate] <= sum(y[c] for c in children)


def test_export_lp_factory(factory):
    assert export_lp(encode_bilp(factory), "neg_damage") == FACTORY_LP


def test_export_lp_no_constraint_block():
    tree = parse_and_validate({"nodes": [{"id": "a", "type": "BAS", "cost": 2}]})
    text = export_lp(encode_bilp(tree), "cost")
    assert "Subject To" not in text
    assert " obj: 2 y_a" in text
    assert text.endswith("End\n")


def test_export_lp_bound_rows(factory):
    text = export_lp(with_bounds(encode_bilp(factory), max_cost=2), "neg_damage")
    assert " budget: y_ca + 3 y_pb + 2 y_fd <= 2" in text
    text = export_lp(with_bounds(encode_bilp(factory), min_damage=205), "cost")
    assert " damage: 200 y_ps + 100 y_dr + 10 y_fd >= 205" in text


def test_export_lp_name_sanitization():
    doc = {
        "nodes": [
            {"id": "r", "type": "OR", "children": ["a b", "a+b"]},
            {"id": "a b", "type": "BAS", "cost": 1},
            {"id": "a+b", "type": "BAS", "cost": 2},
        ]
    }
    text = export_lp(encode_bilp(parse_and_validate(doc)), "cost")
    names = [line for line in text.splitlines() if line.startswith(" y_")]
    assert len(names) == 1
    tokens = names[0].split()
    assert len(tokens) == len(set(tokens)) == 3


def test_node_budget(factory, monkeypatch):
    model = with_bounds(encode_bilp(factory), max_cost=5)
    with pytest.raises(BudgetExceeded):
        solve_single(model, "neg_damage", node_limit=1)
    monkeypatch.setenv("ATCD_BB_NODE_LIMIT", "1")
    with pytest.raises(BudgetExceeded):
        dgc_dag(factory, 5)
    monkeypatch.setenv("ATCD_BB_NODE_LIMIT", str(10**8))
    assert dgc_dag(factory, 5)[0] == 310


def test_with_bounds_keeps_model_untouched(factory):
    assert SCALE == 10**6
    model = encode_bilp(factory)
    assert with_bounds(model) is model
    bounded = with_bounds(model, max_cost=2)
    assert bounded is not model and model.max_cost is None
    assert isinstance(bounded, IlpModel)
