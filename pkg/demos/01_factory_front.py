"""Walk through the deterministic analyses on the small factory tree.

The tree: an OR root "physical damage to the factory" (damage 200) over a
cyber BAS (cost 1) and an AND "disable the fire response" (damage 100) of
two BASs, one of which (flooding the server room, cost 2) does 10 damage
on its own.  Damage accrues at every node an attack reaches, root or not.
"""

from pathlib import Path

from atcd import (
    attack_from_ids,
    cdpf_tree,
    cgd_tree,
    dgc_tree,
    load_tree,
    total_cost,
    total_damage,
)
from atcd.bottomup import det_front

tree = load_tree(Path(__file__).resolve().parent.parent / "fixtures" / "factory.json")

print("every attack, by hand:")
for ids in [[], ["fd"], ["pb", "fd"], ["ca"], ["ca", "fd"]]:
    x = attack_from_ids(tree, ids)
    print(f"  {ids!r:24} cost {total_cost(tree, x):3.0f}  damage {total_damage(tree, x):4.0f}")

print("\ncost-damage Pareto front (cheapest way to each damage level):")
for cost, damage in cdpf_tree(tree):
    print(f"  cost {cost:3.0f} -> damage {damage:4.0f}")

print("\nthe same front with the root-reached flag kept visible:")
for cost, damage, reached in det_front(tree):
    print(f"  cost {cost:3.0f} -> damage {damage:4.0f}  root reached: {bool(reached)}")

value, witness = dgc_tree(tree, budget=2)
print(f"\nbest damage on a budget of 2: {value:.0f} via {witness} (= cyber attack only)")

value, witness = cgd_tree(tree, threshold=205)
print(f"cheapest way to damage >= 205: cost {value:.0f} via {witness}")
