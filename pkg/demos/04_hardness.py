"""Why these problems are genuinely hard, shown constructively.

Three small constructions: a knapsack instance embedded as a depth-one
tree (budgeted damage maximization is NP-hard even on trees), a DAG whose
damage function realizes an arbitrary monotone set function, and a family
whose Pareto front doubles with every extra step.
"""

from itertools import product

from atcd import (
    attack_from_ids,
    cdpf_tree,
    exponential_pf_instance,
    from_knapsack,
    realize_monotone,
    total_cost,
    total_damage,
)

values, weights = (6, 5, 4), (3, 2, 4)
tree = from_knapsack(values, weights)
print("knapsack as a tree: damage = value, cost = weight, item for item")
for bits in product((0, 1), repeat=3):
    v = sum(b * f for b, f in zip(bits, values))
    w = sum(b * g for b, g in zip(bits, weights))
    assert (total_damage(tree, bits), total_cost(tree, bits)) == (v, w)
print("  all 8 subsets agree with the raw instance")

# f(x) = max(x_a, 2*x_b): monotone but not additive, so no plain tree does it
table = (0, 1, 2, 2)
tree = realize_monotone(table)
print("\nmonotone set function f = max(a, 2b) realized as a DAG:")
for bits, ids in [((0, 0), []), ((1, 0), ["x0"]), ((0, 1), ["x1"]), ((1, 1), ["x0", "x1"])]:
    assert attack_from_ids(tree, ids) == bits
    print(f"  f{bits} = {total_damage(tree, bits):.0f}")

print("\nfront sizes of the doubling family (cost = damage = powers of two):")
for n in (2, 4, 6, 8, 10):
    front = cdpf_tree(exponential_pf_instance(n))
    print(f"  n = {n:2d}: {len(front):5d} Pareto points")
