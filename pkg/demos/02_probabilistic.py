"""Probabilistic analyses: steps may fail, so plan for expected damage.

Choosing a set of steps no longer fixes the outcome; each chosen step
succeeds independently with its probability, and only the successful subset
(the actualized attack) earns damage.  The engine ranks attacks by expected
damage; the front trades cost against it.
"""

from pathlib import Path

from atcd import cedpf_tree, distribution, expected_damage_enum, load_tree, prob_structure
from atcd.bottomup import edgc_tree, prob_front

root = Path(__file__).resolve().parent.parent / "fixtures"
tree = load_tree(root / "factory_probs.json")

x = (0, 1, 1)  # attempt both steps of the AND branch
print("actualizations of attempting {pb, fd}:")
for outcome, p in distribution(tree, x):
    print(f"  succeed {outcome}  with probability {p:.2f}")
print(f"expected damage of that attempt: {expected_damage_enum(tree, x):.1f}")
print(f"chance the root is reached:      {prob_structure(tree, x, 'ps'):.2f}")

print("\ncost vs expected damage front:")
for cost, expected in cedpf_tree(tree):
    print(f"  cost {cost:3.0f} -> expected damage {expected:7.2f}")

print("\nwith reach probability kept visible:")
for cost, expected, reach in prob_front(tree):
    print(f"  cost {cost:3.0f} -> expected damage {expected:7.2f}  P(root) {reach:.3f}")

value, witness = edgc_tree(tree, budget=3)
print(f"\nbest expected damage on a budget of 3: {value:.1f} via {witness}")
