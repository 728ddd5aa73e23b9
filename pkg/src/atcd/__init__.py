"""Cost-damage analysis of attack trees.

Parse attack trees with per-step costs, per-node damage and optional
success probabilities; compute Pareto fronts and budgeted/thresholded
optima with a bottom-up engine (treelike trees), an exact 0/1 programming
backend (arbitrary DAGs) or brute-force enumeration (ground truth).
"""

from .bottomup import (
    cdpf_tree,
    cedpf_tree,
    cgd_tree,
    cged_tree,
    det_front,
    dgc_tree,
    edgc_tree,
    prob_front,
)
from .constructions import exponential_pf_instance, from_knapsack, realize_monotone
from .generator import GenConfig, SplitMix64, Suite, combine, default_blocks, generate_suite
from .ilp import (
    IlpModel,
    SolveResult,
    cdpf_dag,
    cgd_dag,
    dgc_dag,
    encode_bilp,
    export_lp,
    solve_single,
    with_bounds,
)
from .model import (
    Attack,
    AttackTree,
    Node,
    NodeKind,
    attack_from_ids,
    attack_ids,
    binarize,
    load_tree,
    parse_and_validate,
    prob_structure,
    reach,
    save_tree,
    structure,
    to_document,
    total_cost,
    total_damage,
    with_internal_costs,
)
from .oracle import (
    cdpf_enum,
    cedpf_enum,
    cgd_enum,
    dgc_enum,
    distribution,
    expected_damage_enum,
)
from . import errors, pareto

__version__ = "0.1.0"
