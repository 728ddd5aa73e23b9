"""Command line front end.

One subcommand per analysis; every command reads a JSON tree document.
Exit codes: 0 success, 1 validation failure, 2 infeasible threshold,
3 enumeration guard or solver budget tripped, 4 probabilistic analysis of
a DAG-shaped tree (which no engine supports).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from . import bottomup, generator, ilp, oracle
from .errors import (
    BudgetExceeded,
    InfeasibleDamageThreshold,
    NotTreelike,
    TooManyActiveBas,
    TooManyBas,
    ValidationError,
)
from .model import AttackTree, attack_ids, load_tree, save_tree

EXIT_VALIDATION = 1
EXIT_INFEASIBLE = 2
EXIT_GUARD = 3
EXIT_PROB_DAG = 4


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _front_csv(front, decimals: int) -> str:
    lines = ["cost,damage"]
    lines += [f"{c:.{decimals}f},{d:.{decimals}f}" for c, d in front]
    return "\n".join(lines) + "\n"


def _result_json(tree: AttackTree, value: float, witness) -> str:
    return json.dumps({"value": value, "witness": attack_ids(tree, witness)}) + "\n"


def _pick_engine(tree: AttackTree, engine: str) -> str:
    if engine == "auto":
        return "tree" if tree.treelike else "ilp"
    return engine


def cmd_validate(args) -> int:
    tree = load_tree(args.input)
    shape = "treelike" if tree.treelike else "DAG-like"
    probs = "with probabilities" if tree.has_probs else "no probabilities"
    print(f"{shape}, {len(tree.nodes)} nodes, {len(tree.bas)} basic attack steps, {probs}")
    return 0


def cmd_pf(args) -> int:
    tree = load_tree(args.input)
    engine = _pick_engine(tree, args.engine)
    if engine == "tree":
        front = bottomup.cdpf_tree(tree)
    elif engine == "ilp":
        front = ilp.cdpf_dag(tree)
    else:
        front = oracle.cdpf_enum(tree)
    _write(args.output, _front_csv(front, 6))
    return 0


def cmd_dgc(args) -> int:
    tree = load_tree(args.input)
    engine = _pick_engine(tree, args.engine)
    if engine == "tree":
        value, witness = bottomup.dgc_tree(tree, args.budget)
    elif engine == "ilp":
        value, witness = ilp.dgc_dag(tree, args.budget)
    else:
        value = oracle.dgc_enum(tree, args.budget)
        witness = None
    text = (
        json.dumps({"value": value}) + "\n"
        if witness is None
        else _result_json(tree, value, witness)
    )
    _write(args.output, text)
    return 0


def cmd_cgd(args) -> int:
    tree = load_tree(args.input)
    engine = _pick_engine(tree, args.engine)
    if engine == "tree":
        value, witness = bottomup.cgd_tree(tree, args.min_damage)
    elif engine == "ilp":
        value, witness = ilp.cgd_dag(tree, args.min_damage)
    else:
        value = oracle.cgd_enum(tree, args.min_damage)
        witness = None
    text = (
        json.dumps({"value": value}) + "\n"
        if witness is None
        else _result_json(tree, value, witness)
    )
    _write(args.output, text)
    return 0


def _require_treelike(tree: AttackTree) -> None:
    if not tree.treelike:
        raise NotTreelike("probabilistic analyses support treelike trees only")


def cmd_epf(args) -> int:
    tree = load_tree(args.input)
    _require_treelike(tree)
    _write(args.output, _front_csv(bottomup.cedpf_tree(tree), 9))
    return 0


def cmd_edgc(args) -> int:
    tree = load_tree(args.input)
    _require_treelike(tree)
    value, witness = bottomup.edgc_tree(tree, args.budget)
    _write(args.output, _result_json(tree, value, witness))
    return 0


def cmd_cged(args) -> int:
    tree = load_tree(args.input)
    _require_treelike(tree)
    value, witness = bottomup.cged_tree(tree, args.min_damage)
    _write(args.output, _result_json(tree, value, witness))
    return 0


def cmd_enum(args) -> int:
    tree = load_tree(args.input)
    _write(args.output, _front_csv(oracle.cdpf_enum(tree), 6))
    return 0


def cmd_encode_lp(args) -> int:
    tree = load_tree(args.input)
    model = ilp.with_bounds(
        ilp.encode_bilp(tree), max_cost=args.budget, min_damage=args.min_damage
    )
    objective = "cost" if args.objective == "cost" else "neg_damage"
    _write(args.output, ilp.export_lp(model, objective))
    return 0


def cmd_gen(args) -> int:
    cfg = generator.GenConfig(
        seed=args.seed,
        min_nodes=args.min_nodes,
        count=args.count,
        treelike_only=args.treelike,
    )
    blocks = [load_tree(p) for p in args.blocks] if args.blocks else None
    suite = generator.generate_suite(cfg, blocks)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for record, tree in zip(suite.manifest["trees"], suite.trees):
        name = record["name"] + ".json"
        save_tree(tree, out / name)
        record["file"] = name
        files.append(name)
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(suite.manifest, fh, indent=2)
        fh.write("\n")
    print(f"wrote {len(files)} trees and manifest.json to {out}")
    return 0


def _bench_file(path: str, engines: tuple[str, ...]) -> list[str]:
    tree = load_tree(path)
    name = Path(path).name
    rows = []
    for engine in engines:
        if engine == "tree" and not tree.treelike:
            continue
        if engine == "enum" and len(tree.bas) > oracle.MAX_ENUM_BAS:
            continue
        start = time.perf_counter()
        if engine == "tree":
            front = bottomup.cdpf_tree(tree)
        elif engine == "ilp":
            front = ilp.cdpf_dag(tree)
        else:
            front = oracle.cdpf_enum(tree)
        millis = (time.perf_counter() - start) * 1000.0
        rows.append(f"{name},{len(tree.nodes)},{len(tree.bas)},{engine},{millis:.3f},{len(front)}")
    return rows


def cmd_bench(args) -> int:
    engines = tuple(e.strip() for e in args.engines.split(",") if e.strip())
    for engine in engines:
        if engine not in ("tree", "ilp", "enum"):
            raise ValueError(f"unknown engine {engine!r}")
    rows = ["file,nodes,bas,engine,millis,front_size"]
    if len(args.inputs) > 1:
        # The analyses are pure, so files can be timed in parallel; map
        # keeps the output rows in input order.
        with ProcessPoolExecutor() as pool:
            for chunk in pool.map(partial(_bench_file, engines=engines), args.inputs):
                rows.extend(chunk)
    else:
        rows.extend(_bench_file(args.inputs[0], engines))
    _write(args.output, "\n".join(rows) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atcd", description="Cost-damage analysis of attack trees"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--input", required=True, help="tree document (JSON)")
        if output:
            p.add_argument("--output", default=None, help="output file (default stdout)")

    p = sub.add_parser("validate", help="parse and validate a tree document")
    common(p, output=False)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("pf", help="cost-damage Pareto front")
    common(p)
    p.add_argument("--engine", choices=["auto", "tree", "ilp", "enum"], default="auto")
    p.set_defaults(fn=cmd_pf)

    p = sub.add_parser("dgc", help="max damage within a cost budget")
    common(p)
    p.add_argument("--budget", type=float, required=True)
    p.add_argument("--engine", choices=["auto", "tree", "ilp", "enum"], default="auto")
    p.set_defaults(fn=cmd_dgc)

    p = sub.add_parser("cgd", help="min cost reaching a damage threshold")
    common(p)
    p.add_argument("--min-damage", type=float, required=True)
    p.add_argument("--engine", choices=["auto", "tree", "ilp", "enum"], default="auto")
    p.set_defaults(fn=cmd_cgd)

    p = sub.add_parser("epf", help="cost vs expected damage Pareto front (treelike)")
    common(p)
    p.set_defaults(fn=cmd_epf)

    p = sub.add_parser("edgc", help="max expected damage within a cost budget (treelike)")
    common(p)
    p.add_argument("--budget", type=float, required=True)
    p.set_defaults(fn=cmd_edgc)

    p = sub.add_parser("cged", help="min cost reaching an expected damage level (treelike)")
    common(p)
    p.add_argument("--min-damage", type=float, required=True)
    p.set_defaults(fn=cmd_cged)

    p = sub.add_parser("enum", help="Pareto front by brute-force enumeration")
    common(p)
    p.set_defaults(fn=cmd_enum)

    p = sub.add_parser("encode-lp", help="write the 0/1 encoding in CPLEX LP format")
    common(p)
    p.add_argument("--objective", choices=["cost", "neg-damage"], default="neg-damage")
    p.add_argument("--budget", type=float, default=None, help="add a cost row")
    p.add_argument("--min-damage", type=float, default=None, help="add a damage row")
    p.set_defaults(fn=cmd_encode_lp)

    p = sub.add_parser("gen", help="generate a seeded random suite")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--min-nodes", type=int, default=10)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--treelike", action="store_true")
    p.add_argument("--blocks", nargs="*", default=None, help="block documents (JSON)")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("bench", help="time the engines over tree documents")
    p.add_argument("--inputs", nargs="+", required=True)
    p.add_argument("--engines", default="tree,ilp,enum")
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, NotTreelike, ValueError) as exc:
        if isinstance(exc, NotTreelike) and args.command in ("epf", "edgc", "cged"):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PROB_DAG
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InfeasibleDamageThreshold as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (TooManyBas, TooManyActiveBas, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
