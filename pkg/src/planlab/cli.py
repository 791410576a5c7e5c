"""Command-line front door: classify, solve, validate, generate.

Machine-readable JSON goes to stdout, human-readable notes to stderr.
Exit codes: 0 solved/valid, 1 unsolvable/invalid, 2 parse or usage error,
3 solver inapplicable to the instance.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, List, Optional, Tuple

from . import fomc, generators, io, oracle, postunique, zerotwo
from .core import ContractError, Instance, classify, lint_instance, validate_plan

BUDGET_ENV = "PLAN_LAB_BUDGET"

EXIT_SOLVED = 0
EXIT_UNSOLVED = 1
EXIT_PARSE = 2
EXIT_INAPPLICABLE = 3


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    return int(os.environ.get(BUDGET_ENV, oracle.DEFAULT_BUDGET))


def _load_instance(path: str) -> Instance:
    with open(path, "rb") as fh:
        instance = io.parse_instance(fh.read())
    for warning in lint_instance(instance):
        print(f"lint: {warning}", file=sys.stderr)
    return instance


def _route(instance: Instance) -> str:
    profile = classify(instance)
    if profile.post_unique:
        return "post-unique"
    if profile.max_pre == 0 and profile.max_eff <= 2:
        return "zero-two"
    if profile.unary:
        return "fo-mc"
    return "oracle"


def cmd_classify(args) -> int:
    instance = _load_instance(args.instance)
    profile = classify(instance)
    out = profile.as_dict()
    out["route"] = _route(instance)
    print(json.dumps(out))
    return EXIT_SOLVED


def _solve_with(instance: Instance, k: int, solver: str, fragment: Optional[str],
                budget: int, dot_path: Optional[str] = None):
    """Returns (solvable, plan or None, solver label, stats)."""
    if solver == "post-unique":
        if not classify(instance).post_unique:
            raise ContractError("instance is not post-unique")
        result = postunique.solve_postunique(instance, k)
        best = min(result.plans, key=lambda p: (len(p), p), default=None)
        return best is not None, best, solver, {
            "search_tree_nodes": result.node_count,
            "minimal_plans": len(result.plans)}
    if solver == "zero-two":
        result = zerotwo.solve_zero_two(instance, k)
        stats = {"transformed": result.transformed,
                 "steiner_nodes": result.dst.node_count,
                 "steiner_arcs": len(result.dst.arcs)}
        if result.solution is not None:
            stats["dp_cells"] = result.solution.cells
        if dot_path:
            work = instance
            if result.transformed:
                work = zerotwo.eliminate_two_effect_good_actions(
                    instance, k).instance
            with open(dot_path, "w") as fh:
                fh.write(zerotwo.steiner_to_dot(result.dst, work))
        return result.plan is not None, result.plan, solver, stats
    if solver == "fo-mc":
        frag = fragment or (fomc.SIGMA1 if classify(instance).unary
                            else fomc.SIGMA22)
        result = fomc.solve_via_mc(instance, k, frag)
        return result.solvable, result.plan, f"fo-mc/{frag}", {
            "assignments": result.assignments}
    if solver == "oracle":
        plan, visited = oracle.shortest_plan_with_stats(instance, k, budget)
        return plan is not None, plan, solver, {"visited_states": visited}
    raise ValueError(f"unknown solver {solver!r}")


def cmd_solve(args) -> int:
    instance = _load_instance(args.instance)
    if args.k < 0:
        raise ContractError("k must be non-negative")
    solver = args.solver
    if solver == "auto":
        solver = _route(instance)
        fragment = fomc.SIGMA1 if solver == "fo-mc" else None
    else:
        fragment = args.fragment
    solvable, plan, label, stats = _solve_with(
        instance, args.k, solver, fragment, _budget(args), args.dot)
    if plan is not None:
        report = validate_plan(instance, plan)
        if not report.valid:
            raise AssertionError("solver returned an invalid plan: "
                                 + report.message(instance))
    result = {
        "solvable": solvable,
        "length": len(plan) if plan is not None else None,
        "plan": [instance.actions[a].name for a in plan]
                if plan is not None else None,
        "solver": label,
        "stats": stats if args.stats else {},
    }
    print(json.dumps(result))
    print(f"{label}: {'solvable' if solvable else 'no plan'} at k={args.k}",
          file=sys.stderr)
    return EXIT_SOLVED if solvable else EXIT_UNSOLVED


def cmd_validate(args) -> int:
    instance = _load_instance(args.instance)
    with open(args.plan, "rb") as fh:
        plan = io.parse_plan(fh.read(), instance)
    report = validate_plan(instance, plan)
    out = {"valid": report.valid}
    if not report.valid:
        out["reason"] = report.reason
        out["variable"] = instance.var_names[report.variable]
        if report.step is not None:
            out["step"] = report.step
    else:
        out["final_state"] = list(report.final_state)
    print(json.dumps(out))
    print(report.message(instance), file=sys.stderr)
    return EXIT_SOLVED if report.valid else EXIT_UNSOLVED


def _parse_sets(text: str) -> Tuple[Tuple[int, ...], ...]:
    """'{1,2},{2,3}' -> ((1,2),(2,3)); '{}' makes an empty subset."""
    text = text.strip()
    if not text:
        return ()
    if not (text.startswith("{") and text.endswith("}")):
        raise ContractError("subsets must look like {1,2},{2,3}")
    groups = text[1:-1].split("},{")
    out = []
    for g in groups:
        g = g.strip()
        out.append(tuple(sorted(int(x) for x in g.split(",") if x.strip()))
                   if g else ())
    return tuple(out)


def _parse_edges(text: str) -> Tuple[Tuple[generators.Vertex,
                                           generators.Vertex], ...]:
    """'1.0-2.0,1.0-3.1' -> (((1,0),(2,0)), ((1,0),(3,1)))."""
    edges = []
    if not text.strip():
        return ()
    for chunk in text.split(","):
        left, right = chunk.strip().split("-")
        pi, a = left.split(".")
        pj, c = right.split(".")
        edges.append(generators.normalize_edge(
            (int(pi), int(a)), (int(pj), int(c))))
    return tuple(edges)


def _graph_from_args(args) -> generators.MulticoloredGraph:
    if args.complete:
        if args.per_part != 1:
            raise ContractError("--complete is defined for --per-part 1")
        edges = tuple(generators.normalize_edge((i, 0), (j, 0))
                      for i in range(1, args.parts + 1)
                      for j in range(i + 1, args.parts + 1))
    else:
        edges = _parse_edges(args.edges or "")
    return generators.MulticoloredGraph(args.parts, args.per_part, edges)


def _write_generated(args, instance: Instance, bound: int,
                     meta: Dict[str, object]) -> int:
    text = io.serialize_instance(instance)
    meta = dict(meta)
    meta["expected_bound"] = bound
    with open(args.out, "w") as fh:
        fh.write(text)
    with open(args.out + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(json.dumps({"out": args.out, "expected_bound": bound,
                      "vars": instance.var_count,
                      "actions": len(instance.actions)}))
    return EXIT_SOLVED


def cmd_generate(args) -> int:
    kind = args.generator
    if kind == "hitting-set":
        inp = generators.HittingSetInput(args.universe,
                                         _parse_sets(args.sets), args.k)
        instance, bound = generators.from_hitting_set(inp)
        meta = {"generator": kind, "universe": args.universe,
                "sets": [list(c) for c in inp.subsets], "k": args.k}
    elif kind in ("mcc-ubs", "mcc-03"):
        graph = _graph_from_args(args)
        fn = (generators.from_mcc_ubs if kind == "mcc-ubs"
              else generators.from_mcc_03)
        instance, bound = fn(graph)
        meta = {"generator": kind, "parts": graph.parts,
                "per_part": graph.part_size,
                "edges": [f"{u[0]}.{u[1]}-{v[0]}.{v[1]}"
                          for u, v in graph.edges]}
    elif kind == "or2":
        b = generators.InstanceBuilder(domain_size=2)
        v1 = b.add_variable("v1", init=args.v1)
        v2 = b.add_variable("v2", init=args.v2)
        gadget = generators.or2_gadget(b, v1, v2, "o")
        b.set_goal(gadget.out, 1)
        instance, bound = b.build(), 6
        meta = {"generator": kind, "v1": args.v1, "v2": args.v2}
    elif kind == "compose-pub":
        comps = []
        for spec_text in args.component:
            path, _, ktext = spec_text.rpartition(":")
            if not path:
                raise ContractError("--component takes PATH:K")
            comps.append((_load_instance(path), int(ktext)))
        instance, bound = generators.compose_pub(comps)
        meta = {"generator": kind, "components": list(args.component)}
    elif kind == "compose-02":
        comps = [(_load_instance(p), args.k) for p in args.component]
        instance, bound = generators.compose_zero_two(comps)
        meta = {"generator": kind, "components": list(args.component),
                "k": args.k}
    elif kind == "random":
        instance = generators.random_instance(
            args.n, args.domain, args.actions, args.seed,
            post_unique=args.post_unique, unary=args.unary,
            single_valued=args.single_valued, max_pre=args.max_pre,
            max_eff=args.max_eff)
        bound = args.k
        meta = {"generator": kind, "seed": args.seed, "n": args.n,
                "domain": args.domain, "actions": args.actions}
    else:
        raise ContractError(f"unknown generator {kind!r}")
    return _write_generated(args, instance, bound, meta)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planlab",
        description="Bounded-plan solvers and generators for SAS+ planning")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="restriction profile and routing")
    p.add_argument("instance")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve", help="decide plan existence at bound k")
    p.add_argument("instance")
    p.add_argument("k", type=int)
    p.add_argument("--solver", default="auto",
                   choices=["auto", "oracle", "post-unique", "zero-two",
                            "fo-mc"])
    p.add_argument("--fragment", choices=[fomc.SIGMA1, fomc.SIGMA22],
                   help="force a model-checking fragment")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--budget", type=int,
                   help=f"visited-state cap (default ${BUDGET_ENV} or "
                        f"{oracle.DEFAULT_BUDGET})")
    p.add_argument("--dot", metavar="PATH",
                   help="dump the Steiner digraph (zero-two solver only)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="check a plan file")
    p.add_argument("instance")
    p.add_argument("plan")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("generate", help="write a generated instance")
    gsub = p.add_subparsers(dest="generator", required=True)

    g = gsub.add_parser("hitting-set")
    g.add_argument("--universe", type=int, required=True)
    g.add_argument("--sets", required=True)
    g.add_argument("--k", type=int, required=True)

    for name in ("mcc-ubs", "mcc-03"):
        g = gsub.add_parser(name)
        g.add_argument("--parts", type=int, required=True)
        g.add_argument("--per-part", type=int, default=1)
        g.add_argument("--edges")
        g.add_argument("--complete", action="store_true")

    g = gsub.add_parser("or2")
    g.add_argument("--v1", type=int, choices=[0, 1], required=True)
    g.add_argument("--v2", type=int, choices=[0, 1], required=True)

    g = gsub.add_parser("compose-pub")
    g.add_argument("--component", action="append", required=True,
                   metavar="PATH:K")

    g = gsub.add_parser("compose-02")
    g.add_argument("--component", action="append", required=True)
    g.add_argument("--k", type=int, required=True)

    g = gsub.add_parser("random")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--domain", type=int, default=2)
    g.add_argument("--actions", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--k", type=int, default=0)
    g.add_argument("--post-unique", action="store_true")
    g.add_argument("--unary", action="store_true")
    g.add_argument("--single-valued", action="store_true")
    g.add_argument("--max-pre", type=int)
    g.add_argument("--max-eff", type=int)

    for g_action in gsub.choices.values():
        g_action.add_argument("--out", required=True)
        g_action.set_defaults(func=cmd_generate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except io.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"cannot read {exc.filename}", file=sys.stderr)
        return EXIT_PARSE
    except ContractError as exc:
        print(f"inapplicable: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except oracle.BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
