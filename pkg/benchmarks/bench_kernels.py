#!/usr/bin/env python3
"""Compare the compiled kernels against their interpreted sources.

Workloads: the breadth-first state search on the clique-reduction triangle
(the heaviest oracle call in the acceptance suite) and the two
model-checking fragments on batches of random instances.

Run from the repository root:  python3 benchmarks/bench_kernels.py
"""

import time
from itertools import combinations

from planlab import kernels
from planlab.core import classify
from planlab.fomc import (build_extended_structure, build_sigma1_formula,
                          build_sigma22_formula, build_structure,
                          compile_query)
from planlab.generators import (MulticoloredGraph, from_mcc_ubs,
                                normalize_edge, random_instance)
from planlab.oracle import shortest_plan

pure_bfs = kernels.load_pure("bfs_core")
pure_mc = kernels.load_pure("mc_core")


def time_call(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_bfs():
    tri = MulticoloredGraph(3, 1, tuple(
        normalize_edge((i, 0), (j, 0))
        for i, j in combinations(range(1, 4), 2)))
    inst, bound = from_mcc_ubs(tri)
    actions = [(tuple(sorted(a.pre.items())), tuple(sorted(a.eff.items())))
               for a in inst.actions]
    goal = tuple(sorted(inst.goal.items()))
    args = (inst.var_count, inst.domain_size, inst.init, actions, goal,
            bound, 5_000_000)
    t_fast, r_fast = time_call(kernels.bfs_core.bfs_shortest, *args)
    t_pure, r_pure = time_call(pure_bfs.bfs_shortest, *args)
    assert r_fast == r_pure
    return "bfs: clique triangle, depth 24", t_fast, t_pure


def mc_batch(mod, structures, formula):
    out = []
    for s in structures:
        q = compile_query(s, formula)
        out.append(mod.evaluate_program(
            q.kinds, q.payload, q.rels, q.U, q.n_slots, q.prefix_slots,
            q.candidates, q.const_nodes, q.sched)[0])
    return out


def bench_sigma22():
    structures = [build_structure(random_instance(5, 3, 6, seed=2000 + i))
                  for i in range(30)]
    formula = build_sigma22_formula(4)
    t_fast, r_fast = time_call(mc_batch, kernels.mc_core, structures, formula,
                               repeat=2)
    t_pure, r_pure = time_call(mc_batch, pure_mc, structures, formula,
                               repeat=2)
    assert r_fast == r_pure
    return "mc: sigma22 k=4, 30 instances", t_fast, t_pure


def bench_sigma1():
    structures = []
    i = 0
    while len(structures) < 4:
        inst = random_instance(5, 3, 6, seed=4000 + i, unary=True, max_pre=3)
        i += 1
        if shortest_plan(inst, 4) is None and classify(inst).unary:
            structures.append(build_extended_structure(inst, 4))
    formula = build_sigma1_formula(4)
    t_fast, r_fast = time_call(mc_batch, kernels.mc_core, structures, formula,
                               repeat=1)
    t_pure, r_pure = time_call(mc_batch, pure_mc, structures, formula,
                               repeat=1)
    assert r_fast == r_pure
    return "mc: sigma1 k=4, 4 unsolvable instances", t_fast, t_pure


def main():
    print(f"backends: {kernels.backend_summary()}")
    if not (kernels.BFS_COMPILED and kernels.MC_COMPILED):
        print("note: compiled kernels unavailable, comparing pure vs pure")
    rows = [bench_bfs(), bench_sigma22(), bench_sigma1()]
    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'compiled':>9}  {'pure':>9}  speedup")
    for name, t_fast, t_pure in rows:
        print(f"{name:<{width}}  {t_fast * 1e3:>8.1f}ms  {t_pure * 1e3:>8.1f}ms"
              f"  {t_pure / t_fast:>6.1f}x")


if __name__ == "__main__":
    main()
