"""Acceptance criteria 1-9, each reported as one pass/fail line."""
import math
import sys
import time
import warnings

import numpy as np
import pytest

from conftest import ACCEPTANCE
from oracles import compare_with_oracle, covers_at, overlap_at, random_pair, regular_optimum, valid_instance
from rotlabel.exact import solve
from rotlabel.geometry import build_conflicts, hard_conflict_set, soft_conflict_set
from rotlabel.greedy import GreedyStrategy, greedy_solve
from rotlabel.io import dumps_instance, dumps_labeling, generate_random, loads_instance, loads_labeling
from rotlabel.model import ModelConfig, RangeKind, check_validity, total_activity
from rotlabel.qapx import qapx_solve
from rotlabel.solvers import SOLVER_NAMES, run_solver


def report(num: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.append((num, ok, detail))
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")


def small_instances(count=50, max_events=12):
    out, seed = [], 0
    while len(out) < count:
        seed += 1
        cs = build_conflicts(generate_random(4, (2.5, 2.5), (0.6, 1.4), (0.6, 1.4), seed))
        if cs.pairs and cs.stats.e <= max_events:
            out.append(cs)
    return out


def unit_square_instances(count=100):
    # alternate dense and sparse regions; every instance is statically valid
    return [valid_instance(7000 + s, 10, 4.0 if s % 2 else 5.0) for s in range(count)]


_exact_cache: dict = {}


def exact(cs, cfg):
    key = (id(cs), cfg)
    if key not in _exact_cache:
        _exact_cache[key] = solve(cs, cfg)
    return _exact_cache[key]


SMALL = small_instances()
UNIT = unit_square_instances()
UNIT_CS = [build_conflicts(i) for i in UNIT]


def test_criterion_1_geometry_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240601)
    mism = bad_arcs = 0
    worst = 0.0
    for _ in range(200):
        l1, l2 = random_pair(rng)
        for S, pred in (
            (soft_conflict_set(l1, l2), lambda a: overlap_at(l1, l2, a)),
            (hard_conflict_set(l1, l2), lambda a: covers_at(l1, l2, a)),
            (hard_conflict_set(l2, l1), lambda a: covers_at(l2, l1, a)),
        ):
            m, dev, bad = compare_with_oracle(S, pred, probes=10_000)
            mism += m
            bad_arcs += bad
            worst = max(worst, dev)
    dt = time.perf_counter() - t0
    ok = mism == 0 and bad_arcs == 0 and worst < 1e-6 and dt < 10
    report(1, ok, f"200 pairs x 3 sets x 1e4 probes: {mism} mismatches, max boundary dev {worst:.2e}, {dt:.1f}s")
    assert ok


def test_criterion_2_exact_vs_enumeration():
    t0 = time.perf_counter()
    worst = 0.0
    unproven = 0
    for cs in SMALL:
        for r in ("kR:1", "kR:2", "inf"):
            for mode in ("soft", "hard"):
                cfg = ModelConfig.parse(r, mode)
                sol = exact(cs, cfg)
                unproven += not sol.proven
                worst = max(worst, abs(sol.objective - regular_optimum(cs, cfg)))
    dt = time.perf_counter() - t0
    ok = worst < 1e-9 and unproven == 0 and dt < 60
    report(2, ok, f"50 instances x 6 models: max |diff| {worst:.1e}, {dt:.1f}s")
    assert ok


def test_criterion_3_monotonicity():
    chain = ("01", "kR:1", "kR:2", "kR:3", "inf")
    violations = 0
    uplift = []
    for cs in SMALL + UNIT_CS[:30]:
        t = {}
        for mode in ("soft", "hard"):
            for r in chain:
                t[(r, mode)] = exact(cs, ModelConfig.parse(r, mode)).objective
            # exact: no tolerance on the ordering beyond float summation noise
            violations += sum(t[(a, mode)] > t[(b, mode)] + 1e-9 for a, b in zip(chain, chain[1:]))
        violations += sum(t[(r, "hard")] > t[(r, "soft")] + 1e-9 for r in chain)
        if t[("kR:1", "hard")] > 0:
            uplift.append(t[("kR:1", "soft")] / t[("kR:1", "hard")] - 1)
    ok = violations == 0
    report(3, ok, f"{len(SMALL) + 30} instances: {violations} violations; mean soft-over-hard uplift (1R) {100 * np.mean(uplift):.1f}%")
    assert ok


def test_criterion_4_approximation_guarantees():
    cfg = ModelConfig.kr(1)
    worst_g = worst_q = 1.0
    unproven = 0
    for inst, cs in zip(UNIT, UNIT_CS):
        sol = exact(cs, cfg)
        unproven += not sol.proven
        opt = sol.objective
        g = total_activity(greedy_solve(cs, cfg, GreedyStrategy.MAX))
        q = total_activity(qapx_solve(inst, cs, cfg))
        worst_g = min(worst_g, g / opt)
        worst_q = min(worst_q, q / opt)
    ok = unproven == 0 and worst_g >= 1 / 8 and worst_q >= 1 / 4
    report(4, ok, f"100 unit-square instances: min GreedyMax/OPT {worst_g:.3f} (>= 0.125), min qapx/OPT {worst_q:.3f} (>= 0.25), unproven {unproven}")
    assert ok


def test_criterion_5_validity_matrix():
    models = [ModelConfig.parse(r, m) for r in ("01", "kR:1", "kR:2", "kR:3", "inf") for m in ("soft", "hard")]
    bad = runs = skipped = 0
    for inst, cs in list(zip(UNIT, UNIT_CS))[:12]:
        for cfg in models:
            for name in SOLVER_NAMES:
                if cfg.ranges is RangeKind.ZERO_ONE and name not in ("qapx", "exact"):
                    skipped += 1  # greedy has no 0/1 variant
                    continue
                phi = run_solver(name, inst, cs, cfg)
                runs += 1
                rep = check_validity(phi, cs, cfg)
                over = cfg.max_ranges is not None and any(len(phi[i]) > cfg.max_ranges for i in cs.ids)
                bad += (not rep.ok) or over
    ok = bad == 0
    report(5, ok, f"{runs} solver runs over 10 models x 8 solvers: {bad} invalid ({skipped} greedy 0/1 cells not applicable)")
    assert ok


def test_criterion_6_greedymax_variants():
    diff = 0
    configs = [ModelConfig.kr(1), ModelConfig.kr(2), ModelConfig.kr(3, "hard"), ModelConfig.unlimited("hard")]
    for s in range(100):
        cs = build_conflicts(generate_random(40, (9.0, 9.0), (0.5, 1.8), (0.4, 1.2), 9000 + s))
        cfg = configs[s % len(configs)]
        a = greedy_solve(cs, cfg, GreedyStrategy.MAX)
        b = greedy_solve(cs, cfg, GreedyStrategy.MAX, fast=True)
        diff += a.active != b.active
    ok = diff == 0
    report(6, ok, f"100 instances: {diff} differing labelings")
    assert ok


def test_criterion_7_greedy_quality():
    cfg = ModelConfig.kr(1)
    ratios = {st: [] for st in GreedyStrategy}
    for cs in UNIT_CS[::2][:30]:  # the moderate-density half (region 5 x 5)
        sol = exact(cs, cfg)
        if not sol.proven:
            continue
        for st in GreedyStrategy:
            ratios[st].append(total_activity(greedy_solve(cs, cfg, st)) / sol.objective)
    means = {st.value: float(np.mean(v)) for st, v in ratios.items()}
    detail = ", ".join(f"{k} {v:.3f}" for k, v in means.items())
    low = [k for k, v in means.items() if v < 0.85]
    if low:
        warnings.warn(f"greedy mean ratio below 0.85 for {low}")
    report(7, True, f"mean greedy/OPT on 1R-soft: {detail}" + (f" (soft warning: {low} < 0.85)" if low else ""))


def _instance_with(n, seed):
    side = math.sqrt(n * 4.0)
    inst = generate_random(int(n * 1.5), (side, side), seed=seed)
    return inst.subset(sorted(inst.ids)[:n])


def _best_time(fn, repeats=5):
    best = math.inf
    for _ in range(repeats):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def test_criterion_8_performance():
    inst = _instance_with(2500, 1)
    assert len(inst) == 2500
    cs = build_conflicts(inst)
    t2500 = _best_time(lambda: greedy_solve(cs, ModelConfig.kr(1), GreedyStrategy.MAX), 3)
    ns = [500, 1000, 2000, 4000]
    times = []
    for n in ns:
        csn = build_conflicts(_instance_with(n, n))
        times.append(_best_time(lambda: greedy_solve(csn, ModelConfig.kr(1), GreedyStrategy.MAX, fast=True)))
    c = [t / (n * math.log(n)) for t, n in zip(times, ns)]
    spread = max(c) / min(c)
    slope = float(np.polyfit(np.log(ns), np.log(times), 1)[0])
    ok = t2500 < 2.0 and spread <= 2.0
    report(8, ok, f"GreedyMax on 2500 labels (degree {cs.stats.c}) {t2500:.3f}s; t/(n log n) spread {spread:.2f} (<= 2), log-log slope {slope:.2f}")
    assert ok


def test_criterion_9_round_trip_and_determinism():
    problems = []
    a = dumps_instance(generate_random(60, (8.0, 8.0), (0.5, 1.5), (0.5, 1.0), 99))
    b = dumps_instance(generate_random(60, (8.0, 8.0), (0.5, 1.5), (0.5, 1.0), 99))
    if a != b or dumps_instance(loads_instance(a)) != a:
        problems.append("instance file")
    inst = loads_instance(a).subset(range(14))
    cs = build_conflicts(inst)
    for cfg in (ModelConfig.kr(1), ModelConfig.kr(2, "hard"), ModelConfig.unlimited()):
        for name in SOLVER_NAMES:
            t1 = dumps_labeling(run_solver(name, inst, cs, cfg))
            t2 = dumps_labeling(run_solver(name, inst, build_conflicts(loads_instance(dumps_instance(inst))), cfg))
            if t1 != t2:
                problems.append(f"{name} {cfg} not deterministic")
            if dumps_labeling(loads_labeling(t1)) != t1:
                problems.append(f"{name} {cfg} labeling round trip")
    ok = not problems
    report(9, ok, "byte-identical round trips, 8 solvers x 3 models deterministic" if ok else "; ".join(problems))
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
