import random

import pytest

from rotlabel import kernels
from rotlabel._search import clique_cover_bound, evaluate_rows, popcount, split_components
from rotlabel.exact import build_model, solve_exact
from rotlabel.geometry import build_conflicts
from rotlabel.model import ModelConfig
from oracles import valid_instance

needs_ext = pytest.mark.skipif("cython" not in kernels.available_backends(), reason="extension not built")


def _brute_mis(cands, adj):
    verts = [v for v in range(len(adj)) if cands >> v & 1]
    best = 0
    for mask in range(1 << len(verts)):
        chosen = [verts[t] for t in range(len(verts)) if mask >> t & 1]
        if all(not (adj[a] >> b & 1) for a in chosen for b in chosen):
            best = max(best, len(chosen))
    return best


@pytest.mark.parametrize("backend", kernels.available_backends())
def test_mis_matches_brute_force(backend):
    rng = random.Random(1)
    for _ in range(60):
        n = rng.randint(1, 11)
        adj = [0] * n
        for a in range(n):
            for b in range(a + 1, n):
                if rng.random() < 0.4:
                    adj[a] |= 1 << b
                    adj[b] |= 1 << a
        cands = rng.getrandbits(n)
        got = kernels.max_independent_set(cands, adj, n, backend=backend)
        assert got & ~cands == 0
        assert all(not (adj[v] & got) for v in range(n) if got >> v & 1)
        assert popcount(got) == _brute_mis(cands, adj)


def _random_graph(rng, n, p):
    adj = [0] * n
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    return adj


def test_clique_cover_bound_is_upper_bound():
    rng = random.Random(2)
    for _ in range(80):
        n = rng.randint(1, 10)
        adj = _random_graph(rng, n, rng.random())
        cands = rng.getrandbits(n)
        assert clique_cover_bound(cands, adj) >= _brute_mis(cands, adj)


def test_split_components_partitions():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(1, 20)
        adj = _random_graph(rng, n, 0.1)
        cands = rng.getrandbits(n)
        comps = split_components(cands, adj)
        acc = 0
        for c in comps:
            assert c & acc == 0
            acc |= c
            # no edges leave a component inside cands
            assert all(not (adj[v] & cands & ~c) for v in range(n) if c >> v & 1)
        assert acc == cands


def test_mis_sets_identical_across_backends():
    if "cython" not in kernels.available_backends():
        pytest.skip("extension not built")
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(1, 40)
        adj = _random_graph(rng, n, rng.choice([0.05, 0.15, 0.4]))
        cands = rng.getrandbits(n)
        a = kernels.max_independent_set(cands, adj, n, backend="python")
        b = kernels.max_independent_set(cands, adj, n, backend="cython")
        assert a == b


@pytest.mark.parametrize("backend", kernels.available_backends())
def test_mis_budget_returns_maximal_set(backend):
    rng = random.Random(5)
    n = 60
    adj = _random_graph(rng, n, 0.1)
    full = (1 << n) - 1
    S, optimal = kernels.max_independent_set_budget(full, adj, n, 0.0, backend=backend)
    assert all(not (adj[v] & S) for v in range(n) if S >> v & 1)
    # maximal: every vertex outside S has a neighbour in S
    assert all(adj[v] & S for v in range(n) if not S >> v & 1)
    S2, optimal2 = kernels.max_independent_set_budget(full, adj, n, 30.0, backend=backend)
    assert optimal2 and popcount(S2) >= popcount(S)


def test_evaluate_rows_counts_circular_runs():
    lengths = [1.0, 2.0, 3.0, 4.0]
    # label 0 active on rows 3,0 (one wrapped run); label 1 on rows 0 and 2
    rows = [0b11, 0b00, 0b10, 0b01]
    assert evaluate_rows(lengths, rows, 0) == (1.0 * 2 + 3.0 + 4.0, 3)
    assert evaluate_rows(lengths, rows, 1)[1] is None
    assert evaluate_rows(lengths, [1, 1, 1, 1], 1) == (10.0, 1)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.max_independent_set(1, [0], 1, backend="fortran")


@needs_ext
@pytest.mark.parametrize("seed", range(8))
def test_backends_identical(seed):
    cs = build_conflicts(valid_instance(400 + seed, 7, 3.2))
    for cfg, lexi in ((ModelConfig.kr(1), False), (ModelConfig.kr(2, "hard"), False), (ModelConfig.kr(2), True)):
        model = build_model(cs, cfg, lexi)
        a = solve_exact(model, backend="python")
        b = solve_exact(model, backend="cython")
        assert a.proven and b.proven
        assert a.objective == b.objective and a.ranges == b.ranges and a.nodes == b.nodes
        assert a.labeling.active == b.labeling.active


@needs_ext
def test_compiled_rejects_wide_components():
    with pytest.raises(ValueError):
        kernels._pick(65, "cython")
    assert kernels._pick(65, None) is not kernels._compiled
