import math

import pytest

from rotlabel.angular import TWO_PI
from rotlabel.exact import solve
from rotlabel.geometry import build_conflicts
from rotlabel.greedy import GreedyStrategy
from rotlabel.model import AnchoredLabel, Instance, ModelConfig, check_validity, total_activity
from rotlabel.qapx import PARITIES, decompose, qapx_solve
from oracles import valid_instance


def sq(i, x, y):
    return AnchoredLabel(i, x, y, 1.0, 1.0)


def test_unit_square_cell_side():
    g = decompose(Instance([sq(0, 0, 0), sq(1, 3, 3)]))
    assert g.cell_side == pytest.approx(2 * math.sqrt(2))
    assert len(g.subinstances) == len(PARITIES) == 4


def test_single_cell_in_one_subinstance():
    g = decompose(Instance([sq(0, 0, 0), sq(1, 1.2, 0), sq(2, 0.5, 1.5)]))
    assert len(g.cells) == 1
    assert sum(len(s) for s in g.subinstances) == 1


def test_far_clusters_share_subinstance():
    side = 2 * math.sqrt(2)
    off = 10 * side
    inst = Instance([sq(0, 0.1, 0.1), sq(1, 1.3, 0.1), sq(2, off + 0.1, 0.1), sq(3, off + 1.3, 0.1)])
    g = decompose(inst)
    assert any(len(g.kept_labels(s)) == 4 for s in range(4))


def test_buffers_are_near_the_cell():
    inst = valid_instance(9, 30, 9.0)
    g = decompose(inst)
    by_id = inst.by_id()
    diag = max(l.diagonal for l in inst)
    for (r, c), near in g.buffers.items():
        x0 = g.origin[0] + c * g.cell_side
        y0 = g.origin[1] + r * g.cell_side
        for i in near:
            l = by_id[i]
            assert g.cell_of[i] != (r, c)
            dx = max(x0 - l.x, 0, l.x - x0 - g.cell_side)
            dy = max(y0 - l.y, 0, l.y - y0 - g.cell_side)
            assert math.hypot(dx, dy) <= diag + 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_kept_cells_never_interact(seed):
    inst = valid_instance(200 + seed, 30, 8.0)
    cs = build_conflicts(inst)
    g = decompose(inst, cs)
    for sub in g.subinstances:
        kept = set(sub)
        for pc in cs.pairs:
            ci, cj = g.cell_of[pc.i], g.cell_of[pc.j]
            if ci in kept and cj in kept:
                assert ci == cj


def test_single_label():
    inst = Instance([sq(0, 4, 4)])
    cs = build_conflicts(inst)
    assert total_activity(qapx_solve(inst, cs, ModelConfig.kr(1))) == TWO_PI


def test_one_cell_equals_exact():
    inst = Instance([sq(0, 0, 0), sq(1, 1.2, 0), sq(2, 0.6, 1.1)])
    cs = build_conflicts(inst)
    for cfg in (ModelConfig.kr(1), ModelConfig.kr(2, "hard")):
        assert total_activity(qapx_solve(inst, cs, cfg)) == pytest.approx(solve(cs, cfg).objective, abs=1e-9)


def test_post_with_zero_one_rejected():
    inst = Instance([sq(0, 0, 0)])
    with pytest.raises(ValueError):
        qapx_solve(inst, build_conflicts(inst), ModelConfig.zero_one(), GreedyStrategy.MAX)


@pytest.mark.parametrize("seed", range(8))
def test_quarter_guarantee_validity_and_dominance(seed):
    inst = valid_instance(300 + seed, 10, 5.0)
    cs = build_conflicts(inst)
    for cfg in (ModelConfig.kr(1), ModelConfig.kr(2, "hard")):
        opt = solve(cs, cfg).objective
        raw = qapx_solve(inst, cs, cfg)
        assert total_activity(raw) >= opt / 4 - 1e-9
        assert check_validity(raw, cs, cfg).ok
        for post in GreedyStrategy:
            phi = qapx_solve(inst, cs, cfg, post)
            assert check_validity(phi, cs, cfg).ok
            assert total_activity(phi) >= total_activity(raw) - 1e-9
            assert total_activity(phi) <= opt + 1e-9


def test_meta_names():
    inst = valid_instance(1, 6, 4.0)
    cs = build_conflicts(inst)
    names = {qapx_solve(inst, cs, ModelConfig.kr(1), p).meta["solver"] for p in [None, *GreedyStrategy]}
    assert names == {"qapx", "qgm", "qglc", "qgbr"}
