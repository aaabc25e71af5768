import pytest

from rotlabel.exact import build_model, emit_lp, read_solution, solve, solve_exact, write_solution
from rotlabel.geometry import build_conflicts
from rotlabel.lpformat import parse_solution
from rotlabel.model import AnchoredLabel, Instance, ModelConfig
from oracles import milp_optimum, pair, parse_lp, valid_instance


def test_single_label_unlimited():
    model = build_model(build_conflicts(Instance([AnchoredLabel(0, 0, 0, 1, 1)])), ModelConfig.unlimited())
    text = emit_lp(model)
    obj, rows, fixed, binaries = parse_lp(text)
    assert binaries == ["x_0_0"]
    assert rows == []
    assert "Subject To\nBounds\n" in text or "Subject To\nBinaries\n" in text


def test_d12_counts():
    text = emit_lp(build_model(build_conflicts(pair(1.2)), ModelConfig.kr(1)))
    _, rows, _, binaries = parse_lp(text)
    assert len(binaries) == 36
    names = [ln.split(":")[0].strip() for ln in text.splitlines() if ln.startswith(" ") and ":" in ln]
    assert sum(n.startswith("conf_") for n in names) == 4
    assert sum(n.startswith("run_") for n in names) == 18
    assert sum(n.startswith("budget_") for n in names) == 2


def test_emission_deterministic():
    cs = build_conflicts(valid_instance(2, 6, 3.0))
    cfg = ModelConfig.kr(2, "hard")
    assert emit_lp(build_model(cs, cfg)) == emit_lp(build_model(build_conflicts(valid_instance(2, 6, 3.0)), cfg))


def test_solution_round_trip():
    cs = build_conflicts(valid_instance(4, 7, 3.0))
    for cfg in (ModelConfig.kr(1), ModelConfig.kr(2, "hard"), ModelConfig.unlimited(), ModelConfig.zero_one()):
        model = build_model(cs, cfg)
        sol = solve_exact(model)
        back = read_solution(write_solution(sol, model), model)
        assert back.active == sol.labeling.active


def test_parse_solution_rejects_garbage():
    with pytest.raises(ValueError):
        parse_solution("x_0_0\n")


@pytest.mark.parametrize("seed", range(5))
def test_lp_optimum_matches_internal_solver(seed):
    cs = build_conflicts(valid_instance(60 + seed, 6, 3.0))
    for cfg in (ModelConfig.kr(1), ModelConfig.kr(2, "hard"), ModelConfig.unlimited(), ModelConfig.zero_one("hard")):
        model = build_model(cs, cfg)
        assert milp_optimum(emit_lp(model)) == pytest.approx(solve_exact(model).objective, abs=1e-6)


def test_min_ranges_lp_objective():
    cs = build_conflicts(pair(1.2))
    model = build_model(cs, ModelConfig.kr(2), True)
    text = emit_lp(model)
    obj, rows, _, _ = parse_lp(text)
    assert obj["b_0_0"] == pytest.approx(-model.s / 2, rel=1e-11)
    assert any(n.startswith(" cover_") for n in text.splitlines())
    sol = solve_exact(model)
    # the penalized program's optimum is at least the lexicographic solution's value
    assert milp_optimum(text) >= sol.penalized - 1e-6
