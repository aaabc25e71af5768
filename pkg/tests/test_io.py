import math

import pytest

from rotlabel.angular import TWO_PI, AngularSet
from rotlabel.geometry import build_conflicts
from rotlabel.greedy import greedy_solve
from rotlabel.io import (
    EARTH_RADIUS_KM,
    GeoRecord,
    InputError,
    PointFeature,
    dumps_instance,
    dumps_labeling,
    generate_random,
    generate_unit_squares,
    loads_instance,
    loads_labeling,
    mercator_project,
    prepare_static_labeling,
    read_geo_csv,
    svg_snapshot,
)
from rotlabel.model import AnchorCorner, AnchoredLabel, Instance, ModelConfig, RotationLabeling, validate_static
from oracles import pair


def test_instance_round_trip_exact():
    inst = Instance(
        [
            AnchoredLabel(3, 0.1 + 0.2, -1e-17, 1.5, 0.25, AnchorCorner.TOP_RIGHT, "São, Paulo", 12.5),
            AnchoredLabel(7, 1 / 3, 2.0, 0.7, 0.3, AnchorCorner.BOTTOM_RIGHT),
        ]
    )
    text = dumps_instance(inst, "km")
    back = loads_instance(text)
    assert back == inst
    assert dumps_instance(back, "km") == text
    assert text.startswith("# rotlabel-instance v1\n# units: km\nid,x,y,")


@pytest.mark.parametrize(
    "text",
    [
        "",
        "# rotlabel-instance v9\n# units: u\nid,x,y,width,height,corner,name,weight\n",
        "# rotlabel-instance v1\n# units: u\nid,x,y\n",
        "# rotlabel-instance v1\n# units: u\nid,x,y,width,height,corner,name,weight\n0,0,0,1,1,XX,,\n",
        "# rotlabel-instance v1\n# units: u\nid,x,y,width,height,corner,name,weight\n0,0,0,-1,1,BL,,\n",
        "# rotlabel-instance v1\n# units: u\nid,x,y,width,height,corner,name,weight\n0,0,0,1,1,BL,,\n0,5,5,1,1,BL,,\n",
    ],
)
def test_instance_parse_errors(text):
    with pytest.raises(InputError):
        loads_instance(text)


def test_labeling_round_trip_byte_identical():
    cs = build_conflicts(generate_unit_squares(12, 4.0, seed=3))
    for cfg in (ModelConfig.kr(2), ModelConfig.unlimited("hard")):
        phi = greedy_solve(cs, cfg)
        text = dumps_labeling(phi)
        back = loads_labeling(text)
        assert dumps_labeling(back) == text
        assert back.model == cfg
        for i in cs.ids:
            assert back[i].isclose(phi[i], 1e-10)


def test_labeling_snaps_full_circle():
    phi = RotationLabeling({0: AngularSet.full(), 1: AngularSet.from_interval(5.5, 0.5), 2: AngularSet.empty()}, ModelConfig.kr(1))
    back = loads_labeling(dumps_labeling(phi, "gm"))
    assert back[0].is_full and back[2].is_empty
    assert back[1].isclose(phi[1], 1e-11)
    assert back.meta["solver"] == "gm"


@pytest.mark.parametrize("body", ["0,1 2 3\n", "x,1 2\n", "0,1 9\n", "0,1 2\n0,3 4\n"])
def test_labeling_parse_errors(body):
    with pytest.raises(InputError):
        loads_labeling("# rotlabel-labeling v1\n# model: kR:1/soft\n# solver: gm\nid,intervals\n" + body)


def test_mercator_examples():
    pts = mercator_project([GeoRecord("a", 0, 0), GeoRecord("b", 0, 180), GeoRecord("c", 45, 0)], scale=2.0)
    assert pts[0] == pytest.approx((0.0, 0.0), abs=1e-9)
    assert pts[1] == pytest.approx((EARTH_RADIUS_KM * math.pi * 2.0, 0.0), abs=1e-9)
    assert pts[2][0] == 0.0
    assert pts[2][1] == pytest.approx(EARTH_RADIUS_KM * math.log(math.tan(3 * math.pi / 8)) * 2.0)


@pytest.mark.parametrize("lat,lon", [(85.06, 0), (-90, 0), (0, 180.5), (float("nan"), 0)])
def test_geo_guards(lat, lon):
    with pytest.raises(InputError):
        GeoRecord("x", lat, lon)


def test_read_geo_csv(tmp_path):
    p = tmp_path / "cities.csv"
    p.write_text("name,lat,lon,weight\nA,10,20,5\nB,-10,-20,\n", encoding="utf-8")
    recs = read_geo_csv(str(p))
    assert recs == [GeoRecord("A", 10.0, 20.0, 5.0), GeoRecord("B", -10.0, -20.0, None)]
    p.write_text("name,lat\nA,1\n", encoding="utf-8")
    with pytest.raises(InputError):
        read_geo_csv(str(p))


def test_static_labeling_examples():
    far = prepare_static_labeling([PointFeature(0, 0, 1, 1), PointFeature(10, 10, 1, 1)])
    assert len(far) == 2
    one = prepare_static_labeling([PointFeature(3, 3, 1, 1)])
    assert one.labels[0].corner is AnchorCorner.BOTTOM_LEFT
    close = prepare_static_labeling([PointFeature(0, 0, 1, 1), PointFeature(0.3, 0, 1, 1)])
    assert validate_static(close) == []
    assert len(close) == 2 and close.labels[1].corner is not AnchorCorner.BOTTOM_LEFT


def test_static_labeling_prefers_heavy_points():
    pts = [PointFeature(0, 0, 1, 1, "light", 1.0), PointFeature(0.5, 0.5, 1, 1, "heavy", 9.0)]
    # a crowd around the heavy point blocks all but one candidate
    inst = prepare_static_labeling(pts)
    assert any(l.name == "heavy" and l.corner is AnchorCorner.BOTTOM_LEFT for l in inst)


def test_static_labeling_drops_duplicates_and_blocked():
    pts = [PointFeature(0, 0, 2, 2)] * 2 + [PointFeature(0.1 * k, 0.05, 2, 2) for k in range(1, 8)]
    inst = prepare_static_labeling(pts)
    assert validate_static(inst) == []
    assert len(inst) < len(pts)


def test_generate_random_deterministic():
    a = generate_random(1, seed=42)
    assert len(a) == 1 and validate_static(a) == []
    assert dumps_instance(generate_random(1, seed=42)) == dumps_instance(a)
    assert dumps_instance(generate_unit_squares(50, 10.0, 7)) == dumps_instance(generate_unit_squares(50, 10.0, 7))


def test_generate_random_dense_has_conflicts():
    inst = generate_unit_squares(10, 4.0, seed=0)
    assert validate_static(inst) == []
    assert len(build_conflicts(inst).pairs) == 13  # pinned


@pytest.mark.parametrize(
    "kw", [dict(n=0), dict(n=3, region=(0, 1)), dict(n=3, width_range=(2, 1)), dict(n=3, height_range=(0, 1))]
)
def test_generate_random_rejects_bad_input(kw):
    with pytest.raises(ValueError):
        generate_random(**kw)


def test_svg_empty_labeling_dots_only():
    inst = pair(1.2)
    svg = svg_snapshot(inst, RotationLabeling.empty(inst.ids, ModelConfig.kr(1)), 0.3)
    assert svg.count("<circle") == 2 and "<rect" not in svg
    assert 'version="1.1"' in svg


def test_svg_single_full_label_axis_aligned():
    inst = Instance([AnchoredLabel(0, 1, 1, 2, 1)])
    svg = svg_snapshot(inst, RotationLabeling({0: AngularSet.full()}, ModelConfig.kr(1)), 0.0)
    assert svg.count("<rect") == 1 and "rotate(0 1 1)" in svg


def test_svg_conflict_angle_draws_at_most_one():
    inst = pair(1.2)
    cs = build_conflicts(inst)
    assert 0.8 in cs.pair(0, 1).soft
    for k in (1, 2):
        phi = greedy_solve(cs, ModelConfig.kr(k))
        assert svg_snapshot(inst, phi, 0.8).count("<rect") <= 1
    assert svg_snapshot(inst, phi, 0.8) == svg_snapshot(inst, phi, 0.8)
