"""Command-line interface: ``rotlabel <command> ...``.

Exit codes: 0 success, 1 usage error, 2 input error, 3 degraded result
(a solver hit its time limit and returned its best labeling so far).
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from .evaluation import run_matrix, summarize
from .exact import DEFAULT_TIME_LIMIT, build_model, emit_lp
from .geometry import build_conflicts
from .io import (
    InputError,
    PointFeature,
    dumps_instance,
    dumps_labeling,
    generate_random,
    load_instance,
    load_labeling,
    mercator_project,
    prepare_static_labeling,
    read_geo_csv,
    svg_snapshot,
)
from .model import ModelConfig, check_validity, total_activity
from .solvers import SOLVER_NAMES, run_solver

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_DEGRADED = 0, 1, 2, 3

log = logging.getLogger("rotlabel")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: Optional[str]) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _model(args) -> ModelConfig:
    try:
        return ModelConfig.parse(args.model, args.conflicts)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def cmd_conflicts(args) -> int:
    inst = load_instance(args.instance)
    cs = build_conflicts(inst)
    st = cs.stats
    print(f"labels {st.n}")
    print(f"conflict pairs {len(cs.pairs)}")
    print(f"events {st.e}")
    print(f"max conflict degree {st.c}")
    print(f"max events per label {st.max_events_per_label}")
    print(f"components {len(cs.components())}")
    if args.pairs:
        for pc in cs.pairs:
            arcs = " ".join(f"[{iv.start:.9g},{iv.end:.9g}]" for iv in pc.soft.intervals)
            print(f"{pc.i} {pc.j} {arcs}")
    return EXIT_OK


def cmd_solve(args) -> int:
    cfg = _model(args)
    inst = load_instance(args.instance)
    cs = build_conflicts(inst)
    try:
        phi = run_solver(args.solver, inst, cs, cfg, args.time_limit)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(dumps_labeling(phi, args.solver), args.out)
    rep = check_validity(phi, cs, cfg)
    print(f"{args.solver} {cfg}: activity {total_activity(phi):.12g} ({rep.summary()})", file=sys.stderr)
    if phi.meta.get("degraded"):
        print("time limit reached; labeling is the best found, not proven optimal", file=sys.stderr)
        return EXIT_DEGRADED
    return EXIT_OK


def cmd_eval(args) -> int:
    models = []
    try:
        for m in _csv_list(args.models):
            for mode in _csv_list(args.conflicts):
                models.append(ModelConfig.parse(m, mode))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    solvers = _csv_list(args.solvers)
    unknown = [s for s in solvers if s not in SOLVER_NAMES]
    if unknown:
        raise UsageError(f"unknown solver(s): {', '.join(unknown)}")
    results = []
    text = ""
    for idx, path in enumerate(args.instances):
        res = run_matrix(load_instance(path), models, solvers, time_limit=args.time_limit, name=path)
        results.append(res)
        text += res.to_csv(header=idx == 0)
    _emit(text, args.out)
    if len(results) > 1:
        for row in summarize(results):
            mean = "n/a" if row["mean_ratio"] is None else f"{row['mean_ratio']:.4f}"
            sd = "n/a" if row["stdev_ratio"] is None else f"{row['stdev_ratio']:.4f}"
            print(f"{row['model']} {row['solver']}: mean ratio {mean} sd {sd} (n={row['count']})", file=sys.stderr)
    degraded = any(r.status == "degraded" for res in results for r in res.rows)
    return EXIT_DEGRADED if degraded else EXIT_OK


def cmd_gen(args) -> int:
    try:
        inst = generate_random(args.n, tuple(args.region), tuple(args.width), tuple(args.height), args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(dumps_instance(inst, args.units), args.out)
    return EXIT_OK


def cmd_ingest(args) -> int:
    recs = read_geo_csv(args.geocsv)
    pts = mercator_project(recs, args.scale)
    feats = [
        PointFeature(x, y, args.char_width * len(r.name) + args.padding, args.label_height, r.name, r.weight)
        for r, (x, y) in zip(recs, pts)
    ]
    inst = prepare_static_labeling(feats)
    _emit(dumps_instance(inst, f"km x {args.scale!r}"), args.out)
    print(f"labeled {len(inst)} of {len(recs)} points", file=sys.stderr)
    return EXIT_OK


def cmd_snapshot(args) -> int:
    inst = load_instance(args.instance)
    phi = load_labeling(args.labeling) if args.labeling else None
    _emit(svg_snapshot(inst, phi, args.alpha, scale=args.scale), args.out)
    return EXIT_OK


def cmd_emit_lp(args) -> int:
    cfg = _model(args)
    cs = build_conflicts(load_instance(args.instance))
    try:
        model = build_model(cs, cfg, args.minimize_ranges)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(emit_lp(model), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rotlabel", description="Label activity schedules for rotating maps.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def model_flags(sp):
        sp.add_argument("--model", default="kR:1", help="01, kR:<k> or inf (default kR:1)")
        sp.add_argument("--conflicts", default="soft", choices=["soft", "hard"])

    sp = sub.add_parser("conflicts", help="conflict and event summary")
    sp.add_argument("instance")
    sp.add_argument("--pairs", action="store_true", help="list every conflicting pair")
    sp.set_defaults(func=cmd_conflicts)

    sp = sub.add_parser("solve", help="compute a labeling")
    sp.add_argument("instance")
    model_flags(sp)
    sp.add_argument("--solver", default="gm", choices=SOLVER_NAMES)
    sp.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT)
    sp.add_argument("--seed", type=int, default=0, help="accepted for reproducibility; solvers are deterministic")
    sp.add_argument("--out", help="labeling file (default stdout)")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("eval", help="metrics for every model and solver")
    sp.add_argument("instances", nargs="+")
    sp.add_argument("--models", default="01,kR:1,kR:2,kR:3,inf")
    sp.add_argument("--conflicts", default="soft,hard")
    sp.add_argument("--solvers", default="gm,glc,gbr,exact")
    sp.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT)
    sp.add_argument("--out", help="metrics CSV (default stdout)")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("gen", help="seeded random instance")
    sp.add_argument("--n", type=int, default=50)
    sp.add_argument("--region", type=float, nargs=2, default=[10.0, 10.0], metavar=("W", "H"))
    sp.add_argument("--width", type=float, nargs=2, default=[1.0, 1.0], metavar=("LO", "HI"))
    sp.add_argument("--height", type=float, nargs=2, default=[1.0, 1.0], metavar=("LO", "HI"))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--units", default="unit")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("ingest", help="geographic CSV (name,lat,lon[,weight]) to instance")
    sp.add_argument("geocsv")
    sp.add_argument("--scale", type=float, default=1.0, help="map units per projected km")
    sp.add_argument("--char-width", type=float, default=6.0, help="label width per character")
    sp.add_argument("--padding", type=float, default=4.0)
    sp.add_argument("--label-height", type=float, default=10.0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_ingest)

    sp = sub.add_parser("snapshot", help="SVG of the map at one rotation angle")
    sp.add_argument("instance")
    sp.add_argument("labeling", nargs="?")
    sp.add_argument("--alpha", type=float, default=0.0, help="rotation angle in radians")
    sp.add_argument("--scale", type=float, default=40.0, help="pixels per map unit")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_snapshot)

    sp = sub.add_parser("emit-lp", help="integer program in CPLEX LP format")
    sp.add_argument("instance")
    model_flags(sp)
    sp.add_argument("--minimize-ranges", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_emit_lp)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"rotlabel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, OSError) as exc:
        print(f"rotlabel: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
