"""Command-line front end: ``sep2 <command> ...``.

Exit status: 0 on success, 1 when a verification fails, 2 on usage or
configuration errors.  Settings come from defaults, then the JSON file named
by $SEP2_CONFIG, then command-line flags.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile

from . import farey as fy
from . import markings as mk
from . import sepgraph as sgph
from . import subsurfaces as sub
from . import suites
from . import surfgroup as sg
from .farey import Slope


class UnknownSuite(ValueError):
    pass


class ConfigError(ValueError):
    pass


@dataclasses.dataclass
class RunConfig:
    bound: int = 100
    range: int | None = None
    word_bound: int = 16
    radius: int = 3
    mcg_length: int = 5
    window: int = 3
    threshold: int = 0
    samples: int | None = None
    seed: int = 0
    out: str | None = None

    def check(self):
        for name in ("bound", "range", "word_bound", "mcg_length", "window"):
            if getattr(self, name) is not None and getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.radius < 0 or self.threshold < 0:
            raise ConfigError("radius and threshold must be non-negative")
        if self.samples is not None and self.samples <= 0:
            raise ConfigError("samples must be positive")
        if self.seed is None:
            raise ConfigError("a seed is required")
        return self


_FLAG_FIELDS = [f.name for f in dataclasses.fields(RunConfig)]


def load_config(args) -> RunConfig:
    data = {}
    path = os.environ.get("SEP2_CONFIG")
    if path:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read SEP2_CONFIG {path}: {exc}") from exc
        unknown = set(data) - set(_FLAG_FIELDS)
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
    for name in _FLAG_FIELDS:
        val = getattr(args, name, None)
        if val is not None:
            data[name] = val
    return RunConfig(**data).check()


def write_atomic(path: str, payload) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    with os.fdopen(fd, "w") as fh:
        json.dump(payload, fh, indent=2, default=str)
    os.replace(tmp, path)


def _emit(obj, cfg: RunConfig | None = None):
    if isinstance(obj, (dict, list)):
        print(json.dumps(obj, indent=2, default=str))
    elif isinstance(obj, bool):
        print("true" if obj else "false")
    else:
        print(obj)
    if cfg is not None and cfg.out and isinstance(obj, dict):
        write_atomic(cfg.out, obj)


def _load_marking(path: str) -> mk.Marking:
    with open(path) as fh:
        return mk.Marking.from_json(json.load(fh))


# -- commands --------------------------------------------------------------------


def cmd_curve(args, cfg):
    op, words = args.op, args.words
    need = 2 if op == "intersect" else 1
    if len(words) != need:
        raise ConfigError(f"curve {op} takes {need} word(s)")
    if op == "reduce":
        try:
            return sg.canonical(words[0])
        except sg.EmptyWord:
            return "1"
    if op == "homology":
        return " ".join(str(x) for x in sg.homology_class(sg.reduce(words[0])))
    if op == "simple":
        return sg.self_intersection(words[0]) == 0
    if op == "separating":
        c = sg.try_curve(words[0])
        return bool(c and c.separating)
    return sg.intersection_number(words[0], words[1])


def cmd_farey(args, cfg):
    xs = [Slope.parse(s) for s in args.slopes]
    op = args.op
    if op == "parity":
        return fy.parity_class(xs[0]).name
    a, b = xs[0], xs[1]
    if op == "adjacent":
        return fy.farey_adjacent(a, b)
    if op == "mediant":
        return str(fy.mediant(a, b))
    if op == "completions":
        return " ".join(str(x) for x in fy.triangle_completions(a, b))
    if op == "geodesic":
        return " ".join(str(x) for x in fy.farey_geodesic(a, b))
    return fy.farey_distance(a, b)


def cmd_phi(args, cfg):
    m = _load_marking(args.marking)
    choice = mk.phi(m)
    return f"{choice.curve.word} {choice.source} k={choice.k + 1}"


def cmd_move(args, cfg):
    m = _load_marking(args.marking)
    i = args.index - 1
    if args.kind == "twist":
        return mk.twist_move(m, i, args.dir).to_json()
    outs = mk.flip_move(m, i, cfg.window)
    return {"markings": [o.to_json() for o in outs]}


def cmd_project(args, cfg):
    chart = sub.chart_for(args.boundary[0], args.boundary[1], meridian=args.meridian)
    slopes = sorted(chart.project(args.curve))
    return {"chart": chart.to_json(), "projection": [str(s) for s in slopes]}


def cmd_classify(args, cfg):
    return sub.classify_subsurface(args.boundary, args.witness).to_json()


def cmd_ball(args, cfg):
    ball = sgph.build_ball(args.center, cfg.word_bound, cfg.radius, cfg.mcg_length)
    rep = ball.to_json()
    rep["config"] = dataclasses.asdict(cfg)
    return rep


def _load_ball(path: str) -> sgph.TruncatedBall:
    with open(path) as fh:
        data = json.load(fh)
    adj = {v: [] for v in data["vertices"]}
    for u, v in data["edges"]:
        adj[u].append(v)
        adj[v].append(u)
    return sgph.TruncatedBall.from_graph(adj, data["center"], params=data.get("params"))


def cmd_delta(args, cfg):
    ball = _load_ball(args.ball)
    rep = sgph.estimate_delta(ball, cfg.samples or 20000, cfg.seed)
    rep["config"] = dataclasses.asdict(cfg)
    return rep


def cmd_bound(args, cfg):
    charts = []
    for path in args.markings:
        m = _load_marking(path)
        for k in range(3):
            others = [b for j, b in enumerate(m.bases) if j != k]
            if not any(b.separating for b in others):
                charts.append(sub.chart_for(others[0], others[1]))
    ball = _load_ball(args.ball) if args.ball else None
    rep = sgph.projection_lower_bound(args.u, args.v, charts, cfg.threshold, ball)
    rep["charts"] = len(charts)
    return rep


def cmd_audit(args, cfg):
    if args.what == "lemma-naturality":
        return suites.lemma_naturality(samples=cfg.samples or 200, seed=cfg.seed, window=cfg.window)
    if args.what == "holes":
        return suites.holes(pairs=cfg.samples or 100, seed=cfg.seed)
    ball = sgph.build_ball("abAB", cfg.word_bound, cfg.radius, cfg.mcg_length)
    rep = sgph.adjacency_scan(ball.vertices)
    rep["ok"] = rep["min_intersection"] == 4 and not rep["below_four"]
    return rep


def run_suite(name: str, cfg: RunConfig) -> dict:
    if name not in suites.SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {sorted(suites.SUITES)}")
    kw = {
        "farey-parity": lambda: {"bound": cfg.bound},
        "completions": lambda: {"samples": cfg.samples or 1000, "seed": cfg.seed},
        "slope-determinant": lambda: {"range_": cfg.range or 10},
        "figure3": lambda: {"range_": cfg.range or 5},
        "lemma-naturality": lambda: {"samples": cfg.samples or 200, "seed": cfg.seed, "window": cfg.window},
        "claim-onesep": lambda: {"samples": cfg.samples or 500, "seed": cfg.seed},
        "twist-relations": lambda: {"seed": cfg.seed},
        "holes": lambda: {"pairs": cfg.samples or 100, "seed": cfg.seed},
        "delta": lambda: {
            "word_bound": cfg.word_bound,
            "radius": cfg.radius,
            "mcg_length": cfg.mcg_length,
            "samples": cfg.samples or 20000,
            "seed": cfg.seed,
        },
    }[name]()
    rep = suites.SUITES[name](**kw)
    rep["suite"] = name
    rep["config"] = dataclasses.asdict(cfg)
    return rep


def cmd_verify(args, cfg):
    rep = run_suite(args.suite, cfg)
    return rep


def _add_common(p):
    p.add_argument("--bound", type=int)
    p.add_argument("--range", type=int)
    p.add_argument("--word-bound", dest="word_bound", type=int)
    p.add_argument("--radius", type=int)
    p.add_argument("--mcg-length", dest="mcg_length", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--threshold", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sep2", description=__doc__.splitlines()[0])
    sub_p = parser.add_subparsers(dest="command", required=True)

    p = sub_p.add_parser("curve", help="word engine queries")
    p.add_argument("op", choices=["reduce", "homology", "simple", "separating", "intersect"])
    p.add_argument("words", nargs="+")
    p.set_defaults(fn=cmd_curve)

    p = sub_p.add_parser("farey", help="Farey graph arithmetic")
    p.add_argument("op", choices=["adjacent", "mediant", "completions", "parity", "geodesic", "dist"])
    p.add_argument("slopes", nargs="+")
    p.set_defaults(fn=cmd_farey)

    p = sub_p.add_parser("phi", help="separating curve assigned to a marking")
    p.add_argument("marking")
    p.set_defaults(fn=cmd_phi)

    p = sub_p.add_parser("move", help="elementary moves on a marking")
    p.add_argument("kind", choices=["twist", "flip"])
    p.add_argument("marking")
    p.add_argument("--index", type=int, required=True, help="pair index, 1-based")
    p.add_argument("--dir", type=int, default=1, choices=[1, -1])
    p.set_defaults(fn=cmd_move)

    p = sub_p.add_parser("project", help="project a curve into S minus two curves")
    p.add_argument("boundary", nargs=2)
    p.add_argument("curve")
    p.add_argument("--meridian")
    p.set_defaults(fn=cmd_project)

    p = sub_p.add_parser("classify", help="classify an essential subsurface")
    p.add_argument("boundary", nargs="+")
    p.add_argument("--witness", required=True)
    p.set_defaults(fn=cmd_classify)

    p = sub_p.add_parser("ball", help="truncated separating-curve balls")
    p.add_argument("action", choices=["build"])
    p.add_argument("--center", default="abAB")
    p.set_defaults(fn=cmd_ball)

    p = sub_p.add_parser("delta", help="four-point delta estimate on a ball file")
    p.add_argument("action", choices=["estimate"])
    p.add_argument("ball")
    p.set_defaults(fn=cmd_delta)

    p = sub_p.add_parser("bound", help="projection lower bound for two separating curves")
    p.add_argument("action", choices=["project"])
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--markings", nargs="+", required=True, help="marking files whose base pairs give the charts")
    p.add_argument("--ball", help="ball file for the BFS upper bound")
    p.set_defaults(fn=cmd_bound)

    p = sub_p.add_parser("audit", help="corpus audits")
    p.add_argument("what", choices=["lemma-naturality", "holes", "adjacency"])
    p.set_defaults(fn=cmd_audit)

    p = sub_p.add_parser("verify", help="run a verification suite")
    p.add_argument("suite")
    p.set_defaults(fn=cmd_verify)

    for p in sub_p.choices.values():
        _add_common(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        result = args.fn(args, cfg)
    except (ConfigError, UnknownSuite, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, sg.EmptyWord) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(result, cfg)
    if isinstance(result, dict) and "ok" in result:
        if args.command == "verify":
            print(f"[{'PASS' if result['ok'] else 'FAIL'}] {args.suite}", file=sys.stderr)
        return 0 if result["ok"] else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
