"""beflow command line: check, bed, bisect, weak5, hunt, verify, gen.

Exit status: 0 feasible / found / verified, 1 infeasible / not found /
verification failed, 2 input or internal error. Records go to stdout as
JSON lines with sorted keys, so identical runs give identical bytes.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .bisection import find_k_weak, hunt_one, is_k_weak
from .cache import ResultCache, canonical_json
from .canon import canonical_form, corpus
from .errors import BadBounds, BeflowError, EmptyBelowOne, MalformedInput
from .flow import FlowAssignment, FlowPoint, check_flow, fmt, parse_rational, verify_flow
from .graph import NAMED, CubicMultigraph, format_edge_list, import_graph6, iter_edge_records
from .orientation import Bisection, check_orientable
from .region import DEFAULT_RMAX, FlowRegion, bed_of_graph, min_trace, named_in_region, parse_named
from .weak5 import construct_orientable_5weak, verify_certificate

log = logging.getLogger("beflow")

DEFAULT_OVERLAYS = ("M_4", "M_5", "urd(7/2,1/2)")
_GEN = re.compile(r"^\s*(?:(\d+)\s*<=\s*)?n\s*(<=|=|==)\s*(\d+)\s*$")


@dataclass
class RunConfig:
    command: str
    graphs: list[str] = field(default_factory=list)
    graph6: list[str] = field(default_factory=list)
    gen: str | None = None
    simple: bool = False
    r: Fraction | None = None
    alpha: Fraction | None = None
    r_max: Fraction = DEFAULT_RMAX
    k: int | None = None
    orientable: bool = False
    conjecture: str | None = None
    overlays: tuple[str, ...] = DEFAULT_OVERLAYS
    out: Path | None = None
    svg: Path | None = None
    cert: Path | None = None
    cache: Path | None = None
    depth: str = "release"
    jobs: int = 1
    lenient: bool = False

    def __post_init__(self):
        if not 2 < self.r_max:
            raise BadBounds(f"window needs 2 <= r_lo < r_hi, got r_hi = {self.r_max}")
        if self.jobs < 1:
            raise MalformedInput("--jobs must be positive")


# ---------------------------------------------------------------- inputs

def parse_gen(spec: str) -> tuple[int, int]:
    """'n<=10', 'n=8' or '6<=n<=10' -> (min_n, max_n)."""
    m = _GEN.match(spec)
    if not m:
        raise MalformedInput(f"bad generator spec {spec!r}; use 'n<=10', 'n=8' or '4<=n<=10'")
    lo, op, hi = m.groups()
    hi = int(hi)
    lo = hi if op in ("=", "==") else int(lo) if lo else 2
    return lo, hi


def _read_graph_arg(arg: str, lenient: bool) -> list[CubicMultigraph]:
    path = Path(arg)
    if not path.exists():
        name = path.stem if path.suffix == ".cub" else arg
        if name in NAMED:
            return [NAMED[name]()]
        raise MalformedInput(f"no such graph file or named graph: {arg!r}")
    out = []
    for lineno, item in iter_edge_records(path.read_text()):
        if isinstance(item, BeflowError):
            if not lenient:
                raise item
            log.warning("skipping %s: %s", path, item)
            continue
        out.append(item)
    return out


def _read_graph6_arg(arg: str, lenient: bool) -> list[CubicMultigraph]:
    path = Path(arg)
    lines = path.read_text().splitlines() if path.exists() else [arg]
    out = []
    for line in lines:
        if not line.strip():
            continue
        try:
            out.append(import_graph6(line))
        except BeflowError as exc:
            if not lenient:
                raise
            log.warning("skipping graph6 entry %r: %s", line, exc)
    return out


def load_graphs(cfg: RunConfig) -> list[CubicMultigraph]:
    graphs: list[CubicMultigraph] = []
    for arg in cfg.graphs:
        graphs.extend(_read_graph_arg(arg, cfg.lenient))
    for arg in cfg.graph6:
        graphs.extend(_read_graph6_arg(arg, cfg.lenient))
    if cfg.gen:
        lo, hi = parse_gen(cfg.gen)
        graphs.extend(corpus(hi, allow_parallel=not cfg.simple, min_n=lo))
    elif cfg.simple:
        graphs = [g for g in graphs if g.is_simple]
    if not graphs:
        raise MalformedInput("no input graphs (use --graph, --graph6 or --gen)")
    return graphs


# ---------------------------------------------------------------- per-graph work

def _graph_json(g: CubicMultigraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges], "canonical_form": canonical_form(g)}


def _params(cfg: RunConfig) -> dict:
    if cfg.command == "check":
        return {"r": fmt(cfg.r), "alpha": fmt(cfg.alpha)}
    if cfg.command == "bed":
        return {"r_max": fmt(cfg.r_max), "overlays": list(cfg.overlays)}
    if cfg.command == "bisect":
        return {"k": cfg.k, "orientable": cfg.orientable}
    if cfg.command == "weak5":
        return {"depth": cfg.depth}
    if cfg.command == "hunt":
        return {"conjecture": cfg.conjecture}
    return {}


def do_check(g: CubicMultigraph, params: dict) -> dict:
    p = FlowPoint(params["r"], params["alpha"])
    res = check_flow(g, p, max_n=max(g.n, 14))
    rec = {"command": "check", "graph": _graph_json(g), "point": [fmt(p.r), fmt(p.alpha)]}
    if res.feasible:
        return {**rec, "verdict": "feasible", "bisection": list(res.bisection.colors),
                "witness": res.assignment.to_json(g.n)}
    cuts = sorted(res.reasons, key=lambda x: (-x.bound, sorted(x.violating_set), x.bisection.colors))
    return {**rec, "verdict": "infeasible", "worst_cuts": [
        {"bisection": list(x.bisection.colors), "set": sorted(x.violating_set), "bound": fmt(x.bound)}
        for x in cuts[:10]
    ], "orientable_bisections": len(res.reasons)}


def do_bed(g: CubicMultigraph, params: dict) -> dict:
    region = bed_of_graph(g, max_n=max(g.n, 14), r_max=Fraction(params["r_max"]))
    try:
        mt = fmt(min_trace(region))
    except EmptyBelowOne:
        mt = None
    overlays = {name: named_in_region(parse_named(name), region) for name in params["overlays"]}
    return {"command": "bed", "graph": _graph_json(g), "region": region.to_json(),
            "min_trace": mt, "contains": overlays, "verdict": "computed"}


def do_bisect(g: CubicMultigraph, params: dict) -> dict:
    k, orientable = params["k"], params["orientable"]
    bis = find_k_weak(g, k, require_orientable=orientable)
    rec = {"command": "bisect", "graph": _graph_json(g), "k": k, "orientable": orientable}
    if bis is None:
        return {**rec, "verdict": "none"}
    cert = check_orientable(g, bis)
    _, report = is_k_weak(g, bis, k)
    return {**rec, "verdict": "found", "bisection": list(bis.colors),
            "orientation": [list(a) for a in cert.orientation.arcs] if cert.orientable else None,
            "components": [{"color": c.color, "vertices": list(c.vertices), "is_tree": c.is_tree,
                            "size": c.size} for c in report.components]}


def do_weak5(g: CubicMultigraph, params: dict) -> dict:
    res = construct_orientable_5weak(g, debug=params["depth"] == "debug")
    cert = res.certificate(g)
    return {"command": "weak5", "graph": _graph_json(g), "verdict": "found",
            "fallback": res.fallback, "certificate": cert, "stats": vars(res.stats)}


def do_hunt(g: CubicMultigraph, params: dict) -> dict:
    rec = hunt_one(g, params["conjecture"])
    rec["command"] = "hunt"
    rec["graph"] = _graph_json(g)
    return rec


WORKERS = {"check": do_check, "bed": do_bed, "bisect": do_bisect, "weak5": do_weak5, "hunt": do_hunt}


def _work(job):
    command, n, edges, params = job
    return WORKERS[command](CubicMultigraph(n, edges), params)


# ---------------------------------------------------------------- verification

def verify_record(rec: dict) -> tuple[bool, list[str]]:
    """Re-check one emitted record through the independent verify paths."""
    cmd = rec.get("command") or rec.get("kind")
    if cmd == "weak5":
        return verify_certificate(rec.get("certificate", rec))
    graph = rec["graph"]
    g = CubicMultigraph(graph["n"], tuple(tuple(e) for e in graph["edges"]))
    if cmd == "check":
        p = FlowPoint(*rec["point"])
        if rec["verdict"] == "feasible":
            ok, _ = verify_flow(g, FlowAssignment.from_json(rec["witness"]), p)
            return ok, [] if ok else ["flow violates bounds"]
        fresh = check_flow(g, p, max_n=max(g.n, 14))
        return not fresh.feasible, [] if not fresh.feasible else ["a flow exists"]
    if cmd == "bisect":
        if rec["verdict"] == "none":
            found = find_k_weak(g, rec["k"], rec["orientable"])
            return found is None, [] if found is None else ["a bisection exists"]
        bis = Bisection(tuple(rec["bisection"]))
        problems = []
        if not is_k_weak(g, bis, rec["k"])[0]:
            problems.append(f"not {rec['k']}-weak")
        if rec["orientable"] and not check_orientable(g, bis).orientable:
            problems.append("not orientable")
        return not problems, problems
    if cmd == "bed":
        stored = FlowRegion.from_json(rec["region"])
        fresh = bed_of_graph(g, max_n=max(g.n, 14), r_max=stored.window[1])
        ok = fresh.points == stored.points
        return ok, [] if ok else ["frontier differs from recomputation"]
    if cmd == "hunt":
        fresh = hunt_one(g, rec["conjecture"])
        ok = fresh["verdict"] == rec["verdict"]
        return ok, [] if ok else ["verdict differs from recomputation"]
    raise MalformedInput(f"unknown certificate kind {cmd!r}")


def _load_records(path: Path) -> list[dict]:
    text = path.read_text()
    try:
        data = json.loads(text)
        return data if isinstance(data, list) else [data]
    except json.JSONDecodeError:
        pass
    try:
        return [json.loads(line) for line in text.splitlines() if line.strip()]
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: not JSON or JSON lines ({exc})") from None


# ---------------------------------------------------------------- commands

def _emit(records: list[dict], cfg: RunConfig) -> None:
    for rec in records:
        print(canonical_json(rec))
        if rec.get("finding"):
            print("FINDING: " + canonical_json(rec), file=sys.stderr)
    if cfg.out:
        if len(records) == 1:
            cfg.out.write_text(json.dumps(records[0], indent=2, sort_keys=True) + "\n")
        else:
            cfg.out.write_text("".join(canonical_json(r) + "\n" for r in records))


def _svg_path(base: Path, i: int, total: int) -> Path:
    return base if total == 1 else base.with_name(f"{base.stem}-{i}{base.suffix}")


def run_corpus(cfg: RunConfig) -> list[dict]:
    graphs = load_graphs(cfg)
    params = _params(cfg)
    cache = ResultCache(cfg.cache) if cfg.cache else None
    records: list[dict | None] = [None] * len(graphs)
    jobs, where = [], []
    for i, g in enumerate(graphs):
        hit = cache.get(canonical_form(g), cfg.command, params) if cache is not None else None
        if hit is not None:
            records[i] = {"command": cfg.command, "graph": _graph_json(g), "verdict": hit["verdict"],
                          "digest": hit["digest"], "cached": True}
        else:
            jobs.append((cfg.command, g.n, g.edges, params))
            where.append(i)
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            fresh = list(pool.map(_work, jobs, chunksize=max(1, len(jobs) // (4 * cfg.jobs))))
    else:
        fresh = [_work(j) for j in jobs]
    for i, rec in zip(where, fresh):
        if cfg.command == "hunt" and rec["verdict"] == "counterexample":
            rec["finding"] = True
        records[i] = rec
        if cache is not None:
            cache.put(rec["graph"]["canonical_form"], cfg.command, params, rec["verdict"], rec)
    if cfg.command == "bed" and cfg.svg:
        from .plotting import plot_region

        overlays = [parse_named(name) for name in cfg.overlays]
        for i, rec in enumerate(records):
            if rec.get("cached"):
                continue
            region = FlowRegion.from_json(rec["region"])
            plot_region(region, _svg_path(cfg.svg, i, len(records)), overlays,
                        title=f"bed, n={rec['graph']['n']}")
    return records


def exit_status(cfg: RunConfig, records: list[dict]) -> int:
    if cfg.command == "check":
        return 0 if all(r["verdict"] == "feasible" for r in records) else 1
    if cfg.command == "bisect":
        return 0 if all(r["verdict"] == "found" for r in records) else 1
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.cert is None:
        raise MalformedInput("verify needs --cert FILE")
    status = 0
    for rec in _load_records(cfg.cert):
        ok, problems = verify_record(rec)
        print(canonical_json({"verified": ok, "problems": problems, "command": rec.get("command")}))
        status |= 0 if ok else 1
    return status


def cmd_gen(cfg: RunConfig) -> int:
    if not cfg.gen:
        raise MalformedInput("gen needs --gen SPEC")
    lo, hi = parse_gen(cfg.gen)
    text = "".join(format_edge_list(g, canonical_form(g)) for g in corpus(hi, not cfg.simple, lo))
    if cfg.out:
        cfg.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- argument parsing

def _add_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", action="append", help="edge-list file (.cub) or named graph; repeatable")
    p.add_argument("--graph6", action="append", help="graph6 string or file of graph6 lines; repeatable")
    p.add_argument("--gen", help="generated corpus, e.g. 'n<=10', 'n=8', '4<=n<=10'")
    p.add_argument("--simple", action="store_true", default=None, help="simple graphs only")
    p.add_argument("--lenient", action="store_true", default=None, help="skip malformed entries with a warning")
    p.add_argument("--jobs", type=int, help="worker processes (default 1)")
    p.add_argument("--cache", help="append-only JSON-lines result cache")
    p.add_argument("--out", help="write record(s) to this file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="beflow", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="key=value file mirroring the long flags")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide (r, alpha)-flow feasibility")
    _add_inputs(p)
    p.add_argument("--r", help="rational 'p/q', r >= 2")
    p.add_argument("--alpha", help="rational 'p/q', 0 <= alpha < 3")

    p = sub.add_parser("bed", help="exact bounded-excess domain, JSON + optional SVG")
    _add_inputs(p)
    p.add_argument("--rmax", help="window right edge (env BEFLOW_RMAX; default 8)")
    p.add_argument("--svg", help="SVG output path")
    p.add_argument("--overlay", action="append", help="named region to test and draw (M_4, urd(7/2,1/2), ...)")

    p = sub.add_parser("bisect", help="search a k-weak bisection")
    _add_inputs(p)
    p.add_argument("--k", type=int)
    p.add_argument("--orientable", action="store_true", default=None)

    p = sub.add_parser("weak5", help="construct a certified orientable 5-weak bisection")
    _add_inputs(p)
    p.add_argument("--debug", action="store_true", default=None, help="validate every branch (slow)")

    p = sub.add_parser("hunt", help="sweep a conjecture over a corpus")
    _add_inputs(p)
    p.add_argument("--conjecture", help="bl3 or simple414")

    p = sub.add_parser("verify", help="re-check a certificate or record file")
    p.add_argument("--cert", help="JSON or JSON-lines file")

    p = sub.add_parser("gen", help="emit a generated corpus as edge lists")
    p.add_argument("--gen")
    p.add_argument("--simple", action="store_true", default=None)
    p.add_argument("--out")
    return ap


def read_config(path: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise MalformedInput(f"{path}:{lineno}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


_LIST_KEYS = {"graph", "graph6", "overlay"}
_BOOL_KEYS = {"simple", "lenient", "orientable", "debug"}


def _merge_config(args: argparse.Namespace, cfg: dict[str, str]) -> None:
    for key, value in cfg.items():
        if not hasattr(args, key):
            raise MalformedInput(f"config key {key!r} does not apply to '{args.command}'")
        if getattr(args, key) is not None:
            continue  # command line wins
        if key in _LIST_KEYS:
            value = [v.strip() for v in value.split(",") if v.strip()] if key != "overlay" else [value]
        elif key in _BOOL_KEYS:
            value = value.lower() in ("1", "true", "yes", "on")
        elif key == "jobs" or key == "k":
            value = int(value)
        setattr(args, key, value)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    get = lambda key, default=None: getattr(args, key, None) if getattr(args, key, None) is not None else default  # noqa: E731
    rmax = get("rmax") or os.environ.get("BEFLOW_RMAX")
    cfg = RunConfig(
        command=args.command,
        graphs=get("graph", []),
        graph6=get("graph6", []),
        gen=get("gen"),
        simple=bool(get("simple", False)),
        r_max=parse_rational(rmax) if rmax else DEFAULT_RMAX,
        k=get("k"),
        orientable=bool(get("orientable", False)),
        conjecture=get("conjecture"),
        overlays=tuple(get("overlay", DEFAULT_OVERLAYS)),
        out=Path(get("out")) if get("out") else None,
        svg=Path(get("svg")) if get("svg") else None,
        cert=Path(get("cert")) if get("cert") else None,
        cache=Path(get("cache")) if get("cache") else None,
        depth="debug" if get("debug") else "release",
        jobs=get("jobs", 1),
        lenient=bool(get("lenient", False)),
    )
    if cfg.command == "check":
        if get("r") is None or get("alpha") is None:
            raise MalformedInput("check needs --r and --alpha")
        cfg.r, cfg.alpha = parse_rational(get("r")), parse_rational(get("alpha"))
        FlowPoint(cfg.r, cfg.alpha)
    if cfg.command == "bisect" and cfg.k is None:
        raise MalformedInput("bisect needs --k")
    if cfg.command == "hunt" and cfg.conjecture is None:
        raise MalformedInput("hunt needs --conjecture")
    for name in cfg.overlays:
        parse_named(name)
    return cfg


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.config:
            _merge_config(args, read_config(args.config))
        cfg = config_from_args(args)
        if cfg.command == "verify":
            return cmd_verify(cfg)
        if cfg.command == "gen":
            return cmd_gen(cfg)
        records = run_corpus(cfg)
        _emit(records, cfg)
        return exit_status(cfg, records)
    except (BeflowError, ValueError, OSError) as exc:
        print(f"beflow: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
