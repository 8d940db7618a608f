"""Command-line interface.

Exit codes: 0 success, 1 property violation found, 2 usage or input error,
3 critical (a certified drawing contradicting a proved statement).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import __version__
from .classify import (
    LEMMA_IDS,
    Analysis,
    LemmaVerdict,
    Verdict,
    check_lemma,
    classify_cycle,
    find_bad_triangles,
    separates_at,
)
from .construct import construct_cycle
from .drawing import Drawing, n_ge_m_check, verify_thrackle
from .errors import InputError, NotCertified, TheoremAlarm, ThrackleError
from .fuzz import run_fuzz
from .graph import AbstractGraph
from .io import (
    IoError,
    Projection,
    RenderSpec,
    dumps_drawing,
    from_graph6,
    load_drawing,
    load_graph6,
    load_schema,
    render,
    save_drawing,
)
from .kernel import ToleranceConfig
from .search import EmbeddingProblem, SearchConfig, falsify, search_embedding

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_CRITICAL = 0, 1, 2, 3
_STATUS = {EXIT_OK: "ok", EXIT_VIOLATION: "violation", EXIT_INPUT: "error", EXIT_CRITICAL: "critical"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommands accept the same flags; SUPPRESS keeps them from resetting the top-level values
    def dflt(v):
        return argparse.SUPPRESS if suppress else v

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps-event", type=float, default=dflt(None), help="certification margin (rad)")
    common.add_argument("--eps-medium", type=float, default=dflt(None), help="exclusion band around pi")
    common.add_argument("--seed", type=int, default=dflt(0), help="seed for searches and fuzzing")
    common.add_argument("--json", action="store_true", default=dflt(False),
                        help="machine-readable report on stdout")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    p = _Parser(prog="spherical-thrackle", description="Spherical thrackle toolkit.",
                parents=[_global_flags(suppress=False)])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify", parents=[common], help="check the thrackle property")
    s.add_argument("file")

    s = sub.add_parser("classify", parents=[common], help="crossing orientations and cycle classes")
    s.add_argument("file")

    s = sub.add_parser("lemmas", parents=[common], help="run the executable lemma checks")
    s.add_argument("file")
    s.add_argument("--id", dest="lemma_id", choices=LEMMA_IDS, default=None)

    s = sub.add_parser("construct", parents=[common], help="build a certified drawing")
    s.add_argument("family", choices=["cycle"])
    s.add_argument("n", type=int)
    s.add_argument("-o", "--output", default=None, help="write the drawing here (default stdout)")
    s.add_argument("--cap", type=float, default=1.0, help="cap half-angle for odd cycles")

    s = sub.add_parser("search", parents=[common], help="annealed embedding search")
    s.add_argument("target", help="graph6 string, graph6 file, or drawing file to warm-start from")
    s.add_argument("--budget", type=int, default=200, help="restarts")
    s.add_argument("--steps", type=int, default=2000, help="annealing steps per restart")
    s.add_argument("-o", "--output", default=None, help="write a certified drawing here")

    s = sub.add_parser("falsify", parents=[common], help="search an m > n family for counterexamples")
    s.add_argument("target", help="graph6 string or graph6 file")
    s.add_argument("--budget", type=int, default=200, help="restarts per graph")
    s.add_argument("--steps", type=int, default=1000, help="annealing steps per restart")

    s = sub.add_parser("fuzz", parents=[common], help="lemma fuzz campaign")
    s.add_argument("--count", type=int, default=10_000)

    s = sub.add_parser("render", parents=[common], help="draw as SVG")
    s.add_argument("file")
    s.add_argument("-o", "--output", default=None, help="SVG path (default: FILE with .svg)")
    s.add_argument("--projection", choices=[p.value for p in Projection],
                   default=Projection.ORTHOGRAPHIC_TWO_HEMISPHERES.value)
    s.add_argument("--no-labels", action="store_true")
    return p


# ------------------------------------------------------------------ helpers

def _tol(args) -> ToleranceConfig:
    return ToleranceConfig.from_env(eps_event=args.eps_event, eps_medium=args.eps_medium)


def _graphs(target: str) -> list:
    if os.path.exists(target):
        return load_graph6(target)
    return [from_graph6(target)]


def _certified(d: Drawing, tol) -> tuple:
    rep = verify_thrackle(d, tol)
    return rep, rep.is_thrackle and rep.is_general_position


def _alarm_if_dense(d: Drawing, rep) -> Optional[str]:
    if rep.is_thrackle and not n_ge_m_check(d, report=rep):
        return f"certified drawing with n={d.graph.n} < m={d.graph.m}"
    return None


# --------------------------------------------------------------- commands

def cmd_verify(args, tol):
    d = load_drawing(args.file, tol)
    rep, ok = _certified(d, tol)
    result = rep.as_dict()
    result["certified"] = ok
    alarm = _alarm_if_dense(d, rep)
    if alarm:
        result["alarm"] = alarm
        return EXIT_CRITICAL, result, alarm
    lines = [f"thrackle: {rep.is_thrackle}", f"general position: {rep.is_general_position}"]
    lines += [f"  pair {v.pair}: {v.reason}" for v in rep.violations]
    lines += [f"  flag {f.kind.value} {list(f.items)} {f.detail}" for f in rep.flags]
    return (EXIT_OK if ok else EXIT_VIOLATION), result, "\n".join(lines)


def cmd_classify(args, tol):
    d = load_drawing(args.file, tol)
    rep, ok = _certified(d, tol)
    if not rep.is_thrackle:
        return EXIT_VIOLATION, {"certified": False}, "not a thrackle; nothing to classify"
    a = Analysis(d, tol, report=rep)
    g = d.graph
    cycles, alarms = [], []
    for cyc in a.cycles:
        pc = classify_cycle(a, cyc, tol)
        longs = sum(a.is_long(i) for i in _cycle_edge_ids(g, cyc))
        cycles.append({"vertices": list(cyc), "verdict": pc.verdict.value,
                       "chi": list(pc.chi_sequence), "long_edges": longs})
        if len(cyc) >= 5 and pc.verdict is Verdict.BAD:
            alarms.append(f"cycle {list(cyc)} of length {len(cyc)} is bad")
        if len(cyc) % 2 == 0 and longs == 0:
            alarms.append(f"even cycle {list(cyc)} has no long edge")
    try:
        tris = find_bad_triangles(a, tol)
    except TheoremAlarm as exc:
        tris = []
        alarms.append(str(exc))
    seps = []
    for e in range(g.m):
        for v in g.edges[e]:
            w = separates_at(a, e, v, tol)
            if w is not None:
                seps.append({"edge": e, "vertex": v, "edges": [w.f, w.g]})
    result = {
        "certified": ok,
        "edges": [{"id": i, "length": "long" if a.is_long(i) else "short"} for i in range(g.m)],
        "cycles": cycles,
        "bad_triangles": [{"vertices": list(t.vertices), "long_edges": list(t.long_edges),
                           "vertex_signs": list(t.vertex_signs)} for t in tris],
        "separations": seps,
        "alarms": alarms,
    }
    lines = [f"edge {i}: {'long' if a.is_long(i) else 'short'}" for i in range(g.m)]
    lines += [f"cycle {c['vertices']}: {c['verdict']} chi={c['chi']}" for c in cycles]
    lines += [f"bad triangle {t['vertices']}" for t in result["bad_triangles"]]
    lines += [f"ALARM: {m}" for m in alarms]
    code = EXIT_CRITICAL if alarms else EXIT_OK
    return code, result, "\n".join(lines)


def _cycle_edge_ids(g: AbstractGraph, cyc) -> list:
    return [g.edge_index(cyc[k], cyc[(k + 1) % len(cyc)]) for k in range(len(cyc))]


def cmd_lemmas(args, tol):
    d = load_drawing(args.file, tol)
    rep, _ = _certified(d, tol)
    if not rep.is_thrackle:
        return EXIT_VIOLATION, {"certified": False, "lemmas": []}, "not a thrackle; lemmas need a certified drawing"
    ids = [args.lemma_id] if args.lemma_id else list(LEMMA_IDS)
    a = Analysis(d, tol, report=rep)
    reports = [check_lemma(a, lid, tol) for lid in ids]
    fails = [r for r in reports if r.verdict is LemmaVerdict.FAIL]
    result = {"certified": True, "lemmas": [r.as_dict() for r in reports]}
    lines = [f"{r.lemma_id}: {r.verdict.value}" + (f" ({r.notes})" if r.notes else "") for r in reports]
    return (EXIT_CRITICAL if fails else EXIT_OK), result, "\n".join(lines)


def cmd_construct(args, tol):
    d = construct_cycle(args.n, cap_half_angle=args.cap, tol=tol)
    meta = {"family": "cycle", "n": args.n}
    if args.output:
        save_drawing(d, args.output, meta)
    rep = verify_thrackle(d, tol)
    result = {"family": "cycle", "n": args.n, "output": args.output,
              "certified": rep.is_thrackle and rep.is_general_position,
              "long_edges": sum(d.long_flags)}
    if args.output:
        text = f"wrote certified {args.n}-cycle to {args.output}"
    else:
        text = dumps_drawing(d, meta).rstrip("\n")
        result["drawing"] = json.loads(text)
    return EXIT_OK, result, text


def cmd_search(args, tol):
    cfg = SearchConfig(restarts=args.budget, steps_per_restart=args.steps, rng_seed=args.seed,
                       margin=tol.eps_event)
    initial = None
    if os.path.exists(args.target) and _looks_like_json(args.target):
        initial = load_drawing(args.target, tol)
        g = initial.graph
    else:
        graphs = _graphs(args.target)
        if len(graphs) != 1:
            raise InputError(f"search expects exactly one graph, got {len(graphs)}")
        g = graphs[0]
    out = search_embedding(EmbeddingProblem(g), cfg, initial=initial, tol=tol)
    result = {"n": g.n, "m": g.m, **out.as_dict()}
    if out.certified:
        if args.output:
            save_drawing(out.drawing, args.output, {"search": cfg.as_dict()})
            result["output"] = args.output
        if g.n < g.m:
            msg = f"certified drawing of a graph with n={g.n} < m={g.m}"
            result["alarm"] = msg
            return EXIT_CRITICAL, result, msg
        return EXIT_OK, result, f"Certified after {out.restarts_run} restarts"
    return EXIT_VIOLATION, result, f"Exhausted after {out.restarts_run} restarts (best energy {out.best_energy:.3g})"


def _looks_like_json(path: str) -> bool:
    with open(path, "rb") as fh:
        return fh.read(64).lstrip().startswith(b"{")


def cmd_falsify(args, tol):
    family = _graphs(args.target)
    cfg = SearchConfig(restarts=args.budget, steps_per_restart=args.steps, rng_seed=args.seed,
                       margin=tol.eps_event)
    rep = falsify(family, cfg, tol=tol)
    result = rep.as_dict()
    lines = [f"n={e.graph.n} m={e.graph.m} {e.outcome.status.value}" for e in rep.entries]
    if rep.critical:
        lines.append("CRITICAL: certified embedding of an m > n graph")
        return EXIT_CRITICAL, result, "\n".join(lines)
    return EXIT_OK, result, "\n".join(lines)


def cmd_fuzz(args, tol):
    if args.count < 1:
        raise InputError("--count must be positive")
    rep = run_fuzz(args.count, args.seed, tol)
    result = rep.as_dict()
    lines = [f"drawings: {rep.count} (uncertified skipped: {rep.uncertified})"]
    for lid, counts in result["verdicts"].items():
        lines.append(f"{lid}: " + ", ".join(f"{k}={v}" for k, v in counts.items()))
    lines.append(f"chi antisymmetry: {rep.chi_pairs_checked} pairs, "
                 f"{rep.chi_antisymmetry_violations} violations")
    lines.append(f"parity identity: {rep.parity_configs_checked} configurations, "
                 f"{rep.parity_violations} violations")
    if rep.critical:
        lines.append("CRITICAL: lemma failure in a certified drawing")
        return EXIT_CRITICAL, result, "\n".join(lines)
    return EXIT_OK, result, "\n".join(lines)


def cmd_render(args, tol):
    d = load_drawing(args.file, tol)
    out = args.output or os.path.splitext(args.file)[0] + ".svg"
    spec = RenderSpec(projection=Projection(args.projection), labels=not args.no_labels)
    render(d, spec, out)
    return EXIT_OK, {"output": out, "projection": spec.projection.value}, f"wrote {out}"


COMMANDS = {
    "verify": cmd_verify, "classify": cmd_classify, "lemmas": cmd_lemmas,
    "construct": cmd_construct, "search": cmd_search, "falsify": cmd_falsify,
    "fuzz": cmd_fuzz, "render": cmd_render,
}


def make_report(command: str, code: int, result: dict, tol: Optional[ToleranceConfig],
                error: Optional[Exception] = None) -> dict:
    rep = {"report_version": 1, "command": command, "status": _STATUS[code],
           "exit_code": code, "result": result}
    if tol is not None:
        rep["tolerances"] = tol.as_dict()
    if error is not None:
        rep["error"] = {"type": type(error).__name__, "message": str(error)}
    return rep


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    tol = None
    try:
        tol = _tol(args)
        code, result, text = COMMANDS[args.command](args, tol)
        err = None
    except TheoremAlarm as exc:
        code, result, text, err = EXIT_CRITICAL, {}, f"CRITICAL: {exc}", exc
    except NotCertified as exc:
        code, result, text, err = EXIT_VIOLATION, {}, f"error: {exc}", exc
    except (InputError, IoError) as exc:
        code, result, text, err = EXIT_INPUT, {}, f"error: {exc}", exc
    except ThrackleError as exc:
        code, result, text, err = EXIT_VIOLATION, {}, f"error: {exc}", exc
    if args.json:
        print(json.dumps(make_report(args.command, code, result, tol, err), sort_keys=True))
    elif err is not None:
        print(text, file=sys.stderr)
    else:
        print(text)
    return code


def report_schema() -> dict:
    return load_schema("report")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
