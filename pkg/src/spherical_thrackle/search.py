"""Annealed search for spherical thrackle embeddings, and the falsification harness."""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from . import _backend
from .drawing import Drawing, _vertex_arc_distance, verify_thrackle
from .errors import CoCircular, GeometryError, InputError, MalformedDrawing, PreconditionViolation
from .graph import AbstractGraph
from .kernel import DEFAULT_TOL, EventKind, ToleranceConfig, arc_pair_intersections


class LengthFlag(enum.Enum):
    LONG = "Long"
    SHORT = "Short"
    FREE = "Free"


@dataclass(frozen=True)
class EmbeddingProblem:
    graph: AbstractGraph
    length_flags: Optional[tuple] = None

    def __post_init__(self):
        if self.length_flags is not None:
            flags = tuple(f if isinstance(f, LengthFlag) else LengthFlag(f) for f in self.length_flags)
            if len(flags) != self.graph.m:
                raise InputError("one length flag per edge required")
            object.__setattr__(self, "length_flags", flags)


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 200
    steps_per_restart: int = 2000
    t_initial: float = 0.05
    t_final: float = 1e-4
    rng_seed: int = 0
    margin: float = 1e-6
    flag_flip_probability: float = 0.1
    step_initial: float = 0.5
    step_final: float = 0.005

    def __post_init__(self):
        if self.restarts < 1 or self.steps_per_restart < 1:
            raise InputError("restarts and steps_per_restart must be positive")
        for name in ("t_initial", "t_final", "margin", "step_initial", "step_final"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be positive")
        if not 0.0 <= self.flag_flip_probability <= 1.0:
            raise InputError("flag_flip_probability must lie in [0, 1]")
        if self.rng_seed < 0:
            raise InputError("rng_seed must be non-negative")

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


class SearchStatus(enum.Enum):
    CERTIFIED = "Certified"
    EXHAUSTED = "Exhausted"


@dataclass
class SearchOutcome:
    status: SearchStatus
    drawing: Optional[Drawing]
    best_energy: float
    energy_trace: list
    restarts_run: int
    steps_run: int
    config: SearchConfig

    @property
    def certified(self) -> bool:
        return self.status is SearchStatus.CERTIFIED

    def as_dict(self) -> dict:
        return {
            "status": self.status.value,
            "best_energy": self.best_energy,
            "restarts_run": self.restarts_run,
            "steps_run": self.steps_run,
            "energy_trace": list(self.energy_trace),
            "budget": {"restarts": self.config.restarts,
                       "steps_per_restart": self.config.steps_per_restart},
        }


def restart_seed(rng_seed: int, restart: int) -> int:
    """Independent 64-bit stream seed for one restart."""
    ss = np.random.SeedSequence(rng_seed, spawn_key=(restart,))
    return int(ss.generate_state(1, np.uint64)[0])


def _kernel_arrays(graph: AbstractGraph):
    m = graph.m
    edges = np.array(graph.edges, dtype=np.int32).reshape(m, 2)
    shared = np.full((m, m), -1, dtype=np.int32)
    for i in range(m):
        for j in range(m):
            if i != j:
                s = graph.shared_vertex(i, j)
                if s is not None:
                    shared[i, j] = s
    return edges, shared


def _extra_energy(d: Drawing, margin: float, tol: ToleranceConfig) -> float:
    """Terms the kernel leaves out: crowded crossings along an edge and
    vertices close to the interior of a non-incident edge."""
    g = d.graph
    tol = tol.with_event(margin)
    total = 0.0
    crossings = [[] for _ in range(g.m)]
    for i in range(g.m):
        for j in range(i + 1, g.m):
            try:
                evs = arc_pair_intersections(d.arcs[i], d.arcs[j], tol)
            except CoCircular:
                continue
            for ev in evs:
                if ev.kind is EventKind.PROPER_CROSSING:
                    crossings[i].append(ev.on_e)
                    crossings[j].append(ev.on_f)
    for ts in crossings:
        ts.sort()
        for a, b in zip(ts, ts[1:]):
            if b - a < margin:
                total += margin - (b - a)
    for v in range(g.n):
        incident = set(g.incident(v))
        for i, arc in enumerate(d.arcs):
            if i in incident:
                continue
            dist = _vertex_arc_distance(d.positions[v], arc)
            if dist is not None and dist < margin:
                total += margin - dist
    return total


def violation_energy(d: Drawing, margin: float, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Non-negative penalty that vanishes exactly when ``d`` certifies at ``margin``."""
    if not margin > 0:
        raise InputError("margin must be positive")
    edges, shared = _kernel_arrays(d.graph)
    pos = np.ascontiguousarray(d.position_array(), dtype=np.float64)
    longf = np.array(d.long_flags, dtype=np.int8)
    base = _backend.full_energy(pos, longf, edges, shared, margin, tol.eps_medium, tol.eps_circle)
    return float(base) + _extra_energy(d, margin, tol)


def _certify(graph, pos, longf, tol: ToleranceConfig) -> Optional[Drawing]:
    try:
        d = Drawing.from_flags(graph, [tuple(p) for p in pos], [bool(x) for x in longf], tol)
    except (GeometryError, MalformedDrawing):
        return None
    rep = verify_thrackle(d, tol)
    if rep.is_thrackle and rep.is_general_position:
        return d
    return None


def search_embedding(problem: EmbeddingProblem, cfg: SearchConfig = SearchConfig(), *,
                     initial: Optional[Drawing] = None,
                     fixed_vertices: Sequence[int] = (),
                     tol: ToleranceConfig = DEFAULT_TOL,
                     kernel=None,
                     on_restart: Optional[Callable[[int, float], None]] = None) -> SearchOutcome:
    """Simulated annealing over vertex positions and long/short flags.

    Without ``initial`` every restart starts from uniform random positions
    with free flags set Short. With ``initial`` every restart is a cold
    (low temperature, small step) refinement of that drawing. Vertices in
    ``fixed_vertices`` never move.
    """
    graph = problem.graph
    n, m = graph.n, graph.m
    flags = problem.length_flags or (LengthFlag.FREE,) * m
    free_f = np.array([f is LengthFlag.FREE for f in flags], dtype=np.uint8)
    fixed = set(fixed_vertices)
    free_v = np.array([v not in fixed for v in range(n)], dtype=np.uint8)
    if initial is not None:
        if initial.graph.edges != graph.edges or initial.graph.n != n:
            raise InputError("initial drawing must be a drawing of the problem graph")
        d0 = _certify(graph, initial.position_array(), initial.long_flags, tol.with_event(cfg.margin))
        if d0 is not None:
            return SearchOutcome(SearchStatus.CERTIFIED, d0, 0.0, [0.0], 0, 0, cfg)
        return anneal_restarts(graph, initial.position_array(), initial.long_flags,
                               free_v, free_f, np.zeros(n, dtype=np.uint8), False,
                               warm_schedule(cfg), cfg, tol, kernel, on_restart)
    start_pos = np.zeros((n, 3), dtype=np.float64)
    start_pos[:, 2] = 1.0
    start_long = [f is LengthFlag.LONG for f in flags]
    return anneal_restarts(graph, start_pos, start_long, free_v, free_f, free_v.copy(), True,
                           cold_schedule(cfg), cfg, tol, kernel, on_restart)


def cold_schedule(cfg: SearchConfig) -> tuple:
    return (cfg.t_initial, cfg.t_final, cfg.step_initial, cfg.step_final)


def warm_schedule(cfg: SearchConfig) -> tuple:
    """Near-greedy refinement with steps on the scale of the margin."""
    return (cfg.t_final * 1e-2, cfg.t_final * 1e-4, max(8 * cfg.margin, 1e-5), cfg.margin)


def anneal_restarts(graph: AbstractGraph, start_pos, start_long, free_v, free_f, randomize,
                    reset_flags: bool, schedule: tuple, cfg: SearchConfig,
                    tol: ToleranceConfig = DEFAULT_TOL, kernel=None,
                    on_restart: Optional[Callable[[int, float], None]] = None) -> SearchOutcome:
    """Run up to ``cfg.restarts`` kernel restarts from one start state.

    A restart counts only when the kernel reaches zero energy and the full
    verifier then certifies the state at ``cfg.margin``.
    """
    kern = kernel or _backend.get_kernel()
    vtol = tol.with_event(cfg.margin)
    edges, shared = _kernel_arrays(graph)
    start_pos = np.ascontiguousarray(start_pos, dtype=np.float64).reshape(graph.n, 3)
    start_long = np.array([bool(x) for x in start_long], dtype=np.int8)
    free_v = np.ascontiguousarray(free_v, dtype=np.uint8)
    free_f = np.ascontiguousarray(free_f, dtype=np.uint8)
    randomize = np.ascontiguousarray(randomize, dtype=np.uint8)
    t0, t1, s0, s1 = schedule
    best_energy = math.inf
    best_state = None
    trace = []
    steps_run = 0
    for r in range(cfg.restarts):
        pos = start_pos.copy()
        longf = start_long.copy()
        energy, found, k = kern.anneal(
            pos, longf, edges, shared, free_v, free_f, randomize, reset_flags,
            cfg.steps_per_restart, t0, t1, s0, s1, cfg.flag_flip_probability,
            cfg.margin, tol.eps_medium, tol.eps_circle, restart_seed(cfg.rng_seed, r))
        steps_run += k
        if found:
            d = _certify(graph, pos, longf, vtol)
            if d is not None:
                trace.append(0.0)
                return SearchOutcome(SearchStatus.CERTIFIED, d, 0.0, trace, r + 1, steps_run, cfg)
            # zero kernel energy but a verifier-only condition failed
            energy = violation_energy_arrays(graph, pos, longf, cfg.margin, tol)
        trace.append(float(energy))
        if energy < best_energy:
            best_energy = float(energy)
            best_state = (pos, longf)
        if on_restart is not None:
            on_restart(r, float(energy))
    drawing = None
    if best_state is not None:
        try:
            drawing = Drawing.from_flags(graph, [tuple(p) for p in best_state[0]],
                                         [bool(x) for x in best_state[1]], tol)
        except (GeometryError, MalformedDrawing):
            drawing = None
    return SearchOutcome(SearchStatus.EXHAUSTED, drawing, best_energy, trace,
                         cfg.restarts, steps_run, cfg)


def violation_energy_arrays(graph, pos, longf, margin, tol=DEFAULT_TOL) -> float:
    try:
        d = Drawing.from_flags(graph, [tuple(p) for p in pos], [bool(x) for x in longf], tol)
    except (GeometryError, MalformedDrawing):
        edges, shared = _kernel_arrays(graph)
        return float(_backend.full_energy(np.ascontiguousarray(pos), np.asarray(longf, dtype=np.int8),
                                          edges, shared, margin, tol.eps_medium, tol.eps_circle))
    return violation_energy(d, margin, tol)


@dataclass
class FalsifyEntry:
    graph: AbstractGraph
    outcome: SearchOutcome
    seconds: float

    def as_dict(self) -> dict:
        out = {"n": self.graph.n, "m": self.graph.m,
               "edges": [list(e) for e in self.graph.edges]}
        out.update(self.outcome.as_dict())
        return out


@dataclass
class FalsifyReport:
    entries: list = field(default_factory=list)

    @property
    def critical(self) -> bool:
        return any(e.outcome.certified for e in self.entries)

    def as_dict(self, timings: bool = False) -> dict:
        rows = []
        for e in self.entries:
            row = e.as_dict()
            if timings:
                row["seconds"] = e.seconds
            rows.append(row)
        return {"critical": self.critical, "graphs": rows}


def check_falsify_target(g: AbstractGraph) -> None:
    if not g.is_connected():
        raise PreconditionViolation(f"graph with edges {g.edges} is not connected")
    if g.has_terminal_edge():
        raise PreconditionViolation(f"graph with edges {g.edges} has a terminal edge")
    if not g.m > g.n:
        raise PreconditionViolation(f"graph with n={g.n}, m={g.m} does not have m > n")


def falsify(family: Sequence[AbstractGraph], cfg: SearchConfig = SearchConfig(), *,
            tol: ToleranceConfig = DEFAULT_TOL, kernel=None) -> FalsifyReport:
    """Search every graph of an m > n family; any Certified entry is critical."""
    family = list(family)
    for g in family:
        check_falsify_target(g)
    report = FalsifyReport()
    for idx, g in enumerate(family):
        t = time.perf_counter()
        outcome = search_embedding(EmbeddingProblem(g), replace(cfg, rng_seed=cfg.rng_seed + idx),
                                   tol=tol, kernel=kernel)
        report.entries.append(FalsifyEntry(g, outcome, time.perf_counter() - t))
    return report
