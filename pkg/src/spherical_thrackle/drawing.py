"""Spherical drawings and the thrackle / general-position verifier."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import CoCircular, MalformedDrawing, MediumEdge, NotCertified
from .graph import AbstractGraph
from .kernel import (
    DEFAULT_TOL,
    Arc,
    EventKind,
    IntersectionEvent,
    LengthClass,
    ToleranceConfig,
    UnitVector,
    angle_between,
    arc_between,
    arc_pair_intersections,
    crossing_orientation,
    dot,
    norm,
    cross,
)

# arcs must reproduce vertex positions to this accuracy (well under any eps_event in use)
ENDPOINT_TOL = 1e-9


@dataclass(frozen=True)
class Drawing:
    """A graph, one unit vector per vertex, and one directed arc per edge."""

    graph: AbstractGraph
    positions: tuple
    arcs: tuple

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(UnitVector(*p) for p in self.positions))
        object.__setattr__(self, "arcs", tuple(self.arcs))
        if len(self.positions) != self.graph.n:
            raise MalformedDrawing("one position per vertex required")
        if len(self.arcs) != self.graph.m:
            raise MalformedDrawing("one arc per edge required")
        for i, ((u, v), arc) in enumerate(zip(self.graph.edges, self.arcs)):
            pu, pv = self.positions[u], self.positions[v]
            if (angle_between(arc.start, pu) > ENDPOINT_TOL
                    or angle_between(arc.end, pv) > ENDPOINT_TOL):
                raise MalformedDrawing(f"arc of edge {i} does not join vertices {u} and {v}")
            if abs(dot(arc.pole, pu)) > ENDPOINT_TOL or abs(dot(arc.pole, pv)) > ENDPOINT_TOL:
                raise MalformedDrawing(f"pole of edge {i} is not orthogonal to its endpoints")

    @classmethod
    def from_flags(cls, graph: AbstractGraph, positions: Sequence,
                   long_flags: Optional[Sequence[bool]] = None,
                   tol: ToleranceConfig = DEFAULT_TOL) -> "Drawing":
        positions = [UnitVector(*p) for p in positions]
        flags = list(long_flags) if long_flags is not None else [False] * graph.m
        arcs = [arc_between(positions[u], positions[v], bool(flags[i]), tol)
                for i, (u, v) in enumerate(graph.edges)]
        return cls(graph, positions, arcs)

    @property
    def long_flags(self) -> tuple:
        return tuple(a.is_long for a in self.arcs)

    def position_array(self) -> np.ndarray:
        return np.array(self.positions, dtype=float).reshape(-1, 3)

    def rotated(self, rotation: np.ndarray) -> "Drawing":
        r = np.asarray(rotation, dtype=float)

        def rot(p):
            return UnitVector(*(r @ np.asarray(p, dtype=float)))

        positions = [rot(p) for p in self.positions]
        arcs = [Arc(positions[u], positions[v], rot(a.pole), a.angle)
                for (u, v), a in zip(self.graph.edges, self.arcs)]
        return Drawing(self.graph, positions, arcs)

    def with_positions(self, positions: Sequence,
                       tol: ToleranceConfig = DEFAULT_TOL) -> "Drawing":
        """Same graph and long/short flags, new vertex positions."""
        return Drawing.from_flags(self.graph, positions, self.long_flags, tol)


class Flag(enum.Enum):
    CO_CIRCULAR = "CoCircular"
    MEDIUM_EDGE = "MediumEdge"
    VERTEX_ON_INTERIOR = "VertexOnInterior"
    VERTEX_COINCIDENCE = "VertexCoincidence"
    EVENT_CROWDING = "EventCrowding"
    TANGENCY = "Tangency"


@dataclass(frozen=True)
class GeneralPositionFlag:
    kind: Flag
    items: tuple
    detail: str = ""

    def as_dict(self) -> dict:
        return {"kind": self.kind.value, "items": list(self.items), "detail": self.detail}


@dataclass(frozen=True)
class Violation:
    pair: tuple
    reason: str

    def as_dict(self) -> dict:
        return {"pair": list(self.pair), "reason": self.reason}


@dataclass
class VerificationReport:
    is_thrackle: bool
    is_general_position: bool
    pair_table: dict
    violations: list
    flags: list = field(default_factory=list)

    def events(self, i: int, j: int) -> list:
        return self.pair_table[(i, j) if i < j else (j, i)]

    def proper_crossing_count(self) -> int:
        return sum(1 for evs in self.pair_table.values() for ev in evs
                   if ev.kind is EventKind.PROPER_CROSSING)

    def as_dict(self) -> dict:
        return {
            "is_thrackle": self.is_thrackle,
            "is_general_position": self.is_general_position,
            "pairs": [{"pair": [i, j], "events": [ev.as_dict() for ev in evs]}
                      for (i, j), evs in sorted(self.pair_table.items())],
            "violations": [v.as_dict() for v in self.violations],
            "flags": [f.as_dict() for f in self.flags],
        }


@dataclass
class GeneralPositionReport:
    flags: list
    pair_table: dict

    @property
    def ok(self) -> bool:
        return not self.flags


def _vertex_arc_distance(p, arc: Arc) -> Optional[float]:
    """Angular distance from ``p`` to the arc when its projection lands inside, else None."""
    t = arc.param_of(p)
    if t > arc.angle:
        return None
    return math.asin(min(1.0, abs(dot(p, arc.pole))))


def check_general_position(d: Drawing, tol: ToleranceConfig = DEFAULT_TOL) -> GeneralPositionReport:
    g = d.graph
    eps = tol.eps_event
    flags = []
    table = {}
    for i, arc in enumerate(d.arcs):
        if abs(arc.angle - math.pi) < tol.eps_medium:
            flags.append(GeneralPositionFlag(Flag.MEDIUM_EDGE, (i,), f"angle={arc.angle!r}"))
    for a, b in itertools.combinations(range(g.n), 2):
        if angle_between(d.positions[a], d.positions[b]) < eps:
            flags.append(GeneralPositionFlag(Flag.VERTEX_COINCIDENCE, (a, b)))
    crossings = [[] for _ in range(g.m)]
    for i, j in itertools.combinations(range(g.m), 2):
        try:
            evs = arc_pair_intersections(d.arcs[i], d.arcs[j], tol)
        except CoCircular as exc:
            flags.append(GeneralPositionFlag(Flag.CO_CIRCULAR, (i, j), str(exc)))
            table[(i, j)] = None
            continue
        table[(i, j)] = evs
        for ev in evs:
            if ev.kind is EventKind.VERTEX_ON_INTERIOR:
                flags.append(GeneralPositionFlag(Flag.VERTEX_ON_INTERIOR, (i, j)))
            elif ev.kind is EventKind.TANGENCY:
                flags.append(GeneralPositionFlag(Flag.TANGENCY, (i, j)))
            elif ev.kind is EventKind.PROPER_CROSSING:
                crossings[i].append((ev.on_e, j))
                crossings[j].append((ev.on_f, i))
    # triple points and crowded crossings along one edge
    for i, items in enumerate(crossings):
        items.sort()
        for (t1, j1), (t2, j2) in zip(items, items[1:]):
            if t2 - t1 < eps:
                flags.append(GeneralPositionFlag(Flag.EVENT_CROWDING, (i, j1, j2)))
    for v in range(g.n):
        incident = set(g.incident(v))
        for i, arc in enumerate(d.arcs):
            if i in incident:
                continue
            dist = _vertex_arc_distance(d.positions[v], arc)
            if dist is not None and dist < eps:
                flags.append(GeneralPositionFlag(Flag.VERTEX_ON_INTERIOR, (v, i), "vertex near edge"))
    # vertex/edge flags can be found twice (pair events and the direct scan)
    unique = list(dict.fromkeys(flags))
    return GeneralPositionReport(unique, table)


# callables (drawing, report) run on every drawing that verifies as a thrackle;
# used to audit global invariants such as n >= m across a whole session
CERTIFIED_HOOKS: list = []


def verify_thrackle(d: Drawing, tol: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """Certify that every pair of distinct edges meets exactly once, in general position."""
    gp = check_general_position(d, tol)
    g = d.graph
    violations = [Violation(f.items, f.kind.value) for f in gp.flags]
    table = {}
    for (i, j), evs in gp.pair_table.items():
        table[(i, j)] = [] if evs is None else evs
        if evs is None:
            continue
        shared = g.shared_vertex(i, j)
        kinds = [ev.kind for ev in evs]
        n_proper = kinds.count(EventKind.PROPER_CROSSING)
        n_shared = kinds.count(EventKind.SHARED_ENDPOINT)
        if shared is not None:
            if n_shared != 1:
                violations.append(Violation((i, j), "adjacent edges do not meet at their shared vertex"))
            if n_proper:
                violations.append(Violation((i, j), "adjacent edges also cross properly"))
        else:
            if n_shared:
                violations.append(Violation((i, j), "non-adjacent edges share an endpoint position"))
            if n_proper == 0 and not n_shared:
                violations.append(Violation((i, j), "no common point"))
            elif n_proper > 1:
                violations.append(Violation((i, j), f"{n_proper} proper crossings"))
    report = VerificationReport(
        is_thrackle=not violations,
        is_general_position=gp.ok,
        pair_table=table,
        violations=violations,
        flags=gp.flags,
    )
    if report.is_thrackle:
        for hook in CERTIFIED_HOOKS:
            hook(d, report)
    return report


def edge_length_class(d: Drawing, edge: int, tol: ToleranceConfig = DEFAULT_TOL) -> LengthClass:
    return d.arcs[edge].length_class(tol)


def n_ge_m_check(d: Drawing, tol: ToleranceConfig = DEFAULT_TOL,
                 report: Optional[VerificationReport] = None) -> bool:
    """True iff vertex count >= edge count; only defined for certified drawings."""
    report = report or verify_thrackle(d, tol)
    if not report.is_thrackle:
        raise NotCertified("n >= m check needs a certified thrackle drawing")
    return d.graph.n >= d.graph.m


def clearance(d: Drawing, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Largest event margin (up to pi/2) at which ``d`` still certifies, by bisection."""
    if not verify_thrackle(d, tol).is_thrackle:
        return 0.0
    lo, hi = tol.eps_event, math.pi / 2
    for _ in range(40):
        mid = math.sqrt(lo * hi)
        try:
            ok = verify_thrackle(d, tol.with_event(mid)).is_thrackle
        except Exception:
            ok = False
        if ok:
            lo = mid
        else:
            hi = mid
    return lo


class ChiTable:
    """Crossing orientations of a certified drawing, for edges in stored direction."""

    def __init__(self, d: Drawing, report: VerificationReport, tol: ToleranceConfig = DEFAULT_TOL):
        m = d.graph.m
        self._chi = [[0] * m for _ in range(m)]
        for (i, j), evs in report.pair_table.items():
            if len(evs) != 1:
                continue
            s = crossing_orientation(d.arcs[i], d.arcs[j], evs[0], tol)
            self._chi[i][j] = s
            self._chi[j][i] = -s

    def __call__(self, i: int, j: int, fi: bool = True, fj: bool = True) -> int:
        """chi of edge i against edge j; ``fi``/``fj`` False reverses that edge."""
        s = self._chi[i][j]
        if not fi:
            s = -s
        if not fj:
            s = -s
        return s
