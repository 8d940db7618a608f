"""Generators for certified cycle drawings and the two split transformations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .drawing import Drawing, clearance, verify_thrackle
from .errors import (
    CapTooLarge,
    EvenCycleRequested,
    GeometryError,
    InputError,
    InsertionFailed,
    MalformedDrawing,
    NotCertified,
    PreconditionViolation,
    SplitFailed,
)
from .graph import AbstractGraph
from .kernel import (
    DEFAULT_TOL,
    Arc,
    EventKind,
    ToleranceConfig,
    UnitVector,
    arc_between,
    arc_pair_intersections,
    cross,
    dot,
    from_lonlat,
    normalize,
    rotate,
)
from .search import (
    EmbeddingProblem,
    SearchConfig,
    anneal_restarts,
    cold_schedule,
    search_embedding,
)

# ------------------------------------------------------------------ planar

_PLANAR_EPS = 1e-12


@dataclass(frozen=True)
class PlanarDrawing:
    """Straight-line drawing in the plane."""

    graph: AbstractGraph
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple((float(x), float(y)) for x, y in self.points))
        if len(self.points) != self.graph.n:
            raise InputError("one point per vertex required")

    def pair_kind(self, i: int, j: int) -> Optional[EventKind]:
        """SharedEndpoint, ProperCrossing, or None when the segments miss."""
        g = self.graph
        if g.shared_vertex(i, j) is not None:
            return EventKind.SHARED_ENDPOINT
        a, b = (self.points[v] for v in g.edges[i])
        c, d = (self.points[v] for v in g.edges[j])
        return EventKind.PROPER_CROSSING if _segments_cross(a, b, c, d) else None

    def pair_table(self) -> dict:
        m = self.graph.m
        return {(i, j): self.pair_kind(i, j) for i in range(m) for j in range(i + 1, m)}

    def is_thrackle(self) -> bool:
        """Every pair meets once: adjacent pairs only at the shared end."""
        for (i, j), kind in self.pair_table().items():
            if kind is None:
                return False
            if kind is EventKind.SHARED_ENDPOINT and self._adjacent_overlap(i, j):
                return False
        return True

    def _adjacent_overlap(self, i: int, j: int) -> bool:
        # adjacent segments meet again only if collinear and overlapping
        g = self.graph
        s = g.shared_vertex(i, j)
        p = self.points[s]
        q = self.points[g.other(i, s)]
        r = self.points[g.other(j, s)]
        if abs(_orient(p, q, r)) > _PLANAR_EPS:
            return False
        return (q[0] - p[0]) * (r[0] - p[0]) + (q[1] - p[1]) * (r[1] - p[1]) > 0

    def proper_crossing_count(self) -> int:
        return sum(1 for k in self.pair_table().values() if k is EventKind.PROPER_CROSSING)


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _segments_cross(a, b, c, d) -> bool:
    o1, o2 = _orient(a, b, c), _orient(a, b, d)
    o3, o4 = _orient(c, d, a), _orient(c, d, b)
    return o1 * o2 < -_PLANAR_EPS and o3 * o4 < -_PLANAR_EPS


def star_polygon_thrackle(n: int) -> PlanarDrawing:
    """Regular star polygon {n/((n-1)/2)}: a straight-line thrackle of the odd n-cycle."""
    if n < 3:
        raise InputError("cycle length must be at least 3")
    if n % 2 == 0:
        raise EvenCycleRequested(f"no straight-line thrackle of the {n}-cycle exists")
    h = (n - 1) // 2
    pts = [(math.cos(2 * math.pi * k * h / n), math.sin(2 * math.pi * k * h / n)) for k in range(n)]
    return PlanarDrawing(AbstractGraph.cycle(n), pts)


def gnomonic_lift(p: PlanarDrawing, cap_half_angle: float,
                  tol: ToleranceConfig = DEFAULT_TOL) -> Drawing:
    """Central projection of a scaled copy of ``p`` into the cap around the north pole."""
    if not 0 < cap_half_angle < math.pi / 2:
        raise InputError("cap_half_angle must lie in (0, pi/2)")
    rmax = max((math.hypot(x, y) for x, y in p.points), default=0.0)
    s = math.tan(cap_half_angle) / rmax if rmax > 0 else 1.0
    pos = [normalize((s * x, s * y, 1.0)) for x, y in p.points]
    try:
        d = Drawing.from_flags(p.graph, pos, [False] * p.graph.m, tol)
    except (GeometryError, MalformedDrawing) as exc:
        raise CapTooLarge(str(exc)) from None
    rep = verify_thrackle(d, tol)
    if not (rep.is_thrackle and rep.is_general_position):
        raise CapTooLarge(f"lift at cap {cap_half_angle} does not certify")
    return d


# -------------------------------------------------------------- six-cycle

# Vertices A0 = (lon, lat) and B0; the drawing is A0 B0 A1 B1 A2 B2 with
# A_k, B_k rotated by 120k degrees about the z axis. A_k -> B_k are the
# long edges, B_k -> A_{k+1} the short ones. Found by tools/fit_six_cycle.py
# (clearance about 0.477 rad).
SIX_CYCLE_A = (-1.568, 0.7585)
SIX_CYCLE_B = (-2.4568, 0.1644)
SIX_CYCLE_AXIS = (0.0, 0.0, 1.0)


def six_cycle_drawing(tol: ToleranceConfig = DEFAULT_TOL) -> Drawing:
    a = from_lonlat(*SIX_CYCLE_A)
    b = from_lonlat(*SIX_CYCLE_B)
    pos = []
    for k in range(3):
        ang = 2 * math.pi * k / 3
        pos += [rotate(a, SIX_CYCLE_AXIS, ang), rotate(b, SIX_CYCLE_AXIS, ang)]
    d = Drawing.from_flags(AbstractGraph.cycle(6), pos, [True, False] * 3, tol)
    _require_certified(d, tol)
    return d


def _require_certified(d: Drawing, tol: ToleranceConfig) -> None:
    rep = verify_thrackle(d, tol)
    if not (rep.is_thrackle and rep.is_general_position):
        raise NotCertified("construction output does not certify")


# -------------------------------------------------------------- insertion

def _cycle_length(g: AbstractGraph) -> int:
    if g.edges != AbstractGraph.cycle(g.n).edges:
        raise InputError("expected the standard cycle graph 0-1-...-(k-1)-0")
    return g.n


def insert_edge_pair(d: Drawing, target_edge: Optional[int] = None, *, seed: int = 0,
                     restarts: int = 60, steps: int = 3000,
                     tol: ToleranceConfig = DEFAULT_TOL) -> Drawing:
    """Replace edge u-v of a certified even cycle by a path u-a-b-v.

    Only the two new vertices and the three new length flags move; every other
    vertex keeps its position. Targets are tried short edges first.
    Result is relabelled to the standard cycle on k+2 vertices.
    """
    k = _cycle_length(d.graph)
    if k % 2 or k < 6:
        raise PreconditionViolation("edge insertion needs a certified even cycle of length >= 6")
    _require_certified(d, tol)
    if target_edge is None:
        targets = sorted(range(k), key=lambda i: (d.arcs[i].is_long, i))
    else:
        if not 0 <= target_edge < k:
            raise InputError(f"edge {target_edge} out of range")
        targets = [target_edge]
    old_pos = d.position_array()
    old_long = d.long_flags
    g2 = AbstractGraph.cycle(k + 2)
    for n_try, t in enumerate(targets):
        # new vertex order: 0..t, a, b, t+1..k-1
        pos = np.zeros((k + 2, 3))
        longf = [False] * (k + 2)
        for v in range(k):
            pos[v if v <= t else v + 2] = old_pos[v]
        pos[t + 1] = pos[t + 2] = (0.0, 0.0, 1.0)
        for i in range(k):
            if i < t:
                longf[i] = old_long[i]
            elif i > t:
                longf[i + 2] = old_long[i]
        free_v = np.zeros(k + 2, dtype=np.uint8)
        free_v[[t + 1, t + 2]] = 1
        free_f = np.zeros(k + 2, dtype=np.uint8)
        free_f[[t, t + 1, t + 2]] = 1
        cfg = SearchConfig(restarts=restarts, steps_per_restart=steps,
                           rng_seed=seed + 1000 * n_try, margin=tol.eps_event)
        out = anneal_restarts(g2, pos, longf, free_v, free_f, free_v, True,
                              cold_schedule(cfg), cfg, tol)
        if out.certified:
            return out.drawing
    raise InsertionFailed(f"no certified placement for the {k + 2}-cycle within the budget")


def _even_chain(k: int, tol: ToleranceConfig) -> Drawing:
    return _even_chain_cached(k, tol)


@lru_cache(maxsize=None)
def _even_chain_cached(k: int, tol: ToleranceConfig) -> Drawing:
    if k == 6:
        return six_cycle_drawing(tol)
    prev = _even_chain_cached(k - 2, tol)
    try:
        return insert_edge_pair(prev, tol=tol)
    except InsertionFailed:
        out = search_embedding(EmbeddingProblem(AbstractGraph.cycle(k)),
                               SearchConfig(restarts=2000, steps_per_restart=4000, margin=tol.eps_event),
                               tol=tol)
        if not out.certified:
            raise
        return out.drawing


def construct_cycle(n: int, *, cap_half_angle: float = 1.0,
                    tol: ToleranceConfig = DEFAULT_TOL) -> Drawing:
    """Certified spherical thrackle drawing of the n-cycle (n != 4).

    Odd n: star polygon lifted to a cap. Even n: six-cycle plus insertions.
    """
    if n < 3:
        raise InputError("cycle length must be at least 3")
    if n == 4:
        raise PreconditionViolation("the 4-cycle has no spherical thrackle drawing")
    if n % 2:
        return gnomonic_lift(star_polygon_thrackle(n), cap_half_angle, tol)
    return _even_chain(n, tol)


# ------------------------------------------------------------------ splits

def _kinds(evs) -> tuple:
    return tuple(sorted(ev.kind.value for ev in evs))


def _events(a: Arc, b: Arc, tol) -> Optional[tuple]:
    try:
        return _kinds(arc_pair_intersections(a, b, tol))
    except GeometryError:
        return None


def split_edge(d: Drawing, e: int, *, tol: ToleranceConfig = DEFAULT_TOL) -> Drawing:
    """Replace short edge e = u->v by e' = u'->v and e'' = u->v'.

    e' keeps index e, e'' is appended last; u' and v' are vertices n and n+1.

    u', v' are u, v pushed a small distance off C(e) to one side, so e' and
    e'' cross once and every other edge meets them as it met e.
    """
    g = d.graph
    if not 0 <= e < g.m:
        raise InputError(f"edge {e} out of range")
    arc = d.arcs[e]
    if arc.is_long:
        raise PreconditionViolation("split_edge is defined for short edges only")
    _require_certified(d, tol)
    u, v = g.edges[e]
    delta = min(0.1 * clearance(d, tol), 0.01)
    # prefer the side away from most adjacent edges
    lean = 0.0
    for w in (u, v):
        for f in g.incident(w):
            if f != e:
                lean += dot(d.arcs[f].midpoint(), arc.pole)
    sides = (-1, 1) if lean >= 0 else (1, -1)
    others = [f for f in range(g.m) if f != e]
    while delta > 10 * tol.eps_event:
        for s in sides:
            up = normalize(tuple(np.asarray(d.positions[u]) + s * delta * np.asarray(arc.pole)))
            vp = normalize(tuple(np.asarray(d.positions[v]) + s * delta * np.asarray(arc.pole)))
            positions = list(d.positions) + [up, vp]
            ui, vi = g.n, g.n + 1
            edges = list(g.edges)
            edges[e] = (ui, v)
            edges.append((u, vi))
            g2 = AbstractGraph(g.n + 2, tuple(edges))
            try:
                d2 = Drawing.from_flags(g2, positions, list(d.long_flags) + [False], tol)
            except (GeometryError, MalformedDrawing):
                continue
            ep, epp = d2.arcs[e], d2.arcs[-1]
            ok = _events(ep, epp, tol) == (EventKind.PROPER_CROSSING.value,)
            for f in others if ok else ():
                old = _events(arc, d.arcs[f], tol)
                shared = g.shared_vertex(e, f)
                if shared is None:
                    ok = _events(ep, d2.arcs[f], tol) == old and _events(epp, d2.arcs[f], tol) == old
                elif shared == v:
                    ok = _events(ep, d2.arcs[f], tol) == old and _events(epp, d2.arcs[f], tol) is not None
                else:
                    ok = _events(epp, d2.arcs[f], tol) == old and _events(ep, d2.arcs[f], tol) is not None
                if not ok:
                    break
            if ok:
                return d2
        delta /= 2
    raise SplitFailed(f"could not split edge {e} while keeping its crossing pattern")


def _tangent_angle(d: Drawing, i: int, v: int, basis) -> float:
    arc = d.arcs[i]
    p = d.positions[v]
    t = normalize(cross(arc.pole, p))
    if d.graph.edges[i][0] != v:
        t = UnitVector(-t[0], -t[1], -t[2])
    return math.atan2(dot(t, basis[1]), dot(t, basis[0])) % (2 * math.pi)


def split_vertex(d: Drawing, v: int, *, tol: ToleranceConfig = DEFAULT_TOL,
                 require_certified: bool = False, delta: float = 1e-3) -> Drawing:
    """Detach two cyclically adjacent edges at a degree-4 vertex onto a new vertex A'.

    The pair is chosen with one edge into each component of G - v, so a
    figure-8 becomes a single cycle. A' is vertex n; edge indices are kept. A' sits at angular distance ``delta``
    along the bisector of the two outgoing tangents. Events of the moved edges
    with every edge not incident to ``v`` are preserved, else SplitFailed.
    """
    g = d.graph
    if not 0 <= v < g.n:
        raise InputError(f"vertex {v} out of range")
    if g.degree(v) != 4:
        raise PreconditionViolation(f"vertex {v} has degree {g.degree(v)}, expected 4")
    if require_certified:
        _require_certified(d, tol)
    p = d.positions[v]
    helper = (1.0, 0.0, 0.0) if abs(p[0]) < 0.9 else (0.0, 1.0, 0.0)
    b1 = normalize(cross(p, helper))
    b2 = normalize(cross(p, b1))
    inc = sorted(g.incident(v), key=lambda i: _tangent_angle(d, i, v, (b1, b2)))
    comp = g.components_without(v)
    candidates = []
    for k in range(4):
        f, h = inc[k], inc[(k + 1) % 4]
        if comp[g.other(f, v)] != comp[g.other(h, v)]:
            candidates.append((f, h))
    if not candidates:
        raise SplitFailed("no adjacent pair of edges reaches two different components")
    untouched = [x for x in range(g.m) if v not in g.edges[x]]
    step = delta
    while step > 10 * tol.eps_event:
        for f, h in candidates:
            af = _tangent_angle(d, f, v, (b1, b2))
            ah = _tangent_angle(d, h, v, (b1, b2))
            gap = (ah - af) % (2 * math.pi)
            mid = af + gap / 2
            direction = tuple(math.cos(mid) * np.asarray(b1) + math.sin(mid) * np.asarray(b2))
            axis = normalize(cross(p, direction))
            new_p = rotate(p, axis, step)
            positions = list(d.positions) + [new_p]
            edges = [tuple(g.n if w == v else w for w in ed) if x in (f, h) else ed
                     for x, ed in enumerate(g.edges)]
            try:
                g2 = AbstractGraph(g.n + 1, tuple(edges))
                d2 = Drawing.from_flags(g2, positions, d.long_flags, tol)
            except (GeometryError, MalformedDrawing, InputError):
                continue
            ok = all(_events(d.arcs[x], d.arcs[y], tol) == _events(d2.arcs[x], d2.arcs[y], tol)
                     for x in (f, h) for y in untouched)
            if ok:
                return d2
        step /= 2
    raise SplitFailed(f"could not split vertex {v} while keeping its crossing pattern")


def is_single_cycle(g: AbstractGraph) -> bool:
    return g.n >= 3 and g.m == g.n and g.is_connected() and all(g.degree(x) == 2 for x in range(g.n))


def even_cycle_chain(k_max: int, tol: ToleranceConfig = DEFAULT_TOL) -> list:
    """Certified drawings of the 6-, 8-, ..., k_max-cycles."""
    return [_even_chain(k, tol) for k in range(6, k_max + 1, 2)]


def perturbed(d: Drawing, seed: int, margin: float,
              tol: ToleranceConfig = DEFAULT_TOL) -> Drawing:
    """Same combinatorics with every vertex moved by at most ``margin``."""
    rng = np.random.default_rng(seed)
    pts = []
    for p in d.positions:
        g = rng.standard_normal(3)
        direction = g - dot(g, p) * np.asarray(p)
        axis = normalize(cross(p, tuple(direction)))
        pts.append(rotate(p, axis, margin * rng.uniform(0.0, 1.0)))
    return d.with_positions(pts, tol)


def arcs_between(points: Sequence, long_flags: Sequence[bool], tol=DEFAULT_TOL) -> list:
    return [arc_between(a, b, f, tol) for (a, b), f in zip(points, long_flags)]
