"""Good/bad paths and cycles, separation, bad triangles, and the lemma suite.

Every lemma check runs against a certified drawing and returns Pass, Fail or
NotApplicable. NotApplicable means the structural hypothesis of the lemma
never occurs in the drawing; it is never reported as Pass.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .drawing import ChiTable, Drawing, VerificationReport, verify_thrackle
from .errors import (
    DegenerateOrientation,
    MultipleTriangles,
    NotAPath,
    NotCertified,
    UnknownLemmaId,
)
from .graph import AbstractGraph
from .kernel import DEFAULT_TOL, ToleranceConfig, cross, dot, normalize


class Verdict(enum.Enum):
    GOOD = "Good"
    BAD = "Bad"


class LemmaVerdict(enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class DirectedPath:
    """A walk given by its vertex sequence; ``steps`` holds (edge, forward) pairs."""

    vertices: tuple
    steps: tuple
    closed: bool = False

    @classmethod
    def from_vertices(cls, graph: AbstractGraph, vertices: Sequence[int],
                      closed: bool = False) -> "DirectedPath":
        vs = tuple(int(v) for v in vertices)
        k = len(vs)
        if k < 2 or (closed and k < 3):
            raise NotAPath("a path needs at least one edge")
        pairs = [(vs[a], vs[a + 1]) for a in range(k - 1)]
        if closed:
            pairs.append((vs[-1], vs[0]))
        steps = []
        for u, v in pairs:
            i = graph.edge_index(u, v)
            if i is None:
                raise NotAPath(f"{u}-{v} is not an edge")
            steps.append((i, graph.edges[i] == (u, v)))
        for (i, _), (j, _) in zip(steps, steps[1:] + (steps[:1] if closed else [])):
            if i == j:
                raise NotAPath(f"edge {i} is traversed twice in a row")
        return cls(vs, tuple(steps), closed)

    @property
    def edges(self) -> tuple:
        return tuple(i for i, _ in self.steps)

    @property
    def simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def reversed(self) -> "DirectedPath":
        steps = tuple((i, not f) for i, f in reversed(self.steps))
        if self.closed:
            vs = (self.vertices[0],) + tuple(reversed(self.vertices[1:]))
            return DirectedPath(vs, steps, True)
        return DirectedPath(tuple(reversed(self.vertices)), steps, False)


@dataclass(frozen=True)
class PathClass:
    verdict: Verdict
    chi_sequence: tuple

    def as_dict(self) -> dict:
        return {"verdict": self.verdict.value, "chi_sequence": list(self.chi_sequence)}


@dataclass(frozen=True)
class SeparationWitness:
    edge: int
    vertex: int
    f: int
    g: int
    sides: tuple = (1, -1)

    def as_dict(self) -> dict:
        return {"edge": self.edge, "vertex": self.vertex, "f": self.f, "g": self.g,
                "sides": list(self.sides)}


@dataclass(frozen=True)
class BadTriangle:
    vertices: tuple
    edges: tuple
    long_edges: tuple
    vertex_signs: tuple      # sign at each of ``vertices`` going round the triangle
    same_sign_edge: Optional[int]

    @property
    def long_edge(self) -> Optional[int]:
        return self.long_edges[0] if len(self.long_edges) == 1 else None

    @property
    def consistent(self) -> bool:
        """Exactly one long edge, and it joins the two vertices of equal sign."""
        return len(self.long_edges) == 1 and self.long_edges[0] == self.same_sign_edge

    def as_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edges": list(self.edges),
                "long_edges": list(self.long_edges), "vertex_signs": list(self.vertex_signs),
                "same_sign_edge": self.same_sign_edge}


@dataclass
class LemmaReport:
    lemma_id: str
    verdict: LemmaVerdict
    witness: Optional[dict] = None
    checked: int = 0
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        out = {"lemma_id": self.lemma_id, "verdict": self.verdict.value, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.notes:
            out["notes"] = list(self.notes)
        return out


class Analysis:
    """A drawing with its verification report and chi table, computed once."""

    def __init__(self, d: Drawing, tol: ToleranceConfig = DEFAULT_TOL,
                 report: Optional[VerificationReport] = None, require_certified: bool = True):
        self.d = d
        self.g = d.graph
        self.tol = tol
        self.report = report or verify_thrackle(d, tol)
        if require_certified and not self.report.is_thrackle:
            raise NotCertified("drawing does not verify as a thrackle")
        self.chi_table = ChiTable(d, self.report, tol)
        self._cycles = None

    def chi(self, e: tuple, f: tuple) -> int:
        """chi of directed edges given as (index, forward)."""
        return self.chi_table(e[0], f[0], e[1], f[1])

    @property
    def cycles(self) -> list:
        if self._cycles is None:
            self._cycles = self.g.cycles()
        return self._cycles

    def is_long(self, i: int) -> bool:
        return self.d.arcs[i].is_long

    def outgoing_tangent(self, i: int, v: int):
        """Unit tangent of edge ``i`` leaving vertex ``v``."""
        arc = self.d.arcs[i]
        p = self.d.positions[v]
        t = normalize(cross(arc.pole, p))
        if self.g.edges[i][0] == v:
            return t
        return (-t[0], -t[1], -t[2])


def _as_analysis(d, tol, require_certified=True) -> Analysis:
    if isinstance(d, Analysis):
        return d
    return Analysis(d, tol, require_certified=require_certified)


def _signs(a: Analysis, p: DirectedPath) -> tuple:
    steps = list(p.steps)
    pairs = list(zip(steps, steps[1:]))
    if p.closed:
        pairs.append((steps[-1], steps[0]))
    return tuple(a.chi(x, y) for x, y in pairs)


def _verdict(signs: Sequence[int]) -> Verdict:
    return Verdict.GOOD if len(set(signs)) <= 1 else Verdict.BAD


def classify_path(d, p, tol: ToleranceConfig = DEFAULT_TOL) -> PathClass:
    """Good iff every consecutive crossing orientation along the path is equal."""
    a = _as_analysis(d, tol)
    if not isinstance(p, DirectedPath):
        p = DirectedPath.from_vertices(a.g, p)
    signs = _signs(a, p)
    return PathClass(_verdict(signs), signs)


def classify_cycle(d, c, tol: ToleranceConfig = DEFAULT_TOL) -> PathClass:
    """As ``classify_path`` including the wrap-around sign chi(e_k, e_1)."""
    a = _as_analysis(d, tol)
    if not isinstance(c, DirectedPath):
        c = DirectedPath.from_vertices(a.g, c, closed=True)
    if not c.closed:
        raise NotAPath("expected a closed vertex sequence")
    signs = _signs(a, c)
    return PathClass(_verdict(signs), signs)


def _side(a: Analysis, e: int, f: int, v: int) -> int:
    t = a.outgoing_tangent(f, v)
    x = dot(t, a.d.arcs[e].pole)
    if abs(x) < a.tol.eps_circle:
        raise DegenerateOrientation(f"edge {f} leaves vertex {v} tangent to the circle of edge {e}")
    return 1 if x > 0 else -1


def separates_at(d, e: int, v: int, tol: ToleranceConfig = DEFAULT_TOL) -> Optional[SeparationWitness]:
    """Witness that two other edges at ``v`` start on opposite sides of C(e), if any."""
    a = _as_analysis(d, tol, require_certified=False)
    if v not in a.g.edges[e]:
        raise NotAPath(f"edge {e} is not incident to vertex {v}")
    if a.g.degree(v) < 3:
        return None
    plus, minus = None, None
    for f in a.g.incident(v):
        if f == e:
            continue
        s = _side(a, e, f, v)
        if s > 0 and plus is None:
            plus = f
        elif s < 0 and minus is None:
            minus = f
    if plus is None or minus is None:
        return None
    return SeparationWitness(e, v, plus, minus, (1, -1))


def find_bad_triangles(d, tol: ToleranceConfig = DEFAULT_TOL) -> list:
    a = _as_analysis(d, tol)
    tris = a.g.triangles()
    if len(tris) > 1:
        raise MultipleTriangles(f"{len(tris)} triangles in one certified drawing: {tris}")
    out = []
    for tri in tris:
        c = DirectedPath.from_vertices(a.g, tri, closed=True)
        signs = _signs(a, c)
        if _verdict(signs) is Verdict.GOOD:
            continue
        # signs[k] is the orientation at the vertex where step k meets step k+1,
        # which is vertices[k+1]
        at_vertex = {tri[(k + 1) % 3]: signs[k] for k in range(3)}
        vertex_signs = tuple(at_vertex[v] for v in tri)
        same = None
        for i, _ in c.steps:
            u, w = a.g.edges[i]
            if at_vertex[u] == at_vertex[w]:
                same = i
        longs = tuple(i for i, _ in c.steps if a.is_long(i))
        out.append(BadTriangle(tuple(tri), c.edges, longs, vertex_signs, same))
    return out


# ---------------------------------------------------------------- lemma suite

def _global_hypothesis(g: AbstractGraph) -> bool:
    return g.n > 0 and g.m > 0 and g.is_connected() and not g.has_terminal_edge()


def _na(lid, note) -> LemmaReport:
    return LemmaReport(lid, LemmaVerdict.NOT_APPLICABLE, notes=[note])


def _fail(lid, checked, predicate, **witness) -> LemmaReport:
    witness = {"predicate": predicate, **witness}
    return LemmaReport(lid, LemmaVerdict.FAIL, witness, checked)


def _pass(lid, checked, notes=None) -> LemmaReport:
    return LemmaReport(lid, LemmaVerdict.PASS, None, checked, list(notes or []))


def _cycle_path(a: Analysis, cyc) -> DirectedPath:
    return DirectedPath.from_vertices(a.g, cyc, closed=True)


def _lemma_cycle_good(a: Analysis) -> LemmaReport:
    lid = "L-CYCLE-GOOD"
    cycles = [c for c in a.cycles if len(c) >= 5]
    if not cycles:
        return _na(lid, "no cycle of length >= 5")
    for cyc in cycles:
        signs = _signs(a, _cycle_path(a, cyc))
        if _verdict(signs) is Verdict.BAD:
            return _fail(lid, len(cycles), "classify_cycle", cycle=list(cyc), chi_sequence=list(signs))
    return _pass(lid, len(cycles))


def _lemma_even_long(a: Analysis) -> LemmaReport:
    lid = "L-EVEN-LONG"
    cycles = [c for c in a.cycles if len(c) % 2 == 0 and len(c) >= 6]
    if not cycles:
        return _na(lid, "no even cycle of length >= 6")
    for cyc in cycles:
        edges = _cycle_path(a, cyc).edges
        if not any(a.is_long(i) for i in edges):
            return _fail(lid, len(cycles), "edge_length_class", cycle=list(cyc), edges=list(edges))
    return _pass(lid, len(cycles))


def _separations(a: Analysis) -> list:
    out = []
    for v in range(a.g.n):
        if a.g.degree(v) < 3:
            continue
        for e in a.g.incident(v):
            w = separates_at(a, e, v, a.tol)
            if w is not None:
                out.append(w)
    return out


def _lemma_sep_short(a: Analysis) -> LemmaReport:
    lid = "L-SEP-SHORT"
    if not _global_hypothesis(a.g):
        return _na(lid, "graph is not connected without terminal edges")
    seps = _separations(a)
    if not seps:
        return _na(lid, "no separating edge")
    bad_tri_edges = set()
    for t in find_bad_triangles(a, a.tol):
        bad_tri_edges.update(t.edges)
    for w in seps:
        if a.is_long(w.edge):
            return _fail(lid, len(seps), "separates_at", separation=w.as_dict(), reason="separating edge is long")
        if w.edge not in bad_tri_edges:
            return _fail(lid, len(seps), "separates_at", separation=w.as_dict(),
                         reason="separating edge is not on a bad 3-cycle")
    return _pass(lid, len(seps))


def _tangent_angles(a: Analysis, v: int) -> list:
    p = a.d.positions[v]
    helper = (1.0, 0.0, 0.0) if abs(p[0]) < 0.9 else (0.0, 1.0, 0.0)
    b1 = normalize(cross(p, helper))
    b2 = normalize(cross(p, b1))
    out = []
    for i in a.g.incident(v):
        t = a.outgoing_tangent(i, v)
        out.append(math.atan2(dot(t, b2), dot(t, b1)) % (2 * math.pi))
    return sorted(out)


def largest_tangent_gap(a: Analysis, v: int) -> float:
    """Largest angular gap between consecutive outgoing tangents at ``v``."""
    angs = _tangent_angles(a, v)
    gaps = [b - x for x, b in zip(angs, angs[1:])] + [angs[0] + 2 * math.pi - angs[-1]]
    return max(gaps)


def _lemma_hemi(a: Analysis) -> LemmaReport:
    lid = "L-HEMI"
    if not _global_hypothesis(a.g):
        return _na(lid, "graph is not connected without terminal edges")
    verts = [v for v in range(a.g.n) if a.g.degree(v) >= 3]
    if not verts:
        return _na(lid, "no vertex of degree >= 3")
    notes = []
    eps = a.tol.eps_event
    for v in verts:
        gap = largest_tangent_gap(a, v)
        # a gap above pi leaves room for a circle with every starting segment strictly on one side
        if gap > math.pi + eps:
            continue
        if gap >= math.pi - eps:
            notes.append(f"vertex {v}: closed hemisphere only (boundary tangency)")
            continue
        return _fail(lid, len(verts), "largest_tangent_gap", vertex=v, largest_gap=gap)
    return _pass(lid, len(verts), notes)


def _lemma_deg4(a: Analysis) -> LemmaReport:
    lid = "L-DEG4"
    if not _global_hypothesis(a.g):
        return _na(lid, "graph is not connected without terminal edges")
    tri_vertices = set()
    for t in find_bad_triangles(a, a.tol):
        tri_vertices.update(t.vertices)
    for v in range(a.g.n):
        deg = a.g.degree(v)
        if deg > 4:
            return _fail(lid, a.g.n, "degree", vertex=v, degree=deg)
        if deg > 2 and v not in tri_vertices:
            return _fail(lid, a.g.n, "find_bad_triangles", vertex=v, degree=deg,
                         reason="vertex of degree > 2 is not on a bad 3-cycle")
    return _pass(lid, a.g.n)


def _lemma_long_a(a: Analysis) -> LemmaReport:
    lid = "L-LONG-A"
    longs = [i for i in range(a.g.m) if a.is_long(i)]
    pairs = [(i, j) for i in longs for v in a.g.edges[i] for j in a.g.incident(v) if j != i]
    if not pairs:
        return _na(lid, "no long edge with an adjacent edge")
    for i, j in pairs:
        if a.is_long(j):
            return _fail(lid, len(pairs), "edge_length_class", edges=[i, j])
    return _pass(lid, len(pairs))


def _lemma_long_b(a: Analysis) -> LemmaReport:
    lid = "L-LONG-B"
    checked = 0
    for e in range(a.g.m):
        if not a.is_long(e):
            continue
        sides = {}
        for v in a.g.edges[e]:
            for f in a.g.incident(v):
                if f == e:
                    continue
                checked += 1
                if a.is_long(f):
                    # a long arc leaving C(e) comes back across it
                    return _fail(lid, checked, "edge_length_class", long_edge=e, edge=f,
                                 reason="adjacent long edge cannot lie in a hemisphere")
                sides[f] = _side(a, e, f, v)
        if len(set(sides.values())) > 1:
            return _fail(lid, checked, "hemisphere_side", long_edge=e,
                         sides={str(k): s for k, s in sorted(sides.items())})
    if not checked:
        return _na(lid, "no long edge with an adjacent edge")
    return _pass(lid, checked)


def _steps(a: Analysis, walk) -> list:
    return list(DirectedPath.from_vertices(a.g, walk).steps)


def _lemma_long_c(a: Analysis) -> LemmaReport:
    lid = "L-LONG-C"
    checked = 0
    for walk in a.g.simple_paths(3):
        if len(walk) != 4:
            continue
        s1, s2, s3 = _steps(a, walk)
        if not a.is_long(s2[0]):
            continue
        checked += 1
        x, y = a.chi(s1, s2), a.chi(s1, s3)
        if x != y:
            return _fail(lid, checked, "crossing_orientation", path=list(walk),
                         chi_e1_e2=x, chi_e1_e3=y)
    if not checked:
        return _na(lid, "no simple 3-path with a long middle edge")
    return _pass(lid, checked)


def _directions(i: int):
    return ((i, True), (i, False))


def _lemma_long_d(a: Analysis) -> LemmaReport:
    lid = "L-LONG-D"
    checked = 0
    for walk in a.g.simple_paths(2):
        if len(walk) != 3:
            continue
        s1, s2 = _steps(a, walk)
        if a.is_long(s1[0]) or a.is_long(s2[0]):
            continue
        mid = walk[1]
        for e in range(a.g.m):
            if e in (s1[0], s2[0]) or mid in a.g.edges[e]:
                continue
            checked += 1
            de = (e, True)
            if a.chi(de, s2) != -a.chi(de, s1):
                return _fail(lid, checked, "crossing_orientation", path=list(walk), edge=e,
                             chi_e_e1=a.chi(de, s1), chi_e_e2=a.chi(de, s2))
    if not checked:
        return _na(lid, "no short-short 2-path with a non-incident edge")
    return _pass(lid, checked)


def long_e_configurations(a: Analysis):
    """Every (all-short simple path, edge) pair meeting the parity hypothesis.

    Yields (walk, steps, edge, product, expected).
    """
    g = a.g
    for walk in g.simple_paths():
        if len(walk) < 3:
            continue
        steps = _steps(a, walk)
        if any(a.is_long(i) for i, _ in steps):
            continue
        interior = set(walk[1:-1])
        used = {i for i, _ in steps}
        mlen = len(steps)
        for e in range(g.m):
            if e in used or interior & set(g.edges[e]):
                continue
            de = (e, True)
            product = a.chi(de, steps[-1]) * a.chi(de, steps[0])
            yield walk, steps, e, product, (-1) ** (mlen - 1)


def _lemma_long_e(a: Analysis) -> LemmaReport:
    lid = "L-LONG-E"
    checked = 0
    for walk, steps, e, product, expected in long_e_configurations(a):
        checked += 1
        if product != expected:
            return _fail(lid, checked, "crossing_orientation", path=list(walk), edge=e,
                         product=product, expected=expected)
    if not checked:
        return _na(lid, "no all-short path with a qualifying edge")
    return _pass(lid, checked)


def _lemma_gpl(a: Analysis) -> LemmaReport:
    lid = "L-GPL"
    checked = 0
    for walk in a.g.simple_paths():
        if len(walk) < 5 or walk > walk[::-1]:
            continue
        steps = _steps(a, walk)
        flags = [a.is_long(i) for i, _ in steps]
        if not (flags[1] and flags[-2]) or any(flags[:1] + flags[2:-2] + flags[-1:]):
            continue
        if _verdict(_signs(a, DirectedPath(tuple(walk), tuple(steps)))) is Verdict.BAD:
            continue
        checked += 1
        m = len(steps) - 2
        if m % 2 == 0:
            return _fail(lid, checked, "classify_path", path=list(walk), m=m)
    if not checked:
        return _na(lid, "no simple good path with long second and second-to-last edges")
    return _pass(lid, checked)


def _lemma_gcy(a: Analysis) -> LemmaReport:
    lid = "L-GCY"
    checked = 0
    for cyc in a.cycles:
        c = _cycle_path(a, cyc)
        if _verdict(_signs(a, c)) is Verdict.BAD:
            continue
        longs = [k for k, (i, _) in enumerate(c.steps) if a.is_long(i)]
        if not longs:
            continue
        checked += 1
        k = len(c.steps)
        if k % 2 == 1 and len(longs) > 1:
            return _fail(lid, checked, "classify_cycle", cycle=list(cyc), long_positions=longs,
                         reason="good odd cycle with more than one long edge")
        if len(longs) >= 2:
            for x, y in zip(longs, longs[1:] + [longs[0] + k]):
                if (y - x - 1) % 2 == 0:
                    return _fail(lid, checked, "classify_cycle", cycle=list(cyc),
                                 long_positions=longs, gap=y - x - 1)
    if not checked:
        return _na(lid, "no good cycle with a long edge")
    return _pass(lid, checked)


def _lemma_touch_even(a: Analysis) -> LemmaReport:
    lid = "L-TOUCH-EVEN"
    checked = 0
    cycles = a.cycles
    for c1, c2 in itertools.combinations(cycles, 2):
        if len(set(c1) & set(c2)) != 1:
            continue
        if len(c1) != 3 and len(c2) != 3:
            continue
        checked += 1
        other = c2 if len(c1) == 3 else c1
        if len(c1) == 3 and len(c2) == 3:
            return _fail(lid, checked, "find_bad_triangles", cycles=[list(c1), list(c2)],
                         reason="two triangles")
        if len(other) % 2 == 1:
            return _fail(lid, checked, "cycles", triangle=list(c1 if other is c2 else c2),
                         cycle=list(other))
    if not checked:
        return _na(lid, "no triangle touching another cycle at one vertex")
    return _pass(lid, checked)


LEMMAS = {
    "L-CYCLE-GOOD": _lemma_cycle_good,
    "L-EVEN-LONG": _lemma_even_long,
    "L-SEP-SHORT": _lemma_sep_short,
    "L-HEMI": _lemma_hemi,
    "L-DEG4": _lemma_deg4,
    "L-LONG-A": _lemma_long_a,
    "L-LONG-B": _lemma_long_b,
    "L-LONG-C": _lemma_long_c,
    "L-LONG-D": _lemma_long_d,
    "L-LONG-E": _lemma_long_e,
    "L-GPL": _lemma_gpl,
    "L-GCY": _lemma_gcy,
    "L-TOUCH-EVEN": _lemma_touch_even,
}
LEMMA_IDS = tuple(LEMMAS)


def check_lemma(d, lemma_id: str, tol: ToleranceConfig = DEFAULT_TOL, *,
                require_certified: bool = True) -> LemmaReport:
    """Run one lemma check; ``require_certified=False`` lets tests probe uncertified drawings."""
    if lemma_id not in LEMMAS:
        raise UnknownLemmaId(f"unknown lemma id {lemma_id!r}; known: {', '.join(LEMMA_IDS)}")
    a = _as_analysis(d, tol, require_certified)
    return LEMMAS[lemma_id](a)


def check_all(d, tol: ToleranceConfig = DEFAULT_TOL, *, require_certified: bool = True) -> list:
    a = _as_analysis(d, tol, require_certified)
    return [LEMMAS[lid](a) for lid in LEMMA_IDS]
