import math

import networkx as nx
import numpy as np
import pytest

from spherical_thrackle.construct import construct_cycle, gnomonic_lift, six_cycle_drawing, star_polygon_thrackle
from spherical_thrackle.drawing import (
    Drawing,
    Flag,
    check_general_position,
    clearance,
    edge_length_class,
    n_ge_m_check,
    verify_thrackle,
)
from spherical_thrackle.errors import InputError, MalformedDrawing, MediumEdge, NotCertified
from spherical_thrackle.graph import AbstractGraph, enumerate_graphs
from spherical_thrackle.kernel import Arc, LengthClass, from_lonlat, random_rotation


# ------------------------------------------------------------------ graph

def test_graph_rejects_bad_edges():
    with pytest.raises(InputError):
        AbstractGraph(2, ((0, 2),))
    with pytest.raises(InputError):
        AbstractGraph(2, ((0, 0),))
    with pytest.raises(InputError):
        AbstractGraph(2, ((0, 1), (1, 0)))


def test_graph_queries():
    g = AbstractGraph(5, ((0, 1), (1, 2), (2, 0), (2, 3), (3, 4)))
    assert g.degree(2) == 3
    assert g.is_connected()
    assert g.has_terminal_edge()
    assert not AbstractGraph.cycle(5).has_terminal_edge()
    assert sorted(g.cycles()) == [(0, 1, 2)]
    assert g.triangles() == [(0, 1, 2)] or list(g.triangles()) == [(0, 1, 2)]
    assert not AbstractGraph(4, ((0, 1), (2, 3))).is_connected()


def test_cycle_enumeration_matches_networkx():
    g = AbstractGraph(6, ((0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 5), (5, 0), (1, 4)))
    ours = {frozenset(c) for c in g.cycles()}
    nxg = nx.Graph(list(g.edges))
    theirs = {frozenset(c) for c in nx.simple_cycles(nxg) if len(c) >= 3}
    assert len(g.cycles()) == len(list(c for c in nx.simple_cycles(nxg) if len(c) >= 3))
    assert ours == theirs


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_enumerate_graphs_matches_atlas(n):
    atlas = [h for h in nx.graph_atlas_g() if h.number_of_nodes() == n]
    for m in range(n - 1, n + 3):
        want = sum(1 for h in atlas if h.number_of_edges() == m and nx.is_connected(h)
                   and min(dict(h.degree()).values()) >= 2)
        got = enumerate_graphs(n, m, min_degree=2)
        assert len(got) == want, (n, m)
        for g in got:
            assert g.is_connected() and min(g.degree(v) for v in range(n)) >= 2


def test_falsify_family_size():
    fam = [g for n in range(1, 7) for g in enumerate_graphs(n, n + 1, min_degree=2)]
    assert [(g.n, g.m) for g in fam].count((6, 7)) == 5
    assert len(fam) == 9


# ------------------------------------------------------------------ drawing

def test_drawing_endpoint_mismatch():
    g = AbstractGraph(2, ((0, 1),))
    p = [from_lonlat(0, 0), from_lonlat(1, 0)]
    arc = Arc.from_pole(p[0], (0.0, 0.0, 1.0), 0.5)
    with pytest.raises(MalformedDrawing):
        Drawing(g, p, [arc])


def test_pentagram_lift_is_thrackle():
    d = gnomonic_lift(star_polygon_thrackle(5), 0.3)
    rep = verify_thrackle(d)
    assert rep.is_thrackle and rep.is_general_position


def test_disjoint_arcs_violation():
    g = AbstractGraph(4, ((0, 1), (2, 3)))
    d = Drawing.from_flags(g, [from_lonlat(0, 0), from_lonlat(0.3, 0),
                               from_lonlat(1.0, 0.2), from_lonlat(1.3, 0.4)])
    rep = verify_thrackle(d)
    assert not rep.is_thrackle
    assert [(v.pair, v.reason) for v in rep.violations] == [((0, 1), "no common point")]


def test_six_cycle_certified():
    d = six_cycle_drawing()
    rep = verify_thrackle(d)
    assert rep.is_thrackle and rep.is_general_position
    assert check_general_position(d).flags == []


def test_adjacent_extra_crossing_is_violation():
    # two long arcs from a common vertex meet again at the antipodal point region
    g = AbstractGraph(3, ((0, 1), (0, 2)))
    d = Drawing.from_flags(g, [from_lonlat(0, 0), from_lonlat(0.5, 0.3), from_lonlat(0.5, -0.3)],
                           [True, True])
    rep = verify_thrackle(d)
    assert not rep.is_thrackle
    assert any("also cross" in v.reason for v in rep.violations)


def test_cocircular_flag():
    g = AbstractGraph(4, ((0, 1), (2, 3)))
    d = Drawing.from_flags(g, [from_lonlat(0, 0), from_lonlat(0.3, 0),
                               from_lonlat(1.0, 0), from_lonlat(1.3, 0)])
    kinds = [f.kind for f in check_general_position(d).flags]
    assert kinds == [Flag.CO_CIRCULAR]
    assert not verify_thrackle(d).is_general_position


def test_medium_flag_and_length_class():
    g = AbstractGraph(2, ((0, 1),))
    a = Arc.from_pole((1.0, 0.0, 0.0), (0.0, 0.0, 1.0), math.pi)
    d = Drawing(g, [a.start, a.end], [a])
    assert [f.kind for f in check_general_position(d).flags] == [Flag.MEDIUM_EDGE]
    with pytest.raises(MediumEdge):
        edge_length_class(d, 0)
    d6 = six_cycle_drawing()
    assert edge_length_class(d6, 0) is LengthClass.LONG
    assert edge_length_class(d6, 1) is LengthClass.SHORT


def test_vertex_on_interior_flag():
    g = AbstractGraph(4, ((0, 1), (2, 3)))
    d = Drawing.from_flags(g, [from_lonlat(-0.5, 0), from_lonlat(0.5, 0),
                               from_lonlat(0, 0), from_lonlat(0.2, 0.6)])
    kinds = {f.kind for f in check_general_position(d).flags}
    assert Flag.VERTEX_ON_INTERIOR in kinds


def test_n_ge_m_check():
    assert n_ge_m_check(construct_cycle(5))
    assert n_ge_m_check(construct_cycle(8))
    g = AbstractGraph(4, ((0, 1), (2, 3)))
    d = Drawing.from_flags(g, [from_lonlat(0, 0), from_lonlat(0.3, 0),
                               from_lonlat(1.0, 0.2), from_lonlat(1.3, 0.4)])
    with pytest.raises(NotCertified):
        n_ge_m_check(d)


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_crossing_count_identity(n):
    d = construct_cycle(n)
    rep = verify_thrackle(d)
    m = d.graph.m
    adjacent = sum(1 for i in range(m) for j in range(i + 1, m) if d.graph.shared_vertex(i, j) is not None)
    assert rep.proper_crossing_count() == m * (m - 1) // 2 - adjacent


@pytest.mark.parametrize("n", [5, 6, 9])
def test_rotation_and_relabel_invariance(n):
    d = construct_cycle(n)
    rng = np.random.default_rng(n)
    for _ in range(5):
        assert verify_thrackle(d.rotated(random_rotation(rng))).is_thrackle
    perm = list(rng.permutation(d.graph.m))
    g2 = AbstractGraph(d.graph.n, tuple(d.graph.edges[i] for i in perm))
    d2 = Drawing(g2, d.positions, [d.arcs[i] for i in perm])
    assert verify_thrackle(d2).is_thrackle


def test_clearance_bounds():
    d = six_cycle_drawing()
    c = clearance(d)
    assert 0.4 < c < 0.5
    assert verify_thrackle(d, verify_tol(c * 0.99)).is_thrackle
    assert not verify_thrackle(d, verify_tol(c * 1.05)).is_thrackle


def verify_tol(eps):
    from spherical_thrackle.kernel import ToleranceConfig
    return ToleranceConfig(eps_event=eps)
