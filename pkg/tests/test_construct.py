import math

import numpy as np
import pytest

from spherical_thrackle.classify import Analysis, Verdict, classify_cycle, classify_path
from spherical_thrackle.construct import (
    PlanarDrawing,
    construct_cycle,
    gnomonic_lift,
    insert_edge_pair,
    is_single_cycle,
    perturbed,
    six_cycle_drawing,
    split_edge,
    split_vertex,
    star_polygon_thrackle,
)
from spherical_thrackle.drawing import Drawing, clearance, verify_thrackle
from spherical_thrackle.errors import (
    CapTooLarge,
    EvenCycleRequested,
    InputError,
    PreconditionViolation,
)
from spherical_thrackle.graph import AbstractGraph
from spherical_thrackle.kernel import EventKind, from_lonlat

from oracles import segments_cross_bruteforce


# ------------------------------------------------------------ planar stars

@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_star_polygon_is_thrackle(n):
    p = star_polygon_thrackle(n)
    assert p.is_thrackle()
    g = p.graph
    adjacent = sum(1 for i in range(g.m) for j in range(i + 1, g.m) if g.shared_vertex(i, j) is not None)
    assert p.proper_crossing_count() == g.m * (g.m - 1) // 2 - adjacent


def test_pentagram_crossings_match_bruteforce():
    p = star_polygon_thrackle(5)
    g = p.graph
    count = 0
    for i in range(g.m):
        for j in range(i + 1, g.m):
            if g.shared_vertex(i, j) is not None:
                continue
            a, b = (p.points[v] for v in g.edges[i])
            c, d = (p.points[v] for v in g.edges[j])
            hit = segments_cross_bruteforce(a, b, c, d)
            assert hit == (p.pair_kind(i, j) is EventKind.PROPER_CROSSING)
            count += hit
    assert count == 5


def test_star_polygon_rejects_even_and_small():
    with pytest.raises(EvenCycleRequested):
        star_polygon_thrackle(4)
    with pytest.raises(InputError):
        star_polygon_thrackle(2)


def test_planar_square_is_not_thrackle():
    sq = PlanarDrawing(AbstractGraph.cycle(4), [(0, 0), (1, 0), (1, 1), (0, 1)])
    assert not sq.is_thrackle()


# ------------------------------------------------------------ lift

def test_lift_small_cap():
    d = gnomonic_lift(star_polygon_thrackle(5), 0.3)
    assert verify_thrackle(d).is_thrackle
    for q in d.positions:
        assert math.acos(min(1.0, q[2])) <= 0.3 + 1e-12
    assert not any(d.long_flags)


def test_lift_origin_to_north_pole():
    p = PlanarDrawing(AbstractGraph.path(2), [(0, 0), (1, 0), (0, 1)])
    d = gnomonic_lift(p, 0.5)
    assert np.allclose(d.positions[0], (0.0, 0.0, 1.0))


def test_lift_pattern_independent_of_cap():
    p = star_polygon_thrackle(7)
    a = verify_thrackle(gnomonic_lift(p, 0.2))
    b = verify_thrackle(gnomonic_lift(p, 1.2))
    kinds = lambda r: {k: sorted(ev.kind.value for ev in v) for k, v in r.pair_table.items()}
    assert kinds(a) == kinds(b)


def test_lift_cap_range():
    with pytest.raises(InputError):
        gnomonic_lift(star_polygon_thrackle(5), math.pi / 2)
    with pytest.raises(InputError):
        gnomonic_lift(star_polygon_thrackle(5), 0.0)


def test_cap_too_large_for_tolerance():
    from spherical_thrackle.kernel import ToleranceConfig
    # a huge event band makes the crossings near the vertices collide
    with pytest.raises(CapTooLarge):
        gnomonic_lift(star_polygon_thrackle(11), 0.05, ToleranceConfig(eps_event=1e-2))


# ------------------------------------------------------------ even cycles

def test_six_cycle():
    d = six_cycle_drawing()
    rep = verify_thrackle(d)
    assert rep.is_thrackle and rep.is_general_position
    assert is_single_cycle(d.graph) and d.graph.n == 6
    assert classify_cycle(d, range(6)).verdict is Verdict.GOOD
    assert sum(d.long_flags) == 3


def test_insert_edge_pair_grows_by_two():
    d8 = insert_edge_pair(six_cycle_drawing())
    assert is_single_cycle(d8.graph) and d8.graph.n == 8
    assert verify_thrackle(d8).is_thrackle
    assert classify_cycle(d8, range(8)).verdict is Verdict.GOOD


def test_insert_rejects_short_or_odd():
    with pytest.raises(PreconditionViolation):
        insert_edge_pair(construct_cycle(5))


@pytest.mark.parametrize("n", [3, 5, 6, 7, 8, 9, 10, 11, 12])
def test_construct_cycle(n):
    d = construct_cycle(n)
    rep = verify_thrackle(d)
    assert rep.is_thrackle and rep.is_general_position
    assert is_single_cycle(d.graph) and d.graph.n == n
    if n >= 5:
        assert classify_cycle(d, range(n)).verdict is Verdict.GOOD
    if n % 2 == 0:
        assert any(d.long_flags)


def test_construct_four_cycle_rejected():
    with pytest.raises(PreconditionViolation):
        construct_cycle(4)
    with pytest.raises(InputError):
        construct_cycle(2)


def test_perturbed_within_margin():
    d = six_cycle_drawing()
    m = clearance(d) / 2
    d2 = perturbed(d, 3, m)
    for p, q in zip(d.positions, d2.positions):
        assert math.acos(min(1.0, float(np.dot(p, q)))) <= m + 1e-12
    assert verify_thrackle(d2).is_thrackle


# ------------------------------------------------------------ split_edge

@pytest.mark.parametrize("n", [5, 6])
def test_split_edge_gives_good_path(n):
    d = construct_cycle(n)
    e = d.long_flags.index(False)
    u, v = d.graph.edges[e]
    d2 = split_edge(d, e)
    assert d2.graph.n == n + 2 and d2.graph.m == n + 1
    assert d2.graph.edges[e] == (n, v) and d2.graph.edges[-1] == (u, n + 1)
    rep = verify_thrackle(d2)
    # the two halves cross each other and nothing else changed
    assert [ev.kind for ev in rep.pair_table[(e, n)]] == [EventKind.PROPER_CROSSING]
    assert len(rep.violations) == 2
    walk = [n] + [(v + k) % n for k in range(n)] + [n + 1]
    a = Analysis(d2, require_certified=False)
    assert classify_path(a, walk).verdict is Verdict.GOOD


def test_split_edge_rejects_long():
    d = six_cycle_drawing()
    with pytest.raises(PreconditionViolation):
        split_edge(d, d.long_flags.index(True))


# ------------------------------------------------------------ split_vertex

def figure_eight():
    g = AbstractGraph(6, ((0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 5), (5, 0)))
    pts = [from_lonlat(0, .9), from_lonlat(-.5, .3), from_lonlat(.5, .3),
           from_lonlat(2.5, .5), from_lonlat(3.0, .2), from_lonlat(3.6, .5)]
    return Drawing.from_flags(g, pts)


def test_split_vertex_joins_figure_eight():
    d = figure_eight()
    d2 = split_vertex(d, 0)
    assert is_single_cycle(d2.graph) and d2.graph.n == 7
    assert sum(1 for ed in d2.graph.edges if 6 in ed) == 2


def test_split_vertex_requires_degree_four():
    with pytest.raises(PreconditionViolation):
        split_vertex(construct_cycle(5), 0)
