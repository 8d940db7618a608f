import math

import numpy as np
from hypothesis import assume, given
from hypothesis import strategies as st

from spherical_thrackle.construct import construct_cycle
from spherical_thrackle.drawing import verify_thrackle
from spherical_thrackle.graph import AbstractGraph
from spherical_thrackle.io import dumps_drawing, from_graph6, loads_drawing, to_graph6
from spherical_thrackle.kernel import (
    Arc,
    EventKind,
    Position,
    arc_between,
    arc_pair_intersections,
    crossing_orientation,
    point_position,
    random_rotation,
    rotate,
    tangent_at,
)

from oracles import random_arc_pair

seeds = st.integers(0, 2**32 - 1)


def unit(rng):
    v = rng.standard_normal(3)
    return tuple(v / np.linalg.norm(v))


def far_apart(p, q):
    c = float(np.dot(p, q))
    return abs(c) < 0.99


@given(seeds)
def test_short_plus_long_is_full_turn(seed):
    rng = np.random.default_rng(seed)
    p, q = unit(rng), unit(rng)
    assume(far_apart(p, q))
    s, lg = arc_between(p, q, False), arc_between(p, q, True)
    assert math.isclose(s.angle + lg.angle, 2 * math.pi, abs_tol=1e-12)
    assert s.angle < math.pi < lg.angle


@given(seeds, st.booleans())
def test_endpoints_and_tangent(seed, want_long):
    rng = np.random.default_rng(seed)
    p, q = unit(rng), unit(rng)
    assume(far_apart(p, q))
    a = arc_between(p, q, want_long)
    assert point_position(a, p) is Position.START
    assert point_position(a, q) is Position.END
    mid = a.point_at(a.angle / 2)
    assert point_position(a, mid) is Position.INTERIOR
    t = tangent_at(a, mid)
    assert abs(np.dot(t, mid)) < 1e-12 and abs(np.dot(t, a.pole)) < 1e-12
    r = a.reversed()
    assert point_position(r, q) is Position.START and r.angle == a.angle


@given(seeds)
def test_chi_antisymmetric(seed):
    rng = np.random.default_rng(seed)
    e, f = random_arc_pair(rng, 0.01, 0.0)
    for ev in arc_pair_intersections(e, f):
        if ev.kind is EventKind.PROPER_CROSSING:
            x = crossing_orientation(e, f, ev)
            assert x in (-1, 1)
            assert crossing_orientation(f, e, ev) == -x
            assert crossing_orientation(e.reversed(), f, ev) == -x


@given(seeds, seeds)
def test_events_rotation_invariant(seed, rseed):
    rng = np.random.default_rng(seed)
    e, f = random_arc_pair(rng, 0.01, 0.1)
    r = random_rotation(np.random.default_rng(rseed))
    kinds = sorted(ev.kind.value for ev in arc_pair_intersections(e, f))
    e2, f2 = (Arc.from_pole(tuple(r @ a.start), tuple(r @ a.pole), a.angle) for a in (e, f))
    assert sorted(ev.kind.value for ev in arc_pair_intersections(e2, f2)) == kinds


@given(seeds)
def test_events_symmetric_in_order(seed):
    rng = np.random.default_rng(seed)
    e, f = random_arc_pair(rng, 0.01, 0.1)
    a = sorted(ev.kind.value for ev in arc_pair_intersections(e, f))
    b = sorted(ev.kind.value for ev in arc_pair_intersections(f, e))
    assert a == b


@given(st.sampled_from([3, 5, 6, 7, 8]), seeds)
def test_serialization_preserves_verdict(n, rseed):
    d = construct_cycle(n).rotated(random_rotation(np.random.default_rng(rseed)))
    d2 = loads_drawing(dumps_drawing(d))
    a, b = verify_thrackle(d), verify_thrackle(d2)
    assert a.is_thrackle and b.is_thrackle
    assert dumps_drawing(d2) == dumps_drawing(d)


@given(st.integers(1, 20), st.data())
def test_graph6_round_trip(n, data):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    g = AbstractGraph(n, tuple(chosen))
    back = from_graph6(to_graph6(g))
    assert back.n == n and {frozenset(e) for e in back.edges} == {frozenset(e) for e in chosen}


@given(seeds, st.floats(0.01, 3.0))
def test_rotate_preserves_angles(seed, angle):
    rng = np.random.default_rng(seed)
    p, q, axis = unit(rng), unit(rng), unit(rng)
    p2, q2 = rotate(p, axis, angle), rotate(q, axis, angle)
    assert math.isclose(float(np.dot(p, q)), float(np.dot(p2, q2)), abs_tol=1e-12)
