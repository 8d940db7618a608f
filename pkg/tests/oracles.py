"""Independent brute-force oracles used by the tests."""

from __future__ import annotations

import math

import numpy as np

from spherical_thrackle.kernel import Arc, from_lonlat, normalize, rotate

SAMPLES = 10_000


def sample_arc(arc: Arc, n: int = SAMPLES) -> np.ndarray:
    """n+1 points evenly spaced along the arc, endpoints included."""
    t = np.linspace(0.0, arc.angle, n + 1)
    a = np.asarray(arc.start)
    b = np.cross(np.asarray(arc.pole), a)
    return np.outer(np.cos(t), a) + np.outer(np.sin(t), b)


def dense_events(e: Arc, f: Arc, n: int = SAMPLES, end_tol: float = 1e-9) -> list:
    """Common points of two arcs found by sampling alone.

    Walks e and records where it changes side of C(f); a side change is an
    event when the crossing point is within a few sample steps of f. Endpoints
    shared by both arcs are reported separately. Returns sorted kind strings.
    """
    pe = sample_arc(e, n)
    pf = sample_arc(f, n)
    s = pe @ np.asarray(f.pole)
    events = []
    shared = []
    for a in (e.start, e.end):
        for b in (f.start, f.end):
            if math.dist(a, b) < end_tol:
                shared.append(np.asarray(a))
    step_f = f.angle / n
    idx = np.nonzero(np.sign(s[:-1]) * np.sign(s[1:]) < 0)[0]
    for k in idx:
        w = s[k] / (s[k] - s[k + 1])
        p = pe[k] * (1 - w) + pe[k + 1] * w
        p = p / np.linalg.norm(p)
        if any(np.linalg.norm(p - q) < 1e-6 for q in shared):
            continue
        if np.min(np.linalg.norm(pf - p, axis=1)) < 3 * step_f:
            events.append("ProperCrossing")
    events += ["SharedEndpoint"] * len(shared)
    return sorted(events)


def _random_point(rng) -> tuple:
    v = rng.standard_normal(3)
    return tuple(v / np.linalg.norm(v))


def random_arc(rng) -> Arc:
    start = _random_point(rng)
    helper = _random_point(rng)
    pole = normalize(np.cross(start, helper))
    angle = float(rng.uniform(0.05, 2 * math.pi - 0.05))
    if abs(angle - math.pi) < 0.05:
        angle += 0.1
    return Arc.from_pole(start, pole, angle)


def _depth_to_ends(arc: Arc, p) -> float:
    t = arc.param_of(p)
    return min(abs(t), abs(arc.angle - t), abs(2 * math.pi - t))


def well_separated(e: Arc, f: Arc, margin: float) -> bool:
    """True if the pair is at least ``margin`` from every degeneracy."""
    c = np.cross(np.asarray(e.pole), np.asarray(f.pole))
    if np.linalg.norm(c) < margin:
        return False
    c = c / np.linalg.norm(c)
    for p in (c, -c):
        for arc in (e, f):
            if _depth_to_ends(arc, p) < margin:
                return False
    return True


def random_arc_pair(rng, margin: float = 0.01, shared_fraction: float = 0.1) -> tuple:
    """A random pair at least ``margin`` from degeneracy; sometimes sharing a start point."""
    while True:
        e = random_arc(rng)
        if rng.random() < shared_fraction:
            helper = _random_point(rng)
            pole = normalize(np.cross(e.start, helper))
            angle = float(rng.uniform(0.05, 2 * math.pi - 0.05))
            if abs(angle - math.pi) < 0.05:
                continue
            f = Arc.from_pole(e.start, pole, angle)
            if _shared_ok(e, f, margin):
                return e, f
            continue
        f = random_arc(rng)
        if well_separated(e, f, margin):
            return e, f


def _shared_ok(e: Arc, f: Arc, margin: float) -> bool:
    c = np.cross(np.asarray(e.pole), np.asarray(f.pole))
    if np.linalg.norm(c) < margin:
        return False
    # the antipode of the shared start is the only other candidate
    q = tuple(-np.asarray(e.start))
    return all(_depth_to_ends(a, q) >= margin for a in (e, f)) and \
        _depth_to_ends(e, f.end) >= margin and _depth_to_ends(f, e.end) >= margin


def lonlat_arc(lon0, lat0, lon1, lat1, long=False):
    from spherical_thrackle.kernel import arc_between
    return arc_between(from_lonlat(lon0, lat0), from_lonlat(lon1, lat1), long)


def segments_cross_bruteforce(a, b, c, d, n: int = 2000) -> bool:
    """Sampled test for whether two planar segments cross at an interior point."""
    t = np.linspace(0.0, 1.0, n + 1)[1:-1]
    p = np.outer(1 - t, a) + np.outer(t, b)
    u = np.asarray(d) - np.asarray(c)
    side = u[0] * (p[:, 1] - c[1]) - u[1] * (p[:, 0] - c[0])
    k = np.nonzero(np.sign(side[:-1]) * np.sign(side[1:]) < 0)[0]
    for i in k:
        q = (p[i] + p[i + 1]) / 2
        s = np.dot(q - np.asarray(c), u) / np.dot(u, u)
        if 0 < s < 1:
            return True
    return False


def rotate_all(points, axis, angle):
    return [rotate(p, axis, angle) for p in points]
