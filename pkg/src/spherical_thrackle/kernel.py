"""Spherical geometry kernel: points, great circles, directed arcs and their
intersection events.

Every predicate answers through a tolerance band rather than a raw sign bit.
A drawing is certified only when each band is cleared by ``eps_event``, so the
verdicts are stable under coordinate noise far below that margin.

Arcs always carry an explicit pole and angle. Two endpoints alone cannot tell
an arc from its complement, and long arcs (angle > pi) are first-class here.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    CoCircular,
    DegenerateCircle,
    DegenerateOrientation,
    InputError,
    MediumEdge,
    PointNotOnArc,
)

TWO_PI = 2.0 * math.pi

TOLERANCE_ENV = "SPHERICAL_THRACKLE_TOL"


class UnitVector(NamedTuple):
    x: float
    y: float
    z: float

    def __neg__(self) -> "UnitVector":
        return UnitVector(-self.x, -self.y, -self.z)

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


# -- tuple vector helpers; kept scalar because the inputs are always 3-vectors

def dot(a, b) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a, b) -> tuple:
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def norm(a) -> float:
    return math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


def normalize(a) -> UnitVector:
    n = norm(a)
    if n == 0.0:
        raise DegenerateCircle("cannot normalize the zero vector")
    return UnitVector(a[0] / n, a[1] / n, a[2] / n)


def unit(x: float, y: float, z: float) -> UnitVector:
    return normalize((x, y, z))


def from_lonlat(lon: float, lat: float) -> UnitVector:
    """Unit vector from longitude/latitude in radians."""
    c = math.cos(lat)
    return UnitVector(c * math.cos(lon), c * math.sin(lon), math.sin(lat))


def angle_between(a, b) -> float:
    """Principal angle in [0, pi], accurate near 0 and pi."""
    return math.atan2(norm(cross(a, b)), dot(a, b))


def rotate(v, axis, angle: float) -> UnitVector:
    """Rotate ``v`` counterclockwise (seen from the tip of ``axis``)."""
    c, s = math.cos(angle), math.sin(angle)
    k = axis
    kxv = cross(k, v)
    kdv = dot(k, v)
    return UnitVector(v[0] * c + kxv[0] * s + k[0] * kdv * (1 - c),
                      v[1] * c + kxv[1] * s + k[1] * kdv * (1 - c),
                      v[2] * c + kxv[2] * s + k[2] * kdv * (1 - c))


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical bands shared by every predicate.

    eps_unit    slack on unit norms and pole orthogonality
    eps_event   minimum angular separation of distinct events (the certification margin)
    eps_medium  exclusion band around arc length pi
    eps_circle  minimum |pole_e x pole_f| for two circles to count as distinct
    """

    eps_unit: float = 1e-12
    eps_event: float = 1e-6
    eps_medium: float = 1e-6
    eps_circle: float = 1e-6

    def __post_init__(self):
        for name in ("eps_unit", "eps_event", "eps_medium", "eps_circle"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be strictly positive")
        if not self.eps_event > 10 * self.eps_unit:
            raise InputError("eps_event must exceed 10*eps_unit")

    def with_event(self, margin: float) -> "ToleranceConfig":
        return replace(self, eps_event=margin)

    def as_dict(self) -> dict:
        return {"eps_unit": self.eps_unit, "eps_event": self.eps_event,
                "eps_medium": self.eps_medium, "eps_circle": self.eps_circle}

    @classmethod
    def from_env(cls, **overrides) -> "ToleranceConfig":
        """Defaults, then ``SPHERICAL_THRACKLE_TOL`` ("eps_event=1e-7,..."), then overrides."""
        values = {}
        raw = os.environ.get(TOLERANCE_ENV, "").strip()
        if raw:
            for item in raw.split(","):
                key, _, val = item.partition("=")
                key = key.strip()
                if key not in cls.__dataclass_fields__:
                    raise InputError(f"unknown tolerance field {key!r} in {TOLERANCE_ENV}")
                try:
                    values[key] = float(val)
                except ValueError:
                    raise InputError(f"bad value for {key} in {TOLERANCE_ENV}: {val!r}") from None
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class GreatCircle:
    pole: UnitVector

    def same_set(self, other: "GreatCircle", tol: ToleranceConfig = DEFAULT_TOL) -> bool:
        return norm(cross(self.pole, other.pole)) < tol.eps_circle


class LengthClass(enum.Enum):
    LONG = "long"
    SHORT = "short"


@dataclass(frozen=True)
class Arc:
    """Directed great-circle arc: ``start`` rotated about ``pole`` by ``angle`` ends at ``end``."""

    start: UnitVector
    end: UnitVector
    pole: UnitVector
    angle: float
    # pole x start, cached for parameter lookups
    _ortho: UnitVector = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0.0 < self.angle < TWO_PI:
            raise InputError(f"arc angle {self.angle!r} outside (0, 2pi)")
        object.__setattr__(self, "_ortho", UnitVector(*cross(self.pole, self.start)))

    @classmethod
    def from_pole(cls, start, pole, angle: float) -> "Arc":
        start = UnitVector(*start)
        pole = UnitVector(*pole)
        return cls(start, rotate(start, pole, angle), pole, angle)

    @property
    def circle(self) -> GreatCircle:
        return GreatCircle(self.pole)

    @property
    def is_long(self) -> bool:
        return self.angle > math.pi

    def length_class(self, tol: ToleranceConfig = DEFAULT_TOL) -> LengthClass:
        if abs(self.angle - math.pi) < tol.eps_medium:
            raise MediumEdge(f"arc of angle {self.angle!r} is within eps_medium of pi")
        return LengthClass.LONG if self.angle > math.pi else LengthClass.SHORT

    def point_at(self, t: float) -> UnitVector:
        c, s = math.cos(t), math.sin(t)
        a, b = self.start, self._ortho
        return UnitVector(a[0] * c + b[0] * s, a[1] * c + b[1] * s, a[2] * c + b[2] * s)

    def param_of(self, p) -> float:
        """Counterclockwise angle in [0, 2pi) from ``start`` to the projection of ``p``."""
        t = math.atan2(dot(p, self._ortho), dot(p, self.start))
        return t + TWO_PI if t < 0.0 else t

    def depth(self, t: float) -> float:
        """Signed distance along the circle to the nearest endpoint: >0 inside, <0 outside."""
        return signed_depth(t, self.angle)

    def reversed(self) -> "Arc":
        return Arc(self.end, self.start, -self.pole, self.angle)

    def midpoint(self) -> UnitVector:
        return self.point_at(0.5 * self.angle)


def signed_depth(t: float, angle: float) -> float:
    if t <= angle:
        return min(t, angle - t)
    return -min(t - angle, TWO_PI - t)


class Position(enum.Enum):
    INTERIOR = "Interior"
    START = "StartPoint"
    END = "EndPoint"
    OUTSIDE = "Outside"


class EventKind(enum.Enum):
    PROPER_CROSSING = "ProperCrossing"
    SHARED_ENDPOINT = "SharedEndpoint"
    VERTEX_ON_INTERIOR = "VertexOnInterior"
    TANGENCY = "Tangency"


@dataclass(frozen=True)
class IntersectionEvent:
    point: UnitVector
    kind: EventKind
    on_e: float
    on_f: float

    def as_dict(self) -> dict:
        return {"point": list(self.point), "kind": self.kind.value,
                "on_e": self.on_e, "on_f": self.on_f}


def circle_through(a, b, tol: ToleranceConfig = DEFAULT_TOL) -> GreatCircle:
    """Circle through ``a`` and ``b``, oriented so the short way from a to b is counterclockwise."""
    c = cross(a, b)
    if norm(c) < tol.eps_circle:
        raise DegenerateCircle("points are parallel or antipodal")
    return GreatCircle(normalize(c))


def arc_between(a, b, want_long: bool = False, tol: ToleranceConfig = DEFAULT_TOL) -> Arc:
    a, b = UnitVector(*a), UnitVector(*b)
    pole = circle_through(a, b, tol).pole
    theta = angle_between(a, b)
    if want_long:
        pole, theta = -pole, TWO_PI - theta
    if abs(theta - math.pi) < tol.eps_medium:
        raise MediumEdge("requested arc is within eps_medium of length pi")
    return Arc(a, b, pole, theta)


def _classify(arc: Arc, t: float, eps: float) -> Position:
    s = signed_depth(t, arc.angle)
    if s >= eps:
        return Position.INTERIOR
    if s <= -eps:
        return Position.OUTSIDE
    # inside the endpoint band: report the nearer endpoint
    if t <= arc.angle:
        return Position.START if t <= arc.angle - t else Position.END
    return Position.START if TWO_PI - t <= t - arc.angle else Position.END


def point_position(arc: Arc, p, tol: ToleranceConfig = DEFAULT_TOL) -> Position:
    if abs(dot(p, arc.pole)) >= math.sin(tol.eps_event):
        return Position.OUTSIDE
    return _classify(arc, arc.param_of(p), tol.eps_event)


_ENDPOINT_KINDS = (Position.START, Position.END)


def arc_pair_intersections(e: Arc, f: Arc, tol: ToleranceConfig = DEFAULT_TOL) -> list:
    """All meeting points of two arcs on distinct great circles.

    Shared endpoints are found by vertex coincidence and reported once; the
    two candidate points +-normalize(pole_e x pole_f) are then classified
    against both arcs.
    """
    cp = cross(e.pole, f.pole)
    nc = norm(cp)
    if nc < tol.eps_circle:
        raise CoCircular(f"|pole_e x pole_f| = {nc:.3e} below eps_circle")
    eps = tol.eps_event
    events = []
    for pe, te in ((e.start, 0.0), (e.end, e.angle)):
        for pf, tf in ((f.start, 0.0), (f.end, f.angle)):
            if angle_between(pe, pf) < eps:
                events.append(IntersectionEvent(pe, EventKind.SHARED_ENDPOINT, te, tf))
    c = UnitVector(cp[0] / nc, cp[1] / nc, cp[2] / nc)
    te0, tf0 = e.param_of(c), f.param_of(c)
    for sign in (1, -1):
        if sign == 1:
            point, te, tf = c, te0, tf0
        else:
            point = -c
            te = te0 - math.pi if te0 >= math.pi else te0 + math.pi
            tf = tf0 - math.pi if tf0 >= math.pi else tf0 + math.pi
        if any(angle_between(point, ev.point) < eps for ev in events):
            continue
        pos_e, pos_f = _classify(e, te, eps), _classify(f, tf, eps)
        if pos_e is Position.OUTSIDE or pos_f is Position.OUTSIDE:
            continue
        if pos_e is Position.INTERIOR and pos_f is Position.INTERIOR:
            kind = EventKind.PROPER_CROSSING
        elif pos_e in _ENDPOINT_KINDS and pos_f in _ENDPOINT_KINDS:
            kind = EventKind.SHARED_ENDPOINT
        else:
            kind = EventKind.VERTEX_ON_INTERIOR
        events.append(IntersectionEvent(point, kind, te, tf))
    # distinct circles meet only at antipodal points, so a merge can only
    # come from endpoint bands overlapping a candidate
    merged = []
    for ev in events:
        clash = [m for m in merged if angle_between(m.point, ev.point) < eps]
        if clash:
            merged = [m for m in merged if m not in clash]
            ev = replace(ev, kind=EventKind.TANGENCY)
        merged.append(ev)
    return merged


def tangent_at(arc: Arc, p, tol: ToleranceConfig = DEFAULT_TOL) -> UnitVector:
    """Unit direction of travel along ``arc`` at ``p``."""
    if point_position(arc, p, tol) is Position.OUTSIDE:
        raise PointNotOnArc("point is not on the arc")
    return normalize(cross(arc.pole, p))


def crossing_orientation(e: Arc, f: Arc, at: IntersectionEvent,
                         tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Sign of (t_e x t_f) . p at the meeting point ``p``; antisymmetric in (e, f)."""
    if at.kind not in (EventKind.PROPER_CROSSING, EventKind.SHARED_ENDPOINT):
        raise DegenerateOrientation(f"no orientation for a {at.kind.value} event")
    p = at.point
    te = normalize(cross(e.pole, p))
    tf = normalize(cross(f.pole, p))
    val = dot(cross(te, tf), p)
    if abs(val) < tol.eps_circle:
        raise DegenerateOrientation("tangents are parallel at the meeting point")
    return 1 if val > 0 else -1


def hemisphere_side(c: GreatCircle, p, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    v = dot(p, c.pole)
    if abs(v) < math.sin(tol.eps_event):
        return 0
    return 1 if v > 0 else -1


def perturb_to_general_position(points: Sequence, seed: int, margin: float,
                                tol: ToleranceConfig = DEFAULT_TOL) -> list:
    """Move each point a deterministic angular distance in [margin/2, margin]."""
    if margin < 0:
        raise InputError("margin must be non-negative")
    if margin >= tol.eps_event / 4:
        raise InputError("margin must stay below eps_event/4")
    pts = [UnitVector(*p) for p in points]
    if margin == 0:
        return pts
    rng = np.random.default_rng(seed)
    out = []
    for p in pts:
        g = rng.standard_normal(3)
        d = tuple(g - dot(g, p) * np.asarray(p))
        axis = normalize(cross(p, d))
        out.append(rotate(p, axis, margin * rng.uniform(0.5, 1.0)))
    return out


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform rotation matrix with determinant +1."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
