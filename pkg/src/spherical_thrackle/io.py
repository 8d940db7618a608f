"""Drawing documents (JSON), graph6 ingestion and SVG rendering."""

from __future__ import annotations

import enum
import json
import math
import os
import re
import tempfile
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, Optional, Sequence

import jsonschema

from .drawing import ENDPOINT_TOL, Drawing
from .errors import (
    InputError,
    InvariantError,
    MalformedDrawing,
    MalformedGraph6,
    SchemaError,
    ThrackleError,
)
from .graph import AbstractGraph
from .kernel import (
    DEFAULT_TOL,
    Arc,
    ToleranceConfig,
    UnitVector,
    angle_between,
    cross,
    dot,
    norm,
    normalize,
    rotate,
)

FORMAT_VERSION = 1


class IoError(ThrackleError, OSError):
    pass


# ------------------------------------------------------------------ files

def atomic_write(path, data) -> None:
    """Write ``data`` (str or bytes) to a temp file beside ``path``, then rename."""
    path = os.fspath(path)
    raw = data.encode("utf-8") if isinstance(data, str) else data
    folder = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(raw)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from None


def _read_text(path) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 text ({exc})") from None


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files(__package__).joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


# ------------------------------------------------------- json line lookup

_WS = re.compile(r"[ \t\n\r]*")
_NUMBER = re.compile(r"-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][-+]?\d+)?")


def _value_offsets(text: str) -> dict:
    """Map each JSON path (tuple of keys/indices) to the offset where its value starts."""
    out = {}

    def ws(i):
        return _WS.match(text, i).end()

    def value(i, path):
        i = ws(i)
        out[path] = i
        c = text[i:i + 1]
        if c == "{":
            i = ws(i + 1)
            if text[i] == "}":
                return i + 1
            while True:
                key, i = json.decoder.scanstring(text, ws(i) + 1)
                i = ws(i) + 1          # colon
                i = ws(value(i, path + (key,)))
                if text[i] == "}":
                    return i + 1
                i += 1
        if c == "[":
            i = ws(i + 1)
            if text[i] == "]":
                return i + 1
            k = 0
            while True:
                i = ws(value(i, path + (k,)))
                k += 1
                if text[i] == "]":
                    return i + 1
                i += 1
        if c == '"':
            return json.decoder.scanstring(text, i + 1)[1]
        m = _NUMBER.match(text, i)
        if m and m.end() > i:
            return m.end()
        for word in ("true", "false", "null"):
            if text.startswith(word, i):
                return i + len(word)
        raise ValueError("unexpected token")

    try:
        value(0, ())
    except (ValueError, IndexError):
        pass
    return out


def _line_of(text: str, path: Sequence) -> int:
    offsets = _value_offsets(text)
    path = tuple(path)
    while path not in offsets and path:
        path = path[:-1]
    return text.count("\n", 0, offsets.get(path, 0)) + 1


def _field_name(path: Sequence) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<document>"


# ------------------------------------------------------------ drawings

def drawing_document(d: Drawing, metadata: Optional[dict] = None) -> dict:
    """Plain-dict DrawingDocument (floats untouched)."""
    g = d.graph
    return {
        "format_version": FORMAT_VERSION,
        "vertices": [{"id": i, "x": p[0], "y": p[1], "z": p[2]} for i, p in enumerate(d.positions)],
        "edges": [{"id": i, "from": u, "to": v, "pole": list(a.pole), "angle": a.angle}
                  for i, ((u, v), a) in enumerate(zip(g.edges, d.arcs))],
        "metadata": dict(metadata or {}),
    }


def _f(x: float) -> str:
    if not math.isfinite(x):
        raise InputError("non-finite coordinate")
    return "%.17g" % x


def dumps_drawing(d: Drawing, metadata: Optional[dict] = None) -> str:
    """JSON text with every coordinate written to 17 significant digits."""
    lines = ["{", f'  "format_version": {FORMAT_VERSION},', '  "vertices": [']
    n = len(d.positions)
    for i, p in enumerate(d.positions):
        sep = "," if i < n - 1 else ""
        lines.append(f'    {{"id": {i}, "x": {_f(p[0])}, "y": {_f(p[1])}, "z": {_f(p[2])}}}{sep}')
    lines.append("  ],")
    lines.append('  "edges": [')
    m = len(d.arcs)
    for i, ((u, v), a) in enumerate(zip(d.graph.edges, d.arcs)):
        sep = "," if i < m - 1 else ""
        pole = ", ".join(_f(c) for c in a.pole)
        lines.append(f'    {{"id": {i}, "from": {u}, "to": {v}, "pole": [{pole}], '
                     f'"angle": {_f(a.angle)}}}{sep}')
    lines.append("  ],")
    lines.append('  "metadata": ' + json.dumps(dict(metadata or {}), sort_keys=True))
    lines.append("}")
    return "\n".join(lines) + "\n"


def save_drawing(d: Drawing, path, metadata: Optional[dict] = None) -> None:
    atomic_write(path, dumps_drawing(d, metadata))


def loads_drawing(text: str, tol: ToleranceConfig = DEFAULT_TOL, source: str = "<string>") -> Drawing:
    """Parse and validate a DrawingDocument."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{source}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    validator = jsonschema.Draft202012Validator(load_schema("drawing"))
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        err = errors[0]
        path = list(err.absolute_path)
        raise SchemaError(f"{source}:{_line_of(text, path)}: field {_field_name(path)}: {err.message}")
    return _drawing_from_doc(doc, text, tol, source)


def _drawing_from_doc(doc: dict, text: str, tol: ToleranceConfig, source: str) -> Drawing:
    def fail(path, msg):
        raise InvariantError(f"{source}:{_line_of(text, path)}: field {_field_name(path)}: {msg}")

    vid = {}
    positions = []
    for k, v in enumerate(doc["vertices"]):
        if v["id"] in vid:
            fail(["vertices", k, "id"], f"duplicate vertex id {v['id']}")
        vid[v["id"]] = k
        p = (float(v["x"]), float(v["y"]), float(v["z"]))
        if abs(norm(p) - 1.0) > ENDPOINT_TOL:
            fail(["vertices", k], "vertex is not a unit vector")
        positions.append(UnitVector(*p))
    edges, arcs, seen = [], [], set()
    for k, e in enumerate(doc["edges"]):
        if e["id"] in seen:
            fail(["edges", k, "id"], f"duplicate edge id {e['id']}")
        seen.add(e["id"])
        for key in ("from", "to"):
            if e[key] not in vid:
                fail(["edges", k, key], f"unknown vertex id {e[key]}")
        u, v = vid[e["from"]], vid[e["to"]]
        pole = tuple(float(c) for c in e["pole"])
        angle = float(e["angle"])
        if abs(norm(pole) - 1.0) > ENDPOINT_TOL:
            fail(["edges", k, "pole"], "pole is not a unit vector")
        if abs(angle - math.pi) < tol.eps_medium:
            fail(["edges", k, "angle"], "MediumEdge: angle within eps_medium of pi")
        pu, pv = positions[u], positions[v]
        if abs(dot(pole, pu)) > ENDPOINT_TOL or abs(dot(pole, pv)) > ENDPOINT_TOL:
            fail(["edges", k, "pole"], "pole is not orthogonal to the arc endpoints")
        if angle_between(rotate(pu, pole, angle), pv) > ENDPOINT_TOL:
            fail(["edges", k], "arc endpoint does not match vertex position")
        edges.append((u, v))
        arcs.append(Arc(pu, pv, UnitVector(*pole), angle))
    try:
        g = AbstractGraph(len(positions), tuple(edges))
        return Drawing(g, positions, arcs)
    except (MalformedDrawing, InputError) as exc:
        raise InvariantError(f"{source}: {exc}") from None


def load_drawing(path, tol: ToleranceConfig = DEFAULT_TOL) -> Drawing:
    return loads_drawing(_read_text(path), tol, source=os.fspath(path))


def load_metadata(path) -> dict:
    try:
        return dict(json.loads(_read_text(path)).get("metadata") or {})
    except (json.JSONDecodeError, AttributeError):
        return {}


# ------------------------------------------------------------------ graph6

def _n_header(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise InputError("graph too large for graph6")


def to_graph6(g: AbstractGraph) -> str:
    adj = set()
    for u, v in g.edges:
        if u == v:
            raise InputError("graph6 cannot encode loops")
        adj.add((min(u, v), max(u, v)))
    if len(adj) != g.m:
        raise InputError("graph6 cannot encode multi-edges")
    bits = [1 if (i, j) in adj else 0 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = "".join(chr(63 + int("".join(map(str, bits[k:k + 6])), 2)) for k in range(0, len(bits), 6))
    return _n_header(g.n) + body


def from_graph6(line: str, lineno: int = 1) -> AbstractGraph:
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise MalformedGraph6(f"line {lineno}: empty graph6 string")
    data = []
    for k, ch in enumerate(s):
        c = ord(ch)
        if not 63 <= c <= 126:
            raise MalformedGraph6(f"line {lineno}: byte {c} at column {k + 1} outside 63..126")
        data.append(c - 63)
    if data[0] == 63:
        if len(data) > 1 and data[1] == 63:
            hdr, pos = data[2:8], 8
        else:
            hdr, pos = data[1:4], 4
        if len(data) < pos:
            raise MalformedGraph6(f"line {lineno}: truncated size header")
        n = 0
        for x in hdr:
            n = (n << 6) | x
    else:
        n, pos = data[0], 1
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise MalformedGraph6(f"line {lineno}: expected {need} data bytes for n={n}, got {len(body)}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (body[k // 6] >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    return AbstractGraph(n, tuple(edges))


def parse_graph6(text: str) -> list:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.strip():
            out.append(from_graph6(line, lineno))
    return out


def load_graph6(path) -> list:
    return parse_graph6(_read_text(path))


def save_graph6(graphs: Iterable[AbstractGraph], path) -> None:
    atomic_write(path, "".join(to_graph6(g) + "\n" for g in graphs))


# ------------------------------------------------------------------ render

class Projection(enum.Enum):
    ORTHOGRAPHIC_TWO_HEMISPHERES = "OrthographicTwoHemispheres"
    GNOMONIC = "Gnomonic"


@dataclass(frozen=True)
class RenderSpec:
    projection: Projection = Projection.ORTHOGRAPHIC_TWO_HEMISPHERES
    dashed_back: bool = True
    labels: bool = True
    stroke_width: float = 1.5
    size: int = 320                 # panel edge length in px
    samples_per_radian: int = 60
    view: tuple = (0.0, 0.0, 1.0)   # front hemisphere centre


_PALETTE = ("#1f4e9e", "#b3261e", "#2e7d32", "#8e24aa", "#ef6c00", "#00838f",
            "#5d4037", "#c2185b", "#455a64", "#827717")


def _frame(view):
    w = normalize(view)
    helper = (1.0, 0.0, 0.0) if abs(w[0]) < 0.9 else (0.0, 1.0, 0.0)
    ex = normalize(cross(helper, w))
    ey = normalize(cross(w, ex))
    return ex, ey, w


def _polylines(points, keep):
    """Split a sampled curve into runs where ``keep`` holds."""
    runs, cur = [], []
    for p in points:
        if keep(p):
            cur.append(p)
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    return [r for r in runs if len(r) > 1]


def _path(pts) -> str:
    return "M " + " L ".join(f"{x:.3f} {y:.3f}" for x, y in pts)


def render_svg(d: Optional[Drawing], spec: RenderSpec = RenderSpec()) -> str:
    ex, ey, w = _frame(spec.view)
    s = spec.size
    r = 0.45 * s
    panels = [(s / 2, s / 2, 1.0)]
    if spec.projection is Projection.ORTHOGRAPHIC_TWO_HEMISPHERES:
        panels.append((1.5 * s, s / 2, -1.0))
        width = 2 * s
    else:
        width = s
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{s}" '
           f'viewBox="0 0 {width} {s}">',
           '<rect width="100%" height="100%" fill="white"/>']
    positions = d.positions if d is not None else ()
    arcs = d.arcs if d is not None else ()

    if spec.projection is Projection.GNOMONIC:
        # fit the front-side vertices, then clip everything near the horizon
        pts = [p for p in positions if dot(p, w) > 0.05]
        ext = max([abs(dot(p, e)) / dot(p, w) for p in pts for e in (ex, ey)], default=1.0) or 1.0
        scale = r / (1.05 * ext)
        cx, cy = s / 2, s / 2

        def proj(p):
            z = dot(p, w)
            return cx + scale * dot(p, ex) / z, cy - scale * dot(p, ey) / z

        out.append(f'<rect x="1" y="1" width="{s - 2}" height="{s - 2}" fill="none" stroke="#999"/>')
        for i, a in enumerate(arcs):
            n = max(2, int(math.ceil(a.angle * spec.samples_per_radian)))
            samples = [a.point_at(a.angle * k / n) for k in range(n + 1)]
            for run in _polylines(samples, lambda p: dot(p, w) > 0.05):
                xy = [proj(p) for p in run]
                if all(abs(x - cx) < 4 * s and abs(y - cy) < 4 * s for x, y in xy):
                    out.append(f'<path d="{_path(xy)}" fill="none" stroke="{_PALETTE[i % len(_PALETTE)]}" '
                               f'stroke-width="{spec.stroke_width}"/>')
        for k, p in enumerate(positions):
            if dot(p, w) > 0.05:
                x, y = proj(p)
                out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="black"/>')
                if spec.labels:
                    out.append(f'<text x="{x + 5:.3f}" y="{y - 5:.3f}" font-size="11">{k}</text>')
    else:
        for cx, cy, side in panels:
            out.append(f'<circle cx="{cx}" cy="{cy}" r="{r}" fill="none" stroke="#999"/>')

            def proj(p, cx=cx, cy=cy, side=side):
                return cx + side * r * dot(p, ex), cy - r * dot(p, ey)

            def front(p, side=side):
                return side * dot(p, w) >= 0.0

            for i, a in enumerate(arcs):
                colour = _PALETTE[i % len(_PALETTE)]
                n = max(2, int(math.ceil(a.angle * spec.samples_per_radian)))
                samples = [a.point_at(a.angle * k / n) for k in range(n + 1)]
                for run in _polylines(samples, front):
                    out.append(f'<path d="{_path([proj(p) for p in run])}" fill="none" '
                               f'stroke="{colour}" stroke-width="{spec.stroke_width}"/>')
                if spec.dashed_back:
                    for run in _polylines(samples, lambda p: not front(p)):
                        out.append(f'<path d="{_path([proj(p) for p in run])}" fill="none" '
                                   f'stroke="{colour}" stroke-width="{spec.stroke_width * 0.7:.3f}" '
                                   f'stroke-dasharray="4 3" opacity="0.6"/>')
            for k, p in enumerate(positions):
                if front(p):
                    x, y = proj(p)
                    out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="black"/>')
                    if spec.labels:
                        out.append(f'<text x="{x + 5:.3f}" y="{y - 5:.3f}" font-size="11">{k}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(d: Optional[Drawing], spec: RenderSpec, path) -> None:
    atomic_write(path, render_svg(d, spec))
