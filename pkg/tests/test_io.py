import json

import networkx as nx
import numpy as np
import pytest

from spherical_thrackle.construct import construct_cycle, six_cycle_drawing
from spherical_thrackle.drawing import verify_thrackle
from spherical_thrackle.errors import InvariantError, MalformedGraph6, SchemaError
from spherical_thrackle.graph import AbstractGraph
from spherical_thrackle.io import (
    IoError,
    Projection,
    RenderSpec,
    dumps_drawing,
    from_graph6,
    load_drawing,
    load_graph6,
    load_metadata,
    loads_drawing,
    parse_graph6,
    render,
    render_svg,
    save_drawing,
    save_graph6,
    to_graph6,
)


def kinds(rep):
    return {k: sorted(ev.kind.value for ev in v) for k, v in rep.pair_table.items()}


# ------------------------------------------------------------ drawings

@pytest.mark.parametrize("n", [5, 6, 9])
def test_round_trip_preserves_report(tmp_path, n):
    d = construct_cycle(n)
    path = tmp_path / "d.json"
    save_drawing(d, path, {"note": "x"})
    d2 = load_drawing(path)
    assert d2.graph.edges == d.graph.edges
    assert np.array_equal(d2.position_array(), d.position_array())
    assert kinds(verify_thrackle(d2)) == kinds(verify_thrackle(d))
    assert load_metadata(path) == {"note": "x"}
    assert dumps_drawing(d2, {"note": "x"}) == path.read_text()


def _doc():
    return json.loads(dumps_drawing(six_cycle_drawing()))


def test_missing_pole_reports_line():
    doc = _doc()
    del doc["edges"][2]["pole"]
    text = json.dumps(doc, indent=2)
    with pytest.raises(SchemaError) as info:
        loads_drawing(text, source="bad.json")
    msg = str(info.value)
    assert msg.startswith("bad.json:") and "edges[2]" in msg
    line = int(msg.split(":")[1])
    assert '"from"' in text.splitlines()[line - 1] or line > 1


def test_medium_angle_rejected():
    doc = _doc()
    doc["edges"][0]["angle"] = np.pi
    with pytest.raises(InvariantError) as info:
        loads_drawing(json.dumps(doc, indent=2))
    assert "MediumEdge" in str(info.value)


def test_non_unit_vertex_rejected():
    doc = _doc()
    doc["vertices"][0]["x"] *= 1.01
    with pytest.raises(InvariantError):
        loads_drawing(json.dumps(doc))


def test_duplicate_id_rejected():
    doc = _doc()
    doc["vertices"][1]["id"] = doc["vertices"][0]["id"]
    with pytest.raises(InvariantError):
        loads_drawing(json.dumps(doc))


def test_wrong_version_rejected():
    doc = _doc()
    doc["format_version"] = 2
    with pytest.raises(SchemaError):
        loads_drawing(json.dumps(doc))


def test_not_json_rejected():
    with pytest.raises(SchemaError):
        loads_drawing("{nope")


def test_missing_file(tmp_path):
    with pytest.raises(IoError):
        load_drawing(tmp_path / "absent.json")


# ------------------------------------------------------------ graph6

def test_graph6_matches_networkx():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(1, 12))
        h = nx.gnp_random_graph(n, float(rng.uniform(0.1, 0.9)), seed=int(rng.integers(1 << 30)))
        g = AbstractGraph(n, tuple(sorted(tuple(sorted(e)) for e in h.edges)))
        want = nx.to_graph6_bytes(h, header=False).decode().strip()
        assert to_graph6(g) == want
        back = from_graph6(want)
        assert back.n == n and set(back.edges) == set(g.edges)


def test_graph6_known_value():
    k5 = from_graph6("D~{")
    assert k5.n == 5 and k5.m == 10


def test_graph6_file_round_trip(tmp_path):
    gs = [AbstractGraph.cycle(5), AbstractGraph(4, ((0, 1), (1, 2), (2, 3), (3, 0), (0, 2)))]
    path = tmp_path / "g.g6"
    save_graph6(gs, path)
    back = load_graph6(path)
    # graph6 is undirected, so compare edges as unordered pairs
    undirected = lambda g: {frozenset(e) for e in g.edges}
    assert [undirected(g) for g in back] == [undirected(g) for g in gs]


def test_graph6_empty_and_header():
    assert parse_graph6("") == []
    assert len(parse_graph6(">>graph6<<D~{\n")) == 1


def test_graph6_bad_byte():
    with pytest.raises(MalformedGraph6) as info:
        parse_graph6("D~{\nD~\x01\n")
    assert "2" in str(info.value)


# ------------------------------------------------------------ render

def test_render_deterministic(tmp_path):
    d = six_cycle_drawing()
    spec = RenderSpec(Projection.ORTHOGRAPHIC_TWO_HEMISPHERES, True, True, 1.0)
    a = render_svg(d, spec)
    assert a == render_svg(d, spec)
    assert a.startswith("<svg") or a.startswith("<?xml")
    path = tmp_path / "d.svg"
    render(d, spec, path)
    assert path.read_text() == a


def test_render_back_dashed_and_gnomonic():
    d = construct_cycle(7)
    svg = render_svg(d, RenderSpec(Projection.ORTHOGRAPHIC_TWO_HEMISPHERES, True, False, 1.0))
    assert "stroke-dasharray" in svg
    g = render_svg(d, RenderSpec(Projection.GNOMONIC, False, True, 1.0))
    assert "stroke-dasharray" not in g


def test_render_empty():
    svg = render_svg(None, RenderSpec(Projection.GNOMONIC, False, False, 1.0))
    assert "</svg>" in svg
