"""Spherical thrackle toolkit: verification, classification, constructions and search."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .classify import (
    LEMMA_IDS,
    Analysis,
    DirectedPath,
    LemmaVerdict,
    Verdict,
    check_all,
    check_lemma,
    classify_cycle,
    classify_path,
    find_bad_triangles,
    separates_at,
)
from .construct import (
    PlanarDrawing,
    construct_cycle,
    gnomonic_lift,
    insert_edge_pair,
    six_cycle_drawing,
    split_edge,
    split_vertex,
    star_polygon_thrackle,
)
from .drawing import Drawing, check_general_position, edge_length_class, n_ge_m_check, verify_thrackle
from .graph import AbstractGraph
from .io import RenderSpec, Projection, load_drawing, load_graph6, render, save_drawing
from .kernel import DEFAULT_TOL, Arc, ToleranceConfig, arc_pair_intersections, crossing_orientation
from .search import EmbeddingProblem, LengthFlag, SearchConfig, SearchStatus, falsify, search_embedding

__all__ = [
    "BACKEND", "LEMMA_IDS", "Analysis", "DirectedPath", "LemmaVerdict", "Verdict",
    "check_all", "check_lemma", "classify_cycle", "classify_path", "find_bad_triangles",
    "separates_at", "PlanarDrawing", "construct_cycle", "gnomonic_lift", "insert_edge_pair",
    "six_cycle_drawing", "split_edge", "split_vertex", "star_polygon_thrackle", "Drawing",
    "check_general_position", "edge_length_class", "n_ge_m_check", "verify_thrackle",
    "AbstractGraph", "RenderSpec", "Projection", "load_drawing", "load_graph6", "render",
    "save_drawing", "DEFAULT_TOL", "Arc", "ToleranceConfig", "arc_pair_intersections",
    "crossing_orientation", "EmbeddingProblem", "LengthFlag", "SearchConfig", "SearchStatus",
    "falsify", "search_embedding",
]
