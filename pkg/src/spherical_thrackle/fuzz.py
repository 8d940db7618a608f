"""Lemma fuzz campaign over a seeded corpus of certified drawings."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np

from .classify import LEMMA_IDS, LEMMAS, Analysis, LemmaVerdict, long_e_configurations
from .construct import construct_cycle, perturbed
from .drawing import Drawing, clearance, verify_thrackle
from .errors import GeometryError, MalformedDrawing
from .graph import AbstractGraph
from .kernel import (
    DEFAULT_TOL,
    EventKind,
    ToleranceConfig,
    arc_pair_intersections,
    crossing_orientation,
    random_rotation,
)
from .search import EmbeddingProblem, LengthFlag, SearchConfig, search_embedding

CONSTRUCTED_CYCLES = (3, 5, 7, 9, 11, 6, 8, 10, 12)
SEARCH_SEEDS = (0, 1, 2)


def _search_targets() -> list:
    L, F = LengthFlag.LONG, LengthFlag.FREE
    tri = AbstractGraph.cycle(3)
    out = [(f"C{k}", EmbeddingProblem(AbstractGraph.cycle(k))) for k in (3, 5, 6, 7)]
    out += [(f"P{k}", EmbeddingProblem(AbstractGraph.path(k))) for k in range(1, 8)]
    out.append(("bad-triangle", EmbeddingProblem(tri, (L, F, F))))
    out.append(("tadpole-3", EmbeddingProblem(AbstractGraph(4, ((0, 1), (1, 2), (2, 0), (0, 3))))))
    out.append(("tadpole-5", EmbeddingProblem(
        AbstractGraph(6, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5))))))
    out.append(("star-3", EmbeddingProblem(AbstractGraph(4, ((0, 1), (0, 2), (0, 3))))))
    out.append(("spider", EmbeddingProblem(
        AbstractGraph(7, ((0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6))))))
    return out


def _certified(d: Drawing, tol: ToleranceConfig) -> bool:
    rep = verify_thrackle(d, tol)
    return rep.is_thrackle and rep.is_general_position


def base_drawings(seed: int = 0, tol: ToleranceConfig = DEFAULT_TOL) -> list:
    """(label, drawing) pairs: constructions plus search-found embeddings."""
    bases = [(f"construct-C{n}", construct_cycle(n, tol=tol)) for n in CONSTRUCTED_CYCLES]
    cfg = SearchConfig(restarts=200, steps_per_restart=3000, margin=tol.eps_event)
    for label, prob in _search_targets():
        for s in SEARCH_SEEDS:
            out = search_embedding(prob, SearchConfig(**{**cfg.as_dict(), "rng_seed": seed * 1000 + s}),
                                   tol=tol)
            if out.certified:
                bases.append((f"search-{label}-s{s}", out.drawing))
    return bases


def corpus(count: int, seed: int = 0, tol: ToleranceConfig = DEFAULT_TOL,
           bases: Optional[list] = None) -> Iterator[tuple]:
    """Yield ``count`` certified (label, drawing) pairs.

    Round-robin over the bases; even variants are random rotations, odd ones
    are rotations followed by a per-vertex move of at most half the clearance
    (halved until the result certifies).
    """
    bases = bases if bases is not None else base_drawings(seed, tol)
    clear = [clearance(d, tol) for _, d in bases]
    rng = np.random.default_rng(seed)
    k = 0
    while k < count:
        idx = k % len(bases)
        label, d = bases[idx]
        variant = k // len(bases)
        if variant == 0:
            yield label, d
            k += 1
            continue
        rot = d.rotated(random_rotation(rng))
        if variant % 2 == 0:
            yield f"{label}-rot", rot
            k += 1
            continue
        margin = clear[idx] / 2
        pseed = int(rng.integers(2**63))
        for _ in range(30):
            try:
                cand = perturbed(rot, pseed, margin, tol)
                if _certified(cand, tol):
                    break
            except (GeometryError, MalformedDrawing):
                pass
            margin /= 2
        else:
            cand = rot
        yield f"{label}-pert", cand
        k += 1


@dataclass
class FuzzReport:
    count: int = 0
    seed: int = 0
    bases: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)
    fails: list = field(default_factory=list)
    uncertified: int = 0
    chi_pairs_checked: int = 0
    chi_antisymmetry_violations: int = 0
    parity_configs_checked: int = 0
    parity_violations: int = 0
    n_ge_m_violations: int = 0

    @property
    def critical(self) -> bool:
        return bool(self.fails or self.chi_antisymmetry_violations
                    or self.parity_violations or self.n_ge_m_violations)

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "seed": self.seed,
            "bases": list(self.bases),
            "uncertified": self.uncertified,
            "verdicts": {k: dict(sorted(v.items())) for k, v in sorted(self.verdicts.items())},
            "fails": list(self.fails[:50]),
            "fail_count": len(self.fails),
            "chi_pairs_checked": self.chi_pairs_checked,
            "chi_antisymmetry_violations": self.chi_antisymmetry_violations,
            "parity_configs_checked": self.parity_configs_checked,
            "parity_violations": self.parity_violations,
            "n_ge_m_violations": self.n_ge_m_violations,
            "critical": self.critical,
        }


def chi_antisymmetry(d: Drawing, report, tol: ToleranceConfig = DEFAULT_TOL) -> tuple:
    """(pairs checked, violations) with chi computed independently in both orders."""
    checked = bad = 0
    for (i, j), evs in report.pair_table.items():
        if len(evs) != 1 or evs[0].kind is not EventKind.PROPER_CROSSING:
            continue
        back = arc_pair_intersections(d.arcs[j], d.arcs[i], tol)
        a = crossing_orientation(d.arcs[i], d.arcs[j], evs[0], tol)
        b = crossing_orientation(d.arcs[j], d.arcs[i], back[0], tol)
        checked += 1
        bad += a != -b
    return checked, bad


def run_fuzz(count: int = 10_000, seed: int = 0, tol: ToleranceConfig = DEFAULT_TOL, *,
             bases: Optional[list] = None,
             progress: Optional[Callable[[int], None]] = None) -> FuzzReport:
    bases = bases if bases is not None else base_drawings(seed, tol)
    rep = FuzzReport(seed=seed, bases=[label for label, _ in bases])
    counts = {lid: Counter() for lid in LEMMA_IDS}
    for k, (label, d) in enumerate(corpus(count, seed, tol, bases)):
        vr = verify_thrackle(d, tol)
        if not (vr.is_thrackle and vr.is_general_position):
            rep.uncertified += 1
            continue
        rep.count += 1
        if d.graph.n < d.graph.m:
            rep.n_ge_m_violations += 1
        a = Analysis(d, tol, report=vr)
        for lid in LEMMA_IDS:
            r = LEMMAS[lid](a)
            counts[lid][r.verdict.value] += 1
            if r.verdict is LemmaVerdict.FAIL:
                rep.fails.append({"index": k, "label": label, **r.as_dict()})
        c, b = chi_antisymmetry(d, vr, tol)
        rep.chi_pairs_checked += c
        rep.chi_antisymmetry_violations += b
        for _walk, _steps, _e, product, expected in long_e_configurations(a):
            rep.parity_configs_checked += 1
            rep.parity_violations += product != expected
        if progress is not None:
            progress(k)
    rep.verdicts = {lid: dict(c) for lid, c in counts.items()}
    return rep

