"""Simple undirected graphs with the enumeration helpers the lemma suite needs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

from .errors import InputError


@dataclass(frozen=True)
class AbstractGraph:
    """``n`` vertices labelled 0..n-1 and an ordered tuple of edges.

    Edge order and the orientation of each pair are significant: a drawing
    stores one arc per edge, directed from ``edges[i][0]`` to ``edges[i][1]``.
    """

    n: int
    edges: tuple

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n < 0:
            raise InputError("vertex count must be non-negative")
        seen = set()
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u}, {v}) has an endpoint out of range")
            if u == v:
                raise InputError(f"loop at vertex {u}")
            key = frozenset((u, v))
            if key in seen:
                raise InputError(f"duplicate edge ({u}, {v})")
            seen.add(key)

    @classmethod
    def cycle(cls, k: int) -> "AbstractGraph":
        return cls(k, tuple((i, (i + 1) % k) for i in range(k)))

    @classmethod
    def path(cls, k: int) -> "AbstractGraph":
        """Path with ``k`` edges."""
        return cls(k + 1, tuple((i, i + 1) for i in range(k)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def _incidence(self) -> tuple:
        inc = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def _index(self) -> dict:
        return {frozenset(e): i for i, e in enumerate(self.edges)}

    def incident(self, v: int) -> tuple:
        return self._incidence[v]

    def degree(self, v: int) -> int:
        return len(self._incidence[v])

    def neighbors(self, v: int) -> list:
        return [self.other(i, v) for i in self._incidence[v]]

    def other(self, i: int, v: int) -> int:
        a, b = self.edges[i]
        return b if v == a else a

    def edge_index(self, u: int, v: int) -> Optional[int]:
        return self._index.get(frozenset((u, v)))

    def shared_vertex(self, i: int, j: int) -> Optional[int]:
        common = set(self.edges[i]) & set(self.edges[j])
        return next(iter(common)) if common else None

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def has_terminal_edge(self) -> bool:
        return any(self.degree(v) == 1 for v in range(self.n))

    def components_without(self, v: int) -> dict:
        """Component label of every vertex of G - v."""
        label = {}
        for s in range(self.n):
            if s == v or s in label:
                continue
            label[s] = s
            stack = [s]
            while stack:
                x = stack.pop()
                for w in self.neighbors(x):
                    if w != v and w not in label:
                        label[w] = s
                        stack.append(w)
        return label

    def simple_paths(self, max_edges: Optional[int] = None) -> Iterator[tuple]:
        """Every directed simple path with at least one edge, as a vertex tuple."""
        limit = self.n - 1 if max_edges is None else max_edges
        for s in range(self.n):
            stack = [(s, (s,))]
            while stack:
                v, walk = stack.pop()
                if len(walk) > 1:
                    yield walk
                if len(walk) - 1 >= limit:
                    continue
                for w in sorted(self.neighbors(v), reverse=True):
                    if w not in walk:
                        stack.append((w, walk + (w,)))

    def cycles(self) -> list:
        """Simple cycles (length >= 3) as vertex tuples, each listed once.

        The representative starts at its smallest vertex and takes the smaller
        of the two neighbours second.
        """
        found = []
        for s in range(self.n):
            stack = [(s, (s,))]
            while stack:
                v, walk = stack.pop()
                for w in sorted(self.neighbors(v), reverse=True):
                    if w == s and len(walk) >= 3 and walk[1] < walk[-1]:
                        found.append(walk)
                    elif w > s and w not in walk:
                        stack.append((w, walk + (w,)))
        found.sort(key=lambda c: (len(c), c))
        return found

    def triangles(self) -> list:
        return [c for c in self.cycles() if len(c) == 3]

    def relabel(self, order: Sequence[int]) -> "AbstractGraph":
        """Graph with vertex ``order[k]`` renamed to ``k``."""
        new = {old: k for k, old in enumerate(order)}
        return AbstractGraph(self.n, tuple((new[u], new[v]) for u, v in self.edges))

    def canonical_key(self) -> tuple:
        """Isomorphism-invariant key by brute force over permutations (small graphs only)."""
        best = None
        edge_set = [tuple(sorted(e)) for e in self.edges]
        for perm in itertools.permutations(range(self.n)):
            key = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edge_set))
            if best is None or key < best:
                best = key
        return (self.n, best or ())


def cycle_edges(graph: AbstractGraph, cycle: Sequence[int]) -> list:
    """Edge indices along a closed vertex sequence (last vertex joins the first)."""
    out = []
    k = len(cycle)
    for a in range(k):
        i = graph.edge_index(cycle[a], cycle[(a + 1) % k])
        if i is None:
            raise InputError(f"{cycle[a]}-{cycle[(a + 1) % k]} is not an edge")
        out.append(i)
    return out


def enumerate_graphs(n: int, m: int, *, connected: bool = True,
                     min_degree: int = 0) -> list:
    """All simple graphs on ``n`` vertices with ``m`` edges, one per isomorphism class."""
    pairs = list(itertools.combinations(range(n), 2))
    classes = {}
    for chosen in itertools.combinations(pairs, m):
        deg = [0] * n
        for u, v in chosen:
            deg[u] += 1
            deg[v] += 1
        if min(deg, default=0) < min_degree:
            continue
        g = AbstractGraph(n, chosen)
        if connected and not g.is_connected():
            continue
        key = _fast_key(g, deg)
        if key not in classes:
            classes[key] = g
    return [classes[k] for k in sorted(classes)]


def _fast_key(g: AbstractGraph, deg: Iterable[int]) -> tuple:
    # permutations are restricted to those sorting the degree sequence
    deg = list(deg)
    groups = {}
    for v, d in enumerate(deg):
        groups.setdefault(d, []).append(v)
    ordered = [groups[d] for d in sorted(groups)]
    best = None
    for parts in itertools.product(*(itertools.permutations(grp) for grp in ordered)):
        order = [v for part in parts for v in part]
        pos = {v: k for k, v in enumerate(order)}
        key = tuple(sorted(tuple(sorted((pos[u], pos[v]))) for u, v in g.edges))
        if best is None or key < best:
            best = key
    return (g.n, tuple(sorted(deg)), best)
