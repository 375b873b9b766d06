"""Hamiltonian-cycle search and candidate-subgraph enumeration on grid graphs.

The search is plain backtracking over vertices with two sound prunes
(degree feasibility and connectivity of the unvisited set), so a ``None``
answer is an exhaustive proof of absence.  Budgets are counted in search
nodes and exhaustion is reported distinctly from "no cycle".
"""

from __future__ import annotations

import random
from typing import Iterator

from .errors import SearchBudgetExceeded
from .model import (
    Edge,
    GridGraph,
    HamCycle,
    Vertex,
    canonical_edge,
    degree_profile,
    full_grid,
    grid_graph,
)

ENUMERATION_FREE_EDGE_LIMIT = 12


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise SearchBudgetExceeded(self.nodes)


def hamiltonian_cycles(g: GridGraph, budget: int | None = None) -> Iterator[HamCycle]:
    """Yield every Hamiltonian cycle of ``g`` exactly once, in canonical form.

    Cycles are rooted at the smallest vertex and deduplicated by requiring the
    second vertex to be smaller than the last, so each cycle appears once up
    to rotation and reversal.
    """
    verts = sorted(g.vertices())
    n = len(verts)
    if n < 4:
        raise ValueError(f"need at least 4 vertices, got {n}")
    adj = {v: sorted(g.neighbors(v)) for v in verts}
    if any(len(adj[v]) < 2 for v in verts):
        return
    v0 = verts[0]
    counter = _Budget(budget)
    path = [v0]
    on_path = {v0}

    def feasible(head: Vertex) -> bool:
        # every unvisited vertex still needs two usable loop neighbors
        for u in verts:
            if u in on_path:
                continue
            avail = 0
            for w in adj[u]:
                if w not in on_path or w == head or w == v0:
                    avail += 1
            if avail < 2:
                return False
        # the unvisited set must be one component reachable from the head
        remaining = n - len(path)
        if remaining == 0:
            return True
        seen = set()
        frontier = [w for w in adj[head] if w not in on_path]
        seen.update(frontier)
        while frontier:
            c = frontier.pop()
            for w in adj[c]:
                if w not in on_path and w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return len(seen) == remaining

    def extend(head: Vertex) -> Iterator[HamCycle]:
        counter.tick()
        if len(path) == n:
            if v0 in adj[head] and path[1] < path[-1]:
                yield HamCycle(tuple(path))
            return
        if not feasible(head):
            return
        for w in adj[head]:
            if w in on_path:
                continue
            path.append(w)
            on_path.add(w)
            yield from extend(w)
            path.pop()
            on_path.remove(w)

    yield from extend(v0)


def find_hamiltonian_cycle(g: GridGraph, budget: int | None = None) -> HamCycle | None:
    """First Hamiltonian cycle of ``g``, or None after exhaustive search.

    Raises :class:`SearchBudgetExceeded` when the node budget runs out first.
    """
    for cycle in hamiltonian_cycles(g, budget):
        return cycle
    return None


def count_hamiltonian_cycles(g: GridGraph, budget: int | None = None) -> int:
    return sum(1 for _ in hamiltonian_cycles(g, budget))


def candidate_free_edges(cols: int, rows: int) -> tuple[list[Edge], list[Edge]]:
    """Split the full grid's edges into (forced, free) for candidate enumeration.

    Edges at a vertex of full-grid degree 2 are forced: dropping one would
    push that vertex below degree 2.
    """
    g = full_grid(cols, rows)
    deg = degree_profile(g)
    forced, free = [], []
    for e in sorted(g.edges):
        if deg[e[0]] == 2 or deg[e[1]] == 2:
            forced.append(e)
        else:
            free.append(e)
    return forced, free


def enumerate_candidate_subgraphs(cols: int, rows: int) -> Iterator[GridGraph]:
    """All spanning subgraphs of the full grid with every degree in {2, 3}.

    Enumerates subsets of the non-forced edges in ascending bitmask order
    (bit i selects the i-th free edge in sorted order), so the output order
    is canonical.  Refuses grids with more than 12 free edges.
    """
    forced, free = candidate_free_edges(cols, rows)
    if len(free) > ENUMERATION_FREE_EDGE_LIMIT:
        raise ValueError(
            f"{cols}x{rows} grid has {len(free)} free edges; "
            f"exhaustive enumeration is limited to {ENUMERATION_FREE_EDGE_LIMIT}"
        )
    for mask in range(1 << len(free)):
        edges = list(forced)
        for i, e in enumerate(free):
            if mask >> i & 1:
                edges.append(e)
        g = grid_graph(cols, rows, edges)
        if all(d in (2, 3) for d in degree_profile(g).values()):
            yield g


def random_candidate_subgraph(cols: int, rows: int, rng: random.Random,
                              max_attempts: int = 1000) -> GridGraph:
    """Random spanning subgraph with degrees in {2, 3}, reproducible per rng state.

    Removes edges from the full grid while any vertex still has degree 4,
    never dropping an endpoint below degree 2; resamples on dead ends.
    """
    if cols < 2 or rows < 2:
        raise ValueError(f"need at least a 2x2 grid, got {cols}x{rows}")
    base = full_grid(cols, rows)
    for _ in range(max_attempts):
        edges = set(base.edges)
        deg = degree_profile(base)
        stuck = False
        while True:
            over = sorted(v for v, d in deg.items() if d == 4)
            if not over:
                break
            v = rng.choice(over)
            removable = sorted(
                canonical_edge(v, u)
                for u in base.neighbors(v)
                if canonical_edge(v, u) in edges and deg[u] >= 3
            )
            if not removable:
                stuck = True
                break
            e = rng.choice(removable)
            edges.remove(e)
            deg[e[0]] -= 1
            deg[e[1]] -= 1
        if not stuck:
            return grid_graph(cols, rows, edges)
    raise ValueError(f"could not sample a candidate subgraph on {cols}x{rows}")
