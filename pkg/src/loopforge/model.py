"""Shared geometric substrate: grids, graphs, loops, boundaries, and regions.

Coordinate convention used everywhere: a cell or vertex is an ``(x, y)``
pair with the origin at the bottom-left, ``x`` increasing rightward and
``y`` increasing upward.  Text file formats write rows top-first, so the
row for ``y = height - 1`` comes first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .errors import MalformedLoopError

Cell = tuple[int, int]
Vertex = tuple[int, int]
Edge = tuple[Vertex, Vertex]

ORTHO_STEPS = ((0, 1), (1, 0), (0, -1), (-1, 0))


def orthogonal_neighbors(cell: Cell) -> list[Cell]:
    x, y = cell
    return [(x + dx, y + dy) for dx, dy in ORTHO_STEPS]


def are_orthogonal(a: Cell, b: Cell) -> bool:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def canonical_edge(u: Vertex, v: Vertex) -> Edge:
    """Unordered pair stored with the smaller endpoint first."""
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class GridGraph:
    """Spanning subgraph of a rectangular grid: all vertices, a subset of unit edges."""

    cols: int
    rows: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.cols < 1 or self.rows < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.cols}x{self.rows}")
        for u, v in self.edges:
            if not (self.in_bounds(u) and self.in_bounds(v)):
                raise ValueError(f"edge endpoint out of range: {u}-{v}")
            if not are_orthogonal(u, v):
                raise ValueError(f"edge is not between unit-distance vertices: {u}-{v}")
            if (u, v) != canonical_edge(u, v):
                raise ValueError(f"edge not stored in canonical order: {u}-{v}")

    def in_bounds(self, v: Vertex) -> bool:
        return 0 <= v[0] < self.cols and 0 <= v[1] < self.rows

    def vertices(self) -> list[Vertex]:
        return [(x, y) for x in range(self.cols) for y in range(self.rows)]

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return canonical_edge(u, v) in self.edges

    def neighbors(self, v: Vertex) -> list[Vertex]:
        return [w for w in orthogonal_neighbors(v) if self.in_bounds(w) and self.has_edge(v, w)]


def grid_graph(cols: int, rows: int, edges: Iterable[tuple[Vertex, Vertex]]) -> GridGraph:
    canon = set()
    for u, v in edges:
        e = canonical_edge(u, v)
        if e in canon:
            raise ValueError(f"duplicate edge: {u}-{v}")
        canon.add(e)
    return GridGraph(cols, rows, frozenset(canon))


def full_grid(cols: int, rows: int) -> GridGraph:
    """The complete rectangular grid graph on cols x rows vertices."""
    edges = []
    for x in range(cols):
        for y in range(rows):
            if x + 1 < cols:
                edges.append(((x, y), (x + 1, y)))
            if y + 1 < rows:
                edges.append(((x, y), (x, y + 1)))
    return grid_graph(cols, rows, edges)


def degree_profile(g: GridGraph) -> dict[Vertex, int]:
    """Exact degree of every vertex (including isolated ones, as 0)."""
    deg = {v: 0 for v in g.vertices()}
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def degree_bounds(g: GridGraph) -> tuple[int, int]:
    """(minimum, maximum) vertex degree."""
    deg = degree_profile(g)
    return min(deg.values()), max(deg.values())


def _canonical_cycle(seq: tuple[Cell, ...]) -> tuple[Cell, ...]:
    """Rotate the smallest element to the front, then pick the direction with
    the smaller second element.  Used to compare cycles up to rotation/reversal."""
    n = len(seq)
    k = seq.index(min(seq))
    fwd = seq[k:] + seq[:k]
    rev = (fwd[0],) + tuple(reversed(fwd[1:]))
    return fwd if fwd[1] <= rev[1] else rev


@dataclass(frozen=True)
class HamCycle:
    """Cyclic sequence of distinct vertices; validity w.r.t. a graph is checked
    by :meth:`is_cycle_of`."""

    vertices: tuple[Vertex, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("cycle repeats a vertex")
        if len(self.vertices) < 4:
            raise ValueError("a grid-graph cycle needs at least 4 vertices")

    def is_cycle_of(self, g: GridGraph) -> bool:
        if set(self.vertices) != set(g.vertices()):
            return False
        n = len(self.vertices)
        return all(g.has_edge(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n))

    def canonical(self) -> "HamCycle":
        return HamCycle(_canonical_cycle(self.vertices))


@dataclass(frozen=True)
class LoopPath:
    """Non-crossing loop: cyclic sequence of distinct, orthogonally adjacent cells."""

    cells: tuple[Cell, ...]

    def __post_init__(self):
        n = len(self.cells)
        if n < 4:
            raise MalformedLoopError(f"loop too short: {n} cells")
        if len(set(self.cells)) != n:
            raise MalformedLoopError("loop revisits a cell")
        for i in range(n):
            a, b = self.cells[i], self.cells[(i + 1) % n]
            if not are_orthogonal(a, b):
                raise MalformedLoopError(f"cells {a} and {b} are not orthogonally adjacent")

    def __len__(self):
        return len(self.cells)

    def canonical(self) -> "LoopPath":
        return LoopPath(_canonical_cycle(self.cells))

    def check_on_board(self, width: int, height: int) -> None:
        for x, y in self.cells:
            if not (0 <= x < width and 0 <= y < height):
                raise MalformedLoopError(f"loop cell ({x}, {y}) is off the {width}x{height} board")


@dataclass(frozen=True)
class BoundaryEdgeSet:
    """Unit segments separating two orthogonally adjacent cell positions.

    Each segment is stored as the canonically ordered pair of the two cell
    positions it separates; one of them may lie off the board (the exterior
    side of a border segment).
    """

    edges: frozenset[tuple[Cell, Cell]]

    def __post_init__(self):
        for a, b in self.edges:
            if not are_orthogonal(a, b):
                raise ValueError(f"boundary edge does not separate adjacent cells: {a}|{b}")

    def blocks(self, a: Cell, b: Cell) -> bool:
        return (a, b) in self.edges or (b, a) in self.edges

    def union(self, other: "BoundaryEdgeSet") -> "BoundaryEdgeSet":
        return BoundaryEdgeSet(self.edges | other.edges)


def boundary_edges(pairs: Iterable[tuple[Cell, Cell]]) -> BoundaryEdgeSet:
    return BoundaryEdgeSet(frozenset(tuple(sorted(p)) for p in pairs))


def perimeter_boundary(width: int, height: int) -> BoundaryEdgeSet:
    pairs = []
    for x in range(width):
        pairs.append(((x, 0), (x, -1)))
        pairs.append(((x, height - 1), (x, height)))
    for y in range(height):
        pairs.append(((0, y), (-1, y)))
        pairs.append(((width - 1, y), (width, y)))
    return boundary_edges(pairs)


def corner_segment_to_cells(p: tuple[int, int], q: tuple[int, int]) -> tuple[Cell, Cell]:
    """Convert a unit segment between grid corners into the cell pair it separates.

    A horizontal segment from (x, y) to (x+1, y) separates cell (x, y-1) from
    (x, y); a vertical segment from (x, y) to (x, y+1) separates (x-1, y) from
    (x, y).
    """
    (x1, y1), (x2, y2) = sorted((p, q))
    if (x2 - x1, y2 - y1) == (1, 0):
        return ((x1, y1 - 1), (x1, y1))
    if (x2 - x1, y2 - y1) == (0, 1):
        return ((x1 - 1, y1), (x1, y1))
    raise ValueError(f"not a unit corner segment: {p}-{q}")


def polyline_to_boundary(points: list[tuple[int, int]]) -> set[tuple[Cell, Cell]]:
    """Decompose an axis-aligned corner polyline into separated cell pairs."""
    pairs = set()
    for (x1, y1), (x2, y2) in zip(points, points[1:]):
        if x1 != x2 and y1 != y2:
            raise ValueError(f"polyline segment not axis-aligned: ({x1},{y1})-({x2},{y2})")
        if x1 == x2:
            lo, hi = sorted((y1, y2))
            for y in range(lo, hi):
                pairs.add(tuple(sorted(corner_segment_to_cells((x1, y), (x1, y + 1)))))
        else:
            lo, hi = sorted((x1, x2))
            for x in range(lo, hi):
                pairs.add(tuple(sorted(corner_segment_to_cells((x, y1), (x + 1, y1)))))
    return pairs


@dataclass(frozen=True, eq=False)
class RegionDecomposition:
    """Connected components of board cells under adjacency not crossed by a boundary.

    ``region_of`` is total over the board; region ids are assigned in order of
    each region's lexicographically smallest cell.  A leaf is a cell with
    exactly one orthogonal neighbor in the same region; walls between
    same-region cells do not count, because a loop crossing one never
    leaves the region.
    """

    width: int
    height: int
    region_of: dict[Cell, int]
    regions: dict[int, frozenset[Cell]]
    leaves: dict[int, frozenset[Cell]]

    def __eq__(self, other):
        if not isinstance(other, RegionDecomposition):
            return NotImplemented
        return (self.width, self.height, self.region_of) == \
            (other.width, other.height, other.region_of)

    def region_count(self) -> int:
        return len(self.regions)

    def cells_of(self, region_id: int) -> frozenset[Cell]:
        return self.regions[region_id]


def regions_from_boundaries(width: int, height: int, b: BoundaryEdgeSet) -> RegionDecomposition:
    """Flood-fill the board into regions; the outer border always acts as boundary."""
    cells = [(x, y) for x in range(width) for y in range(height)]
    in_board = set(cells)

    def open_neighbors(c: Cell) -> list[Cell]:
        return [n for n in orthogonal_neighbors(c) if n in in_board and not b.blocks(c, n)]

    region_of: dict[Cell, int] = {}
    regions: dict[int, frozenset[Cell]] = {}
    next_id = 0
    for start in sorted(cells):
        if start in region_of:
            continue
        comp = {start}
        frontier = [start]
        while frontier:
            c = frontier.pop()
            for n in open_neighbors(c):
                if n not in comp:
                    comp.add(n)
                    frontier.append(n)
        for c in comp:
            region_of[c] = next_id
        regions[next_id] = frozenset(comp)
        next_id += 1

    leaves = {
        rid: frozenset(
            c for c in comp
            if sum(1 for n in orthogonal_neighbors(c) if region_of.get(n) == rid) == 1
        )
        for rid, comp in regions.items()
    }
    return RegionDecomposition(width, height, region_of, regions, leaves)


def loop_runs(loop: LoopPath, classify: Callable[[Cell], object]) -> list[tuple[object, int]]:
    """Cyclic run-length encoding of the loop's cells under a labelling.

    Returns ``(label, length)`` pairs; a loop with a single label collapses to
    one run of the full length, otherwise adjacent runs (cyclically) carry
    distinct labels.
    """
    labels = [classify(c) for c in loop.cells]
    n = len(labels)
    if all(lab == labels[0] for lab in labels):
        return [(labels[0], n)]
    # rotate so a run starts at index 0
    start = next(i for i in range(n) if labels[i - 1] != labels[i])
    rotated = labels[start:] + labels[:start]
    runs: list[tuple[object, int]] = []
    for lab in rotated:
        if runs and runs[-1][0] == lab:
            runs[-1] = (lab, runs[-1][1] + 1)
        else:
            runs.append((lab, 1))
    return runs


def loop_runs_with_cells(
    loop: LoopPath, classify: Callable[[Cell], object]
) -> list[tuple[object, tuple[Cell, ...]]]:
    """Like :func:`loop_runs` but carrying the cells of each run."""
    labels = [classify(c) for c in loop.cells]
    n = len(labels)
    if all(lab == labels[0] for lab in labels):
        return [(labels[0], tuple(loop.cells))]
    start = next(i for i in range(n) if labels[i - 1] != labels[i])
    cells = loop.cells[start:] + loop.cells[:start]
    rotated = labels[start:] + labels[:start]
    runs: list[tuple[object, list[Cell]]] = []
    for lab, c in zip(rotated, cells):
        if runs and runs[-1][0] == lab:
            runs[-1][1].append(c)
        else:
            runs.append((lab, [c]))
    return [(lab, tuple(cs)) for lab, cs in runs]


def boundary_crossings(loop: LoopPath, r: RegionDecomposition, region_id: int) -> int:
    """Number of cyclic positions where the loop steps across the region's border."""
    if region_id not in r.regions:
        raise ValueError(f"unknown region id: {region_id}")
    n = len(loop.cells)
    count = 0
    for i in range(n):
        a_in = r.region_of.get(loop.cells[i]) == region_id
        b_in = r.region_of.get(loop.cells[(i + 1) % n]) == region_id
        if a_in != b_in:
            count += 1
    return count


def loop_arc_count(loop: LoopPath, r: RegionDecomposition, region_id: int) -> int:
    """Number of maximal cyclic arcs of the loop lying inside the given region."""
    if region_id not in r.regions:
        raise ValueError(f"unknown region id: {region_id}")
    flags = [r.region_of.get(c) == region_id for c in loop.cells]
    if all(flags):
        return 1
    n = len(flags)
    return sum(1 for i in range(n) if flags[i] and not flags[i - 1])


def iter_loop_edges(loop: LoopPath) -> Iterator[tuple[Cell, Cell]]:
    n = len(loop.cells)
    for i in range(n):
        yield loop.cells[i], loop.cells[(i + 1) % n]


@dataclass(frozen=True)
class Violation:
    """One broken puzzle rule, tagged with the rule number it falls under."""

    rule: int
    message: str
    cells: tuple[Cell, ...] = ()


@dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules_broken(self) -> set[int]:
        return {v.rule for v in self.violations}
