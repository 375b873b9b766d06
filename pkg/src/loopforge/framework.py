"""Complement-graph orientation and per-vertex exit plans for metacell tilings.

Every vertex of a degree-{2,3} grid graph becomes a square metacell with
exits on exactly three sides.  Sides carrying graph edges are always exits;
a degree-2 vertex gets its third exit from the orientation of the
complement structure H, whose edges join grid-adjacent vertex pairs that
are *not* graph edges (plus a half-edge for every board-border side).
Orienting each H component consistently gives every vertex indegree and
outdegree at most one, and the third exit faces the outgoing incidence.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Literal

from .model import GridGraph, Vertex, degree_profile


class Direction(Enum):
    N = (0, 1)
    E = (1, 0)
    S = (0, -1)
    W = (-1, 0)

    @property
    def dx(self) -> int:
        return self.value[0]

    @property
    def dy(self) -> int:
        return self.value[1]

    def opposite(self) -> "Direction":
        return _OPPOSITE[self]

    def rotated(self, quarter_turns: int) -> "Direction":
        """Counterclockwise rotation: one quarter turn maps N->W->S->E->N."""
        d = self
        for _ in range(quarter_turns % 4):
            d = _CCW[d]
        return d


_CCW = {Direction.N: Direction.W, Direction.W: Direction.S,
        Direction.S: Direction.E, Direction.E: Direction.N}
_OPPOSITE = {Direction.N: Direction.S, Direction.S: Direction.N,
             Direction.E: Direction.W, Direction.W: Direction.E}

DIRECTION_ORDER = (Direction.N, Direction.E, Direction.S, Direction.W)


def direction_between(u: Vertex, v: Vertex) -> Direction:
    delta = (v[0] - u[0], v[1] - u[1])
    for d in DIRECTION_ORDER:
        if d.value == delta:
            return d
    raise ValueError(f"{u} and {v} are not grid-adjacent")


def turns_between(src: Direction, dst: Direction) -> int:
    """Quarter turns (counterclockwise) mapping ``src`` onto ``dst``."""
    for q in range(4):
        if src.rotated(q) is dst:
            return q
    raise AssertionError("unreachable")


def rotate_cell(size: int, quarter_turns: int, cell: tuple[int, int]) -> tuple[int, int]:
    """Rotate a cell counterclockwise within a size x size frame."""
    x, y = cell
    if not (0 <= x < size and 0 <= y < size):
        raise ValueError(f"cell {cell} outside {size}x{size} frame")
    for _ in range(quarter_turns % 4):
        x, y = size - 1 - y, x
    return (x, y)


def rotate_corner(size: int, quarter_turns: int, corner: tuple[int, int]) -> tuple[int, int]:
    """Rotate a frame corner point (coordinates 0..size) counterclockwise."""
    x, y = corner
    if not (0 <= x <= size and 0 <= y <= size):
        raise ValueError(f"corner {corner} outside {size}x{size} frame")
    for _ in range(quarter_turns % 4):
        x, y = size - y, x
    return (x, y)


@dataclass(frozen=True)
class HalfEdge:
    """An H incidence pointing off the board at a border vertex."""

    vertex: Vertex
    direction: Direction


@dataclass(frozen=True)
class ComplementGraph:
    cols: int
    rows: int
    internal_edges: frozenset[tuple[Vertex, Vertex]]
    half_edges: frozenset[HalfEdge]

    def incidences(self, v: Vertex) -> list[Direction]:
        dirs = [direction_between(v, b if a == v else a)
                for a, b in self.internal_edges if v in (a, b)]
        dirs.extend(h.direction for h in self.half_edges if h.vertex == v)
        return sorted(dirs, key=DIRECTION_ORDER.index)


def build_complement(g: GridGraph) -> ComplementGraph:
    """H has an internal edge for every grid-adjacent non-edge of g and a
    half-edge for every board-border side, giving each vertex 4 - deg(v)
    incidences.  Requires every degree in {2, 3}."""
    deg = degree_profile(g)
    for v, d in sorted(deg.items()):
        if d not in (2, 3):
            raise ValueError(f"vertex {v} has degree {d}, expected 2 or 3")
    internal = set()
    halves = set()
    for v in g.vertices():
        for d in DIRECTION_ORDER:
            w = (v[0] + d.dx, v[1] + d.dy)
            if not g.in_bounds(w):
                halves.add(HalfEdge(v, d))
            elif not g.has_edge(v, w):
                internal.add(tuple(sorted((v, w))))
    h = ComplementGraph(g.cols, g.rows, frozenset(internal), frozenset(halves))
    for v in g.vertices():
        assert len(h.incidences(v)) == 4 - deg[v], f"incidence count off at {v}"
    return h


@dataclass(frozen=True)
class Orientation:
    """Direction assignment for every H incidence.

    ``edge_heads`` maps each internal edge (canonical order) to its head
    vertex; ``half_out`` maps each half-edge to True when it points off the
    board (outward).
    """

    edge_heads: dict[tuple[Vertex, Vertex], Vertex]
    half_out: dict[HalfEdge, bool]

    def outgoing(self, v: Vertex) -> Direction | None:
        for (a, b), head in self.edge_heads.items():
            if a == v and head == b:
                return direction_between(v, b)
            if b == v and head == a:
                return direction_between(v, a)
        for h, out in self.half_out.items():
            if h.vertex == v and out:
                return h.direction
        return None

    def indegree(self, v: Vertex) -> int:
        n = sum(1 for head in self.edge_heads.values() if head == v)
        n += sum(1 for h, out in self.half_out.items() if h.vertex == v and not out)
        return n

    def outdegree(self, v: Vertex) -> int:
        n = sum(1 for (a, b), head in self.edge_heads.items()
                if (a == v and head == b) or (b == v and head == a))
        n += sum(1 for h, out in self.half_out.items() if h.vertex == v and out)
        return n


SeedRule = Literal["lex", "antilex"]

# Walk nodes: real vertices are themselves; each half-edge gets a private
# endpoint node so components decompose into plain paths and cycles.
_Node = tuple


def _node_key(node: _Node):
    if node[0] == "v":
        return (node[1][0], node[1][1], -1)
    he: HalfEdge = node[1]
    return (he.vertex[0], he.vertex[1], DIRECTION_ORDER.index(he.direction))


def orient_complement(h: ComplementGraph, seed_rule: SeedRule = "lex") -> Orientation:
    """Orient every H component consistently head-to-tail.

    The structure on vertices has maximum degree 2 (half-edges act as path
    endpoints), so components are simple paths and cycles; walking each one
    in a fixed direction gives every interior vertex exactly one incoming
    and one outgoing incidence.  Free choices are resolved by comparing the
    candidate walks: "lex" keeps the smallest, "antilex" the largest, so
    both rules yield valid orientations and each is reproducible.
    """
    if seed_rule not in ("lex", "antilex"):
        raise ValueError(f"unknown seed rule: {seed_rule!r}")

    adj: dict[_Node, list[_Node]] = {}

    def link(a: _Node, b: _Node):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    for e in sorted(h.internal_edges):
        link(("v", e[0]), ("v", e[1]))
    for he in sorted(h.half_edges,
                     key=lambda x: (x.vertex, DIRECTION_ORDER.index(x.direction))):
        link(("v", he.vertex), ("h", he))
    for node in adj:
        adj[node].sort(key=_node_key)

    def component_of(start: _Node) -> set[_Node]:
        comp = {start}
        frontier = [start]
        while frontier:
            c = frontier.pop()
            for n in adj[c]:
                if n not in comp:
                    comp.add(n)
                    frontier.append(n)
        return comp

    def walk_from(start: _Node, nxt: _Node) -> list[_Node]:
        walk = [start, nxt]
        while True:
            options = [n for n in adj[walk[-1]] if n != walk[-2]]
            if not options:
                return walk
            step = options[0]
            if step == walk[0]:
                return walk  # cycle closed (start not repeated)
            walk.append(step)

    def candidate_walks(comp: set[_Node]) -> list[list[_Node]]:
        endpoints = sorted((n for n in comp if len(adj[n]) == 1), key=_node_key)
        if endpoints:
            return [walk_from(e, adj[e][0]) for e in endpoints]
        return [walk_from(n, m) for n in sorted(comp, key=_node_key) for m in adj[n]]

    edge_heads: dict[tuple[Vertex, Vertex], Vertex] = {}
    half_out: dict[HalfEdge, bool] = {}

    def orient_walk(walk: list[_Node]):
        for a, b in zip(walk, walk[1:] + ([walk[0]] if _is_cycle(walk) else [])):
            if a[0] == "v" and b[0] == "v":
                edge_heads[tuple(sorted((a[1], b[1])))] = b[1]
            elif a[0] == "h":
                half_out[a[1]] = False  # entering the board
            else:
                half_out[b[1]] = True  # leaving the board

    def _is_cycle(walk: list[_Node]) -> bool:
        return len(adj[walk[0]]) == 2 and len(adj[walk[-1]]) == 2 \
            and walk[0] in adj[walk[-1]]

    seen: set[_Node] = set()
    for start in sorted(adj, key=_node_key):
        if start in seen:
            continue
        comp = component_of(start)
        seen |= comp
        walks = candidate_walks(comp)
        keyed = sorted(walks, key=lambda w: [_node_key(n) for n in w])
        orient_walk(keyed[0] if seed_rule == "lex" else keyed[-1])

    o = Orientation(edge_heads, half_out)
    for node in adj:
        if node[0] != "v":
            continue
        v = node[1]
        assert o.indegree(v) <= 1 and o.outdegree(v) <= 1, \
            f"orientation degree bound broken at {v}"
        if len(adj[node]) == 2:
            assert o.outdegree(v) == 1, \
                f"vertex {v} with two incidences lacks an outgoing one"
    return o


@dataclass(frozen=True)
class VertexExits:
    """Exit sides of one metacell: three exits, one non-exit."""

    exits: frozenset[Direction]
    non_exit: Direction

    @property
    def rotation_turns(self) -> int:
        """Quarter turns mapping the reference non-exit side S onto this one."""
        return turns_between(Direction.S, self.non_exit)

    @property
    def rotation_degrees(self) -> int:
        return self.rotation_turns * 90


@dataclass(frozen=True)
class ExitPlan:
    graph: GridGraph
    by_vertex: dict[Vertex, VertexExits]

    def exits(self, v: Vertex) -> frozenset[Direction]:
        return self.by_vertex[v].exits

    def non_exit(self, v: Vertex) -> Direction:
        return self.by_vertex[v].non_exit


def exit_plan(g: GridGraph, o: Orientation) -> ExitPlan:
    """Exit sides per vertex: all graph-edge directions, plus the outgoing
    H incidence for degree-2 vertices."""
    deg = degree_profile(g)
    plan = {}
    for v in g.vertices():
        exits = {direction_between(v, w) for w in g.neighbors(v)}
        if deg[v] == 2:
            out = o.outgoing(v)
            assert out is not None, f"degree-2 vertex {v} has no outgoing incidence"
            exits.add(out)
        assert len(exits) == 3, f"vertex {v} ended with exits {exits}"
        (non_exit,) = [d for d in DIRECTION_ORDER if d not in exits]
        plan[v] = VertexExits(frozenset(exits), non_exit)
    return ExitPlan(g, plan)


def plan_for(g: GridGraph, seed_rule: SeedRule = "lex") -> ExitPlan:
    """Convenience chain: complement, orientation, exit plan."""
    return exit_plan(g, orient_complement(build_complement(g), seed_rule))


def mutual_facing_holds(g: GridGraph, plan: ExitPlan) -> bool:
    """(u,v) is a graph edge iff u and v both have exits facing each other."""
    for v in g.vertices():
        for d in DIRECTION_ORDER:
            w = (v[0] + d.dx, v[1] + d.dy)
            if not g.in_bounds(w):
                continue
            mutual = d in plan.exits(v) and d.opposite() in plan.exits(w)
            if mutual != g.has_edge(v, w):
                return False
    return True


def emit_exit_plan(plan: ExitPlan) -> str:
    """Debug dump: one line per vertex, rotation relative to reference side S."""
    lines = []
    for v in sorted(plan.by_vertex):
        ve = plan.by_vertex[v]
        dirs = "".join(d.name for d in DIRECTION_ORDER if d in ve.exits)
        lines.append(f"vertex {v[0]} {v[1]} exits {dirs} rot {ve.rotation_degrees}")
    return "\n".join(lines) + "\n"
