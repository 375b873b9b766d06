"""All or Nothing: region boards, rule checking, metacell compilation, solving.

Rules enforced by the verifier:

1. a region the loop visits must be passed through entirely;
2. the loop enters and exits each region at most once (its cells inside a
   region form at most one contiguous cyclic arc, i.e. the loop crosses the
   region's border 0 or 2 times);
3. two unvisited regions may not be orthogonally adjacent.

The metacell gadget lives on an 11x11 frame.  In canonical orientation the
non-exit side is S and the exits are W, E, N with border cells on the
midline of their sides.  Its walls split the frame into one big walkable
region, a single enclosed one-cell region, and three partially enclosed
filler parts that merge into dead regions once gadgets are tiled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import CompileError, ParseError
from .framework import Direction, ExitPlan, rotate_cell, rotate_corner, turns_between
from .loopsearch import LoopConstraint, SearchResult, search_loops
from .model import (
    BoundaryEdgeSet,
    Cell,
    GridGraph,
    LoopPath,
    RegionDecomposition,
    Verdict,
    Violation,
    boundary_crossings,
    corner_segment_to_cells,
    orthogonal_neighbors,
    perimeter_boundary,
    polyline_to_boundary,
    regions_from_boundaries,
)

FRAME = 11

GADGET_NON_EXIT = Direction.S
GADGET_EXIT_CELLS = {
    Direction.W: (0, 5),
    Direction.E: (10, 5),
    Direction.N: (5, 10),
}

# Wall polylines of the canonical gadget, in frame-corner coordinates.
# The two three-sided squares are deliberately open on one side: that gap
# joins their single cell to the surrounding filler part.
GADGET_POLYLINES = (
    [(0, 4), (1, 4), (1, 1), (3, 1), (3, 4), (5, 4), (5, 3), (7, 3), (7, 4),
     (8, 4), (8, 1), (10, 1), (10, 5), (11, 5)],
    [(0, 6), (1, 6), (1, 7)],
    [(1, 8), (1, 10), (4, 10), (4, 11)],
    [(1, 7), (2, 7), (2, 8), (1, 8)],
    [(6, 11), (6, 10), (7, 10)],
    [(8, 10), (10, 10), (10, 7), (11, 7)],
    [(7, 10), (7, 9), (8, 9), (8, 10)],
    [(5, 6), (6, 6), (6, 7), (5, 7), (5, 6)],
    [(0, 4), (0, 6)],
    [(11, 5), (11, 7)],
    [(4, 11), (6, 11)],
)

# Marker cells of the filler parts: fixed leaves stay leaves in every
# tiling; rim leaves sit on the frame border and stop being leaves when an
# open border joins them to a neighboring gadget's filler part.
FIXED_LEAF_CELLS = ((1, 7), (7, 9), (7, 3))
RIM_LEAF_CELLS = ((0, 6), (0, 3), (10, 4), (10, 7), (6, 10), (3, 10))
ONE_CELL_REGION_CELL = (5, 6)

# One transcribed traversal per exit pair, covering the big region exactly.
# More traversals exist (the gadget is deliberately not locally unique);
# certification enumerates them all and checks these are among them.
GADGET_PATHS: dict[frozenset[Direction], tuple[tuple[Cell, ...], ...]] = {
    frozenset({Direction.W, Direction.N}): ((
        (0, 5), (0, 4), (1, 4), (1, 3), (1, 2), (1, 1), (2, 1), (2, 2), (2, 3),
        (2, 4), (2, 5), (1, 5), (1, 6), (2, 6), (2, 7), (2, 8), (1, 8), (1, 9),
        (2, 9), (3, 9), (3, 8), (3, 7), (3, 6), (3, 5), (3, 4), (4, 4), (5, 4),
        (5, 3), (6, 3), (6, 4), (7, 4), (8, 4), (8, 3), (8, 2), (8, 1), (9, 1),
        (9, 2), (9, 3), (9, 4), (9, 5), (10, 5), (10, 6), (9, 6), (8, 6), (8, 5),
        (7, 5), (6, 5), (5, 5), (4, 5), (4, 6), (4, 7), (4, 8), (5, 8), (5, 7),
        (6, 7), (6, 6), (7, 6), (7, 7), (8, 7), (9, 7), (9, 8), (9, 9), (8, 9),
        (8, 8), (7, 8), (6, 8), (6, 9), (5, 9), (4, 9), (4, 10), (5, 10),
    ),),
    frozenset({Direction.E, Direction.N}): ((
        (10, 5), (10, 6), (9, 6), (9, 5), (9, 4), (9, 3), (9, 2), (9, 1), (8, 1),
        (8, 2), (8, 3), (8, 4), (7, 4), (6, 4), (6, 3), (5, 3), (5, 4), (5, 5),
        (4, 5), (4, 4), (3, 4), (3, 5), (2, 5), (2, 4), (2, 3), (2, 2), (2, 1),
        (1, 1), (1, 2), (1, 3), (1, 4), (0, 4), (0, 5), (1, 5), (1, 6), (2, 6),
        (2, 7), (2, 8), (1, 8), (1, 9), (2, 9), (3, 9), (3, 8), (3, 7), (3, 6),
        (4, 6), (4, 7), (4, 8), (5, 8), (5, 7), (6, 7), (7, 7), (7, 6), (6, 6),
        (6, 5), (7, 5), (8, 5), (8, 6), (8, 7), (9, 7), (9, 8), (9, 9), (8, 9),
        (8, 8), (7, 8), (6, 8), (6, 9), (5, 9), (4, 9), (4, 10), (5, 10),
    ),),
    frozenset({Direction.W, Direction.E}): ((
        (0, 5), (0, 4), (1, 4), (1, 3), (1, 2), (1, 1), (2, 1), (2, 2), (2, 3),
        (2, 4), (2, 5), (1, 5), (1, 6), (2, 6), (2, 7), (2, 8), (1, 8), (1, 9),
        (2, 9), (3, 9), (3, 8), (3, 7), (3, 6), (4, 6), (4, 7), (5, 7), (5, 8),
        (4, 8), (4, 9), (4, 10), (5, 10), (5, 9), (6, 9), (6, 8), (6, 7), (7, 7),
        (7, 8), (8, 8), (8, 9), (9, 9), (9, 8), (9, 7), (8, 7), (8, 6), (8, 5),
        (7, 5), (7, 6), (6, 6), (6, 5), (5, 5), (4, 5), (3, 5), (3, 4), (4, 4),
        (5, 4), (5, 3), (6, 3), (6, 4), (7, 4), (8, 4), (8, 3), (8, 2), (8, 1),
        (9, 1), (9, 2), (9, 3), (9, 4), (9, 5), (9, 6), (10, 6), (10, 5),
    ),),
}


def gadget_wall_segments() -> set[tuple[tuple[int, int], tuple[int, int]]]:
    """Unit corner segments of the canonical gadget walls (union of polylines)."""
    segments = set()
    for pts in GADGET_POLYLINES:
        for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
            if x1 == x2:
                lo, hi = sorted((y1, y2))
                segments.update(((x1, y), (x1, y + 1)) for y in range(lo, hi))
            elif y1 == y2:
                lo, hi = sorted((x1, x2))
                segments.update(((x, y1), (x + 1, y1)) for x in range(lo, hi))
            else:
                raise AssertionError("gadget polyline not axis-aligned")
    return segments


@lru_cache(maxsize=1)
def gadget_boundary() -> BoundaryEdgeSet:
    pairs = set()
    for pts in GADGET_POLYLINES:
        pairs |= polyline_to_boundary(pts)
    return BoundaryEdgeSet(frozenset(pairs))


@lru_cache(maxsize=1)
def gadget_parts() -> dict[str, object]:
    """Canonical gadget decomposition with the frame border sealed.

    Returns the big region's cells, the one-cell region, and the filler
    parts as a tuple of cell sets.
    """
    b = gadget_boundary().union(perimeter_boundary(FRAME, FRAME))
    decomp = regions_from_boundaries(FRAME, FRAME, b)
    big_id = decomp.region_of[GADGET_EXIT_CELLS[Direction.W]]
    one_id = decomp.region_of[ONE_CELL_REGION_CELL]
    parts = tuple(sorted(
        (decomp.regions[rid] for rid in decomp.regions if rid not in (big_id, one_id)),
        key=lambda cells: min(cells),
    ))
    return {
        "decomposition": decomp,
        "big": decomp.regions[big_id],
        "one_cell": decomp.regions[one_id],
        "parts": parts,
    }


def gadget_turns(plan: ExitPlan, v) -> int:
    return turns_between(GADGET_NON_EXIT, plan.non_exit(v))


def gadget_exit_cell(side: Direction, turns: int) -> Cell:
    canonical = side.rotated(-turns)
    return rotate_cell(FRAME, turns, GADGET_EXIT_CELLS[canonical])


def region_token(i: int) -> str:
    """A, B, ..., Z, AA, AB, ... for region ids in files."""
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = chr(65 + r) + s
    return s


@dataclass(frozen=True, eq=False)
class AonInstance:
    width: int
    height: int
    regions: RegionDecomposition
    region_names: tuple[str, ...]
    boundaries: BoundaryEdgeSet
    provenance: dict[tuple[int, int], int] | None = field(default=None, compare=False)
    big_region_ids: frozenset[int] | None = field(default=None, compare=False)

    def __eq__(self, other):
        # board geometry and naming; provenance is compilation lineage
        if not isinstance(other, AonInstance):
            return NotImplemented
        return (self.width, self.height, self.regions, self.region_names) == \
            (other.width, other.height, other.regions, other.region_names)

    def region_name(self, rid: int) -> str:
        return self.region_names[rid]


def parse_aon(text: str) -> AonInstance:
    lines = [(i, raw.strip()) for i, raw in enumerate(text.splitlines(), start=1)
             if raw.strip() and not raw.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty instance file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "aon":
        raise ParseError(f"expected 'aon <width> <height>', got {header!r}", lineno)
    try:
        width, height = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError("width/height must be integers", lineno) from None
    rows = lines[1:]
    if len(rows) != height:
        raise ParseError(f"expected {height} rows, got {len(rows)}")
    token_of: dict[Cell, str] = {}
    for k, (lineno, row) in enumerate(rows):
        y = height - 1 - k
        tokens = row.split()
        if len(tokens) != width:
            raise ParseError(f"row has {len(tokens)} tokens, expected {width}", lineno)
        for x, tok in enumerate(tokens):
            if not tok.isalnum():
                raise ParseError(f"region id {tok!r} is not alphanumeric", lineno)
            token_of[(x, y)] = tok
    return instance_from_tokens(width, height, token_of)


def instance_from_tokens(width: int, height: int, token_of: dict[Cell, str]) -> AonInstance:
    pairs = set()
    for (x, y), tok in token_of.items():
        for n in ((x + 1, y), (x, y + 1)):
            if n in token_of and token_of[n] != tok:
                pairs.add(((x, y), n))
    b = BoundaryEdgeSet(frozenset(pairs)).union(perimeter_boundary(width, height))
    decomp = regions_from_boundaries(width, height, b)
    names = []
    for rid in sorted(decomp.regions):
        cells = decomp.regions[rid]
        tokens = {token_of[c] for c in cells}
        if len(tokens) != 1:
            raise ParseError("region decomposition does not match tokens")
        names.append(tokens.pop())
    # a token must name one connected region, not scattered patches
    by_token: dict[str, int] = {}
    for rid, name in enumerate(names):
        if name in by_token:
            raise ParseError(f"region id {name!r} names a disconnected cell set")
        by_token[name] = rid
    return AonInstance(width, height, decomp, tuple(names), b)


def emit_aon(inst: AonInstance) -> str:
    wide = max(len(n) for n in inst.region_names)
    lines = [f"aon {inst.width} {inst.height}"]
    for y in range(inst.height - 1, -1, -1):
        tokens = []
        for x in range(inst.width):
            rid = inst.regions.region_of[(x, y)]
            tokens.append(inst.region_names[rid].ljust(wide if wide > 1 else 1))
        lines.append(" ".join(tokens).rstrip())
    return "\n".join(lines) + "\n"


def compile_aon(g: GridGraph, plan: ExitPlan) -> AonInstance:
    """Tile one rotated gadget per vertex on an 11x11-per-metacell board.

    The walls of all gadgets are unioned with the board perimeter and the
    regions recomputed globally: filler parts merge across open borders,
    while every metacell keeps its own big region (asserted, not assumed).
    """
    if plan.graph != g:
        raise CompileError("exit plan was built for a different graph")
    width, height = FRAME * g.cols, FRAME * g.rows
    segments = gadget_wall_segments()
    pairs = set()
    provenance = {}
    for v in g.vertices():
        turns = gadget_turns(plan, v)
        provenance[v] = turns
        ox, oy = FRAME * v[0], FRAME * v[1]
        for p, q in segments:
            rp = rotate_corner(FRAME, turns, p)
            rq = rotate_corner(FRAME, turns, q)
            a, b = corner_segment_to_cells(
                (rp[0] + ox, rp[1] + oy), (rq[0] + ox, rq[1] + oy))
            pairs.add(tuple(sorted((a, b))))
        for side in plan.exits(v):
            ex, ey = gadget_exit_cell(side, turns)
            mid = FRAME // 2
            if side in (Direction.N, Direction.S):
                assert ex == mid, f"exit cell off midline at {v} side {side}"
            else:
                assert ey == mid, f"exit cell off midline at {v} side {side}"
    boundary = BoundaryEdgeSet(frozenset(pairs)).union(perimeter_boundary(width, height))
    decomp = regions_from_boundaries(width, height, boundary)

    big_cells_canonical = gadget_parts()["big"]
    big_ids = set()
    for v in g.vertices():
        turns = provenance[v]
        ox, oy = FRAME * v[0], FRAME * v[1]
        placed = set()
        for c in big_cells_canonical:
            rx, ry = rotate_cell(FRAME, turns, c)
            placed.add((ox + rx, oy + ry))
        ids = {decomp.region_of[c] for c in placed}
        if len(ids) != 1:
            raise CompileError(f"big region of metacell {v} is fragmented")
        rid = ids.pop()
        if decomp.regions[rid] != frozenset(placed):
            raise CompileError(f"big region of metacell {v} leaks outside its frame")
        if rid in big_ids:
            raise CompileError(f"metacell {v} shares a big region with another metacell")
        big_ids.add(rid)

    names = tuple(region_token(rid) for rid in sorted(decomp.regions))
    return AonInstance(width, height, decomp, names, boundary,
                       provenance, frozenset(big_ids))


def verify_aon(inst: AonInstance, loop: LoopPath) -> Verdict:
    loop.check_on_board(inst.width, inst.height)
    on_loop = set(loop.cells)
    decomp = inst.regions
    violations = []

    visited_count = {rid: 0 for rid in decomp.regions}
    for c in loop.cells:
        visited_count[decomp.region_of[c]] += 1

    for rid in sorted(decomp.regions):
        size = len(decomp.regions[rid])
        hit = visited_count[rid]
        name = inst.region_name(rid)
        if 0 < hit < size:
            missing = sorted(decomp.regions[rid] - on_loop)
            violations.append(Violation(
                1, f"region {name} is only partly visited ({hit} of {size} cells)",
                tuple(missing)))
        if hit > 0:
            crossings = boundary_crossings(loop, decomp, rid)
            if crossings not in (0, 2):
                violations.append(Violation(
                    2, f"loop crosses the border of region {name} {crossings} times",
                    tuple(sorted(decomp.regions[rid] & on_loop))))

    unvisited = {rid for rid, hit in visited_count.items() if hit == 0}
    reported = set()
    for x in range(inst.width):
        for y in range(inst.height):
            a = (x, y)
            for b in ((x + 1, y), (x, y + 1)):
                if b[0] >= inst.width or b[1] >= inst.height:
                    continue
                ra, rb = decomp.region_of[a], decomp.region_of[b]
                if ra == rb or ra not in unvisited or rb not in unvisited:
                    continue
                pair = tuple(sorted((ra, rb)))
                if pair in reported:
                    continue
                reported.add(pair)
                violations.append(Violation(
                    3,
                    f"unvisited regions {inst.region_name(ra)} and "
                    f"{inst.region_name(rb)} touch at {a}|{b}",
                    (a, b)))
    return Verdict(tuple(violations))


STATUS_BIG = "big"
STATUS_DEAD_ENCLOSURE = "dead-by-enclosure"
STATUS_DEAD_LEAF_RICH = "dead-by-leaf-rich"
STATUS_UNKNOWN = "unknown"


@dataclass(frozen=True)
class DeadRegionReport:
    status: dict[int, str] = field(compare=False)
    leaf_counts: dict[int, int] = field(compare=False)
    enclosing: dict[int, int] = field(compare=False)

    def dead_ids(self) -> set[int]:
        return {rid for rid, s in self.status.items()
                if s in (STATUS_DEAD_ENCLOSURE, STATUS_DEAD_LEAF_RICH)}


def analyze_dead_regions(inst: AonInstance) -> DeadRegionReport:
    """Classify regions by the two deadness arguments.

    A region with three or more leaves cannot be covered by a single arc.
    A one-cell region whose neighbors all lie in one single other region
    cannot be visited either: passing through it spends two of the host
    region's crossings on top of the two the host needs for its own visit.
    Regions matching neither argument stay "unknown" (or "big" when
    compilation provenance marks them as a metacell's walkable region);
    they are never silently assumed dead.
    """
    decomp = inst.regions
    status = {}
    leaf_counts = {}
    enclosing = {}
    for rid, cells in decomp.regions.items():
        leaf_counts[rid] = len(decomp.leaves[rid])
        outside = set()
        for c in cells:
            for n in orthogonal_neighbors(c):
                if n in decomp.region_of and decomp.region_of[n] != rid:
                    outside.add(decomp.region_of[n])
        if leaf_counts[rid] >= 3:
            status[rid] = STATUS_DEAD_LEAF_RICH
        elif len(cells) == 1 and len(outside) == 1:
            status[rid] = STATUS_DEAD_ENCLOSURE
            enclosing[rid] = next(iter(outside))
        elif inst.big_region_ids and rid in inst.big_region_ids:
            status[rid] = STATUS_BIG
        else:
            status[rid] = STATUS_UNKNOWN
    return DeadRegionReport(status, leaf_counts, enclosing)


class AonLoopRules(LoopConstraint):
    """Incremental region bookkeeping for the loop search.

    Tracks per-region border crossings and coverage along the open path:
    crossing a region border more than twice is fatal, and a region (other
    than the one the path started in) must be fully covered before the path
    leaves it.  Completed loops are re-checked by the full verifier.
    """

    def __init__(self, inst: AonInstance, pre_crossings: dict[int, int] | None = None):
        self.inst = inst
        self.region_of = inst.regions.region_of
        self.sizes = {rid: len(cells) for rid, cells in inst.regions.regions.items()}
        self.crossings = dict.fromkeys(self.sizes, 0)
        if pre_crossings:
            self.crossings.update(pre_crossings)
        self.inside = dict.fromkeys(self.sizes, 0)
        self.visited: set[Cell] = set()
        self.start_region: int | None = None
        self.trail: list[tuple[Cell, int, int | None]] = []

    def push(self, path, cell) -> bool:
        r = self.region_of[cell]
        if not path:
            self.start_region = r
            self.inside[r] += 1
            self.visited.add(cell)
            self.trail.append((cell, r, None))
            return True
        rp = self.region_of[path[-1]]
        crossed = None
        if rp != r:
            if self.crossings[rp] + 1 > 2 or self.crossings[r] + 1 > 2:
                return False
            if rp != self.start_region and self.inside[rp] != self.sizes[rp]:
                return False
            self.crossings[rp] += 1
            self.crossings[r] += 1
            crossed = rp
        self.inside[r] += 1
        self.visited.add(cell)
        self.trail.append((cell, r, crossed))
        return True

    def pop(self):
        cell, r, crossed = self.trail.pop()
        self.inside[r] -= 1
        self.visited.discard(cell)
        if crossed is not None:
            self.crossings[r] -= 1
            self.crossings[crossed] -= 1
        if not self.trail:
            self.start_region = None

    def extra_required(self) -> set[Cell]:
        need: set[Cell] = set()
        for rid, n in self.inside.items():
            if 0 < n < self.sizes[rid]:
                need |= self.inst.regions.regions[rid] - self.visited
        return need

    def close_ok(self, cells) -> bool:
        return verify_aon(self.inst, LoopPath(cells)).ok

    def finish_ok(self, cells) -> bool:
        # open-path variant (pinned gadget traversal): all-or-nothing per region
        return all(n == 0 or n == self.sizes[rid] for rid, n in self.inside.items())


def solve_aon(
    inst: AonInstance,
    mode: str = "first",
    budget: int | None = None,
    cap: int | None = None,
) -> SearchResult:
    """Search for verified loops; dead regions are pre-excluded and regions
    bordering them become mandatory (two adjacent dead regions make the
    instance unsatisfiable outright)."""
    if mode not in ("first", "all"):
        raise ValueError(f"unknown mode: {mode!r}")
    report = analyze_dead_regions(inst)
    dead = report.dead_ids()
    decomp = inst.regions

    required_regions = set()
    for x in range(inst.width):
        for y in range(inst.height):
            a = (x, y)
            for b in ((x + 1, y), (x, y + 1)):
                if b[0] >= inst.width or b[1] >= inst.height:
                    continue
                ra, rb = decomp.region_of[a], decomp.region_of[b]
                if ra == rb:
                    continue
                if ra in dead and rb in dead:
                    return SearchResult([], 0, True)
                if ra in dead:
                    required_regions.add(rb)
                if rb in dead:
                    required_regions.add(ra)

    allowed = [c for c in decomp.region_of if decomp.region_of[c] not in dead]
    required = [c for c in allowed if decomp.region_of[c] in required_regions]
    effective_cap = 1 if mode == "first" else cap
    return search_loops(
        allowed,
        required,
        lambda: AonLoopRules(inst),
        cap=effective_cap,
        budget=budget,
    )
