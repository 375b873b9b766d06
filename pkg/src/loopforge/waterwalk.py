"""Water Walk: terrain boards, rule checking, metacell compilation, solving.

Rules enforced by the verifier:

1. the loop passes through every numbered cell;
2. the maximal run of consecutive ground cells (along the loop) containing
   a numbered cell has length exactly that number;
3. the loop never passes through three consecutive water cells.

Runs are cyclic, so wrap-around runs count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CompileError, ParseError
from .framework import DIRECTION_ORDER, Direction, ExitPlan, rotate_cell, turns_between
from .model import (
    Cell,
    GridGraph,
    LoopPath,
    Verdict,
    Violation,
    loop_runs_with_cells,
    orthogonal_neighbors,
)
from .loopsearch import LoopConstraint, SearchResult, search_loops

GROUND = "ground"
WATER = "water"

FRAME = 5

# Canonical gadget: non-exit side W; a 4-cell ground cluster with a single
# "3" clue, everything else water.  Exit border cells sit on the midline of
# their side (index 2), one step outside the ground cluster.
GADGET_GROUND = frozenset({(2, 1), (2, 2), (2, 3), (3, 2)})
GADGET_NUMBERS = {(2, 2): 3}
GADGET_NON_EXIT = Direction.W
GADGET_EXIT_CELLS = {
    Direction.S: (2, 0),
    Direction.N: (2, 4),
    Direction.E: (4, 2),
}

# Local traversals between exit border cells, complete per pair: two ways
# between adjacent sides, three between the opposite pair.
GADGET_PATHS: dict[frozenset[Direction], tuple[tuple[Cell, ...], ...]] = {
    frozenset({Direction.S, Direction.E}): (
        ((2, 0), (2, 1), (2, 2), (3, 2), (4, 2)),
        ((2, 0), (2, 1), (2, 2), (2, 3), (3, 3), (3, 2), (4, 2)),
    ),
    frozenset({Direction.N, Direction.E}): (
        ((2, 4), (2, 3), (2, 2), (3, 2), (4, 2)),
        ((2, 4), (2, 3), (2, 2), (2, 1), (3, 1), (3, 2), (4, 2)),
    ),
    frozenset({Direction.S, Direction.N}): (
        ((2, 0), (2, 1), (2, 2), (2, 3), (2, 4)),
        ((2, 0), (2, 1), (3, 1), (3, 2), (2, 2), (2, 3), (2, 4)),
        ((2, 0), (2, 1), (2, 2), (3, 2), (3, 3), (2, 3), (2, 4)),
    ),
}


@dataclass(frozen=True, eq=False)
class WwInstance:
    width: int
    height: int
    ground: frozenset[Cell]
    numbers: dict[Cell, int]
    provenance: dict[tuple[int, int], int] | None = field(default=None, compare=False)

    def __eq__(self, other):
        if not isinstance(other, WwInstance):
            return NotImplemented
        return (self.width, self.height, self.ground, self.numbers) == \
            (other.width, other.height, other.ground, other.numbers)

    def __post_init__(self):
        for c in self.ground:
            if not self.on_board(c):
                raise ValueError(f"ground cell {c} off the board")
        for c, n in self.numbers.items():
            if c not in self.ground:
                raise ValueError(f"number on water cell {c}")
            if not 1 <= n <= 9:
                raise ValueError(f"number out of range at {c}: {n}")

    def on_board(self, c: Cell) -> bool:
        return 0 <= c[0] < self.width and 0 <= c[1] < self.height

    def terrain(self, c: Cell) -> str:
        return GROUND if c in self.ground else WATER


def parse_ww(text: str) -> WwInstance:
    lines = [(i, raw) for i, raw in enumerate(text.splitlines(), start=1)
             if raw.strip() and not raw.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty instance file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "ww":
        raise ParseError(f"expected 'ww <width> <height>', got {header.strip()!r}", lineno)
    try:
        width, height = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError("width/height must be integers", lineno) from None
    rows = lines[1:]
    if len(rows) != height:
        raise ParseError(f"expected {height} rows, got {len(rows)}")
    ground = set()
    numbers = {}
    for k, (lineno, raw) in enumerate(rows):
        row = raw.strip()
        y = height - 1 - k
        if len(row) != width:
            raise ParseError(f"row has {len(row)} cells, expected {width}", lineno)
        for x, ch in enumerate(row):
            if ch == "~":
                continue
            if ch == ".":
                ground.add((x, y))
            elif ch.isdigit() and ch != "0":
                ground.add((x, y))
                numbers[(x, y)] = int(ch)
            else:
                raise ParseError(f"unknown terrain character {ch!r}", lineno)
    return WwInstance(width, height, frozenset(ground), numbers)


def emit_ww(inst: WwInstance) -> str:
    lines = [f"ww {inst.width} {inst.height}"]
    for y in range(inst.height - 1, -1, -1):
        row = []
        for x in range(inst.width):
            c = (x, y)
            if c in inst.numbers:
                row.append(str(inst.numbers[c]))
            elif c in inst.ground:
                row.append(".")
            else:
                row.append("~")
        lines.append("".join(row))
    return "\n".join(lines) + "\n"


def gadget_turns(plan: ExitPlan, v) -> int:
    return turns_between(GADGET_NON_EXIT, plan.non_exit(v))


def gadget_exit_cell(side: Direction, turns: int) -> Cell:
    """Border cell of the rotated gadget's exit on ``side``."""
    canonical = side.rotated(-turns)
    return rotate_cell(FRAME, turns, GADGET_EXIT_CELLS[canonical])


def compile_ww(g: GridGraph, plan: ExitPlan) -> WwInstance:
    """Tile one rotated gadget per vertex on a 5x5-per-metacell board."""
    if plan.graph != g:
        raise CompileError("exit plan was built for a different graph")
    width, height = FRAME * g.cols, FRAME * g.rows
    ground = set()
    numbers = {}
    provenance = {}
    for v in g.vertices():
        turns = gadget_turns(plan, v)
        provenance[v] = turns
        ox, oy = FRAME * v[0], FRAME * v[1]
        for c in GADGET_GROUND:
            rx, ry = rotate_cell(FRAME, turns, c)
            ground.add((ox + rx, oy + ry))
        for c, n in GADGET_NUMBERS.items():
            rx, ry = rotate_cell(FRAME, turns, c)
            numbers[(ox + rx, oy + ry)] = n
        for side in plan.exits(v):
            ex, ey = gadget_exit_cell(side, turns)
            mid = FRAME // 2
            if side in (Direction.N, Direction.S):
                assert ex == mid, f"exit cell off midline at {v} side {side}"
            else:
                assert ey == mid, f"exit cell off midline at {v} side {side}"
    inst = WwInstance(width, height, frozenset(ground), numbers, provenance)

    # every graph edge must cross two water border cells flanked by ground
    for u, w in sorted(g.edges):
        d = _direction(u, w)
        bu = _global_exit_cell(inst, u, d)
        bw = _global_exit_cell(inst, w, d.opposite())
        if abs(bu[0] - bw[0]) + abs(bu[1] - bw[1]) != 1:
            raise CompileError(f"exit cells misaligned across {u}-{w}")
        for border, inward_dir in ((bu, d.opposite()), (bw, d)):
            if inst.terrain(border) != WATER:
                raise CompileError(f"border cell {border} is not water")
            inward = (border[0] + inward_dir.dx, border[1] + inward_dir.dy)
            if inst.terrain(inward) != GROUND:
                raise CompileError(f"crossing at {border} has no ground at {inward}")
    return inst


def _direction(u, w) -> Direction:
    delta = (w[0] - u[0], w[1] - u[1])
    for d in DIRECTION_ORDER:
        if d.value == delta:
            return d
    raise CompileError(f"{u} and {w} are not adjacent")


def _global_exit_cell(inst: WwInstance, v, side: Direction) -> Cell:
    turns = inst.provenance[v]
    ex, ey = gadget_exit_cell(side, turns)
    return (FRAME * v[0] + ex, FRAME * v[1] + ey)


def verify_ww(inst: WwInstance, loop: LoopPath) -> Verdict:
    loop.check_on_board(inst.width, inst.height)
    violations = []
    on_loop = set(loop.cells)

    for c in sorted(inst.numbers):
        if c not in on_loop:
            violations.append(Violation(1, f"numbered cell {c} is not on the loop", (c,)))

    runs = loop_runs_with_cells(loop, inst.terrain)
    for label, cells in runs:
        if label == GROUND:
            numbered = [c for c in cells if c in inst.numbers]
            for c in numbered:
                n = inst.numbers[c]
                if len(cells) != n:
                    violations.append(Violation(
                        2,
                        f"ground run through {c} has length {len(cells)}, clue says {n}",
                        tuple(cells),
                    ))
        else:
            if len(cells) >= 3:
                violations.append(Violation(
                    3,
                    f"loop passes {len(cells)} consecutive water cells starting {cells[0]}",
                    tuple(cells),
                ))
    return Verdict(tuple(violations))


class WwLoopRules(LoopConstraint):
    """Incremental prunes for the loop search: no water triples, and no
    ground run already longer than a clue it contains.  Interior runs are
    checked exactly when they get sealed by water; runs touching the path
    start are left to the final verification."""

    def __init__(self, inst: WwInstance):
        self.inst = inst
        # stack of (run_len, run_min, run_max, run_start) for the current
        # ground run, or None when the head is water
        self.run_stack: list[tuple[int, int, int, int] | None] = []

    def push(self, path, cell) -> bool:
        inst = self.inst
        is_ground = cell in inst.ground
        prev_run = self.run_stack[-1] if self.run_stack else None

        if not is_ground:
            if len(path) >= 2 and path[-1] not in inst.ground and path[-2] not in inst.ground:
                return False
            if prev_run is not None:
                run_len, run_min, run_max, run_start = prev_run
                if run_min <= 9 and run_start > 0:  # sealed interior run with a clue
                    if not (run_min == run_max == run_len):
                        return False
            self.run_stack.append(None)
            return True

        if prev_run is None:
            n = inst.numbers.get(cell)
            entry = (1, n if n else 10, n if n else 0, len(path))
        else:
            run_len, run_min, run_max, run_start = prev_run
            n = inst.numbers.get(cell)
            run_len += 1
            if n:
                run_min = min(run_min, n)
                run_max = max(run_max, n)
            entry = (run_len, run_min, run_max, run_start)
        if entry[1] <= 9 and entry[0] > entry[1]:  # longer than its smallest clue
            return False
        self.run_stack.append(entry)
        return True

    def pop(self):
        self.run_stack.pop()

    def close_ok(self, cells) -> bool:
        return verify_ww(self.inst, LoopPath(cells)).ok


def solve_ww(
    inst: WwInstance,
    mode: str = "first",
    budget: int | None = None,
    cap: int | None = None,
) -> SearchResult:
    """Search for verified loops.  ``mode`` is "first" or "all"; "all" may be
    capped.  The result's ``exhausted`` flag reports whether the search space
    was fully covered (meaningful for empty results and exact counts)."""
    if mode not in ("first", "all"):
        raise ValueError(f"unknown mode: {mode!r}")
    # a water run is at most 2 long, so every water cell on a loop has a
    # ground loop-neighbor; cells with no adjacent ground can never be used
    cells = [
        (x, y)
        for x in range(inst.width)
        for y in range(inst.height)
        if (x, y) in inst.ground
        or any(n in inst.ground for n in orthogonal_neighbors((x, y)))
    ]
    effective_cap = 1 if mode == "first" else cap
    return search_loops(
        cells,
        sorted(inst.numbers),
        lambda: WwLoopRules(inst),
        cap=effective_cap,
        budget=budget,
    )
