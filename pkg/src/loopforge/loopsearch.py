"""Exhaustive enumeration of loops and pinned-end paths on cell boards.

The search extends a simple path cell by cell.  Loops are deduplicated by
rooting each one at its lexicographically smallest cell and fixing the
direction (second cell smaller than last), so the emitted order is
canonical and deterministic.  Puzzle rules plug in as a constraint object;
its incremental checks may only prune provably invalid extensions, the
final ``close_ok``/``finish_ok`` verdict is authoritative.

Pruning: per node the search checks connectivity of the remaining cells,
availability of two usable neighbors for every still-required cell, and,
when every allowed cell is required (exact cover), the two-coloring budget
that an alternating path over the remaining cells must meet.  All prunes
reject only provably dead branches, so a completed search is exhaustive.

Budgets are counted in search nodes (one per path extension considered);
running out raises :class:`SearchBudgetExceeded`, which callers must treat
as "no verdict", never as "no solution".
"""

from __future__ import annotations

import sys
from typing import Callable, Iterable

from .errors import SearchBudgetExceeded
from .model import Cell, LoopPath, orthogonal_neighbors


class LoopConstraint:
    """Base: no puzzle rules.  Subclasses override the hooks they need.

    ``push`` is called before a cell is committed and must leave internal
    state untouched when it returns False; on True the engine will balance
    it with exactly one ``pop``.
    """

    def push(self, path: list[Cell], cell: Cell) -> bool:
        return True

    def pop(self) -> None:
        pass

    def extra_required(self) -> set[Cell]:
        """Cells that have become mandatory given the current prefix."""
        return set()

    def close_ok(self, cells: tuple[Cell, ...]) -> bool:
        return True

    def finish_ok(self, cells: tuple[Cell, ...]) -> bool:
        return True


class _Stop(Exception):
    pass


class SearchResult:
    def __init__(self, loops, nodes, exhausted):
        self.loops = loops
        self.nodes = nodes
        self.exhausted = exhausted  # True when the whole space was covered

    def __repr__(self):
        return (f"SearchResult({len(self.loops)} found, nodes={self.nodes}, "
                f"exhausted={self.exhausted})")


def _ensure_recursion_room(depth: int):
    need = depth * 3 + 200
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


class _Grid:
    """Integer-indexed view of the usable cells."""

    def __init__(self, cells: list[Cell]):
        self.cells = cells
        self.index = {c: i for i, c in enumerate(cells)}
        self.nbrs = [
            tuple(self.index[w] for w in orthogonal_neighbors(c) if w in self.index)
            for c in cells
        ]
        self.color = [(c[0] + c[1]) & 1 for c in cells]


def search_loops(
    allowed: Iterable[Cell],
    required: Iterable[Cell],
    make_constraint: Callable[[], LoopConstraint],
    *,
    cap: int | None = None,
    budget: int | None = None,
) -> SearchResult:
    """Enumerate loops over ``allowed`` cells that visit every ``required``
    cell and satisfy the constraint.  Stops early once ``cap`` loops are
    found (result marked non-exhausted)."""
    allowed_sorted = sorted(set(allowed))
    required_set = set(required)
    if required_set - set(allowed_sorted):
        return SearchResult([], 0, True)
    _ensure_recursion_room(len(allowed_sorted))

    anchors = allowed_sorted
    if required_set:
        limit = min(required_set)
        anchors = [a for a in anchors if a <= limit]

    results: list[LoopPath] = []
    nodes = 0

    for anchor in anchors:
        usable = [c for c in allowed_sorted if c >= anchor]
        grid = _Grid(usable)
        n = len(usable)
        nbrs, color, cells = grid.nbrs, grid.color, grid.cells
        req = bytearray(n)
        for c in required_set:
            req[grid.index[c]] = 1
        exact = all(req)
        req_idx = [i for i in range(n) if req[i]]
        a_idx = grid.index[anchor]
        anchor_color = color[a_idx]
        adj_anchor = bytearray(n)
        for i in nbrs[a_idx]:
            adj_anchor[i] = 1

        constraint = make_constraint()
        if not constraint.push([], anchor):
            continue
        on = bytearray(n)
        on[a_idx] = 1
        free_color = [0, 0]
        for i in range(n):
            if not on[i]:
                free_color[color[i]] += 1
        pending_req = sum(1 for i in req_idx if not on[i])
        path_idx = [a_idx]
        path_cells = [anchor]
        stamp = [0] * n
        gen = 0

        def viable(head: int) -> bool:
            nonlocal gen
            free_total = free_color[0] + free_color[1]
            if exact and free_total:
                sc = 1 - color[head]
                if free_color[sc] != (free_total + 1) // 2:
                    return False
                last_color = sc if free_total & 1 else 1 - sc
                if last_color != 1 - anchor_color:
                    return False
            extra = None if exact else constraint.extra_required()
            # connectivity of the remaining cells from the head
            gen += 1
            g = gen
            stack = []
            reached = 0
            for w in nbrs[head]:
                if not on[w] and stamp[w] != g:
                    stamp[w] = g
                    reached += 1
                    stack.append(w)
            while stack:
                c = stack.pop()
                for w in nbrs[c]:
                    if not on[w] and stamp[w] != g:
                        stamp[w] = g
                        reached += 1
                        stack.append(w)
            if exact:
                if reached != free_total:
                    return False
            else:
                for i in req_idx:
                    if not on[i] and stamp[i] != g:
                        return False
                for c in extra:
                    i = grid.index.get(c)
                    if i is None:
                        return False
                    if not on[i] and stamp[i] != g:
                        return False
            # the loop's final cell must neighbor the anchor
            if not adj_anchor[head]:
                ok = False
                for w in nbrs[a_idx]:
                    if not on[w] and stamp[w] == g:
                        ok = True
                        break
                if not ok:
                    return False
            # every pending cell still needs two usable loop neighbors
            if exact:
                if len(path_idx) >= 2:
                    prev = path_idx[-2]
                    for w in nbrs[prev]:
                        if on[w]:
                            continue
                        avail = 0
                        for x in nbrs[w]:
                            if not on[x] or x == head or x == a_idx:
                                avail += 1
                        if avail < 2:
                            return False
            else:
                check = [i for i in req_idx if not on[i]]
                if extra:
                    for c in extra:
                        i = grid.index.get(c)
                        if i is not None and not on[i]:
                            check.append(i)
                for w in check:
                    avail = 0
                    for x in nbrs[w]:
                        if not on[x] or x == head or x == a_idx:
                            avail += 1
                    if avail < 2:
                        return False
            return True

        def extend(head: int):
            nonlocal nodes, pending_req
            nodes += 1
            if budget is not None and nodes > budget:
                raise SearchBudgetExceeded(nodes)
            if len(path_idx) >= 4 and adj_anchor[head] and path_cells[1] < path_cells[-1]:
                if pending_req == 0 and (exact or not constraint.extra_required()):
                    if constraint.close_ok(tuple(path_cells)):
                        results.append(LoopPath(tuple(path_cells)))
                        if cap is not None and len(results) >= cap:
                            raise _Stop
            if not viable(head):
                return
            for w in nbrs[head]:
                if on[w]:
                    continue
                cell = cells[w]
                if not constraint.push(path_cells, cell):
                    continue
                on[w] = 1
                free_color[color[w]] -= 1
                pending_req -= req[w]
                path_idx.append(w)
                path_cells.append(cell)
                extend(w)
                path_idx.pop()
                path_cells.pop()
                on[w] = 0
                free_color[color[w]] += 1
                pending_req += req[w]
                constraint.pop()

        try:
            extend(a_idx)
        except _Stop:
            constraint.pop()
            return SearchResult(results, nodes, False)
        constraint.pop()

    return SearchResult(results, nodes, True)


def search_paths(
    allowed: Iterable[Cell],
    start: Cell,
    goal: Cell,
    required: Iterable[Cell],
    make_constraint: Callable[[], LoopConstraint],
    *,
    cap: int | None = None,
    budget: int | None = None,
) -> SearchResult:
    """Enumerate simple paths from ``start`` to ``goal`` over ``allowed``
    cells covering every ``required`` cell.  The goal cell is terminal: a
    path may not pass through it and continue."""
    allowed_sorted = sorted(set(allowed))
    allowed_set = set(allowed_sorted)
    if start not in allowed_set or goal not in allowed_set or start == goal:
        raise ValueError("start/goal must be distinct allowed cells")
    required_set = set(required)
    if required_set - allowed_set:
        return SearchResult([], 0, True)
    _ensure_recursion_room(len(allowed_sorted))

    grid = _Grid(allowed_sorted)
    n = len(allowed_sorted)
    nbrs, color, cells = grid.nbrs, grid.color, grid.cells
    req = bytearray(n)
    for c in required_set:
        req[grid.index[c]] = 1
    exact = all(req)
    req_idx = [i for i in range(n) if req[i]]
    s_idx, g_idx = grid.index[start], grid.index[goal]
    goal_color = color[g_idx]

    constraint = make_constraint()
    if not constraint.push([], start):
        return SearchResult([], 0, True)
    on = bytearray(n)
    on[s_idx] = 1
    free_color = [0, 0]
    for i in range(n):
        if not on[i]:
            free_color[color[i]] += 1
    pending_req = sum(1 for i in req_idx if not on[i])
    path_idx = [s_idx]
    path_cells = [start]
    stamp = [0] * n
    gen = 0
    results: list[tuple[Cell, ...]] = []
    nodes = 0

    def viable(head: int) -> bool:
        nonlocal gen
        free_total = free_color[0] + free_color[1]
        if exact and free_total:
            sc = 1 - color[head]
            if free_color[sc] != (free_total + 1) // 2:
                return False
            last_color = sc if free_total & 1 else 1 - sc
            if last_color != goal_color:
                return False
        extra = None if exact else constraint.extra_required()
        gen += 1
        g = gen
        stack = []
        reached = 0
        for w in nbrs[head]:
            if not on[w] and stamp[w] != g:
                stamp[w] = g
                reached += 1
                stack.append(w)
        while stack:
            c = stack.pop()
            for w in nbrs[c]:
                if not on[w] and stamp[w] != g:
                    stamp[w] = g
                    reached += 1
                    stack.append(w)
        if exact:
            if reached != free_total:
                return False
        else:
            if stamp[g_idx] != g:
                return False
            for i in req_idx:
                if not on[i] and stamp[i] != g:
                    return False
            for c in extra:
                i = grid.index.get(c)
                if i is None:
                    return False
                if not on[i] and stamp[i] != g:
                    return False
        if exact:
            if len(path_idx) >= 2:
                prev = path_idx[-2]
                for w in nbrs[prev]:
                    if on[w] or w == g_idx:
                        continue
                    avail = 0
                    for x in nbrs[w]:
                        if not on[x] or x == head:
                            avail += 1
                    if avail < 2:
                        return False
        else:
            for w in req_idx:
                if on[w] or w == g_idx:
                    continue
                avail = 0
                for x in nbrs[w]:
                    if not on[x] or x == head:
                        avail += 1
                if avail < 2:
                    return False
        return True

    def extend(head: int):
        nonlocal nodes, pending_req
        nodes += 1
        if budget is not None and nodes > budget:
            raise SearchBudgetExceeded(nodes)
        if head == g_idx:
            if pending_req == 0 and (exact or not constraint.extra_required()):
                if constraint.finish_ok(tuple(path_cells)):
                    results.append(tuple(path_cells))
                    if cap is not None and len(results) >= cap:
                        raise _Stop
            return
        if not viable(head):
            return
        for w in nbrs[head]:
            if on[w]:
                continue
            cell = cells[w]
            if not constraint.push(path_cells, cell):
                continue
            on[w] = 1
            free_color[color[w]] -= 1
            pending_req -= req[w]
            path_idx.append(w)
            path_cells.append(cell)
            extend(w)
            path_idx.pop()
            path_cells.pop()
            on[w] = 0
            free_color[color[w]] += 1
            pending_req += req[w]
            constraint.pop()

    try:
        extend(s_idx)
    except _Stop:
        constraint.pop()
        return SearchResult(results, nodes, False)
    constraint.pop()
    return SearchResult(results, nodes, True)
