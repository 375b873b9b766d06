import random

import pytest

from loopforge.framework import (
    Direction,
    HalfEdge,
    build_complement,
    emit_exit_plan,
    mutual_facing_holds,
    orient_complement,
    plan_for,
    rotate_cell,
    rotate_corner,
    turns_between,
)
from loopforge.hamilton import enumerate_candidate_subgraphs, random_candidate_subgraph
from loopforge.model import degree_profile, full_grid, grid_graph

from test_model import graph_3x4


class TestDirections:
    def test_quarter_turn_cycle(self):
        assert Direction.N.rotated(1) is Direction.W
        assert Direction.W.rotated(1) is Direction.S
        assert Direction.S.rotated(1) is Direction.E
        assert Direction.E.rotated(1) is Direction.N

    def test_full_turn_identity(self):
        for d in Direction:
            assert d.rotated(4) is d

    def test_turns_between(self):
        assert turns_between(Direction.S, Direction.W) == 3
        assert turns_between(Direction.S, Direction.S) == 0


class TestRotation:
    def test_cell_quarter_turn(self):
        assert rotate_cell(11, 1, (0, 5)) == (5, 0)

    def test_cell_half_turn(self):
        assert rotate_cell(5, 2, (2, 0)) == (2, 4)

    def test_corner_quarter_turn(self):
        assert rotate_corner(11, 1, (0, 4)) == (7, 0)

    def test_three_turns_equal_composition(self):
        for cell in [(0, 0), (3, 7), (10, 10), (5, 2)]:
            once = rotate_cell(11, 1, cell)
            twice = rotate_cell(11, 1, once)
            assert rotate_cell(11, 3, cell) == rotate_cell(11, 1, twice)

    def test_out_of_frame_rejected(self):
        with pytest.raises(ValueError):
            rotate_cell(5, 1, (5, 0))


class TestComplement:
    def test_interior_degree2_vertex_has_two_incidences(self):
        # 2x3 ring: middle vertices have degree 2 with one grid non-edge
        g = grid_graph(2, 3, [((0, 0), (1, 0)), ((0, 0), (0, 1)), ((1, 0), (1, 1)),
                              ((0, 1), (0, 2)), ((1, 1), (1, 2)), ((0, 2), (1, 2))])
        h = build_complement(g)
        assert len(h.incidences((0, 1))) == 2
        assert ((0, 1), (1, 1)) in h.internal_edges

    def test_corner_degree2_has_two_half_edges(self):
        h = build_complement(full_grid(2, 2))
        assert h.internal_edges == frozenset()
        assert {he for he in h.half_edges if he.vertex == (0, 0)} == {
            HalfEdge((0, 0), Direction.S), HalfEdge((0, 0), Direction.W)}

    def test_example_graph_internal_edges(self):
        h = build_complement(graph_3x4())
        assert h.internal_edges == frozenset({
            ((0, 1), (1, 1)), ((0, 2), (1, 2)), ((1, 2), (1, 3)), ((2, 1), (2, 2)),
        })
        assert len(h.half_edges) == 14

    def test_incidence_count_is_four_minus_degree(self):
        g = graph_3x4()
        h = build_complement(g)
        deg = degree_profile(g)
        for v in g.vertices():
            assert len(h.incidences(v)) == 4 - deg[v]

    def test_degree_out_of_range_names_vertex(self):
        g = grid_graph(2, 2, [((0, 0), (1, 0)), ((0, 0), (0, 1)), ((1, 0), (1, 1))])
        with pytest.raises(ValueError, match=r"\(0, 1\)"):
            build_complement(g)


class TestOrientation:
    def test_degree_bounds_hold(self):
        for dims in [(2, 2), (2, 3), (3, 3)]:
            for g in enumerate_candidate_subgraphs(*dims):
                h = build_complement(g)
                o = orient_complement(h)
                for v in g.vertices():
                    assert o.indegree(v) <= 1 and o.outdegree(v) <= 1
                    if len(h.incidences(v)) == 2:
                        assert o.outdegree(v) == 1

    def test_deterministic(self):
        g = graph_3x4()
        h = build_complement(g)
        a = orient_complement(h)
        b = orient_complement(h)
        assert a.edge_heads == b.edge_heads and a.half_out == b.half_out

    def test_seed_rules_differ_but_both_valid(self):
        g = graph_3x4()
        h = build_complement(g)
        lex = orient_complement(h, "lex")
        anti = orient_complement(h, "antilex")
        assert lex.edge_heads != anti.edge_heads or lex.half_out != anti.half_out
        for o in (lex, anti):
            for v in g.vertices():
                assert o.indegree(v) <= 1 and o.outdegree(v) <= 1

    def test_unknown_seed_rule_rejected(self):
        with pytest.raises(ValueError):
            orient_complement(build_complement(full_grid(2, 2)), "random")

    def test_every_incidence_oriented_exactly_once(self):
        for dims in [(2, 2), (2, 3), (3, 3)]:
            for g in enumerate_candidate_subgraphs(*dims):
                h = build_complement(g)
                o = orient_complement(h)
                assert set(o.edge_heads) == set(h.internal_edges)
                assert set(o.half_out) == set(h.half_edges)

    def test_path_component_walks_from_smaller_end(self):
        # the 2x3 ring's complement is one path: half-edge, (0,1), (1,1),
        # half-edge; the lex rule walks it from the smaller end
        ring = grid_graph(2, 3, [((0, 0), (1, 0)), ((0, 0), (0, 1)), ((1, 0), (1, 1)),
                                 ((0, 1), (0, 2)), ((1, 1), (1, 2)), ((0, 2), (1, 2))])
        o = orient_complement(build_complement(ring), "lex")
        assert o.edge_heads[((0, 1), (1, 1))] == (1, 1)
        anti = orient_complement(build_complement(ring), "antilex")
        assert anti.edge_heads[((0, 1), (1, 1))] == (0, 1)


class TestExitPlan:
    def test_degree3_exits_forced(self):
        g = graph_3x4()
        plan = plan_for(g)
        assert plan.exits((1, 0)) == frozenset({Direction.W, Direction.E, Direction.N})
        assert plan.non_exit((1, 0)) is Direction.S

    def test_every_vertex_has_three_exits(self):
        for g in enumerate_candidate_subgraphs(2, 3):
            plan = plan_for(g)
            for v in g.vertices():
                assert len(plan.exits(v)) == 3

    def test_square_corner_exits(self):
        plan = plan_for(full_grid(2, 2))
        exits = plan.exits((0, 0))
        assert Direction.N in exits and Direction.E in exits
        assert plan.non_exit((0, 0)) in (Direction.S, Direction.W)

    @pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3)])
    def test_mutual_facing_on_all_candidates(self, dims):
        for g in enumerate_candidate_subgraphs(*dims):
            for rule in ("lex", "antilex"):
                assert mutual_facing_holds(g, plan_for(g, rule))

    def test_mutual_facing_on_random_instances(self):
        rng = random.Random(2024)
        for _ in range(60):
            cols = rng.randint(2, 6)
            rows = rng.randint(2, 6)
            g = random_candidate_subgraph(cols, rows, rng)
            assert mutual_facing_holds(g, plan_for(g))

    def test_dump_format(self):
        plan = plan_for(full_grid(2, 2))
        dump = emit_exit_plan(plan)
        lines = dump.strip().splitlines()
        assert len(lines) == 4
        for line in lines:
            parts = line.split()
            assert parts[0] == "vertex" and parts[3] == "exits" and parts[5] == "rot"
            assert int(parts[6]) in (0, 90, 180, 270)
