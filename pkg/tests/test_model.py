import pytest
from hypothesis import given, strategies as st

from loopforge.errors import MalformedLoopError, ParseError
from loopforge.fileio import emit_graph, emit_loop, parse_graph, parse_loop
from loopforge.model import (
    BoundaryEdgeSet,
    HamCycle,
    LoopPath,
    boundary_crossings,
    boundary_edges,
    degree_bounds,
    degree_profile,
    full_grid,
    grid_graph,
    loop_arc_count,
    loop_runs,
    perimeter_boundary,
    polyline_to_boundary,
    regions_from_boundaries,
)

from oracles import all_loops_on_board

LOOPS_3X3 = all_loops_on_board(3, 3)
LOOPS_4X4 = all_loops_on_board(4, 4)
WALLS_4X4 = ([((x, y), (x + 1, y)) for x in range(3) for y in range(4)]
             + [((x, y), (x, y + 1)) for x in range(4) for y in range(3)])

# G from the worked 3x4 construction example: 12 vertices, degrees 2 and 3
GRAPH_3X4_EDGES = [
    ((0, 0), (0, 1)), ((0, 1), (0, 2)), ((0, 2), (0, 3)),
    ((1, 0), (1, 1)), ((1, 1), (1, 2)),
    ((2, 0), (2, 1)), ((2, 2), (2, 3)),
    ((0, 0), (1, 0)), ((0, 3), (1, 3)), ((1, 0), (2, 0)),
    ((1, 1), (2, 1)), ((1, 2), (2, 2)), ((1, 3), (2, 3)),
]


def graph_3x4():
    return grid_graph(3, 4, GRAPH_3X4_EDGES)


class TestGridGraph:
    def test_full_2x2_is_a_square(self):
        g = full_grid(2, 2)
        assert len(g.edges) == 4
        assert all(d == 2 for d in degree_profile(g).values())

    def test_non_unit_edge_rejected(self):
        with pytest.raises(ValueError):
            grid_graph(3, 1, [((0, 0), (2, 0))])

    def test_duplicate_edge_rejected(self):
        with pytest.raises(ValueError):
            grid_graph(2, 2, [((0, 0), (1, 0)), ((1, 0), (0, 0))])

    def test_degree_profile_reports_isolated_vertices(self):
        g = grid_graph(2, 2, [])
        assert set(degree_profile(g).values()) == {0}

    def test_example_graph_degrees(self):
        deg = degree_profile(graph_3x4())
        assert degree_bounds(graph_3x4()) == (2, 3)
        assert len(deg) == 12


class TestGraphFile:
    def test_roundtrip_is_identity(self):
        text = emit_graph(graph_3x4())
        assert emit_graph(parse_graph(text)) == text

    def test_smallest_cycle(self):
        g = parse_graph("grid 2 2\nedge 0 0 1 0\nedge 0 0 0 1\nedge 1 0 1 1\nedge 0 1 1 1\n")
        assert g == full_grid(2, 2)

    def test_comments_and_blanks_skipped(self):
        g = parse_graph("# header\n\ngrid 2 2\n# e\nedge 0 0 1 0\n")
        assert len(g.edges) == 1

    def test_non_unit_edge_names_line(self):
        with pytest.raises(ParseError) as e:
            parse_graph("grid 3 1\nedge 0 0 2 0\n")
        assert e.value.line == 2

    def test_duplicate_edge_rejected(self):
        with pytest.raises(ParseError):
            parse_graph("grid 2 2\nedge 0 0 1 0\nedge 1 0 0 0\n")

    def test_out_of_range_vertex_rejected(self):
        with pytest.raises(ParseError) as e:
            parse_graph("grid 2 2\nedge 0 0 0 2\n")
        assert e.value.line == 2

    def test_trailing_garbage_rejected(self):
        with pytest.raises(ParseError):
            parse_graph("grid 2 2\nedge 0 0 1 0\nwhat is this\n")

    def test_bad_header_rejected(self):
        with pytest.raises(ParseError):
            parse_graph("graph 2 2\n")


class TestLoopFile:
    def test_roundtrip(self):
        loop = LoopPath(((0, 0), (1, 0), (1, 1), (0, 1)))
        assert parse_loop(emit_loop(loop)) == loop

    def test_count_mismatch_rejected(self):
        with pytest.raises(ParseError):
            parse_loop("loop 3\n0 0\n1 0\n")

    def test_repeated_cell_is_malformed(self):
        with pytest.raises(MalformedLoopError):
            parse_loop("loop 4\n0 0\n1 0\n0 0\n0 1\n")

    def test_gap_is_malformed(self):
        with pytest.raises(MalformedLoopError):
            parse_loop("loop 4\n0 0\n1 0\n1 2\n0 1\n")


class TestLoopPath:
    def test_too_short(self):
        with pytest.raises(MalformedLoopError):
            LoopPath(((0, 0), (1, 0), (1, 1)))

    def test_canonical_invariance(self):
        loop = LoopPath(((1, 1), (0, 1), (0, 0), (1, 0)))
        rotated = LoopPath(((0, 0), (1, 0), (1, 1), (0, 1)))
        reversed_ = LoopPath(tuple(reversed(loop.cells)))
        assert loop.canonical() == rotated.canonical() == reversed_.canonical()

    def test_ham_cycle_canonical(self):
        a = HamCycle(((0, 0), (0, 1), (1, 1), (1, 0)))
        b = HamCycle(((1, 1), (0, 1), (0, 0), (1, 0)))
        assert a.canonical() == b.canonical()


class TestRegions:
    def test_no_boundaries_single_region(self):
        r = regions_from_boundaries(2, 2, boundary_edges([]))
        assert r.region_count() == 1
        assert r.leaves[0] == frozenset()

    def test_path_board_has_two_leaves(self):
        r = regions_from_boundaries(1, 3, boundary_edges([]))
        assert r.region_count() == 1
        assert r.leaves[0] == frozenset({(0, 0), (0, 2)})

    def test_wall_splits_board(self):
        b = boundary_edges([((0, y), (1, y)) for y in range(3)])
        r = regions_from_boundaries(2, 3, b)
        assert r.region_count() == 2
        assert r.regions[r.region_of[(0, 0)]] == frozenset({(0, 0), (0, 1), (0, 2)})

    def test_sample_instance_region_sizes(self, aon_fixture):
        sizes = sorted(len(c) for c in aon_fixture.regions.regions.values())
        assert sizes == [1, 2, 4, 5, 5, 8]

    def test_idempotent_under_outer_border(self):
        b = boundary_edges([((1, 0), (1, 1))])
        with_border = b.union(perimeter_boundary(3, 2))
        r1 = regions_from_boundaries(3, 2, b)
        r2 = regions_from_boundaries(3, 2, with_border)
        assert r1.regions == r2.regions

    def test_polyline_decomposition(self):
        pairs = polyline_to_boundary([(1, 0), (1, 2), (0, 2)])
        assert pairs == {
            ((0, 0), (1, 0)), ((0, 1), (1, 1)),  # vertical wall at x=1
            ((0, 1), (0, 2)),  # horizontal wall at y=2
        }


class TestLoopRuns:
    def test_uniform_labels(self):
        loop = LoopPath(((0, 0), (1, 0), (1, 1), (0, 1)))
        assert loop_runs(loop, lambda c: "x") == [("x", 4)]

    def test_alternating_labels(self):
        loop = LoopPath(((0, 0), (1, 0), (1, 1), (0, 1)))
        runs = loop_runs(loop, lambda c: (c[0] + c[1]) % 2)
        assert [length for _, length in runs] == [1, 1, 1, 1]

    def test_sample_solution_runs(self, ww_fixture, ww_fixture_loop):
        runs = loop_runs(ww_fixture_loop, ww_fixture.terrain)
        water = sorted(n for lab, n in runs if lab == "water")
        ground = sorted(n for lab, n in runs if lab == "ground")
        assert water == [1, 2, 2, 2]
        assert ground == [1, 1, 2, 3]

    @given(st.data())
    def test_runs_partition_the_loop(self, data):
        loop = LOOPS_3X3[data.draw(st.integers(0, len(LOOPS_3X3) - 1))]
        labels = data.draw(
            st.lists(st.integers(0, 2), min_size=9, max_size=9))
        grid = {(x, y): labels[3 * y + x] for x in range(3) for y in range(3)}
        runs = loop_runs(loop, grid.__getitem__)
        assert sum(n for _, n in runs) == len(loop)
        if len(runs) > 1:
            for (a, _), (b, _) in zip(runs, runs[1:] + runs[:1]):
                assert a != b


class TestBoundaryCrossings:
    def test_unknown_region_rejected(self):
        r = regions_from_boundaries(2, 2, boundary_edges([]))
        loop = LoopPath(((0, 0), (1, 0), (1, 1), (0, 1)))
        with pytest.raises(ValueError):
            boundary_crossings(loop, r, 99)

    def test_loop_inside_region_crosses_zero(self):
        r = regions_from_boundaries(3, 3, boundary_edges([]))
        loop = LoopPath(((0, 0), (1, 0), (1, 1), (0, 1)))
        assert boundary_crossings(loop, r, 0) == 0

    def test_single_cell_region_crossed_twice(self, aon_fixture, aon_fixture_loop):
        decomp = aon_fixture.regions
        rid = decomp.region_of[(2, 2)]
        assert len(decomp.regions[rid]) == 1
        assert boundary_crossings(aon_fixture_loop, decomp, rid) == 2

    @given(st.data())
    def test_crossings_always_even(self, data):
        loop = LOOPS_4X4[data.draw(st.integers(0, len(LOOPS_4X4) - 1))]
        walls = data.draw(st.sets(st.sampled_from(WALLS_4X4), max_size=10))
        r = regions_from_boundaries(4, 4, boundary_edges(walls))
        for rid in r.regions:
            assert boundary_crossings(loop, r, rid) % 2 == 0

    @given(st.data())
    def test_arc_count_matches_crossings(self, data):
        # one contiguous arc <=> 0 or 2 border crossings; k arcs <=> 2k
        # crossings unless the loop never leaves the region
        loop = LOOPS_4X4[data.draw(st.integers(0, len(LOOPS_4X4) - 1))]
        walls = data.draw(st.sets(st.sampled_from(WALLS_4X4), max_size=10))
        r = regions_from_boundaries(4, 4, boundary_edges(walls))
        for rid in r.regions:
            crossings = boundary_crossings(loop, r, rid)
            arcs = loop_arc_count(loop, r, rid)
            inside = sum(1 for c in loop.cells if r.region_of[c] == rid)
            if inside == len(loop):
                assert crossings == 0 and arcs == 1
            else:
                assert crossings == 2 * arcs
            assert (arcs <= 1) == (crossings in (0, 2))


class TestBoundaryEdgeSet:
    def test_rejects_non_adjacent_pair(self):
        with pytest.raises(ValueError):
            BoundaryEdgeSet(frozenset({((0, 0), (2, 0))}))

    def test_blocks_is_symmetric(self):
        b = boundary_edges([((0, 0), (1, 0))])
        assert b.blocks((0, 0), (1, 0)) and b.blocks((1, 0), (0, 0))
