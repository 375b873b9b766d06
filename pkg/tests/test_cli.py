import pytest

from loopforge.cli import main
from loopforge.fileio import emit_graph, parse_graph, parse_loop
from loopforge.framework import plan_for
from loopforge.model import full_grid
from loopforge.render import render_ascii, render_svg
from loopforge.waterwalk import compile_ww, parse_ww, verify_ww


@pytest.fixture
def square_graph_file(tmp_path):
    path = tmp_path / "g.graph"
    path.write_text(emit_graph(full_grid(2, 2)))
    return path


class TestExitCodes:
    def test_verify_accepts_sample(self, data_dir):
        code = main(["verify", "--puzzle", "ww",
                     "--in", str(data_dir / "sample_ww.txt"),
                     "--loop", str(data_dir / "sample_ww_loop.txt")])
        assert code == 0

    def test_verify_rejects_wrong_loop(self, data_dir, tmp_path):
        bad = tmp_path / "bad.loop"
        bad.write_text("loop 4\n0 0\n1 0\n1 1\n0 1\n")
        code = main(["verify", "--puzzle", "ww",
                     "--in", str(data_dir / "sample_ww.txt"),
                     "--loop", str(bad)])
        assert code == 1

    def test_malformed_loop_is_input_error(self, data_dir, tmp_path):
        bad = tmp_path / "bad.loop"
        bad.write_text("loop 4\n0 0\n1 0\n0 0\n0 1\n")
        code = main(["verify", "--puzzle", "ww",
                     "--in", str(data_dir / "sample_ww.txt"),
                     "--loop", str(bad)])
        assert code == 3

    def test_missing_file_is_input_error(self, tmp_path):
        code = main(["verify", "--puzzle", "ww",
                     "--in", str(tmp_path / "nope.txt"),
                     "--loop", str(tmp_path / "nope.loop")])
        assert code == 3

    def test_budget_exhaustion_code(self, square_graph_file, tmp_path):
        inst = tmp_path / "w.inst"
        assert main(["compile", "--puzzle", "ww", "--in", str(square_graph_file),
                     "--out", str(inst)]) == 0
        code = main(["solve", "--puzzle", "ww", "--in", str(inst),
                     "--budget", "3", "--out", str(tmp_path / "w.loop")])
        assert code == 2

    def test_unsatisfiable_code(self, tmp_path):
        inst = tmp_path / "w.inst"
        inst.write_text("ww 3 3\n~~~\n~1~\n~~~\n")
        code = main(["solve", "--puzzle", "ww", "--in", str(inst),
                     "--out", str(tmp_path / "w.loop")])
        assert code == 1


class TestPipelines:
    def test_gen_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a.graph", tmp_path / "b.graph"
        assert main(["gen", "--rows", "3", "--cols", "4", "--seed", "9",
                     "--out", str(a)]) == 0
        assert main(["gen", "--rows", "3", "--cols", "4", "--seed", "9",
                     "--out", str(b)]) == 0
        assert a.read_text() == b.read_text()

    def test_gen_square_forced(self, tmp_path):
        out = tmp_path / "g.graph"
        assert main(["gen", "--rows", "2", "--cols", "2", "--seed", "1",
                     "--out", str(out)]) == 0
        assert parse_graph(out.read_text()) == full_grid(2, 2)

    def test_gen_count_many_valid(self, tmp_path):
        from loopforge.model import degree_profile

        out = tmp_path / "g"
        assert main(["gen", "--rows", "3", "--cols", "3", "--seed", "7",
                     "--count", "5", "--out", str(out)]) == 0
        for i in range(5):
            g = parse_graph((tmp_path / f"g.{i}").read_text())
            assert all(d in (2, 3) for d in degree_profile(g).values())

    def test_ham_finds_cycle(self, square_graph_file, tmp_path):
        out = tmp_path / "c.loop"
        assert main(["ham", "--in", str(square_graph_file), "--out", str(out)]) == 0
        cycle = parse_loop(out.read_text())
        assert len(cycle.cells) == 4

    def test_ham_reports_none(self, tmp_path):
        g = tmp_path / "g.graph"
        g.write_text(emit_graph(full_grid(3, 3)))
        assert main(["ham", "--in", str(g), "--out", str(tmp_path / "c.loop")]) == 1

    def test_full_pipeline_matches_library(self, square_graph_file, tmp_path):
        inst_path = tmp_path / "w.inst"
        loop_path = tmp_path / "w.loop"
        assert main(["compile", "--puzzle", "ww", "--in", str(square_graph_file),
                     "--out", str(inst_path)]) == 0
        g = full_grid(2, 2)
        expected = compile_ww(g, plan_for(g))
        assert parse_ww(inst_path.read_text()) == expected

        assert main(["solve", "--puzzle", "ww", "--in", str(inst_path),
                     "--out", str(loop_path)]) == 0
        loop = parse_loop(loop_path.read_text())
        assert verify_ww(expected, loop).ok
        assert main(["verify", "--puzzle", "ww", "--in", str(inst_path),
                     "--loop", str(loop_path)]) == 0
        assert main(["lift", "--puzzle", "ww", "--in", str(square_graph_file),
                     "--loop", str(loop_path),
                     "--out", str(tmp_path / "c.loop")]) == 0

    def test_orient_dump(self, square_graph_file, tmp_path):
        out = tmp_path / "plan.txt"
        assert main(["orient", "--in", str(square_graph_file), "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 4 and all(l.startswith("vertex ") for l in lines)

    def test_roundtrip_command(self, tmp_path):
        out = tmp_path / "report.txt"
        assert main(["roundtrip", "--puzzle", "ww", "--rows", "2", "--cols", "2",
                     "--out", str(out)]) == 0
        assert "summary instances 1" in out.read_text()

    def test_lab_command(self, tmp_path):
        out = tmp_path / "cert.txt"
        assert main(["lab", "--puzzle", "ww", "--out", str(out)]) == 0
        assert "pair N S count 3" in out.read_text()

    def test_solve_all_writes_every_solution(self, data_dir, tmp_path):
        out = tmp_path / "sol"
        assert main(["solve", "--puzzle", "ww", "--in",
                     str(data_dir / "sample_ww.txt"), "--all",
                     "--out", str(out)]) == 0
        found = sorted(tmp_path.glob("sol.*"))
        assert len(found) == 7


class TestRender:
    def test_ww_ascii_without_loop_matches_file_body(self, data_dir, ww_fixture):
        body = (data_dir / "sample_ww.txt").read_text().split("\n", 1)[1]
        assert render_ascii(ww_fixture) == body

    def test_ww_ascii_overlays_loop(self, ww_fixture, ww_fixture_loop):
        text = render_ascii(ww_fixture, ww_fixture_loop)
        assert text.count("#") == 14

    def test_aon_ascii_without_loop_matches_file_body(self, data_dir, aon_fixture):
        body = (data_dir / "sample_aon.txt").read_text().split("\n", 1)[1]
        assert render_ascii(aon_fixture) == body

    def test_svg_contains_loop_polyline(self, ww_fixture, ww_fixture_loop):
        svg = render_svg(ww_fixture, ww_fixture_loop)
        assert svg.startswith("<svg ") or svg.startswith("<svg\n") or "<svg" in svg
        assert "polyline" in svg

    def test_render_deterministic(self, ww_fixture, ww_fixture_loop):
        assert render_svg(ww_fixture, ww_fixture_loop) == render_svg(
            ww_fixture, ww_fixture_loop)
        assert render_ascii(ww_fixture, ww_fixture_loop) == render_ascii(
            ww_fixture, ww_fixture_loop)

    def test_render_command_ascii(self, data_dir, tmp_path, capsys):
        code = main(["render", "--puzzle", "ww",
                     "--in", str(data_dir / "sample_ww.txt"),
                     "--loop", str(data_dir / "sample_ww_loop.txt")])
        assert code == 0
        assert capsys.readouterr().out.count("#") == 14

    def test_render_command_without_loop_is_board_only(self, data_dir, capsys):
        code = main(["render", "--puzzle", "ww",
                     "--in", str(data_dir / "sample_ww.txt")])
        assert code == 0
        out = capsys.readouterr().out
        assert "#" not in out
        assert out == (data_dir / "sample_ww.txt").read_text().split("\n", 1)[1]

    def test_render_command_rejects_off_board_loop(self, data_dir, tmp_path):
        big_loop = tmp_path / "big.loop"
        big_loop.write_text("loop 4\n7 7\n8 7\n8 8\n7 8\n")
        code = main(["render", "--puzzle", "ww",
                     "--in", str(data_dir / "sample_ww.txt"),
                     "--loop", str(big_loop)])
        assert code == 3
