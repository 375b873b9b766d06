"""Command-line surface: thin wrappers over the library operations.

Exit codes: 0 accept/solved/agreement, 1 reject/unsatisfiable/disagreement,
2 budget exhaustion, 3 malformed or missing input.
"""

from __future__ import annotations

import argparse
import random
import sys

from . import aon, waterwalk
from .errors import LiftError, LoopforgeError, MalformedLoopError, ParseError, \
    SearchBudgetExceeded
from .fileio import emit_graph, emit_loop, parse_graph, parse_loop
from .framework import emit_exit_plan, plan_for
from .hamilton import find_hamiltonian_cycle, random_candidate_subgraph
from .model import HamCycle
from .reduction import (
    certify_gadget,
    compile_instance,
    emit_certificate,
    emit_roundtrip_report,
    lift_solution,
    roundtrip_experiment,
    solve_instance,
    verify_instance,
)
from .render import render_ascii, render_svg

OK, REJECT, BUDGET, BAD_INPUT = 0, 1, 2, 3


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as f:
        return f.read()


def _write(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def _parse_instance(path: str, puzzle: str):
    text = _read(path)
    return aon.parse_aon(text) if puzzle == "aon" else waterwalk.parse_ww(text)


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    for i in range(args.count):
        g = random_candidate_subgraph(args.cols, args.rows, rng)
        path = args.out if args.count == 1 else f"{args.out}.{i}"
        _write(path, emit_graph(g))
    return OK


def cmd_ham(args) -> int:
    g = parse_graph(_read(args.infile))
    cycle = find_hamiltonian_cycle(g, args.budget)
    if cycle is None:
        print("no hamiltonian cycle", file=sys.stderr)
        return REJECT
    _write(args.out, _cycle_text(cycle))
    return OK


def _cycle_text(cycle: HamCycle) -> str:
    lines = [f"loop {len(cycle.vertices)}"]
    lines.extend(f"{x} {y}" for x, y in cycle.vertices)
    return "\n".join(lines) + "\n"


def cmd_orient(args) -> int:
    g = parse_graph(_read(args.infile))
    plan = plan_for(g)
    _write(args.out, emit_exit_plan(plan))
    return OK


def cmd_compile(args) -> int:
    g = parse_graph(_read(args.infile))
    plan = plan_for(g)
    inst = compile_instance(g, plan, args.puzzle)
    emit = aon.emit_aon if args.puzzle == "aon" else waterwalk.emit_ww
    _write(args.out, emit(inst))
    return OK


def cmd_solve(args) -> int:
    inst = _parse_instance(args.infile, args.puzzle)
    mode = "all" if args.all else "first"
    result = solve_instance(inst, args.puzzle, mode=mode,
                            budget=args.budget, cap=args.cap)
    if not result.loops:
        print("unsatisfiable" if result.exhausted else "no solution within cap",
              file=sys.stderr)
        return REJECT
    if mode == "first":
        _write(args.out, emit_loop(result.loops[0]))
    else:
        for i, loop in enumerate(result.loops):
            path = args.out if args.out is None else f"{args.out}.{i}"
            _write(path, emit_loop(loop))
        print(f"{len(result.loops)} solutions", file=sys.stderr)
    return OK


def cmd_verify(args) -> int:
    inst = _parse_instance(args.infile, args.puzzle)
    loop = parse_loop(_read(args.loop))
    verdict = verify_instance(inst, loop, args.puzzle)
    lines = ["accept"] if verdict.ok else [
        f"rule {v.rule}: {v.message}" for v in verdict.violations]
    text = "\n".join(lines) + "\n"
    if args.out:
        _write(args.out, text)
    print(text, end="", file=sys.stderr)
    return OK if verdict.ok else REJECT


def cmd_lift(args) -> int:
    g = parse_graph(_read(args.infile))
    plan = plan_for(g)
    loop = parse_loop(_read(args.loop))
    inst = compile_instance(g, plan, args.puzzle)
    verdict = verify_instance(inst, loop, args.puzzle)
    if not verdict.ok:
        for v in verdict.violations:
            print(f"rule {v.rule}: {v.message}", file=sys.stderr)
        return REJECT
    try:
        cycle = lift_solution(g, plan, loop, args.puzzle)
    except LiftError as e:
        print(f"lift failure: {e}", file=sys.stderr)
        return REJECT
    _write(args.out, _cycle_text(cycle))
    return OK


def cmd_roundtrip(args) -> int:
    report = roundtrip_experiment(
        args.cols, args.rows, args.puzzle,
        solver_budget=args.budget, ham_budget=args.budget,
        dump_dir=args.dump)
    _write(args.out, emit_roundtrip_report(report))
    if report.disagreements:
        return REJECT
    if report.timeouts:
        return BUDGET
    return OK


def cmd_lab(args) -> int:
    cert = certify_gadget(args.puzzle, budget=args.budget)
    _write(args.out, emit_certificate(cert))
    return OK


def cmd_render(args) -> int:
    inst = _parse_instance(args.infile, args.puzzle)
    loop = parse_loop(_read(args.loop)) if args.loop else None
    if loop is not None:
        loop.check_on_board(inst.width, inst.height)
    text = render_ascii(inst, loop) if args.format == "ascii" else render_svg(inst, loop)
    _write(args.out, text)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="loopforge",
        description="Compile grid-graph Hamiltonicity into All or Nothing and "
                    "Water Walk puzzles; solve, verify, lift, and certify.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("gen", cmd_gen, help="emit random degree-{2,3} candidate subgraphs")
    sp.add_argument("--rows", type=int, required=True)
    sp.add_argument("--cols", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--out", required=True)

    sp = add("ham", cmd_ham, help="find a Hamiltonian cycle of a graph file")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--out", default=None)

    sp = add("orient", cmd_orient, help="dump the per-vertex exit plan")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", default=None)

    sp = add("compile", cmd_compile, help="compile a graph into a puzzle instance")
    sp.add_argument("--puzzle", choices=("aon", "ww"), required=True)
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", default=None)

    sp = add("solve", cmd_solve, help="solve a puzzle instance")
    sp.add_argument("--puzzle", choices=("aon", "ww"), required=True)
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--out", default=None)

    sp = add("verify", cmd_verify, help="check a loop against an instance")
    sp.add_argument("--puzzle", choices=("aon", "ww"), required=True)
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--loop", required=True)
    sp.add_argument("--out", default=None)

    sp = add("lift", cmd_lift, help="map a puzzle solution back to a cycle")
    sp.add_argument("--puzzle", choices=("aon", "ww"), required=True)
    sp.add_argument("--in", dest="infile", required=True,
                    help="source graph file (the instance is recompiled)")
    sp.add_argument("--loop", required=True)
    sp.add_argument("--out", default=None)

    sp = add("roundtrip", cmd_roundtrip,
             help="equivalence experiment over all candidate subgraphs")
    sp.add_argument("--puzzle", choices=("aon", "ww"), required=True)
    sp.add_argument("--rows", type=int, required=True)
    sp.add_argument("--cols", type=int, required=True)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--dump", default=None, help="directory for counterexample files")
    sp.add_argument("--out", default=None)

    sp = add("lab", cmd_lab, help="certify gadget traversal counts")
    sp.add_argument("--puzzle", choices=("aon", "ww"), required=True)
    sp.add_argument("--budget", type=int, default=50_000_000)
    sp.add_argument("--out", default=None)

    sp = add("render", cmd_render, help="render an instance (optionally with a loop)")
    sp.add_argument("--puzzle", choices=("aon", "ww"), required=True)
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--loop", default=None)
    sp.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    sp.add_argument("--out", default=None)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SearchBudgetExceeded as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return BUDGET
    except (ParseError, MalformedLoopError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return BAD_INPUT
    except FileNotFoundError as e:
        print(f"input error: {e}", file=sys.stderr)
        return BAD_INPUT
    except (LoopforgeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
