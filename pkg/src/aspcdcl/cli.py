"""Command-line front end.

    aspcdcl solve FILE [-n K] [--stats] ...
    aspcdcl bench DIR --timeout S [-j N] ...
    aspcdcl oracle FILE
    aspcdcl gen {hamiltonian,pigeonhole,random} ...
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .instances import hamiltonian_program, pigeonhole_program, random_digraph
from .oracle import DEFAULT_GUARD, GeneratorParams, enumerate_answer_sets, random_program
from .preprocess import SimplifyConfig
from .search import (
    BUDGET_EXHAUSTED,
    INCONSISTENT,
    MODELS_FOUND,
    SearchConfig,
    SolveOutcome,
    Statistics,
    solve_program,
)
from .textio import ParseError, format_program, parse_program, render_outcome, render_stats

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_UNKNOWN = 0
EXIT_ERROR = 1

CSV_COLUMNS = ["instance", "verdict", "time_s", "conflicts", "decisions", "restarts"]

log = logging.getLogger("aspcdcl")


@dataclass
class BenchRecord:
    instance: str
    verdict: str  # SAT | UNSAT | TIMEOUT | ERROR
    time_s: float
    conflicts: int = 0
    decisions: int = 0
    restarts: int = 0

    def row(self) -> list[str]:
        return [self.instance, self.verdict, f"{self.time_s:.6f}",
                str(self.conflicts), str(self.decisions), str(self.restarts)]


def _add_solver_flags(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("-n", dest="models", type=int, default=1, metavar="K",
                    help="number of answer sets to compute (0 = all; default 1)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--no-simplify", action="store_true", help="skip clause simplification")
    ap.add_argument("--elim-occ", type=int, default=20, metavar="N",
                    help="skip eliminating atoms with more than N occurrences")
    ap.add_argument("--elim-growth", type=int, default=0, metavar="N",
                    help="allowed net clause growth per eliminated atom")
    ap.add_argument("--luby-base", type=int, default=64, metavar="N")
    ap.add_argument("--no-restarts", action="store_true")
    ap.add_argument("--no-phase-saving", action="store_true")
    ap.add_argument("--var-decay", type=float, default=0.95, metavar="X")
    ap.add_argument("--timeout", type=float, default=None, metavar="S",
                    help="wall-clock budget in seconds")


def configs_from_args(args: argparse.Namespace) -> tuple[SearchConfig, SimplifyConfig, bool]:
    search = SearchConfig(
        luby_base=args.luby_base,
        var_decay=args.var_decay,
        seed=args.seed,
        max_models=args.models,
        time_budget=args.timeout,
        restarts=not args.no_restarts,
        phase_saving=not args.no_phase_saving,
    )
    simp = SimplifyConfig(args.elim_occ, args.elim_growth)
    return search, simp, not args.no_simplify


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def cmd_solve(args: argparse.Namespace) -> int:
    try:
        prog = parse_program(_read(args.file))
        search, simp, do_simp = configs_from_args(args)
    except (OSError, ParseError, ValueError) as e:
        print(f"error: {args.file}: {e}", file=sys.stderr)
        return EXIT_ERROR
    outcome = solve_program(prog, search, do_simp, simp)
    print(render_outcome(outcome, prog.names))
    if args.stats:
        print(render_stats(outcome.stats))
    if outcome.models:
        return EXIT_SAT
    if outcome.verdict == INCONSISTENT:
        return EXIT_UNSAT
    return EXIT_UNKNOWN


def run_instance(path: str, name: str, search: SearchConfig, simp: SimplifyConfig, do_simp: bool) -> BenchRecord:
    start = time.perf_counter()
    try:
        prog = parse_program(_read(path))
        outcome = solve_program(prog, search, do_simp, simp)
    except Exception as e:  # one bad instance must not abort the run
        log.warning("%s: %s", name, e)
        return BenchRecord(name, "ERROR", time.perf_counter() - start)
    elapsed = time.perf_counter() - start
    st = outcome.stats
    if outcome.verdict == BUDGET_EXHAUSTED:
        verdict, elapsed = "TIMEOUT", search.time_budget or elapsed
    elif outcome.verdict == MODELS_FOUND:
        verdict = "SAT"
    else:
        verdict = "UNSAT"
    return BenchRecord(name, verdict, elapsed, st.conflicts, st.decisions, st.restarts)


def bench_records(directory: str, search: SearchConfig, simp: SimplifyConfig, do_simp: bool,
                  jobs: int = 1) -> list[BenchRecord]:
    names = sorted(
        f for f in os.listdir(directory)
        if not f.startswith(".") and os.path.isfile(os.path.join(directory, f))
    )
    paths = [os.path.join(directory, f) for f in names]
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futs = [ex.submit(run_instance, p, n, search, simp, do_simp) for p, n in zip(paths, names)]
            return [f.result() for f in futs]
    return [run_instance(p, n, search, simp, do_simp) for p, n in zip(paths, names)]


def format_bench_csv(records: Sequence[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.row())
    solved = [r for r in records if r.verdict in ("SAT", "UNSAT")]
    mean = f"{sum(float(r.row()[2]) for r in solved) / len(solved):.6f}" if solved else ""
    w.writerow(["TOTAL", f"solved={len(solved)}", mean, "", "", ""])
    return buf.getvalue()


def cmd_bench(args: argparse.Namespace) -> int:
    if args.timeout is None:
        print("error: bench needs --timeout", file=sys.stderr)
        return EXIT_ERROR
    try:
        search, simp, do_simp = configs_from_args(args)
        records = bench_records(args.dir, search, simp, do_simp, args.jobs)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(format_bench_csv(records))
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    try:
        prog = parse_program(_read(args.file))
        models = enumerate_answer_sets(prog, args.guard)
    except (OSError, ParseError, ValueError) as e:
        print(f"error: {args.file}: {e}", file=sys.stderr)
        return EXIT_ERROR
    ordered = sorted(models, key=lambda m: (len(m), sorted(m)))
    verdict = MODELS_FOUND if ordered else INCONSISTENT
    print(render_outcome(SolveOutcome(verdict, ordered, Statistics()), prog.names))
    return EXIT_SAT if ordered else EXIT_UNSAT


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "hamiltonian":
        edges = random_digraph(args.nodes, args.edges, args.seed, hamiltonian=not args.no_plant)
        prog = hamiltonian_program(args.nodes, edges)
    elif args.kind == "pigeonhole":
        prog = pigeonhole_program(args.holes)
    else:
        prog = random_program(GeneratorParams(
            atom_count=args.atoms, rule_count=args.rules, max_body=args.max_body,
            neg_probability=args.neg, cycle_bias=args.cycle, constraint_probability=args.constraints,
            seed=args.seed))
    sys.stdout.write(format_program(prog))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="aspcdcl", description="Answer-set solver for ground normal programs")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one ground program")
    s.add_argument("file", help="program file, or - for stdin")
    s.add_argument("--stats", action="store_true", help="print statistics after the answer sets")
    _add_solver_flags(s)
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="solve every file in a directory, CSV on stdout")
    b.add_argument("dir")
    b.add_argument("-j", "--jobs", type=int, default=1)
    _add_solver_flags(b)
    b.set_defaults(func=cmd_bench)

    o = sub.add_parser("oracle", help="enumerate answer sets by brute force")
    o.add_argument("file")
    o.add_argument("--guard", type=int, default=DEFAULT_GUARD, help="refuse programs with more atoms")
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gen", help="write a generated ground program to stdout")
    g.add_argument("kind", choices=["hamiltonian", "pigeonhole", "random"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--nodes", type=int, default=20)
    g.add_argument("--edges", type=int, default=60)
    g.add_argument("--no-plant", action="store_true", help="do not plant a Hamiltonian cycle")
    g.add_argument("--holes", type=int, default=6)
    g.add_argument("--atoms", type=int, default=8)
    g.add_argument("--rules", type=int, default=12)
    g.add_argument("--max-body", type=int, default=3)
    g.add_argument("--neg", type=float, default=0.5)
    g.add_argument("--cycle", type=float, default=0.5)
    g.add_argument("--constraints", type=float, default=0.1)
    g.set_defaults(func=cmd_gen)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
