"""Command-line front end.

    learncop prove FILE [--depth N] [--time S] [--mode M] [--start P]
                        [--include-dir DIR] [--proof] [--stats] [--dump-constraints]
    learncop check FILE PROOF [--depth N] [--include-dir DIR]

``learncop FILE ...`` is shorthand for ``learncop prove FILE ...``.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from .checker import ProofSyntaxError, check_proof, format_proof, parse_proof
from .constraints import format_constraint
from .search import MODES, DepthOut, Saturated, SearchOptions, Theorem, TimeOut, prove
from .tptp import TPTPError, parse_problem, select_start_clauses

EXIT_OK = 0
EXIT_NO_RESULT = 1
EXIT_ERROR = 2


@dataclass
class CliConfig:
    problem_path: str
    include_dir: str | None = None
    depth: int | None = None
    time: float = 10.0
    mode: str = "learning"
    start: str = "conjecture-first"
    proof: bool = False
    stats: bool = False
    dump_constraints: bool = False


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _positive_float(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="learncop", description="Connection tableau prover with constraint learning.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="search for a closed connection tableau")
    p.add_argument("problem_path", metavar="FILE")
    p.add_argument("--include-dir", help="directory for resolving include directives (default: $TPTP)")
    p.add_argument("--depth", type=_positive_int, help="largest depth limit to try")
    p.add_argument("--time", type=_positive_float, default=10.0, help="time budget in seconds (default 10)")
    p.add_argument("--mode", choices=MODES, default="learning")
    p.add_argument("--start", choices=("conjecture-first", "all"), default="conjecture-first")
    p.add_argument("--proof", action="store_true", help="print the proof")
    p.add_argument("--stats", action="store_true", help="print per-level statistics as JSON lines")
    p.add_argument("--dump-constraints", action="store_true", help="print learned constraints per level")

    c = sub.add_parser("check", help="check a proof produced by --proof")
    c.add_argument("problem_path", metavar="FILE")
    c.add_argument("proof_path", metavar="PROOF")
    c.add_argument("--include-dir")
    c.add_argument("--depth", type=_positive_int, help="depth limit the proof must respect")
    return ap


def _szs(status: str) -> str:
    return f"% SZS status {status}"


def _run_prove(cfg: CliConfig, out, err) -> int:
    try:
        problem = parse_problem(cfg.problem_path, cfg.include_dir)
    except TPTPError as e:
        print(f"error: {e.diagnostic}", file=err)
        return EXIT_ERROR
    options = SearchOptions(max_depth=cfg.depth, time_budget=cfg.time, mode=cfg.mode, start_policy=cfg.start)

    def on_level(level, result):
        if cfg.dump_constraints:
            print(f"% constraints learned at depth {level.limit}", file=out)
            for c in level.store.constraints:
                print(format_constraint(c.atoms) if c.atoms else "$false", file=out)

    outcome = prove(problem, options, on_level)
    if type(outcome) is Theorem:
        status, code = "Theorem", EXIT_OK
    elif type(outcome) is Saturated:
        # no closed tableau at any depth; that only shows satisfiability when
        # every clause could start and equality carries no hidden axioms
        complete = len(select_start_clauses(problem, cfg.start)) == len(problem.clauses)
        if complete and not problem.has_equality:
            status, code = "Satisfiable", EXIT_OK
        else:
            status, code = "GaveUp", EXIT_NO_RESULT
    elif type(outcome) is DepthOut:
        status, code = "GaveUp", EXIT_NO_RESULT
    else:
        status, code = "Timeout", EXIT_NO_RESULT
    print(_szs(status), file=out)
    if cfg.proof and type(outcome) is Theorem:
        print("% SZS output start Proof", file=out)
        out.write(format_proof(outcome.proof))
        print("% SZS output end Proof", file=out)
    if cfg.stats:
        for st in outcome.stats:
            print(st.to_json(), file=out)
    return code


def _run_check(args, out, err) -> int:
    try:
        problem = parse_problem(args.problem_path, args.include_dir)
    except TPTPError as e:
        print(f"error: {e.diagnostic}", file=err)
        return EXIT_ERROR
    try:
        with open(args.proof_path) as f:
            text = f.read()
        proof = parse_proof(_proof_section(text), problem)
    except OSError as e:
        print(f"error: {args.proof_path}: {e.strerror}", file=err)
        return EXIT_ERROR
    except ProofSyntaxError as e:
        print(f"error: {args.proof_path}: {e}", file=err)
        return EXIT_ERROR
    result = check_proof(problem, proof, args.depth)
    if result:
        print("proof ok", file=out)
        return EXIT_OK
    print(f"proof rejected at step {result.step}: {result.message}", file=out)
    return EXIT_NO_RESULT


def _proof_section(text: str) -> str:
    """The text between SZS output markers if present, else all of it."""
    lines = text.splitlines()
    try:
        a = next(i for i, l in enumerate(lines) if l.startswith("% SZS output start"))
        b = next(i for i, l in enumerate(lines) if l.startswith("% SZS output end"))
    except StopIteration:
        return text
    return "\n".join(lines[a + 1:b])


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] not in ("prove", "check", "-h", "--help"):
        argv.insert(0, "prove")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    if args.command == "check":
        return _run_check(args, out, err)
    cfg = CliConfig(args.problem_path, args.include_dir, args.depth, args.time, args.mode, args.start,
                    args.proof, args.stats, args.dump_constraints)
    return _run_prove(cfg, out, err)


def main() -> None:
    sys.exit(run_cli())
