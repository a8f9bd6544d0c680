"""Command-line entry points.

Subcommands: solve (exact value of a position), verify (run a strategy
against an exhaustive or random adversary and print the report), play (a
line-based terminal game against an engine), serve (the HTTP service),
and export (print a stored game file).

Exit codes: 0 success; 1 a verification found violations; 2 parameter or
usage errors; 3 a tractability or node budget was exceeded; 4 runtime
failures (missing files, port binding).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .core import (
    MoveError,
    Cell,
    Player,
    Variant,
    apply_move,
    board_from_text,
    board_to_text,
    game_status,
    new_board,
    status_after,
)
from .engines import EngineError, known_engine_ids, make_engine
from .harness import (
    TractabilityBound,
    cross_check_solver,
    report_to_text,
    verify_exhaustive,
    verify_random,
)
from .records import load_record, record_path, record_to_text
from .solver import NodeLimitExceeded, SolveBoundError, solve

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_BOUND = 3
EXIT_RUNTIME = 4

DEFAULT_ANALYSIS_NODES = 500_000


def _variant(text: str) -> Variant:
    try:
        return Variant(text)
    except ValueError:
        raise ValueError(
            "variant must be 'strong' or 'maker-breaker', got %r" % (text,)
        ) from None


def cmd_solve(args) -> int:
    variant = _variant(args.variant)
    if args.position is not None:
        board = board_from_text(Path(args.position).read_text(encoding="ascii"))
    else:
        board = new_board(args.n)
    result = solve(
        board,
        variant=variant,
        symmetry=args.symmetry,
        node_limit=args.node_limit,
    )
    print(result.value.value)
    if result.best_move is None:
        print("best-move none")
    else:
        print("best-move %d %d" % (result.best_move.row, result.best_move.col))
    print("nodes %d" % result.nodes_visited)
    return EXIT_OK


def cmd_verify(args) -> int:
    variant = _variant(args.variant) if args.variant is not None else None
    if args.mode == "exhaustive":
        report = verify_exhaustive(
            args.strategy, args.n, variant, allow_long=args.allow_long
        )
    else:
        report = verify_random(
            args.strategy, args.n, variant, games=args.games, seed=args.seed
        )
    print(report_to_text(report), end="")
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def cmd_cross_check(args) -> int:
    report = cross_check_solver(args.n, _variant(args.variant))
    for entry in report.entries:
        print(
            "%s: expected %s, solved %s [%s]"
            % (
                entry.position,
                entry.expected.value,
                entry.solved.value,
                "ok" if entry.ok else "MISMATCH",
            )
        )
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def _read_human_move(prompt: str):
    while True:
        try:
            line = input(prompt)
        except EOFError:
            return None
        text = line.strip()
        if text in ("q", "quit", "exit"):
            return None
        parts = text.split()
        if len(parts) == 2 and all(p.isdigit() for p in parts):
            return Cell(int(parts[0]), int(parts[1]))
        print("enter two numbers (row col), or q to quit")


def cmd_play(args) -> int:
    variant = _variant(args.variant)
    engine = make_engine(args.engine, args.n, variant)
    engine_seat = None
    if engine is not None:
        engine_seat = Player.X if args.engine_plays == "first" else Player.O
        if engine.seat is not None and engine.seat is not engine_seat:
            raise EngineError(
                "engine %s plays %s and cannot go %s"
                % (args.engine, engine.seat.value, args.engine_plays)
            )
    board = new_board(args.n)
    status = game_status(board, variant)
    print(board_to_text(board), end="")
    while not status.over:
        mover = board.to_move
        if mover is engine_seat:
            cell = engine.choose(board)
            board = apply_move(board, mover, cell, variant)
            print("%s plays %d %d" % (mover.value, cell.row, cell.col))
        else:
            cell = _read_human_move("%s to move (row col): " % mover.value)
            if cell is None:
                print("abandoned")
                return EXIT_OK
            try:
                board = apply_move(board, mover, cell, variant)
            except MoveError as exc:
                print("illegal move: %s" % exc)
                continue
        status = status_after(board, variant, mover)
        print(board_to_text(board), end="")
    if status.winner is None:
        print("draw")
    elif status.adjudicated:
        print("%s wins (adjudicated)" % status.winner.value)
    else:
        print("%s wins" % status.winner.value)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    persist = args.persist_dir or os.environ.get("TRANSVERSAL_PERSIST_DIR")
    nodes = args.analysis_nodes
    if nodes is None:
        nodes = int(
            os.environ.get("TRANSVERSAL_ANALYSIS_NODES", DEFAULT_ANALYSIS_NODES)
        )
    app = create_app(Path(persist) if persist else None, nodes)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def cmd_export(args) -> int:
    directory = args.persist_dir or os.environ.get("TRANSVERSAL_PERSIST_DIR")
    if not directory:
        raise ValueError("--persist-dir (or TRANSVERSAL_PERSIST_DIR) is required")
    path = record_path(directory, args.game_id)
    if not path.is_file():
        raise FileNotFoundError("no stored game %r in %s" % (args.game_id, directory))
    text = record_to_text(load_record(path))  # parse first: exports stay well-formed
    if args.out:
        Path(args.out).write_text(text, encoding="ascii")
    else:
        print(text, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transversal",
        description="Exact engine, solver, and strategy verification for the "
        "transversal n-game.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="exact value of a position")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--n", type=int, help="solve the empty n x n board")
    src.add_argument("--position", help="solve a position from a text file")
    p.add_argument("--variant", default="strong")
    p.add_argument("--symmetry", action="store_true", help="fold symmetric lines near the root")
    p.add_argument("--node-limit", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run a strategy against an adversary")
    p.add_argument("--strategy", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--variant", default=None)
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--games", type=int, default=10000, help="random mode only")
    p.add_argument("--seed", type=int, default=0, help="random mode only")
    p.add_argument(
        "--allow-long",
        action="store_true",
        help="permit the hours-long exhaustive n=5 run",
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cross-check", help="compare solver values to the known table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--variant", default="strong")
    p.set_defaults(func=cmd_cross_check)

    p = sub.add_parser("play", help="play in the terminal against an engine")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--variant", default="strong")
    p.add_argument(
        "--engine",
        default="human",
        help="one of: %s" % ", ".join(known_engine_ids()),
    )
    p.add_argument("--engine-plays", choices=("first", "second"), default="second")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("serve", help="run the HTTP/JSON game service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--persist-dir", default=None)
    p.add_argument("--analysis-nodes", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export", help="print a stored game record")
    p.add_argument("--game-id", required=True)
    p.add_argument("--persist-dir", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TractabilityBound as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BOUND
    except (NodeLimitExceeded, SolveBoundError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BOUND
    except (EngineError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
