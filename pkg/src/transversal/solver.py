"""Exact game values and optimal moves.

Depth-first negamax over bit-packed positions with a bounded transposition
table. Values are exact, never heuristic: with only win/draw/loss outcomes a
child scoring +1 cuts the rest and everything else is searched out, so every
stored value is the true minimax value. Optional symmetry folding collapses
positions related by good transformations near the root, where the n! * n!
canonicalization pays for itself.

Search is single-threaded and deterministic: fixed move ordering (threat
makers, then matching raisers, then row-major) and a fixed table policy mean
identical inputs give identical node counts.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from typing import Optional

from . import transforms
from ._kernels import SearchAborted, backend_for
from .core import (
    Board,
    Cell,
    InconsistentPositionError,
    Player,
    Variant,
    game_status,
)

MAX_SOLVE_EMPTIES = 16
SYM_STONE_BOUND = 4


class Value(enum.Enum):
    FIRST_PLAYER_WIN = "FirstPlayerWin"
    SECOND_PLAYER_WIN = "SecondPlayerWin"
    DRAW = "Draw"


@dataclass(frozen=True)
class SolveResult:
    value: Value
    best_move: Optional[Cell]
    nodes_visited: int
    table_hits: int
    elapsed: float


class NodeLimitExceeded(Exception):
    """The node budget ran out. Carries the partial statistics; a partial
    search never reports a value at all."""

    def __init__(self, nodes_visited, table_hits, elapsed):
        super().__init__("node limit exceeded after %d nodes" % nodes_visited)
        self.nodes_visited = nodes_visited
        self.table_hits = table_hits
        self.elapsed = elapsed


class SolveBoundError(ValueError):
    """Too many empty cells for exact search."""


def make_context(n: int, memo_capacity: int = 1 << 20, node_limit=None):
    """A reusable search context for boards of size n. Reuse keeps the
    table warm across solves; never share one across sizes or variants."""
    return backend_for(n).SolveContext(memo_capacity, node_limit)


def _default_capacity(empties: int) -> int:
    if empties <= 9:
        return 1 << 14
    if empties <= 12:
        return 1 << 17
    return 1 << 20


def _status_value(status) -> Value:
    if status.winner is Player.X:
        return Value.FIRST_PLAYER_WIN
    if status.winner is Player.O:
        return Value.SECOND_PLAYER_WIN
    return Value.DRAW


def _relative_value(v: int, mover: Player) -> Value:
    if v == 0:
        return Value.DRAW
    winner = mover if v > 0 else mover.opponent
    return Value.FIRST_PLAYER_WIN if winner is Player.X else Value.SECOND_PLAYER_WIN


def solve(
    board: Board,
    to_move: Optional[Player] = None,
    variant: Variant = Variant.STRONG,
    *,
    symmetry: bool = False,
    node_limit: Optional[int] = None,
    memo_capacity: Optional[int] = None,
    context=None,
) -> SolveResult:
    """Perfect-play value of the position and one optimal move.

    to_move, when given, must match the side the stone counts imply;
    inconsistent positions are rejected. node_limit bounds this call's
    nodes and aborts with NodeLimitExceeded when exhausted. context (from
    make_context) carries a warm table across calls.
    """
    mover = board.to_move  # raises InconsistentPositionError on bad counts
    if to_move is not None and to_move is not mover:
        raise InconsistentPositionError(
            "stone counts put %s to move, not %s" % (mover.value, to_move.value)
        )
    start = time.perf_counter()
    status = game_status(board, variant)
    if status.over:
        return SolveResult(_status_value(status), None, 0, 0, time.perf_counter() - start)
    empties = (board.full_mask & ~board.x_bits & ~board.o_bits).bit_count()
    if empties > MAX_SOLVE_EMPTIES:
        raise SolveBoundError(
            "%d empty cells exceed the exact-search bound of %d"
            % (empties, MAX_SOLVE_EMPTIES)
        )
    backend = backend_for(board.n)
    ctx = context
    if ctx is None:
        ctx = backend.SolveContext(
            _default_capacity(empties) if memo_capacity is None else memo_capacity
        )
    if node_limit is not None:
        ctx.node_limit = ctx.nodes + node_limit
    nodes0, hits0 = ctx.nodes, ctx.hits
    x_to_move = mover is Player.X
    mb = variant is Variant.MAKER_BREAKER
    try:
        if symmetry:
            v, idx = _sym_root(backend, ctx, board, x_to_move, mb)
        else:
            v, idx = backend.solve_position(
                ctx, board.x_bits, board.o_bits, board.n, x_to_move, mb
            )
    except SearchAborted:
        raise NodeLimitExceeded(
            ctx.nodes - nodes0, ctx.hits - hits0, time.perf_counter() - start
        ) from None
    assert idx >= 0, "non-terminal position must yield a move"
    move = Cell(idx // board.n + 1, idx % board.n + 1)
    return SolveResult(
        _relative_value(v, mover),
        move,
        ctx.nodes - nodes0,
        ctx.hits - hits0,
        time.perf_counter() - start,
    )


def best_line(
    board: Board,
    to_move: Optional[Player] = None,
    variant: Variant = Variant.STRONG,
    **opts,
):
    """A principal variation: each move is a solve() best move, so every
    prefix keeps the root value."""
    line = []
    b = board
    if to_move is not None and to_move is not b.to_move:
        raise InconsistentPositionError("to_move does not match the position")
    while True:
        if game_status(b, variant).over:
            return line
        res = solve(b, variant=variant, **opts)
        line.append(res.best_move)
        b = b.with_stone(b.to_move, res.best_move)


# -- symmetry folding -------------------------------------------------------
#
# Near the root (few stones, small n) positions are deduplicated by their
# exact canonical class before the kernel search takes over. The class value
# equals the position value because good transformations preserve values.


def _sym_root(backend, ctx, board, x_to_move, mb):
    n = board.n
    full = board.full_mask
    x, o = board.x_bits, board.o_bits
    cache = ctx.sym_cache
    ctx.nodes += 1
    if mb and not backend.has_transversal(full & ~o, n):
        return (-1 if x_to_move else 1), -1
    empty = full & ~x & ~o
    if empty == 0:
        return 0, -1
    mine, opp = (x, o) if x_to_move else (o, x)
    if not mb or x_to_move:
        tb = backend.threat_bits(mine, opp, n)
        if tb:
            return 1, (tb & -tb).bit_length() - 1
    best, best_idx = -2, -1
    for idx in backend.ordered_moves(x, o, n, x_to_move):
        bit = 1 << idx
        cx, co = (x | bit, o) if x_to_move else (x, o | bit)
        v = -_sym_search(backend, ctx, cache, cx, co, n, not x_to_move, mb, full)
        if v > best:
            best, best_idx = v, idx
            if best == 1:
                break
    return best, best_idx


def _sym_search(backend, ctx, cache, x, o, n, x_to_move, mb, full):
    if n > transforms.EXACT_KEY_BOUND or (x | o).bit_count() > SYM_STONE_BOUND:
        return backend.negamax(ctx, x, o, n, x_to_move, mb)
    ctx.nodes += 1
    if ctx.node_limit is not None and ctx.nodes > ctx.node_limit:
        raise SearchAborted
    if mb and not backend.has_transversal(full & ~o, n):
        return -1 if x_to_move else 1
    empty = full & ~x & ~o
    if empty == 0:
        return 0
    mine, opp = (x, o) if x_to_move else (o, x)
    if (not mb or x_to_move) and backend.threat_bits(mine, opp, n):
        return 1
    key = (transforms.canonical_key(Board(n, x, o)), x_to_move)
    hit = cache.get(key)
    if hit is not None:
        ctx.hits += 1
        return hit
    best = -2
    for idx in backend.ordered_moves(x, o, n, x_to_move):
        bit = 1 << idx
        cx, co = (x | bit, o) if x_to_move else (x, o | bit)
        v = -_sym_search(backend, ctx, cache, cx, co, n, not x_to_move, mb, full)
        if v > best:
            best = v
            if best == 1:
                break
    cache[key] = best
    return best
