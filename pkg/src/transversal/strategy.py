"""Executable strategies: deterministic next-move functions with explicit
state, one per strategy the theory supports.

Each strategy keeps a frame (a good transformation from real board
coordinates to its normalized working coordinates) plus phase bookkeeping.
The real board is never relabeled; normalization swaps compose into the
frame and chosen moves translate back through its inverse, so the
opponent's view stays stable.

States are immutable: a call returns the move and the successor state
while the old state stays valid. An exhaustive verifier can therefore
share one state across every adversary branch of a position.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from . import transforms
from ._kernels import backend_for
from .core import Board, Cell, Player, can_ever_win, has_won, threats
from .transforms import GoodTransform, compose, identity, invert, map_cell, reflection

X, O = Player.X, Player.O


class StrategyError(Exception):
    pass


class InconsistentHistory(StrategyError):
    """The board cannot have been produced by this strategy's own history."""


class NotXTurn(StrategyError):
    pass


class Phase(enum.Enum):
    OPENING = "opening"
    INDUCTION = "induction"
    THREAT_MOVE = "threat-move"
    AWAIT_BLOCK = "await-block"
    ENDGAME = "endgame"
    FILL = "fill"
    DONE = "done"


class CaseTag(enum.Enum):
    CASE_1A = "1a"
    CASE_1B = "1b"
    CASE_2 = "2"
    CASE_3A = "3a"
    CASE_3B = "3b"


@dataclass(frozen=True)
class StrategyState:
    """frame maps real coordinates to working coordinates. phase, k and step
    track progress; case/s/r/b/c hold the endgame classification; pending is
    the tuple of working-coordinate threats our last move created; seen_x and
    seen_o record the real stone masks after our last move so a foreign board
    is detected instead of guessed at. live_rows/live_cols/holding belong to
    the Maker-Breaker reduction."""

    n: int
    frame: GoodTransform
    phase: Phase
    k: int = 0
    case: Optional[CaseTag] = None
    s: Optional[int] = None
    r: Optional[int] = None
    b: Optional[int] = None
    c: Optional[int] = None
    step: int = 0
    line: str = ""
    pending: Tuple[Cell, ...] = ()
    seen_x: int = 0
    seen_o: int = 0
    live_rows: Tuple[int, ...] = ()
    live_cols: Tuple[int, ...] = ()
    holding: bool = False

    @property
    def case_data(self) -> dict:
        return {
            key: val
            for key, val in (("s", self.s), ("r", self.r), ("b", self.b), ("c", self.c))
            if val is not None
        }


# -- shared plumbing ---------------------------------------------------------


def _opponent_diff(state: StrategyState, board: Board, me: Player) -> Optional[Cell]:
    """The single new opponent stone since our last move, or None on the
    very first call. Any other difference is an inconsistent history."""
    mine_now = board.bits(me)
    theirs_now = board.bits(me.opponent)
    mine_seen = state.seen_x if me is X else state.seen_o
    theirs_seen = state.seen_o if me is X else state.seen_x
    if mine_now != mine_seen:
        raise InconsistentHistory("our own stones changed outside this strategy")
    if theirs_seen & ~theirs_now:
        raise InconsistentHistory("opponent stones vanished")
    delta = theirs_now & ~theirs_seen
    count = delta.bit_count()
    if count == 0:
        if mine_now == 0 and theirs_now == 0:
            return None
        raise InconsistentHistory("no new opponent move to respond to")
    if count > 1:
        raise InconsistentHistory("more than one opponent move since our last")
    idx = delta.bit_length() - 1
    return Cell(idx // board.n + 1, idx % board.n + 1)


def _require_turn(board: Board, me: Player):
    if board.to_move is not me:
        if me is X:
            raise NotXTurn("strategy plays X and it is not X's turn")
        raise InconsistentHistory("strategy plays O and it is not O's turn")


def _play(state: StrategyState, board: Board, me: Player, real_cell: Cell, **changes):
    if board.owner(real_cell) is not None:
        raise InconsistentHistory(
            "strategy chose occupied cell %r" % (tuple(real_cell),)
        )
    after = board.with_stone(me, real_cell)
    changes.setdefault("seen_x", after.x_bits)
    changes.setdefault("seen_o", after.o_bits)
    return real_cell, replace(state, **changes)


def _to_real(frame: GoodTransform, cell: Cell) -> Cell:
    return map_cell(invert(frame), cell)


def _working(state: StrategyState, board: Board) -> Board:
    return transforms.apply(state.frame, board)


def _winning_precheck(state: StrategyState, board: Board, me: Player):
    """Whenever we already have a threat, take its smallest cell and win.
    This covers every adversary deviation from a forced block as well as
    the final move onto a double threat."""
    mine = sorted(threats(board, me))
    if mine:
        return _play(state, board, me, mine[0], phase=Phase.DONE, pending=())
    return None


def _swap_perm(n: int, i: int, j: int) -> Tuple[int, ...]:
    p = list(range(1, n + 1))
    p[i - 1], p[j - 1] = p[j - 1], p[i - 1]
    return tuple(p)


def star_invariant(working_board: Board, k: int) -> bool:
    """The three-part induction condition, checked in working coordinates
    after X's (k+1)-th move: X owns the diagonal prefix (a,a) for a <= k+1;
    no O sits in the square a,b > k+1; at least one O sits in column k+2."""
    if not all(working_board.owner(Cell(a, a)) is X for a in range(1, k + 2)):
        return False
    o_cells = working_board.cells(O)
    if any(cell.row > k + 1 and cell.col > k + 1 for cell in o_cells):
        return False
    return any(cell.col == k + 2 for cell in o_cells)


# -- first player's winning strategy (n >= 4) --------------------------------


def theorem1_state(n: int) -> StrategyState:
    if n < 4:
        raise ValueError("the winning strategy needs n >= 4, got %d" % n)
    return StrategyState(n=n, frame=identity(n), phase=Phase.OPENING)


def _normalize_first_o(cell: Cell, n: int) -> GoodTransform:
    """Send O's first reply to (2,2) (off row/column 1) or (1,2) (on them)
    while fixing X's stone at (1,1)."""
    a, b = cell
    g = identity(n)
    if a > 1 and b > 1:
        if a != 2:
            g = compose(transforms.swap_rows(n, a, 2), g)
        if b != 2:
            g = compose(transforms.swap_cols(n, b, 2), g)
        return g
    if a == 1:
        return transforms.swap_cols(n, b, 2) if b != 2 else g
    # b == 1, a > 1: reflect onto row 1, then fix the column
    g = reflection(n)
    if a != 2:
        g = compose(transforms.swap_cols(n, a, 2), g)
    return g


def _induction_reply(state: StrategyState, board: Board, o_move: Cell):
    """One induction step: O just moved; X answers so the invariant holds
    for k+1 after relabeling."""
    n, k = state.n, state.k
    frame = state.frame
    a, b = map_cell(frame, o_move)
    if a <= k + 1 or b <= k + 1:
        move = Cell(k + 2, k + 3)
        frame_after = compose(transforms.swap_cols(n, k + 2, k + 3), frame)
    else:
        if b == k + 2:
            frame = compose(transforms.swap_cols(n, k + 2, k + 3), frame)
            a, b = map_cell(frame, o_move)
        move = Cell(a, k + 2)
        frame_after = compose(transforms.swap_rows(n, a, k + 2), frame)
        if b != k + 3:
            frame_after = compose(transforms.swap_cols(n, k + 3, b), frame_after)
    real = _to_real(frame, move)
    next_phase = Phase.INDUCTION if k + 1 < n - 3 else Phase.THREAT_MOVE
    cell, new_state = _play(
        state, board, X, real, frame=frame_after, k=k + 1, phase=next_phase
    )
    assert star_invariant(
        _working(new_state, board.with_stone(X, real)), k + 1
    ), "induction invariant broken after X's reply"
    return cell, new_state


def compute_S_O(working_board: Board) -> set:
    """Endgame classifier: the indices i whose cells (i,n) and (n,i) are
    both free of O. Expects the checkpoint shape: n-1 O stones including
    (n,n) and a second stone in the last column."""
    n = working_board.n
    t_o = set(working_board.cells(O))
    if len(t_o) != n - 1:
        raise InconsistentHistory(
            "checkpoint needs %d O stones, found %d" % (n - 1, len(t_o))
        )
    if Cell(n, n) not in t_o:
        raise InconsistentHistory("checkpoint needs an O on (n,n)")
    if not any(c.col == n and c.row < n for c in t_o):
        raise InconsistentHistory("checkpoint needs a second O in the last column")
    return {
        i for i in range(1, n + 1) if Cell(i, n) not in t_o and Cell(n, i) not in t_o
    }


def _same_perm_sending(n: int, firsts, rest) -> GoodTransform:
    """The identical row/column permutation fixing n that sends the sorted
    firsts to 1,2,... and the remaining sorted rest to the following slots."""
    perm = [0] * n
    perm[n - 1] = n
    slot = 1
    for i in sorted(firsts):
        perm[i - 1] = slot
        slot += 1
    for i in sorted(rest):
        perm[i - 1] = slot
        slot += 1
    return transforms.same_permutation(n, tuple(perm))


def _case1_perm(n: int, rows_touching, cols_touching) -> GoodTransform:
    """Same permutation fixing 1 and n that lines Case 1 up: row-n O columns
    go to 2..n-r-1 and last-column O rows to n-r..n-1."""
    perm = [0] * n
    perm[0] = 1
    perm[n - 1] = n
    slot = 2
    for i in sorted(cols_touching):
        perm[i - 1] = slot
        slot += 1
    for i in sorted(rows_touching):
        perm[i - 1] = slot
        slot += 1
    return transforms.same_permutation(n, tuple(perm))


def _choose_case2_cell(working_board: Board, s: int):
    """Lexicographically smallest unoccupied (b,c) with b != c inside the
    normalized S_O block."""
    for b in range(1, s + 1):
        for c in range(1, s + 1):
            if b != c and working_board.owner(Cell(b, c)) is None:
                return b, c
    raise InconsistentHistory("no free off-diagonal cell in the S_O block")


def normalize_checkpoint(state: StrategyState, board: Board):
    """After 2n-2 moves: fold the threat-branch swaps into the frame,
    relabel so S_O becomes {1..s}, pick the endgame case and apply its own
    normalization. Returns (state, s, r, CaseTag) with r None outside
    Case 1."""
    n = state.n
    if state.phase is not Phase.AWAIT_BLOCK or state.line not in ("corner", "edge"):
        raise InconsistentHistory("not at the endgame checkpoint")
    if board.stone_count(X) != n - 1 or board.stone_count(O) != n - 1:
        raise InconsistentHistory("checkpoint needs n-1 stones each")
    frame = compose(transforms.swap_cols(n, n - 1, n), state.frame)
    if state.line == "corner":
        frame = compose(transforms.swap_rows(n, n - 1, n), frame)
    wb = transforms.apply(frame, board)
    if not all(wb.owner(Cell(i, i)) is X for i in range(1, n)):
        raise InconsistentHistory("checkpoint should leave X on the diagonal prefix")
    s_o = compute_S_O(wb)
    if not 1 <= len(s_o) <= n - 2:
        raise InconsistentHistory("S_O size %d out of range" % len(s_o))
    frame = compose(_same_perm_sending(n, s_o, set(range(1, n)) - s_o), frame)
    wb = transforms.apply(frame, board)
    s = len(s_o)
    assert compute_S_O(wb) == set(range(1, s + 1))

    if s >= 2:
        b, c = _choose_case2_cell(wb, s)
        new_state = replace(
            state,
            frame=frame,
            phase=Phase.ENDGAME,
            case=CaseTag.CASE_2,
            s=s,
            b=b,
            c=c,
            step=0,
            line="",
            pending=(),
        )
        return new_state, s, None, CaseTag.CASE_2

    t_o = set(wb.cells(O))
    if n == 4:
        if Cell(3, 4) not in t_o:
            frame = compose(transforms.same_permutation(4, _swap_perm(4, 2, 3)), frame)
            wb = transforms.apply(frame, board)
            t_o = set(wb.cells(O))
        if Cell(3, 4) not in t_o:
            raise InconsistentHistory("no O reachable on (3,4)")
        in_24, in_42 = Cell(2, 4) in t_o, Cell(4, 2) in t_o
        if in_24 == in_42:
            raise InconsistentHistory("exactly one of (2,4),(4,2) must hold an O")
        case = CaseTag.CASE_3A if in_24 else CaseTag.CASE_3B
        new_state = replace(
            state,
            frame=frame,
            phase=Phase.ENDGAME,
            case=case,
            s=1,
            step=0,
            line="",
            pending=(),
        )
        return new_state, 1, None, case

    # Case 1: each pair {(i,n),(n,i)}, 2 <= i <= n-1, holds exactly one O
    rows_touching = {c.row for c in t_o if c.col == n and c.row < n}
    cols_touching = {c.col for c in t_o if c.row == n and c.col < n}
    if rows_touching & cols_touching or rows_touching | cols_touching != set(
        range(2, n)
    ):
        raise InconsistentHistory("Case 1 pair structure violated")
    r = len(rows_touching)
    if not 1 <= r <= n - 2:
        raise InconsistentHistory("r = %d out of range" % r)
    frame = compose(_case1_perm(n, rows_touching, cols_touching), frame)
    wb = transforms.apply(frame, board)
    expect = {Cell(n, i) for i in range(2, n - r)} | {
        Cell(i, n) for i in range(n - r, n + 1)
    }
    assert set(wb.cells(O)) == expect, "Case 1 normalization failed"
    case = CaseTag.CASE_1A if r == n - 2 else CaseTag.CASE_1B
    new_state = replace(
        state,
        frame=frame,
        phase=Phase.ENDGAME,
        case=case,
        s=1,
        r=r,
        step=0,
        line="",
        pending=(),
    )
    return new_state, 1, r, case


def _endgame_script(state: StrategyState):
    """Remaining scripted moves for the active case as (move, threats it
    creates), all in working coordinates. The last entry is a double
    threat, so the pre-check wins on the following turn."""
    n, case = state.n, state.case
    if case is CaseTag.CASE_2:
        b, c = state.b, state.c
        return (
            (Cell(n, b), (Cell(b, n),)),
            (Cell(c, n), (Cell(b, c), Cell(n, c))),
        )
    if case is CaseTag.CASE_1A:
        return (
            (Cell(1, n), (Cell(n, 1),)),
            (Cell(n, n - 1), (Cell(n - 1, 1),)),
            (Cell(2, 1), (Cell(n - 1, 2), Cell(n, 2))),
        )
    if case is CaseTag.CASE_1B:
        return (
            (Cell(1, n), (Cell(n, 1),)),
            (Cell(n, n - 1), (Cell(n - 1, 1),)),
            (Cell(n - 1, 2), (Cell(2, 1), Cell(2, n))),
        )
    if case is CaseTag.CASE_3A:
        return (
            (Cell(1, 4), (Cell(4, 1),)),
            (Cell(4, 3), (Cell(3, 1),)),
            (Cell(2, 1), (Cell(3, 2), Cell(4, 2))),
        )
    if case is CaseTag.CASE_3B:
        return (
            (Cell(1, 4), (Cell(4, 1),)),
            (Cell(4, 3), (Cell(3, 1),)),
            (Cell(3, 2), (Cell(2, 1), Cell(2, 4))),
        )
    raise InconsistentHistory("endgame reached without a case")


def _endgame_move(state: StrategyState, board: Board):
    wb = _working(state, board)
    assert threats(wb, O) == set(), "opponent held a threat at a forced point"
    script = _endgame_script(state)
    if state.step >= len(script):
        raise InconsistentHistory("endgame script exhausted")
    move, pending = script[state.step]
    real = _to_real(state.frame, move)
    cell, new_state = _play(state, board, X, real, step=state.step + 1, pending=pending)
    after = _working(new_state, board.with_stone(X, real))
    assert set(pending) <= threats(after, X), "scripted move missed its threats"
    return cell, new_state


def theorem1_next(
    state: StrategyState, board: Board, last_opponent_move: Optional[Cell] = None
):
    """Next move of the first player's winning strategy on an n x n board,
    n >= 4. The state must come from this function's own history on this
    board; anything else raises InconsistentHistory."""
    if board.n != state.n:
        raise InconsistentHistory("board size %d does not match state" % board.n)
    _require_turn(board, X)
    o_move = _opponent_diff(state, board, X)
    if last_opponent_move is not None and o_move != Cell(*last_opponent_move):
        raise InconsistentHistory("last_opponent_move does not match the board")

    win = _winning_precheck(state, board, X)
    if win is not None:
        return win
    n = state.n

    if state.phase is Phase.OPENING:
        if o_move is not None:
            raise InconsistentHistory("opening expects an empty board")
        return _play(state, board, X, Cell(1, 1), phase=Phase.INDUCTION, k=0)

    if o_move is None:
        raise InconsistentHistory("no opponent move to respond to")

    if state.phase is Phase.INDUCTION and state.k == 0:
        # base step: normalize O's reply, take (2,3), then swap columns 2,3
        frame = compose(_normalize_first_o(o_move, n), state.frame)
        real = _to_real(frame, Cell(2, 3))
        frame_after = compose(transforms.swap_cols(n, 2, 3), frame)
        next_phase = Phase.INDUCTION if 1 < n - 3 else Phase.THREAT_MOVE
        cell, new_state = _play(
            state, board, X, real, frame=frame_after, k=1, phase=next_phase
        )
        assert star_invariant(_working(new_state, board.with_stone(X, real)), 1)
        return cell, new_state

    if state.phase is Phase.INDUCTION:
        return _induction_reply(state, board, o_move)

    if state.phase is Phase.THREAT_MOVE:
        # O cannot threaten yet: it has only n-2 stones on the board
        assert threats(_working(state, board), O) == set()
        om = map_cell(state.frame, o_move)
        if om in (Cell(n, n - 1), Cell(n - 1, n)):
            move, pending, line = Cell(n, n), Cell(n - 1, n - 1), "corner"
        else:
            move, pending, line = Cell(n - 1, n), Cell(n, n - 1), "edge"
        real = _to_real(state.frame, move)
        cell, new_state = _play(
            state, board, X, real, phase=Phase.AWAIT_BLOCK, pending=(pending,), line=line
        )
        after = _working(new_state, board.with_stone(X, real))
        assert threats(after, X) == {pending}
        return cell, new_state

    if state.phase is Phase.AWAIT_BLOCK:
        # the pre-check stayed silent, so O blocked our only threat
        assert map_cell(state.frame, o_move) == state.pending[0]
        new_state, _, _, _ = normalize_checkpoint(state, board)
        return _endgame_move(new_state, board)

    if state.phase is Phase.ENDGAME:
        if state.pending:
            assert map_cell(state.frame, o_move) in state.pending
        return _endgame_move(state, board)

    raise InconsistentHistory("strategy already finished")


# -- X's drawing strategy on the 3x3 board -----------------------------------


def prop2_x_state() -> StrategyState:
    return StrategyState(n=3, frame=identity(3), phase=Phase.OPENING)


def prop2_x_draw_next(state: StrategyState, board: Board):
    """X opens at (1,1), answers with (2,3), then walls off a full column.
    Never loses; wins outright when O deviates from the forced blocks."""
    if board.n != 3 or state.n != 3:
        raise InconsistentHistory("this strategy is for the 3x3 game")
    _require_turn(board, X)
    o_move = _opponent_diff(state, board, X)

    win = _winning_precheck(state, board, X)
    if win is not None:
        return win

    if state.phase is Phase.OPENING:
        if o_move is not None:
            raise InconsistentHistory("opening expects an empty board")
        return _play(state, board, X, Cell(1, 1), step=1, phase=Phase.INDUCTION)

    if state.phase is Phase.FILL:
        return _play(state, board, X, sorted(board.empty_cells())[0])

    if o_move is None:
        raise InconsistentHistory("no opponent move to respond to")

    if state.step == 1:
        frame = compose(_normalize_first_o(o_move, 3), state.frame)
        line = "center" if map_cell(frame, o_move) == Cell(2, 2) else "edge"
        real = _to_real(frame, Cell(2, 3))
        cell, new_state = _play(state, board, X, real, frame=frame, line=line, step=2)
        after = _working(new_state, board.with_stone(X, real))
        assert Cell(3, 2) in threats(after, X)
        return cell, new_state

    if state.step == 2:
        # O was forced onto (3,2); any other reply left our threat standing
        # and the pre-check has already taken it
        assert map_cell(state.frame, o_move) == Cell(3, 2)
        target = Cell(3, 1) if state.line == "center" else Cell(3, 3)
        threat = Cell(1, 2) if state.line == "center" else Cell(2, 2)
        real = _to_real(state.frame, target)
        cell, new_state = _play(state, board, X, real, step=3)
        after = _working(new_state, board.with_stone(X, real))
        assert threat in threats(after, X)
        return cell, new_state

    if state.step == 3:
        expected_block = Cell(1, 2) if state.line == "center" else Cell(2, 2)
        assert map_cell(state.frame, o_move) == expected_block
        target = Cell(2, 1) if state.line == "center" else Cell(1, 3)
        real = _to_real(state.frame, target)
        cell, new_state = _play(state, board, X, real, step=4, phase=Phase.FILL)
        assert not can_ever_win(
            board.with_stone(X, real), O
        ), "the walling move failed to shut O out"
        return cell, new_state

    raise InconsistentHistory("unreachable X-draw state")


# -- O's drawing strategy on the 3x3 board -----------------------------------


def prop2_o_state() -> StrategyState:
    return StrategyState(n=3, frame=identity(3), phase=Phase.OPENING)


# Keyed by X's normalized second move. Layout: O's reply, then (trigger,
# response) pairs for X's third and fourth moves; when X skips a trigger
# cell O takes that cell itself, walling off a full row or column.
_O_DRAW_LINES = {
    Cell(1, 2): (Cell(2, 3), Cell(2, 1), Cell(3, 3), Cell(1, 3), Cell(3, 2)),
    Cell(1, 3): (Cell(2, 3), Cell(2, 1), Cell(3, 2), Cell(1, 2), Cell(3, 3)),
    Cell(2, 3): (Cell(3, 2), Cell(1, 2), Cell(3, 1), Cell(3, 3), Cell(2, 1)),
    Cell(3, 3): (Cell(3, 2), Cell(1, 2), Cell(2, 1), Cell(2, 3), Cell(3, 1)),
}

_O_LINE_KEYS = {
    "1,2": Cell(1, 2),
    "1,3": Cell(1, 3),
    "2,3": Cell(2, 3),
    "3,3": Cell(3, 3),
}


def _o_safety(state: StrategyState, after: Board, cell: Cell):
    # after any non-winning O move, X must be left without a threat
    assert threats(after, X) == set(), "O's move left an X threat standing"
    return cell, state


def prop2_o_draw_next(state: StrategyState, board: Board):
    """O replies in the center and follows the case line for X's second
    move; never loses. X's first move is normalized to (1,1)."""
    if board.n != 3 or state.n != 3:
        raise InconsistentHistory("this strategy is for the 3x3 game")
    _require_turn(board, O)
    x_move = _opponent_diff(state, board, O)
    if x_move is None:
        raise InconsistentHistory("O moves second; X must have moved")

    win = _winning_precheck(state, board, O)
    if win is not None:
        return win

    if state.phase is Phase.OPENING:
        a, b = x_move
        if a == b:
            frame = transforms.same_permutation(3, _swap_perm(3, a, 1))
        else:
            frame = compose(transforms.swap_cols(3, b, 1), transforms.swap_rows(3, a, 1))
        assert map_cell(frame, x_move) == Cell(1, 1)
        real = _to_real(frame, Cell(2, 2))
        cell, new_state = _play(
            state, board, O, real, frame=frame, step=1, phase=Phase.INDUCTION
        )
        return _o_safety(new_state, board.with_stone(O, real), cell)

    if state.phase is Phase.FILL:
        target = sorted(board.empty_cells())[0]
        cell, new_state = _play(state, board, O, target)
        return _o_safety(new_state, board.with_stone(O, target), cell)

    if state.step == 1:
        frame = state.frame
        xm = map_cell(frame, x_move)
        if xm in (Cell(2, 1), Cell(3, 1), Cell(3, 2)):
            frame = compose(reflection(3), frame)
            xm = map_cell(frame, x_move)
        reply = _O_DRAW_LINES[xm][0]
        real = _to_real(frame, reply)
        cell, new_state = _play(
            state, board, O, real, frame=frame, line="%d,%d" % xm, step=2
        )
        return _o_safety(new_state, board.with_stone(O, real), cell)

    if state.step in (2, 3):
        line = _O_DRAW_LINES[_O_LINE_KEYS[state.line]]
        trigger, response = line[1:3] if state.step == 2 else line[3:5]
        xm = map_cell(state.frame, x_move)
        target = response if xm == trigger else trigger
        real = _to_real(state.frame, target)
        next_phase = Phase.FILL if state.step == 3 else Phase.INDUCTION
        if board.owner(real) is not None:
            # X sat on the scripted cell; that only happens once X is
            # already walled off, so any empty cell keeps the draw
            assert not can_ever_win(board, X)
            real = sorted(board.empty_cells())[0]
        cell, new_state = _play(
            state, board, O, real, step=state.step + 1, phase=next_phase
        )
        return _o_safety(new_state, board.with_stone(O, real), cell)

    raise InconsistentHistory("unreachable O-draw state")


# -- Maker's strategy in the Maker-Breaker variant (n >= 4) ------------------


_MB4_BASE = None


def _mb4_solver():
    """Shared 4x4 solver context and move cache for the reduction's base
    case, built on first use."""
    global _MB4_BASE
    if _MB4_BASE is None:
        backend = backend_for(4)
        _MB4_BASE = (backend, backend.SolveContext(1 << 18), {})
    return _MB4_BASE


def maker_breaker_state(n: int) -> StrategyState:
    if n < 4:
        raise ValueError("the Maker strategy needs n >= 4, got %d" % n)
    return StrategyState(
        n=n,
        frame=identity(n),
        phase=Phase.OPENING,
        live_rows=tuple(range(1, n + 1)),
        live_cols=tuple(range(1, n + 1)),
    )


def _mb_base_move(state: StrategyState, board: Board):
    """Base of the reduction: a live 4x4 subgrid whose top-left cell we
    hold. Play the winning move the solver finds for the subgrid."""
    backend, ctx, cache = _mb4_solver()
    rows, cols = state.live_rows, state.live_cols
    x_sub = o_sub = 0
    for i, row in enumerate(rows):
        for j, col in enumerate(cols):
            owner = board.owner(Cell(row, col))
            if owner is X:
                x_sub |= 1 << (i * 4 + j)
            elif owner is O:
                o_sub |= 1 << (i * 4 + j)
    key = (x_sub, o_sub)
    idx = cache.get(key)
    if idx is None:
        value, idx = backend.solve_position(ctx, x_sub, o_sub, 4, True, True)
        assert value == 1, "live subgrid is no longer a Maker win"
        assert idx >= 0
        cache[key] = idx
    real = Cell(rows[idx // 4], cols[idx % 4])
    after = board.with_stone(X, real)
    phase = Phase.DONE if has_won(after, X) else Phase.ENDGAME
    return _play(state, board, X, real, phase=phase)


def maker_breaker_next(state: StrategyState, board: Board):
    """Next Maker move: claim the live subgrid's top-left cell, shrink the
    grid to neutralize O's replies, and finish the 4x4 base with solved
    play. Only X completes transversals in this variant, so O stones
    outside the live subgrid are inert."""
    if board.n != state.n:
        raise InconsistentHistory("board size %d does not match state" % board.n)
    _require_turn(board, X)
    o_move = _opponent_diff(state, board, X)

    if state.phase is Phase.OPENING:
        if o_move is not None:
            raise InconsistentHistory("opening expects an empty board")
        phase = Phase.ENDGAME if len(state.live_rows) == 4 else Phase.INDUCTION
        first = Cell(state.live_rows[0], state.live_cols[0])
        return _play(state, board, X, first, phase=phase, holding=True)

    if o_move is None:
        raise InconsistentHistory("no opponent move to respond to")

    if state.phase is Phase.ENDGAME:
        return _mb_base_move(state, board)

    if state.phase is not Phase.INDUCTION:
        raise InconsistentHistory("strategy already finished")

    rows, cols = state.live_rows, state.live_cols
    ar, bc = o_move
    row_idx = rows.index(ar) + 1 if ar in rows else 0
    col_idx = cols.index(bc) + 1 if bc in cols else 0

    if row_idx >= 2 and col_idx >= 2:
        # O inside the live grid: pair its row with a fresh column, then
        # drop both from play
        c_idx = 2 if col_idx != 2 else 3
        real = Cell(ar, cols[c_idx - 1])
        new_rows = tuple(r for r in rows if r != ar)
        new_cols = tuple(c for c in cols if c != cols[c_idx - 1])
    else:
        # O spent a stone on our row or column (or outside the live grid):
        # retire the first live row and column and restart from the new
        # top-left corner
        new_rows, new_cols = rows[1:], cols[1:]
        real = Cell(new_rows[0], new_cols[0])
    phase = Phase.ENDGAME if len(new_rows) == 4 else Phase.INDUCTION
    return _play(
        state,
        board,
        X,
        real,
        live_rows=new_rows,
        live_cols=new_cols,
        k=state.k + 1,
        phase=phase,
    )


# -- registry -----------------------------------------------------------------


STRATEGY_IDS = ("theorem1", "prop2-x-draw", "prop2-o-draw", "maker-breaker")


def strategy_seat(strategy_id: str) -> Player:
    if strategy_id in ("theorem1", "prop2-x-draw", "maker-breaker"):
        return X
    if strategy_id == "prop2-o-draw":
        return O
    raise ValueError("unknown strategy %r" % strategy_id)


def initial_state(strategy_id: str, n: int) -> StrategyState:
    if strategy_id == "theorem1":
        return theorem1_state(n)
    if strategy_id == "maker-breaker":
        return maker_breaker_state(n)
    if strategy_id == "prop2-x-draw":
        if n != 3:
            raise ValueError("prop2-x-draw is a 3x3 strategy, got n=%d" % n)
        return prop2_x_state()
    if strategy_id == "prop2-o-draw":
        if n != 3:
            raise ValueError("prop2-o-draw is a 3x3 strategy, got n=%d" % n)
        return prop2_o_state()
    raise ValueError("unknown strategy %r" % strategy_id)


def strategy_next(strategy_id: str):
    table = {
        "theorem1": theorem1_next,
        "prop2-x-draw": prop2_x_draw_next,
        "prop2-o-draw": prop2_o_draw_next,
        "maker-breaker": maker_breaker_next,
    }
    if strategy_id not in table:
        raise ValueError("unknown strategy %r" % strategy_id)
    return table[strategy_id]
