"""Exact engine, solver, and strategy-verification lab for the transversal
n-game: players alternately claim cells of an n x n grid, and the first to
own n cells with no two in a row or column wins."""

from .core import (
    Board,
    Cell,
    GameOver,
    GameStatus,
    InconsistentPositionError,
    MoveError,
    OccupiedCell,
    OutOfBounds,
    Player,
    Variant,
    WrongTurn,
    apply_move,
    board_from_text,
    board_to_text,
    can_ever_win,
    game_status,
    has_won,
    max_transversal_matching,
    new_board,
    threats,
)

__version__ = "0.1.0"
