"""Board representation, move legality, and matching-based position logic.

The game: two players alternately claim cells of an n x n grid; the first
to own n cells with no two in a row or column (a transversal) wins. Win and
threat detection reduce to maximum bipartite matching between rows and
columns over one player's stones.

Boards are immutable values; every operation returns fresh data. Rows and
columns are 1-indexed in all public interfaces; internally a position is a
pair of bit masks with cell (row, col) at bit (row-1)*n + (col-1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

from ._kernels import backend_for

MAX_N = 16


class Player(enum.Enum):
    X = "X"
    O = "O"

    @property
    def opponent(self) -> "Player":
        return Player.O if self is Player.X else Player.X


class Variant(enum.Enum):
    STRONG = "strong"
    MAKER_BREAKER = "maker-breaker"


class Cell(NamedTuple):
    row: int
    col: int


class MoveError(Exception):
    """Base class for move rejections."""


class OutOfBounds(MoveError):
    pass


class OccupiedCell(MoveError):
    pass


class WrongTurn(MoveError):
    pass


class GameOver(MoveError):
    pass


class InconsistentPositionError(ValueError):
    """Position cannot arise from legal alternating play."""


@dataclass(frozen=True)
class Board:
    n: int
    x_bits: int = 0
    o_bits: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ValueError("board size must be in 1..%d, got %r" % (MAX_N, self.n))
        full = (1 << (self.n * self.n)) - 1
        if self.x_bits & ~full or self.o_bits & ~full:
            raise ValueError("stone mask outside the board")
        if self.x_bits < 0 or self.o_bits < 0:
            raise ValueError("negative stone mask")
        if self.x_bits & self.o_bits:
            raise ValueError("overlapping stones")

    # -- geometry ---------------------------------------------------------

    def index(self, cell: Cell) -> int:
        r, c = cell
        if not (isinstance(r, int) and isinstance(c, int)):
            raise OutOfBounds("cell coordinates must be integers: %r" % (cell,))
        if not (1 <= r <= self.n and 1 <= c <= self.n):
            raise OutOfBounds("cell %r outside board of size %d" % (tuple(cell), self.n))
        return (r - 1) * self.n + (c - 1)

    def _cell(self, idx: int) -> Cell:
        return Cell(idx // self.n + 1, idx % self.n + 1)

    # -- inspection -------------------------------------------------------

    def bits(self, player: Player) -> int:
        return self.x_bits if player is Player.X else self.o_bits

    def owner(self, cell: Cell) -> Optional[Player]:
        bit = 1 << self.index(cell)
        if self.x_bits & bit:
            return Player.X
        if self.o_bits & bit:
            return Player.O
        return None

    def stone_count(self, player: Player) -> int:
        return self.bits(player).bit_count()

    @property
    def full_mask(self) -> int:
        return (1 << (self.n * self.n)) - 1

    @property
    def is_full(self) -> bool:
        return (self.x_bits | self.o_bits) == self.full_mask

    @property
    def to_move(self) -> Player:
        x, o = self.x_bits.bit_count(), self.o_bits.bit_count()
        if x == o:
            return Player.X
        if x == o + 1:
            return Player.O
        raise InconsistentPositionError(
            "stone counts X=%d O=%d not reachable by alternating play" % (x, o)
        )

    def cells(self, player: Player) -> list[Cell]:
        out = []
        rest = self.bits(player)
        while rest:
            bit = rest & -rest
            rest ^= bit
            out.append(self._cell(bit.bit_length() - 1))
        return out

    def empty_cells(self) -> Iterator[Cell]:
        rest = self.full_mask & ~self.x_bits & ~self.o_bits
        while rest:
            bit = rest & -rest
            rest ^= bit
            yield self._cell(bit.bit_length() - 1)

    # -- construction -----------------------------------------------------

    def with_stone(self, player: Player, cell: Cell) -> "Board":
        """Successor with one stone added: bounds and emptiness enforced,
        turn order and game state deliberately not (position editing)."""
        bit = 1 << self.index(cell)
        if (self.x_bits | self.o_bits) & bit:
            raise OccupiedCell("cell %r already occupied" % (tuple(cell),))
        if player is Player.X:
            return Board(self.n, self.x_bits | bit, self.o_bits)
        return Board(self.n, self.x_bits, self.o_bits | bit)


def new_board(n: int) -> Board:
    if not isinstance(n, int) or n < 1:
        raise ValueError("board size must be a positive integer, got %r" % (n,))
    return Board(n)


def apply_move(
    board: Board, player: Player, cell: Cell, variant: Variant = Variant.STRONG
) -> Board:
    """Successor position after a legal move; the input board is unchanged.

    Rejections, each with its own class: OutOfBounds, GameOver (per the
    given variant), WrongTurn, OccupiedCell.
    """
    bit = 1 << board.index(cell)
    if game_status(board, variant).over:
        raise GameOver("game already decided")
    if board.to_move is not player:
        raise WrongTurn("it is not %s's turn" % player.value)
    if (board.x_bits | board.o_bits) & bit:
        raise OccupiedCell("cell %r already occupied" % (tuple(cell),))
    return board.with_stone(player, cell)


def max_transversal_matching(board: Board, player: Player) -> int:
    """Largest k such that the player owns k cells pairwise in distinct
    rows and columns (maximum bipartite matching rows <-> columns)."""
    return backend_for(board.n).matching_size(board.bits(player), board.n)


def has_won(board: Board, player: Player) -> bool:
    return backend_for(board.n).has_transversal(board.bits(player), board.n)


def transversal_cells(board: Board, player: Player) -> Optional[list[Cell]]:
    """One winning transversal owned by the player, or None."""
    size, match_col = backend_for(board.n).matching_cols(board.bits(player), board.n)
    if size < board.n:
        return None
    return sorted(Cell(r + 1, c + 1) for c, r in enumerate(match_col))


def threats(board: Board, player: Player) -> set[Cell]:
    """Empty cells where the player would complete a transversal.

    Computed incrementally (a stone raises the matching by at most one),
    equal by contract to place-and-check over every empty cell. If the
    player already owns a transversal every empty cell qualifies.
    """
    kern = backend_for(board.n)
    tb = kern.threat_bits(board.bits(player), board.bits(player.opponent), board.n)
    out = set()
    while tb:
        bit = tb & -tb
        tb ^= bit
        out.add(board._cell(bit.bit_length() - 1))
    return out


def can_ever_win(board: Board, player: Player) -> bool:
    """True iff some transversal avoids every opponent stone."""
    avail = board.full_mask & ~board.bits(player.opponent)
    return backend_for(board.n).has_transversal(avail, board.n)


@dataclass(frozen=True)
class GameStatus:
    over: bool
    winner: Optional[Player]
    to_move: Optional[Player]
    adjudicated: bool = False

    @property
    def is_draw(self) -> bool:
        return self.over and self.winner is None


def game_status(board: Board, variant: Variant = Variant.STRONG) -> GameStatus:
    """Outcome of the position under the given rules.

    Strong: a transversal wins for its owner, a full board draws.
    Maker-Breaker: only X wins by transversal; O wins once X cannot
    complete one (adjudicated early when the board is not yet full).
    """
    x_won = has_won(board, Player.X)
    if variant is Variant.STRONG:
        o_won = has_won(board, Player.O)
        if x_won and o_won:
            raise InconsistentPositionError("both players hold transversals")
        if x_won:
            return GameStatus(True, Player.X, None)
        if o_won:
            return GameStatus(True, Player.O, None)
        if board.is_full:
            return GameStatus(True, None, None)
        return GameStatus(False, None, board.to_move)
    if x_won:
        return GameStatus(True, Player.X, None)
    if not can_ever_win(board, Player.X):
        return GameStatus(True, Player.O, None, adjudicated=not board.is_full)
    return GameStatus(False, None, board.to_move)


def status_after(board: Board, variant: Variant, last_mover: Player) -> GameStatus:
    """game_status specialized to a position just reached by last_mover's
    move from a live position; skips the matchings that move cannot have
    changed. Equal to game_status by construction (property-tested)."""
    if variant is Variant.STRONG:
        if has_won(board, last_mover):
            return GameStatus(True, last_mover, None)
        if board.is_full:
            return GameStatus(True, None, None)
        return GameStatus(False, None, board.to_move)
    if last_mover is Player.X:
        # X's stone never blocks X; only a fresh X transversal can end it,
        # except when X just filled the board to no effect.
        if has_won(board, Player.X):
            return GameStatus(True, Player.X, None)
        if board.is_full:
            return GameStatus(True, Player.O, None)
        return GameStatus(False, None, board.to_move)
    # O's stone never completes an X transversal; only blocking can end it.
    if not can_ever_win(board, Player.X):
        return GameStatus(True, Player.O, None, adjudicated=not board.is_full)
    return GameStatus(False, None, board.to_move)


# -- text position format -------------------------------------------------

_CHAR = {None: ".", Player.X: "X", Player.O: "O"}


def board_to_text(board: Board) -> str:
    """n lines of n characters from {., X, O}, row 1 first, each line
    newline-terminated."""
    lines = []
    for r in range(1, board.n + 1):
        lines.append(
            "".join(_CHAR[board.owner(Cell(r, c))] for c in range(1, board.n + 1))
        )
    return "\n".join(lines) + "\n"


def board_from_text(text: str) -> Board:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines = lines[:-1]
    if not lines:
        raise ValueError("empty position text")
    n = len(lines)
    x = o = 0
    for r, line in enumerate(lines):
        if len(line) != n:
            raise ValueError(
                "line %d has %d characters, expected %d" % (r + 1, len(line), n)
            )
        for c, ch in enumerate(line):
            bit = 1 << (r * n + c)
            if ch == "X":
                x |= bit
            elif ch == "O":
                o |= bit
            elif ch != ".":
                raise ValueError("bad character %r at row %d col %d" % (ch, r + 1, c + 1))
    return Board(n, x, o)
