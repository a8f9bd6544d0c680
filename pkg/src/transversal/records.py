"""Game transcripts and their on-disk form.

A GameRecord is the unit of persistence and exchange: who played which
seat, the ordered move list, and the final result (absent while a game is
still running). Records serialize to a small line-based text format, one
file per game named by its id, and they replay through the core rules, so
a stored result is always re-derivable rather than trusted.

Text form, line by line, every line newline-terminated:

    transversal-game v1
    id 7f3c9a...
    n 4
    variant strong
    engine X theorem1
    engine O human
    move X 1 1
    move O 2 2
    result X

The result line carries "X", "O", or "draw", followed by the word
"adjudicated" when the game ended by early adjudication rather than on the
board. An unfinished game simply has no result line.
"""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .core import (
    Board,
    Cell,
    Player,
    Variant,
    apply_move,
    game_status,
    new_board,
)

_ID_RE = re.compile(r"[A-Za-z0-9._-]+\Z")
_HEADER = "transversal-game v1"
RECORD_SUFFIX = ".game"


@dataclass(frozen=True)
class MoveEntry:
    player: Player
    cell: Cell


@dataclass(frozen=True)
class GameResult:
    winner: Optional[Player]  # None means draw
    adjudicated: bool = False


@dataclass(frozen=True)
class GameRecord:
    game_id: str
    n: int
    variant: Variant
    engine_x: str  # strategy id, "human", or an adversary label
    engine_o: str
    moves: tuple[MoveEntry, ...]
    result: Optional[GameResult]  # None while the game is unfinished

    def __post_init__(self):
        if not _ID_RE.match(self.game_id):
            raise ValueError(
                "game id must be nonempty [A-Za-z0-9._-], got %r" % (self.game_id,)
            )
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("board size must be a positive integer, got %r" % (self.n,))
        for label in (self.engine_x, self.engine_o):
            if not label or label != label.strip() or "\n" in label:
                raise ValueError("bad engine label %r" % (label,))
        object.__setattr__(self, "moves", tuple(self.moves))

    def engine_for(self, player: Player) -> str:
        return self.engine_x if player is Player.X else self.engine_o


def new_game_id() -> str:
    return uuid.uuid4().hex


# -- text form --------------------------------------------------------------


def record_to_text(record: GameRecord) -> str:
    lines = [
        _HEADER,
        "id %s" % record.game_id,
        "n %d" % record.n,
        "variant %s" % record.variant.value,
        "engine X %s" % record.engine_x,
        "engine O %s" % record.engine_o,
    ]
    for move in record.moves:
        lines.append("move %s %d %d" % (move.player.value, move.cell.row, move.cell.col))
    if record.result is not None:
        token = "draw" if record.result.winner is None else record.result.winner.value
        if record.result.adjudicated:
            token += " adjudicated"
        lines.append("result %s" % token)
    return "\n".join(lines) + "\n"


def _parse_player(token: str) -> Player:
    if token == "X":
        return Player.X
    if token == "O":
        return Player.O
    raise ValueError("bad player token %r" % (token,))


def record_from_text(text: str) -> GameRecord:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != _HEADER:
        raise ValueError("missing %r header line" % _HEADER)
    it = iter(lines[1:])

    def expect(prefix: str) -> str:
        line = next(it, None)
        if line is None or not line.startswith(prefix):
            raise ValueError("expected %r line, got %r" % (prefix.strip(), line))
        return line[len(prefix):]

    game_id = expect("id ")
    n_text = expect("n ")
    if not n_text.isdigit():
        raise ValueError("bad board size %r" % (n_text,))
    variant_text = expect("variant ")
    try:
        variant = Variant(variant_text)
    except ValueError:
        raise ValueError("bad variant %r" % (variant_text,)) from None
    engine_x = expect("engine X ")
    engine_o = expect("engine O ")

    moves = []
    result = None
    for line in it:
        if line.startswith("move "):
            if result is not None:
                raise ValueError("move after result line")
            parts = line.split(" ")
            if len(parts) != 4 or not parts[2].isdigit() or not parts[3].isdigit():
                raise ValueError("bad move line %r" % (line,))
            moves.append(
                MoveEntry(_parse_player(parts[1]), Cell(int(parts[2]), int(parts[3])))
            )
        elif line.startswith("result "):
            if result is not None:
                raise ValueError("duplicate result line")
            parts = line.split(" ")[1:]
            if parts and parts[-1] == "adjudicated":
                adjudicated = True
                parts = parts[:-1]
            else:
                adjudicated = False
            if len(parts) != 1:
                raise ValueError("bad result line %r" % (line,))
            winner = None if parts[0] == "draw" else _parse_player(parts[0])
            result = GameResult(winner, adjudicated)
        else:
            raise ValueError("unrecognized line %r" % (line,))
    return GameRecord(game_id, int(n_text), variant, engine_x, engine_o, tuple(moves), result)


# -- replay and consistency --------------------------------------------------


def replay(record: GameRecord) -> Board:
    """Final board after folding the move list through the rules.

    Raises the core move errors on any illegal transcript (wrong
    alternation, occupied cells, moves after the game was decided)."""
    board = new_board(record.n)
    for move in record.moves:
        board = apply_move(board, move.player, move.cell, record.variant)
    return board


def validate_record(record: GameRecord) -> Board:
    """Replay the record and check the stored result against the rules.

    Returns the final board; raises ValueError when the stored result
    disagrees with the replayed position (or a result is missing from a
    finished game, or present on an unfinished one)."""
    board = replay(record)
    status = game_status(board, record.variant)
    if record.result is None:
        if status.over:
            raise ValueError("record has no result but the game is over")
        return board
    if not status.over:
        raise ValueError("record has a result but the game is not over")
    if status.winner is not record.result.winner:
        raise ValueError(
            "stored winner %r disagrees with replay %r"
            % (record.result.winner, status.winner)
        )
    if status.adjudicated != record.result.adjudicated:
        raise ValueError("stored adjudication flag disagrees with replay")
    return board


# -- file persistence ---------------------------------------------------------


def record_path(directory: Union[str, Path], game_id: str) -> Path:
    if not _ID_RE.match(game_id):
        raise ValueError("bad game id %r" % (game_id,))
    return Path(directory) / (game_id + RECORD_SUFFIX)


def save_record(record: GameRecord, directory: Union[str, Path]) -> Path:
    path = record_path(directory, record.game_id)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(record_to_text(record), encoding="ascii")
    return path


def load_record(path: Union[str, Path]) -> GameRecord:
    return record_from_text(Path(path).read_text(encoding="ascii"))


def list_record_files(directory: Union[str, Path]) -> list[Path]:
    root = Path(directory)
    if not root.is_dir():
        return []
    return sorted(p for p in root.iterdir() if p.suffix == RECORD_SUFFIX and p.is_file())
