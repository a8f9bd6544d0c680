"""Turn-based game service over HTTP/JSON.

Each game is a session: a live board, the transcript so far, and at most
one engine seat. Human moves arrive over POST; the engine's reply is
computed synchronously in the same request (strategy moves are
microsecond-scale, and the solver engine is bounded to n <= 4). Mutation
is serialized per game with a lock, so concurrent submissions resolve to
one accepted move and conflict errors for the rest.

With a persistence directory configured, every accepted mutation rewrites
the game's record file, and a restarted service reloads the directory,
rebuilding in-flight engine state by replaying the transcript through the
engine (engines are deterministic, so every recomputed move must equal the
recorded one; files that fail this are skipped, not trusted).

All errors come back as structured bodies: {"error": {"code", "message"}}.
Coordinates on the wire are 1-indexed (row, col), row 1 at the top.
"""

from __future__ import annotations

import logging
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .core import (
    Cell,
    MoveError,
    OccupiedCell,
    OutOfBounds,
    Player,
    Variant,
    apply_move,
    board_to_text,
    can_ever_win,
    game_status,
    max_transversal_matching,
    new_board,
    status_after,
    threats,
    transversal_cells,
)
from .engines import EngineError, make_engine
from .records import (
    GameRecord,
    GameResult,
    MoveEntry,
    list_record_files,
    load_record,
    new_game_id,
    record_path,
    save_record,
)
from .solver import NodeLimitExceeded, solve

log = logging.getLogger("transversal.server")

MAX_BOARD_SIZE = 8
DEFAULT_ANALYSIS_NODES = 500_000
ANALYSIS_VALUE_BOUND = 4  # exact value reported only for n <= 4


class ApiError(Exception):
    def __init__(self, status_code: int, code: str, message: str):
        super().__init__(message)
        self.status_code = status_code
        self.code = code
        self.message = message


class CreateGameBody(BaseModel):
    n: int
    variant: str = "strong"
    engine: str = "human"
    engine_plays: str = "second"


class MoveBody(BaseModel):
    row: int
    col: int


class GameSession:
    """One live game: board, transcript, optional engine, and its lock."""

    def __init__(self, game_id, n, variant, engine, engine_seat, engine_x, engine_o):
        self.game_id = game_id
        self.n = n
        self.variant = variant
        self.engine = engine
        self.engine_seat = engine_seat
        self.engine_x = engine_x
        self.engine_o = engine_o
        self.board = new_board(n)
        self.moves: list[MoveEntry] = []
        self.status = game_status(self.board, variant)
        self.lock = threading.Lock()

    # -- construction ------------------------------------------------------

    @classmethod
    def create(cls, game_id, n, variant, engine_id, engine_plays):
        engine = make_engine(engine_id, n, variant)
        if engine is None:
            engine_seat = None
            engine_x = engine_o = "human"
        else:
            engine_seat = Player.X if engine_plays == "first" else Player.O
            if engine.seat is not None and engine.seat is not engine_seat:
                raise EngineError(
                    "engine %s plays %s and cannot go %s"
                    % (engine_id, engine.seat.value, engine_plays)
                )
            engine_x = engine_id if engine_seat is Player.X else "human"
            engine_o = engine_id if engine_seat is Player.O else "human"
        session = cls(game_id, n, variant, engine, engine_seat, engine_x, engine_o)
        if engine_seat is Player.X:
            session.apply_engine_move()
        return session

    @classmethod
    def from_record(cls, record: GameRecord) -> "GameSession":
        """Rebuild a session by replaying its transcript; every recomputed
        engine move must equal the recorded one."""
        if record.engine_x != "human" and record.engine_o != "human":
            raise ValueError("records with two engine seats are not restorable")
        engine_seat = None
        engine_id = "human"
        if record.engine_x != "human":
            engine_seat, engine_id = Player.X, record.engine_x
        elif record.engine_o != "human":
            engine_seat, engine_id = Player.O, record.engine_o
        engine = make_engine(engine_id, record.n, record.variant)
        session = cls(
            record.game_id, record.n, record.variant, engine, engine_seat,
            record.engine_x, record.engine_o,
        )
        for move in record.moves:
            if engine is not None and move.player is engine_seat:
                recomputed = engine.choose(session.board)
                if recomputed != move.cell:
                    raise ValueError(
                        "recorded engine move %r diverges from the engine's %r"
                        % (tuple(move.cell), tuple(recomputed))
                    )
            session._apply(move.player, move.cell)
        return session

    # -- mutation (callers hold self.lock; creation/restore are pre-share) --

    def _apply(self, player: Player, cell: Cell) -> None:
        self.board = apply_move(self.board, player, cell, self.variant)
        self.moves.append(MoveEntry(player, cell))
        self.status = status_after(self.board, self.variant, player)

    def apply_human_move(self, cell: Cell) -> None:
        if self.status.over:
            raise ApiError(409, "game-over", "the game is already decided")
        mover = self.board.to_move
        if mover is self.engine_seat:
            raise ApiError(409, "wrong-turn", "it is the engine's turn")
        self._apply(mover, cell)

    def apply_engine_move(self) -> Optional[Cell]:
        if (
            self.engine is None
            or self.status.over
            or self.board.to_move is not self.engine_seat
        ):
            return None
        try:
            cell = self.engine.choose(self.board)
        except Exception as exc:
            raise ApiError(500, "engine-error", "%s: %s" % (type(exc).__name__, exc))
        self._apply(self.engine_seat, cell)
        return cell

    # -- views ----------------------------------------------------------------

    def to_record(self) -> GameRecord:
        result = None
        if self.status.over:
            result = GameResult(self.status.winner, self.status.adjudicated)
        return GameRecord(
            game_id=self.game_id,
            n=self.n,
            variant=self.variant,
            engine_x=self.engine_x,
            engine_o=self.engine_o,
            moves=tuple(self.moves),
            result=result,
        )

    def state_payload(self) -> dict:
        rows = board_to_text(self.board).splitlines()
        winning = None
        if self.status.winner is not None:
            cells = transversal_cells(self.board, self.status.winner)
            if cells is not None:  # absent for adjudicated Breaker wins
                winning = [[c.row, c.col] for c in cells]
        return {
            "id": self.game_id,
            "n": self.n,
            "variant": self.variant.value,
            "engines": {"X": self.engine_x, "O": self.engine_o},
            "board": rows,
            "moves": [
                {"player": m.player.value, "row": m.cell.row, "col": m.cell.col}
                for m in self.moves
            ],
            "to_move": self.status.to_move.value if self.status.to_move else None,
            "over": self.status.over,
            "winner": self.status.winner.value if self.status.winner else None,
            "draw": self.status.is_draw,
            "adjudicated": self.status.adjudicated,
            "winning_cells": winning,
        }

    def summary_payload(self) -> dict:
        return {
            "id": self.game_id,
            "n": self.n,
            "variant": self.variant.value,
            "engines": {"X": self.engine_x, "O": self.engine_o},
            "over": self.status.over,
            "winner": self.status.winner.value if self.status.winner else None,
            "moves_played": len(self.moves),
        }


class GameStore:
    def __init__(self, persist_dir: Optional[Path], analysis_nodes: int):
        self.persist_dir = Path(persist_dir) if persist_dir is not None else None
        self.analysis_nodes = analysis_nodes
        self._sessions: dict[str, GameSession] = {}
        self._lock = threading.Lock()
        if self.persist_dir is not None:
            self._load_existing()

    def _load_existing(self) -> None:
        for path in list_record_files(self.persist_dir):
            try:
                session = GameSession.from_record(load_record(path))
            except (ValueError, MoveError, EngineError) as exc:
                log.warning("skipping unrestorable game file %s: %s", path, exc)
                continue
            try:
                # a crash can persist a human move without its engine reply;
                # catch up so no game is stuck on the engine's turn
                if session.apply_engine_move() is not None:
                    save_record(session.to_record(), self.persist_dir)
            except Exception as exc:
                log.warning("engine catch-up failed for %s: %s", path, exc)
            self._sessions[session.game_id] = session

    def save(self, session: GameSession) -> None:
        if self.persist_dir is not None:
            save_record(session.to_record(), self.persist_dir)

    def add(self, session: GameSession) -> None:
        with self._lock:
            self._sessions[session.game_id] = session
        self.save(session)

    def get(self, game_id: str) -> GameSession:
        with self._lock:
            session = self._sessions.get(game_id)
        if session is None:
            raise ApiError(404, "unknown-game", "no game with id %r" % game_id)
        return session

    def remove(self, game_id: str) -> None:
        with self._lock:
            session = self._sessions.pop(game_id, None)
        if session is None:
            raise ApiError(404, "unknown-game", "no game with id %r" % game_id)
        if self.persist_dir is not None:
            record_path(self.persist_dir, game_id).unlink(missing_ok=True)

    def all_sessions(self) -> list[GameSession]:
        with self._lock:
            return list(self._sessions.values())


def _parse_variant(text: str) -> Variant:
    try:
        return Variant(text)
    except ValueError:
        raise ApiError(
            400, "bad-variant", "variant must be 'strong' or 'maker-breaker'"
        ) from None


def create_app(
    persist_dir: Optional[Path] = None,
    analysis_nodes: int = DEFAULT_ANALYSIS_NODES,
) -> FastAPI:
    app = FastAPI(title="transversal game service")
    store = GameStore(persist_dir, analysis_nodes)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status_code,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    @app.exception_handler(RequestValidationError)
    async def _invalid_request(request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "invalid-request", "message": str(exc)}},
        )

    @app.exception_handler(Exception)
    async def _unhandled(request, exc: Exception):
        log.exception("unhandled error")
        return JSONResponse(
            status_code=500,
            content={"error": {"code": "internal", "message": str(exc)}},
        )

    @app.post("/games", status_code=201)
    def create_game(body: CreateGameBody):
        if body.n < 1 or body.n > MAX_BOARD_SIZE:
            raise ApiError(
                400, "bad-size", "n must be between 1 and %d" % MAX_BOARD_SIZE
            )
        variant = _parse_variant(body.variant)
        if body.engine_plays not in ("first", "second"):
            raise ApiError(
                400, "bad-engine-plays", "engine_plays must be 'first' or 'second'"
            )
        try:
            session = GameSession.create(
                new_game_id(), body.n, variant, body.engine, body.engine_plays
            )
        except EngineError as exc:
            raise ApiError(400, "bad-engine", str(exc)) from None
        store.add(session)
        return session.state_payload()

    @app.get("/games")
    def list_games():
        return {"games": [s.summary_payload() for s in store.all_sessions()]}

    @app.get("/games/{game_id}")
    def get_game(game_id: str):
        session = store.get(game_id)
        with session.lock:
            return session.state_payload()

    @app.delete("/games/{game_id}", status_code=204)
    def delete_game(game_id: str):
        store.remove(game_id)
        return Response(status_code=204)

    @app.post("/games/{game_id}/moves")
    def post_move(game_id: str, body: MoveBody):
        session = store.get(game_id)
        with session.lock:
            try:
                session.apply_human_move(Cell(body.row, body.col))
            except OutOfBounds as exc:
                raise ApiError(400, "out-of-bounds", str(exc)) from None
            except OccupiedCell as exc:
                raise ApiError(409, "occupied", str(exc)) from None
            engine_cell = session.apply_engine_move()
            store.save(session)
            payload = session.state_payload()
        payload["engine_move"] = (
            [engine_cell.row, engine_cell.col] if engine_cell else None
        )
        return payload

    @app.get("/games/{game_id}/analysis")
    def analyze(game_id: str):
        session = store.get(game_id)
        with session.lock:
            board, variant = session.board, session.variant
        tx = sorted(threats(board, Player.X))
        to = sorted(threats(board, Player.O))
        value = None
        if board.n <= ANALYSIS_VALUE_BOUND:
            try:
                value = solve(
                    board, variant=variant, node_limit=store.analysis_nodes
                ).value.value
            except NodeLimitExceeded:
                value = None
        return {
            "threats_x": [[c.row, c.col] for c in tx],
            "threats_o": [[c.row, c.col] for c in to],
            "matching_x": max_transversal_matching(board, Player.X),
            "matching_o": max_transversal_matching(board, Player.O),
            "can_win_x": can_ever_win(board, Player.X),
            "can_win_o": can_ever_win(board, Player.O),
            "value": value,
        }

    return app
