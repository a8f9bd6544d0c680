"""Move-choosing engines for the service and the terminal player.

An engine id is one of:

    human           no engine; moves come from outside
    theorem1        the n >= 4 winning strategy (plays X)
    prop2-x-draw    the 3x3 drawing strategy for X
    prop2-o-draw    the 3x3 drawing strategy for O
    maker-breaker   the Maker reduction strategy (plays X, Maker-Breaker)
    solver-perfect  exact search, bounded to n <= 4
    random(SEED)    uniform over empty cells, reproducible from SEED

Strategy engines are deterministic given the move history, and random
engines given their seed, so a half-played game restores by replaying its
record: every engine move recomputed during replay must equal the recorded
one.
"""

from __future__ import annotations

import random
import re
from typing import Optional

from .core import Board, Cell, Player, Variant
from .solver import make_context, solve
from .strategy import STRATEGY_IDS, initial_state, strategy_next, strategy_seat

SOLVER_ENGINE_BOUND = 4

_RANDOM_RE = re.compile(r"random\((\d+)\)\Z")


class EngineError(ValueError):
    """Unknown engine id or an unsupported engine/game combination."""


class StrategyEngine:
    """Wraps a strategy's (state, board) -> (move, state) step function."""

    def __init__(self, strategy_id: str, n: int):
        self.engine_id = strategy_id
        self.seat: Optional[Player] = strategy_seat(strategy_id)
        self._next = strategy_next(strategy_id)
        self._state = initial_state(strategy_id, n)

    def choose(self, board: Board) -> Cell:
        cell, self._state = self._next(self._state, board)
        return cell


class SolverEngine:
    """Perfect play from exact search; the table stays warm across moves."""

    seat: Optional[Player] = None  # plays either side

    def __init__(self, n: int, variant: Variant):
        self.engine_id = "solver-perfect"
        self._variant = variant
        self._context = make_context(n)

    def choose(self, board: Board) -> Cell:
        result = solve(board, variant=self._variant, context=self._context)
        if result.best_move is None:
            raise EngineError("asked to move in a finished game")
        return result.best_move


class RandomEngine:
    seat: Optional[Player] = None

    def __init__(self, seed: int):
        self.engine_id = "random(%d)" % seed
        self._rng = random.Random(seed)

    def choose(self, board: Board) -> Cell:
        return self._rng.choice(sorted(board.empty_cells()))


def known_engine_ids() -> tuple:
    return ("human",) + STRATEGY_IDS + ("solver-perfect", "random(SEED)")


def make_engine(engine_id: str, n: int, variant: Variant):
    """Engine instance for the id, or None for "human".

    Raises EngineError for unknown ids and for combinations the engine
    cannot play: strategies on board sizes outside their domain, draw
    strategies outside the strong game, the Maker strategy outside
    Maker-Breaker, and the solver beyond its exact bound.
    """
    if engine_id == "human":
        return None
    if engine_id in STRATEGY_IDS:
        if engine_id == "maker-breaker" and variant is not Variant.MAKER_BREAKER:
            raise EngineError("engine maker-breaker plays the maker-breaker variant only")
        if engine_id.startswith("prop2") and variant is not Variant.STRONG:
            raise EngineError("engine %s plays the strong game only" % engine_id)
        try:
            return StrategyEngine(engine_id, n)
        except ValueError as exc:
            raise EngineError(str(exc)) from None
    if engine_id == "solver-perfect":
        if n > SOLVER_ENGINE_BOUND:
            raise EngineError(
                "solver-perfect is exact and bounded to n <= %d" % SOLVER_ENGINE_BOUND
            )
        return SolverEngine(n, variant)
    match = _RANDOM_RE.match(engine_id)
    if match:
        return RandomEngine(int(match.group(1)))
    raise EngineError(
        "unknown engine %r (known: %s)" % (engine_id, ", ".join(known_engine_ids()))
    )
