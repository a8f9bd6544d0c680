"""Machine verification of the strategy guarantees.

Runs a strategy against every adversary reply sequence (exhaustive mode) or
against a seeded uniform-random legal adversary (random mode), tallies the
outcomes, and reports any line where the strategy's guarantee failed as a
replayable GameRecord. Also cross-checks the solver's root values against
the known small-board results.

Reports are deterministic: identical (strategy, n, variant, mode, seed)
inputs serialize to byte-identical text. Wall-clock time is carried on the
report object but never serialized.

The exhaustive adversary prunes nothing. Lines where the adversary ignores
a threat or plays into an immediate loss are enumerated like any other, so
"zero violations" quantifies over the full reply tree, not a plausible
subset of it.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Optional

from .core import (
    Cell,
    Player,
    Variant,
    apply_move,
    game_status,
    new_board,
    status_after,
)
from .records import GameRecord, GameResult, MoveEntry, record_to_text, validate_record
from .solver import Value, solve
from .strategy import STRATEGY_IDS, initial_state, strategy_next, strategy_seat


class TractabilityBound(ValueError):
    """The requested verification exceeds the supported exhaustive budget."""


@dataclass(frozen=True)
class ResultCounts:
    win: int
    draw: int
    loss: int

    @property
    def total(self) -> int:
        return self.win + self.draw + self.loss


@dataclass(frozen=True)
class VerificationReport:
    strategy_id: str
    n: int
    variant: Variant
    mode: str  # "exhaustive" or "random"
    games_played: int
    results: ResultCounts
    max_x_moves_to_win: Optional[int]  # over games X won; None if X won none
    violations: tuple[GameRecord, ...]
    seed: Optional[int] = None  # random mode only
    elapsed: float = field(default=0.0, compare=False)

    @property
    def ok(self) -> bool:
        return not self.violations


def report_to_text(report: VerificationReport) -> str:
    """Stable text form; excludes elapsed time so reruns compare equal."""
    lines = [
        "verification-report v1",
        "strategy %s" % report.strategy_id,
        "n %d" % report.n,
        "variant %s" % report.variant.value,
        "mode %s" % report.mode,
    ]
    if report.seed is not None:
        lines.append("seed %d" % report.seed)
    lines.append("games %d" % report.games_played)
    lines.append(
        "results win=%d draw=%d loss=%d"
        % (report.results.win, report.results.draw, report.results.loss)
    )
    if report.max_x_moves_to_win is None:
        lines.append("max-x-moves-to-win none")
    else:
        lines.append("max-x-moves-to-win %d" % report.max_x_moves_to_win)
    lines.append("violations %d" % len(report.violations))
    parts = ["\n".join(lines) + "\n"]
    for i, rec in enumerate(report.violations, 1):
        parts.append("violation %d\n" % i)
        parts.append(record_to_text(rec))
    return "".join(parts)


_DEFAULT_VARIANT = {
    "theorem1": Variant.STRONG,
    "prop2-x-draw": Variant.STRONG,
    "prop2-o-draw": Variant.STRONG,
    "maker-breaker": Variant.MAKER_BREAKER,
}

# Largest n whose full adversary tree is walked without an explicit opt-in.
_EXHAUSTIVE_BOUND = {
    "theorem1": 4,
    "maker-breaker": 4,
    "prop2-x-draw": 3,
    "prop2-o-draw": 3,
}


def _resolve_variant(strategy_id: str, variant: Optional[Variant]) -> Variant:
    if strategy_id not in STRATEGY_IDS:
        raise ValueError(
            "unknown strategy %r (known: %s)" % (strategy_id, ", ".join(STRATEGY_IDS))
        )
    return _DEFAULT_VARIANT[strategy_id] if variant is None else variant


def _is_violation(strategy_id: str, seat: Player, n: int, status, x_moves: int) -> bool:
    # theorem1 promises a win within n+3 X moves; the reduction strategy
    # promises a win; the draw strategies promise only never to lose.
    if strategy_id == "theorem1":
        return status.winner is not Player.X or x_moves > n + 3
    if strategy_id == "maker-breaker":
        return status.winner is not Player.X
    return status.winner is seat.opponent


class _Tally:
    """Outcome counters plus the raw material for the report."""

    def __init__(self, strategy_id: str, seat: Player, n: int):
        self.strategy_id = strategy_id
        self.seat = seat
        self.n = n
        self.win = 0
        self.draw = 0
        self.loss = 0
        self.max_x_win: Optional[int] = None
        self.bad: list[tuple[tuple[MoveEntry, ...], GameResult]] = []

    def record(self, path: list[MoveEntry], status) -> None:
        if status.winner is self.seat:
            self.win += 1
        elif status.winner is None:
            self.draw += 1
        else:
            self.loss += 1
        x_moves = sum(1 for m in path if m.player is Player.X)
        if status.winner is Player.X:
            if self.max_x_win is None or x_moves > self.max_x_win:
                self.max_x_win = x_moves
        if _is_violation(self.strategy_id, self.seat, self.n, status, x_moves):
            self.bad.append(
                (tuple(path), GameResult(status.winner, status.adjudicated))
            )

    def counts(self) -> ResultCounts:
        return ResultCounts(self.win, self.draw, self.loss)

    def violation_records(self, variant: Variant, adversary_label: str) -> tuple:
        """Canonically sorted, replay-validated transcripts of bad lines."""
        self.bad.sort(
            key=lambda item: tuple(
                (m.player.value, m.cell.row, m.cell.col) for m in item[0]
            )
        )
        out = []
        for i, (moves, result) in enumerate(self.bad, 1):
            if self.seat is Player.X:
                ex, eo = self.strategy_id, adversary_label
            else:
                ex, eo = adversary_label, self.strategy_id
            rec = GameRecord(
                game_id="violation-%04d" % i,
                n=self.n,
                variant=variant,
                engine_x=ex,
                engine_o=eo,
                moves=moves,
                result=result,
            )
            validate_record(rec)  # a violation must replay to its claim
            out.append(rec)
        return tuple(out)


def verify_exhaustive(
    strategy_id: str,
    n: int,
    variant: Optional[Variant] = None,
    *,
    allow_long: bool = False,
) -> VerificationReport:
    """Play the strategy against every adversary reply sequence.

    Bounded to n <= 4 for theorem1 and maker-breaker (n = 5 takes hours and
    sits behind allow_long) and n = 3 for the draw strategies. The leaf
    count is checked against an independent branching-factor tally, so a
    silently skipped line would fail loudly.
    """
    variant = _resolve_variant(strategy_id, variant)
    bound = _EXHAUSTIVE_BOUND[strategy_id]
    if allow_long and strategy_id in ("theorem1", "maker-breaker"):
        bound += 1
    if n > bound:
        raise TractabilityBound(
            "exhaustive verification of %s is bounded to n <= %d, got %d"
            % (strategy_id, bound, n)
        )
    start = time.perf_counter()
    seat = strategy_seat(strategy_id)
    next_fn = strategy_next(strategy_id)
    tally = _Tally(strategy_id, seat, n)
    path: list[MoveEntry] = []
    branches_extra = 0  # sum of (branching - 1) over adversary nodes
    leaves = 0

    def strategy_turn(board, state):
        cell, state = next_fn(state, board)
        board = apply_move(board, seat, cell, variant)
        path.append(MoveEntry(seat, cell))
        status = status_after(board, variant, seat)
        if status.over:
            nonlocal leaves
            leaves += 1
            tally.record(path, status)
        else:
            adversary_turn(board, state)
        path.pop()

    def adversary_turn(board, state):
        nonlocal branches_extra, leaves
        opp = seat.opponent
        empties = sorted(board.empty_cells())
        branches_extra += len(empties) - 1
        for cell in empties:
            child = apply_move(board, opp, cell, variant)
            path.append(MoveEntry(opp, cell))
            status = status_after(child, variant, opp)
            if status.over:
                leaves += 1
                tally.record(path, status)
            else:
                strategy_turn(child, state)
            path.pop()

    board = new_board(n)
    state = initial_state(strategy_id, n)
    if seat is Player.X:
        strategy_turn(board, state)
    else:
        adversary_turn(board, state)
    assert leaves == 1 + branches_extra, "enumeration lost or duplicated lines"
    return VerificationReport(
        strategy_id=strategy_id,
        n=n,
        variant=variant,
        mode="exhaustive",
        games_played=leaves,
        results=tally.counts(),
        max_x_moves_to_win=tally.max_x_win,
        violations=tally.violation_records(variant, "exhaustive"),
        elapsed=time.perf_counter() - start,
    )


def verify_random(
    strategy_id: str,
    n: int,
    variant: Optional[Variant] = None,
    *,
    games: int,
    seed: int,
) -> VerificationReport:
    """Play `games` independent games against a seeded uniform-random legal
    adversary. Fully reproducible: one Random(seed) drives every choice."""
    variant = _resolve_variant(strategy_id, variant)
    if not isinstance(games, int) or games < 1:
        raise ValueError("games must be a positive integer, got %r" % (games,))
    if n < 4:
        raise ValueError("random verification is for n >= 4, got %d" % n)
    start = time.perf_counter()
    seat = strategy_seat(strategy_id)
    next_fn = strategy_next(strategy_id)
    tally = _Tally(strategy_id, seat, n)
    rng = random.Random(seed)
    for _ in range(games):
        board = new_board(n)
        state = initial_state(strategy_id, n)
        path: list[MoveEntry] = []
        while True:
            mover = board.to_move
            if mover is seat:
                cell, state = next_fn(state, board)
            else:
                cell = rng.choice(sorted(board.empty_cells()))
            board = apply_move(board, mover, cell, variant)
            path.append(MoveEntry(mover, cell))
            status = status_after(board, variant, mover)
            if status.over:
                tally.record(path, status)
                break
    return VerificationReport(
        strategy_id=strategy_id,
        n=n,
        variant=variant,
        mode="random",
        games_played=games,
        results=tally.counts(),
        max_x_moves_to_win=tally.max_x_win,
        violations=tally.violation_records(variant, "random(%d)" % seed),
        seed=seed,
        elapsed=time.perf_counter() - start,
    )


# -- solver cross-check -------------------------------------------------------

_STRONG_VALUES = {
    1: Value.FIRST_PLAYER_WIN,
    2: Value.DRAW,
    3: Value.DRAW,
    4: Value.FIRST_PLAYER_WIN,
}


@dataclass(frozen=True)
class CrossCheckEntry:
    n: int
    variant: Variant
    position: str
    expected: Value
    solved: Value

    @property
    def ok(self) -> bool:
        return self.expected is self.solved


@dataclass(frozen=True)
class CrossCheckReport:
    entries: tuple[CrossCheckEntry, ...]
    elapsed: float = field(default=0.0, compare=False)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def mismatches(self) -> tuple[CrossCheckEntry, ...]:
        return tuple(e for e in self.entries if not e.ok)


def cross_check_solver(n: int, variant: Variant = Variant.STRONG) -> CrossCheckReport:
    """Compare the solver's root value against the known reference values:
    draws at n = 2 and 3, first-player wins at n = 1 and 4, and a Maker win
    in the 4x4 Maker-Breaker game after X takes (1,1). A mismatch is
    reported, not raised; callers treat it as build-failing."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("board size must be a positive integer, got %r" % (n,))
    if n > 4:
        raise TractabilityBound("solver cross-check is bounded to n <= 4, got %d" % n)
    start = time.perf_counter()
    if variant is Variant.STRONG:
        expected = _STRONG_VALUES[n]
        board = new_board(n)
        label = "empty %dx%d" % (n, n)
    else:
        if n != 4:
            raise ValueError(
                "the recorded maker-breaker reference value is for n = 4 only"
            )
        expected = Value.FIRST_PLAYER_WIN
        board = apply_move(new_board(4), Player.X, Cell(1, 1), Variant.MAKER_BREAKER)
        label = "maker-breaker 4x4 after X(1,1)"
    result = solve(board, variant=variant, symmetry=n >= 4)
    entry = CrossCheckEntry(n, variant, label, expected, result.value)
    return CrossCheckReport((entry,), time.perf_counter() - start)
