"""Strategy behavior: interface contracts, normalization, case coverage,
and no-loss guarantees against scripted and random adversaries."""

import dataclasses
import random

import pytest

from transversal.core import (
    Board,
    Cell,
    Player,
    Variant,
    apply_move,
    game_status,
    has_won,
    new_board,
    threats,
)
from transversal import strategy as st
from transversal.strategy import (
    CaseTag,
    InconsistentHistory,
    NotXTurn,
    Phase,
    compute_S_O,
    maker_breaker_next,
    maker_breaker_state,
    normalize_checkpoint,
    prop2_o_draw_next,
    prop2_o_state,
    prop2_x_draw_next,
    prop2_x_state,
    star_invariant,
    theorem1_next,
    theorem1_state,
)
from transversal.transforms import apply as apply_transform
from transversal.transforms import map_cell

X, O = Player.X, Player.O


def play_out(strategy_id, n, variant, adversary):
    """Run one full game; adversary(board, empties) picks the opponent move.
    Returns (status, x_moves, final_state, final_board)."""
    seat = st.strategy_seat(strategy_id)
    nxt = st.strategy_next(strategy_id)
    state = st.initial_state(strategy_id, n)
    board = new_board(n)
    my_moves = 0
    while True:
        status = game_status(board, variant)
        if status.over:
            return status, my_moves, state, board
        if board.to_move is seat:
            cell, state = nxt(state, board)
            board = apply_move(board, seat, cell, variant)
            my_moves += 1
        else:
            cell = adversary(board, sorted(board.empty_cells()))
            board = apply_move(board, seat.opponent, cell, variant)


def random_adversary(rng):
    return lambda board, empties: rng.choice(empties)


def border_adversary(rng, n):
    # leans on the last row and column, which reaches the rarer endgame cases
    def pick(board, empties):
        border = [c for c in empties if c.row == n or c.col == n]
        if border and rng.random() < 0.8:
            return rng.choice(border)
        return rng.choice(empties)

    return pick


def exhaust(strategy_id, n, variant):
    """Every adversary line; returns result counts, worst win length, cases."""
    seat = st.strategy_seat(strategy_id)
    nxt = st.strategy_next(strategy_id)
    counts = {"win": 0, "draw": 0, "loss": 0}
    seen_cases = set()
    worst = [0]

    def walk(board, state, my_moves):
        status = game_status(board, variant)
        if status.over:
            if status.winner is seat:
                counts["win"] += 1
                worst[0] = max(worst[0], my_moves)
            elif status.winner is None:
                counts["draw"] += 1
            else:
                counts["loss"] += 1
            return
        if board.to_move is seat:
            cell, state2 = nxt(state, board)
            if state2.case is not None:
                seen_cases.add(state2.case)
            walk(apply_move(board, seat, cell, variant), state2, my_moves + 1)
        else:
            for cell in sorted(board.empty_cells()):
                walk(apply_move(board, seat.opponent, cell, variant), state, my_moves)

    walk(new_board(n), st.initial_state(strategy_id, n), 0)
    return counts, worst[0], seen_cases


# -- interface examples -------------------------------------------------------


def test_winning_strategy_opens_at_1_1():
    for n in (4, 5, 7):
        cell, state = theorem1_next(theorem1_state(n), new_board(n))
        assert cell == Cell(1, 1)
        assert state.phase is Phase.INDUCTION and state.k == 0


def test_base_step_takes_2_3_against_center_reply():
    board = new_board(5)
    cell, state = theorem1_next(theorem1_state(5), board)
    board = apply_move(board, X, cell)
    board = apply_move(board, O, Cell(2, 2))
    cell, state = theorem1_next(state, board, Cell(2, 2))
    assert cell == Cell(2, 3)
    board = apply_move(board, X, cell)
    working = apply_transform(state.frame, board)
    # after the column swap X sits on the working diagonal prefix
    assert working.owner(Cell(1, 1)) is X and working.owner(Cell(2, 2)) is X
    assert star_invariant(working, 1)


def test_base_step_normalizes_every_first_reply():
    for n in (4, 5):
        for o_cell in sorted(new_board(n).empty_cells()):
            if o_cell == Cell(1, 1):
                continue
            board = new_board(n)
            cell, state = theorem1_next(theorem1_state(n), board)
            board = apply_move(board, X, cell)
            board = apply_move(board, O, o_cell)
            cell, state = theorem1_next(state, board)
            board = apply_move(board, X, cell)
            assert star_invariant(apply_transform(state.frame, board), 1), o_cell


def test_last_opponent_move_crosscheck():
    board = new_board(4)
    cell, state = theorem1_next(theorem1_state(4), board)
    board = apply_move(board, X, cell)
    board = apply_move(board, O, Cell(3, 3))
    with pytest.raises(InconsistentHistory):
        theorem1_next(state, board, Cell(2, 2))


def test_maker_breaker_opens_at_1_1_and_answers_interior():
    # O at (3,4) pairs row 3 with the smallest column not in {1,4}
    board = new_board(5)
    cell, state = maker_breaker_next(maker_breaker_state(5), board)
    assert cell == Cell(1, 1)
    board = apply_move(board, X, cell, Variant.MAKER_BREAKER)
    board = apply_move(board, O, Cell(3, 4), Variant.MAKER_BREAKER)
    cell, state = maker_breaker_next(state, board)
    assert cell == Cell(3, 2)
    assert state.live_rows == (1, 2, 4, 5)
    assert state.live_cols == (1, 3, 4, 5)
    assert state.phase is Phase.ENDGAME


def test_maker_breaker_sacrifices_on_first_row_attack():
    board = new_board(6)
    cell, state = maker_breaker_next(maker_breaker_state(6), board)
    board = apply_move(board, X, cell, Variant.MAKER_BREAKER)
    board = apply_move(board, O, Cell(1, 4), Variant.MAKER_BREAKER)
    cell, state = maker_breaker_next(state, board)
    assert cell == Cell(2, 2)
    assert state.live_rows == (2, 3, 4, 5, 6)
    assert state.live_cols == (2, 3, 4, 5, 6)


def test_prop2_x_opening_and_reply():
    board = new_board(3)
    cell, state = prop2_x_draw_next(prop2_x_state(), board)
    assert cell == Cell(1, 1)
    board = apply_move(board, X, cell)
    board = apply_move(board, O, Cell(2, 2))
    cell, state = prop2_x_draw_next(state, board)
    assert cell == Cell(2, 3)


def test_prop2_o_takes_center_after_normalization():
    for x1 in sorted(new_board(3).empty_cells()):
        board = apply_move(new_board(3), X, x1)
        cell, state = prop2_o_draw_next(prop2_o_state(), board)
        working = apply_transform(state.frame, apply_move(board, O, cell))
        assert working.owner(Cell(1, 1)) is X
        assert working.owner(Cell(2, 2)) is O


# -- S_O and the checkpoint ---------------------------------------------------


def build_board(n, x_cells, o_cells):
    board = new_board(n)
    for cell in x_cells:
        board = board.with_stone(X, Cell(*cell))
    for cell in o_cells:
        board = board.with_stone(O, Cell(*cell))
    return board


def test_compute_s_o_full_last_column():
    n = 5
    board = build_board(
        n, [(i, i) for i in range(1, n)], [(i, n) for i in range(2, n + 1)]
    )
    assert compute_S_O(board) == {1}


def test_compute_s_o_split_structure():
    # r = 2: O on (n,2) plus (4,n),(5,n) in the pair layout, n = 5
    n = 5
    board = build_board(
        n, [(i, i) for i in range(1, n)], [(n, 2), (4, n), (5, n), (3, n)]
    )
    assert compute_S_O(board) == {1}
    board = build_board(
        n, [(i, i) for i in range(1, n)], [(n, 2), (n, 3), (4, n), (5, n)]
    )
    assert compute_S_O(board) == {1}


def test_compute_s_o_rejects_malformed_checkpoints():
    n = 5
    with pytest.raises(InconsistentHistory):
        compute_S_O(build_board(n, [], [(n, n)]))
    with pytest.raises(InconsistentHistory):
        compute_S_O(
            build_board(n, [], [(2, n), (3, n), (4, n), (2, 1)])
        )


def drive_to_checkpoint(n, seed):
    """Play with the border-leaning adversary until the block lands, and
    return the strategy's view right before the checkpoint move."""
    rng = random.Random(seed)
    pick = border_adversary(rng, n)
    state = theorem1_state(n)
    board = new_board(n)
    while True:
        if board.to_move is X:
            if state.phase is Phase.AWAIT_BLOCK and threats(board, X) == set():
                return state, board
            cell, state = theorem1_next(state, board)
            board = apply_move(board, X, cell)
        else:
            board = apply_move(board, O, pick(board, sorted(board.empty_cells())))
        if game_status(board, Variant.STRONG).over:
            raise AssertionError("game ended before the checkpoint")


def test_normalize_checkpoint_reports_case():
    state, board = drive_to_checkpoint(5, 31)
    new_state, s, r, tag = normalize_checkpoint(state, board)
    assert s == len(compute_S_O(apply_transform(new_state.frame, board)))
    assert new_state.phase is Phase.ENDGAME
    working = apply_transform(new_state.frame, board)
    assert all(working.owner(Cell(i, i)) is X for i in range(1, 5))
    assert compute_S_O(working) == set(range(1, s + 1))
    if tag in (CaseTag.CASE_1A, CaseTag.CASE_1B):
        assert r is not None and 1 <= r <= 3
    else:
        assert r is None
    # the original state is untouched and still drives the game to a win
    status, moves, _, _ = continue_from(state, board, 5)
    assert status.winner is X


def continue_from(state, board, n, seed=99):
    rng = random.Random(seed)
    moves = 0
    while True:
        status = game_status(board, Variant.STRONG)
        if status.over:
            return status, moves, state, board
        if board.to_move is X:
            cell, state = theorem1_next(state, board)
            board = apply_move(board, X, cell)
            moves += 1
        else:
            board = apply_move(board, O, rng.choice(sorted(board.empty_cells())))


def test_normalize_checkpoint_rejects_wrong_phase():
    state = theorem1_state(5)
    with pytest.raises(InconsistentHistory):
        normalize_checkpoint(state, new_board(5))


# -- full-game guarantees -----------------------------------------------------


def test_theorem1_random_sweep_all_sizes():
    for n in (4, 5, 6, 8):
        rng = random.Random(1000 + n)
        for _ in range(60):
            status, x_moves, state, board = play_out(
                "theorem1", n, Variant.STRONG, random_adversary(rng)
            )
            assert status.winner is X
            assert x_moves <= n + 3
            assert has_won(board, X)


def test_theorem1_case_coverage_at_5_and_6():
    # seeds found by search; each drives the endgame into a distinct case
    expected = {
        (5, 31): CaseTag.CASE_1A,
        (5, 35): CaseTag.CASE_1B,
        (5, 1): CaseTag.CASE_2,
        (6, 135): CaseTag.CASE_1A,
        (6, 241): CaseTag.CASE_1B,
        (6, 6): CaseTag.CASE_2,
    }
    for (n, seed), tag in expected.items():
        rng = random.Random(seed)
        status, x_moves, state, _ = play_out(
            "theorem1", n, Variant.STRONG, border_adversary(rng, n)
        )
        assert status.winner is X
        assert x_moves <= n + 3
        assert state.case is tag, (n, seed, state.case)


def test_theorem1_exhaustive_coverage_hits_all_4x4_cases():
    counts, worst, cases = exhaust("theorem1", 4, Variant.STRONG)
    assert counts["loss"] == 0 and counts["draw"] == 0
    assert worst <= 7
    assert cases == {CaseTag.CASE_2, CaseTag.CASE_3A, CaseTag.CASE_3B}


def test_prop2_strategies_never_lose_exhaustively():
    counts, worst, _ = exhaust("prop2-x-draw", 3, Variant.STRONG)
    assert counts["loss"] == 0
    assert counts["win"] + counts["draw"] > 0
    counts, worst, _ = exhaust("prop2-o-draw", 3, Variant.STRONG)
    assert counts["loss"] == 0


def test_maker_breaker_random_sweep():
    for n in (4, 5, 6, 7):
        rng = random.Random(2000 + n)
        for _ in range(60):
            status, _, _, board = play_out(
                "maker-breaker", n, Variant.MAKER_BREAKER, random_adversary(rng)
            )
            assert status.winner is X
            assert has_won(board, X)


# -- history validation -------------------------------------------------------


def test_not_x_turn():
    board = apply_move(new_board(4), X, Cell(1, 1))
    with pytest.raises(NotXTurn):
        theorem1_next(theorem1_state(4), board)


def test_foreign_position_is_refused():
    board = apply_move(new_board(4), X, Cell(2, 2))
    board = apply_move(board, O, Cell(1, 1))
    with pytest.raises(InconsistentHistory):
        theorem1_next(theorem1_state(4), board)


def test_vanished_opponent_stone_is_refused():
    board = new_board(4)
    cell, state = theorem1_next(theorem1_state(4), board)
    board = apply_move(board, X, cell)
    board = apply_move(board, O, Cell(3, 3))
    cell, state = theorem1_next(state, board)
    board = apply_move(board, X, cell)
    # rebuild the position with O's first stone relocated
    forged = build_board(4, [tuple(c) for c in board.cells(X)], [(4, 4), (2, 4)])
    with pytest.raises(InconsistentHistory):
        theorem1_next(state, forged)


def test_nonempty_opening_is_refused():
    # fresh state, but the board already carries a finished exchange
    board = apply_move(new_board(4), X, Cell(1, 1))
    board = apply_move(board, O, Cell(2, 2))
    board = apply_move(board, X, Cell(3, 3))
    with pytest.raises(InconsistentHistory):
        theorem1_next(theorem1_state(4), apply_move(board, O, Cell(4, 4)))


def test_prop2_o_requires_x_to_have_moved():
    with pytest.raises(InconsistentHistory):
        prop2_o_draw_next(prop2_o_state(), new_board(3))


def test_size_validation():
    with pytest.raises(ValueError):
        theorem1_state(3)
    with pytest.raises(ValueError):
        maker_breaker_state(3)
    with pytest.raises(ValueError):
        st.initial_state("prop2-x-draw", 4)
    with pytest.raises(ValueError):
        st.initial_state("nonsense", 4)


def test_states_are_immutable_and_reusable():
    board = new_board(4)
    state = theorem1_state(4)
    with pytest.raises(dataclasses.FrozenInstanceError):
        state.k = 3
    cell_a, state_a = theorem1_next(state, board)
    cell_b, state_b = theorem1_next(state, board)
    assert cell_a == cell_b
    assert state_a == state_b


def test_case_data_view():
    state, board = drive_to_checkpoint(5, 1)
    new_state, s, r, tag = normalize_checkpoint(state, board)
    data = new_state.case_data
    assert data["s"] == s
    if tag is CaseTag.CASE_2:
        assert {"b", "c"} <= set(data)


# -- invariant probe ----------------------------------------------------------


def test_star_invariant_checks_all_three_parts():
    good = build_board(5, [(1, 1), (2, 2)], [(1, 3), (4, 1)])
    assert star_invariant(good, 1)
    # X off the diagonal prefix
    assert not star_invariant(build_board(5, [(1, 1), (2, 3)], [(1, 3)]), 1)
    # O inside the protected square
    assert not star_invariant(build_board(5, [(1, 1), (2, 2)], [(3, 3), (1, 3)]), 1)
    # no O in column k+2
    assert not star_invariant(build_board(5, [(1, 1), (2, 2)], [(4, 1)]), 1)
