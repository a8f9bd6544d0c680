"""Solver values, determinism, limits, and symmetry soundness."""

import random

import pytest

from transversal.core import (
    Board,
    Cell,
    InconsistentPositionError,
    Player,
    Variant,
    game_status,
    new_board,
    status_after,
    threats,
)
from transversal.solver import (
    NodeLimitExceeded,
    SolveBoundError,
    Value,
    best_line,
    make_context,
    solve,
)

from oracles import brute_value, random_playout

X, O = Player.X, Player.O
STRONG, MB = Variant.STRONG, Variant.MAKER_BREAKER


def value_of(v):
    return {1: Value.FIRST_PLAYER_WIN, -1: Value.SECOND_PLAYER_WIN, 0: Value.DRAW}[v]


def live_positions(n, variant, max_stones):
    """Every position reachable by legal play with at most max_stones stones
    and the game still running."""
    seen = set()
    frontier = [new_board(n)]
    out = []
    while frontier:
        b = frontier.pop()
        key = (b.x_bits, b.o_bits)
        if key in seen:
            continue
        seen.add(key)
        if game_status(b, variant).over:
            continue
        out.append(b)
        if b.stone_count(X) + b.stone_count(O) >= max_stones:
            continue
        mover = b.to_move
        for cell in b.empty_cells():
            frontier.append(b.with_stone(mover, cell))
    return out


class TestKnownValues:
    def test_1x1(self):
        res = solve(new_board(1))
        assert res.value is Value.FIRST_PLAYER_WIN
        assert res.best_move == Cell(1, 1)

    def test_2x2_draw(self):
        assert solve(new_board(2)).value is Value.DRAW
        assert brute_value(new_board(2), X, STRONG) == 0

    def test_3x3_draw(self):
        res = solve(new_board(3))
        assert res.value is Value.DRAW

    def test_2x2_maker_breaker_breaker_wins(self):
        assert solve(new_board(2), variant=MB).value is Value.SECOND_PLAYER_WIN
        assert brute_value(new_board(2), X, MB) == -1

    def test_3x3_maker_breaker_breaker_wins(self):
        assert solve(new_board(3), variant=MB).value is Value.SECOND_PLAYER_WIN


class TestImmediateWin:
    def test_threat_resolved_in_one_node(self):
        b = new_board(4)
        for p, r, c in [(X, 1, 1), (O, 1, 2), (X, 2, 2), (O, 1, 3), (X, 3, 3), (O, 2, 1)]:
            b = b.with_stone(p, Cell(r, c))
        assert b.to_move is X
        assert Cell(4, 4) in threats(b, X)
        res = solve(b)
        assert res.value is Value.FIRST_PLAYER_WIN
        assert res.best_move == Cell(4, 4)
        assert res.nodes_visited == 1


class TestValidation:
    def test_to_move_mismatch(self):
        with pytest.raises(InconsistentPositionError):
            solve(new_board(3), to_move=O)

    def test_bad_stone_counts(self):
        b = new_board(3).with_stone(X, Cell(1, 1)).with_stone(X, Cell(2, 2))
        with pytest.raises(InconsistentPositionError):
            solve(b)

    def test_too_many_empties(self):
        with pytest.raises(SolveBoundError):
            solve(new_board(5))

    def test_node_limit(self):
        with pytest.raises(NodeLimitExceeded) as info:
            solve(new_board(3), node_limit=40)
        assert info.value.nodes_visited == 41

    def test_terminal_position(self):
        b = Board(2, x_bits=0b1001, o_bits=0b0010)  # X (1,1),(2,2); O (1,2)
        res = solve(b)
        assert res.value is Value.FIRST_PLAYER_WIN
        assert res.best_move is None and res.nodes_visited == 0


class TestMidgameLargerBoards:
    def test_5x5_with_few_empties(self):
        rng = random.Random(21)
        checked = 0
        while checked < 15:
            b, _ = random_playout(rng, 5, STRONG, plies=17)
            if game_status(b).over:
                continue
            res = solve(b)
            assert res.value is value_of(brute_value(b, b.to_move, STRONG))
            checked += 1


class TestDeterminism:
    def test_identical_runs(self):
        b = new_board(3)
        r1 = solve(b)
        r2 = solve(b)
        assert (r1.value, r1.best_move, r1.nodes_visited, r1.table_hits) == (
            r2.value,
            r2.best_move,
            r2.nodes_visited,
            r2.table_hits,
        )


class TestNegamaxConsistency:
    def test_matches_memo_free_minimax(self):
        rng = random.Random(31)
        for variant in (STRONG, MB):
            checked = 0
            while checked < 25:
                n = rng.choice([3, 4])
                plies = n * n - rng.randrange(4, 7)
                b, _ = random_playout(rng, n, variant, plies=plies)
                if game_status(b, variant).over:
                    continue
                res = solve(b, variant=variant)
                assert res.value is value_of(brute_value(b, b.to_move, variant))
                checked += 1

    def test_best_move_preserves_value(self):
        rng = random.Random(32)
        for variant in (STRONG, MB):
            checked = 0
            while checked < 15:
                b, _ = random_playout(rng, 4, variant, plies=rng.randrange(8, 13))
                if game_status(b, variant).over:
                    continue
                res = solve(b, variant=variant)
                child = b.with_stone(b.to_move, res.best_move)
                st = status_after(child, variant, b.to_move)
                follow = res.value if st.over else solve(child, variant=variant).value
                if st.over:
                    follow = {
                        X: Value.FIRST_PLAYER_WIN,
                        O: Value.SECOND_PLAYER_WIN,
                        None: Value.DRAW,
                    }[st.winner]
                assert follow is res.value
                checked += 1


class TestBestLine:
    def test_single_move_win(self):
        b = new_board(2).with_stone(X, Cell(1, 1)).with_stone(O, Cell(1, 2))
        line = best_line(b)
        assert line == [Cell(2, 2)]

    def test_3x3_line_is_draw_at_every_prefix(self):
        b = new_board(3)
        line = best_line(b)
        for cell in line:
            assert solve(b).value is Value.DRAW
            b = b.with_stone(b.to_move, cell)
        st = game_status(b)
        assert st.over and st.is_draw


class TestSymmetry:
    def test_symmetry_on_equals_off_3x3_prefix_exhaustive(self):
        for variant in (STRONG, MB):
            ctx_plain = make_context(3, 1 << 16)
            ctx_sym = make_context(3, 1 << 16)
            for b in live_positions(3, variant, max_stones=4):
                plain = solve(b, variant=variant, context=ctx_plain).value
                sym = solve(b, variant=variant, symmetry=True, context=ctx_sym).value
                assert plain is sym

    def test_symmetry_on_equals_off_4x4_sampled(self):
        rng = random.Random(41)
        for variant in (STRONG, MB):
            checked = 0
            while checked < 8:
                b, _ = random_playout(rng, 4, variant, plies=rng.randrange(6, 11))
                if game_status(b, variant).over:
                    continue
                assert (
                    solve(b, variant=variant).value
                    is solve(b, variant=variant, symmetry=True).value
                )
                checked += 1


class TestVariantOrdering:
    def test_strong_first_win_implies_maker_breaker_first_win(self):
        ctx_strong = make_context(3, 1 << 16)
        ctx_mb = make_context(3, 1 << 16)
        for b in live_positions(3, STRONG, max_stones=5):
            if game_status(b, MB).over:
                continue
            strong = solve(b, context=ctx_strong).value
            if strong is Value.FIRST_PLAYER_WIN:
                mb = solve(b, variant=MB, context=ctx_mb).value
                assert mb is Value.FIRST_PLAYER_WIN

    def test_sampled_4x4(self):
        rng = random.Random(42)
        checked = 0
        while checked < 10:
            b, _ = random_playout(rng, 4, STRONG, plies=rng.randrange(7, 12))
            if game_status(b, STRONG).over or game_status(b, MB).over:
                continue
            if solve(b).value is Value.FIRST_PLAYER_WIN:
                assert solve(b, variant=MB).value is Value.FIRST_PLAYER_WIN
            checked += 1
