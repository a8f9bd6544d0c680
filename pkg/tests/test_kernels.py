"""Pure and compiled kernels must agree bit for bit, node for node."""

import random
import subprocess
import sys

import pytest

from transversal._kernels import available, backend_for, get
from transversal.core import Variant, game_status
from oracles import random_playout

pytestmark = pytest.mark.skipif(
    "c" not in available(), reason="compiled kernel not built"
)


def backends():
    return get("pure"), get("c")


def random_masks(rng, n, count):
    full = (1 << (n * n)) - 1
    for _ in range(count):
        x = rng.getrandbits(n * n)
        o = rng.getrandbits(n * n) & ~x
        yield x & full, o & full


class TestPrimitiveParity:
    def test_matching_size(self):
        pure, ck = backends()
        rng = random.Random(100)
        for n in range(1, 9):
            full = (1 << (n * n)) - 1
            for x, o in random_masks(rng, n, 120):
                assert pure.matching_size(x, n) == ck.matching_size(x, n)
            assert pure.matching_size(full, n) == ck.matching_size(full, n) == n
            assert pure.matching_size(0, n) == ck.matching_size(0, n) == 0

    def test_matching_cols(self):
        pure, ck = backends()
        rng = random.Random(101)
        for n in (2, 4, 8):
            for x, _ in random_masks(rng, n, 60):
                sp, cp = pure.matching_cols(x, n)
                sc, cc = ck.matching_cols(x, n)
                assert sp == sc
                for cols, size in ((cp, sp), (cc, sc)):
                    matched = [(r, c) for c, r in enumerate(cols) if r >= 0]
                    assert len(matched) == size
                    assert len({r for r, _ in matched}) == size
                    for r, c in matched:
                        assert x >> (r * n + c) & 1

    def test_has_transversal_and_threats(self):
        pure, ck = backends()
        rng = random.Random(102)
        for n in range(1, 9):
            for x, o in random_masks(rng, n, 80):
                assert pure.has_transversal(x, n) == ck.has_transversal(x, n)
                assert pure.threat_bits(x, o, n) == ck.threat_bits(x, o, n)
                assert pure.threat_bits(o, x, n) == ck.threat_bits(o, x, n)

    def test_ordered_moves(self):
        pure, ck = backends()
        rng = random.Random(103)
        for n in (2, 3, 4, 6, 8):
            for x, o in random_masks(rng, n, 40):
                for xtm in (True, False):
                    assert pure.ordered_moves(x, o, n, xtm) == ck.ordered_moves(x, o, n, xtm)

    def test_compiled_rejects_big_boards(self):
        _, ck = backends()
        with pytest.raises(ValueError):
            ck.matching_size(0, 9)


class TestSearchParity:
    def solve_both(self, x, o, n, xtm, mb, capacity=1 << 16):
        pure, ck = backends()
        out = []
        for mod in (pure, ck):
            ctx = mod.SolveContext(capacity)
            val, idx = mod.solve_position(ctx, x, o, n, xtm, mb)
            out.append((val, idx, ctx.nodes, ctx.hits))
        assert out[0] == out[1]
        return out[0]

    def test_small_roots(self):
        for n in (1, 2, 3):
            for mb in (False, True):
                self.solve_both(0, 0, n, True, mb)

    def test_random_4x4_positions(self):
        rng = random.Random(104)
        for variant, mb in ((Variant.STRONG, False), (Variant.MAKER_BREAKER, True)):
            checked = 0
            while checked < 12:
                b, _ = random_playout(rng, 4, variant, plies=rng.randrange(4, 12))
                if game_status(b, variant).over:
                    continue
                xtm = b.to_move.value == "X"
                self.solve_both(b.x_bits, b.o_bits, 4, xtm, mb)
                checked += 1

    def test_maker_breaker_with_banked_maker_stones(self):
        # Maker-Breaker induction banks X stones, so the base-case search
        # starts from positions where X has more stones than parity allows;
        # both backends must agree there too, including side-to-move keys.
        rng = random.Random(105)
        for _ in range(10):
            cells = list(range(16))
            rng.shuffle(cells)
            x = (1 << cells[0]) | (1 << cells[1]) | (1 << cells[2])
            o = 1 << cells[3]
            self.solve_both(x, o, 4, True, True)

    def test_node_limit_abort_parity(self):
        pure, ck = backends()
        from transversal._kernels import SearchAborted

        counts = []
        for mod in (pure, ck):
            ctx = mod.SolveContext(1 << 12, node_limit=500)
            with pytest.raises(SearchAborted):
                mod.solve_position(ctx, 0, 0, 3, True, False)
            counts.append(ctx.nodes)
        assert counts[0] == counts[1] == 501

    def test_negamax_entry_parity(self):
        pure, ck = backends()
        rng = random.Random(106)
        for _ in range(8):
            b, _ = random_playout(rng, 3, Variant.STRONG, plies=rng.randrange(2, 6))
            if game_status(b).over:
                continue
            xtm = b.to_move.value == "X"
            vals = []
            for mod in (pure, ck):
                ctx = mod.SolveContext(1 << 12)
                vals.append((mod.negamax(ctx, b.x_bits, b.o_bits, 3, xtm, False), ctx.nodes))
            assert vals[0] == vals[1]


class TestTablePolicy:
    def find_collision(self, capacity):
        # hunt for two distinct keys landing in the same slot, using the
        # shared hash from the pure backend
        from transversal._kernels._pure import _mix

        mask = capacity - 1
        rng = random.Random(107)
        seen = {}
        while True:
            x, o = rng.getrandbits(16), rng.getrandbits(16)
            slot = _mix(x, o, 1) & mask
            if slot in seen and seen[slot] != (x, o):
                return seen[slot], (x, o)
            seen[slot] = (x, o)

    def test_depth_preferred_replacement(self):
        (x1, o1), (x2, o2) = self.find_collision(64)
        for mod in backends():
            ctx = mod.SolveContext(64)
            ctx.store(x1, o1, 1, 1, 10)
            assert ctx.probe(x1, o1, 1) == 1
            # shallower position (fewer empties) does not evict
            ctx.store(x2, o2, 1, -1, 4)
            assert ctx.probe(x1, o1, 1) == 1
            assert ctx.probe(x2, o2, 1) is None
            # deeper-or-equal position does
            ctx.store(x2, o2, 1, -1, 11)
            assert ctx.probe(x2, o2, 1) == -1
            assert ctx.probe(x1, o1, 1) is None

    def test_same_key_updates(self):
        for mod in backends():
            ctx = mod.SolveContext(64)
            ctx.store(5, 9, 0, 0, 8)
            ctx.store(5, 9, 0, 0, 3)  # same key always restores
            assert ctx.probe(5, 9, 0) == 0
            assert ctx.probe(5, 9, 1) is None  # side to move is part of the key

    def test_capacity_floor_and_rounding(self):
        for mod in backends():
            assert mod.SolveContext(1).capacity == 64
            assert mod.SolveContext(100).capacity == 128


class TestDispatch:
    def test_backend_for_limits(self):
        assert backend_for(8).NAME == "c"
        assert backend_for(9).NAME == "pure"

    def test_force_pure_env(self):
        code = (
            "from transversal._kernels import backend_for;"
            "print(backend_for(4).NAME)"
        )
        out = subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env={"PATH": "/usr/bin:/bin", "TRANSVERSAL_PURE": "1"},
        )
        assert out.stdout.strip() == "pure"
