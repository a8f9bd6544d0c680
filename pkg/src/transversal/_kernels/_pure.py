"""Pure-Python search kernels over bit-packed positions.

A position is a pair of ints (x_bits, o_bits); cell (row r, col c), 0-based,
occupies bit r * n + c. Everything here works on raw ints so the compiled
backend can mirror it operation for operation: same move ordering, same hash,
same table policy, hence identical node counts. Friendly wrappers live in
transversal.core and transversal.solver.

This backend handles any n the package supports (n <= 16); the compiled one
is limited to n <= 8 by its 64-bit masks.
"""

NAME = "pure"

M64 = (1 << 64) - 1


class SearchAborted(Exception):
    """Raised inside the search when the node budget runs out."""


def _kuhn(player_bits, n):
    """Maximum bipartite matching rows->cols over the player's stones.

    Returns (size, match_col) where match_col[c] is the 0-based row matched
    to column c, or -1.
    """
    mask = (1 << n) - 1
    rows = [(player_bits >> (r * n)) & mask for r in range(n)]
    match_col = [-1] * n
    size = 0
    for r in range(n):
        if rows[r] and _augment(rows, match_col, r, [0]):
            size += 1
    return size, match_col


def _augment(rows, match_col, r, visited):
    # visited is a shared one-element list holding a column bitmask; the
    # free set must be recomputed each round because recursion grows it.
    while True:
        free = rows[r] & ~visited[0]
        if not free:
            return False
        bit = free & -free
        visited[0] |= bit
        c = bit.bit_length() - 1
        if match_col[c] < 0 or _augment(rows, match_col, match_col[c], visited):
            match_col[c] = r
            return True


def matching_size(player_bits, n):
    return _kuhn(player_bits, n)[0]


def matching_cols(player_bits, n):
    return _kuhn(player_bits, n)


def has_transversal(player_bits, n):
    if player_bits.bit_count() < n:
        return False
    return _kuhn(player_bits, n)[0] == n


def threat_bits(player_bits, opponent_bits, n):
    """Empty cells whose occupation gives the player a full transversal.

    A stone raises the matching by at most one, so candidates exist only
    when the base matching is already n - 1 (or n, the degenerate case
    where the player owns a transversal and every empty cell 'completes'
    one again).
    """
    full = (1 << (n * n)) - 1
    empty = full & ~player_bits & ~opponent_bits
    base = _kuhn(player_bits, n)[0]
    if base >= n:
        return empty
    if base < n - 1:
        return 0
    out = 0
    rest = empty
    while rest:
        bit = rest & -rest
        rest ^= bit
        if _kuhn(player_bits | bit, n)[0] == n:
            out |= bit
    return out


def ordered_moves(x_bits, o_bits, n, x_to_move):
    """Move list for the side to move: threat-creating cells first, then
    cells raising the mover's matching, then the rest; row-major inside
    each class. A move that completes a transversal outright counts as
    threat-creating."""
    full = (1 << (n * n)) - 1
    empty = full & ~x_bits & ~o_bits
    mine = x_bits if x_to_move else o_bits
    opp = o_bits if x_to_move else x_bits
    base = _kuhn(mine, n)[0]
    creates = []
    raises_ = []
    rest = []
    e = empty
    while e:
        bit = e & -e
        e ^= bit
        idx = bit.bit_length() - 1
        grown = mine | bit
        m2 = _kuhn(grown, n)[0]
        if m2 == n or threat_bits(grown, opp, n):
            creates.append(idx)
        elif m2 > base:
            raises_.append(idx)
        else:
            rest.append(idx)
    return creates + raises_ + rest


def _fold64(v):
    return (v ^ (v >> 64) ^ (v >> 128) ^ (v >> 192)) & M64


def _mix(x, o, stm):
    h = (
        _fold64(x) * 0x9E3779B97F4A7C15
        + _fold64(o) * 0xC2B2AE3D27D4EB4F
        + stm * 0xD6E8FEB86659FD93
    ) & M64
    h ^= h >> 30
    h = (h * 0xBF58476D1CE4E5B9) & M64
    h ^= h >> 27
    h = (h * 0x94D049BB133111EB) & M64
    h ^= h >> 31
    return h


class SolveContext:
    """Search counters plus a fixed-slot transposition table.

    Slots are replaced when vacant, when the key matches, or when the new
    position has at least as many empty cells (positions nearer the root
    are worth more). emp == 255 marks a vacant slot; the solver bounds
    searches to 16 empty cells so real counts never collide with it.
    A context must not be shared across board sizes or variants.
    """

    def __init__(self, memo_capacity=1 << 20, node_limit=None):
        cap = 64
        while cap < memo_capacity:
            cap <<= 1
        self.capacity = cap
        self._mask = cap - 1
        self._kx = [0] * cap
        self._ko = [0] * cap
        self._stm = bytearray(cap)
        self._val = bytearray(cap)  # stored value + 1
        self._emp = bytearray(b"\xff" * cap)
        self.nodes = 0
        self.hits = 0
        self.node_limit = node_limit
        self.sym_cache = {}

    def probe(self, x, o, stm):
        i = _mix(x, o, stm) & self._mask
        if (
            self._emp[i] != 255
            and self._kx[i] == x
            and self._ko[i] == o
            and self._stm[i] == stm
        ):
            return self._val[i] - 1
        return None

    def store(self, x, o, stm, val, emp):
        i = _mix(x, o, stm) & self._mask
        cur = self._emp[i]
        if cur == 255 or emp >= cur or (
            self._kx[i] == x and self._ko[i] == o and self._stm[i] == stm
        ):
            self._kx[i] = x
            self._ko[i] = o
            self._stm[i] = stm
            self._val[i] = val + 1
            self._emp[i] = emp


def _negamax(ctx, x, o, n, x_to_move, mb, full):
    """Exact value from the mover's viewpoint: 1 win, 0 draw, -1 loss.

    Entry positions are live: no side holds a transversal (the parent's
    threat shortcut catches completions one ply up), and in Maker-Breaker
    the Breaker adjudication below catches dead Maker positions.
    """
    ctx.nodes += 1
    if ctx.node_limit is not None and ctx.nodes > ctx.node_limit:
        raise SearchAborted
    if mb and _kuhn(full & ~o, n)[0] < n:
        return -1 if x_to_move else 1
    empty = full & ~x & ~o
    if empty == 0:
        return 0
    mine, opp = (x, o) if x_to_move else (o, x)
    if (not mb or x_to_move) and threat_bits(mine, opp, n):
        return 1
    emp_count = empty.bit_count()
    stm = 1 if x_to_move else 0
    use_tt = emp_count >= 3
    if use_tt:
        hit = ctx.probe(x, o, stm)
        if hit is not None:
            ctx.hits += 1
            return hit
    best = -2
    for idx in ordered_moves(x, o, n, x_to_move):
        bit = 1 << idx
        if x_to_move:
            v = -_negamax(ctx, x | bit, o, n, False, mb, full)
        else:
            v = -_negamax(ctx, x, o | bit, n, True, mb, full)
        if v > best:
            best = v
            if best == 1:
                break
    if use_tt:
        ctx.store(x, o, stm, best, emp_count)
    return best


def negamax(ctx, x, o, n, x_to_move, mb):
    """Public entry to the recursive search (mover-relative value)."""
    return _negamax(ctx, x, o, n, x_to_move, mb, (1 << (n * n)) - 1)


def solve_position(ctx, x, o, n, x_to_move, mb):
    """Root search. Returns (value for the mover, best cell index or -1).

    The root mirrors _negamax's entry checks so callers may hand it any
    live position; a terminal position comes back with index -1.
    """
    full = (1 << (n * n)) - 1
    ctx.nodes += 1
    if mb and _kuhn(full & ~o, n)[0] < n:
        return (-1 if x_to_move else 1), -1
    empty = full & ~x & ~o
    if empty == 0:
        return 0, -1
    mine, opp = (x, o) if x_to_move else (o, x)
    if not mb or x_to_move:
        tb = threat_bits(mine, opp, n)
        if tb:
            return 1, (tb & -tb).bit_length() - 1
    best = -2
    best_idx = -1
    for idx in ordered_moves(x, o, n, x_to_move):
        bit = 1 << idx
        if x_to_move:
            v = -_negamax(ctx, x | bit, o, n, False, mb, full)
        else:
            v = -_negamax(ctx, x, o | bit, n, True, mb, full)
        if v > best:
            best = v
            best_idx = idx
            if best == 1:
                break
    emp_count = empty.bit_count()
    if emp_count >= 3:
        ctx.store(x, o, 1 if x_to_move else 0, best, emp_count)
    return best, best_idx
