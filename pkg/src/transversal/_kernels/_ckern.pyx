# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels for boards up to n = 8 (64-bit masks).

Mirror of _pure operation for operation: same move ordering, same hash,
same table policy, so solves produce identical node counts. The dispatch
layer guarantees n <= 8; wrappers still check."""

from libc.stdint cimport int8_t, uint8_t, uint64_t
from libc.stdlib cimport free, malloc
from libc.string cimport memset

from ._pure import SearchAborted

NAME = "c"

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


cdef inline uint64_t _full_mask(int n) nogil:
    if n * n == 64:
        return <uint64_t>0xFFFFFFFFFFFFFFFF
    return (<uint64_t>1 << (n * n)) - 1


cdef int _augment(uint64_t* rows, int* match_col, int r, uint64_t* visited) nogil:
    cdef uint64_t free_cols, bit
    cdef int c
    while True:
        free_cols = rows[r] & ~visited[0]
        if free_cols == 0:
            return 0
        bit = free_cols & (0 - free_cols)
        visited[0] |= bit
        c = __builtin_ctzll(bit)
        if match_col[c] < 0 or _augment(rows, match_col, match_col[c], visited):
            match_col[c] = r
            return 1


cdef int _kuhn(uint64_t bits, int n, int* match_col) nogil:
    cdef uint64_t rows[8]
    cdef uint64_t visited
    cdef uint64_t mask = (<uint64_t>1 << n) - 1
    cdef int r, size = 0
    for r in range(n):
        rows[r] = (bits >> (r * n)) & mask
        match_col[r] = -1
    for r in range(n):
        if rows[r] != 0:
            visited = 0
            if _augment(rows, match_col, r, &visited):
                size += 1
    return size


cdef inline int _kuhn_size(uint64_t bits, int n) nogil:
    cdef int match_col[8]
    return _kuhn(bits, n, match_col)


cdef uint64_t _threat_bits(uint64_t player, uint64_t opp, int n) nogil:
    cdef uint64_t full = _full_mask(n)
    cdef uint64_t empty = full & ~player & ~opp
    cdef uint64_t out = 0, rest, bit
    cdef int base = _kuhn_size(player, n)
    if base >= n:
        return empty
    if base < n - 1:
        return 0
    rest = empty
    while rest:
        bit = rest & (0 - rest)
        rest ^= bit
        if _kuhn_size(player | bit, n) == n:
            out |= bit
    return out


cdef int _ordered_moves(uint64_t x, uint64_t o, int n, bint x_to_move, int* out) nogil:
    cdef uint64_t full = _full_mask(n)
    cdef uint64_t empty = full & ~x & ~o
    cdef uint64_t mine = x if x_to_move else o
    cdef uint64_t opp = o if x_to_move else x
    cdef int creates[64]
    cdef int raises_[64]
    cdef int plain[64]
    cdef int nc = 0, nr = 0, np_ = 0
    cdef int base = _kuhn_size(mine, n)
    cdef uint64_t e = empty, bit, grown
    cdef int idx, m2, i, total = 0
    while e:
        bit = e & (0 - e)
        e ^= bit
        idx = __builtin_ctzll(bit)
        grown = mine | bit
        m2 = _kuhn_size(grown, n)
        if m2 == n or _threat_bits(grown, opp, n) != 0:
            creates[nc] = idx
            nc += 1
        elif m2 > base:
            raises_[nr] = idx
            nr += 1
        else:
            plain[np_] = idx
            np_ += 1
    for i in range(nc):
        out[total] = creates[i]
        total += 1
    for i in range(nr):
        out[total] = raises_[i]
        total += 1
    for i in range(np_):
        out[total] = plain[i]
        total += 1
    return total


cdef inline uint64_t _mix(uint64_t x, uint64_t o, uint64_t stm) nogil:
    cdef uint64_t h = (
        x * <uint64_t>0x9E3779B97F4A7C15
        + o * <uint64_t>0xC2B2AE3D27D4EB4F
        + stm * <uint64_t>0xD6E8FEB86659FD93
    )
    h ^= h >> 30
    h *= <uint64_t>0xBF58476D1CE4E5B9
    h ^= h >> 27
    h *= <uint64_t>0x94D049BB133111EB
    h ^= h >> 31
    return h


cdef class SolveContext:
    """Fixed-slot transposition table plus counters; see the pure twin for
    the replacement policy."""

    cdef uint64_t* _kx
    cdef uint64_t* _ko
    cdef uint8_t* _stm
    cdef int8_t* _val
    cdef uint8_t* _emp
    cdef uint64_t _mask
    cdef bint _has_limit
    cdef unsigned long long _limit
    cdef public unsigned long long nodes
    cdef public unsigned long long hits
    cdef public object capacity
    cdef public dict sym_cache

    def __cinit__(self, memo_capacity=1 << 20, node_limit=None):
        cdef uint64_t cap = 64
        while cap < <uint64_t>memo_capacity:
            cap <<= 1
        self.capacity = cap
        self._mask = cap - 1
        self._kx = <uint64_t*>malloc(cap * sizeof(uint64_t))
        self._ko = <uint64_t*>malloc(cap * sizeof(uint64_t))
        self._stm = <uint8_t*>malloc(cap)
        self._val = <int8_t*>malloc(cap)
        self._emp = <uint8_t*>malloc(cap)
        if not (self._kx and self._ko and self._stm and self._val and self._emp):
            raise MemoryError
        memset(self._emp, 0xFF, cap)
        self.nodes = 0
        self.hits = 0
        self.sym_cache = {}
        self.node_limit = node_limit

    def __dealloc__(self):
        free(self._kx)
        free(self._ko)
        free(self._stm)
        free(self._val)
        free(self._emp)

    @property
    def node_limit(self):
        return self._limit if self._has_limit else None

    @node_limit.setter
    def node_limit(self, value):
        if value is None:
            self._has_limit = False
            self._limit = 0
        else:
            self._has_limit = True
            self._limit = value

    cdef inline int _probe(self, uint64_t x, uint64_t o, uint8_t stm) nogil:
        # returns -2 on miss
        cdef uint64_t i = _mix(x, o, stm) & self._mask
        if self._emp[i] != 255 and self._kx[i] == x and self._ko[i] == o and self._stm[i] == stm:
            return self._val[i]
        return -2

    cdef inline void _store(self, uint64_t x, uint64_t o, uint8_t stm, int val, int emp) nogil:
        cdef uint64_t i = _mix(x, o, stm) & self._mask
        cdef int cur = self._emp[i]
        if cur == 255 or emp >= cur or (
            self._kx[i] == x and self._ko[i] == o and self._stm[i] == stm
        ):
            self._kx[i] = x
            self._ko[i] = o
            self._stm[i] = stm
            self._val[i] = val
            self._emp[i] = emp

    def probe(self, x, o, stm):
        cdef int v = self._probe(<uint64_t>x, <uint64_t>o, <uint8_t>stm)
        return None if v == -2 else v

    def store(self, x, o, stm, val, emp):
        self._store(<uint64_t>x, <uint64_t>o, <uint8_t>stm, <int>val, <int>emp)


cdef int _negamax(SolveContext ctx, uint64_t x, uint64_t o, int n,
                  bint x_to_move, bint mb, uint64_t full) except? -9:
    cdef uint64_t empty, mine, opp
    cdef int emp_count, best, v, i, count
    cdef uint8_t stm
    cdef bint use_tt
    cdef int moves[64]
    cdef uint64_t bit
    ctx.nodes += 1
    if ctx._has_limit and ctx.nodes > ctx._limit:
        raise SearchAborted
    if mb and _kuhn_size(full & ~o, n) < n:
        return -1 if x_to_move else 1
    empty = full & ~x & ~o
    if empty == 0:
        return 0
    if x_to_move:
        mine, opp = x, o
    else:
        mine, opp = o, x
    if (not mb or x_to_move) and _threat_bits(mine, opp, n) != 0:
        return 1
    emp_count = __builtin_popcountll(empty)
    stm = 1 if x_to_move else 0
    use_tt = emp_count >= 3
    if use_tt:
        v = ctx._probe(x, o, stm)
        if v != -2:
            ctx.hits += 1
            return v
    best = -2
    count = _ordered_moves(x, o, n, x_to_move, moves)
    for i in range(count):
        bit = <uint64_t>1 << moves[i]
        if x_to_move:
            v = -_negamax(ctx, x | bit, o, n, False, mb, full)
        else:
            v = -_negamax(ctx, x, o | bit, n, True, mb, full)
        if v > best:
            best = v
            if best == 1:
                break
    if use_tt:
        ctx._store(x, o, stm, best, emp_count)
    return best


# -- Python-visible wrappers ------------------------------------------------


cdef inline void _check_n(int n):
    if not 1 <= n <= 8:
        raise ValueError("compiled kernel handles 1 <= n <= 8, got %d" % n)


def matching_size(player_bits, n):
    _check_n(n)
    return _kuhn_size(<uint64_t>player_bits, <int>n)


def matching_cols(player_bits, n):
    _check_n(n)
    cdef int match_col[8]
    cdef int size = _kuhn(<uint64_t>player_bits, <int>n, match_col)
    return size, [match_col[c] for c in range(n)]


def has_transversal(player_bits, n):
    _check_n(n)
    cdef uint64_t bits = <uint64_t>player_bits
    if __builtin_popcountll(bits) < <int>n:
        return False
    return _kuhn_size(bits, <int>n) == <int>n


def threat_bits(player_bits, opponent_bits, n):
    _check_n(n)
    return _threat_bits(<uint64_t>player_bits, <uint64_t>opponent_bits, <int>n)


def ordered_moves(x_bits, o_bits, n, x_to_move):
    _check_n(n)
    cdef int moves[64]
    cdef int count = _ordered_moves(
        <uint64_t>x_bits, <uint64_t>o_bits, <int>n, <bint>x_to_move, moves
    )
    return [moves[i] for i in range(count)]


def negamax(ctx, x, o, n, x_to_move, mb):
    _check_n(n)
    return _negamax(
        <SolveContext>ctx, <uint64_t>x, <uint64_t>o, <int>n,
        <bint>x_to_move, <bint>mb, _full_mask(<int>n),
    )


def solve_position(ctx, x_bits, o_bits, n, x_to_move, mb_flag):
    _check_n(n)
    cdef SolveContext c = <SolveContext>ctx
    cdef uint64_t x = <uint64_t>x_bits
    cdef uint64_t o = <uint64_t>o_bits
    cdef int nn = <int>n
    cdef bint xtm = <bint>x_to_move
    cdef bint mb = <bint>mb_flag
    cdef uint64_t full = _full_mask(nn)
    cdef uint64_t empty, mine, opp, tb, bit
    cdef int best, best_idx, v, i, count, emp_count
    cdef int moves[64]
    c.nodes += 1
    if mb and _kuhn_size(full & ~o, nn) < nn:
        return (-1 if xtm else 1), -1
    empty = full & ~x & ~o
    if empty == 0:
        return 0, -1
    if xtm:
        mine, opp = x, o
    else:
        mine, opp = o, x
    if not mb or xtm:
        tb = _threat_bits(mine, opp, nn)
        if tb != 0:
            return 1, __builtin_ctzll(tb & (0 - tb))
    best = -2
    best_idx = -1
    count = _ordered_moves(x, o, nn, xtm, moves)
    for i in range(count):
        bit = <uint64_t>1 << moves[i]
        if xtm:
            v = -_negamax(c, x | bit, o, nn, False, mb, full)
        else:
            v = -_negamax(c, x, o | bit, nn, True, mb, full)
        if v > best:
            best = v
            best_idx = moves[i]
            if best == 1:
                break
    emp_count = __builtin_popcountll(empty)
    if emp_count >= 3:
        c._store(x, o, 1 if xtm else 0, best, emp_count)
    return best, best_idx
