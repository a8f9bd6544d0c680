"""The group of good transformations and canonical keys under it.

A good transformation is any combination of reflecting across the main
diagonal and permuting rows or columns; such maps permute the transversals
and therefore preserve position values. Normal form here: reflect first
(optional), then apply the row and column permutations. Every group element
is expressible this way because reflection conjugates row permutations into
column permutations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import Board, Cell

EXACT_KEY_BOUND = 5


def _check_perm(perm, n):
    if len(perm) != n or sorted(perm) != list(range(1, n + 1)):
        raise ValueError("not a permutation of 1..%d: %r" % (n, perm))


@dataclass(frozen=True)
class GoodTransform:
    """transpose: reflect across the main diagonal first; then rows move by
    row_perm and columns by col_perm. Perms are 1-indexed tuples: row a
    lands on row_perm[a-1]."""

    transpose: bool
    row_perm: tuple
    col_perm: tuple

    def __post_init__(self):
        n = len(self.row_perm)
        _check_perm(self.row_perm, n)
        _check_perm(self.col_perm, n)

    @property
    def n(self) -> int:
        return len(self.row_perm)

    def to_dict(self) -> dict:
        return {
            "transpose": self.transpose,
            "row_perm": list(self.row_perm),
            "col_perm": list(self.col_perm),
        }

    @staticmethod
    def from_dict(d: dict) -> "GoodTransform":
        return GoodTransform(
            bool(d["transpose"]), tuple(d["row_perm"]), tuple(d["col_perm"])
        )


def identity(n: int) -> GoodTransform:
    e = tuple(range(1, n + 1))
    return GoodTransform(False, e, e)


def reflection(n: int) -> GoodTransform:
    e = tuple(range(1, n + 1))
    return GoodTransform(True, e, e)


def _swapped(n, i, j):
    p = list(range(1, n + 1))
    p[i - 1], p[j - 1] = j, i
    return tuple(p)


def swap_rows(n: int, i: int, j: int) -> GoodTransform:
    e = tuple(range(1, n + 1))
    return GoodTransform(False, _swapped(n, i, j), e)


def swap_cols(n: int, i: int, j: int) -> GoodTransform:
    e = tuple(range(1, n + 1))
    return GoodTransform(False, e, _swapped(n, i, j))


def same_permutation(n: int, perm) -> GoodTransform:
    """The same permutation applied to rows and to columns; maps the main
    diagonal to itself."""
    perm = tuple(perm)
    return GoodTransform(False, perm, perm)


def map_cell(t: GoodTransform, c: Cell) -> Cell:
    a, b = c
    n = t.n
    if not (1 <= a <= n and 1 <= b <= n):
        raise ValueError("cell %r outside 1..%d" % (tuple(c), n))
    if t.transpose:
        a, b = b, a
    return Cell(t.row_perm[a - 1], t.col_perm[b - 1])


def apply(t: GoodTransform, board: Board) -> Board:
    if t.n != board.n:
        raise ValueError("transform size %d vs board size %d" % (t.n, board.n))
    n = board.n
    x = o = 0
    for r in range(1, n + 1):
        for c in range(1, n + 1):
            bit = 1 << ((r - 1) * n + (c - 1))
            if board.x_bits & bit or board.o_bits & bit:
                tr, tc = map_cell(t, Cell(r, c))
                tbit = 1 << ((tr - 1) * n + (tc - 1))
                if board.x_bits & bit:
                    x |= tbit
                else:
                    o |= tbit
    return Board(n, x, o)


def compose(t1: GoodTransform, t2: GoodTransform) -> GoodTransform:
    """The transform acting as t2 first, then t1."""
    if t1.n != t2.n:
        raise ValueError("transform sizes differ: %d vs %d" % (t1.n, t2.n))
    n = t1.n
    if t1.transpose:
        # reflecting swaps the roles of t2's two permutations
        rp = tuple(t1.row_perm[t2.col_perm[i] - 1] for i in range(n))
        cp = tuple(t1.col_perm[t2.row_perm[i] - 1] for i in range(n))
    else:
        rp = tuple(t1.row_perm[t2.row_perm[i] - 1] for i in range(n))
        cp = tuple(t1.col_perm[t2.col_perm[i] - 1] for i in range(n))
    return GoodTransform(t1.transpose != t2.transpose, rp, cp)


def invert(t: GoodTransform) -> GoodTransform:
    n = t.n
    rinv = [0] * n
    cinv = [0] * n
    for i in range(n):
        rinv[t.row_perm[i] - 1] = i + 1
        cinv[t.col_perm[i] - 1] = i + 1
    if t.transpose:
        return GoodTransform(True, tuple(cinv), tuple(rinv))
    return GoodTransform(False, tuple(rinv), tuple(cinv))


# -- canonical keys ---------------------------------------------------------

_TABLES = {}


def _tables(n):
    if n not in _TABLES:
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
        p3 = 3 ** np.arange(n, dtype=np.int64)
        p3block = 3 ** (np.arange(n, dtype=np.int64) * n)
        _TABLES[n] = (perms, p3, p3block)
    return _TABLES[n]


def _min_code(board):
    n = board.n
    perms, p3, p3block = _tables(n)
    g = np.zeros((n, n), dtype=np.int64)
    rest = board.x_bits
    while rest:
        bit = rest & -rest
        rest ^= bit
        i = bit.bit_length() - 1
        g[i // n, i % n] = 1
    rest = board.o_bits
    while rest:
        bit = rest & -rest
        rest ^= bit
        i = bit.bit_length() - 1
        g[i // n, i % n] = 2
    best = None
    for b in (g, g.T):
        # row_codes[r, j]: row r re-encoded with its columns ordered by perm j
        row_codes = np.einsum("rjb,b->rj", b[:, perms], p3)
        stacked = row_codes[perms]  # [i, a, j] = row perms[i, a] under perm j
        keys = np.einsum("a,iaj->ij", p3block, stacked)
        k = int(keys.min())
        if best is None or k < best:
            best = k
    return best


def canonical_key(board: Board, mode: str = "exact", bound: int = EXACT_KEY_BOUND):
    """Opaque position key.

    raw: injective encoding of the exact position. exact: minimum encoding
    over all 2 * n! * n! good transforms, so two boards get equal keys iff
    one is a good transform of the other; permitted only for n <= bound.
    """
    if mode == "raw":
        return ("raw", board.n, board.x_bits, board.o_bits)
    if mode != "exact":
        raise ValueError("mode must be 'exact' or 'raw', got %r" % (mode,))
    if board.n > bound:
        raise ValueError(
            "exact canonical keys limited to n <= %d, got n = %d" % (bound, board.n)
        )
    return ("exact", board.n, _min_code(board))
