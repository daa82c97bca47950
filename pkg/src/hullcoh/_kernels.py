"""Integer combinatorics of exterior-power bases.

Every table here is built from bitmasks: a k-subset of {0..n-1} is the
integer with those bits set, and subsets of a given size are ordered
lexicographically as sorted tuples.  The sign of inserting index ``m`` into
a subset ``K`` is ``(-1) ** popcount(K & ((1 << m) - 1))``.

Two interchangeable backends build the tables: numba-compiled loops and a
vectorized numpy path.  Set ``HULLCOH_NUMBA=0`` to force the numpy path
(it is also used when numba cannot be imported).
"""
from __future__ import annotations

import os
from functools import lru_cache
from itertools import combinations

import numpy as np

MAX_DIM = 20


def _numba_requested() -> bool:
    return os.environ.get("HULLCOH_NUMBA", "1").strip().lower() not in {"0", "false", "no", "off"}


try:
    if not _numba_requested():
        raise ImportError("disabled by HULLCOH_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag in tests
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


@lru_cache(maxsize=None)
def subset_masks(n: int, k: int) -> np.ndarray:
    """k-subsets of range(n) as bitmasks, lexicographic order."""
    if not 0 <= n <= MAX_DIM:
        raise ValueError(f"dimension {n} outside supported range 0..{MAX_DIM}")
    out = np.array([sum(1 << i for i in c) for c in combinations(range(n), k)], dtype=np.int64)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=None)
def mask_positions(n: int, k: int) -> np.ndarray:
    """Lookup array of length 2**n: position of each k-mask, -1 elsewhere."""
    pos = np.full(1 << n, -1, dtype=np.int64)
    m = subset_masks(n, k)
    pos[m] = np.arange(len(m), dtype=np.int64)
    pos.flags.writeable = False
    return pos


def popcount(x: int) -> int:
    return bin(x).count("1")


def insert_sign(mask: int, m: int) -> int:
    """Sign of moving e_m to its sorted slot in the wedge e_m ^ e_mask."""
    return -1 if popcount(mask & ((1 << m) - 1)) & 1 else 1


def merge_sign(a: int, b: int) -> int:
    """Sign of sorting the wedge e_a ^ e_b (a, b disjoint bitmasks)."""
    s = 0
    while b:
        low = b & -b
        s += popcount(a & ~((low << 1) - 1))
        b ^= low
    return -1 if s & 1 else 1


# -- numpy backend ---------------------------------------------------------

def _popcount_np(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x.astype(np.uint64)).astype(np.int64)


def _wedge_table_np(n, ma, mb, pos):
    A = ma[:, None]
    B = mb[None, :]
    ok = (A & B) == 0
    ia, ib = np.nonzero(ok)
    a = ma[ia]
    b = mb[ib]
    # inversions: pairs (s in a, t in b) with s > t
    inv = np.zeros(len(a), dtype=np.int64)
    for t in range(n):
        bit = (b >> t) & 1
        inv += bit * _popcount_np(a >> (t + 1))
    sign = np.where(inv & 1, -1, 1).astype(np.int64)
    return ia.astype(np.int64), ib.astype(np.int64), pos[a | b], sign


def _ce_action_table_np(n, rows, pos_low):
    # rows: (k+1)-masks; entries for deleting each member bit
    r_idx, c_idx, gen, sign = [], [], [], []
    for t in range(n):
        has = ((rows >> t) & 1).astype(bool)
        J = np.nonzero(has)[0]
        if len(J) == 0:
            continue
        below = _popcount_np(rows[J] & ((1 << t) - 1))
        r_idx.append(J)
        c_idx.append(pos_low[rows[J] ^ (1 << t)])
        gen.append(np.full(len(J), t, dtype=np.int64))
        sign.append(np.where(below & 1, -1, 1))
    if not r_idx:
        z = np.zeros(0, dtype=np.int64)
        return z, z, z, z
    return tuple(np.concatenate(x).astype(np.int64) for x in (r_idx, c_idx, gen, sign))


def _ce_bracket_table_np(n, rows, pos_same):
    out = [[] for _ in range(6)]
    for i in range(n):
        for j in range(i + 1, n):
            pair = (1 << i) | (1 << j)
            J = np.nonzero((rows & pair) == pair)[0]
            if len(J) == 0:
                continue
            masks = rows[J]
            a = _popcount_np(masks & ((1 << i) - 1))
            b = _popcount_np(masks & ((1 << j) - 1))
            K = masks ^ pair
            for m in range(n):
                free = ((K >> m) & 1) == 0
                sel = np.nonzero(free)[0]
                if len(sel) == 0:
                    continue
                Km = K[sel]
                ins = _popcount_np(Km & ((1 << m) - 1))
                sgn = np.where((a[sel] + b[sel] + ins) & 1, -1, 1)
                out[0].append(J[sel])
                out[1].append(np.full(len(sel), i))
                out[2].append(np.full(len(sel), j))
                out[3].append(np.full(len(sel), m))
                out[4].append(pos_same[Km | (1 << m)])
                out[5].append(sgn)
    if not out[0]:
        z = np.zeros(0, dtype=np.int64)
        return (z,) * 6
    return tuple(np.concatenate(x).astype(np.int64) for x in out)


# -- numba backend ---------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _pc(x):
        c = 0
        while x:
            x &= x - 1
            c += 1
        return c

    @njit(cache=True)
    def _wedge_table_nb(n, ma, mb, pos):
        cap = len(ma) * len(mb)
        ia = np.empty(cap, dtype=np.int64)
        ib = np.empty(cap, dtype=np.int64)
        io = np.empty(cap, dtype=np.int64)
        sg = np.empty(cap, dtype=np.int64)
        c = 0
        for x in range(len(ma)):
            a = ma[x]
            for y in range(len(mb)):
                b = mb[y]
                if a & b:
                    continue
                inv = 0
                for t in range(n):
                    if (b >> t) & 1:
                        inv += _pc(a >> (t + 1))
                ia[c] = x
                ib[c] = y
                io[c] = pos[a | b]
                sg[c] = -1 if inv & 1 else 1
                c += 1
        return ia[:c], ib[:c], io[:c], sg[:c]

    @njit(cache=True)
    def _ce_action_table_nb(n, rows, pos_low):
        cap = len(rows) * n
        r = np.empty(cap, dtype=np.int64)
        col = np.empty(cap, dtype=np.int64)
        gen = np.empty(cap, dtype=np.int64)
        sg = np.empty(cap, dtype=np.int64)
        c = 0
        for t in range(n):
            for x in range(len(rows)):
                J = rows[x]
                if (J >> t) & 1:
                    below = _pc(J & ((1 << t) - 1))
                    r[c] = x
                    col[c] = pos_low[J ^ (1 << t)]
                    gen[c] = t
                    sg[c] = -1 if below & 1 else 1
                    c += 1
        return r[:c], col[:c], gen[:c], sg[:c]

    @njit(cache=True)
    def _ce_bracket_table_nb(n, rows, pos_same):
        cap = len(rows) * n * n * n + 1
        r = np.empty(cap, dtype=np.int64)
        gi = np.empty(cap, dtype=np.int64)
        gj = np.empty(cap, dtype=np.int64)
        gm = np.empty(cap, dtype=np.int64)
        col = np.empty(cap, dtype=np.int64)
        sg = np.empty(cap, dtype=np.int64)
        c = 0
        for i in range(n):
            for j in range(i + 1, n):
                pair = (1 << i) | (1 << j)
                for x in range(len(rows)):
                    J = rows[x]
                    if (J & pair) != pair:
                        continue
                    a = _pc(J & ((1 << i) - 1))
                    b = _pc(J & ((1 << j) - 1))
                    K = J ^ pair
                    for m in range(n):
                        if (K >> m) & 1:
                            continue
                        ins = _pc(K & ((1 << m) - 1))
                        r[c] = x
                        gi[c] = i
                        gj[c] = j
                        gm[c] = m
                        col[c] = pos_same[K | (1 << m)]
                        sg[c] = -1 if (a + b + ins) & 1 else 1
                        c += 1
        return r[:c], gi[:c], gj[:c], gm[:c], col[:c], sg[:c]


def _select(backend: str | None):
    backend = backend or BACKEND
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but unavailable")
    if backend not in {"numba", "numpy"}:
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def _freeze(arrays):
    out = []
    for a in arrays:
        a = np.ascontiguousarray(a, dtype=np.int64)
        a.flags.writeable = False
        out.append(a)
    return tuple(out)


@lru_cache(maxsize=None)
def wedge_table(n: int, a: int, b: int, backend: str | None = None):
    """All nonzero products e_I ^ e_J for |I| = a, |J| = b.

    Returns ``(index_I, index_J, index_out, sign)`` arrays.
    """
    if a + b > n:
        z = np.zeros(0, dtype=np.int64)
        return _freeze((z, z, z, z))
    ma, mb, pos = subset_masks(n, a), subset_masks(n, b), mask_positions(n, a + b)
    fn = _wedge_table_nb if _select(backend) == "numba" else _wedge_table_np
    return _freeze(fn(n, ma, mb, pos))


@lru_cache(maxsize=None)
def ce_action_table(n: int, k: int, backend: str | None = None):
    """Module-action terms of the CE differential from degree k to k+1.

    ``(row, col, generator, sign)``: (d w)_row gets ``sign * r(X_generator) w_col``.
    """
    rows, pos_low = subset_masks(n, k + 1), mask_positions(n, k)
    fn = _ce_action_table_nb if _select(backend) == "numba" else _ce_action_table_np
    return _freeze(fn(n, rows, pos_low))


@lru_cache(maxsize=None)
def ce_bracket_table(n: int, k: int, backend: str | None = None):
    """Bracket terms of the CE differential from degree k to k+1.

    ``(row, i, j, m, col, sign)``: (d w)_row gets ``sign * c^m_ij * w_col``.
    """
    rows, pos_same = subset_masks(n, k + 1), mask_positions(n, k)
    if k == 0 or len(rows) == 0:
        z = np.zeros(0, dtype=np.int64)
        return _freeze((z,) * 6)
    fn = _ce_bracket_table_nb if _select(backend) == "numba" else _ce_bracket_table_np
    return _freeze(fn(n, rows, pos_same))
