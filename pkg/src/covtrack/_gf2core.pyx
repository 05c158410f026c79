# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2) reduction kernels.

Same contract as _gf2pure, with vectors packed into uint64 words. Column
reduction of triangle boundaries is the hot loop of every Betti number in
the hop filtration, so it runs entirely in C here.
"""

import numpy as np

cdef extern from *:
    int __builtin_clzll(unsigned long long) nogil

ctypedef unsigned long long u64


cdef inline long _top_bit(u64* v, long nw) nogil:
    cdef long w
    for w in range(nw - 1, -1, -1):
        if v[w]:
            return (w << 6) + 63 - __builtin_clzll(v[w])
    return -1


cdef long _insert_column(u64* col, u64* basis, long* pivot_row, long nw, long rank) nogil:
    """Reduce col against basis in place; append if independent.

    Returns the new rank. basis rows are indexed by pivot via pivot_row.
    """
    cdef long p, row, w
    cdef u64* brow
    while True:
        p = _top_bit(col, nw)
        if p < 0:
            return rank
        row = pivot_row[p]
        if row < 0:
            brow = basis + rank * nw
            for w in range(nw):
                brow[w] = col[w]
            pivot_row[p] = rank
            return rank + 1
        brow = basis + row * nw
        for w in range(nw):
            col[w] ^= brow[w]


def reduce_triangle_columns(tri_cols, long n_edges, ceiling=None):
    """Reduce columns given as an int32 (ntri, 3) array of edge indices.

    Returns (rank, saturated, basis, pivot_bits): basis is a (rank, nw)
    uint64 array, pivot_bits the top bit of each stored row.
    """
    cdef long cap = n_edges if ceiling is None else min(int(ceiling), n_edges)
    cdef long nw = (n_edges + 63) >> 6 if n_edges else 1
    cdef long ceil_rank = -1 if ceiling is None else int(ceiling)
    tri = np.ascontiguousarray(tri_cols, dtype=np.int32)
    cdef int[:, ::1] t = tri if tri.size else np.empty((0, 3), dtype=np.int32)
    cdef long ntri = t.shape[0]
    if ceil_rank == 0:
        return 0, True, np.empty((0, nw), dtype=np.uint64), []

    basis_arr = np.zeros((min(cap, ntri) if ntri else 0, nw), dtype=np.uint64)
    cdef u64[:, ::1] basis = basis_arr if basis_arr.size else np.zeros((1, nw), dtype=np.uint64)
    pivot_arr = np.full(n_edges if n_edges else 1, -1, dtype=np.int64)
    cdef long[::1] pivot_row = pivot_arr
    col_arr = np.zeros(nw, dtype=np.uint64)
    cdef u64[::1] col = col_arr

    cdef long rank = 0, i, w, a, b, c
    cdef bint saturated = False
    for i in range(ntri):
        for w in range(nw):
            col[w] = 0
        a = t[i, 0]; b = t[i, 1]; c = t[i, 2]
        col[a >> 6] ^= (<u64>1) << (a & 63)
        col[b >> 6] ^= (<u64>1) << (b & 63)
        col[c >> 6] ^= (<u64>1) << (c & 63)
        rank = _insert_column(&col[0], &basis[0, 0], &pivot_row[0], nw, rank)
        if ceil_rank >= 0 and rank >= ceil_rank:
            saturated = True
            break
    pivot_bits = [int(_top_bit(&basis[r, 0], nw)) for r in range(rank)]
    return rank, saturated, basis_arr[:rank].copy(), pivot_bits


def flag_reduce(long n, edges_sorted, long n_edges_total, ceiling=None):
    """Reduce the flag-triangle columns of an edge set, enumerated in C.

    edges_sorted: int32 (E, 3) array of (u, v, edge_index) rows sorted by
    (u, v) with u < v; edge_index addresses bits in the ambient edge space
    of size n_edges_total (≥ E). Returns same tuple as
    reduce_triangle_columns.
    """
    cdef long ceil_rank = -1 if ceiling is None else int(ceiling)
    cdef long nw = (n_edges_total + 63) >> 6 if n_edges_total else 1
    es = np.ascontiguousarray(edges_sorted, dtype=np.int32)
    cdef int[:, ::1] e = es if es.size else np.empty((0, 3), dtype=np.int32)
    cdef long ne = e.shape[0]
    if ceil_rank == 0 or ne == 0:
        return 0, ceil_rank == 0, np.empty((0, nw), dtype=np.uint64), []

    cdef long nwv = (n + 1 + 63) >> 6  # vertex-bitset words, vertices 1..n
    adj_arr = np.zeros((n + 1, nwv), dtype=np.uint64)
    cdef u64[:, ::1] adj = adj_arr
    eind_arr = np.full((n + 1, n + 1), -1, dtype=np.int32)
    cdef int[:, ::1] eind = eind_arr
    cdef long i, u, v, w, k, p
    for i in range(ne):
        u = e[i, 0]; v = e[i, 1]
        adj[u, v >> 6] |= (<u64>1) << (v & 63)
        adj[v, u >> 6] |= (<u64>1) << (u & 63)
        eind[u, v] = e[i, 2]
        eind[v, u] = e[i, 2]

    cdef long cap = n_edges_total if ceil_rank < 0 else ceil_rank
    basis_arr = np.zeros((min(cap, n_edges_total), nw), dtype=np.uint64)
    cdef u64[:, ::1] basis = basis_arr if basis_arr.size else np.zeros((1, nw), dtype=np.uint64)
    pivot_arr = np.full(n_edges_total, -1, dtype=np.int64)
    cdef long[::1] pivot_row = pivot_arr
    col_arr = np.zeros(nw, dtype=np.uint64)
    cdef u64[::1] col = col_arr

    cdef long rank = 0, a, b, c
    cdef bint saturated = False
    cdef u64 common, low
    cdef long wstart, bit
    for i in range(ne):
        if saturated:
            break
        u = e[i, 0]; v = e[i, 1]
        a = e[i, 2]
        # shared neighbors w > v, ascending
        wstart = (v + 1) >> 6
        for k in range(wstart, nwv):
            common = adj[u, k] & adj[v, k]
            if k == wstart and ((v + 1) & 63):
                common &= (~(<u64>0)) << ((v + 1) & 63)
            while common:
                low = common & (~common + 1)
                bit = 63 - __builtin_clzll(low)
                common ^= low
                w = (k << 6) + bit
                b = eind[u, w]
                c = eind[v, w]
                for p in range(nw):
                    col[p] = 0
                col[a >> 6] ^= (<u64>1) << (a & 63)
                col[b >> 6] ^= (<u64>1) << (b & 63)
                col[c >> 6] ^= (<u64>1) << (c & 63)
                rank = _insert_column(&col[0], &basis[0, 0], &pivot_row[0], nw, rank)
                if ceil_rank >= 0 and rank >= ceil_rank:
                    saturated = True
                    break
            if saturated:
                break
    pivot_bits = [int(_top_bit(&basis[r, 0], nw)) for r in range(rank)]
    return rank, saturated, basis_arr[:rank].copy(), pivot_bits
