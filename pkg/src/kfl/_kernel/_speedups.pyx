# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled bitset kernels; pure.py holds the reference semantics."""

from libc.stdlib cimport free, malloc
from libc.string cimport memcpy, memset

ctypedef unsigned long long u64

cdef extern from *:
    int __builtin_ctzll(unsigned long long)

IMPLEMENTATION = "compiled"


cdef int _load_rows(object rows, int n, int W, u64 *buf) except -1:
    cdef int u, w
    cdef bytes b
    if W == 1:
        for u in range(n):
            buf[u] = <u64>rows[u]
    else:
        for u in range(n):
            b = rows[u].to_bytes(W * 8, "little")
            memcpy(buf + u * W, <char *>b, W * 8)
    return 0


cdef object _store_rows(u64 *buf, int n, int W):
    cdef int u
    cdef list out = []
    if W == 1:
        for u in range(n):
            out.append(buf[u])
    else:
        for u in range(n):
            out.append(int.from_bytes((<char *>(buf + u * W))[:W * 8], "little"))
    return out


def compose_rows(rows1, rows2, n):
    """Rows of the relational composition: u -> v -> w."""
    cdef int N = n
    if N == 0:
        return []
    cdef int W = (N + 63) >> 6
    cdef u64 *a = <u64 *>malloc(3 * N * W * sizeof(u64))
    if a == NULL:
        raise MemoryError()
    cdef u64 *b = a + N * W
    cdef u64 *o = b + N * W
    cdef int u, w, ww, v
    cdef u64 word
    try:
        _load_rows(rows1, N, W, a)
        _load_rows(rows2, N, W, b)
        memset(o, 0, N * W * sizeof(u64))
        for u in range(N):
            for w in range(W):
                word = a[u * W + w]
                while word:
                    v = (w << 6) + __builtin_ctzll(word)
                    word &= word - 1
                    for ww in range(W):
                        o[u * W + ww] |= b[v * W + ww]
        return _store_rows(o, N, W)
    finally:
        free(a)


def closure_rows(rows, n):
    """Rows of the reflexive-transitive closure."""
    cdef int N = n
    if N == 0:
        return []
    cdef int W = (N + 63) >> 6
    cdef u64 *reach = <u64 *>malloc((N * W + 2 * W) * sizeof(u64))
    if reach == NULL:
        raise MemoryError()
    cdef u64 *acc = reach + N * W
    cdef u64 *todo = acc + W
    cdef int u, w, ww, v
    cdef u64 word
    cdef bint changed = True, grew
    try:
        _load_rows(rows, N, W, reach)
        for u in range(N):
            reach[u * W + (u >> 6)] |= <u64>1 << (u & 63)
        while changed:
            changed = False
            for u in range(N):
                memcpy(acc, reach + u * W, W * sizeof(u64))
                memcpy(todo, acc, W * sizeof(u64))
                for w in range(W):
                    word = todo[w]
                    while word:
                        v = (w << 6) + __builtin_ctzll(word)
                        word &= word - 1
                        for ww in range(W):
                            acc[ww] |= reach[v * W + ww]
                grew = False
                for ww in range(W):
                    if acc[ww] != reach[u * W + ww]:
                        grew = True
                        break
                if grew:
                    memcpy(reach + u * W, acc, W * sizeof(u64))
                    changed = True
        return _store_rows(reach, N, W)
    finally:
        free(reach)


def valid_on_frame(opcodes, arga, argb, rows, n, nvars):
    """Least valuation index where the program is not true everywhere, or -1.

    Single-word fast path; callers keep n <= 64 and nvars*n <= 62.
    """
    cdef int N = n, V = nvars
    cdef int L = len(opcodes)
    if N <= 0 or N > 64 or V * N > 62 or V < 0 or L <= 0:
        raise ValueError("kernel limit exceeded")
    cdef u64 full = <u64>(-1) if N == 64 else (<u64>1 << N) - 1
    cdef int *ops = <int *>malloc(3 * L * sizeof(int))
    if ops == NULL:
        raise MemoryError()
    cdef int *aa = ops + L
    cdef int *bb = aa + L
    cdef u64 *mem = <u64 *>malloc((2 * N + L + (V if V else 1)) * sizeof(u64))
    if mem == NULL:
        free(ops)
        raise MemoryError()
    cdef u64 *rws = mem
    cdef u64 *preds = mem + N
    cdef u64 *rg = preds + N
    cdef u64 *vm = rg + L
    cdef int i, u, j, op
    cdef u64 nval, v, word, accw, wv
    try:
        for i in range(L):
            ops[i] = opcodes[i]
            aa[i] = arga[i]
            bb[i] = argb[i]
        _load_rows(rows, N, 1, rws)
        memset(preds, 0, N * sizeof(u64))
        for u in range(N):
            word = rws[u]
            while word:
                preds[__builtin_ctzll(word)] |= <u64>1 << u
                word &= word - 1
        nval = <u64>1 << (V * N)
        for v in range(nval):
            for j in range(V):
                vm[j] = (v >> (j * N)) & full
            for i in range(L):
                op = ops[i]
                if op == 0:
                    rg[i] = vm[aa[i]]
                elif op == 1:
                    rg[i] = 0
                elif op == 2:
                    rg[i] = full
                elif op == 3:
                    rg[i] = full & ~rg[aa[i]]
                elif op == 4:
                    rg[i] = rg[aa[i]] & rg[bb[i]]
                elif op == 5:
                    rg[i] = rg[aa[i]] | rg[bb[i]]
                elif op == 6:
                    rg[i] = (full & ~rg[aa[i]]) | rg[bb[i]]
                elif op == 7:
                    rg[i] = full & ~(rg[aa[i]] ^ rg[bb[i]])
                else:
                    wv = rg[aa[i]]
                    if op == 9:
                        wv = full & ~wv
                    accw = 0
                    while wv:
                        accw |= preds[__builtin_ctzll(wv)]
                        wv &= wv - 1
                    if op == 9:
                        accw = full & ~accw
                    rg[i] = accw
            if rg[L - 1] != full:
                return v
        return -1
    finally:
        free(ops)
        free(mem)
