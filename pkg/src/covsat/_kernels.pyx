# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exhaustive-scan kernels.

Same contracts as ``_kernels_py``. Candidates are processed in blocks of 64:
within a block the low six positions vary and the rest are fixed, so each
row reduces to one word (all ones when a fixed position already satisfies
it). Blocks are visited in counting order and the scan stops at the first
block with a survivor.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil

cdef uint64_t ALL = 0xFFFFFFFFFFFFFFFF
# LOW[b] has bit t set iff bit b of t is set, for t in 0..63
cdef uint64_t LOW[6]
LOW[0] = 0xAAAAAAAAAAAAAAAA
LOW[1] = 0xCCCCCCCCCCCCCCCC
LOW[2] = 0xF0F0F0F0F0F0F0F0
LOW[3] = 0xFF00FF00FF00FF00
LOW[4] = 0xFFFF0000FFFF0000
LOW[5] = 0xFFFFFFFF00000000


cdef long long _scan(int n, Py_ssize_t m, uint64_t *pos, uint64_t *neg) noexcept nogil:
    """Least k < 2**n with (k & pos[r]) | (~k & neg[r]) nonzero for all rows r."""
    cdef uint64_t *low = <uint64_t *> malloc((m if m > 0 else 1) * sizeof(uint64_t))
    cdef uint64_t *hp = <uint64_t *> malloc((m if m > 0 else 1) * sizeof(uint64_t))
    cdef uint64_t *hq = <uint64_t *> malloc((m if m > 0 else 1) * sizeof(uint64_t))
    cdef uint64_t w, base, alive, span, blocks, b
    cdef Py_ssize_t r
    cdef int bit
    cdef long long found = -1
    if low == NULL or hp == NULL or hq == NULL:
        free(low)
        free(hp)
        free(hq)
        return -2
    for r in range(m):
        w = 0
        for bit in range(6):
            if (pos[r] >> bit) & 1:
                w |= LOW[bit]
            if (neg[r] >> bit) & 1:
                w |= ~LOW[bit]
        low[r] = w
        hp[r] = pos[r] & ~(<uint64_t> 63)
        hq[r] = neg[r] & ~(<uint64_t> 63)
    span = ALL if n >= 6 else (((<uint64_t> 1) << ((<uint64_t> 1) << n)) - 1)
    blocks = ((<uint64_t> 1) << (n - 6)) if n >= 6 else 1
    b = 0
    while b < blocks:
        base = b << 6
        alive = span
        r = 0
        while r < m and alive:
            if not ((base & hp[r]) | (~base & hq[r])):
                alive &= low[r]
            r += 1
        if alive:
            found = <long long> (base + <uint64_t> __builtin_ctzll(alive))
            break
        b += 1
    free(low)
    free(hp)
    free(hq)
    return found


cdef long long _run(int n, list pos, list neg) except -3:
    if n > 62:
        raise OverflowError("compiled scan supports at most 62 positions")
    cdef Py_ssize_t m = len(pos), r
    cdef uint64_t *p = <uint64_t *> malloc((m if m > 0 else 1) * sizeof(uint64_t))
    cdef uint64_t *q = <uint64_t *> malloc((m if m > 0 else 1) * sizeof(uint64_t))
    cdef long long found
    if p == NULL or q == NULL:
        free(p)
        free(q)
        raise MemoryError()
    for r in range(m):
        p[r] = pos[r]
        q[r] = neg[r]
    with nogil:
        found = _scan(n, m, p, q)
    free(p)
    free(q)
    if found == -2:
        raise MemoryError()
    return found


def first_satisfying(int n, list pos, list neg):
    return _run(n, pos, neg)


def first_covering(int n, int ground, list comp1, list comp0):
    """Rows are elements: element e is covered at position n-1-j by comp1[j] or comp0[j]."""
    if n > 62:
        raise OverflowError("compiled scan supports at most 62 positions")
    cdef list rows_p = [0] * ground
    cdef list rows_q = [0] * ground
    cdef int j, e
    cdef object a, b, at
    for j in range(n):
        a = comp1[j]
        b = comp0[j]
        at = 1 << (n - 1 - j)
        e = 0
        while a:
            if a & 1:
                rows_p[e] = rows_p[e] | at
            a >>= 1
            e += 1
        e = 0
        while b:
            if b & 1:
                rows_q[e] = rows_q[e] | at
            b >>= 1
            e += 1
    return _run(n, rows_p, rows_q)
