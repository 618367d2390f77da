"""Pure-Python exhaustive-scan kernels.

Both functions treat the ``2**n`` candidates as the bits of one big integer
(candidate ``k`` is bit ``k``) and narrow that set row by row, so the work
is ``O(rows * n)`` big-int operations instead of a Python-level loop over
every candidate. Position ``b`` of a candidate is bit ``b`` of ``k``; the
callers place variable / pair ``i`` at position ``n - i`` so that counting
order puts index 1 in the most significant place.
"""

from __future__ import annotations

from functools import lru_cache


@lru_cache(maxsize=8)
def _patterns(n: int) -> tuple[int, ...]:
    """``patterns[b]`` has bit ``k`` set iff bit ``b`` of ``k`` is set, for k < 2**n."""
    total = 1 << n
    out = []
    for b in range(n):
        width = 1 << b
        block = ((1 << width) - 1) << width
        span = width << 1
        while span < total:
            block |= block << span
            span <<= 1
        out.append(block)
    return tuple(out)


def _lowest(candidates: int) -> int:
    return (candidates & -candidates).bit_length() - 1 if candidates else -1


def first_satisfying(n: int, pos: list[int], neg: list[int]) -> int:
    """Least ``k`` with ``(k & pos[c]) | (~k & neg[c])`` nonzero for every row ``c``."""
    full = (1 << (1 << n)) - 1
    pats = _patterns(n)
    alive = full
    for p, q in zip(pos, neg):
        row = 0
        b = 0
        while p or q:
            if p & 1:
                row |= pats[b]
            if q & 1:
                row |= full ^ pats[b]
            p >>= 1
            q >>= 1
            b += 1
        alive &= row
        if not alive:
            return -1
    return _lowest(alive)


def first_covering(n: int, ground: int, comp1: list[int], comp0: list[int]) -> int:
    """Least ``k`` whose selected components cover ``ground`` elements.

    Pair ``j`` (0-based) sits at position ``n - 1 - j``; a set bit there picks
    ``comp1[j]``, a clear bit picks ``comp0[j]``.
    """
    full = (1 << (1 << n)) - 1
    pats = _patterns(n)
    alive = full
    for e in range(ground):
        bit = 1 << e
        row = 0
        for j in range(n):
            pat = pats[n - 1 - j]
            if comp1[j] & bit:
                row |= pat
            elif comp0[j] & bit:
                row |= full ^ pat
        alive &= row
        if not alive:
            return -1
    return _lowest(alive)
