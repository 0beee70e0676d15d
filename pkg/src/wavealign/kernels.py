"""Numba kernels executed per block by the wavefront engine.

All DP state is int64. Minus infinity is a sentinel chosen so that no
realistic arithmetic can wrap: gap chains only drift it down by
gap_extend per consumed residue, and the middle-row combination may add
two sentinel values plus a gap fee, which still stays far from the int64
limit at -2**61.
"""
from __future__ import annotations

import numpy as np
from numba import njit

NEG_INF = -(2 ** 61)

TRACK_NONE = 0      # buffers only
TRACK_MIN = 1       # best positive cell, ties to smallest (i, j)
TRACK_MAX = 2       # best cell of any sign, ties to largest (i, j)


@njit(cache=True, nogil=True)
def affine_block(c1, c2, sub, go, ge, r0, r1, cs, ce,
                 row_h, row_f, col_h, col_e, corner, clamp0, track):
    """Solve one cell block column by column.

    col_h/col_e hold the left neighbor's last column (H, E) for cell rows
    [r0, r1) and are updated in place to this block's last column.
    row_h/row_f are indexed by DP column (cell column c sits at index c+1)
    and carry the last computed row per column; the block's segment
    [cs+1, ce] is read as its top input and overwritten with its bottom row.
    corner is H at (r0-1, cs-1) in cell terms.

    Returns (best_score, best_i, best_j) per the track mode; (0, -1, -1)
    or (NEG_INF, -1, -1) when nothing qualified.
    """
    height = r1 - r0
    if track == TRACK_MIN:
        best_s = 0
    else:
        best_s = NEG_INF
    best_i = -1
    best_j = -1
    diag_top = corner
    for c in range(cs, ce):
        top_h = row_h[c + 1]
        f = row_f[c + 1]
        diag = diag_top
        up_h = top_h
        sc = c2[c]
        for k in range(height):
            r = r0 + k
            left_h = col_h[k]
            left_e = col_e[k]
            e = left_h - go - ge
            t = left_e - ge
            if t > e:
                e = t
            t = up_h - go - ge
            f = f - ge
            if t > f:
                f = t
            h = diag + sub[c1[r], sc]
            if e > h:
                h = e
            if f > h:
                h = f
            if clamp0 and h < 0:
                h = 0
            diag = left_h
            col_h[k] = h
            col_e[k] = e
            up_h = h
            if track == TRACK_MIN:
                if h > 0 and (h > best_s or (h == best_s and
                              (r < best_i or (r == best_i and c < best_j)))):
                    best_s = h
                    best_i = r
                    best_j = c
            elif track == TRACK_MAX:
                if h > best_s or (h == best_s and
                                  (r > best_i or (r == best_i and c > best_j))):
                    best_s = h
                    best_i = r
                    best_j = c
        row_h[c + 1] = up_h
        row_f[c + 1] = f
        diag_top = top_h
    return best_s, best_i, best_j


@njit(cache=True, nogil=True)
def leaf_solve(c1, c2, sub, go, ge, start_vgap, end_vgap, lo, hi, ops_out):
    """Banded full-traceback global alignment of a small rectangle.

    Cells with (row - col) outside [lo, hi] stay at the minus-infinity
    sentinel. The vgap flags force the path to begin/end with a DELETE;
    a begun-upstream gap continues with no opening fee.

    Returns (achieved_score, op_count); ops land in ops_out in forward order.
    """
    n = c1.size
    m = c2.size
    H = np.full((n + 1, m + 1), NEG_INF, dtype=np.int64)
    E = np.full((n + 1, m + 1), NEG_INF, dtype=np.int64)
    F = np.full((n + 1, m + 1), NEG_INF, dtype=np.int64)
    if start_vgap:
        F[0, 0] = 0
        for i in range(1, n + 1):
            F[i, 0] = -i * ge
            H[i, 0] = F[i, 0]
    else:
        H[0, 0] = 0
        for j in range(1, m + 1):
            E[0, j] = -go - j * ge
            H[0, j] = E[0, j]
        for i in range(1, n + 1):
            F[i, 0] = -go - i * ge
            H[i, 0] = F[i, 0]
    for i in range(1, n + 1):
        jlo = i - hi
        if jlo < 1:
            jlo = 1
        jhi = i - lo
        if jhi > m:
            jhi = m
        for j in range(jlo, jhi + 1):
            e = H[i, j - 1] - go - ge
            t = E[i, j - 1] - ge
            if t > e:
                e = t
            f = H[i - 1, j] - go - ge
            t = F[i - 1, j] - ge
            if t > f:
                f = t
            h = H[i - 1, j - 1] + sub[c1[i - 1], c2[j - 1]]
            if e > h:
                h = e
            if f > h:
                h = f
            E[i, j] = e
            F[i, j] = f
            H[i, j] = h
    if end_vgap:
        score = F[n, m]
        state = 2
    else:
        score = H[n, m]
        state = 0
    # traceback, writing ops back to front
    i = n
    j = m
    k = ops_out.size
    while i > 0 or j > 0:
        if state == 0:
            if i > 0 and j > 0 and H[i, j] == H[i - 1, j - 1] + sub[c1[i - 1], c2[j - 1]]:
                k -= 1
                ops_out[k] = 0 if c1[i - 1] == c2[j - 1] else 1
                i -= 1
                j -= 1
            elif j > 0 and H[i, j] == E[i, j]:
                state = 1
            elif i > 0 and H[i, j] == F[i, j]:
                state = 2
            else:
                return NEG_INF, -1
        elif state == 1:
            k -= 1
            ops_out[k] = 2
            if E[i, j] == H[i, j - 1] - go - ge:
                state = 0
            elif E[i, j] != E[i, j - 1] - ge:
                return NEG_INF, -1
            j -= 1
        else:
            k -= 1
            ops_out[k] = 3
            if F[i, j] == H[i - 1, j] - go - ge:
                state = 0
            elif F[i, j] != F[i - 1, j] - ge:
                return NEG_INF, -1
            i -= 1
    count = ops_out.size - k
    for t in range(count):
        ops_out[t] = ops_out[k + t]
    return score, count
