"""Compiled inner loops: level-split interval DP and bipartite Held-Karp."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _level_dp(pos, starts, alpha, partner):
    """Interval DP on every level group; fills ``partner`` and returns the cost.

    ``pos`` is ordered group by group (each group alternates x/y in position
    order); ``starts`` holds group offsets with a trailing sentinel.
    """
    total = 0.0
    max_len = 0
    for g in range(starts.shape[0] - 1):
        L = starts[g + 1] - starts[g]
        if L > max_len:
            max_len = L
    D = np.zeros((max_len + 1, max_len + 1))
    K = np.zeros((max_len + 1, max_len + 1), dtype=np.int64)
    stack = np.empty(2 * max_len + 2, dtype=np.int64)

    for g in range(starts.shape[0] - 1):
        off = starts[g]
        L = starts[g + 1] - off
        for a in range(L + 1):
            D[a, a] = 0.0
        for length in range(2, L + 1, 2):
            for a in range(0, L - length + 1):
                b = a + length
                best = np.inf
                best_k = -1
                pa = pos[off + a]
                for k in range(a + 1, b, 2):
                    c = abs(pos[off + k] - pa) ** alpha + D[a + 1, k] + D[k + 1, b]
                    if c < best:
                        best = c
                        best_k = k
                D[a, b] = best
                K[a, b] = best_k
        total += D[0, L]

        # unwind the optimal split tree
        top = 0
        stack[top] = 0
        stack[top + 1] = L
        top = 2
        while top > 0:
            top -= 2
            a = stack[top]
            b = stack[top + 1]
            if b - a < 2:
                continue
            k = K[a, b]
            partner[off + a] = off + k
            partner[off + k] = off + a
            stack[top] = a + 1
            stack[top + 1] = k
            stack[top + 2] = k + 1
            stack[top + 3] = b
            top += 4
    return total


@njit(cache=True, nogil=True)
def _held_karp(C):
    """Cheapest alternating Hamiltonian cycle x_0 -> y -> x -> ... -> x_0.

    ``C[i, j]`` is the x_i--y_j edge cost, n >= 2.  Returns the cost and the
    visiting order as (x order, y order) with y order[i] between x order[i]
    and x order[i+1].  The x set always contains x_0, so it is stored
    without that bit.
    """
    n = C.shape[0]
    full = (1 << n) - 1
    hx_full = full >> 1
    P = np.full((hx_full + 1, full + 1, n), np.inf)  # ends at y_j, |Sx| == |Sy|
    Q = np.full((hx_full + 1, full + 1, n), np.inf)  # ends at x_i, |Sx| == |Sy| + 1
    Pp = np.full((hx_full + 1, full + 1, n), -1, dtype=np.int8)
    Qp = np.full((hx_full + 1, full + 1, n), -1, dtype=np.int8)
    for j in range(n):
        P[0, 1 << j, j] = C[0, j]
        Pp[0, 1 << j, j] = 0

    for hx in range(hx_full + 1):
        for sy in range(1, full + 1):
            for i in range(n):
                q = Q[hx, sy, i]
                if q < np.inf:
                    for j in range(n):
                        if sy & (1 << j):
                            continue
                        v = q + C[i, j]
                        if v < P[hx, sy | (1 << j), j]:
                            P[hx, sy | (1 << j), j] = v
                            Pp[hx, sy | (1 << j), j] = i
            for j in range(n):
                p = P[hx, sy, j]
                if p < np.inf:
                    for i in range(1, n):
                        b = 1 << (i - 1)
                        if hx & b:
                            continue
                        v = p + C[i, j]
                        if v < Q[hx | b, sy, i]:
                            Q[hx | b, sy, i] = v
                            Qp[hx | b, sy, i] = j

    best = np.inf
    last = -1
    for j in range(n):
        v = P[hx_full, full, j] + C[0, j]
        if v < best:
            best = v
            last = j

    xs = np.empty(n, dtype=np.int64)
    ys = np.empty(n, dtype=np.int64)
    hx = hx_full
    sy = full
    j = last
    for step in range(n - 1, -1, -1):
        ys[step] = j
        i = Pp[hx, sy, j]
        sy ^= 1 << j
        xs[step] = i
        if step == 0:
            break
        j = Qp[hx, sy, i]
        hx ^= 1 << (i - 1)
    return best, xs, ys
