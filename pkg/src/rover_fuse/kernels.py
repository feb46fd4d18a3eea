"""Dynamic-programming kernels behind the string metric and the combiner.

Each kernel exists twice: a loop version compiled with numba and a
row-vectorized numpy version. ``USE_NUMBA`` (see ``_accel``) picks the one
bound to the public names; both stay importable for tests and benchmarks.
"""

import numpy as np

from ._accel import HAVE_NUMBA, USE_NUMBA, njit

MATCH = 0
GAP_IN_X = 1
GAP_IN_NET = 2

# absolute slack for tie detection during backtracking
TIE_EPS = 1e-9


def _edit_distance_loops(a, b, ins, dele, sub):
    n = a.shape[0]
    m = b.shape[0]
    prev = np.empty(m + 1)
    cur = np.empty(m + 1)
    for j in range(m + 1):
        prev[j] = j * ins
    for i in range(1, n + 1):
        cur[0] = i * dele
        ai = a[i - 1]
        for j in range(1, m + 1):
            best = prev[j - 1] + (0.0 if ai == b[j - 1] else sub)
            d = prev[j] + dele
            if d < best:
                best = d
            d = cur[j - 1] + ins
            if d < best:
                best = d
            cur[j] = best
        prev, cur = cur, prev
    return prev[m]


def edit_distance_numpy(a, b, ins, dele, sub):
    m = b.shape[0]
    steps = np.arange(m + 1) * ins
    row = steps.astype(np.float64)
    for i in range(1, a.shape[0] + 1):
        tmp = np.empty(m + 1)
        tmp[0] = i * dele
        tmp[1:] = np.minimum(row[1:] + dele, row[:-1] + np.where(b == a[i - 1], 0.0, sub))
        # horizontal insertions: cur[j] = min_k (tmp[k] + (j - k) * ins)
        row = np.minimum.accumulate(tmp - steps) + steps
    return float(row[m])


def _backtrack(D, C, gx, gn, ops):
    """Fill ``ops`` back to front; returns the index of the first used slot."""
    i = D.shape[0] - 1
    j = D.shape[1] - 1
    k = ops.shape[0]
    while i > 0 or j > 0:
        k -= 1
        target = D[i, j] + TIE_EPS
        if i > 0 and j > 0 and D[i - 1, j - 1] + C[i - 1, j - 1] <= target:
            ops[k] = MATCH
            i -= 1
            j -= 1
        elif i > 0 and D[i - 1, j] + gx[i - 1] <= target:
            ops[k] = GAP_IN_X
            i -= 1
        else:
            ops[k] = GAP_IN_NET
            j -= 1
    return k


def _align_loops(P, X):
    L = P.shape[0]
    M = X.shape[0]
    K1 = P.shape[1]
    C = np.empty((L, M))
    for i in range(L):
        for j in range(M):
            s = 0.0
            for c in range(K1):
                s += abs(P[i, c] - X[j, c])
            C[i, j] = 0.5 * s
    gx = np.empty(L)
    for i in range(L):
        s = abs(P[i, K1 - 1] - 1.0)
        for c in range(K1 - 1):
            s += abs(P[i, c])
        gx[i] = 0.5 * s
    gn = np.empty(M)
    for j in range(M):
        s = abs(X[j, K1 - 1] - 1.0)
        for c in range(K1 - 1):
            s += abs(X[j, c])
        gn[j] = 0.5 * s

    D = np.empty((L + 1, M + 1))
    D[0, 0] = 0.0
    for j in range(1, M + 1):
        D[0, j] = D[0, j - 1] + gn[j - 1]
    for i in range(1, L + 1):
        D[i, 0] = D[i - 1, 0] + gx[i - 1]
        for j in range(1, M + 1):
            best = D[i - 1, j - 1] + C[i - 1, j - 1]
            d = D[i - 1, j] + gx[i - 1]
            if d < best:
                best = d
            d = D[i, j - 1] + gn[j - 1]
            if d < best:
                best = d
            D[i, j] = best

    ops = np.empty(L + M, dtype=np.int8)
    start = _backtrack_nb(D, C, gx, gn, ops)
    return D[L, M], ops[start:].copy()


def _gap_costs(A):
    # total variation against the crisp EMPTY distribution
    return 0.5 * (np.abs(A[:, :-1]).sum(axis=1) + np.abs(A[:, -1] - 1.0))


def align_numpy(P, X):
    L = P.shape[0]
    M = X.shape[0]
    C = 0.5 * np.abs(P[:, None, :] - X[None, :, :]).sum(axis=2)
    gx = _gap_costs(P)
    gn = _gap_costs(X)
    G = np.concatenate(([0.0], np.cumsum(gn)))
    D = np.empty((L + 1, M + 1))
    D[0] = G
    for i in range(1, L + 1):
        tmp = np.empty(M + 1)
        tmp[0] = D[i - 1, 0] + gx[i - 1]
        tmp[1:] = np.minimum(D[i - 1, :-1] + C[i - 1], D[i - 1, 1:] + gx[i - 1])
        D[i] = np.minimum.accumulate(tmp - G) + G
    ops = np.empty(L + M, dtype=np.int8)
    start = _backtrack(D, C, gx, gn, ops)
    return float(D[L, M]), ops[start:].copy()


if HAVE_NUMBA:
    _backtrack_nb = njit(_backtrack)
    edit_distance_numba = njit(_edit_distance_loops)
    align_numba = njit(_align_loops)
else:  # pragma: no cover
    edit_distance_numba = None
    align_numba = None

if USE_NUMBA:
    edit_distance = edit_distance_numba
    align_arrays = align_numba
else:
    edit_distance = edit_distance_numpy
    align_arrays = align_numpy
