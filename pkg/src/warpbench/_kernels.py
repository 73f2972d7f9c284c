"""Dynamic-programming kernels for the alignment engines.

The quadratic cost-matrix fill dominates every experiment, so the kernels
are JIT-compiled with numba when available and fall back to equivalent pure
Python otherwise.  Local cost, phase weighting and band masking are fused
into a single pass to avoid materialising intermediate matrices.

Direction codes: 0 start, 1 diagonal, 2 from (i-1, j), 3 from (i, j-1),
-1 unreachable.  ``prefer_i`` resolves cost ties after the diagonal: prefer
the move advancing the first (i) axis when true, the j axis otherwise.
"""
from __future__ import annotations

import numpy as np

try:
    from numba import njit

    NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap

INF = np.inf


@njit(cache=True)
def dp_fill(xv, yv, wvec, lo, hi, prefer_i):
    m = xv.shape[0]
    n = yv.shape[0]
    acc = np.full((m, n), INF)
    direction = np.full((m, n), -1, dtype=np.int8)
    for i in range(m):
        for j in range(lo[i], hi[i] + 1):
            d = i - j
            if d < 0:
                d = -d
            c = abs(xv[i] - yv[j]) * wvec[d]
            if i == 0 and j == 0:
                acc[0, 0] = c
                direction[0, 0] = 0
                continue
            diag = acc[i - 1, j - 1] if (i > 0 and j > 0) else INF
            up = acc[i - 1, j] if i > 0 else INF
            left = acc[i, j - 1] if j > 0 else INF
            best = diag
            code = 1
            if prefer_i:
                if up < best:
                    best = up
                    code = 2
                if left < best:
                    best = left
                    code = 3
            else:
                if left < best:
                    best = left
                    code = 3
                if up < best:
                    best = up
                    code = 2
            if best < INF:
                acc[i, j] = c + best
                direction[i, j] = code
    return acc, direction


@njit(cache=True)
def dp_cost(xv, yv, wvec, lo, hi):
    m = xv.shape[0]
    n = yv.shape[0]
    prev = np.full(n, INF)
    curr = np.full(n, INF)
    for i in range(m):
        for j in range(n):
            curr[j] = INF
        for j in range(lo[i], hi[i] + 1):
            d = i - j
            if d < 0:
                d = -d
            c = abs(xv[i] - yv[j]) * wvec[d]
            if i == 0 and j == 0:
                curr[0] = c
                continue
            diag = prev[j - 1] if (i > 0 and j > 0) else INF
            up = prev[j] if i > 0 else INF
            left = curr[j - 1] if j > 0 else INF
            best = diag
            if up < best:
                best = up
            if left < best:
                best = left
            if best < INF:
                curr[j] = c + best
        prev, curr = curr, prev
    return prev[n - 1]


@njit(cache=True)
def backtrack(direction):
    m = direction.shape[0]
    n = direction.shape[1]
    # path length is at most m + n - 1
    buf = np.empty((m + n - 1, 2), dtype=np.int64)
    i = m - 1
    j = n - 1
    k = 0
    while True:
        buf[k, 0] = i
        buf[k, 1] = j
        k += 1
        code = direction[i, j]
        if code == 0:
            break
        if code == 1:
            i -= 1
            j -= 1
        elif code == 2:
            i -= 1
        elif code == 3:
            j -= 1
        else:
            return np.empty((0, 2), dtype=np.int64)
    return buf[:k][::-1].copy()
