# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled partition-sweep kernels; mirrors :mod:`skpin._sweep_py` exactly.

The restricted-growth enumeration and exact cross-multiplied comparisons
run in C; Python objects are touched only when a new minimizer is recorded,
so ties stay cheap and the common case is a tight integer loop.
"""

import numpy as np


def sweep_min(table, int m, int min_cells=2, int limit=64):
    """See ``skpin._sweep_py.sweep_min``; identical contract."""
    arr = np.ascontiguousarray(table, dtype=np.int64)
    cdef long long[::1] tv = arr
    cdef int a[32]
    cdef int mb[32]
    cdef long long cmask[33]
    cdef int i, j, k, c, n_cells
    cdef long long s, num, den, v
    cdef long long h_full = tv[(1 << m) - 1]
    cdef long long best_num = 0
    cdef long long best_den = 0
    cdef long long count = 0
    if m < 1 or m > 25:
        raise ValueError("sweep kernel supports 1 <= m <= 25")
    mins = []
    for i in range(m):
        a[i] = 0
        mb[i] = 0
    while True:
        n_cells = (mb[m - 1] + 1) if a[m - 1] <= mb[m - 1] else (a[m - 1] + 1)
        if n_cells >= min_cells:
            for c in range(n_cells):
                cmask[c] = 0
            for i in range(m):
                cmask[a[i]] |= 1 << i
            s = 0
            for c in range(n_cells):
                s += tv[cmask[c]]
            num = s - h_full
            den = n_cells - 1
            if best_den == 0 or num * best_den < best_num * den:
                best_num = num
                best_den = den
                count = 1
                if limit != 0:
                    mins = [tuple([a[i] for i in range(m)])]
                else:
                    mins = []
            elif num * best_den == best_num * den:
                count += 1
                if limit < 0 or len(mins) < limit:
                    mins.append(tuple([a[i] for i in range(m)]))
        j = m - 1
        while j >= 1 and a[j] == mb[j] + 1:
            j -= 1
        if j == 0:
            return int(best_num), int(best_den), int(count), mins
        a[j] += 1
        v = mb[j] if mb[j] >= a[j] else a[j]
        for k in range(j + 1, m):
            a[k] = 0
            mb[k] = <int> v


def sweep_shared(table_x, table_y, int m,
                 long long best_num_x, long long best_den_x,
                 long long best_num_y, long long best_den_y,
                 int min_cells=2):
    """See ``skpin._sweep_py.sweep_shared``; identical contract."""
    arr_x = np.ascontiguousarray(table_x, dtype=np.int64)
    arr_y = np.ascontiguousarray(table_y, dtype=np.int64)
    cdef long long[::1] tx = arr_x
    cdef long long[::1] ty = arr_y
    cdef int a[32]
    cdef int mb[32]
    cdef long long cmask[33]
    cdef int i, j, k, c, n_cells
    cdef long long sx, sy, den, v
    cdef long long hx = tx[(1 << m) - 1]
    cdef long long hy = ty[(1 << m) - 1]
    if m < 1 or m > 25:
        raise ValueError("sweep kernel supports 1 <= m <= 25")
    for i in range(m):
        a[i] = 0
        mb[i] = 0
    while True:
        n_cells = (mb[m - 1] + 1) if a[m - 1] <= mb[m - 1] else (a[m - 1] + 1)
        if n_cells >= min_cells:
            for c in range(n_cells):
                cmask[c] = 0
            for i in range(m):
                cmask[a[i]] |= 1 << i
            sx = 0
            sy = 0
            for c in range(n_cells):
                sx += tx[cmask[c]]
                sy += ty[cmask[c]]
            den = n_cells - 1
            if ((sx - hx) * best_den_x == best_num_x * den
                    and (sy - hy) * best_den_y == best_num_y * den):
                return True
        j = m - 1
        while j >= 1 and a[j] == mb[j] + 1:
            j -= 1
        if j == 0:
            return False
        a[j] += 1
        v = mb[j] if mb[j] >= a[j] else a[j]
        for k in range(j + 1, m):
            a[k] = 0
            mb[k] = <int> v
