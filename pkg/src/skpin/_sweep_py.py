"""Pure-Python partition-sweep kernels (fallback for the compiled core).

Both backends expose the same functions with identical semantics;
:mod:`skpin._sweep` picks the compiled one when it imports.  Tables are
subset-entropy arrays indexed by vertex bitmask with exact integer entries
(counting-oracle entropies); all comparisons are exact via cross
multiplication, so the two backends are bit-for-bit interchangeable.
"""

from __future__ import annotations


def sweep_min(table, m: int, min_cells: int = 2, limit: int = 64):
    """Minimize the normalized surplus over partitions with >= min_cells cells.

    Returns ``(num, den, count, rgs_list)``: the minimum as a raw (not
    reduced) pair num/den, how many partitions attain it, and the
    restricted-growth strings of the first ``limit`` minimizers in
    enumeration order (all of them when ``limit`` < 0, none when 0).
    """
    table = [int(v) for v in table]
    h_full = table[(1 << m) - 1]
    a = [0] * m
    mb = [0] * m
    cmask = [0] * (m + 1)
    best_num = 0
    best_den = 0  # den 0 marks "nothing seen yet"
    count = 0
    mins: list[tuple[int, ...]] = []
    while True:
        n_cells = mb[m - 1] + 1 if a[m - 1] <= mb[m - 1] else a[m - 1] + 1
        if n_cells >= min_cells:
            for c in range(n_cells):
                cmask[c] = 0
            for i in range(m):
                cmask[a[i]] |= 1 << i
            s = 0
            for c in range(n_cells):
                s += table[cmask[c]]
            num = s - h_full
            den = n_cells - 1
            if best_den == 0 or num * best_den < best_num * den:
                best_num, best_den = num, den
                count = 1
                mins = [tuple(a)] if limit != 0 else []
            elif num * best_den == best_num * den:
                count += 1
                if limit < 0 or len(mins) < limit:
                    mins.append(tuple(a))
        j = m - 1
        while j >= 1 and a[j] == mb[j] + 1:
            j -= 1
        if j == 0:
            return best_num, best_den, count, mins
        a[j] += 1
        v = mb[j] if mb[j] >= a[j] else a[j]
        for k in range(j + 1, m):
            a[k] = 0
            mb[k] = v


def sweep_shared(
    table_x,
    table_y,
    m: int,
    best_num_x: int,
    best_den_x: int,
    best_num_y: int,
    best_den_y: int,
    min_cells: int = 2,
) -> bool:
    """Whether some partition attains both given minima simultaneously."""
    table_x = [int(v) for v in table_x]
    table_y = [int(v) for v in table_y]
    full = (1 << m) - 1
    hx = table_x[full]
    hy = table_y[full]
    a = [0] * m
    mb = [0] * m
    cmask = [0] * (m + 1)
    while True:
        n_cells = mb[m - 1] + 1 if a[m - 1] <= mb[m - 1] else a[m - 1] + 1
        if n_cells >= min_cells:
            for c in range(n_cells):
                cmask[c] = 0
            for i in range(m):
                cmask[a[i]] |= 1 << i
            sx = 0
            sy = 0
            for c in range(n_cells):
                sx += table_x[cmask[c]]
                sy += table_y[cmask[c]]
            den = n_cells - 1
            if (sx - hx) * best_den_x == best_num_x * den and (
                sy - hy
            ) * best_den_y == best_num_y * den:
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
            mb[k] = v
