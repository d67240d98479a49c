# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled assignment and box-overlap kernels.

Twin of ``_pure.py``: the algorithms are mirrored operation for operation
(same float expression order, same tie-breaks) so both backends return
bitwise-identical results. See the pure module for the algorithm notes.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "ext"

cdef double INF = float("inf")


def iou_matrix(boxes_a, boxes_b):
    """Pairwise IoU of ``(m, 4)`` and ``(n, 4)`` arrays of (x, y, w, h) boxes.

    Areas come from corner differences so identical boxes score exactly 1.
    """
    cdef double[:, ::1] a = np.ascontiguousarray(boxes_a, dtype=np.float64).reshape(-1, 4)
    cdef double[:, ::1] b = np.ascontiguousarray(boxes_b, dtype=np.float64).reshape(-1, 4)
    cdef Py_ssize_t m = a.shape[0], n = b.shape[0], i, j
    out_arr = np.zeros((m, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double ax2, ay2, bx2, by2, iw, ih, inter, union, area_a, area_b
    for i in range(m):
        ax2 = a[i, 0] + a[i, 2]
        ay2 = a[i, 1] + a[i, 3]
        area_a = (ax2 - a[i, 0]) * (ay2 - a[i, 1])
        for j in range(n):
            bx2 = b[j, 0] + b[j, 2]
            by2 = b[j, 1] + b[j, 3]
            iw = min(ax2, bx2) - max(a[i, 0], b[j, 0])
            ih = min(ay2, by2) - max(a[i, 1], b[j, 1])
            inter = iw * ih if (iw > 0.0 and ih > 0.0) else 0.0
            area_b = (bx2 - b[j, 0]) * (by2 - b[j, 1])
            union = area_a + area_b - inter
            out[i, j] = inter / union if union > 0.0 else 0.0
    return out_arr


def solve_assignment(cost, forbid=None):
    """Gated max-cardinality min-cost assignment with lexicographic tie-break."""
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2:
        raise ValueError("cost must be a 2-D matrix")
    cdef Py_ssize_t m = cost.shape[0], n = cost.shape[1]
    empty = (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    if m == 0 or n == 0:
        return empty
    if forbid is None:
        allowed = np.isfinite(cost)
    else:
        forbid = np.asarray(forbid, dtype=bool)
        if forbid.shape != (<object>cost).shape:
            raise ValueError("forbid mask shape must match cost shape")
        allowed = np.isfinite(cost) & ~forbid
    if not allowed.any():
        return empty

    cdef double big = 1.0 + float(np.abs(cost[allowed]).sum())
    cdef Py_ssize_t size = m + n
    padded_arr = np.full((size, size), INF)
    padded_arr[:m, :n] = np.where(allowed, cost, INF)
    padded_arr[np.arange(m), n + np.arange(m)] = big
    padded_arr[m + np.arange(n), np.arange(n)] = big
    padded_arr[m:, n:] = 0.0
    cdef double[:, ::1] a = padded_arr

    u_arr = np.zeros(size)
    v_arr = np.zeros(size)
    row_of_arr = np.full(size, -1, dtype=np.int64)
    col_of_arr = np.full(size, -1, dtype=np.int64)
    cdef double[::1] u = u_arr, v = v_arr
    cdef long long[::1] row_of = row_of_arr, col_of = col_of_arr

    _jv_square(a, u, v, row_of, col_of, size)
    _refine(a, u, v, row_of, col_of, m, n)

    rows = [r for r in range(m) if col_of[r] < n]
    cols = [col_of[r] for r in rows]
    return (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))


cdef int _jv_square(double[:, ::1] a, double[::1] u, double[::1] v,
                    long long[::1] row_of, long long[::1] col_of,
                    Py_ssize_t size) except -1:
    cdef Py_ssize_t root, i_cur, j, j_prev, j_next, j_before, i
    cdef double red, delta, ui
    minv_arr = np.empty(size)
    way_arr = np.empty(size, dtype=np.int64)
    used_arr = np.empty(size, dtype=np.uint8)
    cdef double[::1] minv = minv_arr
    cdef long long[::1] way = way_arr
    cdef unsigned char[::1] used = used_arr

    for root in range(size):
        for j in range(size):
            minv[j] = INF
            way[j] = -1
            used[j] = 0
        i_cur = root
        j_prev = -1
        while True:
            ui = u[i_cur]
            for j in range(size):
                if not used[j]:
                    red = (a[i_cur, j] - ui) - v[j]
                    if red < minv[j]:
                        minv[j] = red
                        way[j] = j_prev
            j_next = -1
            delta = INF
            for j in range(size):
                if not used[j] and minv[j] < delta:
                    delta = minv[j]
                    j_next = j
            if j_next < 0:
                raise RuntimeError("assignment instance is infeasible")
            u[root] += delta
            for j in range(size):
                if used[j]:
                    u[row_of[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            used[j_next] = 1
            if row_of[j_next] < 0:
                break
            i_cur = row_of[j_next]
            j_prev = j_next
        j = j_next
        while j >= 0:
            j_before = way[j]
            if j_before < 0:
                row_of[j] = root
                col_of[root] = j
            else:
                i = row_of[j_before]
                row_of[j] = i
                col_of[i] = j
            j = j_before
    return 0


cdef int _refine(double[:, ::1] a, double[::1] u, double[::1] v,
                 long long[::1] row_of, long long[::1] col_of,
                 Py_ssize_t m, Py_ssize_t n) except -1:
    cdef Py_ssize_t size = m + n
    cdef Py_ssize_t i, j, r, k, nnz, pos, chosen, matched

    # Tight adjacency in CSR form; the matched edge of each row is kept
    # even when float dirt moves its reduced cost off exact zero.
    indptr_arr = np.zeros(size + 1, dtype=np.int64)
    cdef long long[::1] indptr = indptr_arr
    nnz = 0
    for i in range(size):
        for j in range(size):
            if (a[i, j] != INF and (a[i, j] - u[i]) - v[j] == 0.0) or col_of[i] == j:
                nnz += 1
        indptr[i + 1] = nnz
    cols_arr = np.empty(nnz, dtype=np.int64)
    cdef long long[::1] tcols = cols_arr
    pos = 0
    for i in range(size):
        for j in range(size):
            if (a[i, j] != INF and (a[i, j] - u[i]) - v[j] == 0.0) or col_of[i] == j:
                tcols[pos] = j
                pos += 1

    fixed_arr = np.zeros(size, dtype=np.uint8)
    cdef unsigned char[::1] fixed_col = fixed_arr
    comp_arr = np.empty(2 * size, dtype=np.int64)
    cdef long long[::1] comp = comp_arr

    for r in range(m):
        _scc(indptr, tcols, row_of, col_of, fixed_col, comp, size, r)
        matched = col_of[r]
        chosen = matched
        for k in range(indptr[r], indptr[r + 1]):
            j = tcols[k]
            if fixed_col[j]:
                continue
            if j == matched or comp[r] == comp[size + j]:
                chosen = j
                break
        if chosen != matched:
            _rotate(indptr, tcols, row_of, col_of, fixed_col, size, r, chosen)
        fixed_col[col_of[r]] = 1
    return 0


cdef int _scc(long long[::1] indptr, long long[::1] tcols,
              long long[::1] row_of, long long[::1] col_of,
              unsigned char[::1] fixed_col, long long[::1] comp,
              Py_ssize_t size, Py_ssize_t first_row) except -1:
    """Iterative Tarjan over rows (vertex i) and columns (vertex size+j)."""
    cdef Py_ssize_t total = 2 * size
    cdef Py_ssize_t start, vtx, w, top, counter, n_comp, j, i
    index_arr = np.full(total, -1, dtype=np.int64)
    low_arr = np.zeros(total, dtype=np.int64)
    on_stack_arr = np.zeros(total, dtype=np.uint8)
    stack_arr = np.empty(total, dtype=np.int64)
    wstack_v_arr = np.empty(total, dtype=np.int64)
    wstack_pos_arr = np.empty(total, dtype=np.int64)
    cdef long long[::1] index = index_arr, low = low_arr
    cdef long long[::1] stack = stack_arr, wv = wstack_v_arr, wp = wstack_pos_arr
    cdef unsigned char[::1] on_stack = on_stack_arr
    cdef Py_ssize_t sp, wsp  # stack pointers
    cdef bint advanced

    for vtx in range(total):
        comp[vtx] = -1
    counter = 0
    n_comp = 0
    sp = 0
    for start in range(total):
        if index[start] != -1:
            continue
        if start < size:
            if start < first_row:
                continue
        else:
            if fixed_col[start - size]:
                continue
        index[start] = counter
        low[start] = counter
        counter += 1
        stack[sp] = start
        sp += 1
        on_stack[start] = 1
        wv[0] = start
        wp[0] = indptr[start] if start < size else 0
        wsp = 1
        while wsp > 0:
            vtx = wv[wsp - 1]
            advanced = False
            if vtx < size:
                while wp[wsp - 1] < indptr[vtx + 1]:
                    j = tcols[wp[wsp - 1]]
                    wp[wsp - 1] += 1
                    if j == col_of[vtx] or fixed_col[j]:
                        continue
                    w = size + j
                    if index[w] == -1:
                        index[w] = counter
                        low[w] = counter
                        counter += 1
                        stack[sp] = w
                        sp += 1
                        on_stack[w] = 1
                        wv[wsp] = w
                        wp[wsp] = 0
                        wsp += 1
                        advanced = True
                        break
                    if on_stack[w] and index[w] < low[vtx]:
                        low[vtx] = index[w]
            else:
                if wp[wsp - 1] == 0:
                    wp[wsp - 1] = 1
                    i = row_of[vtx - size]
                    if i >= first_row:
                        w = i
                        if index[w] == -1:
                            index[w] = counter
                            low[w] = counter
                            counter += 1
                            stack[sp] = w
                            sp += 1
                            on_stack[w] = 1
                            wv[wsp] = w
                            wp[wsp] = indptr[w]
                            wsp += 1
                            advanced = True
                        elif on_stack[w] and index[w] < low[vtx]:
                            low[vtx] = index[w]
            if advanced:
                continue
            wsp -= 1
            if wsp > 0:
                if low[vtx] < low[wv[wsp - 1]]:
                    low[wv[wsp - 1]] = low[vtx]
            if low[vtx] == index[vtx]:
                while True:
                    w = stack[sp - 1]
                    sp -= 1
                    on_stack[w] = 0
                    comp[w] = n_comp
                    if w == vtx:
                        break
                n_comp += 1
    return 0


cdef int _rotate(long long[::1] indptr, long long[::1] tcols,
                 long long[::1] row_of, long long[::1] col_of,
                 unsigned char[::1] fixed_col,
                 Py_ssize_t size, Py_ssize_t r, Py_ssize_t c) except -1:
    """Re-match row ``r`` to tight column ``c`` along an alternating cycle
    found by BFS from ``c`` back to ``r`` in the residual digraph."""
    cdef Py_ssize_t i, j, k, nxt, qhead, qtail, j_next
    prev_row_arr = np.full(size, -1, dtype=np.int64)   # column -> row whose unmatched edge reached it
    prev_col_arr = np.full(size, -1, dtype=np.int64)   # row -> column whose matched edge reached it
    queue_arr = np.empty(size, dtype=np.int64)
    cdef long long[::1] prev_row = prev_row_arr, prev_col = prev_col_arr
    cdef long long[::1] queue = queue_arr
    cdef bint found

    i = row_of[c]
    prev_col[i] = c
    found = i == r
    queue[0] = i
    qhead = 0
    qtail = 1
    while qhead < qtail and not found:
        i = queue[qhead]
        qhead += 1
        for k in range(indptr[i], indptr[i + 1]):
            j = tcols[k]
            if j == col_of[i] or fixed_col[j] or prev_row[j] != -1:
                continue
            prev_row[j] = i
            nxt = row_of[j]
            if prev_col[nxt] != -1:
                continue
            prev_col[nxt] = j
            if nxt == r:
                found = True
                break
            queue[qtail] = nxt
            qtail += 1
    if not found:
        raise RuntimeError("alternating cycle vanished during refinement")
    # Flip the cycle: r takes c; every other row on the path takes the
    # column it reached and abandons the one it was reached through.
    j = prev_col[r]
    col_of[r] = c
    row_of[c] = r
    while j != c:
        i = prev_row[j]
        j_next = prev_col[i]
        col_of[i] = j
        row_of[j] = i
        j = j_next
    return 0
